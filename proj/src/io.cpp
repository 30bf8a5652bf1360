#include "kgw/io.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace kgw {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& text, const std::string& path, std::size_t line) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &consumed);
    } catch (const std::exception&) {
        throw CsvParseError(path, line, "not a number: '" + text + "'");
    }
    while (consumed < text.size() && std::isspace(static_cast<unsigned char>(text[consumed])))
        ++consumed;
    if (consumed != text.size())
        throw CsvParseError(path, line, "trailing characters in number: '" + text + "'");
    return value;
}

using GridKey = std::array<long, 4>;

GridKey quantize(const FourMomentum& k, const std::array<double, 4>& spacing) {
    return {std::lround(k.k0 / spacing[0]), std::lround(k.k1 / spacing[1]),
            std::lround(k.k2 / spacing[2]), std::lround(k.k3 / spacing[3])};
}

} // namespace

FieldModes load_field_modes_csv(const std::string& path, const MomentumLattice& lattice) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open field-mode file '" + path + "'");

    std::map<GridKey, std::size_t> index;
    for (std::size_t i = 0; i < lattice.size(); ++i)
        index.emplace(quantize(lattice.point(i), lattice.spacing()), i);

    FieldModes modes(lattice);
    std::vector<bool> seen(lattice.size(), false);

    std::string line;
    std::size_t line_number = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "k0,k1,k2,k3,re,im")
                throw CsvParseError(path, line_number,
                                    "expected header 'k0,k1,k2,k3,re,im', got '" + line + "'");
            header_seen = true;
            continue;
        }
        const auto fields = split_csv_row(line);
        if (fields.size() != 6)
            throw CsvParseError(path, line_number,
                                "expected 6 fields, got " + std::to_string(fields.size()));
        FourMomentum k;
        k.k0 = parse_double(fields[0], path, line_number);
        k.k1 = parse_double(fields[1], path, line_number);
        k.k2 = parse_double(fields[2], path, line_number);
        k.k3 = parse_double(fields[3], path, line_number);
        const double re = parse_double(fields[4], path, line_number);
        const double im = parse_double(fields[5], path, line_number);

        const auto it = index.find(quantize(k, lattice.spacing()));
        const auto matches = [&](const FourMomentum& p) {
            const double tol = 1e-9;
            return std::abs(p.k0 - k.k0) <= tol * std::max(1.0, std::abs(p.k0)) &&
                   std::abs(p.k1 - k.k1) <= tol * std::max(1.0, std::abs(p.k1)) &&
                   std::abs(p.k2 - k.k2) <= tol * std::max(1.0, std::abs(p.k2)) &&
                   std::abs(p.k3 - k.k3) <= tol * std::max(1.0, std::abs(p.k3));
        };
        if (it == index.end() || !matches(lattice.point(it->second)))
            throw OffShellSupport("row " + std::to_string(line_number) + " of '" + path +
                                  "' carries a momentum outside the lattice window support");
        if (seen[it->second])
            throw CsvParseError(path, line_number, "duplicate row for a lattice point");
        seen[it->second] = true;
        modes.values[it->second] = Complex(re, im);
    }
    if (!header_seen) throw CsvParseError(path, 1, "missing header 'k0,k1,k2,k3,re,im'");
    return modes;
}

void save_field_modes_csv(const std::string& path, const FieldModes& modes) {
    if (modes.lattice == nullptr) throw ConfigError("field modes are not attached to a lattice");
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write field-mode file '" + path + "'");
    out << "k0,k1,k2,k3,re,im\n";
    const auto& lat = *modes.lattice;
    for (std::size_t i = 0; i < lat.size(); ++i) {
        const Complex v = modes.values[i];
        if (v == Complex(0.0, 0.0)) continue;
        const FourMomentum& k = lat.point(i);
        out << format_double(k.k0) << ',' << format_double(k.k1) << ',' << format_double(k.k2)
            << ',' << format_double(k.k3) << ',' << format_double(v.real()) << ','
            << format_double(v.imag()) << '\n';
    }
}

} // namespace kgw
