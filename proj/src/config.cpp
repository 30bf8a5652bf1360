#include "kgw/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kgw/io.hpp"

namespace kgw {

using nlohmann::json;

namespace {

Complex parse_complex(const json& j, const std::string& what) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    throw ConfigError(what + " must be a number or [re, im]");
}

double require_positive(const json& j, const std::string& what) {
    if (!j.is_number()) throw ConfigError(what + " must be a number");
    const double v = j.get<double>();
    if (!(v > 0.0)) throw ConfigError(what + " must be positive");
    return v;
}

ModeSource parse_mode_source(const json& j, const std::string& what) {
    ModeSource source;
    if (j.is_object() && j.contains("file")) {
        source.kind = ModeSource::Kind::File;
        source.file = j.at("file").get<std::string>();
        return source;
    }
    if (!j.is_object() || !j.contains("profile"))
        throw ConfigError(what + " must carry either a 'file' or a 'profile'");
    const json& p = j.at("profile");
    const std::string type = p.at("type").get<std::string>();
    if (type == "gaussian") {
        source.kind = ModeSource::Kind::GaussianProfile;
        if (p.contains("center")) {
            const auto c = p.at("center").get<std::vector<double>>();
            if (c.size() != 4) throw ConfigError(what + ".profile.center must have 4 components");
            source.center = {c[0], c[1], c[2], c[3]};
        }
        if (p.contains("width"))
            source.profile_width = require_positive(p.at("width"), what + ".profile.width");
    } else if (type == "point") {
        source.kind = ModeSource::Kind::Point;
        source.point_index = p.at("index").get<std::size_t>();
    } else if (type == "indicator") {
        source.kind = ModeSource::Kind::Indicator;
    } else {
        throw ConfigError(what + ".profile.type must be gaussian, point, or indicator");
    }
    return source;
}

StateConfig parse_state(const json& j) {
    StateConfig state;
    state.type = j.value("type", "vacuum");
    const auto mode = [&](const char* key) { return parse_mode_source(j.at(key), key); };
    if (state.type == "vacuum") {
    } else if (state.type == "one-particle") {
        state.g = mode("g");
    } else if (state.type == "vacuum-one") {
        state.g = mode("g");
        state.u = parse_complex(j.at("u"), "state.u");
        state.v = parse_complex(j.at("v"), "state.v");
        if (std::abs(state.u) + std::abs(state.v) == 0.0)
            throw ConfigError("vacuum-one state needs |u| + |v| > 0");
    } else if (state.type == "two-particle") {
        state.g1 = mode("g1");
        state.g2 = mode("g2");
    } else if (state.type == "coherent") {
        state.g = mode("g");
    } else if (state.type == "coherent-mixture") {
        double total = 0.0;
        for (const auto& c : j.at("components")) {
            const double weight = c.at("weight").get<double>();
            if (weight < 0.0) throw ConfigError("mixture weights must be nonnegative");
            total += weight;
            state.components.emplace_back(weight, parse_mode_source(c.at("g"), "component.g"));
        }
        if (state.components.empty()) throw ConfigError("coherent-mixture needs components");
        if (std::abs(total - 1.0) > 1e-12)
            throw ConfigError("mixture weights must sum to 1 (got " + std::to_string(total) + ")");
    } else if (state.type == "coherent-superposition") {
        state.g1 = mode("g1");
        state.g2 = mode("g2");
        state.c1 = parse_complex(j.at("c1"), "state.c1");
        state.c2 = parse_complex(j.at("c2"), "state.c2");
        if (std::abs(state.c1) + std::abs(state.c2) == 0.0)
            throw ConfigError("coherent-superposition needs |c1| + |c2| > 0");
    } else if (state.type == "thermal") {
        state.kT = require_positive(j.at("kT"), "state.kT");
        if (j.contains("frame")) {
            const auto f = j.at("frame").get<std::vector<double>>();
            if (f.size() != 4) throw ConfigError("state.frame must have 4 components");
            state.frame = {f[0], f[1], f[2], f[3]};
        }
        if (std::abs(minkowski_square(state.frame) - 1.0) > 1e-12 || !(state.frame.k0 > 0.0))
            throw ConfigError("state.frame must be unit forward timelike");
    } else {
        throw ConfigError("unknown state type '" + state.type + "'");
    }
    return state;
}

} // namespace

FieldModes realize_modes(const ModeSource& source, const MomentumLattice& lattice,
                         const std::string& base_dir) {
    switch (source.kind) {
        case ModeSource::Kind::File: {
            std::filesystem::path p(source.file);
            if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
            return load_field_modes_csv(p.string(), lattice);
        }
        case ModeSource::Kind::GaussianProfile: {
            FieldModes modes(lattice);
            const double w2 = source.profile_width * source.profile_width;
            for (std::size_t i = 0; i < lattice.size(); ++i) {
                const FourMomentum& k = lattice.point(i);
                const double d0 = k.k0 - source.center[0];
                const double d1 = k.k1 - source.center[1];
                const double d2 = k.k2 - source.center[2];
                const double d3 = k.k3 - source.center[3];
                modes.values[i] =
                    std::exp(-(d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3) / (2.0 * w2));
            }
            return modes;
        }
        case ModeSource::Kind::Point: {
            if (source.point_index >= lattice.size())
                throw ConfigError("mode point index " + std::to_string(source.point_index) +
                                  " is outside the lattice (size " +
                                  std::to_string(lattice.size()) + ")");
            FieldModes modes(lattice);
            modes.values[source.point_index] = 1.0;
            return modes;
        }
        case ModeSource::Kind::Indicator: {
            FieldModes modes(lattice);
            for (std::size_t i = 0; i < lattice.size(); ++i)
                modes.values[i] = lattice.window_at(i) > 0.0 ? 1.0 : 0.0;
            return modes;
        }
    }
    throw ConfigError("unreachable mode source kind");
}

StateSpec make_state(const StateConfig& config, const MomentumLattice& lattice,
                     const std::string& base_dir) {
    const auto realize = [&](const ModeSource& s) { return realize_modes(s, lattice, base_dir); };
    if (config.type == "vacuum") return Vacuum{};
    if (config.type == "one-particle") return OneParticle{realize(config.g)};
    if (config.type == "vacuum-one")
        return VacuumOneSuperposition{config.u, config.v, realize(config.g)};
    if (config.type == "two-particle") return TwoParticle{realize(config.g1), realize(config.g2)};
    if (config.type == "coherent") return Coherent{realize(config.g)};
    if (config.type == "coherent-mixture") {
        CoherentMixture mixture;
        for (const auto& [weight, source] : config.components)
            mixture.components.emplace_back(weight, realize(source));
        return mixture;
    }
    if (config.type == "coherent-superposition")
        return CoherentSuperposition{config.c1, realize(config.g1), config.c2, realize(config.g2)};
    if (config.type == "thermal") return Thermal{config.kT, config.frame};
    throw ConfigError("unknown state type '" + config.type + "'");
}

LatticeConfig RunConfig::lattice_config() const {
    LatticeConfig lc;
    lc.mass = mass;
    lc.width = delta;
    lc.cutoff = cutoff;
    lc.dimension = dimension;
    lc.spacing = spacing;
    lc.shape = window_shape;
    lc.hbar = hbar;
    return lc;
}

RunConfig parse_run_config(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    RunConfig config;
    config.base_dir = base_dir;
    try {
        if (!j.contains("schemaVersion")) throw ConfigError("config is missing schemaVersion");
        config.schema_version = j.at("schemaVersion").get<int>();
        if (config.schema_version != 1)
            throw ConfigError("unsupported schemaVersion " +
                              std::to_string(config.schema_version));

        if (j.contains("physics")) {
            const json& p = j.at("physics");
            if (p.contains("hbar")) config.hbar = require_positive(p.at("hbar"), "physics.hbar");
            if (p.contains("mass")) config.mass = require_positive(p.at("mass"), "physics.mass");
            if (p.contains("delta")) config.delta = require_positive(p.at("delta"), "physics.delta");
            if (p.contains("lambdaCutoff"))
                config.cutoff = require_positive(p.at("lambdaCutoff"), "physics.lambdaCutoff");
            if (p.contains("windowShape"))
                config.window_shape = window_shape_from_string(p.at("windowShape"));
        }

        if (j.contains("lattice")) {
            const json& l = j.at("lattice");
            if (l.contains("dimension")) config.dimension = l.at("dimension").get<int>();
            if (config.dimension < 1 || config.dimension > 3)
                throw ConfigError("lattice.dimension must be 1, 2, or 3");
            if (l.contains("spacing")) {
                const json& s = l.at("spacing");
                if (s.is_number()) {
                    const double h = require_positive(s, "lattice.spacing");
                    config.spacing = {h, h, h, h};
                } else if (s.is_array() && s.size() == static_cast<std::size_t>(config.dimension) + 1) {
                    for (std::size_t i = 0; i < s.size(); ++i)
                        config.spacing[i] = require_positive(s[i], "lattice.spacing[]");
                } else {
                    throw ConfigError("lattice.spacing must be a number or a (1+d)-array");
                }
            }
        }

        if (j.contains("state")) config.state = parse_state(j.at("state"));

        if (j.contains("task")) {
            const json& t = j.at("task");
            if (t.contains("seed")) config.task.seed = t.at("seed").get<std::uint64_t>();
            if (t.contains("samples")) {
                config.task.samples = t.at("samples").get<std::size_t>();
                if (config.task.samples < 1) throw ConfigError("task.samples must be >= 1");
            }
            if (t.contains("scan")) {
                const json& s = t.at("scan");
                if (s.contains("points")) config.task.scan.points = s.at("points").get<int>();
                if (s.contains("range"))
                    config.task.scan.range = require_positive(s.at("range"), "task.scan.range");
                if (config.task.scan.points < 2) throw ConfigError("task.scan.points must be >= 2");
            }
            if (t.contains("spatial")) {
                const json& s = t.at("spatial");
                auto& sp = config.task.spatial;
                if (s.contains("dimension")) sp.dimension = s.at("dimension").get<int>();
                if (s.contains("sites")) sp.sites = s.at("sites").get<int>();
                if (s.contains("spacing"))
                    sp.spacing = require_positive(s.at("spacing"), "task.spatial.spacing");
                if (s.contains("periodic")) sp.periodic = s.at("periodic").get<bool>();
                if (s.contains("kT")) sp.kT = require_positive(s.at("kT"), "task.spatial.kT");
                if (sp.dimension < 1 || sp.dimension > 3)
                    throw ConfigError("task.spatial.dimension must be 1, 2, or 3");
                if (sp.sites < 8) throw ConfigError("task.spatial.sites must be >= 8 per axis");
            }
            if (t.contains("bessel")) {
                const json& b = t.at("bessel");
                auto& bc = config.task.bessel;
                if (b.contains("enabled")) bc.enabled = b.at("enabled").get<bool>();
                if (b.contains("rValues")) bc.r_values = b.at("rValues").get<std::vector<double>>();
                if (b.contains("epsilons"))
                    bc.epsilons = b.at("epsilons").get<std::vector<double>>();
                if (bc.enabled) {
                    if (config.task.spatial.dimension != 3)
                        throw ConfigError("bessel task requires task.spatial.dimension = 3");
                    for (const double r : bc.r_values)
                        if (!(config.mass * r >= 0.5 && config.mass * r <= 3.0))
                            throw ConfigError("bessel rValues must satisfy 0.5 <= m r <= 3");
                }
            }
            if (t.contains("probe")) {
                const json& p = t.at("probe");
                auto& pc = config.task.probe;
                if (p.contains("deltas")) pc.widths = p.at("deltas").get<std::vector<double>>();
                if (p.contains("spacing"))
                    pc.spacing = require_positive(p.at("spacing"), "task.probe.spacing");
                if (p.contains("profile")) pc.profile = p.at("profile").get<std::string>();
                if (pc.widths.empty()) throw ConfigError("task.probe.deltas must not be empty");
                for (std::size_t i = 0; i < pc.widths.size(); ++i) {
                    if (!(pc.widths[i] > 0.0)) throw ConfigError("task.probe.deltas must be positive");
                    if (i > 0 && !(pc.widths[i] < pc.widths[i - 1]))
                        throw ConfigError("task.probe.deltas must be strictly decreasing");
                }
                if (pc.profile != "gaussian" && pc.profile != "indicator" &&
                    pc.profile != "off-window")
                    throw ConfigError("task.probe.profile must be gaussian, indicator, or off-window");
            }
            if (t.contains("wigner")) {
                const json& w = t.at("wigner");
                auto& wc = config.task.wigner;
                if (w.contains("amplitudes")) {
                    wc.amplitudes.clear();
                    for (const auto& a : w.at("amplitudes"))
                        wc.amplitudes.push_back(parse_complex(a, "task.wigner.amplitudes[]"));
                }
                if (w.contains("freqPoints")) wc.grid.freq_points = w.at("freqPoints").get<int>();
                if (w.contains("freqHalfWidth"))
                    wc.grid.freq_half_width =
                        require_positive(w.at("freqHalfWidth"), "task.wigner.freqHalfWidth");
                if (w.contains("phasePoints"))
                    wc.grid.phase_points = w.at("phasePoints").get<int>();
                if (w.contains("phaseHalfWidth"))
                    wc.grid.phase_half_width =
                        require_positive(w.at("phaseHalfWidth"), "task.wigner.phaseHalfWidth");
                wc.grid.hbar = config.hbar;
                if (wc.grid.freq_points < 3 || wc.grid.phase_points < 3)
                    throw ConfigError("wigner grids need at least 3 points per axis");
            }
            if (t.contains("toleranceOverrides"))
                config.task.tolerance_overrides =
                    t.at("toleranceOverrides").get<std::map<std::string, double>>();
        }

        if (j.contains("output")) {
            const json& o = j.at("output");
            if (o.contains("directory"))
                config.output.directory = o.at("directory").get<std::string>();
            if (o.contains("format")) config.output.format = o.at("format").get<std::string>();
            if (config.output.format != "csv" && config.output.format != "json")
                throw ConfigError("output.format must be csv or json");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string dir = std::filesystem::path(path).parent_path().string();
    return parse_run_config(buffer.str(), dir.empty() ? "." : dir);
}

} // namespace kgw
