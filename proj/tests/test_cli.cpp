#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kgw/cli.hpp"
#include "kgw/config.hpp"
#include "kgw/io.hpp"

using namespace kgw;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path test_root() {
    static const fs::path root = [] {
        fs::path p = fs::temp_directory_path() / "kgw_cli_tests";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return root;
}

fs::path write_file(const std::string& name, const std::string& content) {
    const fs::path path = test_root() / name;
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    out << content;
    return path;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string base_config(const std::string& state, const std::string& extra_task = "") {
    return std::string("{\n")
        + "  \"schemaVersion\": 1,\n"
        + "  \"physics\": {\"hbar\": 1.0, \"mass\": 1.0, \"delta\": 0.5, \"lambdaCutoff\": 3.0, "
          "\"windowShape\": \"top-hat\"},\n"
        + "  \"lattice\": {\"dimension\": 1, \"spacing\": 0.25},\n"
        + "  \"state\": " + state + ",\n"
        + "  \"task\": {\"seed\": 4242, \"samples\": 2000" + extra_task + "},\n"
        + "  \"output\": {\"directory\": \"out\", \"format\": \"csv\"}\n"
        + "}\n";
}

int run(std::initializer_list<std::string> args) { return run_cli(std::vector<std::string>(args)); }

} // namespace

TEST_CASE("config parsing and validation") {
    CHECK_THROWS_AS(parse_run_config("not json", "."), ConfigError);
    CHECK_THROWS_AS(parse_run_config("{}", "."), ConfigError); // missing schemaVersion
    CHECK_THROWS_AS(parse_run_config(R"({"schemaVersion": 2})", "."), ConfigError);
    CHECK_THROWS_AS(
        parse_run_config(R"({"schemaVersion": 1, "physics": {"mass": -1.0}})", "."), ConfigError);
    CHECK_THROWS_AS(
        parse_run_config(R"({"schemaVersion": 1, "task": {"spatial": {"sites": 4}}})", "."),
        ConfigError);
    CHECK_THROWS_AS(
        parse_run_config(
            R"({"schemaVersion": 1, "state": {"type": "thermal", "kT": 1.0, "frame": [2,0,0,0]}})",
            "."),
        ConfigError);

    const RunConfig config = parse_run_config(base_config("{\"type\": \"vacuum\"}"), ".");
    CHECK(config.mass == 1.0);
    CHECK(config.task.seed == 4242);
    CHECK(config.output.format == "csv");
}

TEST_CASE("field-mode CSV loader contract") {
    const MomentumLattice lattice = build_shell_lattice(
        parse_run_config(base_config("{\"type\": \"vacuum\"}"), ".").lattice_config());

    const fs::path good = write_file(
        "modes_good.csv", "k0,k1,k2,k3,re,im\n" + format_double(lattice.point(0).k0) + ',' +
                              format_double(lattice.point(0).k1) + ",0,0,0.5,-0.25\n");
    const FieldModes modes = load_field_modes_csv(good.string(), lattice);
    CHECK(modes.values[0] == Complex(0.5, -0.25));

    const fs::path bad_number =
        write_file("modes_bad.csv", "k0,k1,k2,k3,re,im\n1.0,0.25,0,0,zzz,0\n");
    try {
        load_field_modes_csv(bad_number.string(), lattice);
        FAIL("expected CsvParseError");
    } catch (const CsvParseError& e) {
        CHECK(e.line_number == 2);
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }

    const fs::path off_lattice =
        write_file("modes_off.csv", "k0,k1,k2,k3,re,im\n0.5,0,0,0,1.0,0\n");
    CHECK_THROWS_AS(load_field_modes_csv(off_lattice.string(), lattice), OffShellSupport);

    const fs::path bad_header = write_file("modes_header.csv", "a,b,c\n");
    CHECK_THROWS_AS(load_field_modes_csv(bad_header.string(), lattice), CsvParseError);

    // Round trip through the writer.
    FieldModes out(lattice);
    out.values[2] = Complex(1.25, -2.5);
    const fs::path round = test_root() / "modes_round.csv";
    save_field_modes_csv(round.string(), out);
    const FieldModes in = load_field_modes_csv(round.string(), lattice);
    CHECK(in.values[2] == out.values[2]);
}

TEST_CASE("eval command: vacuum and one-particle records") {
    const fs::path config = write_file("eval/config.json", base_config("{\"type\": \"vacuum\"}"));
    write_file("eval/zero.csv", "k0,k1,k2,k3,re,im\n");

    CHECK(run({"eval", "--config", config.string(), "zero.csv"}) == 0);
    const std::string csv = read_file(test_root() / "eval/out/eval.csv");
    CHECK(csv.find("zero.csv,1,0,1,0\n") != std::string::npos);

    const fs::path one = write_file(
        "eval_one/config.json",
        base_config("{\"type\": \"one-particle\", \"g\": {\"profile\": {\"type\": \"point\", "
                    "\"index\": 0}}}"));
    write_file("eval_one/zero.csv", "k0,k1,k2,k3,re,im\n");
    CHECK(run({"eval", "--config", one.string(), "zero.csv"}) == 0);
    const std::string one_csv = read_file(test_root() / "eval_one/out/eval.csv");
    // Second column is the prefactor; assert it is negative.
    std::istringstream lines(one_csv);
    std::string header, record;
    std::getline(lines, header);
    std::getline(lines, record);
    CHECK(record.find("zero.csv,-") != std::string::npos);
}

TEST_CASE("eval command exit codes for malformed and off-shell input") {
    const fs::path config =
        write_file("eval_err/config.json", base_config("{\"type\": \"vacuum\"}"));
    write_file("eval_err/bad.csv", "k0,k1,k2,k3,re,im\n1.0,0.25,0,0\n"); // 4 fields
    CHECK(run({"eval", "--config", config.string(), "bad.csv"}) == 2);

    write_file("eval_err/off.csv", "k0,k1,k2,k3,re,im\n0.5,0,0,0,1,0\n");
    CHECK(run({"eval", "--config", config.string(), "off.csv"}) == 3);

    CHECK(run({"eval", "--config", (test_root() / "eval_err/none.json").string(), "bad.csv"}) ==
          2);
}

TEST_CASE("eval emits JSON records when configured") {
    std::string config_text = base_config("{\"type\": \"vacuum\"}");
    const std::size_t pos = config_text.find("\"format\": \"csv\"");
    REQUIRE(pos != std::string::npos);
    config_text.replace(pos, 15, "\"format\": \"json\"");
    const fs::path config = write_file("eval_json/config.json", config_text);
    write_file("eval_json/zero.csv", "k0,k1,k2,k3,re,im\n");
    CHECK(run({"eval", "--config", config.string(), "zero.csv"}) == 0);
    const json records = json::parse(read_file(test_root() / "eval_json/out/eval.json"));
    CHECK(records.at("schemaVersion") == 1);
    CHECK(records.at("records")[0].at("prefactor").get<double>() == 1.0);
    CHECK(records.at("records")[0].at("exponent").get<double>() == 0.0);
    CHECK(records.at("records")[0].at("valueSign").get<int>() == 1);
}

TEST_CASE("eval reruns are byte-identical") {
    const fs::path config = write_file("eval_det/config.json", base_config("{\"type\": \"vacuum\"}"));
    write_file("eval_det/zero.csv", "k0,k1,k2,k3,re,im\n");
    CHECK(run({"eval", "--config", config.string(), "zero.csv"}) == 0);
    const std::string first = read_file(test_root() / "eval_det/out/eval.csv");
    CHECK(run({"eval", "--config", config.string(), "zero.csv"}) == 0);
    CHECK(read_file(test_root() / "eval_det/out/eval.csv") == first);
}

TEST_CASE("scan command verdicts") {
    const fs::path one = write_file(
        "scan_one/config.json",
        base_config("{\"type\": \"one-particle\", \"g\": {\"profile\": {\"type\": \"point\", "
                    "\"index\": 0}}}"));
    CHECK(run({"scan", "--config", one.string()}) == 0);
    const json one_summary = json::parse(read_file(test_root() / "scan_one/out/scan.json"));
    CHECK(one_summary.at("verdict") == "negativity-found");
    CHECK(one_summary.at("witnessAlpha").get<double>() == 0.0);
    CHECK(one_summary.at("witnessBeta").get<double>() == 0.0);

    const fs::path coherent = write_file(
        "scan_coh/config.json",
        base_config("{\"type\": \"coherent\", \"g\": {\"profile\": {\"type\": \"indicator\"}}}"));
    CHECK(run({"scan", "--config", coherent.string()}) == 0);
    CHECK(json::parse(read_file(test_root() / "scan_coh/out/scan.json")).at("verdict") ==
          "none-found");

    const fs::path super = write_file(
        "scan_sc/config.json",
        base_config("{\"type\": \"coherent-superposition\", "
                    "\"c1\": 1.0, \"g1\": {\"profile\": {\"type\": \"point\", \"index\": 0}}, "
                    "\"c2\": -1.0, \"g2\": {\"profile\": {\"type\": \"point\", \"index\": 1}}}"));
    CHECK(run({"scan", "--config", super.string()}) == 0);
    CHECK(json::parse(read_file(test_root() / "scan_sc/out/scan.json")).at("verdict") ==
          "negativity-found");
}

TEST_CASE("fluct command writes the audit files deterministically") {
    const std::string task =
        ", \"spatial\": {\"dimension\": 1, \"sites\": 32, \"spacing\": 0.2, \"kT\": 1.0}";
    const fs::path config =
        write_file("fluct/config.json", base_config("{\"type\": \"vacuum\"}", task));

    CHECK(run({"fluct", "--config", config.string()}) == 0);
    const fs::path out = test_root() / "fluct/out";
    CHECK(fs::exists(out / "sampling.csv"));
    CHECK(fs::exists(out / "locality_classical.csv"));
    CHECK(fs::exists(out / "locality_quantum.csv"));
    CHECK(fs::exists(out / "kernels.csv"));
    CHECK_FALSE(fs::exists(out / "bessel.csv")); // not enabled

    const json summary = json::parse(read_file(out / "fluct.json"));
    CHECK(summary.at("locality").at("classicalVerdict") == "banded");
    const std::string quantum_verdict = summary.at("locality").at("quantumVerdict");
    CHECK(quantum_verdict.find("exponential") == 0);
    CHECK(std::abs(summary.at("locality").at("quantumDecayRate").get<double>() - 1.0) < 0.25);

    const std::string sampling = read_file(out / "sampling.csv");
    CHECK(run({"fluct", "--config", config.string()}) == 0);
    CHECK(read_file(out / "sampling.csv") == sampling); // byte-identical rerun
}

TEST_CASE("fluct command runs the bessel comparison when enabled") {
    const std::string task =
        ", \"spatial\": {\"dimension\": 3, \"sites\": 8, \"spacing\": 0.3, \"kT\": 1.0}"
        ", \"bessel\": {\"enabled\": true, \"rValues\": [1.0]}";
    const fs::path config =
        write_file("fluct_b/config.json", base_config("{\"type\": \"vacuum\"}", task));
    CHECK(run({"fluct", "--config", config.string(), "--task", "bessel"}) == 0);
    const fs::path out = test_root() / "fluct_b/out";
    REQUIRE(fs::exists(out / "bessel.csv"));
    const json summary = json::parse(read_file(out / "fluct.json"));
    CHECK(summary.at("bessel").at("maxRelativeError").get<double>() < 0.05);
}

TEST_CASE("probe command") {
    const std::string task = ", \"probe\": {\"deltas\": [0.4, 0.2], \"spacing\": 0.02}";
    const fs::path config =
        write_file("probe/config.json", base_config("{\"type\": \"vacuum\"}", task));
    CHECK(run({"probe", "--config", config.string()}) == 0);
    const json summary = json::parse(read_file(test_root() / "probe/out/probe.json"));
    CHECK(summary.at("divergenceFlagged").get<bool>());
    CHECK(fs::exists(test_root() / "probe/out/probe.csv"));

    // Off-window profile: exponent identically zero, divergence still flagged,
    // no power to fit.
    const std::string off_task =
        ", \"probe\": {\"deltas\": [0.4, 0.2], \"spacing\": 0.02, \"profile\": \"off-window\"}";
    const fs::path off_config =
        write_file("probe_off/config.json", base_config("{\"type\": \"vacuum\"}", off_task));
    CHECK(run({"probe", "--config", off_config.string()}) == 0);
    const json off = json::parse(read_file(test_root() / "probe_off/out/probe.json"));
    CHECK(off.at("divergenceFlagged").get<bool>());
    CHECK(off.at("fittedPower").is_null()); // NaN serializes as null
}

TEST_CASE("eval handles several mode files in order") {
    const fs::path config =
        write_file("eval_multi/config.json", base_config("{\"type\": \"vacuum\"}"));
    write_file("eval_multi/a.csv", "k0,k1,k2,k3,re,im\n");
    write_file("eval_multi/b.csv", "k0,k1,k2,k3,re,im\n");
    CHECK(run({"eval", "--config", config.string(), "a.csv", "b.csv"}) == 0);
    const std::string csv = read_file(test_root() / "eval_multi/out/eval.csv");
    const std::size_t first = csv.find("a.csv,");
    const std::size_t second = csv.find("b.csv,");
    CHECK(first != std::string::npos);
    CHECK(second != std::string::npos);
    CHECK(first < second);
}

TEST_CASE("oracles command passes by default and honors overrides") {
    const fs::path config =
        write_file("oracles/config.json", base_config("{\"type\": \"vacuum\"}"));
    CHECK(run({"oracles", "--config", config.string()}) == 0);
    const json summary = json::parse(read_file(test_root() / "oracles/out/oracles.json"));
    CHECK(summary.at("allPass").get<bool>());

    bool found_adjudication = false;
    for (const auto& check : summary.at("checks"))
        if (check.at("name") == "thermal-candidate-rejection") {
            found_adjudication = true;
            CHECK(check.at("note").get<std::string>().find("tanh(lambda alpha / 2)") !=
                  std::string::npos);
            CHECK(check.at("pass").get<bool>());
        }
    CHECK(found_adjudication);

    const std::string corrupted =
        ", \"toleranceOverrides\": {\"appb-1d-normalization\": 1e-30}";
    const fs::path bad =
        write_file("oracles_bad/config.json", base_config("{\"type\": \"vacuum\"}", corrupted));
    CHECK(run({"oracles", "--config", bad.string(), "--task", "appb"}) == 1);
    const json bad_summary = json::parse(read_file(test_root() / "oracles_bad/out/oracles.json"));
    CHECK_FALSE(bad_summary.at("allPass").get<bool>());
    for (const auto& check : bad_summary.at("checks"))
        if (check.at("name") == "appb-1d-normalization") {
            CHECK_FALSE(check.at("pass").get<bool>());
            CHECK(check.at("measured").get<double>() > 0.0);
        }
}

TEST_CASE("wigner command dumps a grid") {
    const std::string task =
        ", \"wigner\": {\"amplitudes\": [1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0], \"freqPoints\": 25, "
        "\"freqHalfWidth\": 3.0, \"phasePoints\": 21, \"phaseHalfWidth\": 3.0}";
    const fs::path config =
        write_file("wigner/config.json", base_config("{\"type\": \"vacuum\"}", task));
    CHECK(run({"wigner", "--config", config.string()}) == 0);
    const std::string csv = read_file(test_root() / "wigner/out/wigner.csv");
    CHECK(csv.find("x,p,value\n") == 0);
    CHECK(csv.find("nan") == std::string::npos);
}

TEST_CASE("unknown task names are configuration errors") {
    const fs::path config =
        write_file("tasks/config.json", base_config("{\"type\": \"vacuum\"}"));
    CHECK(run({"fluct", "--config", config.string(), "--task", "bogus"}) == 2);
    CHECK(run({"oracles", "--config", config.string(), "--task", "bogus"}) == 2);
}

TEST_CASE("seed and out-dir overrides") {
    const fs::path config =
        write_file("overrides/config.json", base_config("{\"type\": \"vacuum\"}"));
    write_file("overrides/zero.csv", "k0,k1,k2,k3,re,im\n");
    CHECK(run({"eval", "--config", config.string(), "--out", "elsewhere", "zero.csv"}) == 0);
    CHECK(fs::exists(test_root() / "overrides/elsewhere/eval.csv"));
}
