#include "kgw/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "kgw/config.hpp"
#include "kgw/io.hpp"
#include "kgw/oracles.hpp"

namespace kgw {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::string task;
};

RunConfig load_config(const CommonOptions& opts) {
    RunConfig config = load_run_config(opts.config_path);
    if (opts.seed) config.task.seed = *opts.seed;
    if (opts.out_dir) config.output.directory = *opts.out_dir;
    return config;
}

fs::path prepare_out_dir(const RunConfig& config) {
    fs::path dir(config.output.directory);
    if (dir.is_relative()) dir = fs::path(config.base_dir) / dir;
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << text;
}

std::string json_dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_eval(const CommonOptions& opts, const std::vector<std::string>& mode_files) {
    const RunConfig config = load_config(opts);
    const fs::path out_dir = prepare_out_dir(config);
    const MomentumLattice lattice = build_shell_lattice(config.lattice_config());
    const StateSpec state = make_state(config.state, lattice, config.base_dir);

    json records = json::array();
    std::string csv = "file,prefactor,exponent,valueSign,logAbsValue\n";
    for (const std::string& file : mode_files) {
        fs::path p(file);
        if (p.is_relative()) p = fs::path(config.base_dir) / p;
        const FieldModes w = load_field_modes_csv(p.string(), lattice);
        const ChiValue value = chi(state, w);
        double log_abs = 0.0;
        const bool has_log = value.log_abs(log_abs);
        json record{{"file", file},
                    {"prefactor", value.prefactor},
                    {"exponent", value.gaussian_exponent},
                    {"valueSign", value.sign()}};
        record["logAbsValue"] = has_log ? json(log_abs) : json(nullptr);
        records.push_back(record);
        csv += file + ',' + format_double(value.prefactor) + ',' +
               format_double(value.gaussian_exponent) + ',' + std::to_string(value.sign()) +
               ',' + (has_log ? format_double(log_abs) : std::string()) + '\n';
    }
    if (config.output.format == "json") {
        write_text(out_dir / "eval.json",
                   json_dump({{"schemaVersion", 1}, {"records", records}}));
        std::cout << "wrote " << (out_dir / "eval.json").string() << "\n";
    } else {
        write_text(out_dir / "eval.csv", csv);
        std::cout << "wrote " << (out_dir / "eval.csv").string() << "\n";
    }
    return 0;
}

int cmd_scan(const CommonOptions& opts) {
    const RunConfig config = load_config(opts);
    const fs::path out_dir = prepare_out_dir(config);
    const MomentumLattice lattice = build_shell_lattice(config.lattice_config());
    const StateSpec state = make_state(config.state, lattice, config.base_dir);

    const NegativityScanResult result = scan_negativity(state, lattice, config.task.scan);
    const json summary{{"schemaVersion", 1},
                       {"state", config.state.type},
                       {"verdict", result.verdict()},
                       {"minPrefactor", result.min_prefactor},
                       {"witnessAlpha", result.alpha},
                       {"witnessBeta", result.beta}};
    write_text(out_dir / "scan.json", json_dump(summary));
    if (config.output.format == "csv") {
        write_text(out_dir / "scan.csv",
                   "state,verdict,minPrefactor,witnessAlpha,witnessBeta\n" + config.state.type +
                       ',' + result.verdict() + ',' + format_double(result.min_prefactor) + ',' +
                       format_double(result.alpha) + ',' + format_double(result.beta) + '\n');
    }
    std::cout << config.state.type << ": " << result.verdict()
              << " (min prefactor " << result.min_prefactor << ")\n";
    return 0;
}

int cmd_fluct(const CommonOptions& opts) {
    const RunConfig config = load_config(opts);
    const fs::path out_dir = prepare_out_dir(config);
    const SpatialLattice spatial = config.task.spatial.lattice();
    spatial.validate(8);

    const bool run_all = opts.task.empty();
    if (!run_all && opts.task != "sampling" && opts.task != "locality" && opts.task != "kernels" &&
        opts.task != "bessel")
        throw ConfigError("unknown fluct task '" + opts.task +
                          "' (expected sampling, locality, kernels, or bessel)");
    const auto wants = [&](const std::string& name) { return run_all || opts.task == name; };
    json summary{{"schemaVersion", 1}};

    if (wants("sampling")) {
        const SpectralKernel kernel = quantum_vacuum_kernel(spatial, config.mass);
        const FieldSampleStats stats =
            sample_fields(kernel, config.hbar, config.task.samples, config.task.seed);
        std::string csv = "mode,sampleVariance,analyticVariance\n";
        double worst = 0.0;
        for (std::size_t i = 0; i < stats.mean_sq.size(); ++i) {
            csv += std::to_string(i) + ',' + format_double(stats.mean_sq[i]) + ',' +
                   format_double(stats.analytic[i]) + '\n';
            worst = std::max(worst, std::abs(stats.mean_sq[i] / stats.analytic[i] - 1.0));
        }
        write_text(out_dir / "sampling.csv", csv);
        summary["sampling"] = {{"samples", config.task.samples},
                               {"seed", config.task.seed},
                               {"maxVarianceDeviation", worst}};
    }

    if (wants("locality") && spatial.dimension == 1) {
        // Lattice dispersion keeps the classical kernel exactly banded.
        const SpectralKernel classical = classical_thermal_kernel(spatial, config.mass, true);
        const SpectralKernel quantum = quantum_vacuum_kernel(spatial, config.mass, true);
        const int fit_hi = std::min(40, spatial.sites / 2);
        const LocalityReport creport = locality_diagnostic(classical, 5, fit_hi);
        const LocalityReport qreport = locality_diagnostic(quantum, 5, fit_hi);
        const auto dump = [&](const LocalityReport& r, const std::string& name) {
            std::string csv = "separation,inverseCovarianceEntry\n";
            for (std::size_t s = 0; s < r.row.size(); ++s)
                csv += std::to_string(s) + ',' + format_double(r.row[s]) + '\n';
            write_text(out_dir / (name + ".csv"), csv);
        };
        dump(creport, "locality_classical");
        dump(qreport, "locality_quantum");
        summary["locality"] = {{"classicalVerdict", creport.verdict()},
                               {"quantumVerdict", qreport.verdict()},
                               {"classicalBeyondNNRatio", creport.beyond_nn_ratio},
                               {"quantumDecayRate", qreport.fitted_decay_rate}};
    }

    if (wants("kernels")) {
        const SpectralKernel quantum = quantum_vacuum_kernel(spatial, config.mass);
        const SpectralKernel classical = classical_thermal_kernel(spatial, config.mass);
        const double kT = config.task.spatial.kT;
        std::string csv = "mode,quantumKernel,classicalKernel,ratio\n";
        for (std::size_t i = 0; i < quantum.coefficients.size(); ++i) {
            const double q = quantum.coefficients[i] / config.hbar;
            const double c = 0.5 * classical.coefficients[i] / kT;
            csv += std::to_string(i) + ',' + format_double(q) + ',' + format_double(c) + ',' +
                   format_double(q / c) + '\n';
        }
        write_text(out_dir / "kernels.csv", csv);
    }

    if (wants("bessel") && config.task.bessel.enabled) {
        const BesselCheckReport report = bessel_kernel_check(
            config.mass, config.task.bessel.r_values, config.task.bessel.epsilons);
        std::string csv = "r,numeric,analytic,relativeError\n";
        for (const auto& row : report.rows)
            csv += format_double(row.r) + ',' + format_double(row.numeric) + ',' +
                   format_double(row.analytic) + ',' + format_double(row.rel_error) + '\n';
        write_text(out_dir / "bessel.csv", csv);
        summary["bessel"] = {{"maxRelativeError", report.max_rel_error}};
    }

    write_text(out_dir / "fluct.json", json_dump(summary));
    std::cout << "wrote " << (out_dir / "fluct.json").string() << "\n";
    return 0;
}

int cmd_probe(const CommonOptions& opts) {
    const RunConfig config = load_config(opts);
    const fs::path out_dir = prepare_out_dir(config);

    SingularProbeConfig probe;
    probe.mass = config.mass;
    probe.cutoff = config.cutoff;
    probe.spacing = config.task.probe.spacing;
    probe.dimension = config.dimension;
    probe.shape = config.window_shape;
    probe.hbar = config.hbar;
    probe.widths = config.task.probe.widths;

    ModeProfile profile;
    const double mass = config.mass;
    if (config.task.probe.profile == "gaussian") {
        profile = [mass](const FourMomentum& k, const ShellWindow&) {
            const double d0 = k.k0 - 1.2 * mass;
            const double d1 = k.k1 - 0.4 * mass;
            return Complex(std::exp(-(d0 * d0 + d1 * d1 + k.k2 * k.k2 + k.k3 * k.k3) /
                                    (2.0 * mass * mass)),
                           0.0);
        };
    } else if (config.task.probe.profile == "indicator") {
        profile = [](const FourMomentum& k, const ShellWindow& window) {
            return Complex(window.value(minkowski_square(k)) > 0.0 ? 1.0 : 0.0, 0.0);
        };
    } else { // off-window
        profile = [](const FourMomentum& k, const ShellWindow& window) {
            return Complex(minkowski_square(k) <= window.support_lo() ? 1.0 : 0.0, 0.0);
        };
    }

    const SingularProbeReport report = sharp_shell_limit_probe(profile, probe);
    std::string csv = "delta,onWindowExponent,offWindowMass,latticePoints\n";
    for (const auto& row : report.rows)
        csv += format_double(row.width) + ',' + format_double(row.on_window_exponent) + ',' +
               format_double(row.off_window_mass) + ',' + std::to_string(row.lattice_points) +
               '\n';
    write_text(out_dir / "probe.csv", csv);
    write_text(out_dir / "probe.json",
               json_dump({{"schemaVersion", 1},
                          {"profile", config.task.probe.profile},
                          {"fittedPower", report.fitted_power},
                          {"divergenceFlagged", report.divergence_flagged}}));
    std::cout << "fitted power " << report.fitted_power << ", divergence "
              << (report.divergence_flagged ? "flagged" : "absent") << "\n";
    return 0;
}

int cmd_oracles(const CommonOptions& opts) {
    const RunConfig config = load_config(opts);
    const fs::path out_dir = prepare_out_dir(config);

    const std::vector<OracleCheck> checks = run_oracle_suites(config, opts.task);
    if (checks.empty())
        throw ConfigError("no oracle check matches task filter '" + opts.task + "'");
    json arr = json::array();
    bool all_pass = true;
    for (const OracleCheck& check : checks) {
        arr.push_back({{"name", check.name},
                       {"measured", check.measured},
                       {"tolerance", check.tolerance},
                       {"comparison", check.flipped ? ">=" : "<="},
                       {"pass", check.pass},
                       {"note", check.note}});
        all_pass = all_pass && check.pass;
        std::cout << (check.pass ? "PASS" : "FAIL") << "  " << check.name << "  measured "
                  << check.measured << (check.flipped ? " >= " : " <= ") << check.tolerance
                  << (check.note.empty() ? "" : "  [" + check.note + "]") << "\n";
    }
    write_text(out_dir / "oracles.json",
               json_dump({{"schemaVersion", 1}, {"allPass", all_pass}, {"checks", arr}}));
    return all_pass ? 0 : 1;
}

int cmd_wigner(const CommonOptions& opts) {
    const RunConfig config = load_config(opts);
    const fs::path out_dir = prepare_out_dir(config);
    if (config.task.wigner.amplitudes.empty())
        throw ConfigError("wigner command needs task.wigner.amplitudes");

    Eigen::VectorXcd amplitudes(static_cast<long>(config.task.wigner.amplitudes.size()));
    for (std::size_t i = 0; i < config.task.wigner.amplitudes.size(); ++i)
        amplitudes[static_cast<long>(i)] = config.task.wigner.amplitudes[i];

    const WignerGrid grid = conventional_wigner_single_mode(amplitudes, config.task.wigner.grid);
    std::string csv = "x,p,value\n";
    for (std::size_t i = 0; i < grid.xs.size(); ++i)
        for (std::size_t j = 0; j < grid.ps.size(); ++j)
            csv += format_double(grid.xs[i]) + ',' + format_double(grid.ps[j]) + ',' +
                   format_double(grid.values(i, j)) + '\n';
    write_text(out_dir / "wigner.csv", csv);
    std::cout << "wrote " << (out_dir / "wigner.csv").string() << "\n";
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"momentum-shell Klein-Gordon field quasidensity toolkit"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::vector<std::string> mode_files;
    std::uint64_t seed_value = 0;
    std::string out_value;
    std::vector<CLI::Option*> seed_opts, out_opts;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "JSON configuration document")
            ->required();
        seed_opts.push_back(cmd->add_option("--seed", seed_value, "override task.seed"));
        out_opts.push_back(cmd->add_option("--out", out_value, "override output.directory"));
        cmd->add_option("--task", opts.task, "restrict to one named task");
    };

    CLI::App* eval = app.add_subcommand("eval", "evaluate chi for field-mode files");
    add_common(eval);
    eval->add_option("modes", mode_files, "field-mode CSV files")->required();
    CLI::App* scan = app.add_subcommand("scan", "scan the prefactor for negativity");
    add_common(scan);
    CLI::App* fluct = app.add_subcommand("fluct", "fluctuation audits and locality reports");
    add_common(fluct);
    CLI::App* probe = app.add_subcommand("probe", "sharp-shell-limit probe");
    add_common(probe);
    CLI::App* oracles = app.add_subcommand("oracles", "run the brute-force cross-check suites");
    add_common(oracles);
    CLI::App* wigner = app.add_subcommand("wigner", "dump a single-mode Wigner grid");
    add_common(wigner);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    for (const CLI::Option* o : seed_opts)
        if (o->count() > 0) opts.seed = seed_value;
    for (const CLI::Option* o : out_opts)
        if (o->count() > 0) opts.out_dir = out_value;

    try {
        if (eval->parsed()) return cmd_eval(opts, mode_files);
        if (scan->parsed()) return cmd_scan(opts);
        if (fluct->parsed()) return cmd_fluct(opts);
        if (probe->parsed()) return cmd_probe(opts);
        if (oracles->parsed()) return cmd_oracles(opts);
        if (wigner->parsed()) return cmd_wigner(opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

} // namespace kgw
