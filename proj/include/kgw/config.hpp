#ifndef KGW_CONFIG_HPP
#define KGW_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgw/fluctuations.hpp"
#include "kgw/gaussian.hpp"
#include "kgw/states.hpp"

namespace kgw {

// Recipe for a set of field modes; realized against a lattice at run time.
struct ModeSource {
    enum class Kind { File, GaussianProfile, Point, Indicator };
    Kind kind = Kind::Point;
    std::string file;                         // Kind::File
    std::array<double, 4> center{};           // Kind::GaussianProfile
    double profile_width = 0.5;               // Kind::GaussianProfile
    std::size_t point_index = 0;              // Kind::Point
};

FieldModes realize_modes(const ModeSource& source, const MomentumLattice& lattice,
                         const std::string& base_dir);

struct StateConfig {
    std::string type = "vacuum";
    ModeSource g, g1, g2;
    Complex u{1.0, 0.0}, v{0.0, 0.0};
    Complex c1{1.0, 0.0}, c2{0.0, 0.0};
    std::vector<std::pair<double, ModeSource>> components;
    double kT = 1.0;
    FourMomentum frame{1.0, 0.0, 0.0, 0.0};
};

StateSpec make_state(const StateConfig& config, const MomentumLattice& lattice,
                     const std::string& base_dir);

struct SpatialConfig {
    int dimension = 1;
    int sites = 64;
    double spacing = 0.2;
    bool periodic = true;
    double kT = 1.0;

    SpatialLattice lattice() const { return {dimension, sites, spacing, periodic}; }
};

struct BesselTaskConfig {
    bool enabled = false;
    std::vector<double> r_values = {0.5, 1.0, 2.0, 3.0};
    std::vector<double> epsilons; // empty selects the per-r default sequence
};

struct ProbeTaskConfig {
    std::vector<double> widths = {0.4, 0.2, 0.1, 0.05};
    double spacing = 0.005;
    std::string profile = "gaussian"; // gaussian | indicator | off-window
};

struct WignerTaskConfig {
    std::vector<Complex> amplitudes = {};
    WignerGridSpec grid;
};

struct TaskConfig {
    std::uint64_t seed = 20260809;
    std::size_t samples = 20000;
    ScanGrid scan;
    SpatialConfig spatial;
    BesselTaskConfig bessel;
    ProbeTaskConfig probe;
    WignerTaskConfig wigner;
    std::map<std::string, double> tolerance_overrides;
};

struct OutputConfig {
    std::string directory = "out";
    std::string format = "csv"; // csv | json
};

struct RunConfig {
    int schema_version = 1;
    double hbar = 1.0;
    double mass = 1.0;
    double delta = 0.5;
    double cutoff = 3.0;
    WindowShape window_shape = WindowShape::TopHat;
    int dimension = 1;
    std::array<double, 4> spacing = {0.25, 0.25, 0.25, 0.25};
    StateConfig state;
    TaskConfig task;
    OutputConfig output;
    std::string base_dir = "."; // directory of the config file; resolves relative paths

    LatticeConfig lattice_config() const;
};

// Parses and validates the JSON configuration document; every violated
// numeric bound throws ConfigError before any computation runs.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& text, const std::string& base_dir);

} // namespace kgw

#endif
