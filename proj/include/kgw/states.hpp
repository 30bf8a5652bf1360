#ifndef KGW_STATES_HPP
#define KGW_STATES_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "kgw/gaussian.hpp"
#include "kgw/lattice.hpp"

namespace kgw {

// Complex Fourier coefficients of a real field, one per lattice point
// (forward-cone modes only; the conjugate modes are implicit).
struct FieldModes {
    const MomentumLattice* lattice = nullptr;
    std::vector<Complex> values;

    FieldModes() = default;
    explicit FieldModes(const MomentumLattice& lat)
        : lattice(&lat), values(lat.size(), Complex(0.0, 0.0)) {}
    FieldModes(const MomentumLattice& lat, std::vector<Complex> vals);

    std::size_t size() const { return values.size(); }
};

FieldModes operator*(Complex a, const FieldModes& f);
FieldModes operator+(const FieldModes& a, const FieldModes& b);

// (f,g) = hbar sum_k weight 2 pi F(k.k) conj(f~) g~  — the windowed inner
// product that fixes the commutator algebra.
Complex inner_product(const FieldModes& f, const FieldModes& g);

// <<g,w>> = sum_k weight conj(g~) w~ — the bare pairing on the window support.
Complex neutral_pairing(const FieldModes& g, const FieldModes& w);

// Factored quasidensity value: prefactor * exp(-gaussian_exponent). The
// factorization keeps the sign exact where a plain double would under- or
// overflow on realistic lattices.
struct ChiValue {
    double prefactor = 0.0;
    double gaussian_exponent = 0.0;

    double value() const;
    int sign() const { return prefactor > 0.0 ? 1 : (prefactor < 0.0 ? -1 : 0); }
    // log|value| = log|prefactor| - exponent; false when the value is zero.
    bool log_abs(double& out) const;
};

struct Vacuum {};
struct OneParticle {
    FieldModes g;
};
struct VacuumOneSuperposition {
    Complex u;
    Complex v;
    FieldModes g;
};
struct TwoParticle {
    FieldModes g1;
    FieldModes g2;
};
struct Coherent {
    FieldModes g;
};
struct CoherentMixture {
    std::vector<std::pair<double, FieldModes>> components; // (weight, g)
};
struct CoherentSuperposition {
    Complex c1;
    FieldModes g1;
    Complex c2;
    FieldModes g2;
};
struct Thermal {
    double kT = 1.0;
    FourMomentum frame = {1.0, 0.0, 0.0, 0.0}; // unit forward timelike
};

using StateSpec = std::variant<Vacuum, OneParticle, VacuumOneSuperposition, TwoParticle, Coherent,
                               CoherentMixture, CoherentSuperposition, Thermal>;

ChiValue chi(const StateSpec& state, const FieldModes& w);

ChiValue chi_vacuum(const FieldModes& w);
ChiValue chi_one_particle(const FieldModes& g, const FieldModes& w);
ChiValue chi_vacuum_one_superposition(Complex u, Complex v, const FieldModes& g,
                                      const FieldModes& w);
ChiValue chi_two_particle(const FieldModes& g1, const FieldModes& g2, const FieldModes& w);
ChiValue chi_coherent(const FieldModes& g, const FieldModes& w);
ChiValue chi_coherent_mixture(const std::vector<std::pair<double, FieldModes>>& components,
                              const FieldModes& w);
ChiValue chi_coherent_superposition(Complex c1, const FieldModes& g1, Complex c2,
                                    const FieldModes& g2, const FieldModes& w);
ChiValue chi_thermal(double kT, const FourMomentum& frame, const FieldModes& w);

// Analytic per-mode kernels multiplying weight |w~|^2 / (2 hbar) in the
// Gaussian exponent; they depend on k only through k.k (and k.T for the
// thermal state), which is what the Lorentz-form tests exercise.
double vacuum_mode_kernel(const ShellWindow& window, const FourMomentum& k);
double thermal_mode_kernel(const ShellWindow& window, const FourMomentum& k, double kT,
                           const FourMomentum& frame);

// Characteristic function of a single-mode thermal state with commutator
// [a, a+] = alpha and Boltzmann weight exp(-lambda a+ a).
double thermal_characteristic_single_mode(Complex z, double lambda, double alpha);

// Truncated-Fock-space trace of the same quantity via dense matrix
// exponentials; the independent oracle that adjudicates the closed form.
double thermal_trace_oracle(Complex z, double lambda, double alpha, int truncation);

struct ScanGrid {
    int points = 41;
    double range = 3.0;
};

struct NegativityScanResult {
    double min_prefactor = 0.0;
    double alpha = 0.0; // slice coordinates of the minimizing w
    double beta = 0.0;
    bool negativity_found = false;

    const char* verdict() const { return negativity_found ? "negativity-found" : "none-found"; }
};

// Deterministic scan of the prefactor over the two-parameter slice spanned by
// the state's test functions (w = alpha d1 + beta d2, both coefficients
// real; single-g states use d2 = i d1 to cover the complex line).
NegativityScanResult scan_negativity(const StateSpec& state, const MomentumLattice& lattice,
                                     const ScanGrid& grid = {});

// Sharp-shell-limit probe: narrows the window at fixed grid resolution and
// tracks how the vacuum exponent of a fixed mode profile dies while its
// off-window mass survives.
struct SingularProbeConfig {
    double mass = 1.0;
    double cutoff = 3.0;
    double spacing = 0.005;
    int dimension = 1;
    WindowShape shape = WindowShape::TopHat;
    double hbar = 1.0;
    std::vector<double> widths = {0.4, 0.2, 0.1, 0.05}; // decreasing
};

struct SingularProbeRow {
    double width = 0.0;
    double on_window_exponent = 0.0;
    double off_window_mass = 0.0;
    std::size_t lattice_points = 0;
};

struct SingularProbeReport {
    std::vector<SingularProbeRow> rows;
    double fitted_power = 0.0; // least-squares power of the on-window exponent in the width
    bool divergence_flagged = false;
};

using ModeProfile = std::function<Complex(const FourMomentum&, const ShellWindow&)>;

SingularProbeReport sharp_shell_limit_probe(const ModeProfile& profile,
                                       const SingularProbeConfig& config);

} // namespace kgw

#endif
