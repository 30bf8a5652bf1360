#ifndef KGW_FLUCTUATIONS_HPP
#define KGW_FLUCTUATIONS_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kgw/errors.hpp"

namespace kgw {

using Complex = std::complex<double>;

// Periodic spatial grid discretizing a spacelike hyperplane.
struct SpatialLattice {
    int dimension = 1; // 1..3
    int sites = 64;    // per axis
    double spacing = 0.2;
    bool periodic = true;

    void validate(int min_sites = 2) const;
    std::size_t mode_count() const;
    double volume() const;
    // Uniform mode measure d^d k / (2 pi)^d = 1 / volume.
    double mode_weight() const { return 1.0 / volume(); }

    // Wave-number components of the flat mode index (row-major over axes).
    void wave_numbers(std::size_t index, double* out) const;
    double continuum_k2(std::size_t index) const;
    // Lattice dispersion  khat^2 = sum_axis (2/a^2)(1 - cos k a).
    double lattice_k2(std::size_t index) const;
    std::size_t conjugate_index(std::size_t index) const;
};

// Complex mode coefficients v~(k) on the full mode grid of a SpatialLattice.
struct SpatialModes {
    const SpatialLattice* lattice = nullptr;
    std::vector<Complex> values;

    SpatialModes() = default;
    explicit SpatialModes(const SpatialLattice& lat)
        : lattice(&lat), values(lat.mode_count(), Complex(0.0, 0.0)) {}
};

// Exponent of the vacuum hyperplane marginal: (1/hbar) sum weight |v~|^2 sqrt(k^2+m^2).
double vacuum_marginal_exponent(const SpatialModes& v, double mass, double hbar);

// Exponent of the classical equilibrium density: (1/kT) sum weight (1/2)|v~|^2 (k^2+m^2).
double classical_equilibrium_exponent(const SpatialModes& v, double mass, double kT);

enum class KernelKind { QuantumVacuum, ClassicalThermal, Custom };

// Per-mode positive coefficient D(k); quantum sqrt(k^2+m^2), classical
// (k^2+m^2). The classical exponent carries an explicit 1/2 which
// exponent_coefficient() accounts for.
struct SpectralKernel {
    const SpatialLattice* lattice = nullptr;
    std::vector<double> coefficients;
    KernelKind kind = KernelKind::Custom;

    // Coefficient of |v~(k)|^2 in the exponent, divided by the amplitude
    // (hbar or kT).
    double exponent_coefficient(std::size_t mode) const;
};

SpectralKernel quantum_vacuum_kernel(const SpatialLattice& lattice, double mass,
                                     bool lattice_dispersion = false);
SpectralKernel classical_thermal_kernel(const SpatialLattice& lattice, double mass,
                                        bool lattice_dispersion = false);

// Streaming statistics of sampled real Gaussian fields, per mode.
struct FieldSampleStats {
    std::size_t count = 0;
    std::vector<Complex> mean;       // sample mean of v~(k)
    std::vector<double> mean_sq;     // sample mean of |v~(k)|^2
    std::vector<double> analytic;    // analytic E|v~(k)|^2 = amplitude / (2 weight D_eff)
};

// Draws n independent real fields from exp(-exponent) with per-mode variance
// amplitude/(2 weight D_eff); deterministic for a given seed, with per-chunk
// derived seeds so chunked evaluation is schedule-independent.
FieldSampleStats sample_fields(const SpectralKernel& kernel, double amplitude, std::size_t n,
                               std::uint64_t seed, std::size_t chunk_size = 1024);

struct LocalityReport {
    std::vector<double> row;          // inverse-covariance row by separation, 0..sites/2
    double diagonal = 0.0;
    double beyond_nn_ratio = 0.0;     // max |row[s >= 2]| / |diagonal|
    bool banded = false;
    double fitted_decay_rate = 0.0;   // exponential rate of |row| over the fit range
    std::string verdict() const;
};

// Real-space inverse-covariance row of D(khat) on a 1-D lattice; classifies
// banded (classical) versus exponentially decaying (quantum) kernels.
LocalityReport locality_diagnostic(const SpectralKernel& kernel, int fit_lo = 5, int fit_hi = 40);

// Modified Bessel function K2 via the cosh integral representation;
// independent of any quadrature used elsewhere.
double bessel_k2(double x);

struct BesselCheckRow {
    double r = 0.0;
    double numeric = 0.0;  // |extrapolated transform|
    double analytic = 0.0; // m^2 K2(m r) / (sqrt(pi/2) r^2)
    double rel_error = 0.0;
};

struct BesselCheckReport {
    std::vector<BesselCheckRow> rows;
    double max_rel_error = 0.0;
};

// Regulator sequence for the radial transform at a given r: small enough
// that the contact-term contamination exp(-r^2/4 eps) is dead, halving per
// level for the Richardson table.
std::vector<double> default_bessel_epsilons(double r, int levels = 4);

// Gaussian-regularized 3-D radial transform of sqrt(k^2+m^2), extrapolated
// to zero regulator and compared in magnitude against the closed-form
// Bessel kernel at each r. An empty epsilon span selects the per-r default
// sequence.
BesselCheckReport bessel_kernel_check(double mass, std::span<const double> r_values,
                                      std::span<const double> epsilons = {},
                                      double convergence_threshold = 1e-3);

} // namespace kgw

#endif
