#include "kgw/fluctuations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

namespace kgw {

namespace {

constexpr double kPi = std::numbers::pi;

// Compensated (Neumaier) accumulation keeps the rotation-invariance of the
// exponents at the rounding level.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double total() const { return sum + comp; }
};

} // namespace

void SpatialLattice::validate(int min_sites) const {
    if (dimension < 1 || dimension > 3) throw BadConfig("spatial dimension must be 1, 2, or 3");
    if (sites < min_sites)
        throw BadConfig("spatial lattice needs at least " + std::to_string(min_sites) +
                        " sites per axis");
    if (!(spacing > 0.0)) throw BadConfig("spatial spacing must be positive");
}

std::size_t SpatialLattice::mode_count() const {
    std::size_t n = 1;
    for (int d = 0; d < dimension; ++d) n *= static_cast<std::size_t>(sites);
    return n;
}

double SpatialLattice::volume() const {
    double v = 1.0;
    for (int d = 0; d < dimension; ++d) v *= sites * spacing;
    return v;
}

void SpatialLattice::wave_numbers(std::size_t index, double* out) const {
    const double base = 2.0 * kPi / (sites * spacing);
    for (int d = dimension - 1; d >= 0; --d) {
        long i = static_cast<long>(index % sites);
        index /= sites;
        if (i > sites / 2) i -= sites; // signed mode number in (-n/2, n/2]
        out[d] = base * i;
    }
}

double SpatialLattice::continuum_k2(std::size_t index) const {
    double k[3] = {0.0, 0.0, 0.0};
    wave_numbers(index, k);
    double sum = 0.0;
    for (int d = 0; d < dimension; ++d) sum += k[d] * k[d];
    return sum;
}

double SpatialLattice::lattice_k2(std::size_t index) const {
    double k[3] = {0.0, 0.0, 0.0};
    wave_numbers(index, k);
    double sum = 0.0;
    for (int d = 0; d < dimension; ++d)
        sum += 2.0 * (1.0 - std::cos(k[d] * spacing)) / (spacing * spacing);
    return sum;
}

std::size_t SpatialLattice::conjugate_index(std::size_t index) const {
    std::size_t out = 0;
    std::size_t rem = index;
    std::size_t digits[3];
    for (int d = dimension - 1; d >= 0; --d) {
        digits[d] = rem % sites;
        rem /= sites;
    }
    for (int d = 0; d < dimension; ++d) {
        const std::size_t neg = digits[d] == 0 ? 0 : sites - digits[d];
        out = out * sites + neg;
    }
    return out;
}

namespace {

double weighted_mode_sum(const SpatialModes& v, double scale,
                         const std::function<double(std::size_t)>& kernel) {
    if (v.lattice == nullptr) throw BadConfig("spatial modes are not attached to a lattice");
    const auto& lat = *v.lattice;
    if (v.values.size() != lat.mode_count())
        throw BadConfig("spatial mode count does not match the lattice");
    const double weight = lat.mode_weight();
    CompensatedSum sum;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const double mag2 = std::norm(v.values[i]);
        if (mag2 != 0.0) sum.add(weight * mag2 * kernel(i));
    }
    return sum.total() * scale;
}

} // namespace

double vacuum_marginal_exponent(const SpatialModes& v, double mass, double hbar) {
    if (!(mass > 0.0) || !(hbar > 0.0)) throw BadConfig("marginal requires mass > 0 and hbar > 0");
    return weighted_mode_sum(v, 1.0 / hbar, [&](std::size_t i) {
        return std::sqrt(v.lattice->continuum_k2(i) + mass * mass);
    });
}

double classical_equilibrium_exponent(const SpatialModes& v, double mass, double kT) {
    if (!(mass > 0.0) || !(kT > 0.0)) throw BadConfig("equilibrium requires mass > 0 and kT > 0");
    return weighted_mode_sum(v, 1.0 / kT, [&](std::size_t i) {
        return 0.5 * (v.lattice->continuum_k2(i) + mass * mass);
    });
}

double SpectralKernel::exponent_coefficient(std::size_t mode) const {
    const double d = coefficients[mode];
    const double half = kind == KernelKind::ClassicalThermal ? 0.5 : 1.0;
    return lattice->mode_weight() * half * d;
}

SpectralKernel quantum_vacuum_kernel(const SpatialLattice& lattice, double mass,
                                     bool lattice_dispersion) {
    lattice.validate();
    if (!(mass > 0.0)) throw BadConfig("kernel requires mass > 0");
    SpectralKernel kernel{&lattice, {}, KernelKind::QuantumVacuum};
    kernel.coefficients.reserve(lattice.mode_count());
    for (std::size_t i = 0; i < lattice.mode_count(); ++i) {
        const double k2 = lattice_dispersion ? lattice.lattice_k2(i) : lattice.continuum_k2(i);
        kernel.coefficients.push_back(std::sqrt(k2 + mass * mass));
    }
    return kernel;
}

SpectralKernel classical_thermal_kernel(const SpatialLattice& lattice, double mass,
                                        bool lattice_dispersion) {
    lattice.validate();
    if (!(mass > 0.0)) throw BadConfig("kernel requires mass > 0");
    SpectralKernel kernel{&lattice, {}, KernelKind::ClassicalThermal};
    kernel.coefficients.reserve(lattice.mode_count());
    for (std::size_t i = 0; i < lattice.mode_count(); ++i) {
        const double k2 = lattice_dispersion ? lattice.lattice_k2(i) : lattice.continuum_k2(i);
        kernel.coefficients.push_back(k2 + mass * mass);
    }
    return kernel;
}

FieldSampleStats sample_fields(const SpectralKernel& kernel, double amplitude, std::size_t n,
                               std::uint64_t seed, std::size_t chunk_size) {
    if (kernel.lattice == nullptr) throw BadConfig("kernel is not attached to a lattice");
    if (n < 1) throw BadConfig("sample count must be at least 1");
    if (!(amplitude > 0.0)) throw BadConfig("amplitude must be positive");
    if (chunk_size < 1) throw BadConfig("chunk size must be at least 1");

    const auto& lat = *kernel.lattice;
    const std::size_t modes = lat.mode_count();

    // Canonical representatives: self-conjugate modes carry one real degree
    // of freedom, conjugate pairs two; the mirror mode is filled by symmetry.
    std::vector<int> role(modes); // 0 = self-conjugate, 1 = representative, 2 = mirror
    for (std::size_t i = 0; i < modes; ++i) {
        const std::size_t j = lat.conjugate_index(i);
        role[i] = j == i ? 0 : (i < j ? 1 : 2);
    }

    FieldSampleStats stats;
    stats.count = n;
    stats.mean.assign(modes, Complex(0.0, 0.0));
    stats.mean_sq.assign(modes, 0.0);
    stats.analytic.resize(modes);
    for (std::size_t i = 0; i < modes; ++i)
        stats.analytic[i] = amplitude / (2.0 * kernel.exponent_coefficient(i));

    std::vector<Complex> field(modes);
    for (std::size_t start = 0; start < n; start += chunk_size) {
        const std::size_t chunk_index = start / chunk_size;
        std::seed_seq seq{seed, static_cast<std::uint64_t>(chunk_index)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const std::size_t stop = std::min(n, start + chunk_size);
        for (std::size_t s = start; s < stop; ++s) {
            for (std::size_t i = 0; i < modes; ++i) {
                if (role[i] == 2) continue;
                const double var = stats.analytic[i];
                if (role[i] == 0) {
                    field[i] = Complex(gauss(rng) * std::sqrt(var), 0.0);
                } else {
                    const double sigma = std::sqrt(var / 2.0);
                    field[i] = Complex(gauss(rng) * sigma, gauss(rng) * sigma);
                    field[lat.conjugate_index(i)] = std::conj(field[i]);
                }
            }
            for (std::size_t i = 0; i < modes; ++i) {
                stats.mean[i] += field[i];
                stats.mean_sq[i] += std::norm(field[i]);
            }
        }
    }
    for (std::size_t i = 0; i < modes; ++i) {
        stats.mean[i] /= static_cast<double>(n);
        stats.mean_sq[i] /= static_cast<double>(n);
    }
    return stats;
}

std::string LocalityReport::verdict() const {
    if (banded) return "banded";
    char buf[64];
    std::snprintf(buf, sizeof buf, "exponential, rate %.6g", fitted_decay_rate);
    return buf;
}

LocalityReport locality_diagnostic(const SpectralKernel& kernel, int fit_lo, int fit_hi) {
    if (kernel.lattice == nullptr) throw BadConfig("kernel is not attached to a lattice");
    const auto& lat = *kernel.lattice;
    if (lat.dimension != 1) throw BadConfig("locality diagnostic runs on 1-D lattices");
    const int n = lat.sites;
    if (fit_lo < 1 || fit_hi <= fit_lo || fit_hi > n / 2)
        throw BadConfig("locality fit range must satisfy 1 <= lo < hi <= sites/2");

    LocalityReport report;
    report.row.resize(n / 2 + 1);
    for (int s = 0; s <= n / 2; ++s) {
        double k[1];
        CompensatedSum sum;
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
            lat.wave_numbers(i, k);
            sum.add(kernel.coefficients[i] * std::cos(k[0] * s * lat.spacing));
        }
        report.row[s] = sum.total() / n;
    }
    report.diagonal = report.row[0];

    double beyond = 0.0;
    for (int s = 2; s <= n / 2; ++s) beyond = std::max(beyond, std::abs(report.row[s]));
    report.beyond_nn_ratio = beyond / std::abs(report.diagonal);
    report.banded = report.beyond_nn_ratio <= 1e-10;

    // The branch point of D at k = i kappa gives row ~ exp(-kappa x) x^(-3/2);
    // remove the power prefactor so the fit returns the exponential rate.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (int s = fit_lo; s <= fit_hi; ++s) {
        const double mag = std::abs(report.row[s]);
        if (mag <= 0.0) continue;
        const double x = s * lat.spacing;
        const double y = std::log(mag * std::pow(x, 1.5));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    report.fitted_decay_rate =
        count >= 2 ? -(count * sxy - sx * sy) / (count * sxx - sx * sx) : 0.0;
    return report;
}

namespace {

// Adaptive composite-Simpson refinement until successive halvings agree.
template <typename F>
double refine_simpson(const F& f, double lo, double hi, double rel_tol, int max_doublings = 22) {
    int n = 64;
    auto simpson = [&](int panels) {
        const double h = (hi - lo) / panels;
        double sum = f(lo) + f(hi);
        for (int i = 1; i < panels; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(lo + i * h);
        return sum * h / 3.0;
    };
    double prev = simpson(n);
    for (int iter = 0; iter < max_doublings; ++iter) {
        n *= 2;
        const double cur = simpson(n);
        if (std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), 1e-300)) return cur;
        prev = cur;
    }
    throw NoConvergence("quadrature did not settle to the requested tolerance");
}

} // namespace

double bessel_k2(double x) {
    if (!(x > 0.0)) throw BadConfig("bessel_k2 requires x > 0");
    // K_nu(x) = integral_0^inf exp(-x cosh t) cosh(nu t) dt. Truncate where
    // x cosh t has driven the integrand below 1e-320.
    const double t_max = std::acosh(std::max(740.0 / x, 2.0)) + 1.0;
    const auto integrand = [&](double t) { return std::exp(-x * std::cosh(t)) * std::cosh(2.0 * t); };
    return refine_simpson(integrand, 0.0, t_max, 1e-12);
}

std::vector<double> default_bessel_epsilons(double r, int levels) {
    if (!(r > 0.0) || levels < 3) throw BadConfig("bad regulator sequence request");
    // r^2/(4 eps) >= 45 keeps the smeared contact terms below 1e-12 even
    // against their 1/eps^(5/2) amplitude growth.
    const double top = std::min(r * r / 180.0, 0.02);
    std::vector<double> eps(levels);
    for (int j = 0; j < levels; ++j) eps[j] = top / std::pow(2.0, j);
    return eps;
}

BesselCheckReport bessel_kernel_check(double mass, std::span<const double> r_values,
                                      std::span<const double> epsilons,
                                      double convergence_threshold) {
    if (!(mass > 0.0)) throw BadConfig("bessel check requires mass > 0");
    if (r_values.empty()) throw BadConfig("bessel check needs r values");
    if (!epsilons.empty() && epsilons.size() < 3)
        throw BadConfig("bessel check needs at least 3 regulator values");
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        if (!(epsilons[i] < epsilons[i - 1]) || !(epsilons[i] > 0.0))
            throw BadConfig("regulator sequence must be positive and strictly decreasing");

    BesselCheckReport report;
    for (const double r : r_values) {
        if (!(r > 0.0)) throw BadConfig("bessel check requires r > 0");
        const std::vector<double> default_eps =
            epsilons.empty() ? default_bessel_epsilons(r) : std::vector<double>{};
        const std::span<const double> eps =
            epsilons.empty() ? std::span<const double>(default_eps) : epsilons;

        // T_eps(r) = (2 pi)^{-3/2} (4 pi / r) integral_0^inf k sin(kr)
        //            sqrt(k^2+m^2) exp(-eps k^2) dk, the radial transform in
        //            the symmetric Fourier convention.
        std::vector<double> values;
        for (const double e : eps) {
            const double k_max = std::sqrt(42.0 / e); // exp(-42) tail
            const auto integrand = [&](double k) {
                return k * std::sin(k * r) * std::sqrt(k * k + mass * mass) *
                       std::exp(-e * k * k);
            };
            const double radial = refine_simpson(integrand, 0.0, k_max, 1e-10);
            values.push_back(radial * 4.0 * kPi / (r * std::pow(2.0 * kPi, 1.5)));
        }

        // Richardson extrapolation in eps (polynomial model; the origin
        // singularity only contributes exp(-r^2/4eps) terms).
        std::vector<std::vector<double>> table{values};
        for (std::size_t level = 1; level < values.size(); ++level) {
            std::vector<double> next;
            for (std::size_t i = 0; i + level < values.size(); ++i) {
                const double e_lo = eps[i + level];
                const double e_hi = eps[i];
                const double a = table[level - 1][i + 1];
                const double b = table[level - 1][i];
                next.push_back(a + (a - b) * e_lo / (e_hi - e_lo));
            }
            table.push_back(next);
        }
        const double extrapolated = table.back().front();
        const double previous = table[table.size() - 2].front();
        const double residual = std::abs(extrapolated - previous) /
                                std::max(std::abs(extrapolated), 1e-300);
        if (residual > convergence_threshold)
            throw NoConvergence("regulator extrapolation residual " + std::to_string(residual) +
                                " at r = " + std::to_string(r));

        BesselCheckRow row;
        row.r = r;
        row.numeric = std::abs(extrapolated);
        row.analytic = mass * mass * bessel_k2(mass * r) / (std::sqrt(kPi / 2.0) * r * r);
        row.rel_error = std::abs(row.numeric - row.analytic) / row.analytic;
        report.rows.push_back(row);
        report.max_rel_error = std::max(report.max_rel_error, row.rel_error);
    }
    return report;
}

} // namespace kgw
