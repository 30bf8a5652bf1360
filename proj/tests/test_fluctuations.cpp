#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kgw/fluctuations.hpp"
#include "kgw/gaussian.hpp"
#include "kgw/lattice.hpp"

using namespace kgw;

namespace {

SpatialModes random_real_field(const SpatialLattice& lat, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpatialModes v(lat);
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const std::size_t j = lat.conjugate_index(i);
        if (j == i) {
            v.values[i] = Complex(gauss(rng), 0.0);
        } else if (i < j) {
            v.values[i] = Complex(gauss(rng), gauss(rng));
            v.values[j] = std::conj(v.values[i]);
        }
    }
    return v;
}

} // namespace

TEST_CASE("marginal exponents: zero field and single modes") {
    SpatialLattice lat{1, 16, 0.3, true};
    const double m = 1.2, hbar = 0.7, kT = 1.9;

    CHECK(vacuum_marginal_exponent(SpatialModes(lat), m, hbar) == 0.0);
    CHECK(classical_equilibrium_exponent(SpatialModes(lat), m, kT) == 0.0);

    for (const std::size_t mode : {std::size_t{0}, std::size_t{3}, std::size_t{8}}) {
        SpatialModes v(lat);
        v.values[mode] = 1.0;
        const double k2 = lat.continuum_k2(mode);
        const double w = lat.mode_weight();
        CHECK(vacuum_marginal_exponent(v, m, hbar) ==
              doctest::Approx(w * std::sqrt(k2 + m * m) / hbar).epsilon(1e-14));
        CHECK(classical_equilibrium_exponent(v, m, kT) ==
              doctest::Approx(w * (k2 + m * m) / (2.0 * kT)).epsilon(1e-14));

        // The amplitude analogy: one-mode ratio of quantum to classical.
        const double ratio = vacuum_marginal_exponent(v, m, hbar) /
                             classical_equilibrium_exponent(v, m, kT);
        CHECK(ratio == doctest::Approx(2.0 * kT * std::sqrt(k2 + m * m) /
                                       (hbar * (k2 + m * m)))
                           .epsilon(1e-12));
    }
}

TEST_CASE("vacuum marginal matches the finite Gaussian inversion route") {
    // Build the characteristic Gaussian exp(-(f,f)/2) over the real degrees
    // of freedom of the hyperplane modes, invert it, and compare quadratic
    // forms against the direct kernel.
    const double m = 1.1, hbar = 0.9;
    for (int sites = 2; sites <= 8; ++sites) {
        SpatialLattice lat{1, sites, 0.4, true};
        const double mu = lat.mode_weight();

        // Degrees of freedom: self-conjugate modes one slot, pairs two.
        struct Dof {
            std::size_t mode;
            bool imag;
            bool paired;
        };
        std::vector<Dof> dofs;
        for (std::size_t i = 0; i < lat.mode_count(); ++i) {
            const std::size_t j = lat.conjugate_index(i);
            if (j == i) dofs.push_back({i, false, false});
            else if (i < j) {
                dofs.push_back({i, false, true});
                dofs.push_back({i, true, true});
            }
        }

        const int n = static_cast<int>(dofs.size());
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
        for (int d = 0; d < n; ++d) {
            const double root = std::sqrt(lat.continuum_k2(dofs[d].mode) + m * m);
            a(d, d) = dofs[d].paired ? mu * hbar / (2.0 * root) : mu * hbar / (4.0 * root);
        }
        const DegenerateGaussian inv = invert_gaussian_characteristic(QuadraticForm(a));
        REQUIRE(inv.null_dimension() == 0);

        std::mt19937_64 rng(100 + sites);
        for (int trial = 0; trial < 10; ++trial) {
            const SpatialModes v = random_real_field(lat, rng);
            Eigen::VectorXcd y(n);
            for (int d = 0; d < n; ++d) {
                const Complex value = v.values[dofs[d].mode];
                const double component = dofs[d].imag ? value.imag() : value.real();
                y[d] = (dofs[d].paired ? 2.0 * mu : mu) * component;
            }
            const double via_inversion = inv.exponent(y);
            const double direct = vacuum_marginal_exponent(v, m, hbar);
            CHECK(via_inversion == doctest::Approx(direct).epsilon(1e-8));
        }
    }
}

TEST_CASE("marginal density is maximal at v = 0") {
    SpatialLattice lat{1, 16, 0.25, true};
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const SpatialModes v = random_real_field(lat, rng);
        const double exponent = vacuum_marginal_exponent(v, 1.0, 1.0);
        CHECK(exponent >= 0.0);
        CHECK(std::exp(-exponent) <= 1.0);
    }
}

TEST_CASE("exponents are invariant under 90-degree rotations") {
    SpatialLattice lat{2, 8, 0.3, true};
    std::mt19937_64 rng(22);
    const SpatialModes v = random_real_field(lat, rng);

    // Rotation (i, j) -> (-j, i) on mode indices.
    SpatialModes rotated(lat);
    const int n = lat.sites;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const std::size_t to = static_cast<std::size_t>(((n - j) % n) * n + i);
            rotated.values[to] = v.values[static_cast<std::size_t>(i * n + j)];
        }

    const double e1 = vacuum_marginal_exponent(v, 1.0, 1.0);
    const double e2 = vacuum_marginal_exponent(rotated, 1.0, 1.0);
    CHECK(e2 == doctest::Approx(e1).epsilon(1e-14));
    const double c1 = classical_equilibrium_exponent(v, 1.0, 1.0);
    const double c2 = classical_equilibrium_exponent(rotated, 1.0, 1.0);
    CHECK(c2 == doctest::Approx(c1).epsilon(1e-14));
}

TEST_CASE("classical kernel is not a function of the Minkowski square") {
    // Two momenta related by a boost share k.k but not |kvec|^2 + m^2.
    const double m = 1.0;
    const FourMomentum p{m, 0.0, 0.0, 0.0};
    const FourMomentum q = boost(p, 1.0);
    CHECK(minkowski_square(p) == doctest::Approx(minkowski_square(q)).epsilon(1e-12));
    const double cp = p.k1 * p.k1 + p.k2 * p.k2 + p.k3 * p.k3 + m * m;
    const double cq = q.k1 * q.k1 + q.k2 * q.k2 + q.k3 * q.k3 + m * m;
    CHECK(std::abs(cp - cq) > 1.0); // sinh(1)^2 m^2 = 1.38
}

TEST_CASE("sampling is deterministic and matches analytic variances") {
    SpatialLattice lat{1, 64, 0.2, true};
    const SpectralKernel kernel = quantum_vacuum_kernel(lat, 1.0);

    const FieldSampleStats a = sample_fields(kernel, 1.0, 20000, 4242);
    const FieldSampleStats b = sample_fields(kernel, 1.0, 20000, 4242);
    for (std::size_t i = 0; i < a.mean_sq.size(); ++i) {
        CHECK(a.mean_sq[i] == b.mean_sq[i]); // bit-identical
        CHECK(a.mean[i] == b.mean[i]);
    }

    for (std::size_t i = 0; i < a.mean_sq.size(); ++i) {
        CHECK(std::abs(a.mean_sq[i] / a.analytic[i] - 1.0) < 0.05);
        // Zero mean within 4 sigma / sqrt(n) per real component.
        const double bound = 4.0 * std::sqrt(a.analytic[i] / 20000.0);
        CHECK(std::abs(a.mean[i].real()) < bound);
        CHECK(std::abs(a.mean[i].imag()) < bound);
    }
}

TEST_CASE("sampled fields are conjugate-symmetric (real fields)") {
    SpatialLattice lat{1, 16, 0.2, true};
    const SpectralKernel kernel = quantum_vacuum_kernel(lat, 1.0);
    const FieldSampleStats stats = sample_fields(kernel, 1.0, 64, 7);
    // Mirror modes share |v~|^2 sample statistics exactly.
    for (std::size_t i = 0; i < stats.mean_sq.size(); ++i) {
        const std::size_t j = lat.conjugate_index(i);
        CHECK(stats.mean_sq[i] == stats.mean_sq[j]);
        CHECK(stats.mean[i] == std::conj(stats.mean[j]));
    }
}

TEST_CASE("classical kernel row is banded, quantum row decays with rate m") {
    SpatialLattice lat{1, 256, 0.2, true};
    const SpectralKernel classical = classical_thermal_kernel(lat, 1.0, true);
    const SpectralKernel quantum = quantum_vacuum_kernel(lat, 1.0, true);

    const LocalityReport creport = locality_diagnostic(classical, 5, 40);
    CHECK(creport.banded);
    CHECK(creport.beyond_nn_ratio <= 1e-10);
    CHECK(creport.verdict() == "banded");

    const LocalityReport qreport = locality_diagnostic(quantum, 5, 40);
    CHECK_FALSE(qreport.banded);
    CHECK(std::abs(qreport.fitted_decay_rate - 1.0) < 0.25);

    // Row symmetry under reflection is implicit in the cosine transform;
    // check the full n-point row explicitly.
    const int n = lat.sites;
    for (int s = 1; s < n / 2; ++s) {
        double k[1];
        double direct = 0.0, mirrored = 0.0;
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
            lat.wave_numbers(i, k);
            direct += quantum.coefficients[i] * std::cos(k[0] * s * lat.spacing);
            mirrored += quantum.coefficients[i] * std::cos(k[0] * (n - s) * lat.spacing);
        }
        CHECK(direct == doctest::Approx(mirrored).epsilon(1e-10));
    }
}

TEST_CASE("bessel_k2 small-argument and asymptotic behavior") {
    // x^2 K2(x) -> 2 as x -> 0.
    const double x = 1e-3;
    CHECK(x * x * bessel_k2(x) == doctest::Approx(2.0).epsilon(1e-3));

    // Kernel ratio against the first-order asymptotic model at m r = 3.
    const double m = 1.0, r = 3.0;
    const auto kernel = [&](double rr) {
        return m * m * bessel_k2(m * rr) / (std::sqrt(std::numbers::pi / 2.0) * rr * rr);
    };
    const auto asymptotic = [&](double rr) {
        const double xx = m * rr;
        return std::sqrt(std::numbers::pi / (2.0 * xx)) * std::exp(-xx) *
               (1.0 + 15.0 / (8.0 * xx)) / (rr * rr);
    };
    const double computed_ratio = kernel(2.0 * r) / kernel(r);
    const double model_ratio = asymptotic(2.0 * r) / asymptotic(r);
    CHECK(std::abs(computed_ratio / model_ratio - 1.0) < 0.10);
}

TEST_CASE("bessel_k2 agrees with the standard library") {
    for (const double x : {0.5, 1.0, 2.0, 3.0, 6.0})
        CHECK(bessel_k2(x) == doctest::Approx(std::cyl_bessel_k(2.0, x)).epsilon(1e-10));
}

TEST_CASE("regularized radial transform reproduces the Bessel kernel") {
    const double r_values[] = {1.0, 2.0};
    const BesselCheckReport report = bessel_kernel_check(1.0, r_values);
    REQUIRE(report.rows.size() == 2);
    for (const auto& row : report.rows) CHECK(row.rel_error < 0.05);

    const auto eps = default_bessel_epsilons(1.0);
    CHECK(eps.size() == 4);
    for (std::size_t i = 1; i < eps.size(); ++i) CHECK(eps[i] < eps[i - 1]);
}

TEST_CASE("kernel coefficients are isotropic") {
    SpatialLattice lat{2, 8, 0.3, true};
    const SpectralKernel q = quantum_vacuum_kernel(lat, 1.0);
    const SpectralKernel c = classical_thermal_kernel(lat, 1.0);
    for (std::size_t i = 0; i < lat.mode_count(); ++i)
        for (std::size_t j = i + 1; j < lat.mode_count(); ++j)
            if (std::abs(lat.continuum_k2(i) - lat.continuum_k2(j)) < 1e-12) {
                CHECK(q.coefficients[i] == doctest::Approx(q.coefficients[j]).epsilon(1e-14));
                CHECK(c.coefficients[i] == doctest::Approx(c.coefficients[j]).epsilon(1e-14));
            }
}

TEST_CASE("bessel check reports non-convergence for coarse regulators") {
    const double r_values[] = {1.0};
    const double coarse[] = {0.5, 0.45, 0.4};
    CHECK_THROWS_AS(bessel_kernel_check(1.0, r_values, coarse, 1e-6), NoConvergence);
}

TEST_CASE("kernel constructors reject bad input") {
    SpatialLattice one_site{1, 1, 0.2, true};
    CHECK_THROWS_AS(quantum_vacuum_kernel(one_site, 1.0), BadConfig);
    SpatialLattice bad_spacing{1, 16, -0.2, true};
    CHECK_THROWS_AS(classical_thermal_kernel(bad_spacing, 1.0), BadConfig);
    SpatialLattice ok{1, 16, 0.2, true};
    CHECK_THROWS_AS(quantum_vacuum_kernel(ok, -1.0), BadConfig);
}
