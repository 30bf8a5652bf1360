#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kgw/lattice.hpp"

using namespace kgw;

TEST_CASE("minkowski square basics") {
    const double m = 1.7;
    CHECK(minkowski_square({m, 0.0, 0.0, 0.0}) == doctest::Approx(m * m));
    CHECK(minkowski_square({1.0, 1.0, 0.0, 0.0}) == doctest::Approx(0.0));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> eta(-2.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        const double h = eta(rng);
        const FourMomentum k{std::cosh(h) * m, std::sinh(h) * m, 0.0, 0.0};
        CHECK(minkowski_square(k) == doctest::Approx(m * m).epsilon(1e-12));
    }
}

TEST_CASE("top-hat window values") {
    const ShellWindow window(1.0, 0.5, WindowShape::TopHat);
    CHECK(window.value(1.0 + 0.25) == doctest::Approx(2.0)); // 1/delta inside
    CHECK(window.value(1.0 - 0.01) == 0.0);
    CHECK(window.value(1.0 + 0.51) == 0.0);
}

static double integrate_window(const ShellWindow& window, int cells) {
    // Midpoint rule over the support; exact for the top-hat, and the bump's
    // vanishing endpoint derivatives make it converge super-algebraically.
    const double lo = window.support_lo();
    const double h = window.width() / cells;
    double sum = 0.0;
    for (int i = 0; i < cells; ++i) sum += window.value(lo + (i + 0.5) * h);
    return sum * h;
}

TEST_CASE("window normalization") {
    const ShellWindow tophat(1.0, 0.5, WindowShape::TopHat);
    CHECK(integrate_window(tophat, 4096) == doctest::Approx(1.0).epsilon(1e-12));

    const ShellWindow bump(1.0, 0.5, WindowShape::SmoothBump);
    CHECK(integrate_window(bump, 4096) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bump.value(1.0 + 0.25) > 0.0);
    CHECK(bump.value(1.0) == 0.0);

    const ShellWindow narrow(2.0, 0.01, WindowShape::SmoothBump);
    CHECK(integrate_window(narrow, 4096) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("window shapes are nonnegative with declared support") {
    for (const auto shape : {WindowShape::TopHat, WindowShape::SmoothBump}) {
        const ShellWindow window(1.3, 0.7, shape);
        for (double s = -1.0; s < 4.0; s += 0.0137) {
            const double f = window.value(s);
            CHECK(f >= 0.0);
            if (f > 0.0) {
                CHECK(s >= window.support_lo());
                CHECK(s <= window.support_hi());
            }
        }
    }
}

static LatticeConfig small_config() {
    LatticeConfig config;
    config.mass = 1.0;
    config.width = 0.5;
    config.cutoff = 3.0;
    config.dimension = 1;
    config.set_uniform_spacing(0.125);
    return config;
}

TEST_CASE("lattice points satisfy the three predicates") {
    const MomentumLattice lattice = build_shell_lattice(small_config());
    CHECK(lattice.size() > 0);
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        const FourMomentum& k = lattice.point(i);
        const double s = minkowski_square(k);
        CHECK(s > 1.0);
        CHECK(s < 1.5);
        CHECK(k.k0 > 0.0);
        CHECK(euclidean_norm(k) < 3.0);
        CHECK(k.k2 == 0.0);
        CHECK(k.k3 == 0.0);
        CHECK(lattice.weight(i) > 0.0);
    }
}

TEST_CASE("lattice count matches a brute-force scan over a larger box") {
    const LatticeConfig config = small_config();
    const MomentumLattice lattice = build_shell_lattice(config);

    // Independent enumeration over a deliberately oversized box.
    std::size_t count = 0;
    const double h = 0.125;
    for (long i0 = -30; i0 <= 30; ++i0)
        for (long i1 = -30; i1 <= 30; ++i1) {
            const FourMomentum k{i0 * h, i1 * h, 0.0, 0.0};
            const double s = minkowski_square(k);
            if (k.k0 > 0.0 && s > 1.0 && s < 1.5 && euclidean_norm(k) < 3.0) ++count;
        }
    CHECK(lattice.size() == count);
}

TEST_CASE("lattice ordering is lexicographic and deterministic") {
    const MomentumLattice a = build_shell_lattice(small_config());
    const MomentumLattice b = build_shell_lattice(small_config());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.point(i) == b.point(i));
    for (std::size_t i = 1; i < a.size(); ++i) {
        const auto& p = a.point(i - 1);
        const auto& q = a.point(i);
        const auto key = [](const FourMomentum& k) {
            return std::array<double, 4>{k.k0, k.k1, k.k2, k.k3};
        };
        CHECK(key(p) < key(q));
    }
}

TEST_CASE("weights sum to the retained cell volume over (2 pi)^(1+d)") {
    const LatticeConfig config = small_config();
    const MomentumLattice lattice = build_shell_lattice(config);
    double sum = 0.0;
    for (const double w : lattice.weights()) sum += w;
    const double expected = static_cast<double>(lattice.size()) * lattice.cell_weight();
    CHECK(sum == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("empty and invalid configurations") {
    LatticeConfig config = small_config();
    config.width = 1e-9;
    CHECK_THROWS_AS(build_shell_lattice(config), EmptyLattice);

    config = small_config();
    config.mass = -1.0;
    CHECK_THROWS_AS(build_shell_lattice(config), BadConfig);
    config = small_config();
    config.width = 0.0;
    CHECK_THROWS_AS(build_shell_lattice(config), BadConfig);
    config = small_config();
    config.cutoff = -2.0;
    CHECK_THROWS_AS(build_shell_lattice(config), BadConfig);
    config = small_config();
    config.spacing[1] = 0.0;
    CHECK_THROWS_AS(build_shell_lattice(config), BadConfig);
    config = small_config();
    config.dimension = 4;
    CHECK_THROWS_AS(build_shell_lattice(config), BadConfig);
}

TEST_CASE("boost invariance of shell kernels at the function level") {
    const ShellWindow window(1.0, 0.5, WindowShape::SmoothBump);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        // Random forward timelike momentum near the shell.
        const double s = 1.0 + 0.5 * (0.5 + 0.4 * uni(rng));
        FourMomentum k{0.0, uni(rng), uni(rng), uni(rng)};
        k.k0 = std::sqrt(s + k.k1 * k.k1 + k.k2 * k.k2 + k.k3 * k.k3);

        const double eta = 1.5 * uni(rng);
        double n1 = uni(rng), n2 = uni(rng), n3 = uni(rng);
        if (n1 == 0.0 && n2 == 0.0 && n3 == 0.0) n1 = 1.0;
        const FourMomentum kb = boost(k, eta, n1, n2, n3);

        const auto kernel = [&](const FourMomentum& p) {
            return window.value(minkowski_square(p)) * (p.k0 > 0.0 ? 1.0 : 0.0);
        };
        CHECK(kernel(kb) == doctest::Approx(kernel(k)).epsilon(1e-12));
        CHECK(kb.k0 > 0.0); // boosts preserve the forward cone
    }
}
