#include "kgw/spin.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <random>

#include "kgw/errors.hpp"

namespace kgw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::array<Eigen::Matrix4cd, 4> make_gamma_basis() {
    const Complex i(0.0, 1.0);
    std::array<Eigen::Matrix4cd, 4> g;
    for (auto& m : g) m.setZero();

    // gamma^0 = diag(1, 1, -1, -1)
    g[0](0, 0) = 1.0;
    g[0](1, 1) = 1.0;
    g[0](2, 2) = -1.0;
    g[0](3, 3) = -1.0;

    // gamma^1: off-diagonal sigma_x blocks
    g[1](0, 3) = 1.0;
    g[1](1, 2) = 1.0;
    g[1](2, 1) = -1.0;
    g[1](3, 0) = -1.0;

    // gamma^2: off-diagonal sigma_y blocks
    g[2](0, 3) = -i;
    g[2](1, 2) = i;
    g[2](2, 1) = i;
    g[2](3, 0) = -i;

    // gamma^3: off-diagonal sigma_z blocks
    g[3](0, 2) = 1.0;
    g[3](1, 3) = -1.0;
    g[3](2, 0) = -1.0;
    g[3](3, 1) = 1.0;
    return g;
}

void verify_clifford(const std::array<Eigen::Matrix4cd, 4>& g) {
    const double eta[4] = {1.0, -1.0, -1.0, -1.0};
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
            const Eigen::Matrix4cd anti = g[mu] * g[nu] + g[nu] * g[mu];
            const Eigen::Matrix4cd expect =
                (mu == nu ? 2.0 * eta[mu] : 0.0) * Eigen::Matrix4cd::Identity();
            if ((anti - expect).cwiseAbs().maxCoeff() > 1e-14)
                throw NumericalConsistency("gamma basis violates the Clifford relation");
            const Eigen::Matrix4cd h = g[0] * g[mu];
            if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-14)
                throw NumericalConsistency("gamma^0 gamma^mu is not Hermitian");
        }
}

} // namespace

const std::array<Eigen::Matrix4cd, 4>& gamma_basis() {
    static const std::array<Eigen::Matrix4cd, 4> basis = [] {
        auto g = make_gamma_basis();
        verify_clifford(g);
        return g;
    }();
    return basis;
}

namespace {

Complex mink_contract(const std::array<Complex, 4>& a, const std::array<Complex, 4>& b) {
    return std::conj(a[0]) * b[0] - std::conj(a[1]) * b[1] - std::conj(a[2]) * b[2] -
           std::conj(a[3]) * b[3];
}

Complex mink_contract_k(const FourMomentum& k, const std::array<Complex, 4>& a) {
    return k.k0 * a[0] - k.k1 * a[1] - k.k2 * a[2] - k.k3 * a[3];
}

} // namespace

Complex spin1_inner_product(const PolarizedModes& f, const PolarizedModes& g, int sigma) {
    if (sigma != 1 && sigma != -1) throw BadConfig("spin-1 sign must be +1 or -1");
    if (f.lattice == nullptr || g.lattice == nullptr)
        throw LatticeMismatch("polarized modes are not attached to a lattice");
    if (f.lattice != g.lattice && !f.lattice->same_geometry(*g.lattice))
        throw LatticeMismatch("polarized modes live on different lattices");
    if (f.values.size() != f.lattice->size() || g.values.size() != g.lattice->size())
        throw LatticeMismatch("polarized mode count does not match the lattice");

    const auto& lat = *f.lattice;
    const double hbar = lat.window().hbar();
    Complex sum = 0.0;
    for (std::size_t idx = 0; idx < lat.size(); ++idx) {
        const FourMomentum& k = lat.point(idx);
        const double kk = minkowski_square(k);
        const Complex transverse =
            mink_contract(f.values[idx], g.values[idx]) -
            std::conj(mink_contract_k(k, f.values[idx])) * mink_contract_k(k, g.values[idx]) / kk;
        sum += lat.weight(idx) * kTwoPi * lat.window_at(idx) * transverse;
    }
    return hbar * static_cast<double>(sigma) * sum;
}

int resolve_spin1_sign(const MomentumLattice& lattice, std::uint64_t seed, int probes) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    bool saw_negative = false;
    bool saw_positive = false;
    for (int p = 0; p < probes; ++p) {
        PolarizedModes f(lattice);
        for (auto& v : f.values)
            for (auto& c : v) c = Complex(gauss(rng), gauss(rng));
        const double norm = spin1_inner_product(f, f, +1).real();
        saw_negative = saw_negative || norm < 0.0;
        saw_positive = saw_positive || norm > 0.0;
    }
    if (saw_negative && saw_positive)
        throw NumericalConsistency("spin-1 probe found both signs; no global sign fixes PSD");
    return saw_negative ? -1 : +1;
}

Eigen::Matrix4cd dirac_kernel(const FourMomentum& k) {
    const double kk = minkowski_square(k);
    if (!(kk > 0.0) || !(k.k0 > 0.0))
        throw OffShell("dirac kernel requires forward timelike k (k.k > 0, k0 > 0)");
    const auto& g = gamma_basis();
    // k_mu gamma^mu = k0 gamma^0 - k1 gamma^1 - k2 gamma^2 - k3 gamma^3
    return k.k0 * g[0] - k.k1 * g[1] - k.k2 * g[2] - k.k3 * g[3] +
           std::sqrt(kk) * Eigen::Matrix4cd::Identity();
}

Eigen::Matrix4cd dirac_pseudo_inverse(const FourMomentum& k) {
    const double kk = minkowski_square(k);
    if (!(kk > 0.0) || !(k.k0 > 0.0))
        throw OffShell("dirac kernel requires forward timelike k (k.k > 0, k0 > 0)");
    return dirac_kernel(k) / (4.0 * kk);
}

DiracVacuumResult dirac_vacuum_exponent(const DiracModes& zeta) {
    if (zeta.lattice == nullptr) throw LatticeMismatch("dirac modes are not attached to a lattice");
    if (zeta.values.size() != zeta.lattice->size())
        throw LatticeMismatch("dirac mode count does not match the lattice");

    const auto& lat = *zeta.lattice;
    const double hbar = lat.window().hbar();
    const Eigen::Matrix4cd g0 = gamma_basis()[0];

    Complex quad_c = 0.0;
    double magnitude = 0.0; // natural scale of the summed terms
    double residual = 0.0;
    for (std::size_t idx = 0; idx < lat.size(); ++idx) {
        const Eigen::Vector4cd& z = zeta.values[idx];
        if (z.isZero(0.0)) continue;
        const double f = lat.window_at(idx);
        if (f <= 0.0)
            throw OffShellSupport("dirac mode at a point with F(k.k) = 0: the 1/F kernel blows up");
        const FourMomentum& k = lat.point(idx);
        const double kk = minkowski_square(k);
        const Eigen::Matrix4cd m = dirac_kernel(k);
        const double denom = lat.weight(idx) / (kTwoPi * f);

        // zeta-bar M+ zeta with zeta-bar = zeta+ gamma^0.
        const Eigen::Vector4cd mz = m * z / (4.0 * kk);
        quad_c += denom * (z.adjoint() * g0 * mz)(0, 0);
        magnitude += denom * z.squaredNorm() / (2.0 * std::sqrt(kk));

        // Orthogonal projection onto ker(M) from the SVD.
        Eigen::JacobiSVD<Eigen::Matrix4cd> svd(m, Eigen::ComputeFullV);
        const double smax = svd.singularValues()(0);
        Eigen::Vector4cd null_part = Eigen::Vector4cd::Zero();
        for (int c = 0; c < 4; ++c)
            if (svd.singularValues()(c) <= 1e-12 * smax)
                null_part += svd.matrixV().col(c) * (svd.matrixV().col(c).adjoint() * z)(0, 0);
        residual += denom * null_part.squaredNorm();
    }
    if (std::abs(quad_c.imag()) > 1e-10 * std::max(magnitude, 1e-300))
        throw NumericalConsistency("dirac exponent has imaginary residue beyond tolerance");
    return {quad_c.real() / hbar, residual / hbar};
}

} // namespace kgw
