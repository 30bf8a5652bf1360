#ifndef KGW_SPIN_HPP
#define KGW_SPIN_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "kgw/lattice.hpp"

namespace kgw {

using Complex = std::complex<double>;

// Gamma matrices in the Dirac representation, tabulated explicitly; the
// Clifford relation {gamma^mu, gamma^nu} = 2 eta^{mu nu} is verified on
// first access.
const std::array<Eigen::Matrix4cd, 4>& gamma_basis();

// Contravariant polarization coefficients f~^mu(k), one 4-tuple per point.
struct PolarizedModes {
    const MomentumLattice* lattice = nullptr;
    std::vector<std::array<Complex, 4>> values;

    PolarizedModes() = default;
    explicit PolarizedModes(const MomentumLattice& lat) : lattice(&lat), values(lat.size()) {}
};

// Dirac 4-spinor coefficients zeta~(k) per point.
struct DiracModes {
    const MomentumLattice* lattice = nullptr;
    std::vector<Eigen::Vector4cd> values;

    DiracModes() = default;
    explicit DiracModes(const MomentumLattice& lat)
        : lattice(&lat), values(lat.size(), Eigen::Vector4cd::Zero()) {}
};

// Transverse-projected commutator inner product for spin-1 test functions:
// hbar sum weight 2 pi F(k.k) sigma [eta(f*,g) - (k.f*)(k.g)/(k.k)], with
// sigma a global sign resolved empirically (see resolve_spin1_sign).
Complex spin1_inner_product(const PolarizedModes& f, const PolarizedModes& g, int sigma);

// One-time probe: evaluates (f,f) with sigma = +1 on random polarizations
// and returns the sign that makes the product positive semi-definite.
int resolve_spin1_sign(const MomentumLattice& lattice, std::uint64_t seed = 20260809,
                       int probes = 50);

// M(k) = k_mu gamma^mu + sqrt(k.k) I, a rank-2 matrix (2 sqrt(k.k) times a
// projector) for forward timelike k.
Eigen::Matrix4cd dirac_kernel(const FourMomentum& k);

// Closed-form generalized inverse M/(4 k.k): satisfies M M+ M = M and
// M+ M M+ = M+, with the null space of M exposed as delta directions.
Eigen::Matrix4cd dirac_pseudo_inverse(const FourMomentum& k);

struct DiracVacuumResult {
    double exponent = 0.0;      // (1/hbar) sum weight [zeta-bar M+ zeta] / (2 pi F)
    double null_residual = 0.0; // same weighting applied to the ker(M) component
};

DiracVacuumResult dirac_vacuum_exponent(const DiracModes& zeta);

} // namespace kgw

#endif
