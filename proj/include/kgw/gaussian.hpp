#ifndef KGW_GAUSSIAN_HPP
#define KGW_GAUSSIAN_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "kgw/errors.hpp"

namespace kgw {

using Complex = std::complex<double>;

// Hermitian form q(x) = x^H Q x. Hermiticity is enforced at construction;
// positive semi-definiteness is checked where it is consumed.
class QuadraticForm {
  public:
    explicit QuadraticForm(Eigen::MatrixXcd matrix);

    int dimension() const { return static_cast<int>(matrix_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }

    double value(const Eigen::VectorXcd& x) const;
    double value(const Eigen::VectorXd& x) const;

  private:
    Eigen::MatrixXcd matrix_;
};

// Fourier transform of exp(-q(x)) for positive semi-definite q, up to
// normalization: delta functions along the null directions of q times
// exp(-y^H (Q^+/4) y) on the positive subspace. The 1/4 follows the
// convention  integral exp(-i y.x) exp(-x^H Q x) dx  ∝  exp(-y^H Q^{-1} y / 4).
struct DegenerateGaussian {
    Eigen::MatrixXcd null_basis; // n x n0, orthonormal columns spanning the numerical null space
    QuadraticForm inverse_form;  // Q^+/4 on the full space (vanishes on the null space)
    double split_tolerance = 0.0;

    int null_dimension() const { return static_cast<int>(null_basis.cols()); }
    // Exponent of the transformed Gaussian at y (the quadratic form Q^+/4).
    double exponent(const Eigen::VectorXcd& y) const { return inverse_form.value(y); }
    // Norm of the component of y along the delta directions.
    double null_component_norm(const Eigen::VectorXcd& y) const;
};

DegenerateGaussian invert_gaussian_characteristic(const QuadraticForm& q,
                                                  double split_tolerance = 1e-10);

inline constexpr std::size_t kDefaultQuadratureNodeBudget = std::size_t{1} << 27;

// Riemann-sum approximation of  integral exp(-i y.x) exp(-q(x)) dx  over the
// centered box [-half_width, half_width]^n, dimensions 1..3.
Complex quadrature_ft_oracle(const QuadraticForm& q, const Eigen::VectorXd& y, double half_width,
                             double step,
                             std::size_t node_budget = kDefaultQuadratureNodeBudget);

// The truncation must hold the displaced state reached from the grid corner:
// roughly N >= hbar freq_half_width^2 / 2 + top occupied level + 8.
struct WignerGridSpec {
    int freq_points = 49;         // points per axis of the (theta, omega) grid
    double freq_half_width = 7.0;
    int phase_points = 61;        // points per axis of the (x, p) grid
    double phase_half_width = 3.0;
    double hbar = 1.0;
};

struct WignerGrid {
    std::vector<double> xs;
    std::vector<double> ps;
    Eigen::MatrixXd values; // values(i, j) = W(xs[i], ps[j])

    double value_at_origin() const;
    double min_value() const { return values.minCoeff(); }
    // Discrete total mass  sum W dx dp.
    double total_mass() const;
};

// Conventional single-mode Wigner function of a truncated-number-basis state,
// computed from <psi| exp(i x theta + i p omega) |psi> on a grid via matrix
// exponentials followed by a discrete inverse Fourier transform.
WignerGrid conventional_wigner_single_mode(const Eigen::VectorXcd& amplitudes,
                                           const WignerGridSpec& spec = {});

} // namespace kgw

#endif
