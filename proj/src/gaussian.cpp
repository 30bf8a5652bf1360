#include "kgw/gaussian.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

namespace kgw {

QuadraticForm::QuadraticForm(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) throw BadConfig("quadratic form matrix must be square");
    const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
    const double dev = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (dev > 1e-12 * scale)
        throw NotPsd("quadratic form matrix is not Hermitian (deviation " + std::to_string(dev) +
                     ")");
    // Symmetrize away rounding noise so eigensolves see an exactly Hermitian matrix.
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint().eval());
}

double QuadraticForm::value(const Eigen::VectorXcd& x) const {
    const Complex v = x.dot(matrix_ * x); // Eigen's dot conjugates the left argument
    return v.real();
}

double QuadraticForm::value(const Eigen::VectorXd& x) const {
    return value(Eigen::VectorXcd(x.cast<Complex>()));
}

double DegenerateGaussian::null_component_norm(const Eigen::VectorXcd& y) const {
    if (null_basis.cols() == 0) return 0.0;
    return (null_basis.adjoint() * y).norm();
}

DegenerateGaussian invert_gaussian_characteristic(const QuadraticForm& q, double split_tolerance) {
    const int n = q.dimension();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(q.matrix());
    const Eigen::VectorXd values = eig.eigenvalues();
    const double lambda_max = values.size() > 0 ? values.maxCoeff() : 0.0;

    if (lambda_max < 0.0 || values.minCoeff() < -1e-10 * std::max(lambda_max, 0.0))
        throw NotPsd("quadratic form has eigenvalue " + std::to_string(values.minCoeff()) +
                     " below the PSD tolerance");

    const double threshold = split_tolerance * lambda_max;
    std::vector<int> null_idx, pos_idx;
    for (int i = 0; i < n; ++i)
        (values[i] <= threshold ? null_idx : pos_idx).push_back(i);

    Eigen::MatrixXcd null_basis(n, static_cast<int>(null_idx.size()));
    for (std::size_t j = 0; j < null_idx.size(); ++j)
        null_basis.col(static_cast<int>(j)) = eig.eigenvectors().col(null_idx[j]);

    Eigen::MatrixXcd inv = Eigen::MatrixXcd::Zero(n, n);
    for (int i : pos_idx) {
        const auto v = eig.eigenvectors().col(i);
        inv += (v * v.adjoint()) / values[i];
    }
    return DegenerateGaussian{std::move(null_basis), QuadraticForm(0.25 * inv), split_tolerance};
}

Complex quadrature_ft_oracle(const QuadraticForm& q, const Eigen::VectorXd& y, double half_width,
                             double step, std::size_t node_budget) {
    const int n = q.dimension();
    if (n < 1 || n > 3) throw BadConfig("quadrature oracle supports dimensions 1..3");
    if (!(half_width > 0.0) || !(step > 0.0))
        throw BadConfig("quadrature oracle requires positive half_width and step");
    if (y.size() != n) throw BadConfig("quadrature oracle point has wrong dimension");

    const long per_axis = 2 * static_cast<long>(std::floor(half_width / step)) + 1;
    double total = 1.0;
    for (int i = 0; i < n; ++i) total *= static_cast<double>(per_axis);
    if (total > static_cast<double>(node_budget))
        throw DomainTooLarge("quadrature grid of " + std::to_string(total) +
                             " nodes exceeds the node budget");

    // The form is real on real arguments (Hermitian matrix), so only Re Q enters.
    const Eigen::MatrixXd a = q.matrix().real();
    const long half = (per_axis - 1) / 2;

    Complex sum = 0.0;
    Eigen::VectorXd x(n);
    const auto eval = [&] {
        const double quad = x.dot(a * x);
        const double phase = -y.dot(x);
        sum += std::polar(std::exp(-quad), phase);
    };
    if (n == 1) {
        for (long i = -half; i <= half; ++i) {
            x[0] = i * step;
            eval();
        }
    } else if (n == 2) {
        for (long i = -half; i <= half; ++i)
            for (long j = -half; j <= half; ++j) {
                x[0] = i * step;
                x[1] = j * step;
                eval();
            }
    } else {
        for (long i = -half; i <= half; ++i)
            for (long j = -half; j <= half; ++j)
                for (long l = -half; l <= half; ++l) {
                    x[0] = i * step;
                    x[1] = j * step;
                    x[2] = l * step;
                    eval();
                }
    }
    return sum * std::pow(step, n);
}

double WignerGrid::value_at_origin() const {
    const auto nearest = [](const std::vector<double>& g) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < g.size(); ++i)
            if (std::abs(g[i]) < std::abs(g[best])) best = i;
        return best;
    };
    return values(nearest(xs), nearest(ps));
}

double WignerGrid::total_mass() const {
    const double dx = xs.size() > 1 ? xs[1] - xs[0] : 1.0;
    const double dp = ps.size() > 1 ? ps[1] - ps[0] : 1.0;
    return values.sum() * dx * dp;
}

namespace {

std::vector<double> centered_grid(int points, double half_width) {
    std::vector<double> grid(points);
    const double step = points > 1 ? 2.0 * half_width / (points - 1) : 0.0;
    for (int i = 0; i < points; ++i) grid[i] = -half_width + i * step;
    return grid;
}

} // namespace

WignerGrid conventional_wigner_single_mode(const Eigen::VectorXcd& amplitudes,
                                           const WignerGridSpec& spec) {
    const int n = static_cast<int>(amplitudes.size());
    if (n < 3 || n > 64) throw BadConfig("number-basis truncation must be in [3, 64]");
    if (spec.freq_points < 3 || spec.phase_points < 3)
        throw BadConfig("grids need at least 3 points per axis");

    const double norm2 = amplitudes.squaredNorm();
    if (std::abs(norm2 - 1.0) > 1e-10)
        throw NotNormalized("state norm^2 deviates from 1 by " + std::to_string(norm2 - 1.0));
    const double top_weight = std::norm(amplitudes[n - 1]) + std::norm(amplitudes[n - 2]);
    if (top_weight > 1e-8)
        throw TruncationTooSmall("state carries weight " + std::to_string(top_weight) +
                                 " on the top two levels");

    // The grid corner displaces the state by |alpha|^2 = hbar hw^2 / 2 number
    // levels; the truncation must hold the displaced state or the matrix
    // exponential rings garbage into the corners of C.
    int top_occupied = 0;
    for (int m = 0; m < n; ++m)
        if (std::norm(amplitudes[m]) > 1e-8) top_occupied = m;
    const double reach =
        spec.hbar * spec.freq_half_width * spec.freq_half_width / 2.0 + top_occupied + 8.0;
    if (static_cast<double>(n) < reach)
        throw TruncationTooSmall("basis of " + std::to_string(n) +
                                 " levels cannot hold the grid-corner displacement (needs about " +
                                 std::to_string(reach) + ")");

    // Truncated quadratures: x = sqrt(hbar/2)(a + a+), p = i sqrt(hbar/2)(a+ - a).
    const double s = std::sqrt(spec.hbar / 2.0);
    Eigen::MatrixXcd xop = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd pop = Eigen::MatrixXcd::Zero(n, n);
    for (int m = 0; m + 1 < n; ++m) {
        const double r = std::sqrt(static_cast<double>(m + 1));
        xop(m, m + 1) = s * r;
        xop(m + 1, m) = s * r;
        pop(m, m + 1) = Complex(0.0, -s * r);
        pop(m + 1, m) = Complex(0.0, s * r);
    }

    const std::vector<double> thetas = centered_grid(spec.freq_points, spec.freq_half_width);
    const std::vector<double> omegas = centered_grid(spec.freq_points, spec.freq_half_width);

    // C(theta, omega) = <psi| exp(i x theta + i p omega) |psi>; the second
    // half of the grid follows from C(-theta,-omega) = conj C(theta,omega).
    Eigen::MatrixXcd c(spec.freq_points, spec.freq_points);
    const Complex iunit(0.0, 1.0);
    const long center = (static_cast<long>(spec.freq_points) * spec.freq_points - 1) / 2;
    for (long flat = 0; flat <= center; ++flat) {
        const int a = static_cast<int>(flat / spec.freq_points);
        const int b = static_cast<int>(flat % spec.freq_points);
        const Eigen::MatrixXcd gen = iunit * (thetas[a] * xop + omegas[b] * pop);
        const Eigen::MatrixXcd u = gen.exp(); // scaling-and-squaring on the truncated basis
        const Complex val = amplitudes.dot(u * amplitudes);
        c(a, b) = val;
        c(spec.freq_points - 1 - a, spec.freq_points - 1 - b) = std::conj(val);
    }

    WignerGrid grid;
    grid.xs = centered_grid(spec.phase_points, spec.phase_half_width);
    grid.ps = centered_grid(spec.phase_points, spec.phase_half_width);

    const double dtheta = thetas[1] - thetas[0];
    const double domega = omegas[1] - omegas[0];

    // W(x,p) = (2 pi)^-2 integral exp(-i x theta - i p omega) C dtheta domega,
    // as two separable discrete transforms.
    Eigen::MatrixXcd ex(spec.phase_points, spec.freq_points);
    Eigen::MatrixXcd ep(spec.freq_points, spec.phase_points);
    for (int i = 0; i < spec.phase_points; ++i)
        for (int a = 0; a < spec.freq_points; ++a) {
            ex(i, a) = std::polar(1.0, -grid.xs[i] * thetas[a]);
            ep(a, i) = std::polar(1.0, -grid.ps[i] * omegas[a]);
        }
    const double measure = dtheta * domega / (4.0 * std::numbers::pi * std::numbers::pi);
    Eigen::MatrixXcd w = measure * (ex * c * ep);

    const double max_im = w.imag().cwiseAbs().maxCoeff();
    const double max_re = std::max(w.real().cwiseAbs().maxCoeff(), 1e-300);
    if (max_im > 1e-8 * max_re)
        throw NumericalConsistency("Wigner grid imaginary residue " + std::to_string(max_im) +
                                   " exceeds tolerance");
    grid.values = w.real();
    return grid;
}

} // namespace kgw
