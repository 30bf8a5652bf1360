#include "kgw/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kgw {

double minkowski_square(const FourMomentum& k) {
    return k.k0 * k.k0 - k.k1 * k.k1 - k.k2 * k.k2 - k.k3 * k.k3;
}

double minkowski_dot(const FourMomentum& a, const FourMomentum& b) {
    return a.k0 * b.k0 - a.k1 * b.k1 - a.k2 * b.k2 - a.k3 * b.k3;
}

double euclidean_norm(const FourMomentum& k) {
    return std::sqrt(k.k0 * k.k0 + k.k1 * k.k1 + k.k2 * k.k2 + k.k3 * k.k3);
}

FourMomentum boost(const FourMomentum& k, double eta, double n1, double n2, double n3) {
    const double norm = std::sqrt(n1 * n1 + n2 * n2 + n3 * n3);
    n1 /= norm;
    n2 /= norm;
    n3 /= norm;
    const double kpar = k.k1 * n1 + k.k2 * n2 + k.k3 * n3;
    const double ch = std::cosh(eta);
    const double sh = std::sinh(eta);
    const double k0 = ch * k.k0 + sh * kpar;
    const double shift = sh * k.k0 + (ch - 1.0) * kpar;
    return {k0, k.k1 + shift * n1, k.k2 + shift * n2, k.k3 + shift * n3};
}

WindowShape window_shape_from_string(const std::string& name) {
    if (name == "top-hat") return WindowShape::TopHat;
    if (name == "smooth-bump") return WindowShape::SmoothBump;
    throw BadConfig("unknown window shape '" + name + "' (expected top-hat or smooth-bump)");
}

std::string to_string(WindowShape shape) {
    return shape == WindowShape::TopHat ? "top-hat" : "smooth-bump";
}

namespace {

// exp(-1/(t(1-t))) on (0,1), zero outside; all derivatives vanish at the
// endpoints, so the trapezoid rule below converges super-algebraically.
double bump_profile(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::exp(-1.0 / (t * (1.0 - t)));
}

double bump_profile_integral() {
    static const double value = [] {
        const int n = 1 << 13;
        double sum = 0.0;
        for (int i = 1; i < n; ++i) sum += bump_profile(static_cast<double>(i) / n);
        return sum / n;
    }();
    return value;
}

} // namespace

ShellWindow::ShellWindow(double mass, double width, WindowShape shape, double hbar)
    : mass_(mass), width_(width), hbar_(hbar), shape_(shape), bump_height_(0.0) {
    if (!(mass > 0.0)) throw BadConfig("shell window requires mass > 0");
    if (!(width > 0.0)) throw BadConfig("shell window requires width > 0");
    if (!(hbar > 0.0)) throw BadConfig("shell window requires hbar > 0");
    if (shape_ == WindowShape::SmoothBump) bump_height_ = 1.0 / (width_ * bump_profile_integral());
}

double ShellWindow::value(double s) const {
    if (s <= support_lo() || s >= support_hi()) return 0.0;
    if (shape_ == WindowShape::TopHat) return 1.0 / width_;
    return bump_height_ * bump_profile((s - support_lo()) / width_);
}

void for_each_box_momentum(const LatticeConfig& config,
                           const std::function<void(const FourMomentum&)>& visit) {
    const double lambda = config.cutoff;
    const int d = config.dimension;
    std::array<long, 4> lo{}, hi{};
    lo[0] = 1; // k0 > 0
    hi[0] = static_cast<long>(std::floor(lambda / config.spacing[0]));
    for (int axis = 1; axis <= 3; ++axis) {
        if (axis <= d) {
            const long n = static_cast<long>(std::floor(lambda / config.spacing[axis]));
            lo[axis] = -n;
            hi[axis] = n;
        } else {
            lo[axis] = 0;
            hi[axis] = 0;
        }
    }
    FourMomentum k;
    for (long i0 = lo[0]; i0 <= hi[0]; ++i0) {
        k.k0 = i0 * config.spacing[0];
        for (long i1 = lo[1]; i1 <= hi[1]; ++i1) {
            k.k1 = i1 * config.spacing[1];
            for (long i2 = lo[2]; i2 <= hi[2]; ++i2) {
                k.k2 = i2 * config.spacing[2];
                for (long i3 = lo[3]; i3 <= hi[3]; ++i3) {
                    k.k3 = i3 * config.spacing[3];
                    visit(k);
                }
            }
        }
    }
}

MomentumLattice build_shell_lattice(const LatticeConfig& config) {
    if (!(config.mass > 0.0)) throw BadConfig("lattice requires mass > 0");
    if (!(config.width > 0.0)) throw BadConfig("lattice requires width > 0");
    if (!(config.cutoff > 0.0)) throw BadConfig("lattice requires cutoff > 0");
    if (config.dimension < 1 || config.dimension > 3)
        throw BadConfig("lattice dimension must be 1, 2, or 3");
    for (int axis = 0; axis <= config.dimension; ++axis)
        if (!(config.spacing[axis] > 0.0)) throw BadConfig("lattice requires spacing > 0");

    const ShellWindow window(config.mass, config.width, config.shape, config.hbar);
    MomentumLattice lattice(window);
    lattice.cutoff_ = config.cutoff;
    lattice.dimension_ = config.dimension;
    lattice.spacing_ = config.spacing;

    double cell = 1.0;
    for (int axis = 0; axis <= config.dimension; ++axis)
        cell *= config.spacing[axis] / (2.0 * std::numbers::pi);
    lattice.cell_weight_ = cell;

    const double lo = window.support_lo();
    const double hi = window.support_hi();
    for_each_box_momentum(config, [&](const FourMomentum& k) {
        const double s = minkowski_square(k);
        if (!(s > lo && s < hi)) return;
        if (!(euclidean_norm(k) < config.cutoff)) return;
        lattice.points_.push_back(k);
    });

    // The nested box scan already emits points in lexicographic order by
    // (k0,k1,k2,k3); keep that as the documented ordering.
    if (lattice.points_.empty())
        throw EmptyLattice("window/cutoff combination retains no grid momenta (the sharp-shell "
                           "limit at fixed spacing is empty)");

    lattice.weights_.assign(lattice.points_.size(), cell);
    lattice.window_values_.reserve(lattice.points_.size());
    for (const auto& k : lattice.points_)
        lattice.window_values_.push_back(window.value(minkowski_square(k)));
    return lattice;
}

bool MomentumLattice::same_geometry(const MomentumLattice& other) const {
    if (this == &other) return true;
    return dimension_ == other.dimension_ && window_ == other.window_ &&
           cutoff_ == other.cutoff_ && spacing_ == other.spacing_ && points_ == other.points_;
}

} // namespace kgw
