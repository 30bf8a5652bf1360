#ifndef KGW_LATTICE_HPP
#define KGW_LATTICE_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kgw/errors.hpp"

namespace kgw {

// Signature convention is (+,-,-,-) throughout; every Minkowski square in
// the library routes through minkowski_square().
struct FourMomentum {
    double k0 = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;

    friend bool operator==(const FourMomentum&, const FourMomentum&) = default;
};

double minkowski_square(const FourMomentum& k);
double minkowski_dot(const FourMomentum& a, const FourMomentum& b);
double euclidean_norm(const FourMomentum& k);

// Boost with rapidity eta along the spatial unit direction (n1,n2,n3).
FourMomentum boost(const FourMomentum& k, double eta, double n1 = 1.0, double n2 = 0.0,
                   double n3 = 0.0);

enum class WindowShape { TopHat, SmoothBump };

WindowShape window_shape_from_string(const std::string& name);
std::string to_string(WindowShape shape);

// Normalized mass-shell window F(s) in the Minkowski-square variable s:
// F >= 0, supported on [m^2, m^2 + width], integrating to 1.
class ShellWindow {
  public:
    ShellWindow(double mass, double width, WindowShape shape = WindowShape::TopHat,
                double hbar = 1.0);

    double value(double s) const;

    double mass() const { return mass_; }
    double width() const { return width_; }
    WindowShape shape() const { return shape_; }
    double hbar() const { return hbar_; }
    double support_lo() const { return mass_ * mass_; }
    double support_hi() const { return mass_ * mass_ + width_; }

    friend bool operator==(const ShellWindow&, const ShellWindow&) = default;

  private:
    double mass_;
    double width_;
    double hbar_;
    WindowShape shape_;
    double bump_height_; // normalization of the smooth bump profile
};

struct LatticeConfig {
    double mass = 1.0;
    double width = 0.5;     // shell thickness in the Minkowski-square variable
    double cutoff = 3.0;    // Euclidean bound on all four components
    int dimension = 3;      // spatial dimensions, 1..3
    std::array<double, 4> spacing = {0.25, 0.25, 0.25, 0.25};
    WindowShape shape = WindowShape::TopHat;
    double hbar = 1.0;

    void set_uniform_spacing(double h) { spacing = {h, h, h, h}; }
};

// Finite set of forward-timelike grid momenta inside the shell window and
// the cutoff ball, with cell-volume integration weights. Immutable after
// construction; safe for unsynchronized concurrent reads.
class MomentumLattice {
  public:
    std::span<const FourMomentum> points() const { return points_; }
    std::span<const double> weights() const { return weights_; }
    std::size_t size() const { return points_.size(); }

    const FourMomentum& point(std::size_t i) const { return points_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    // Cached F(k.k) at lattice point i.
    double window_at(std::size_t i) const { return window_values_[i]; }

    const ShellWindow& window() const { return window_; }
    double cutoff() const { return cutoff_; }
    int dimension() const { return dimension_; }
    const std::array<double, 4>& spacing() const { return spacing_; }
    // Grid-cell measure divided by (2 pi)^(1+d); uniform over the lattice.
    double cell_weight() const { return cell_weight_; }

    bool same_geometry(const MomentumLattice& other) const;

    friend MomentumLattice build_shell_lattice(const LatticeConfig& config);

  private:
    explicit MomentumLattice(ShellWindow window) : window_(window) {}

    std::vector<FourMomentum> points_;
    std::vector<double> weights_;
    std::vector<double> window_values_;
    ShellWindow window_;
    double cutoff_ = 0.0;
    int dimension_ = 0;
    std::array<double, 4> spacing_{};
    double cell_weight_ = 0.0;
};

MomentumLattice build_shell_lattice(const LatticeConfig& config);

// Visits every candidate grid momentum in the bounding box of the forward
// cone intersected with the cutoff ball (no window predicate applied).
// Shared by the lattice builder and the sharp-shell-limit probe.
void for_each_box_momentum(const LatticeConfig& config,
                           const std::function<void(const FourMomentum&)>& visit);

} // namespace kgw

#endif
