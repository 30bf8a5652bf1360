#include "kgw/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace kgw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same_lattice(const FieldModes& a, const FieldModes& b) {
    if (a.lattice == nullptr || b.lattice == nullptr)
        throw LatticeMismatch("field modes are not attached to a lattice");
    if (a.lattice != b.lattice && !a.lattice->same_geometry(*b.lattice))
        throw LatticeMismatch("field modes live on different lattices");
    if (a.values.size() != a.lattice->size() || b.values.size() != b.lattice->size())
        throw LatticeMismatch("field mode count does not match the lattice");
}

// Re-checks that a nominally real quantity is real to rounding, then drops
// the imaginary part.
double real_checked(Complex z, double rel = 1e-10) {
    const double scale = std::max(std::abs(z), 1e-300);
    if (std::abs(z.imag()) > rel * scale)
        throw NumericalConsistency("imaginary residue " + std::to_string(z.imag()) +
                                   " on a real-valued prefactor");
    return z.real();
}

double norm_inner(const FieldModes& g) {
    const double n = real_checked(inner_product(g, g), 1e-12);
    if (n <= 1e-14) throw DegenerateState("test function has (g,g) <= 1e-14");
    return n;
}

} // namespace

FieldModes::FieldModes(const MomentumLattice& lat, std::vector<Complex> vals)
    : lattice(&lat), values(std::move(vals)) {
    if (values.size() != lat.size())
        throw LatticeMismatch("field mode count does not match the lattice");
}

FieldModes operator*(Complex a, const FieldModes& f) {
    FieldModes out = f;
    for (auto& v : out.values) v *= a;
    return out;
}

FieldModes operator+(const FieldModes& a, const FieldModes& b) {
    require_same_lattice(a, b);
    FieldModes out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
    return out;
}

Complex inner_product(const FieldModes& f, const FieldModes& g) {
    require_same_lattice(f, g);
    const auto& lat = *f.lattice;
    const double hbar = lat.window().hbar();
    Complex sum = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i)
        sum += lat.weight(i) * kTwoPi * lat.window_at(i) * std::conj(f.values[i]) * g.values[i];
    return hbar * sum;
}

Complex neutral_pairing(const FieldModes& g, const FieldModes& w) {
    require_same_lattice(g, w);
    const auto& lat = *g.lattice;
    Complex sum = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i)
        sum += lat.weight(i) * std::conj(g.values[i]) * w.values[i];
    return sum;
}

double ChiValue::value() const { return prefactor * std::exp(-gaussian_exponent); }

bool ChiValue::log_abs(double& out) const {
    if (prefactor == 0.0) return false;
    out = std::log(std::abs(prefactor)) - gaussian_exponent;
    return true;
}

double vacuum_mode_kernel(const ShellWindow& window, const FourMomentum& k) {
    const double f = window.value(minkowski_square(k));
    if (f <= 0.0)
        throw OffShellSupport("mode at a point with F(k.k) = 0: the 1/F kernel blows up, which is "
                              "exactly the sharp-shell pathology the window regularizes");
    return 1.0 / (kTwoPi * f);
}

double thermal_mode_kernel(const ShellWindow& window, const FourMomentum& k, double kT,
                           const FourMomentum& frame) {
    return std::tanh(window.hbar() * minkowski_dot(k, frame) / (2.0 * kT)) *
           vacuum_mode_kernel(window, k);
}

namespace {

double vacuum_exponent(const FieldModes& w) {
    const auto& lat = *w.lattice;
    const double hbar = lat.window().hbar();
    double sum = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i) {
        const double mag2 = std::norm(w.values[i]);
        if (mag2 == 0.0) continue;
        const double f = lat.window_at(i);
        if (f <= 0.0)
            throw OffShellSupport(
                "w~ has support at a point with F(k.k) = 0: the 1/F kernel blows up, which is "
                "exactly the sharp-shell pathology the window regularizes");
        sum += lat.weight(i) * mag2 / (kTwoPi * f);
    }
    return sum / (2.0 * hbar);
}

void validate_thermal(double kT, const FourMomentum& frame) {
    if (!(kT > 0.0)) throw BadTemperature("thermal state requires kT > 0");
    if (std::abs(minkowski_square(frame) - 1.0) > 1e-12 || !(frame.k0 > 0.0))
        throw BadFrame("thermal frame vector must be unit forward timelike");
}

} // namespace

ChiValue chi_vacuum(const FieldModes& w) {
    if (w.lattice == nullptr) throw LatticeMismatch("field modes are not attached to a lattice");
    return {1.0, vacuum_exponent(w)};
}

ChiValue chi_one_particle(const FieldModes& g, const FieldModes& w) {
    require_same_lattice(g, w);
    const double gg = norm_inner(g);
    const double prefactor = -gg + std::norm(neutral_pairing(g, w));
    return {prefactor, vacuum_exponent(w)};
}

ChiValue chi_vacuum_one_superposition(Complex u, Complex v, const FieldModes& g,
                                      const FieldModes& w) {
    require_same_lattice(g, w);
    if (std::abs(u) + std::abs(v) == 0.0)
        throw DegenerateState("vacuum/one-particle superposition has u = v = 0");
    const double gg = norm_inner(g);
    const double prefactor = -std::norm(u) * gg + std::norm(v + u * neutral_pairing(g, w));
    return {prefactor, vacuum_exponent(w)};
}

ChiValue chi_two_particle(const FieldModes& g1, const FieldModes& g2, const FieldModes& w) {
    require_same_lattice(g1, w);
    require_same_lattice(g2, w);
    const double n1 = norm_inner(g1);
    const double n2 = norm_inner(g2);
    const Complex g12 = inner_product(g1, g2);
    const Complex g21 = inner_product(g2, g1);
    const Complex p1 = neutral_pairing(g1, w); // <<g1,w>>
    const Complex p2 = neutral_pairing(g2, w);
    const Complex pre = g12 * g21 + n1 * n2                       //
                        - std::norm(p1) * n2                      //
                        - p1 * std::conj(p2) * g21                // <<g1,w>><<w,g2>>(g2,g1)
                        - p2 * std::conj(p1) * g12                //
                        - std::norm(p2) * n1                      //
                        + std::norm(p1) * std::norm(p2);
    return {real_checked(pre), vacuum_exponent(w)};
}

ChiValue chi_coherent(const FieldModes& g, const FieldModes& w) {
    require_same_lattice(g, w);
    return {std::exp(2.0 * neutral_pairing(g, w).real()), vacuum_exponent(w)};
}

ChiValue chi_coherent_mixture(const std::vector<std::pair<double, FieldModes>>& components,
                              const FieldModes& w) {
    if (components.empty()) throw BadWeights("coherent mixture needs at least one component");
    double total = 0.0;
    for (const auto& [weight, g] : components) {
        if (weight < 0.0) throw BadWeights("coherent mixture weights must be nonnegative");
        total += weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw BadWeights("coherent mixture weights sum to " + std::to_string(total));
    double prefactor = 0.0;
    for (const auto& [weight, g] : components) {
        require_same_lattice(g, w);
        prefactor += weight * std::exp(2.0 * neutral_pairing(g, w).real());
    }
    return {prefactor, vacuum_exponent(w)};
}

ChiValue chi_coherent_superposition(Complex c1, const FieldModes& g1, Complex c2,
                                    const FieldModes& g2, const FieldModes& w) {
    require_same_lattice(g1, w);
    require_same_lattice(g2, w);
    if (std::abs(c1) + std::abs(c2) == 0.0)
        throw DegenerateState("coherent superposition has c1 = c2 = 0");
    const auto term = [&](Complex ci, const FieldModes& gi, Complex cj, const FieldModes& gj) {
        const Complex expo = neutral_pairing(gi, w) + std::conj(neutral_pairing(gj, w)) -
                             inner_product(gi, gj);
        return std::conj(ci) * cj * std::exp(expo);
    };
    const Complex pre = term(c1, g1, c1, g1) + term(c2, g2, c2, g2) + term(c1, g1, c2, g2) +
                        term(c2, g2, c1, g1);
    return {real_checked(pre), vacuum_exponent(w)};
}

ChiValue chi_thermal(double kT, const FourMomentum& frame, const FieldModes& w) {
    if (w.lattice == nullptr) throw LatticeMismatch("field modes are not attached to a lattice");
    validate_thermal(kT, frame);
    const auto& lat = *w.lattice;
    const double hbar = lat.window().hbar();
    double sum = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i) {
        const double mag2 = std::norm(w.values[i]);
        if (mag2 == 0.0) continue;
        const double f = lat.window_at(i);
        if (f <= 0.0)
            throw OffShellSupport(
                "w~ has support at a point with F(k.k) = 0: the 1/F kernel blows up, which is "
                "exactly the sharp-shell pathology the window regularizes");
        const double factor = std::tanh(hbar * minkowski_dot(lat.point(i), frame) / (2.0 * kT));
        sum += lat.weight(i) * factor * mag2 / (kTwoPi * f);
    }
    return {1.0, sum / (2.0 * hbar)};
}

ChiValue chi(const StateSpec& state, const FieldModes& w) {
    return std::visit(
        [&](const auto& s) -> ChiValue {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Vacuum>) {
                return chi_vacuum(w);
            } else if constexpr (std::is_same_v<T, OneParticle>) {
                return chi_one_particle(s.g, w);
            } else if constexpr (std::is_same_v<T, VacuumOneSuperposition>) {
                return chi_vacuum_one_superposition(s.u, s.v, s.g, w);
            } else if constexpr (std::is_same_v<T, TwoParticle>) {
                return chi_two_particle(s.g1, s.g2, w);
            } else if constexpr (std::is_same_v<T, Coherent>) {
                return chi_coherent(s.g, w);
            } else if constexpr (std::is_same_v<T, CoherentMixture>) {
                return chi_coherent_mixture(s.components, w);
            } else if constexpr (std::is_same_v<T, CoherentSuperposition>) {
                return chi_coherent_superposition(s.c1, s.g1, s.c2, s.g2, w);
            } else {
                return chi_thermal(s.kT, s.frame, w);
            }
        },
        state);
}

double thermal_characteristic_single_mode(Complex z, double lambda, double alpha) {
    if (!(lambda * alpha > 0.0)) throw BadTemperature("single-mode thermal needs lambda*alpha > 0");
    return std::exp(-alpha * std::norm(z) / (2.0 * std::tanh(lambda * alpha / 2.0)));
}

double thermal_trace_oracle(Complex z, double lambda, double alpha, int truncation) {
    if (truncation < 50) throw TruncationTooSmall("trace oracle needs truncation >= 50");
    if (!(std::exp(-lambda * alpha * truncation) < 1e-12))
        throw TruncationTooSmall("exp(-lambda*alpha*N) is not below 1e-12");

    const int n = truncation;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n); // a+ z* + a z with [a,a+] = alpha
    const double root_alpha = std::sqrt(alpha);
    for (int m = 0; m + 1 < n; ++m) {
        const double r = root_alpha * std::sqrt(static_cast<double>(m + 1));
        h(m + 1, m) = std::conj(z) * r; // a+ component
        h(m, m + 1) = z * r;            // a component
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
    const Eigen::VectorXcd phases =
        (Complex(0.0, 1.0) * eig.eigenvalues().cast<Complex>().array()).exp().matrix();
    const Eigen::MatrixXcd u =
        eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();

    Complex num = 0.0;
    double den = 0.0;
    for (int m = 0; m < n; ++m) {
        const double wgt = std::exp(-lambda * alpha * m);
        num += wgt * u(m, m);
        den += wgt;
    }
    return real_checked(num / den, 1e-9);
}

NegativityScanResult scan_negativity(const StateSpec& state, const MomentumLattice& lattice,
                                     const ScanGrid& grid) {
    if (grid.points < 2 || !(grid.range > 0.0))
        throw BadConfig("scan grid needs at least 2 points and a positive range");

    // Slice directions spanned by the state's test functions, scaled so the
    // one-particle prefactor crosses zero at |alpha| = 1.
    const auto scaled = [&](const FieldModes& g) {
        const double gg = real_checked(inner_product(g, g), 1e-12);
        const double pairing = neutral_pairing(g, g).real();
        return (pairing > 0.0 ? std::sqrt(gg) / pairing : 1.0) * g;
    };
    FieldModes d1(lattice), d2(lattice);
    if (!d1.values.empty()) d1.values[0] = 1.0; // default direction for g-free states
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, OneParticle> || std::is_same_v<T, Coherent> ||
                          std::is_same_v<T, VacuumOneSuperposition>) {
                d1 = scaled(s.g);
                d2 = Complex(0.0, 1.0) * d1;
            } else if constexpr (std::is_same_v<T, TwoParticle>) {
                d1 = scaled(s.g1);
                d2 = scaled(s.g2);
            } else if constexpr (std::is_same_v<T, CoherentSuperposition>) {
                d1 = scaled(s.g1);
                d2 = scaled(s.g2);
            } else if constexpr (std::is_same_v<T, CoherentMixture>) {
                if (!s.components.empty()) {
                    d1 = scaled(s.components.front().second);
                    d2 = Complex(0.0, 1.0) * d1;
                }
            } else {
                d2 = Complex(0.0, 1.0) * d1;
            }
        },
        state);

    NegativityScanResult result;
    bool first = true;
    for (int i = 0; i < grid.points; ++i) {
        const double alpha = -grid.range + 2.0 * grid.range * i / (grid.points - 1);
        for (int j = 0; j < grid.points; ++j) {
            const double beta = -grid.range + 2.0 * grid.range * j / (grid.points - 1);
            const FieldModes w = alpha * d1 + beta * d2;
            const double pre = chi(state, w).prefactor;
            if (first || pre < result.min_prefactor) {
                result.min_prefactor = pre;
                result.alpha = alpha;
                result.beta = beta;
                first = false;
            }
        }
    }
    result.negativity_found = result.min_prefactor < 0.0;
    return result;
}

SingularProbeReport sharp_shell_limit_probe(const ModeProfile& profile,
                                       const SingularProbeConfig& config) {
    if (config.widths.empty()) throw BadConfig("probe needs at least one window width");
    for (std::size_t i = 1; i < config.widths.size(); ++i)
        if (!(config.widths[i] < config.widths[i - 1]))
            throw BadConfig("probe widths must be strictly decreasing");

    SingularProbeReport report;
    bool always_divergent = true;
    for (const double width : config.widths) {
        LatticeConfig lc;
        lc.mass = config.mass;
        lc.width = width;
        lc.cutoff = config.cutoff;
        lc.dimension = config.dimension;
        lc.set_uniform_spacing(config.spacing);
        lc.shape = config.shape;
        lc.hbar = config.hbar;

        const MomentumLattice lattice = build_shell_lattice(lc);
        FieldModes w(lattice);
        for (std::size_t i = 0; i < lattice.size(); ++i)
            w.values[i] = profile(lattice.point(i), lattice.window());

        SingularProbeRow row;
        row.width = width;
        row.lattice_points = lattice.size();
        row.on_window_exponent = chi_vacuum(w).gaussian_exponent;

        // l^2 mass of the profile on retained-box momenta outside the window.
        const ShellWindow& win = lattice.window();
        double off_mass = 0.0;
        for_each_box_momentum(lc, [&](const FourMomentum& k) {
            if (!(euclidean_norm(k) < lc.cutoff)) return;
            const double s = minkowski_square(k);
            if (s > win.support_lo() && s < win.support_hi()) return;
            off_mass += lattice.cell_weight() * std::norm(profile(k, win));
        });
        row.off_window_mass = off_mass;
        always_divergent = always_divergent && off_mass > 1e-12;
        report.rows.push_back(row);
    }
    report.divergence_flagged = always_divergent;

    // Least-squares fit of log(exponent) against log(width).
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (const auto& row : report.rows) {
        if (!(row.on_window_exponent > 0.0)) continue;
        const double x = std::log(row.width);
        const double y = std::log(row.on_window_exponent);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    report.fitted_power =
        n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : std::numeric_limits<double>::quiet_NaN();
    return report;
}

} // namespace kgw
