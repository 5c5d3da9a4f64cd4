#ifndef PRIORCI_KNOWN_VARIANCE_HPP
#define PRIORCI_KNOWN_VARIANCE_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "priorci/config.hpp"
#include "priorci/interval.hpp"
#include "priorci/parallel.hpp"
#include "priorci/quadrature.hpp"
#include "priorci/root_finding.hpp"
#include "priorci/special_functions.hpp"

// Confidence intervals for the mean theta of X ~ N(theta,1) under uncertain
// prior information that theta = 0: the standard and Pratt intervals in closed
// form, and the mixed interval obtained by inverting per-theta optimal
// acceptance regions for the weight nu(x) = w x + H(x).

namespace priorci {

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// [x - z_{alpha/2}, x + z_{alpha/2}].
inline Interval standard_interval(double x, double alpha) {
    const double z = normal_quantile(0.5 * alpha);
    return {x - z, x + z};
}

/// [min(0, x - z_alpha), max(0, x + z_alpha)]: shortest expected length at
/// theta = 0. Always contains 0.
inline Interval pratt_interval(double x, double alpha) {
    const double z = normal_quantile(alpha);
    return {std::fmin(0.0, x - z), std::fmax(0.0, x + z)};
}

/// (w + phi(x)) / phi(x - theta) - c: negative exactly on the acceptance
/// sublevel set. For w > 0 its derivative in x is strictly increasing, so the
/// sublevel set is empty or a single finite interval.
inline double ratio_margin(double x, double c, double theta, double w) {
    return (w + normal_pdf(x)) / normal_pdf(x - theta) - c;
}

namespace detail {

// Overflow-safe surrogate with the same sign and the same stationary point as
// ratio_margin: log(w + phi(x)) - log phi(x - theta) - log c.
inline double log_ratio_margin(double x, double c, double theta, double w) {
    const double d = x - theta;
    return std::log(w + normal_pdf(x)) + 0.5 * d * d + std::log(sqrt_two_pi) - std::log(c);
}

// d/dx of log_ratio_margin; same sign everywhere as d/dx ratio_margin and
// crosses zero exactly once (negative to positive) when w > 0.
inline double log_ratio_margin_deriv(double x, double theta, double w) {
    const double p = normal_pdf(x);
    return (x - theta) - x * p / (w + p);
}

}  // namespace detail

/// The open sublevel set {x : ratio_margin(x,c,theta,w) < 0} for w > 0, c > 0.
/// Locates the unique stationary point by bisection on the derivative sign,
/// then bisects outward on each side for the two boundary roots. Returns
/// nullopt when the margin never goes negative.
inline std::optional<Interval> sublevel_interval(double c, double theta, double w,
                                                 double xtol = 1e-10) {
    if (!(w > 0.0)) throw std::domain_error("sublevel_interval: w must be positive");
    if (!(c > 0.0)) throw std::domain_error("sublevel_interval: c must be positive");

    const auto deriv = [&](double x) { return detail::log_ratio_margin_deriv(x, theta, w); };
    const double x_min = bisect_sign_change(deriv, theta - 1.0, theta + 1.0, xtol);
    const auto margin = [&](double x) { return detail::log_ratio_margin(x, c, theta, w); };
    if (!(margin(x_min) < 0.0)) return std::nullopt;

    double step = 1.0;
    double hi = x_min + step;
    while (margin(hi) < 0.0) {
        step *= 2.0;
        hi = x_min + step;
    }
    const double upper = bisect_root(margin, x_min, hi, xtol);

    step = 1.0;
    double lo = x_min - step;
    while (margin(lo) < 0.0) {
        step *= 2.0;
        lo = x_min - step;
    }
    const double lower = -bisect_root([&](double x) { return margin(-x); }, -x_min, -lo, xtol);

    return Interval{lower, upper};
}

/// Acceptance region for a single theta: the sublevel interval at the critical
/// constant making its coverage under theta equal 1 - alpha.
struct AcceptanceRegion {
    double theta = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double c = 0.0;

    double coverage_at(double th) const {
        return normal_cdf(upper - th) - normal_cdf(lower - th);
    }
};

/// Analytic search bracket for the critical constant:
/// w sqrt(2 pi) e^{z^2/2} <= c <= (w sqrt(2 pi) + 1) e^{z^2/2}.
/// The lower end is the large-|theta| limit, the upper end follows from
/// the density ratio never falling below its value at the far tail.
inline std::pair<double, double> critical_constant_bracket(double alpha, double w) {
    const double z = normal_quantile(0.5 * alpha);
    const double e = std::exp(0.5 * z * z);
    return {w * sqrt_two_pi * e, (w * sqrt_two_pi + 1.0) * e};
}

/// Solve for c_alpha(theta) by bisection on c: coverage of the sublevel set is
/// nondecreasing in c and crosses 1 - alpha inside the bracket.
inline AcceptanceRegion acceptance_region(double theta, const ProblemConfig& config) {
    if (!(config.w > 0.0)) {
        throw std::domain_error("acceptance_region: w must be positive (w=0 is the "
                                "Pratt interval in closed form)");
    }
    const double target = 1.0 - config.alpha;
    auto [c_lo, c_hi] = critical_constant_bracket(config.alpha, config.w);

    Interval last{0.0, 0.0};
    double last_c = c_hi;
    double last_cov = -1.0;
    for (int i = 0; i < 200; ++i) {
        const double c = 0.5 * (c_lo + c_hi);
        const auto region = sublevel_interval(c, theta, config.w, config.tol_root);
        const double cov = region ? normal_cdf(region->upper - theta) -
                                        normal_cdf(region->lower - theta)
                                  : 0.0;
        if (region) {
            last = *region;
            last_c = c;
            last_cov = cov;
            if (std::fabs(cov - target) <= config.tol_coverage) {
                return {theta, region->lower, region->upper, c};
            }
        }
        (cov < target ? c_lo : c_hi) = c;
    }
    if (last_cov >= 0.0 && std::fabs(last_cov - target) <= 100.0 * config.tol_coverage) {
        return {theta, last.lower, last.upper, last_c};
    }
    throw ConvergenceError("acceptance_region: coverage bisection failed to reach tolerance");
}

/// Acceptance regions over a symmetric theta grid, plus a cached quadrature
/// table used by the expected-length integral.
class AcceptanceFamily {
public:
    explicit AcceptanceFamily(const ProblemConfig& config) : config_(config) {
        config.validate();
        if (!(config.w > 0.0)) {
            throw std::domain_error("AcceptanceFamily: w must be positive");
        }

        const long half = std::lround(config.theta_grid_max / config.theta_grid_step);
        thetas_.resize(2 * half + 1);
        for (long k = -half; k <= half; ++k) {
            thetas_[k + half] = static_cast<double>(k) * config.theta_grid_step;
        }
        regions_.resize(thetas_.size());
        parallel_for(thetas_.size(), [&](std::size_t i) {
            regions_[i] = acceptance_region(thetas_[i], config);
        });

        build_quadrature_table();
    }

    /// Family whose regions are the fixed-width standard ones
    /// [theta - z, theta + z]. Exists for calibration: expected_length over
    /// this family must return exactly 2 z for every theta. The critical
    /// constant is not meaningful here and is stored as NaN.
    static AcceptanceFamily standard_family(const ProblemConfig& config) {
        AcceptanceFamily family;
        family.config_ = config;
        config.validate();
        const double z = normal_quantile(0.5 * config.alpha);
        const long half = std::lround(config.theta_grid_max / config.theta_grid_step);
        family.thetas_.resize(2 * half + 1);
        family.regions_.resize(family.thetas_.size());
        for (long k = -half; k <= half; ++k) {
            const double th = static_cast<double>(k) * config.theta_grid_step;
            family.thetas_[k + half] = th;
            family.regions_[k + half] = {th, th - z, th + z,
                                         std::numeric_limits<double>::quiet_NaN()};
        }
        family.build_quadrature_table_from([&](double t) {
            return AcceptanceRegion{t, t - z, t + z, std::numeric_limits<double>::quiet_NaN()};
        });
        return family;
    }

    const ProblemConfig& config() const { return config_; }
    const std::vector<double>& thetas() const { return thetas_; }
    const std::vector<AcceptanceRegion>& regions() const { return regions_; }

    double theta_max() const { return thetas_.back(); }

    const AcceptanceRegion& region_at(std::size_t i) const { return regions_[i]; }

    /// Index of the grid point closest to theta.
    std::size_t index_of(double theta) const {
        const double pos = (theta - thetas_.front()) / config_.theta_grid_step;
        const long i = std::lround(pos);
        if (i < 0 || i >= static_cast<long>(thetas_.size())) {
            throw std::out_of_range("AcceptanceFamily: theta outside the grid");
        }
        return static_cast<std::size_t>(i);
    }

    // Quadrature nodes (theta', weight, region at theta') for expected length.
    struct QuadNode {
        double theta = 0.0;
        double weight = 0.0;
        double lower = 0.0;
        double upper = 0.0;
    };
    const std::vector<QuadNode>& quad_nodes() const { return quad_nodes_; }

private:
    AcceptanceFamily() = default;

    void build_quadrature_table() {
        build_quadrature_table_from(
            [&](double t) { return acceptance_region(t, config_); });
    }

    template <class RegionFn>
    void build_quadrature_table_from(RegionFn&& region_fn) {
        const GaussLegendre rule(config_.quadrature_order);
        const double panel_width = 0.25;
        const int panels = std::max(1, static_cast<int>(std::ceil(2.0 * theta_max() /
                                                                  panel_width)));
        const double a = -theta_max();
        const double h = 2.0 * theta_max() / panels;
        quad_nodes_.resize(static_cast<std::size_t>(panels) * rule.nodes.size());
        parallel_for(quad_nodes_.size(), [&](std::size_t idx) {
            const std::size_t p = idx / rule.nodes.size();
            const std::size_t j = idx % rule.nodes.size();
            const double mid = a + (p + 0.5) * h;
            const double t = mid + 0.5 * h * rule.nodes[j];
            const auto region = region_fn(t);
            quad_nodes_[idx] = {t, 0.5 * h * rule.weights[j], region.lower, region.upper};
        });
    }

    ProblemConfig config_;
    std::vector<double> thetas_;
    std::vector<AcceptanceRegion> regions_;
    std::vector<QuadNode> quad_nodes_;
};

/// Confidence-set inversion result; non_contiguous is a diagnostic flag, not
/// an error (the enclosing interval is always returned).
struct InversionResult {
    Interval interval;
    bool contiguous = true;
};

namespace detail {

// Refine the theta where endpoint(theta) crosses x, between two grid points.
template <class Endpoint>
double refine_crossing(Endpoint&& endpoint, double x, double t_out, double t_in, double xtol) {
    return bisect_root([&](double t) { return endpoint(t) - x; }, std::fmin(t_out, t_in),
                       std::fmax(t_out, t_in), xtol);
}

}  // namespace detail

/// Invert the acceptance family at the observed x: the set of theta whose
/// region contains x, refined at both boundaries by bisection in theta with
/// fresh acceptance-region solves (no interpolation).
inline InversionResult confidence_set_detailed(double x, const AcceptanceFamily& family) {
    const auto& thetas = family.thetas();
    const auto& regions = family.regions();
    const auto& config = family.config();

    std::size_t first = thetas.size(), last = 0;
    bool contiguous = true;
    bool in_run = false, run_done = false;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const bool member = regions[i].lower <= x && x <= regions[i].upper;
        if (member) {
            if (run_done) contiguous = false;
            if (!in_run) first = i;
            last = i;
            in_run = true;
        } else if (in_run) {
            in_run = false;
            run_done = true;
        }
    }
    if (first == thetas.size()) {
        throw std::domain_error("confidence_set: no grid theta accepts x; widen the grid");
    }
    if (first == 0 || last + 1 == thetas.size()) {
        throw std::domain_error("confidence_set: set reaches the grid edge; widen the grid");
    }

    // Lower boundary: u(theta) crosses x between thetas[first-1] and thetas[first].
    const double lower = detail::refine_crossing(
        [&](double t) { return acceptance_region(t, config).upper; }, x, thetas[first - 1],
        thetas[first], config.tol_root);
    // Upper boundary: l(theta) crosses x between thetas[last] and thetas[last+1].
    const double upper = detail::refine_crossing(
        [&](double t) { return acceptance_region(t, config).lower; }, x, thetas[last],
        thetas[last + 1], config.tol_root);

    return {Interval{lower, upper}, contiguous};
}

inline Interval confidence_set(double x, const AcceptanceFamily& family) {
    return confidence_set_detailed(x, family).interval;
}

/// Expected length of the mixed interval under theta, via the identity
/// E_theta L = integral over theta' of P_theta(X in A(theta')). The integral
/// is evaluated as 2 z_{alpha/2} plus the correction relative to the standard
/// regions [theta' -+ z], whose own integral is exactly 2 z_{alpha/2}; the
/// correction integrand vanishes outside the cached node range.
inline double expected_length(double theta, const AcceptanceFamily& family) {
    const double z = normal_quantile(0.5 * family.config().alpha);
    double corr = 0.0;
    for (const auto& node : family.quad_nodes()) {
        const double mixed = normal_cdf(node.upper - theta) - normal_cdf(node.lower - theta);
        const double standard =
            normal_cdf(node.theta + z - theta) - normal_cdf(node.theta - z - theta);
        corr += node.weight * (mixed - standard);
    }
    return 2.0 * z + corr;
}

/// Expected length of the Pratt interval under theta (closed-form integrand).
inline double pratt_expected_length(double theta, double alpha) {
    const double z = normal_quantile(alpha);
    // L(x) = max(0, x + z) - min(0, x - z); E_theta L = E L(theta + Z).
    // E max(0, Y) for Y ~ N(m, 1) is phi(m) + m Phi(m).
    const auto expected_positive_part = [](double m) {
        return normal_pdf(m) + m * normal_cdf(m);
    };
    return expected_positive_part(theta + z) + expected_positive_part(z - theta);
}

/// Grid of squared expected-length ratios e(theta) = (E_theta L / 2 z)^2.
struct EfficiencyCurve {
    std::vector<double> thetas;
    std::vector<double> values;
    double e_at_zero = 0.0;
    double e_max = 0.0;
};

inline EfficiencyCurve efficiency_curve(const AcceptanceFamily& family) {
    const double z = normal_quantile(0.5 * family.config().alpha);
    EfficiencyCurve curve;
    curve.thetas = family.thetas();
    curve.values.resize(curve.thetas.size());
    parallel_for(curve.thetas.size(), [&](std::size_t i) {
        const double ratio = expected_length(curve.thetas[i], family) / (2.0 * z);
        curve.values[i] = ratio * ratio;
    });
    curve.e_max = 0.0;
    for (std::size_t i = 0; i < curve.thetas.size(); ++i) {
        if (curve.values[i] > curve.e_max) curve.e_max = curve.values[i];
        if (curve.thetas[i] == 0.0) curve.e_at_zero = curve.values[i];
    }
    return curve;
}

}  // namespace priorci

#endif
