#ifndef PRIORCI_SPLINE_HPP
#define PRIORCI_SPLINE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace priorci {

/// Rejected spline shape (non-monotone, or endpoint sum going negative);
/// carries the offending abscissa.
struct SplineShapeError : std::invalid_argument {
    SplineShapeError(const std::string& what, double where)
        : std::invalid_argument(what + " at y = " + std::to_string(where)), y(where) {}
    double y;
};

/// The endpoint-generating function of the unknown-variance interval: a
/// clamped cubic spline on [-q, q] with equally spaced knots, pinned to
/// -q + t at y = -q and q + t at y = q with unit end slopes, extended as
/// b(y) = y + t outside. Construction validates strict monotonicity and
/// b(y) >= -b(-y) by dense derivative/sum sampling.
class EndpointSpline {
public:
    EndpointSpline(std::vector<double> knot_values, double q, double t_quant)
        : q_(q), t_quant_(t_quant), values_(std::move(knot_values)) {
        if (!(q > 0.0)) throw std::invalid_argument("EndpointSpline: q must be positive");
        if (values_.size() < 2) {
            throw std::invalid_argument("EndpointSpline: need at least two knot values");
        }
        const std::size_t m = values_.size();
        h_ = 2.0 * q_ / static_cast<double>(m - 1);
        knots_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            knots_[i] = -q_ + static_cast<double>(i) * h_;
        }
        if (std::fabs(values_.front() - (-q_ + t_quant_)) > 1e-9 ||
            std::fabs(values_.back() - (q_ + t_quant_)) > 1e-9) {
            throw std::invalid_argument(
                "EndpointSpline: endpoint values must equal -q + t and q + t");
        }
        solve_second_derivatives();
        validate_shape();
    }

    double q() const { return q_; }
    double t_quant() const { return t_quant_; }
    double knot_step() const { return h_; }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& values() const { return values_; }

    /// Spline value inside [-q,q], linear extension y + t outside.
    double eval(double y) const {
        if (y <= -q_ || y >= q_) return y + t_quant_;
        const std::size_t i = cell_index(y);
        const double a = (knots_[i + 1] - y) / h_;
        const double b = (y - knots_[i]) / h_;
        return a * values_[i] + b * values_[i + 1] +
               ((a * a * a - a) * m2_[i] + (b * b * b - b) * m2_[i + 1]) * h_ * h_ / 6.0;
    }

    double deriv(double y) const {
        if (y <= -q_ || y >= q_) return 1.0;
        const std::size_t i = cell_index(y);
        const double a = (knots_[i + 1] - y) / h_;
        const double b = (y - knots_[i]) / h_;
        return (values_[i + 1] - values_[i]) / h_ +
               ((1.0 - 3.0 * a * a) * m2_[i] + (3.0 * b * b - 1.0) * m2_[i + 1]) * h_ / 6.0;
    }

    /// Inverse of the (strictly increasing) spline: closed form on the linear
    /// extension, Newton with a bisection safeguard inside [-q,q].
    double inverse(double v) const {
        if (v <= -q_ + t_quant_ || v >= q_ + t_quant_) return v - t_quant_;
        const auto it = std::upper_bound(values_.begin(), values_.end(), v);
        std::size_t i = static_cast<std::size_t>(it - values_.begin());
        if (i == 0) i = 1;
        if (i >= values_.size()) i = values_.size() - 1;
        double lo = knots_[i - 1], hi = knots_[i];
        double y = 0.5 * (lo + hi);
        for (int iter = 0; iter < 200; ++iter) {
            const double err = eval(y) - v;
            if (err > 0.0) {
                hi = y;
            } else if (err < 0.0) {
                lo = y;
            } else {
                return y;
            }
            const double d = deriv(y);
            double next = d > 0.0 ? y - err / d : lo - 1.0;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (hi - lo < 1e-14) break;
            y = next;
        }
        return 0.5 * (lo + hi);
    }

private:
    std::size_t cell_index(double y) const {
        const auto i = static_cast<std::ptrdiff_t>(std::floor((y + q_) / h_));
        return static_cast<std::size_t>(
            std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(values_.size()) - 2));
    }

    void solve_second_derivatives() {
        // Clamped spline: unit slope at both ends; tridiagonal in the second
        // derivatives, solved by the Thomas algorithm.
        const std::size_t m = values_.size();
        std::vector<double> diag(m), off(m), rhs(m);
        diag[0] = 2.0;
        off[0] = 1.0;
        rhs[0] = 6.0 / h_ * ((values_[1] - values_[0]) / h_ - 1.0);
        for (std::size_t i = 1; i + 1 < m; ++i) {
            diag[i] = 4.0;
            off[i] = 1.0;
            rhs[i] = 6.0 / (h_ * h_) * (values_[i + 1] - 2.0 * values_[i] + values_[i - 1]);
        }
        diag[m - 1] = 2.0;
        rhs[m - 1] = 6.0 / h_ * (1.0 - (values_[m - 1] - values_[m - 2]) / h_);

        m2_.assign(m, 0.0);
        std::vector<double> c(m, 0.0);
        c[0] = off[0] / diag[0];
        rhs[0] /= diag[0];
        for (std::size_t i = 1; i < m; ++i) {
            const double denom = diag[i] - c[i - 1];
            if (i + 1 < m) c[i] = off[i] / denom;
            rhs[i] = (rhs[i] - rhs[i - 1]) / denom;
        }
        m2_[m - 1] = rhs[m - 1];
        for (std::size_t i = m - 1; i-- > 0;) {
            m2_[i] = rhs[i] - c[i] * m2_[i + 1];
        }
    }

    void validate_shape() const {
        constexpr int samples = 10000;
        for (int k = 0; k <= samples; ++k) {
            const double y = -q_ + 2.0 * q_ * static_cast<double>(k) / samples;
            if (!(deriv(y) > 0.0)) {
                throw SplineShapeError("EndpointSpline: not strictly increasing", y);
            }
        }
        for (int k = 0; k <= samples / 2; ++k) {
            const double y = 2.0 * q_ * static_cast<double>(k) / samples;
            if (eval(y) + eval(-y) < 0.0) {
                throw SplineShapeError("EndpointSpline: b(y) + b(-y) went negative", y);
            }
        }
    }

    double q_;
    double t_quant_;
    double h_ = 0.0;
    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> m2_;
};

/// The spline whose interval rule is the standard t interval: b(y) = y + t.
inline EndpointSpline standard_spline(double q, std::size_t knot_count, double t_quant) {
    if (knot_count < 2) throw std::invalid_argument("standard_spline: need >= 2 knots");
    std::vector<double> values(knot_count);
    const double h = 2.0 * q / static_cast<double>(knot_count - 1);
    for (std::size_t i = 0; i < knot_count; ++i) {
        values[i] = -q + static_cast<double>(i) * h + t_quant;
    }
    return EndpointSpline(std::move(values), q, t_quant);
}

}  // namespace priorci

#endif
