#ifndef PRIORCI_SPECIAL_FUNCTIONS_HPP
#define PRIORCI_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

// Scalar special functions and densities shared by every solver. All functions
// are pure and safe to call concurrently.

namespace priorci {

inline constexpr double sqrt_two_pi = 2.5066282746310005024;
inline constexpr double inv_sqrt_two_pi = 0.3989422804014326779;

/// Standard normal density.
inline double normal_pdf(double x) {
    return inv_sqrt_two_pi * std::exp(-0.5 * x * x);
}

/// Standard normal CDF via the complementary error function (abs err ~1 ulp).
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// Upper-tail standard normal quantile: returns z with P(Z > z) = a,
/// i.e. normal_cdf(z) = 1 - a. Bracketing bisection, abs tol ~1e-13.
inline double normal_quantile(double a) {
    if (!(a > 0.0 && a < 1.0)) {
        throw std::domain_error("normal_quantile: a must be in (0,1)");
    }
    const double target = 1.0 - a;
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// ln Gamma(x). std::lgamma is required to be thread-safe for x > 0 results
/// we use (no sign handling needed) and accurate to ~1e-15 relative.
inline double ln_gamma(double x) {
    return std::lgamma(x);
}

namespace detail {

inline constexpr int max_series_iter = 500;
inline constexpr double series_eps = 1e-15;
inline constexpr double cf_floor = 1e-300;

// Series expansion for the regularized lower incomplete gamma P(a,x), x <= a+1.
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int i = 0; i < max_series_iter; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * series_eps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - ln_gamma(a));
}

// Continued fraction for the regularized upper incomplete gamma Q(a,x), x > a+1.
inline double gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / cf_floor;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= max_series_iter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < cf_floor) d = cf_floor;
        c = b + an / c;
        if (std::fabs(c) < cf_floor) c = cf_floor;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < series_eps) break;
    }
    return h * std::exp(-x + a * std::log(x) - ln_gamma(a));
}

// Lentz continued fraction for the regularized incomplete beta.
inline double beta_cf(double x, double a, double b) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < cf_floor) d = cf_floor;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_series_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < cf_floor) d = cf_floor;
        c = 1.0 + aa / c;
        if (std::fabs(c) < cf_floor) c = cf_floor;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < cf_floor) d = cf_floor;
        c = 1.0 + aa / c;
        if (std::fabs(c) < cf_floor) c = cf_floor;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < series_eps) break;
    }
    return h / a;
}

}  // namespace detail

/// Regularized lower incomplete gamma P(a,x).
inline double gamma_p(double a, double x) {
    if (a <= 0.0) throw std::domain_error("gamma_p: a must be positive");
    if (x < 0.0) throw std::domain_error("gamma_p: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_cf(a, x);
}

/// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x).
inline double gamma_q(double a, double x) {
    if (a <= 0.0) throw std::domain_error("gamma_q: a must be positive");
    if (x < 0.0) throw std::domain_error("gamma_q: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

/// Regularized incomplete beta I_x(a,b).
inline double beta_inc(double x, double a, double b) {
    if (a <= 0.0 || b <= 0.0) throw std::domain_error("beta_inc: a,b must be positive");
    if (x < 0.0 || x > 1.0) throw std::domain_error("beta_inc: x must be in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front = std::exp(ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) +
                                  a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * detail::beta_cf(x, a, b);
    }
    return 1.0 - front * detail::beta_cf(1.0 - x, b, a);
}

/// Student's t CDF with m degrees of freedom.
inline double t_cdf(double t, int m) {
    if (m < 1) throw std::domain_error("t_cdf: m must be >= 1");
    if (t == 0.0) return 0.5;
    const double x = m / (m + t * t);
    const double half_tail = 0.5 * beta_inc(x, 0.5 * m, 0.5);
    return t > 0.0 ? 1.0 - half_tail : half_tail;
}

/// Upper-tail Student's t quantile: P(T > t) = a for T ~ t with m degrees
/// of freedom. Bracketing bisection on t_cdf; abs err well below 1e-8.
inline double t_quantile(double a, int m) {
    if (!(a > 0.0 && a < 1.0)) {
        throw std::domain_error("t_quantile: a must be in (0,1)");
    }
    if (m < 1) throw std::domain_error("t_quantile: m must be >= 1");
    if (a == 0.5) return 0.0;
    const double target = 1.0 - a;
    double hi = 1.0;
    while (t_cdf(hi, m) < target && hi < 1e300) hi *= 2.0;
    double lo = -1.0;
    while (t_cdf(lo, m) > target && lo > -1e300) lo *= 2.0;
    for (int i = 0; i < 400 && hi - lo > 1e-11 * std::max(1.0, std::fabs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        (t_cdf(mid, m) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Density of the scaled sample standard deviation R = S/sigma, i.e. of
/// sqrt(Q/(n-1)) with Q chi-squared on n-1 degrees of freedom. Zero for r <= 0.
inline double sd_ratio_pdf(double r, int n) {
    if (n < 2) throw std::domain_error("sd_ratio_pdf: n must be >= 2");
    if (r <= 0.0) return 0.0;
    const double k = 0.5 * (n - 1);
    const double log_f = std::numbers::ln2 + k * std::log(k) + (n - 2) * std::log(r) -
                         k * r * r - ln_gamma(k);
    return std::exp(log_f);
}

/// E(R) = sqrt(2/(n-1)) Gamma(n/2) / Gamma((n-1)/2).
inline double sd_ratio_mean(int n) {
    if (n < 2) throw std::domain_error("sd_ratio_mean: n must be >= 2");
    return std::sqrt(2.0 / (n - 1)) * std::exp(ln_gamma(0.5 * n) - ln_gamma(0.5 * (n - 1)));
}

/// CDF of R: P(R <= r).
inline double sd_ratio_cdf(double r, int n) {
    if (n < 2) throw std::domain_error("sd_ratio_cdf: n must be >= 2");
    if (r <= 0.0) return 0.0;
    const double k = 0.5 * (n - 1);
    return gamma_p(k, k * r * r);
}

/// Smallest r with at most `tail_mass` of the R distribution below it.
inline double sd_ratio_lower_bound(int n, double tail_mass) {
    double lo = 0.0, hi = 1.0;
    while (sd_ratio_cdf(hi, n) < tail_mass) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (sd_ratio_cdf(mid, n) < tail_mass ? lo : hi) = mid;
    }
    return lo;
}

/// Largest r with at most `tail_mass` of the R distribution above it.
inline double sd_ratio_upper_bound(int n, double tail_mass) {
    double lo = 1.0, hi = 2.0;
    while (sd_ratio_cdf(hi, n) < 1.0 - tail_mass && hi < 1e6) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (sd_ratio_cdf(mid, n) < 1.0 - tail_mass ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace priorci

#endif
