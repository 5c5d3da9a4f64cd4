// Independent numerical oracles for the test suite. Everything here avoids
// the library's Gauss-Legendre machinery on purpose: values produced by
// these routines cross-check the production quadrature rather than repeat it.

#ifndef PRIORCI_TESTS_ORACLES_HPP
#define PRIORCI_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracles {

/// Composite Simpson rule with 2*halves subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int halves = 512) {
    if (halves < 1) throw std::invalid_argument("simpson: halves must be >= 1");
    const int n = 2 * halves;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    }
    return sum * h / 3.0;
}

/// Adaptive-ish wrapper: doubles the panel count until two successive
/// Simpson estimates agree to rel_tol (or the cap is hit).
inline double simpson_refined(const std::function<double(double)>& f, double a, double b,
                              double rel_tol = 1e-10, int max_halves = 1 << 14) {
    double prev = simpson(f, a, b, 64);
    for (int halves = 128; halves <= max_halves; halves *= 2) {
        const double cur = simpson(f, a, b, halves);
        if (std::fabs(cur - prev) <= rel_tol * std::max(1.0, std::fabs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

inline double normal_density(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(8.0 * std::atan(1.0));
}

}  // namespace oracles

#endif
