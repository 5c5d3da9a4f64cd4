#ifndef PRIORCI_ROOT_FINDING_HPP
#define PRIORCI_ROOT_FINDING_HPP

#include <cmath>
#include <stdexcept>

namespace priorci {

/// Bisection on a bracketing interval: requires sign(f(lo)) != sign(f(hi)).
/// Returns the midpoint of the final bracket, whose width is at most xtol.
template <class F>
double bisect_root(F&& f, double lo, double hi, double xtol) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) {
        throw std::invalid_argument("bisect_root: endpoints do not bracket a sign change");
    }
    for (int i = 0; i < 400 && hi - lo > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Locate the unique sign change of f (negative left of it, positive right of
/// it) by expanding the initial bracket geometrically from its center, then
/// bisecting. Used for derivative-sign searches on coercive functions.
template <class F>
double bisect_sign_change(F&& f, double lo, double hi, double xtol) {
    const double center = 0.5 * (lo + hi);
    double step = center - lo;
    int guard = 0;
    while (f(lo) >= 0.0) {
        step *= 2.0;
        lo = center - step;
        if (++guard > 200) throw std::runtime_error("bisect_sign_change: no negative side");
    }
    step = hi - center;
    guard = 0;
    while (f(hi) <= 0.0) {
        step *= 2.0;
        hi = center + step;
        if (++guard > 200) throw std::runtime_error("bisect_sign_change: no positive side");
    }
    for (int i = 0; i < 400 && hi - lo > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace priorci

#endif
