#ifndef PRIORCI_NUMERIC_OPTIM_HPP
#define PRIORCI_NUMERIC_OPTIM_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace priorci {

/// Unconstrained smooth minimization by BFGS with forward-difference
/// gradients and Armijo backtracking. The objective may return +inf to
/// reject an iterate (the line search backtracks past it); the start
/// point must be finite.
struct BfgsOptions {
    int max_iterations = 200;
    double gradient_tol = 1e-6;
    double step_tol = 1e-12;
    double fd_step = 1e-6;
    int max_backtracks = 40;
    double armijo_c1 = 1e-4;
};

struct BfgsReport {
    double value = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    bool converged = false;
};

namespace detail {

inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double fx, double h) {
    const std::size_t d = x.size();
    std::vector<double> g(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double xi = x[i];
        x[i] = xi + h;
        double fp = f(x);
        if (std::isfinite(fp)) {
            g[i] = (fp - fx) / h;
        } else {
            // Forward step left the feasible region; difference backwards.
            x[i] = xi - h;
            fp = f(x);
            g[i] = std::isfinite(fp) ? (fx - fp) / h : 0.0;
        }
        x[i] = xi;
    }
    return g;
}

}  // namespace detail

inline BfgsReport bfgs_minimize(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double>& x, const BfgsOptions& opt = {}) {
    const std::size_t d = x.size();
    BfgsReport report;
    double fx = f(x);
    if (!std::isfinite(fx)) {
        report.value = fx;
        return report;
    }
    std::vector<double> g = detail::fd_gradient(f, x, fx, opt.fd_step);
    // Inverse Hessian approximation, stored dense row-major.
    std::vector<double> hinv(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) hinv[i * d + i] = 1.0;

    std::vector<double> dir(d), x_new(d), g_new(d), s(d), y(d), hy(d);
    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        report.iterations = iter + 1;
        double gmax = 0.0;
        for (double gi : g) gmax = std::fmax(gmax, std::fabs(gi));
        if (gmax < opt.gradient_tol) {
            report.converged = true;
            break;
        }

        for (std::size_t i = 0; i < d; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) acc += hinv[i * d + j] * g[j];
            dir[i] = -acc;
        }
        double slope = 0.0;
        for (std::size_t i = 0; i < d; ++i) slope += dir[i] * g[i];
        if (slope >= 0.0) {
            // Curvature estimate went bad (finite-difference noise); restart
            // from steepest descent.
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) hinv[i * d + j] = (i == j) ? 1.0 : 0.0;
                dir[i] = -g[i];
            }
            slope = 0.0;
            for (std::size_t i = 0; i < d; ++i) slope += dir[i] * g[i];
            if (slope >= -opt.gradient_tol * opt.gradient_tol) {
                report.converged = true;
                break;
            }
        }

        double alpha = 1.0;
        double f_new = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int bt = 0; bt < opt.max_backtracks; ++bt) {
            for (std::size_t i = 0; i < d; ++i) x_new[i] = x[i] + alpha * dir[i];
            f_new = f(x_new);
            if (std::isfinite(f_new) && f_new <= fx + opt.armijo_c1 * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;

        double step_inf = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            s[i] = x_new[i] - x[i];
            step_inf = std::fmax(step_inf, std::fabs(s[i]));
        }
        g_new = detail::fd_gradient(f, x_new, f_new, opt.fd_step);
        double ys = 0.0, ss = 0.0, yy = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            y[i] = g_new[i] - g[i];
            ys += y[i] * s[i];
            ss += s[i] * s[i];
            yy += y[i] * y[i];
        }
        x = x_new;
        fx = f_new;
        g = g_new;
        if (step_inf < opt.step_tol) {
            report.converged = true;
            break;
        }
        // BFGS inverse update; skipped when the curvature condition fails.
        if (ys > 1e-12 * std::sqrt(ss * yy) && ys > 0.0) {
            const double rho = 1.0 / ys;
            for (std::size_t i = 0; i < d; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < d; ++j) acc += hinv[i * d + j] * y[j];
                hy[i] = acc;
            }
            double yhy = 0.0;
            for (std::size_t i = 0; i < d; ++i) yhy += y[i] * hy[i];
            const double beta = rho * rho * yhy + rho;
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    hinv[i * d + j] += beta * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
        }
    }
    report.value = fx;
    return report;
}

}  // namespace priorci

#endif
