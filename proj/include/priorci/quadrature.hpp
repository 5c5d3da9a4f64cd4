#ifndef PRIORCI_QUADRATURE_HPP
#define PRIORCI_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace priorci {

/// Gauss-Legendre rule on [-1,1]. Nodes are roots of the Legendre polynomial,
/// found by Newton iteration from the Chebyshev initial guess.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int order) {
        if (order < 1) throw std::invalid_argument("GaussLegendre: order must be >= 1");
        nodes.resize(order);
        weights.resize(order);
        const int m = (order + 1) / 2;
        for (int i = 0; i < m; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                // Legendre recurrence for P_order(x) and its derivative.
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= order; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = order * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-15) break;
            }
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        if (order % 2 == 1) nodes[order / 2] = 0.0;
    }
};

/// Integrate f over [a,b] with a single Gauss-Legendre panel.
template <class F>
double gauss_panel(F&& f, double a, double b, const GaussLegendre& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return half * sum;
}

/// Composite Gauss-Legendre over [a,b] with equal panels.
template <class F>
double integrate(F&& f, double a, double b, int panels, const GaussLegendre& rule) {
    if (panels < 1) throw std::invalid_argument("integrate: panels must be >= 1");
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        sum += gauss_panel(f, a + p * h, a + (p + 1) * h, rule);
    }
    return sum;
}

/// Composite rule with panels split at the given sorted breakpoints.
template <class F>
double integrate_segmented(F&& f, const std::vector<double>& breakpoints,
                           const GaussLegendre& rule) {
    if (breakpoints.size() < 2) {
        throw std::invalid_argument("integrate_segmented: need at least two breakpoints");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        sum += gauss_panel(f, breakpoints[i], breakpoints[i + 1], rule);
    }
    return sum;
}

}  // namespace priorci

#endif
