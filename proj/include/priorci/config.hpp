#ifndef PRIORCI_CONFIG_HPP
#define PRIORCI_CONFIG_HPP

#include <stdexcept>

#include "priorci/special_functions.hpp"

namespace priorci {

/// Problem settings shared by all solvers. Defaults are the flagship
/// configuration: n=24, 95% level, mixture weight 0.1, spline half-width 8.
struct ProblemConfig {
    int n = 24;              // sample size
    double alpha = 0.05;     // miscoverage level
    double w = 0.1;          // nonnegative mixture weight
    double q = 8.0;          // spline half-width

    double theta_grid_max = 15.0;
    double theta_grid_step = 0.01;

    // Coverage-constraint grid for the unknown-variance optimizer; the result
    // is re-verified on a 4x denser grid.
    double constraint_theta_max = 12.0;
    double constraint_theta_step = 0.25;

    int quadrature_order = 10;
    int radial_panels = 40;

    double tol_root = 1e-10;      // abs tolerance for root-finding brackets
    double tol_coverage = 1e-8;   // abs tolerance for coverage equations

    void validate() const {
        if (n < 2) throw std::invalid_argument("ProblemConfig: n must be >= 2");
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw std::invalid_argument("ProblemConfig: alpha must be in (0,1)");
        }
        if (w < 0.0) throw std::invalid_argument("ProblemConfig: w must be nonnegative");
        if (!(q > 0.0)) throw std::invalid_argument("ProblemConfig: q must be positive");
        if (!(theta_grid_step > 0.0) || !(theta_grid_max > 0.0)) {
            throw std::invalid_argument("ProblemConfig: grid parameters must be positive");
        }
        if (!(tol_root > 0.0) || !(tol_coverage > 0.0)) {
            throw std::invalid_argument("ProblemConfig: tolerances must be positive");
        }
        if (quadrature_order < 1 || radial_panels < 1) {
            throw std::invalid_argument("ProblemConfig: quadrature settings must be positive");
        }
        // Keep the grid wide enough that reversion to the standard interval is
        // observable at its edge.
        if (theta_grid_max < q + normal_quantile(0.5 * alpha)) {
            throw std::invalid_argument(
                "ProblemConfig: theta_grid_max must be at least q + z_{alpha/2}");
        }
    }
};

}  // namespace priorci

#endif
