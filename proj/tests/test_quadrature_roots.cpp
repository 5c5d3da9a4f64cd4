// Gauss-Legendre quadrature and bisection helpers.

#include <catch2/catch_amalgamated.hpp>

#include <priorci/quadrature.hpp>
#include <priorci/root_finding.hpp>
#include <priorci/special_functions.hpp>

#include <cmath>

#include "support/oracles.hpp"

using namespace priorci;
using Catch::Approx;

TEST_CASE("Gauss-Legendre nodes and weights", "[quadrature]") {
    for (int order : {2, 5, 10, 20}) {
        const GaussLegendre rule(order);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(order));

        double wsum = 0.0;
        for (std::size_t i = 0; i < rule.weights.size(); ++i) {
            wsum += rule.weights[i];
            CHECK(rule.weights[i] > 0.0);
            // Symmetric rule: node i mirrors node order-1-i.
            CHECK(rule.nodes[i] == Approx(-rule.nodes[rule.nodes.size() - 1 - i]).margin(1e-13));
        }
        CHECK(wsum == Approx(2.0).margin(1e-13));
    }

    // An order-n rule integrates polynomials up to degree 2n-1 exactly.
    const GaussLegendre rule(5);
    const double p9 = gauss_panel([](double x) { return std::pow(x, 9) + x * x; },
                                  -1.0, 1.0, rule);
    CHECK(p9 == Approx(2.0 / 3.0).margin(1e-14));
}

TEST_CASE("panelized integration matches known integrals", "[quadrature]") {
    const GaussLegendre rule(10);
    CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 2.0, 8, rule) ==
          Approx(std::exp(2.0) - 1.0).epsilon(1e-13));
    CHECK(integrate([](double x) { return normal_pdf(x); }, -8.0, 8.0, 40, rule) ==
          Approx(1.0).margin(1e-13));

    // Segmented form with breakpoints at the kink of |x|.
    const double v = integrate_segmented([](double x) { return std::fabs(x); },
                                         {-1.0, 0.0, 2.0}, rule);
    CHECK(v == Approx(2.5).margin(1e-13));
    CHECK_THROWS_AS(integrate_segmented([](double) { return 1.0; }, {0.0}, rule),
                    std::invalid_argument);
}

TEST_CASE("bisect_root finds bracketed roots", "[roots]") {
    const double r = bisect_root([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-12);
    CHECK(r == Approx(std::sqrt(2.0)).margin(1e-11));

    // Decreasing function brackets too.
    const double r2 = bisect_root([](double x) { return std::cos(x); }, 0.0, 3.0, 1e-12);
    CHECK(r2 == Approx(2.0 * std::atan(1.0)).margin(1e-11));

    CHECK_THROWS_AS(bisect_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-8),
                    std::invalid_argument);
}

TEST_CASE("bisect_sign_change expands and locates the crossing", "[roots]") {
    // Crossing far outside the seed bracket: the expansion has to find it.
    const double c = bisect_sign_change([](double x) { return x - 37.5; }, -1.0, 1.0, 1e-11);
    CHECK(c == Approx(37.5).margin(1e-10));

    CHECK_THROWS(bisect_sign_change([](double) { return 1.0; }, -1.0, 1.0, 1e-8));
}
