// Known-variance pipeline: closed-form rules, the acceptance-region family,
// inversion to a confidence set, and the expected-length / efficiency layer.

#include <catch2/catch_amalgamated.hpp>

#include <priorci/known_variance.hpp>

#include <cmath>

#include "support/oracles.hpp"

using namespace priorci;
using Catch::Approx;

namespace {

// Small family for tests that only exercise the math, not grid resolution.
ProblemConfig coarse_config(double w = 0.1, double alpha = 0.05) {
    ProblemConfig cfg;
    cfg.alpha = alpha;
    cfg.w = w;
    cfg.theta_grid_max = 15.0;
    cfg.theta_grid_step = 0.25;
    return cfg;
}

}  // namespace

TEST_CASE("standard and Pratt closed forms", "[known]") {
    const double z2 = normal_quantile(0.025);   // two-sided half-width
    const double z1 = normal_quantile(0.05);    // one-sided (Pratt) margin

    const auto s0 = standard_interval(0.0, 0.05);
    CHECK(s0.lower == Approx(-z2).margin(1e-12));
    CHECK(s0.upper == Approx(z2).margin(1e-12));

    const auto p0 = pratt_interval(0.0, 0.05);
    CHECK(p0.lower == Approx(-z1).margin(1e-12));
    CHECK(p0.upper == Approx(z1).margin(1e-12));

    // Far from the origin only one side is pinned to zero.
    const auto p10 = pratt_interval(10.0, 0.05);
    CHECK(p10.lower == 0.0);
    CHECK(p10.upper == Approx(10.0 + z1).margin(1e-12));
    const auto pm10 = pratt_interval(-10.0, 0.05);
    CHECK(pm10.lower == Approx(-10.0 - z1).margin(1e-12));
    CHECK(pm10.upper == 0.0);

    // Pratt always contains zero; that is the point of it.
    for (double x : {-7.0, -2.0, -0.3, 0.0, 1.2, 4.0, 25.0}) {
        CHECK(pratt_interval(x, 0.05).contains(0.0));
    }
}

TEST_CASE("ratio margin values and coercivity", "[known][margin]") {
    // At c = 0 the margin is the density ratio itself; at x = theta = 0 that
    // is 1 + w sqrt(2 pi).
    CHECK(ratio_margin(0.0, 0.0, 0.0, 0.1) ==
          Approx(1.0 + 0.1 * sqrt_two_pi).margin(1e-12));

    // Far out the w / phi(x - theta) term explodes.
    CHECK(ratio_margin(20.0, 2.7, 0.0, 0.1) > 1e6);
    CHECK(ratio_margin(-20.0, 2.7, 0.0, 0.1) > 1e6);

    // Even in x at theta = 0.
    for (double x : {0.3, 1.1, 2.9}) {
        CHECK(ratio_margin(x, 2.0, 0.0, 0.1) ==
              Approx(ratio_margin(-x, 2.0, 0.0, 0.1)).margin(1e-12));
    }
}

TEST_CASE("sublevel interval brackets the margin roots", "[known][margin]") {
    for (double theta : {0.0, 1.0, 3.5}) {
        for (double c : {2.0, 2.7, 4.0}) {
            const auto iv = sublevel_interval(c, theta, 0.1, 1e-12);
            REQUIRE(iv.has_value());
            CHECK(iv->lower < iv->upper);
            // Boundary points are roots of the margin.
            CHECK(ratio_margin(iv->lower, c, theta, 0.1) == Approx(0.0).margin(1e-8));
            CHECK(ratio_margin(iv->upper, c, theta, 0.1) == Approx(0.0).margin(1e-8));
            // Strictly inside the margin is negative.
            CHECK(ratio_margin(0.5 * (iv->lower + iv->upper), c, theta, 0.1) < 0.0);
        }
    }

    // Below the minimum of the ratio the sublevel set is empty. The minimum
    // over x of (w + phi(x)) / phi(x - theta) is >= w sqrt(2 pi) ... at
    // theta = 0 it equals 1 + w sqrt(2 pi); anything smaller gives nullopt.
    CHECK_FALSE(sublevel_interval(1.0, 0.0, 0.1).has_value());
    CHECK_THROWS_AS(sublevel_interval(2.7, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(sublevel_interval(-1.0, 0.0, 0.1), std::domain_error);
}

TEST_CASE("acceptance region: coverage, symmetry, bracket", "[known][region]") {
    const auto cfg = coarse_config();
    const double z = normal_quantile(0.025);

    // theta = 0: the region is symmetric, so it must be exactly [-z, z] and
    // the critical constant is the ratio evaluated at z.
    const auto r0 = acceptance_region(0.0, cfg);
    CHECK(r0.lower == Approx(-z).margin(1e-7));
    CHECK(r0.upper == Approx(z).margin(1e-7));
    CHECK(r0.c == Approx(1.0 + cfg.w / normal_pdf(z)).margin(1e-5));
    CHECK(r0.coverage_at(0.0) == Approx(0.95).margin(1e-7));

    for (double theta : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const auto r = acceptance_region(theta, cfg);
        CHECK(r.coverage_at(theta) == Approx(0.95).margin(1e-7));

        // Reflection: A(-theta) = -A(theta).
        const auto rm = acceptance_region(-theta, cfg);
        CHECK(rm.lower == Approx(-r.upper).margin(10.0 * cfg.tol_root));
        CHECK(rm.upper == Approx(-r.lower).margin(10.0 * cfg.tol_root));

        // Analytic bracket on the critical constant.
        const auto [c_lo, c_hi] = critical_constant_bracket(cfg.alpha, cfg.w);
        CHECK(r.c >= c_lo);
        CHECK(r.c <= c_hi);
    }

    // Far from the origin the region approaches the standard one: the
    // deviation is ~1e-2 at theta = 5 and ~1e-7 by theta = 12.
    const auto r5 = acceptance_region(5.0, cfg);
    CHECK(r5.lower == Approx(5.0 - z).margin(2e-2));
    CHECK(r5.upper == Approx(5.0 + z).margin(2e-2));
    const auto r12 = acceptance_region(12.0, cfg);
    CHECK(r12.lower == Approx(12.0 - z).margin(1e-3));
    CHECK(r12.upper == Approx(12.0 + z).margin(1e-3));

    CHECK_THROWS_AS(acceptance_region(0.0, coarse_config(0.0)), std::domain_error);
}

TEST_CASE("critical constant bracket holds across w", "[known][region]") {
    for (double w : {0.01, 0.1, 1.0}) {
        const auto cfg = coarse_config(w);
        const auto [c_lo, c_hi] = critical_constant_bracket(cfg.alpha, w);
        for (double theta = -6.0; theta <= 6.0 + 1e-9; theta += 0.5) {
            const auto r = acceptance_region(theta, cfg);
            CHECK(r.c >= c_lo);
            CHECK(r.c <= c_hi);
        }
    }
}

TEST_CASE("family construction and indexing", "[known][family]") {
    const auto cfg = coarse_config();
    const AcceptanceFamily family(cfg);

    REQUIRE(family.thetas().size() == 121);
    CHECK(family.theta_max() == Approx(15.0));
    CHECK(family.index_of(0.0) == 60);
    CHECK(family.index_of(-15.0) == 0);
    CHECK_THROWS_AS(family.index_of(15.4), std::out_of_range);

    // Regions on the grid match fresh single solves.
    const auto fresh = acceptance_region(2.25, cfg);
    const auto& cached = family.region_at(family.index_of(2.25));
    CHECK(cached.lower == Approx(fresh.lower).margin(1e-12));
    CHECK(cached.upper == Approx(fresh.upper).margin(1e-12));
}

TEST_CASE("confidence set inversion: membership and invariance", "[known][invert]") {
    ProblemConfig cfg;  // default fine grid: inversion quality depends on it
    const AcceptanceFamily family(cfg);

    for (double x : {0.0, 0.4, 1.3, 2.0, 3.7, 5.0, 9.0}) {
        const auto inv = confidence_set_detailed(x, family);
        CHECK(inv.contiguous);
        const auto iv = inv.interval;
        CHECK(iv.lower <= iv.upper);

        // Just inside, x is accepted; just outside, it is not.
        const double pad = 3.0 * cfg.theta_grid_step;
        const auto inside = acceptance_region(0.5 * (iv.lower + iv.upper), cfg);
        CHECK(inside.lower <= x);
        CHECK(x <= inside.upper);
        if (iv.upper + pad < family.theta_max()) {
            const auto above = acceptance_region(iv.upper + pad, cfg);
            CHECK(above.lower > x);
        }

        // l(x) = -u(-x).
        const auto mirror = confidence_set_detailed(-x, family).interval;
        CHECK(iv.lower == Approx(-mirror.upper).margin(10.0 * cfg.tol_root));
        CHECK(iv.upper == Approx(-mirror.lower).margin(10.0 * cfg.tol_root));
    }

    // Far out the interval reverts to the standard one (|x| = 10 is the
    // published benchmark point; the actual deviation there is ~1e-7).
    const double z = normal_quantile(0.025);
    const auto far = confidence_set_detailed(10.0, family).interval;
    CHECK(far.lower == Approx(10.0 - z).margin(1e-3));
    CHECK(far.upper == Approx(10.0 + z).margin(1e-3));
}

TEST_CASE("expected length: standard family is exactly 2z", "[known][length]") {
    const auto cfg = coarse_config();
    const auto family = AcceptanceFamily::standard_family(cfg);
    const double z = normal_quantile(0.025);
    for (double theta : {0.0, 0.7, 2.0, 6.0, 11.0}) {
        CHECK(expected_length(theta, family) == Approx(2.0 * z).margin(1e-10));
    }
}

TEST_CASE("Pratt expected length: closed form vs direct integral", "[known][length]") {
    const double z1 = normal_quantile(0.05);
    for (double theta : {0.0, 0.8, 2.5}) {
        const double direct = oracles::simpson_refined(
            [&](double x) {
                const double len =
                    std::fmax(0.0, x + z1) - std::fmin(0.0, x - z1);
                return len * oracles::normal_density(x - theta);
            },
            theta - 10.0, theta + 10.0, 1e-12);
        CHECK(pratt_expected_length(theta, 0.05) == Approx(direct).margin(1e-9));
    }
    // Frozen origin value: E_0 L = 2 (phi(z) + z Phi(z)).
    CHECK(pratt_expected_length(0.0, 0.05) == Approx(3.331493).margin(1e-6));
}

TEST_CASE("efficiency curve hits the published envelope", "[known][efficiency]") {
    ProblemConfig cfg;  // flagship w = 0.1, alpha = 0.05, fine grid
    const AcceptanceFamily family(cfg);
    const auto curve = efficiency_curve(family);

    CHECK(curve.e_at_zero == Approx(0.8016).margin(2e-3));
    CHECK(curve.e_max == Approx(1.2095).margin(5e-3));

    // Symmetric in theta, and -> 1 at the grid edge.
    const auto& th = curve.thetas;
    const auto& v = curve.values;
    for (std::size_t i = 0; i < th.size(); i += 500) {
        const std::size_t j = th.size() - 1 - i;
        CHECK(v[i] == Approx(v[j]).margin(1e-9));
    }
    CHECK(v.front() == Approx(1.0).margin(1e-2));
    CHECK(v.back() == Approx(1.0).margin(1e-2));
}

TEST_CASE("weight limits: Pratt below, standard above", "[known][efficiency]") {
    const double z = normal_quantile(0.025);

    // w -> 0: expected length at the origin approaches the Pratt value, so
    // the efficiency approaches 0.7223.
    auto tiny = coarse_config(1e-6);
    const AcceptanceFamily near_pratt(tiny);
    const double ratio0 = expected_length(0.0, near_pratt) / (2.0 * z);
    CHECK(ratio0 * ratio0 == Approx(0.7223).margin(5e-3));

    // w large: the value of shortness near the origin is priced out and the
    // rule collapses onto the standard interval everywhere.
    auto big = coarse_config(100.0);
    const AcceptanceFamily near_standard(big);
    for (double theta : {0.0, 1.0, 4.0}) {
        CHECK(expected_length(theta, near_standard) ==
              Approx(2.0 * z).margin(2e-2));
    }
}

TEST_CASE("level monotonicity: 90 percent set inside 95 percent set", "[known][invert]") {
    const AcceptanceFamily f95{coarse_config(0.1, 0.05)};
    const AcceptanceFamily f90{coarse_config(0.1, 0.10)};
    for (double x : {0.0, 0.9, 2.1, 4.2}) {
        const auto wide = confidence_set_detailed(x, f95).interval;
        const auto narrow = confidence_set_detailed(x, f90).interval;
        CHECK(narrow.lower >= wide.lower - 1e-6);
        CHECK(narrow.upper <= wide.upper + 1e-6);
    }
}

TEST_CASE("Ghosh-Pratt path agrees with direct set-length quadrature",
          "[known][length][oracle]") {
    ProblemConfig cfg;  // default fine grid
    const AcceptanceFamily family(cfg);

    for (double theta : {0.0, 1.0, 3.0}) {
        // Direct oracle: integrate the length of the inverted set against the
        // sampling density of X. Completely bypasses the coverage identity.
        const double direct = oracles::simpson(
            [&](double x) {
                return confidence_set(x, family).length() *
                       oracles::normal_density(x - theta);
            },
            theta - 9.0, theta + 9.0, 256);
        CHECK(expected_length(theta, family) == Approx(direct).margin(5e-3));
    }
}
