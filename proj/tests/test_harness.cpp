#include "eignets/harness.hpp"

#include "eignets/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace eignets;

namespace {
const double inf = std::numeric_limits<double>::infinity();
}

TEST_CASE("slope fitting") {
    SUBCASE("exact power law") {
        std::vector<std::pair<double, double>> pts;
        for (double x : {1.0, 2.0, 4.0, 8.0, 16.0}) pts.emplace_back(x, std::pow(x, -2.0));
        const slope_fit fit = fit_slope(pts);
        CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-12));
        CHECK(fit.residual <= 1e-12);
    }

    SUBCASE("constant data") {
        std::vector<std::pair<double, double>> pts;
        for (double x : {1.0, 2.0, 4.0, 8.0}) pts.emplace_back(x, 3.5);
        CHECK(fit_slope(pts).slope == doctest::Approx(0.0));
    }

    SUBCASE("one percent noise shifts the slope by well under 0.05") {
        rng gen(2);
        std::vector<std::pair<double, double>> pts;
        for (double x = 1.0; x <= 256.0; x *= 2.0)
            pts.emplace_back(x, 3.0 / x * (1.0 + 0.01 * gen.normal()));
        CHECK(fit_slope(pts).slope == doctest::Approx(-1.0).epsilon(0.05));
    }

    SUBCASE("too few or degenerate pairs rejected") {
        std::vector<std::pair<double, double>> three = {{1, 1}, {2, 1}, {4, 1}};
        CHECK_THROWS_AS((void)fit_slope(three), std::invalid_argument);
        std::vector<std::pair<double, double>> neg = {{1, 1}, {2, 1}, {4, 1}, {8, -1}};
        CHECK_THROWS_AS((void)fit_slope(neg), std::invalid_argument);
    }
}

TEST_CASE("K-functional realization") {
    auto m = make_manifold("circle");
    const cutoff_function cf;

    SUBCASE("zero function") {
        const spectral_vector z(m, std::vector<double>(9, 0.0));
        CHECK(kfunc_realization(z, 2.0, 2.0, 16.0, cf) == 0.0);
    }

    SUBCASE("polynomials below L/2 leave only the derivative term") {
        rng gen(3);
        std::vector<double> c(m->basis_count(6.0));
        for (double& v : c) v = gen.normal();
        const spectral_vector f(m, std::move(c));
        const double L = 16.0, r = 2.0;
        const double got = kfunc_realization(f, r, 2.0, L, cf);
        const double expected = std::pow(L, -r) * lp_norm(delta_star(f, r), 2.0);
        CHECK(got == doctest::Approx(expected).epsilon(1e-9));
    }

    SUBCASE("|sin| realization decays like 1/L") {
        const target_function f = make_target(m, "abs_sin", 2048, 0);
        std::vector<std::pair<double, double>> pts;
        for (double L : {8.0, 16.0, 32.0, 64.0})
            pts.emplace_back(L, kfunc_realization(f.coeffs, 2.0, inf, L, cf));
        CHECK(fit_slope(pts).slope == doctest::Approx(-1.0).epsilon(0.25));
    }

    SUBCASE("r below one rejected") {
        const spectral_vector z(m, std::vector<double>(3, 1.0));
        CHECK_THROWS_AS((void)kfunc_realization(z, 0.5, 2.0, 8.0, cf), std::invalid_argument);
    }
}

TEST_CASE("targets") {
    auto m = make_manifold("circle");
    auto s = make_manifold("sphere");

    SUBCASE("abs_sin expansion matches the closed form") {
        const target_function f = make_target(m, "abs_sin", 1024, 0);
        for (double x : {0.0, 0.4, 1.9, 3.3, 5.5}) {
            const point p = circle_point(x);
            CHECK(std::abs(synth_eval(f.coeffs, p) - std::abs(std::sin(x))) <= 1e-3);
        }
        CHECK(f.has_exact);
    }

    SUBCASE("power target decays at the requested rate") {
        const target_function f = make_target(m, "power:2.5", 64, 7);
        CHECK(std::abs(f.coeffs[2 * 8 - 1]) == doctest::Approx(std::pow(8.0, -2.5)));
    }

    SUBCASE("zonal target lives on the m = 0 line") {
        const target_function f = make_target(s, "zonal:3", 8, 0);
        CHECK(f.coeffs[2] == doctest::Approx(std::pow(2.0, -3.0))); // l = 1, m = 0 at index 2
        CHECK(f.coeffs[1] == 0.0);
        CHECK(f.coeffs[3] == 0.0);
    }

    SUBCASE("unknown ids rejected") {
        CHECK_THROWS_AS((void)make_target(m, "mystery", 8, 0), std::invalid_argument);
    }
}

TEST_CASE("nested stages") {
    auto m = make_manifold("circle");
    const std::vector<int> sweep = {4, 8, 16};
    const auto stages = nested_stages(m, sweep);
    REQUIRE(stages.size() == 3);
    for (const auto& st : stages) {
        CHECK(st.cert.uniform); // delta <= 2q certified per level
        CHECK(st.rule.certified_order() >= 2.0 * m->product_factor() * st.m);
        CHECK(st.rule.residual() <= 1e-9);
    }
    // nesting of the thinned outputs
    for (const point& p : stages[0].centers.points()) CHECK(stages[1].centers.contains(p));
}

TEST_CASE("rate experiment") {
    experiment_config cfg;
    cfg.target = "abs_sin";
    cfg.sweep = {8, 16, 32, 64};
    cfg.slope_lo = -1.5;
    cfg.slope_hi = -0.7;

    SUBCASE("|sin| converges at first order, continuous and discrete routes") {
        const rate_report rep = rate_experiment(cfg);
        CHECK(rep.pass);
        CHECK(rep.fit.slope == doctest::Approx(-1.0).epsilon(0.3));
        REQUIRE(rep.constants.size() == rep.points.size()); // discrete route ran (p = inf)
        std::vector<std::pair<double, double>> disc;
        for (std::size_t i = 0; i < rep.points.size(); ++i)
            disc.emplace_back(rep.points[i].first, rep.constants[i]);
        CHECK(fit_slope(disc).slope == doctest::Approx(-1.0).epsilon(0.35));
    }

    SUBCASE("power target with tail-oracle smoothness 1.5") {
        experiment_config c3 = cfg;
        c3.target = "power:2.5";
        c3.sweep = {16, 32, 64, 128};
        c3.slope_lo = -1.8;
        c3.slope_hi = -1.2;
        const rate_report rep = rate_experiment(c3);
        CHECK(rep.pass);
        CHECK(rep.fit.slope == doctest::Approx(-1.5).epsilon(0.2));
    }

    SUBCASE("band-limited targets collapse once m clears the band") {
        experiment_config c2 = cfg;
        c2.target = "bandlimited:4";
        c2.slope_lo = std::numeric_limits<double>::quiet_NaN();
        const rate_report rep = rate_experiment(c2);
        // reproduction regime: errors at the residual floor for m >= 16
        CHECK(rep.points.back().second <= 1e-8);
    }

    SUBCASE("deterministic given config and seed") {
        const rate_report r1 = rate_experiment(cfg);
        const rate_report r2 = rate_experiment(cfg);
        REQUIRE(r1.points.size() == r2.points.size());
        for (std::size_t i = 0; i < r1.points.size(); ++i)
            CHECK(r1.points[i].second == r2.points[i].second);
        CHECK(r1.fit.slope == r2.fit.slope);
    }
}

TEST_CASE("coefficient-bound experiment") {
    experiment_config cfg;
    cfg.sweep = {16, 32, 64, 128};
    cfg.trials = 10;

    SUBCASE("sup-norm slope stays under beta - alpha") {
        const rate_report rep = coeff_bound_experiment(cfg);
        CHECK(rep.bound_slope == doctest::Approx(3.0));
        CHECK(rep.fit.slope <= 3.0 + cfg.slack);
        CHECK(rep.pass);
    }

    SUBCASE("p = 1 exponent is beta") {
        experiment_config c1 = cfg;
        c1.p = 1.0;
        c1.sweep = {8, 16, 32, 64};
        const rate_report rep = coeff_bound_experiment(c1);
        CHECK(rep.bound_slope == doctest::Approx(4.0));
        CHECK(rep.pass);
    }

    SUBCASE("monotone in the trial budget") {
        experiment_config small = cfg;
        small.trials = 3;
        const rate_report lo = coeff_bound_experiment(small);
        const rate_report hi = coeff_bound_experiment(cfg);
        for (std::size_t i = 0; i < lo.points.size(); ++i)
            CHECK(hi.points[i].second >= lo.points[i].second - 1e-15);
    }
}

TEST_CASE("bernstein experiment") {
    experiment_config cfg;
    cfg.sweep = {16, 32, 64, 128};
    cfg.trials = 8;

    SUBCASE("r = 1 sup-norm") {
        cfg.r = 1.0;
        const rate_report rep = bernstein_experiment(cfg);
        CHECK(rep.fit.slope <= 1.0 + cfg.slack);
        CHECK(rep.pass);
    }

    SUBCASE("r = 2 in L2") {
        cfg.r = 2.0;
        cfg.p = 2.0;
        const rate_report rep = bernstein_experiment(cfg);
        CHECK(rep.fit.slope <= 2.0 + 0.25);
        CHECK(rep.pass);
    }

    SUBCASE("regime violations rejected") {
        cfg.r = 3.5; // beta - alpha/p' = 3 at p = inf
        CHECK_THROWS_AS((void)bernstein_experiment(cfg), std::invalid_argument);
    }
}

TEST_CASE("simultaneous experiment") {
    experiment_config cfg;
    cfg.target = "power:4";
    cfg.p = 2.0;
    cfg.r = 2.0;
    cfg.gamma = 1.0;
    cfg.sweep = {8, 16, 32, 64};

    SUBCASE("budget-saturated slope sits at gamma - r") {
        const rate_report rep = simultaneous_experiment(cfg);
        CHECK(rep.fit.slope == doctest::Approx(-1.0).epsilon(0.3));
        CHECK(rep.pass);
        // hypothesis ratio stays bounded (near one by construction)
        for (double h : rep.constants) CHECK(h <= 1.5);
    }

    SUBCASE("gamma = r keeps derivative errors bounded") {
        experiment_config c2 = cfg;
        c2.gamma = 2.0;
        c2.slack = 0.35;
        const rate_report rep = simultaneous_experiment(c2);
        CHECK(std::abs(rep.fit.slope) <= 0.35);
    }

    SUBCASE("pure operator route collapses for over-smooth targets") {
        experiment_config c3 = cfg;
        c3.saturate_budget = false;
        c3.slope_lo = -10.0; // report-only band
        c3.slope_hi = 10.0;
        const rate_report rep = simultaneous_experiment(c3);
        CHECK(rep.fit.slope <= -2.0); // decays faster than the theorem rate
    }

    SUBCASE("band-limited target collapses past its band in pure mode") {
        experiment_config c4 = cfg;
        c4.target = "bandlimited:4";
        c4.saturate_budget = false;
        c4.slope_lo = std::numeric_limits<double>::quiet_NaN();
        const rate_report rep = simultaneous_experiment(c4);
        CHECK(rep.points.back().second <= 1e-7);
    }

    SUBCASE("regime checks") {
        experiment_config bad = cfg;
        bad.gamma = 3.0;
        bad.r = 2.0; // gamma > r
        CHECK_THROWS_AS((void)simultaneous_experiment(bad), std::invalid_argument);
    }

    SUBCASE("sweeps that cannot support a slope fit are rejected") {
        experiment_config narrow = cfg;
        narrow.sweep = {16, 32, 64}; // only 3 points
        CHECK_THROWS_AS((void)simultaneous_experiment(narrow), std::invalid_argument);
        narrow.sweep = {16, 24, 32, 48}; // spans only 3x
        CHECK_THROWS_AS((void)simultaneous_experiment(narrow), std::invalid_argument);
    }
}

TEST_CASE("localization experiment") {
    experiment_config cfg;
    cfg.sweep = {8, 16, 32, 64};

    SUBCASE("circle constant is stable within a factor of two") {
        const localization_report rep = localization_experiment(cfg);
        REQUIRE(rep.fitted_c.size() == 4);
        CHECK(rep.spread <= 2.0);
        CHECK(rep.pass);
    }

    SUBCASE("L = 1 reduces to the constant kernel against the envelope") {
        experiment_config tiny = cfg;
        tiny.sweep = {1};
        const localization_report rep = localization_experiment(tiny);
        // Phi_1 == 1 pointwise; the fitted constant is sup rho^S = pi^4
        CHECK(rep.fitted_c[0] == doctest::Approx(std::pow(pi, 4)).epsilon(1e-3));
    }

    SUBCASE("sphere variant runs with alpha = 2") {
        experiment_config sp = cfg;
        sp.manifold = "sphere";
        sp.sweep = {4, 8, 16, 32};
        const localization_report rep = localization_experiment(sp);
        CHECK(rep.spread <= 4.0); // reported; the acceptance band applies to the circle
    }
}

TEST_CASE("mz experiment") {
    experiment_config cfg;
    cfg.sweep = {32, 64};
    cfg.trials = 25;
    const mz_sweep_report rep = mz_experiment(cfg);
    REQUIRE(rep.reports.size() == 2);
    for (const mz_report& r : rep.reports) {
        CHECK(r.ratio_min >= 0.5);
        CHECK(r.ratio_max <= 4.0);
    }
    CHECK(rep.pass);
}
