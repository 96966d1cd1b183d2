#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gslide/heatengine.hpp"

using namespace gslide;

TEST_CASE("current: linear in load and population, exact constants") {
    CHECK(current(1e-6, 0.0) == 0.0);
    CHECK_THAT(current(1e-6, 1.0),
               Catch::Matchers::WithinRel(2.4341348059762054e-10, 1e-12));
    CHECK_THAT(current(2e-6, 0.5) / current(1e-6, 0.5), Catch::Matchers::WithinRel(2.0, 1e-12));
}

TEST_CASE("voltage: log correction and error on vanishing population") {
    CHECK_THAT(voltage(1.9, 300.0, 0.4, 0.4), Catch::Matchers::WithinRel(1.9, 1e-15));
    CHECK_THAT(voltage(1.9, 300.0, 0.1, 1.0),
               Catch::Matchers::WithinRel(1.8404735706686711, 1e-12));
    // thermal ratio cancels the splitting exactly
    const double ratio = std::exp(-1.9 / (constants::kb_ev_k * 300.0));
    CHECK_THAT(voltage(1.9, 300.0, ratio, 1.0), Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THROWS_AS(voltage(1.9, 300.0, 0.0, 0.5), std::runtime_error);
}

TEST_CASE("ladder input power arithmetic") {
    // one rung 0.9 eV below the BTTS with population 0.25 at gamma_r = 1e-2 eV
    const double expect = constants::e_c * (1e-2 / constants::hbar_ev_s) * 0.25 * 0.9;
    CHECK_THAT(input_power_ladder(1e-2, {0.25}, {-0.9}, 0.0),
               Catch::Matchers::WithinRel(expect, 1e-12));
    CHECK(input_power_ladder(1e-2, {}, {}, 0.0) == 0.0);
    CHECK_THROWS_AS(input_power_ladder(1e-2, {0.1}, {}, 0.0), std::invalid_argument);
}

TEST_CASE("site input power: N identical sites give N times one site") {
    const std::vector<double> g1{0.8}, e1{0.2}, w1{1.8};
    const double p1 = input_power_site(1e-2, 300.0, g1, e1, w1);
    CHECK(p1 > 0.0);
    const std::vector<double> g4(4, 0.8), e4(4, 0.2), w4(4, 1.8);
    CHECK_THAT(input_power_site(1e-2, 300.0, g4, e4, w4),
               Catch::Matchers::WithinRel(4.0 * p1, 1e-12));
    // fully excited sites cost nothing
    CHECK(input_power_site(1e-2, 300.0, {0.0, 0.0}, {1.0, 1.0}, {1.8, 1.8}) == 0.0);
}

TEST_CASE("load optimisation finds an interior analytic maximum") {
    // p(g) = g / (1 + (g/g0)^2) peaks exactly at g0
    const double g0 = 3.7e-6;
    auto p = [g0](double g) { return g / (1.0 + (g / g0) * (g / g0)); };
    const LoadOptimum opt = optimize_load(p);
    CHECK(opt.unimodal);
    CHECK_THAT(opt.gamma_t_star, Catch::Matchers::WithinRel(g0, 0.02));
    CHECK_THAT(opt.p_out_star, Catch::Matchers::WithinRel(g0 / 2.0, 1e-3));
    CHECK(static_cast<int>(opt.trace.size()) == 60);
}

TEST_CASE("load optimisation flags non-unimodal profiles") {
    auto p = [](double g) {
        const double x = std::log10(g);
        return std::exp(-(x + 9.0) * (x + 9.0)) + 2.0 * std::exp(-(x + 3.0) * (x + 3.0));
    };
    const LoadOptimum opt = optimize_load(p);
    CHECK_FALSE(opt.unimodal);
    CHECK_THAT(opt.gamma_t_star, Catch::Matchers::WithinRel(1e-3, 0.1));
}

TEST_CASE("load scan argument validation") {
    auto p = [](double g) { return g; };
    LoadScan bad;
    bad.points = 2;
    CHECK_THROWS_AS(optimize_load(p, bad), std::invalid_argument);
    bad = LoadScan{};
    bad.gamma_min = 0.0;
    CHECK_THROWS_AS(optimize_load(p, bad), std::invalid_argument);
}
