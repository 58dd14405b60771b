#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "epi/families.hpp"
#include "oracles.hpp"

using namespace epi;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("GHZ family analytic values", "[families]") {
    const EntanglementVector max = ghz_y({kPi / 4.0});
    for (double v : max.values) REQUIRE(v == Approx(1.0).margin(1e-15));

    const EntanglementVector zero = ghz_y({0.0});
    for (double v : zero.values) REQUIRE(v == 0.0);

    const EntanglementVector half = ghz_y({kPi / 6.0});
    for (double v : half.values) REQUIRE(v == Approx(0.5).margin(1e-15));

    // analytic values match the numerical Schmidt path
    for (int i = 0; i < 200; ++i) {
        rng::Stream s(71, i);
        const double theta = 2.0 * kPi * s.uniform() - kPi;
        const EntanglementVector a = ghz_y({theta});
        const EntanglementVector n = marginal_vector(ghz_state({theta}), Measure::Y);
        REQUIRE(oracle::max_abs_diff(a.values, n.values) < 1e-10);
    }
}

TEST_CASE("W family analytic values and boundary cases", "[families]") {
    const double a = 1.0 / std::sqrt(3.0);
    const EntanglementVector sym = w_y({a, a, a});
    for (double v : sym.values) REQUIRE(v == Approx(2.0 / 3.0).margin(1e-12));
    REQUIRE(sym.total() == Approx(2.0).margin(1e-12));

    // |alpha|^2 = 3/4: (1/2, 1/4, 1/4), boundary Y1 = Y2 + Y3
    const EntanglementVector edge = w_y({std::sqrt(0.75), std::sqrt(0.125), std::sqrt(0.125)});
    REQUIRE(edge.values[0] == Approx(0.5).margin(1e-12));
    REQUIRE(edge.values[1] == Approx(0.25).margin(1e-12));
    REQUIRE(edge.values[2] == Approx(0.25).margin(1e-12));

    const EntanglementVector prod = w_y({1.0, 0.0, 0.0});
    for (double v : prod.values) REQUIRE(v == 0.0);

    REQUIRE_THROWS_AS(w_y({1.0, 1.0, 0.0}), std::invalid_argument);

    // symmetric dominant cases hit the matching boundary
    const EntanglementVector eb = w_y({std::sqrt(0.2), std::sqrt(0.6), std::sqrt(0.2)});
    REQUIRE(eb.values[1] == Approx(eb.values[0] + eb.values[2]).margin(1e-12));
    const EntanglementVector ec = w_y({std::sqrt(0.2), std::sqrt(0.2), std::sqrt(0.6)});
    REQUIRE(ec.values[2] == Approx(ec.values[0] + ec.values[1]).margin(1e-12));
}

TEST_CASE("W family: analytic agrees with numerics on random draws", "[families]") {
    for (int rep = 0; rep < 300; ++rep) {
        rng::Stream s(72, rep);
        double p[3];
        double total = 0.0;
        for (double& x : p) {
            x = -std::log(1.0 - s.uniform());
            total += x;
        }
        for (double& x : p) x /= total;
        // random phases: only moduli matter
        const auto phase = [&] {
            const double t = 2.0 * kPi * s.uniform();
            return cd(std::cos(t), std::sin(t));
        };
        const WParams params{std::sqrt(p[0]) * phase(), std::sqrt(p[1]) * phase(),
                             std::sqrt(p[2]) * phase()};
        const EntanglementVector analytic = w_y(params);
        const EntanglementVector numeric = marginal_vector(w_state(params), Measure::Y);
        REQUIRE(oracle::max_abs_diff(analytic.values, numeric.values) < 1e-10);

        // phase invariance: recompute with stripped phases
        const WParams bare{std::sqrt(p[0]), std::sqrt(p[1]), std::sqrt(p[2])};
        REQUIRE(oracle::max_abs_diff(w_y(bare).values, analytic.values) < 1e-12);

        // boundary tightness per dominant-coefficient case
        const SlackReport slack = polygon_slack(numeric);
        REQUIRE(slack.satisfied);
        for (int j = 0; j < 3; ++j)
            if (p[j] >= 0.5) REQUIRE(std::abs(slack.slacks[static_cast<std::size_t>(j)]) <= 1e-10);
    }
}

TEST_CASE("W boundary tightness at scale", "[families]") {
    // dominant-weight draws occupy their boundary plane to 1e-9
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
        rng::Stream s(73, i);
        const double pa = 0.5 + 0.5 * s.uniform();
        const double pb = (1.0 - pa) * s.uniform();
        const double pc = 1.0 - pa - pb;
        const EntanglementVector y =
            marginal_vector(w_state({std::sqrt(pa), std::sqrt(pb), std::sqrt(pc)}), Measure::Y);
        worst = std::max(worst, std::abs(y.values[0] - y.values[1] - y.values[2]));
    }
    REQUIRE(worst <= 1e-9);
}

TEST_CASE("family sweeps", "[families]") {
    // GHZ rows live on the cube diagonal and all satisfy the inequality
    const auto ghz_rows = family_sweep(Family::ghz, 101, Measure::Y);
    REQUIRE(ghz_rows.size() == 101);
    for (const auto& row : ghz_rows) {
        REQUIRE(row.slack.satisfied);
        REQUIRE(std::abs(row.vector.values[0] - row.vector.values[1]) < 1e-10);
        REQUIRE(std::abs(row.vector.values[0] - row.vector.values[2]) < 1e-10);
    }

    // W rows with every weight below 1/2 sum to 2
    const auto w_rows = family_sweep(Family::w, 25, Measure::Y);
    int interior = 0;
    for (const auto& row : w_rows) {
        const double pmax = std::max({row.params[0], row.params[1], row.params[2]});
        if (pmax < 0.5) {
            REQUIRE(row.vector.total() == Approx(2.0).margin(1e-10));
            ++interior;
        }
    }
    REQUIRE(interior > 0);

    // degenerate one-point grid
    const auto single = family_sweep(Family::ghz, 1, Measure::Y);
    REQUIRE(single.size() == 1);
    for (double v : single.front().vector.values) REQUIRE(v == 0.0);

    // products carry no marginal entanglement; the concurrence map takes a
    // square root, so rounding noise in lambda_2 surfaces at the 1e-8 scale
    for (const auto& row : family_sweep(Family::product, 9, Measure::Y))
        for (double v : row.vector.values) REQUIRE(v == Approx(0.0).margin(1e-12));
    for (const auto& row : family_sweep(Family::product, 9, Measure::C))
        for (double v : row.vector.values) REQUIRE(v == Approx(0.0).margin(1e-7));

    REQUIRE_THROWS_AS(parse_family("ghx"), std::invalid_argument);
    REQUIRE_THROWS_AS(family_sweep(Family::ghz, 0, Measure::Y), std::invalid_argument);
}
