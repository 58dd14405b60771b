// Analytic three-qubit state families (GHZ class, W class, products) with
// closed-form marginal Y vectors, plus deterministic parameter sweeps.

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "epi/measures.hpp"
#include "epi/polytope.hpp"
#include "epi/state.hpp"

namespace epi {

struct GhzParams {
    double theta = 0.0;  // cos(theta)|000> + sin(theta)|111>
};

struct WParams {
    cd alpha{0.0, 0.0};  // alpha|100> + beta|010> + gamma|001>
    cd beta{0.0, 0.0};
    cd gamma{0.0, 0.0};
};

inline PureState ghz_state(const GhzParams& p) {
    if (!std::isfinite(p.theta)) throw std::invalid_argument("ghz_state: non-finite angle");
    std::vector<cd> amps(8, cd{0.0, 0.0});
    amps[0] = std::cos(p.theta);
    amps[7] = std::sin(p.theta);
    return make_state({2, 2, 2}, std::move(amps), Normalize::renorm);
}

// Y_1 = Y_2 = Y_3 = 1 - |cos 2theta|.
inline EntanglementVector ghz_y(const GhzParams& p) {
    const double y = 1.0 - std::abs(std::cos(2.0 * p.theta));
    return EntanglementVector{Measure::Y, {y, y, y}};
}

namespace detail {

inline void check_w_params(const WParams& p) {
    const double n = std::norm(p.alpha) + std::norm(p.beta) + std::norm(p.gamma);
    if (std::abs(n - 1.0) > kNormTol)
        throw std::invalid_argument("w params not normalized: |alpha|^2+|beta|^2+|gamma|^2 = " +
                                    std::to_string(n));
}

}  // namespace detail

inline PureState w_state(const WParams& p) {
    detail::check_w_params(p);
    std::vector<cd> amps(8, cd{0.0, 0.0});
    amps[4] = p.alpha;  // |100>
    amps[2] = p.beta;   // |010>
    amps[1] = p.gamma;  // |001>
    return make_state({2, 2, 2}, std::move(amps), Normalize::renorm);
}

// Case analysis on the dominant weight: with pa = |alpha|^2 etc.,
//   pa >= 1/2: (2(pb+pc), 2pb, 2pc)  -- boundary Y1 = Y2 + Y3
//   pb, pc >= 1/2: symmetric
//   all < 1/2: (2pa, 2pb, 2pc)       -- the plane Y1+Y2+Y3 = 2
// The branch formulas coincide at weight exactly 1/2.
inline EntanglementVector w_y(const WParams& p) {
    detail::check_w_params(p);
    const double pa = std::norm(p.alpha);
    const double pb = std::norm(p.beta);
    const double pc = std::norm(p.gamma);
    EntanglementVector ev;
    ev.measure = Measure::Y;
    if (pa >= 0.5)
        ev.values = {2.0 * (pb + pc), 2.0 * pb, 2.0 * pc};
    else if (pb >= 0.5)
        ev.values = {2.0 * pa, 2.0 * (pa + pc), 2.0 * pc};
    else if (pc >= 0.5)
        ev.values = {2.0 * pa, 2.0 * pb, 2.0 * (pa + pb)};
    else
        ev.values = {2.0 * pa, 2.0 * pb, 2.0 * pc};
    for (double& v : ev.values) v = std::clamp(v, 0.0, 1.0);
    return ev;
}

enum class Family { ghz, w, product };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::ghz: return "ghz";
        case Family::w: return "w";
        case Family::product: return "product";
    }
    return "?";
}

inline Family parse_family(const std::string& s) {
    if (s == "ghz") return Family::ghz;
    if (s == "w") return Family::w;
    if (s == "product") return Family::product;
    throw std::invalid_argument("unknown family '" + s + "' (expected ghz, w or product)");
}

struct FamilyRow {
    std::vector<double> params;
    EntanglementVector vector;
    SlackReport slack;
};

// Deterministic sweep over a family parameter grid; every row carries the
// numerically computed marginal vector and its slack report.
//
// ghz/product: grid points theta in [0, pi/2].
// w: triangular lattice over the weight simplex (pa, pb, pc), grid points
//    per edge, rows in lexicographic (i, j) order.
inline std::vector<FamilyRow> family_sweep(Family family, int grid, Measure measure) {
    if (grid < 1) throw std::invalid_argument("family_sweep: grid must be >= 1");
    std::vector<FamilyRow> rows;
    const auto push = [&](std::vector<double> params, const PureState& state) {
        FamilyRow row;
        row.params = std::move(params);
        row.vector = marginal_vector(state, measure);
        row.slack = polygon_slack(row.vector);
        rows.push_back(std::move(row));
    };

    switch (family) {
        case Family::ghz: {
            for (int i = 0; i < grid; ++i) {
                const double theta =
                    grid == 1 ? 0.0 : (std::numbers::pi / 2.0) * i / (grid - 1);
                push({theta}, ghz_state({theta}));
            }
            break;
        }
        case Family::w: {
            const int edge = grid;
            for (int i = 0; i < edge; ++i)
                for (int j = 0; i + j < edge; ++j) {
                    const double pa = edge == 1 ? 1.0 : static_cast<double>(i) / (edge - 1);
                    const double pb = edge == 1 ? 0.0 : static_cast<double>(j) / (edge - 1);
                    const double pc = std::max(1.0 - pa - pb, 0.0);
                    WParams p{std::sqrt(pa), std::sqrt(pb), std::sqrt(pc)};
                    push({pa, pb, pc}, w_state(p));
                }
            break;
        }
        case Family::product: {
            for (int i = 0; i < grid; ++i) {
                const double theta =
                    grid == 1 ? 0.0 : (std::numbers::pi / 2.0) * i / (grid - 1);
                const cd c0 = std::cos(theta), c1 = std::sin(theta);
                std::vector<cd> amps(8, cd{0.0, 0.0});
                for (int b = 0; b < 8; ++b) {
                    cd a{1.0, 0.0};
                    for (int q = 0; q < 3; ++q) a *= ((b >> (2 - q)) & 1) ? c1 : c0;
                    amps[static_cast<std::size_t>(b)] = a;
                }
                push({theta}, make_state({2, 2, 2}, std::move(amps), Normalize::renorm));
            }
            break;
        }
    }
    return rows;
}

}  // namespace epi
