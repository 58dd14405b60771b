// Geometry of the polygon inequality: slack reports, exact polytope
// volumes, sharing-capacity cross-sections (explicit N = 3 form and the
// general cardinal B-spline branch), and Monte Carlo oracles for both.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "epi/measures.hpp"
#include "epi/parallel.hpp"
#include "epi/rng.hpp"

namespace epi {

constexpr double kSlackTol = 1e-9;

// Per-inequality slack of E_j <= sum_{k!=j} E_k, plus the equivalent
// sharing form E_j <= E_T/2 (sharing slack is exactly half the slack).
struct SlackReport {
    Measure measure = Measure::Y;
    std::vector<double> slacks;          // sum_{k!=j} E_k - E_j
    std::vector<double> sharing_slacks;  // E_T/2 - E_j
    std::vector<bool> on_boundary;       // |slack_j| <= tol
    double min_slack = 0.0;
    double tolerance = kSlackTol;
    bool satisfied = false;
};

inline SlackReport polygon_slack(const EntanglementVector& ev, double tol = kSlackTol) {
    if (ev.values.empty()) throw std::invalid_argument("polygon_slack: empty vector");
    SlackReport r;
    r.measure = ev.measure;
    r.tolerance = tol;
    const std::size_t n = ev.values.size();
    r.slacks.resize(n);
    r.sharing_slacks.resize(n);
    r.on_boundary.resize(n);
    const double total = ev.total();
    r.min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        const double s = total - 2.0 * ev.values[j];
        r.slacks[j] = s;
        r.sharing_slacks[j] = s / 2.0;
        r.on_boundary[j] = std::abs(s) <= tol;
        r.min_slack = std::min(r.min_slack, s);
    }
    r.satisfied = r.min_slack >= -tol;
    return r;
}

namespace detail {

inline double inv_factorial(int n) {
    double v = 1.0;
    for (int i = 2; i <= n; ++i) v /= static_cast<double>(i);
    return v;
}

}  // namespace detail

// Hypervolume 1/N! cut away by a single inequality E_j >= sum of others.
inline double excluded_simplex_volume(int parties) {
    if (parties < 2) throw std::invalid_argument("excluded_simplex_volume: need N >= 2");
    return detail::inv_factorial(parties);
}

// Total inhabitable fraction of the unit hypercube, V_N = 1 - 1/(N-1)!.
inline double available_volume(int parties) {
    if (parties < 2) throw std::invalid_argument("available_volume: need N >= 2");
    return 1.0 - detail::inv_factorial(parties - 1);
}

// Three-party sharing capacity, piecewise quadratic with peak sqrt(3)/2
// at E_T = 2.
inline double capacity_n3(double e_total) {
    if (!(e_total >= 0.0 && e_total <= 3.0))
        throw std::invalid_argument("capacity_n3: E_T outside [0,3]");
    const double scale = std::sqrt(3.0) / 2.0;
    if (e_total <= 2.0) return scale * e_total * e_total / 4.0;
    const double r = 3.0 - e_total;
    return scale * r * r;
}

// Cardinal B-spline basis of degree N-1 on integer knots 0..N, evaluated
// by the Cox-de Boor recurrence. This is the diagonal cross-section
// profile of the unit N-cube.
inline double bspline_cross_section(int parties, double t) {
    if (parties < 2) throw std::invalid_argument("bspline_cross_section: need N >= 2");
    if (!(t >= 0.0 && t <= static_cast<double>(parties)))
        throw std::invalid_argument("bspline_cross_section: argument outside [0,N]");
    const int n = parties;
    std::vector<double> b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        b[static_cast<std::size_t>(i)] = (static_cast<double>(i) <= t && t < i + 1.0) ? 1.0 : 0.0;
    for (int deg = 1; deg <= n - 1; ++deg) {
        const double inv = 1.0 / deg;
        for (int i = 0; i + deg < n; ++i)
            b[static_cast<std::size_t>(i)] =
                inv * ((t - i) * b[static_cast<std::size_t>(i)] +
                       (i + deg + 1 - t) * b[static_cast<std::size_t>(i) + 1]);
    }
    return b[0];
}

// General-N sharing capacity: direct polynomial for E_T <= 2 (where the
// polygon inequality bites) and sqrt(N) * B-spline cross-section beyond.
// The two branches agree at the seam analytically.
inline double capacity_general(int parties, double e_total) {
    if (parties < 3) throw std::invalid_argument("capacity_general: need N >= 3");
    if (!(e_total >= 0.0 && e_total <= static_cast<double>(parties)))
        throw std::invalid_argument("capacity_general: E_T outside [0,N]");
    const double root_n = std::sqrt(static_cast<double>(parties));
    if (e_total <= 2.0) {
        const double corner = 1.0 - parties * std::pow(0.5, parties - 1);
        return root_n * corner * std::pow(e_total, parties - 1) * detail::inv_factorial(parties - 1);
    }
    return root_n * bspline_cross_section(parties, e_total);
}

// Sampled A(E_T) curve with its integer polynomial breakpoints.
struct CapacityCurve {
    int parties = 0;
    std::vector<std::pair<double, double>> samples;  // (E_T, A)
    std::vector<int> knots;                          // breakpoints 2..N
};

inline CapacityCurve sample_capacity_curve(int parties, int grid_points) {
    if (grid_points < 2) throw std::invalid_argument("sample_capacity_curve: need >= 2 points");
    CapacityCurve curve;
    curve.parties = parties;
    curve.samples.reserve(static_cast<std::size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i) {
        const double t = static_cast<double>(parties) * i / (grid_points - 1);
        curve.samples.emplace_back(t, capacity_general(parties, t));
    }
    for (int k = 2; k <= parties; ++k) curve.knots.push_back(k);
    return curve;
}

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::int64_t hits = 0;
    std::int64_t samples = 0;
};

namespace detail {

// satisfied iff max E <= total - max E + tol, i.e. min polygon slack >= -tol
inline bool point_inhabitable(const double* e, int n, double tol) {
    double total = 0.0, emax = 0.0;
    for (int i = 0; i < n; ++i) {
        total += e[i];
        emax = std::max(emax, e[i]);
    }
    return total - 2.0 * emax >= -tol;
}

}  // namespace detail

// Fraction of the unit hypercube passing the polygon inequality, with
// binomial standard error. Independent oracle for available_volume.
inline McEstimate mc_volume(int parties, std::int64_t samples, std::uint64_t seed,
                            int threads = 1) {
    if (parties < 2 || parties > 64)
        throw std::invalid_argument("mc_volume: need 2 <= N <= 64");
    if (samples < 1000) throw std::invalid_argument("mc_volume: need at least 1000 samples");
    std::vector<std::int64_t> hits(static_cast<std::size_t>(resolve_threads(threads)), 0);
    parallel_chunks(samples, threads, [&](int chunk, std::int64_t begin, std::int64_t end) {
        double e[64];
        std::int64_t local = 0;
        for (std::int64_t i = begin; i < end; ++i) {
            rng::Stream s(seed, static_cast<std::uint64_t>(i));
            for (int d = 0; d < parties; ++d) e[d] = s.uniform();
            if (detail::point_inhabitable(e, parties, kSlackTol)) ++local;
        }
        hits[static_cast<std::size_t>(chunk)] = local;
    });
    McEstimate out;
    out.samples = samples;
    for (std::int64_t h : hits) out.hits += h;
    const double p = static_cast<double>(out.hits) / static_cast<double>(samples);
    out.estimate = p;
    out.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    return out;
}

// Slab estimator for the sharing capacity: counts inhabitable points with
// |sum E - E_T| <= slab and rescales by the slab thickness and the sqrt(N)
// diagonal metric factor. Zero hits are reported, not thrown.
inline McEstimate mc_capacity(int parties, double e_total, double slab, std::int64_t samples,
                              std::uint64_t seed, int threads = 1) {
    if (parties < 2 || parties > 64)
        throw std::invalid_argument("mc_capacity: need 2 <= N <= 64");
    if (!(slab > 0.0) || slab >= 0.5)
        throw std::invalid_argument("mc_capacity: slab half-width must be in (0, 0.5)");
    if (!(e_total >= 0.0 && e_total <= static_cast<double>(parties)))
        throw std::invalid_argument("mc_capacity: E_T outside [0,N]");
    if (samples < 1000) throw std::invalid_argument("mc_capacity: need at least 1000 samples");
    std::vector<std::int64_t> hits(static_cast<std::size_t>(resolve_threads(threads)), 0);
    parallel_chunks(samples, threads, [&](int chunk, std::int64_t begin, std::int64_t end) {
        double e[64];
        std::int64_t local = 0;
        for (std::int64_t i = begin; i < end; ++i) {
            rng::Stream s(seed, static_cast<std::uint64_t>(i));
            double total = 0.0, emax = 0.0;
            for (int d = 0; d < parties; ++d) {
                e[d] = s.uniform();
                total += e[d];
                emax = std::max(emax, e[d]);
            }
            if (std::abs(total - e_total) <= slab && total - 2.0 * emax >= -kSlackTol) ++local;
        }
        hits[static_cast<std::size_t>(chunk)] = local;
    });
    McEstimate out;
    out.samples = samples;
    for (std::int64_t h : hits) out.hits += h;
    const double p = static_cast<double>(out.hits) / static_cast<double>(samples);
    const double scale = std::sqrt(static_cast<double>(parties)) / (2.0 * slab);
    out.estimate = p * scale;
    out.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(samples)) * scale;
    return out;
}

}  // namespace epi
