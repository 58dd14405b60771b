// Property suites that witness the claims numerically: the polygon
// inequality across measures, the monogamy sandwich, the appendix
// Schmidt-expansion identities, the concavity lemma behind the measure
// lifting, and the derivative-free search for qudit counterexamples.

#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "epi/measures.hpp"
#include "epi/parallel.hpp"
#include "epi/polytope.hpp"
#include "epi/rng.hpp"
#include "epi/state.hpp"

namespace epi {

struct WorstCase {
    std::uint64_t stream_seed = 0;  // haar_random(dims, stream_seed) reproduces the state
    std::int64_t trial = -1;
    PureState state;
    EntanglementVector vector;
};

struct SuiteReport {
    std::string suite;
    std::int64_t trials = 0;
    std::int64_t failures = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    double tolerance = kSlackTol;
    std::optional<WorstCase> worst;
    double elapsed_seconds = 0.0;
    std::map<std::string, double> stats;
};

namespace detail {

class StopWatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(clock::now() - start_).count();
    }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_ = clock::now();
};

struct ChunkWorst {
    double slack = std::numeric_limits<double>::infinity();
    std::int64_t trial = std::numeric_limits<std::int64_t>::max();
    std::int64_t failures = 0;
};

// order-independent merge: lowest slack wins, ties broken by trial index
inline void merge_worst(ChunkWorst& into, const ChunkWorst& from) {
    into.failures += from.failures;
    if (from.slack < into.slack || (from.slack == into.slack && from.trial < into.trial)) {
        into.slack = from.slack;
        into.trial = from.trial;
    }
}

}  // namespace detail

// Haar-random polygon suite for one (N, measure) pair. N = 1 must come out
// as E_1 = 0 and N = 2 as E_1 = E_2; both are what the slack check reduces
// to at those sizes.
inline SuiteReport verify_polygon(int parties, Measure measure, std::int64_t trials,
                                  std::uint64_t seed, double tol = kSlackTol, int threads = 1) {
    if (parties < 1) throw std::invalid_argument("verify_polygon: need N >= 1");
    if (trials < 1) throw std::invalid_argument("verify_polygon: need at least one trial");
    detail::StopWatch watch;
    const std::vector<int> dims(static_cast<std::size_t>(parties), 2);

    const int nchunks = resolve_threads(threads);
    std::vector<detail::ChunkWorst> partial(static_cast<std::size_t>(nchunks));
    parallel_chunks(trials, threads, [&](int chunk, std::int64_t begin, std::int64_t end) {
        detail::ChunkWorst w;
        for (std::int64_t i = begin; i < end; ++i) {
            const PureState state = haar_random(dims, rng::substream_seed(seed, static_cast<std::uint64_t>(i)));
            const SlackReport rep = polygon_slack(marginal_vector(state, measure), tol);
            if (!rep.satisfied) ++w.failures;
            if (rep.min_slack < w.slack) {
                w.slack = rep.min_slack;
                w.trial = i;
            }
        }
        partial[static_cast<std::size_t>(chunk)] = w;
    });

    detail::ChunkWorst total;
    for (const auto& w : partial) detail::merge_worst(total, w);

    SuiteReport report;
    report.suite = std::string("polygon/") + measure_name(measure) + "/N" + std::to_string(parties);
    report.trials = trials;
    report.failures = total.failures;
    report.min_slack = total.slack;
    report.tolerance = tol;
    if (total.trial != std::numeric_limits<std::int64_t>::max()) {
        WorstCase wc;
        wc.trial = total.trial;
        wc.stream_seed = rng::substream_seed(seed, static_cast<std::uint64_t>(total.trial));
        wc.state = haar_random(dims, wc.stream_seed);
        wc.vector = marginal_vector(wc.state, measure);
        report.worst = std::move(wc);
    }
    report.elapsed_seconds = watch.seconds();
    return report;
}

// Monogamy sandwich sqrt(sum_k C_{j|k}^2) <= C_j <= sum_k C_k on random
// qubit states. Reports the extremes of both slack distributions.
inline SuiteReport verify_sandwich(int parties, std::int64_t trials, std::uint64_t seed,
                                   double tol = 1e-8, int threads = 1) {
    if (parties < 3) throw std::invalid_argument("verify_sandwich: need N >= 3");
    if (trials < 1) throw std::invalid_argument("verify_sandwich: need at least one trial");
    detail::StopWatch watch;
    const std::vector<int> dims(static_cast<std::size_t>(parties), 2);
    const std::size_t n = static_cast<std::size_t>(parties);

    struct ChunkResult {
        detail::ChunkWorst worst;
        double min_lower = std::numeric_limits<double>::infinity();
        double min_upper = std::numeric_limits<double>::infinity();
    };
    const int nchunks = resolve_threads(threads);
    std::vector<ChunkResult> partial(static_cast<std::size_t>(nchunks));

    parallel_chunks(trials, threads, [&](int chunk, std::int64_t begin, std::int64_t end) {
        ChunkResult r;
        std::vector<double> c_marginal(n);
        std::vector<std::vector<double>> c_pair(n, std::vector<double>(n, 0.0));
        for (std::int64_t i = begin; i < end; ++i) {
            const PureState state = haar_random(dims, rng::substream_seed(seed, static_cast<std::uint64_t>(i)));
            for (std::size_t j = 0; j < n; ++j)
                c_marginal[j] = concurrence_of_y(y_measure(schmidt_spectrum(state, static_cast<int>(j))));
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k)
                    c_pair[j][k] = c_pair[k][j] =
                        pairwise_concurrence(state, static_cast<int>(j), static_cast<int>(k));
            double trial_min = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j) {
                double sq = 0.0, sum_rest = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == j) continue;
                    sq += c_pair[j][k] * c_pair[j][k];
                    sum_rest += c_marginal[k];
                }
                const double lower = c_marginal[j] - std::sqrt(sq);
                const double upper = sum_rest - c_marginal[j];
                r.min_lower = std::min(r.min_lower, lower);
                r.min_upper = std::min(r.min_upper, upper);
                trial_min = std::min(trial_min, std::min(lower, upper));
            }
            if (trial_min < -tol) ++r.worst.failures;
            if (trial_min < r.worst.slack) {
                r.worst.slack = trial_min;
                r.worst.trial = i;
            }
        }
        partial[static_cast<std::size_t>(chunk)] = r;
    });

    detail::ChunkWorst total;
    double min_lower = std::numeric_limits<double>::infinity();
    double min_upper = std::numeric_limits<double>::infinity();
    for (const auto& r : partial) {
        detail::merge_worst(total, r.worst);
        min_lower = std::min(min_lower, r.min_lower);
        min_upper = std::min(min_upper, r.min_upper);
    }

    SuiteReport report;
    report.suite = "sandwich/N" + std::to_string(parties);
    report.trials = trials;
    report.failures = total.failures;
    report.min_slack = total.slack;
    report.tolerance = tol;
    report.stats["min_lower_slack"] = min_lower;
    report.stats["min_upper_slack"] = min_upper;
    if (total.trial != std::numeric_limits<std::int64_t>::max()) {
        WorstCase wc;
        wc.trial = total.trial;
        wc.stream_seed = rng::substream_seed(seed, static_cast<std::uint64_t>(total.trial));
        wc.state = haar_random(dims, wc.stream_seed);
        wc.vector = marginal_vector(wc.state, Measure::C);
        report.worst = std::move(wc);
    }
    report.elapsed_seconds = watch.seconds();
    return report;
}

// Numerical witness of the appendix Schmidt-expansion identities for one
// qubit state: orthonormality of the expansion coefficients, Y1 = 2*lambda2,
// the multiplicity-weighted Y-sum identity, and the Delta relation.
struct WitnessReport {
    bool vacuous = false;  // lambda2 below 1e-12: product bipartition, nothing to check
    int parties = 0;
    double lambda1 = 0.0, lambda2 = 0.0;
    double x_norm_err = 0.0;   // |sum |x|^2 - 1|
    double y_norm_err = 0.0;   // |sum |y|^2 - 1|
    double cross_err = 0.0;    // |sum x y*|
    double y1_err = 0.0;       // |Y_1 - 2 lambda2|
    double ysum_err = 0.0;     // Y-sum identity residual
    double delta = 0.0;        // 1 - |x1|^2 - |y1|^2, via the expansion chain
    double delta_identity_err = 0.0;
    std::vector<cd> x, y;      // expansion coefficients, for inspection

    double max_err() const {
        return std::max({x_norm_err, y_norm_err, cross_err, y1_err, ysum_err,
                         delta_identity_err});
    }
    bool ok(double tol = 1e-9) const {
        return vacuous || (max_err() <= tol && delta >= -tol);
    }
};

inline WitnessReport appendix_witness(const PureState& state) {
    if (!state.all_qubits())
        throw std::invalid_argument("appendix_witness: qubit states only");
    if (state.parties() < 3)
        throw std::invalid_argument("appendix_witness: need N >= 3");

    WitnessReport rep;
    rep.parties = state.parties();

    const SchmidtData sd = schmidt_data(state, 0);
    rep.lambda1 = sd.spectrum.lambdas[0];
    rep.lambda2 = sd.spectrum.lambdas[1];
    if (rep.lambda2 < 1e-12) {
        rep.vacuous = true;
        return rep;
    }

    const int rest_parties = state.parties() - 1;
    const std::vector<int> rest_dims(static_cast<std::size_t>(rest_parties), 2);

    // Express g1, g2 in the product of the per-qubit Schmidt bases of
    // parties 1..N-1 by applying each basis adjoint along its axis.
    PureState gx{rest_dims, sd.cofactors[0]};
    PureState gy{rest_dims, sd.cofactors[1]};
    for (int r = 0; r < rest_parties; ++r) {
        const CMat basis = hermitian_eigensystem(reduced_density(state, r + 1)).vectors;
        gx = apply_local_unitary(gx, r, basis.adjoint());
        gy = apply_local_unitary(gy, r, basis.adjoint());
    }
    rep.x = gx.amps;
    rep.y = gy.amps;
    const std::size_t dim = rep.x.size();  // 2^(N-1)

    double xn = 0.0, yn = 0.0;
    cd cross{0.0, 0.0};
    for (std::size_t i = 0; i < dim; ++i) {
        xn += std::norm(rep.x[i]);
        yn += std::norm(rep.y[i]);
        cross += rep.x[i] * std::conj(rep.y[i]);
    }
    rep.x_norm_err = std::abs(xn - 1.0);
    rep.y_norm_err = std::abs(yn - 1.0);
    rep.cross_err = std::abs(cross);

    rep.y1_err = std::abs(y_measure(schmidt_spectrum(state, 0)) - 2.0 * rep.lambda2);

    // Y-sum identity: sum_{i>=2} Y_i = 2 lambda1 sum_j c_j |x_j|^2
    //                                + 2 lambda2 sum_j c_j |y_j|^2,
    // where c_j counts the second-basis factors in basis string j.
    double lhs = 0.0;
    for (int i = 1; i < state.parties(); ++i) lhs += y_measure(schmidt_spectrum(state, i));
    double wx = 0.0, wy = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        const double c = static_cast<double>(std::popcount(j));
        wx += c * std::norm(rep.x[j]);
        wy += c * std::norm(rep.y[j]);
    }
    rep.ysum_err = std::abs(lhs - 2.0 * (rep.lambda1 * wx + rep.lambda2 * wy));

    // Delta via the expansion chain: with S_x = sum_{j>=3}|x_j|^2,
    // S_y likewise and P = sum_{j>=3} x_j y_j*,
    //   Delta = |x_2|^2 S_y + (|y_2|^2 + S_y) S_x
    //         - x_2 y_2* conj(P) - x_2* y_2 P - |P|^2.
    double sx = 0.0, sy = 0.0;
    cd p{0.0, 0.0};
    for (std::size_t j = 2; j < dim; ++j) {
        sx += std::norm(rep.x[j]);
        sy += std::norm(rep.y[j]);
        p += rep.x[j] * std::conj(rep.y[j]);
    }
    const cd x2 = rep.x[1], y2 = rep.y[1];
    const cd delta_c = std::norm(x2) * sy + (std::norm(y2) + sy) * sx -
                       x2 * std::conj(y2) * std::conj(p) - std::conj(x2) * y2 * p -
                       p * std::conj(p);
    rep.delta = delta_c.real();
    rep.delta_identity_err =
        std::abs(1.0 - std::norm(rep.x[0]) - std::norm(rep.y[0]) - rep.delta);
    return rep;
}

// Chord bound and shape checks behind the lifting of the Y inequality to a
// generic measure: E must be nondecreasing and concave on [0,1], and must
// dominate the chord f(Y) = E(Y_j) Y / Y_j below any anchor Y_j.
inline SuiteReport verify_concavity_lemma(Measure measure, int grid_points,
                                          std::uint64_t seed = 42) {
    if (grid_points < 3) throw std::invalid_argument("verify_concavity_lemma: grid too small");
    detail::StopWatch watch;
    const std::size_t n = static_cast<std::size_t>(grid_points);
    std::vector<double> ys(n), es(n);
    for (std::size_t i = 0; i < n; ++i) {
        ys[i] = static_cast<double>(i) / static_cast<double>(n - 1);
        es[i] = measure_of_y(measure, ys[i]);
    }

    std::int64_t failures = 0;
    double min_increment = std::numeric_limits<double>::infinity();
    double max_second_diff = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < n; ++i) {
        const double inc = es[i] - es[i - 1];
        min_increment = std::min(min_increment, inc);
        if (inc < -1e-12) ++failures;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double d2 = es[i + 1] - 2.0 * es[i] + es[i - 1];
        max_second_diff = std::max(max_second_diff, d2);
        if (d2 > 1e-9) ++failures;
    }

    // anchors: the extremes plus random draws
    std::vector<double> anchors = {1.0, 0.5};
    rng::Stream stream(seed);
    for (int k = 0; k < 14; ++k) anchors.push_back(0.05 + 0.95 * stream.uniform());

    double min_chord_margin = std::numeric_limits<double>::infinity();
    for (double yj : anchors) {
        const double ej = measure_of_y(measure, yj);
        for (std::size_t i = 0; i < n; ++i) {
            if (ys[i] > yj) break;
            const double margin = es[i] - ej * ys[i] / yj;
            min_chord_margin = std::min(min_chord_margin, margin);
            if (margin < -1e-12) ++failures;
        }
    }

    SuiteReport report;
    report.suite = std::string("concavity/") + measure_name(measure);
    report.trials = grid_points;
    report.failures = failures;
    report.min_slack = min_chord_margin;
    report.tolerance = 1e-12;
    report.stats["min_increment"] = min_increment;
    report.stats["max_second_difference"] = max_second_diff;
    report.elapsed_seconds = watch.seconds();
    return report;
}

// Minimum polygon slack of a state's qudit Y vector; the quantity the
// conjecture search minimizes.
inline double polygon_min_slack_y(const PureState& state) {
    const EntanglementVector ev = qudit_marginal_vector(state);
    double total = 0.0, worst = std::numeric_limits<double>::infinity();
    for (double v : ev.values) total += v;
    for (double v : ev.values) worst = std::min(worst, total - 2.0 * v);
    return worst;
}

struct SearchResult {
    std::vector<int> dims;
    int local_dim = 0;  // homogeneous M, 0 if mixed
    int parties = 0;
    double best_slack = std::numeric_limits<double>::infinity();
    PureState best_state;
    int restarts = 0;
    std::int64_t evaluations = 0;
    bool converged = false;
    bool outside_stated_conjecture = false;  // heterogeneous local dimensions
};

namespace detail {

struct SearchObjective {
    std::vector<int> dims;
    std::size_t dim;

    explicit SearchObjective(std::vector<int> d) : dims(std::move(d)) {
        dim = 1;
        for (int x : dims) dim *= static_cast<std::size_t>(x);
    }

    // 2*dim real parameters -> normalized state -> min polygon slack in Y
    double operator()(const std::vector<double>& params, PureState* out = nullptr) const {
        std::vector<cd> amps(dim);
        double nsq = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            amps[i] = cd(params[2 * i], params[2 * i + 1]);
            nsq += std::norm(amps[i]);
        }
        if (nsq <= 1e-300) return std::numeric_limits<double>::infinity();
        const double inv = 1.0 / std::sqrt(nsq);
        for (cd& a : amps) a *= inv;
        PureState state{dims, std::move(amps)};
        const double slack = polygon_min_slack_y(state);
        if (out) *out = std::move(state);
        return slack;
    }
};

struct RestartOutcome {
    double slack = std::numeric_limits<double>::infinity();
    std::vector<double> params;
    std::int64_t evaluations = 0;
    bool converged = false;
};

// Coordinate-wise quadratic probing with shrinking step; derivative-free,
// robust to the min() kinks in the objective.
inline RestartOutcome refine_restart(const SearchObjective& objective, std::uint64_t seed,
                                     int iters) {
    RestartOutcome out;
    const std::size_t nparams = 2 * objective.dim;
    rng::Stream stream(seed);
    std::vector<double> x(nparams);
    for (double& v : x) v = stream.normal();

    double fx = objective(x);
    ++out.evaluations;
    double h = 0.25;
    std::vector<double> probe = x;  // kept equal to x except at the active coordinate
    for (int pass = 0; pass < iters; ++pass) {
        bool improved = false;
        for (std::size_t c = 0; c < nparams; ++c) {
            const double x0 = x[c];
            probe[c] = x0 + h;
            const double fp = objective(probe);
            probe[c] = x0 - h;
            const double fm = objective(probe);
            out.evaluations += 2;

            double best_f = fx, best_x = x0;
            if (fp < best_f) { best_f = fp; best_x = x0 + h; }
            if (fm < best_f) { best_f = fm; best_x = x0 - h; }
            const double curv = fp + fm - 2.0 * fx;
            if (curv > 1e-15) {
                double step = 0.5 * h * (fm - fp) / curv;
                step = std::clamp(step, -2.0 * h, 2.0 * h);
                probe[c] = x0 + step;
                const double fq = objective(probe);
                ++out.evaluations;
                if (fq < best_f) { best_f = fq; best_x = x0 + step; }
            }
            if (best_f < fx - 1e-15) {
                fx = best_f;
                x[c] = best_x;
                improved = true;
            }
            probe[c] = x[c];
        }
        if (!improved) {
            h *= 0.5;
            if (h < 1e-7) {
                out.converged = true;
                break;
            }
        }
    }
    out.slack = fx;
    out.params = std::move(x);
    return out;
}

}  // namespace detail

// Random-restart minimization of the qudit polygon slack. A best_slack
// below -1e-6 is a counterexample candidate to the conjecture and is kept
// in best_state for inspection.
inline SearchResult conjecture_search(const std::vector<int>& dims, int restarts, int iters,
                                      std::uint64_t seed, int threads = 1) {
    if (dims.size() < 2) throw std::invalid_argument("conjecture_search: need N >= 2 parties");
    for (int d : dims)
        if (d < 2) throw std::invalid_argument("conjecture_search: local dimensions must be >= 2");
    if (restarts < 1 || iters < 1)
        throw std::invalid_argument("conjecture_search: restarts and iters must be positive");

    const detail::SearchObjective objective(dims);
    std::vector<detail::RestartOutcome> outcomes(static_cast<std::size_t>(restarts));
    parallel_chunks(restarts, threads, [&](int, std::int64_t begin, std::int64_t end) {
        for (std::int64_t r = begin; r < end; ++r)
            outcomes[static_cast<std::size_t>(r)] = detail::refine_restart(
                objective, rng::substream_seed(seed, static_cast<std::uint64_t>(r)), iters);
    });

    SearchResult result;
    result.dims = dims;
    result.parties = static_cast<int>(dims.size());
    result.local_dim = dims[0];
    for (int d : dims)
        if (d != dims[0]) {
            result.local_dim = 0;
            result.outside_stated_conjecture = true;
        }
    result.restarts = restarts;

    int best = -1;
    for (int r = 0; r < restarts; ++r) {
        const auto& o = outcomes[static_cast<std::size_t>(r)];
        result.evaluations += o.evaluations;
        if (o.slack < result.best_slack) {
            result.best_slack = o.slack;
            best = r;
        }
    }
    if (best >= 0) {
        const auto& o = outcomes[static_cast<std::size_t>(best)];
        result.converged = o.converged;
        objective(o.params, &result.best_state);
        result.best_slack = polygon_min_slack_y(result.best_state);
    }
    return result;
}

inline SearchResult conjecture_search(int local_dim, int parties, int restarts, int iters,
                                      std::uint64_t seed, int threads = 1) {
    if (parties < 2) throw std::invalid_argument("conjecture_search: need N >= 2");
    return conjecture_search(std::vector<int>(static_cast<std::size_t>(parties), local_dim),
                             restarts, iters, seed, threads);
}

}  // namespace epi
