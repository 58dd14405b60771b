// The four marginal entanglement measures (normalized Schmidt weight Y,
// entropy S, concurrence C, negativity N), their qudit extension, and the
// pairwise two-qubit quantities used by the monogamy sandwich.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "epi/linalg.hpp"
#include "epi/state.hpp"

namespace epi {

enum class Measure { Y, S, C, N };

inline const char* measure_name(Measure m) {
    switch (m) {
        case Measure::Y: return "Y";
        case Measure::S: return "S";
        case Measure::C: return "C";
        case Measure::N: return "N";
    }
    return "?";
}

inline Measure parse_measure(const std::string& s) {
    if (s == "Y" || s == "y") return Measure::Y;
    if (s == "S" || s == "s") return Measure::S;
    if (s == "C" || s == "c") return Measure::C;
    if (s == "N" || s == "n") return Measure::N;
    throw std::invalid_argument("unknown measure '" + s + "' (expected Y, S, C or N)");
}

// Point E = (E_1,...,E_N) in the unit hypercube for one measure.
struct EntanglementVector {
    Measure measure = Measure::Y;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double total() const {
        double t = 0.0;
        for (double v : values) t += v;
        return t;
    }
};

namespace detail {

inline void check_qubit_spectrum(const SchmidtSpectrum& spec) {
    if (spec.lambdas.size() != 2)
        throw std::invalid_argument("expected a qubit (two-outcome) Schmidt spectrum, got length " +
                                    std::to_string(spec.lambdas.size()));
}

inline double check_unit_interval(double y, const char* what) {
    if (!(y >= -1e-12 && y <= 1.0 + 1e-12))
        throw std::invalid_argument(std::string(what) + ": argument " + std::to_string(y) +
                                    " outside [0,1]");
    return std::clamp(y, 0.0, 1.0);
}

}  // namespace detail

// Schmidt weight K = 1/(lambda1^2 + lambda2^2), in [1,2] for qubits.
inline double schmidt_weight(const SchmidtSpectrum& spec) {
    detail::check_qubit_spectrum(spec);
    const double p = spec.lambdas[0] * spec.lambdas[0] + spec.lambdas[1] * spec.lambdas[1];
    return 1.0 / p;
}

// Normalized Schmidt weight Y = 1 - sqrt(2/K - 1). For a qubit marginal
// this equals 2*lambda2 exactly, which is how it is computed (no
// cancellation as K -> 1).
inline double y_measure(const SchmidtSpectrum& spec) {
    detail::check_qubit_spectrum(spec);
    return std::clamp(2.0 * spec.lambdas[1], 0.0, 1.0);
}

inline double binary_entropy(double p) {
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

// S(Y) = 1 - [(2-Y)log2(2-Y) + Y log2 Y]/2, with 0*log 0 = 0.
inline double entropy_of_y(double y) {
    y = detail::check_unit_interval(y, "entropy_of_y");
    double s = 1.0 - (2.0 - y) * std::log2(2.0 - y) / 2.0;
    if (y > 0.0) s -= y * std::log2(y) / 2.0;
    return std::clamp(s, 0.0, 1.0);
}

// C(Y) = N(Y) = sqrt(Y(2-Y)) = 2 sqrt(lambda1 lambda2).
inline double concurrence_of_y(double y) {
    y = detail::check_unit_interval(y, "concurrence_of_y");
    return std::sqrt(y * (2.0 - y));
}

inline double negativity_of_y(double y) {
    y = detail::check_unit_interval(y, "negativity_of_y");
    return std::sqrt(y * (2.0 - y));
}

inline double measure_of_y(Measure m, double y) {
    switch (m) {
        case Measure::Y: return detail::check_unit_interval(y, "measure_of_y");
        case Measure::S: return entropy_of_y(y);
        case Measure::C: return concurrence_of_y(y);
        case Measure::N: return negativity_of_y(y);
    }
    throw std::invalid_argument("measure_of_y: bad measure tag");
}

// All N one-to-group marginal entanglements of a qubit state.
inline EntanglementVector marginal_vector(const PureState& state, Measure measure) {
    if (!state.all_qubits())
        throw std::invalid_argument("marginal_vector: non-qubit party present (use qudit_y)");
    EntanglementVector ev;
    ev.measure = measure;
    ev.values.resize(static_cast<std::size_t>(state.parties()));
    for (int j = 0; j < state.parties(); ++j)
        ev.values[static_cast<std::size_t>(j)] = measure_of_y(measure, y_measure(schmidt_spectrum(state, j)));
    return ev;
}

// Conjectured qudit extension: Y = 1 - sqrt((M-K)/(K(M-1))) with
// K = 1/sum(lambda^2). Reduces to the qubit Y at M = 2.
inline double qudit_y(const SchmidtSpectrum& spec, int local_dim) {
    if (local_dim < 2) throw std::invalid_argument("qudit_y: local dimension must be >= 2");
    if (spec.lambdas.size() != static_cast<std::size_t>(local_dim))
        throw std::invalid_argument("qudit_y: spectrum length " +
                                    std::to_string(spec.lambdas.size()) +
                                    " does not match local dimension " + std::to_string(local_dim));
    double p = 0.0;
    for (double l : spec.lambdas) p += l * l;
    const double k = 1.0 / p;
    const double m = static_cast<double>(local_dim);
    const double ratio = std::max(m - k, 0.0) / (k * (m - 1.0));
    return std::clamp(1.0 - std::sqrt(ratio), 0.0, 1.0);
}

// Marginal Y vector for arbitrary local dimensions via the qudit formula.
inline EntanglementVector qudit_marginal_vector(const PureState& state) {
    EntanglementVector ev;
    ev.measure = Measure::Y;
    ev.values.resize(static_cast<std::size_t>(state.parties()));
    for (int j = 0; j < state.parties(); ++j)
        ev.values[static_cast<std::size_t>(j)] =
            qudit_y(schmidt_spectrum(state, j), state.dims[static_cast<std::size_t>(j)]);
    return ev;
}

// Two-qubit reduced state of parties (j,k), row index s_j*2 + s_k.
inline CMat pair_density(const PureState& state, int j, int k) {
    detail::check_party(state, j);
    detail::check_party(state, k);
    if (j == k) throw std::invalid_argument("pair_density: parties must differ");
    if (state.dims[static_cast<std::size_t>(j)] != 2 || state.dims[static_cast<std::size_t>(k)] != 2)
        throw std::invalid_argument("pair_density: both parties must be qubits");

    const int n = state.parties();
    std::vector<std::size_t> stride(static_cast<std::size_t>(n));
    std::size_t acc = 1;
    for (int p = n - 1; p >= 0; --p) {
        stride[static_cast<std::size_t>(p)] = acc;
        acc *= static_cast<std::size_t>(state.dims[static_cast<std::size_t>(p)]);
    }
    const std::size_t sj = stride[static_cast<std::size_t>(j)];
    const std::size_t sk = stride[static_cast<std::size_t>(k)];

    // enumerate the complement by walking all indices with s_j = s_k = 0
    std::vector<std::size_t> rest;
    rest.reserve(state.dim() / 4);
    for (std::size_t idx = 0; idx < state.dim(); ++idx) {
        const std::size_t bj = (idx / sj) % 2;
        const std::size_t bk = (idx / sk) % 2;
        if (bj == 0 && bk == 0) rest.push_back(idx);
    }

    CMat rho(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = r; c < 4; ++c) {
            const std::size_t off_r = (r >> 1) * sj + (r & 1) * sk;
            const std::size_t off_c = (c >> 1) * sj + (c & 1) * sk;
            cd sum{0.0, 0.0};
            for (std::size_t base : rest)
                sum += state.amps[base + off_r] * std::conj(state.amps[base + off_c]);
            rho(r, c) = sum;
            rho(c, r) = std::conj(sum);
        }
    return rho;
}

namespace detail {

// rho_tilde = (sigma_y ⊗ sigma_y) conj(rho) (sigma_y ⊗ sigma_y).
inline CMat spin_flip(const CMat& rho) {
    // (sigma_y ⊗ sigma_y)(r,c): antidiagonal with signs (-1)^{popcount}
    // Y⊗Y |s t> = (-1)^{s+t} ... applied on both sides reduces to index
    // reversal with a sign pattern.
    static const double sign[4] = {-1.0, 1.0, 1.0, -1.0};  // phase of Y⊗Y on |r> -> |3-r>
    CMat out(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            out(r, c) = sign[r] * sign[c] * std::conj(rho(3 - r, 3 - c));
    return out;
}

}  // namespace detail

// Wootters concurrence of the (j,k) pair marginal. The mu_i are obtained
// as square roots of the eigenvalues of the Hermitian product
// sqrt(rho) rho_tilde sqrt(rho), similar to rho rho_tilde.
inline double pairwise_concurrence(const PureState& state, int j, int k) {
    const CMat rho = pair_density(state, j, k);
    const CMat s = sqrt_psd(rho);
    const CMat h = s * detail::spin_flip(rho) * s;
    EigenSystem es = hermitian_eigensystem(h);
    double mu[4];
    for (int i = 0; i < 4; ++i) mu[i] = std::sqrt(std::max(es.values[static_cast<std::size_t>(i)], 0.0));
    return std::max(0.0, mu[0] - mu[1] - mu[2] - mu[3]);
}

// Negativity of the pair marginal, normalized so a Bell pair scores 1:
// twice the magnitude sum of the negative partial-transpose eigenvalues.
inline double pairwise_negativity(const PureState& state, int j, int k) {
    const CMat rho = pair_density(state, j, k);
    CMat pt(4, 4);  // transpose the second qubit
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) {
            const std::size_t rr = (r & 2) | (c & 1);
            const std::size_t cc = (c & 2) | (r & 1);
            pt(r, c) = rho(rr, cc);
        }
    EigenSystem es = hermitian_eigensystem(pt);
    double neg = 0.0;
    for (double v : es.values) neg += std::max(0.0, -v);
    return std::clamp(2.0 * neg, 0.0, 1.0);
}

// Entanglement of formation of the pair marginal, from its concurrence.
inline double pairwise_eof(const PureState& state, int j, int k) {
    const double c = pairwise_concurrence(state, j, k);
    const double x = (1.0 + std::sqrt(std::max(1.0 - c * c, 0.0))) / 2.0;
    return binary_entropy(x);
}

}  // namespace epi
