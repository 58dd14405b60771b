// N-party pure states over mixed-radix amplitude vectors, their reduced
// density matrices and Schmidt decompositions, and seeded Haar sampling.
//
// Index convention: party 0 is the most significant mixed-radix digit, so
// for dims {d0,...,d_{N-1}} the basis ket |s0 s1 ... s_{N-1}> sits at
// amplitude index ((s0*d1 + s1)*d2 + ...).

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "epi/linalg.hpp"
#include "epi/rng.hpp"

namespace epi {

struct PureState {
    std::vector<int> dims;  // local dimensions, each >= 2
    std::vector<cd> amps;   // length prod(dims), unit norm

    int parties() const { return static_cast<int>(dims.size()); }

    std::size_t dim() const {
        std::size_t d = 1;
        for (int x : dims) d *= static_cast<std::size_t>(x);
        return d;
    }

    bool all_qubits() const {
        for (int d : dims)
            if (d != 2) return false;
        return true;
    }

    double norm_sq() const {
        double s = 0.0;
        for (const cd& a : amps) s += std::norm(a);
        return s;
    }
};

struct SchmidtSpectrum {
    std::vector<double> lambdas;  // nonincreasing, sum 1
    int party = 0;
};

struct SchmidtData {
    SchmidtSpectrum spectrum;
    CMat local_basis;                     // columns |f_n>, eigenvectors of rho_party
    std::vector<std::vector<cd>> cofactors;  // |g_n> on the complement, orthonormal
};

constexpr double kNormTol = 1e-10;

enum class Normalize { reject, renorm };

namespace detail {

inline void check_party(const PureState& state, int party) {
    if (party < 0 || party >= state.parties())
        throw std::out_of_range("party index " + std::to_string(party) + " out of range");
}

// Strides of one party: amplitude index = (a * d + s) * inner + b with
// a < outer, s < d, b < inner.
struct PartyView {
    std::size_t outer, inner;
    int d;
};

inline PartyView party_view(const PureState& state, int party) {
    PartyView v{1, 1, state.dims[static_cast<std::size_t>(party)]};
    for (int k = 0; k < party; ++k) v.outer *= static_cast<std::size_t>(state.dims[k]);
    for (int k = party + 1; k < state.parties(); ++k)
        v.inner *= static_cast<std::size_t>(state.dims[k]);
    return v;
}

}  // namespace detail

inline PureState make_state(std::vector<int> dims, std::vector<cd> amps,
                            Normalize mode = Normalize::reject) {
    if (dims.empty()) throw std::invalid_argument("make_state: empty dimension list");
    std::size_t expected = 1;
    for (int d : dims) {
        if (d < 2) throw std::invalid_argument("make_state: local dimensions must be >= 2");
        expected *= static_cast<std::size_t>(d);
    }
    if (amps.size() != expected)
        throw std::invalid_argument("make_state: amplitude length " + std::to_string(amps.size()) +
                                    " does not match product of dims " + std::to_string(expected));
    double nsq = 0.0;
    for (const cd& a : amps) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw std::invalid_argument("make_state: non-finite amplitude");
        nsq += std::norm(a);
    }
    if (nsq <= 0.0) throw std::invalid_argument("make_state: zero amplitude vector");
    const double norm = std::sqrt(nsq);
    if (mode == Normalize::reject) {
        if (std::abs(norm - 1.0) > kNormTol)
            throw std::invalid_argument("make_state: state not normalized (|norm-1| = " +
                                        std::to_string(std::abs(norm - 1.0)) + ")");
    } else {
        for (cd& a : amps) a /= norm;
    }
    return PureState{std::move(dims), std::move(amps)};
}

// Partial trace over every party except `party`. Hermitian by construction,
// trace 1 up to rounding.
inline CMat reduced_density(const PureState& state, int party) {
    detail::check_party(state, party);
    const auto v = detail::party_view(state, party);
    const std::size_t d = static_cast<std::size_t>(v.d);
    CMat rho(d, d);
    for (std::size_t s = 0; s < d; ++s)
        for (std::size_t t = s; t < d; ++t) {
            cd sum{0.0, 0.0};
            for (std::size_t a = 0; a < v.outer; ++a) {
                const std::size_t base = a * d * v.inner;
                const cd* row_s = state.amps.data() + base + s * v.inner;
                const cd* row_t = state.amps.data() + base + t * v.inner;
                for (std::size_t b = 0; b < v.inner; ++b) sum += row_s[b] * std::conj(row_t[b]);
            }
            rho(s, t) = sum;
            rho(t, s) = std::conj(sum);
        }
    return rho;
}

// Eigenvalues of the reduced density matrix, sorted nonincreasing.
// Qubit marginals use the closed form from trace and determinant; larger
// local dimensions go through the Jacobi eigensolver. A complement of
// dimension 1 (e.g. N = 1) is a rank-1 projector: spectrum exactly (1,0,...).
inline SchmidtSpectrum schmidt_spectrum(const PureState& state, int party) {
    detail::check_party(state, party);
    const auto v = detail::party_view(state, party);
    SchmidtSpectrum spec;
    spec.party = party;
    if (v.outer * v.inner == 1) {
        spec.lambdas.assign(static_cast<std::size_t>(v.d), 0.0);
        spec.lambdas[0] = 1.0;
        return spec;
    }
    const CMat rho = reduced_density(state, party);
    if (v.d == 2) {
        const double tr = rho.trace_real();
        const double det = rho(0, 0).real() * rho(1, 1).real() - std::norm(rho(0, 1));
        const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
        double l1 = (tr + disc) / 2.0;
        double l2 = (tr - disc) / 2.0;
        l1 = std::clamp(l1, 0.0, 1.0);
        l2 = std::clamp(l2, 0.0, 1.0);
        spec.lambdas = {l1, l2};
        return spec;
    }
    EigenSystem es = hermitian_eigensystem(rho);
    spec.lambdas.resize(es.values.size());
    for (std::size_t i = 0; i < es.values.size(); ++i)
        spec.lambdas[i] = std::clamp(es.values[i], 0.0, 1.0);
    return spec;
}

// Full Schmidt decomposition wrt one party. Cofactors are obtained by
// projecting the state onto each local eigenvector and dividing by
// sqrt(lambda); eigenvalues below 1e-12 get an arbitrary orthonormal
// completion instead.
inline SchmidtData schmidt_data(const PureState& state, int party) {
    detail::check_party(state, party);
    const auto v = detail::party_view(state, party);
    const std::size_t d = static_cast<std::size_t>(v.d);
    const std::size_t cdim = v.outer * v.inner;

    EigenSystem es = hermitian_eigensystem(reduced_density(state, party));

    SchmidtData out;
    out.spectrum.party = party;
    out.spectrum.lambdas.resize(d);
    for (std::size_t n = 0; n < d; ++n)
        out.spectrum.lambdas[n] = std::clamp(es.values[n], 0.0, 1.0);
    out.local_basis = es.vectors;
    out.cofactors.assign(d, std::vector<cd>(cdim, cd{0.0, 0.0}));

    std::vector<std::size_t> completed;
    for (std::size_t n = 0; n < d; ++n) {
        const double lam = out.spectrum.lambdas[n];
        auto& g = out.cofactors[n];
        if (lam > 1e-12) {
            const double inv = 1.0 / std::sqrt(lam);
            for (std::size_t a = 0; a < v.outer; ++a)
                for (std::size_t s = 0; s < d; ++s) {
                    const cd f = std::conj(es.vectors(s, n));
                    if (f == cd{0.0, 0.0}) continue;
                    const cd* src = state.amps.data() + (a * d + s) * v.inner;
                    cd* dst = g.data() + a * v.inner;
                    for (std::size_t b = 0; b < v.inner; ++b) dst[b] += f * src[b];
                }
            for (cd& z : g) z *= inv;
        } else {
            completed.push_back(n);
        }
    }
    // Orthonormal completion for (numerically) vanishing Schmidt terms. When
    // the complement is too small to hold another orthogonal direction the
    // cofactor is left as the zero vector (its Schmidt weight is zero anyway).
    for (std::size_t n : completed) {
        auto& g = out.cofactors[n];
        bool placed = false;
        for (std::size_t trial = 0; trial < cdim && !placed; ++trial) {
            std::fill(g.begin(), g.end(), cd{0.0, 0.0});
            g[trial] = 1.0;
            for (std::size_t m = 0; m < d; ++m) {
                if (m == n) continue;
                const auto& h = out.cofactors[m];
                cd proj{0.0, 0.0};
                for (std::size_t i = 0; i < cdim; ++i) proj += std::conj(h[i]) * g[i];
                for (std::size_t i = 0; i < cdim; ++i) g[i] -= proj * h[i];
            }
            double nsq = 0.0;
            for (const cd& z : g) nsq += std::norm(z);
            if (nsq > 0.25) {
                const double inv = 1.0 / std::sqrt(nsq);
                for (cd& z : g) z *= inv;
                placed = true;
            }
        }
        if (!placed) std::fill(g.begin(), g.end(), cd{0.0, 0.0});
    }
    return out;
}

// Reassemble sum_n sqrt(lambda_n) |f_n> |g_n>; residual against the input
// state measures decomposition quality (tests use this).
inline PureState reconstruct_schmidt(const SchmidtData& data, const PureState& reference,
                                     int party) {
    const auto v = detail::party_view(reference, party);
    const std::size_t d = static_cast<std::size_t>(v.d);
    std::vector<cd> amps(reference.dim(), cd{0.0, 0.0});
    for (std::size_t n = 0; n < d; ++n) {
        const double w = std::sqrt(data.spectrum.lambdas[n]);
        if (w == 0.0) continue;
        for (std::size_t a = 0; a < v.outer; ++a)
            for (std::size_t s = 0; s < d; ++s) {
                const cd f = w * data.local_basis(s, n);
                if (f == cd{0.0, 0.0}) continue;
                const cd* src = data.cofactors[n].data() + a * v.inner;
                cd* dst = amps.data() + (a * d + s) * v.inner;
                for (std::size_t b = 0; b < v.inner; ++b) dst[b] += f * src[b];
            }
    }
    return PureState{reference.dims, std::move(amps)};
}

// Haar-random pure state: i.i.d. standard complex Gaussian amplitudes,
// normalized. Deterministic for a fixed seed.
inline PureState haar_random(const std::vector<int>& dims, std::uint64_t seed) {
    std::size_t n = 1;
    for (int d : dims) {
        if (d < 2) throw std::invalid_argument("haar_random: local dimensions must be >= 2");
        n *= static_cast<std::size_t>(d);
    }
    rng::Stream stream(seed);
    std::vector<cd> amps(n);
    double nsq = 0.0;
    for (cd& a : amps) {
        a = cd(stream.normal(), stream.normal());
        nsq += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(nsq);
    for (cd& a : amps) a *= inv;
    return PureState{dims, std::move(amps)};
}

// Apply a single-party unitary: |psi'> = (I ⊗ U ⊗ I) |psi>.
inline PureState apply_local_unitary(const PureState& state, int party, const CMat& u) {
    detail::check_party(state, party);
    const auto v = detail::party_view(state, party);
    const std::size_t d = static_cast<std::size_t>(v.d);
    if (u.rows() != d || u.cols() != d)
        throw std::invalid_argument("apply_local_unitary: matrix size does not match party");
    PureState out = state;
    std::vector<cd> col(d);
    for (std::size_t a = 0; a < v.outer; ++a)
        for (std::size_t b = 0; b < v.inner; ++b) {
            for (std::size_t s = 0; s < d; ++s) col[s] = state.amps[(a * d + s) * v.inner + b];
            for (std::size_t s = 0; s < d; ++s) {
                cd acc{0.0, 0.0};
                for (std::size_t t = 0; t < d; ++t) acc += u(s, t) * col[t];
                out.amps[(a * d + s) * v.inner + b] = acc;
            }
        }
    return out;
}

inline cd inner(const PureState& a, const PureState& b) {
    if (a.dims != b.dims) throw std::invalid_argument("inner: dimension mismatch");
    cd s{0.0, 0.0};
    for (std::size_t i = 0; i < a.amps.size(); ++i) s += std::conj(a.amps[i]) * b.amps[i];
    return s;
}

// Distance up to a global phase: min over phases of ||a - e^{i t} b||,
// accumulated element-wise at the optimal phase so tiny residuals are not
// drowned by cancellation.
inline double phase_distance(const PureState& a, const PureState& b) {
    const cd ov = inner(a, b);
    const double mag = std::abs(ov);
    const cd phase = mag > 0.0 ? std::conj(ov) / mag : cd{1.0, 0.0};
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.amps.size(); ++i)
        d2 += std::norm(a.amps[i] - phase * b.amps[i]);
    return std::sqrt(d2);
}

}  // namespace epi
