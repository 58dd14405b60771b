#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "epi/families.hpp"
#include "epi/state.hpp"
#include "oracles.hpp"

using namespace epi;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("make_state validates and normalizes", "[state]") {
    // basis state passes through untouched
    const PureState s = make_state({2, 2}, {cd(1, 0), cd(0, 0), cd(0, 0), cd(0, 0)});
    REQUIRE(s.dim() == 4);
    REQUIRE(s.amps[0] == cd(1.0, 0.0));

    // renormalization produces the Bell coefficients
    const PureState bell =
        make_state({2, 2}, {cd(1, 0), cd(0, 0), cd(0, 0), cd(1, 0)}, Normalize::renorm);
    REQUIRE(bell.amps[0].real() == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    REQUIRE(bell.amps[3].real() == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    REQUIRE(bell.norm_sq() == Approx(1.0).margin(1e-12));

    REQUIRE_THROWS_AS(make_state({2, 2}, {cd(1, 0)}), std::invalid_argument);
    REQUIRE_THROWS_AS(make_state({2}, {cd(0, 0), cd(0, 0)}), std::invalid_argument);
    REQUIRE_THROWS_AS(make_state({2, 2}, {cd(1, 0), cd(0, 0), cd(0, 0), cd(1, 0)}),
                      std::invalid_argument);  // unnormalized, reject mode
    const double nan = std::nan("");
    REQUIRE_THROWS_AS(make_state({2}, {cd(nan, 0), cd(0, 0)}), std::invalid_argument);
    REQUIRE_THROWS_AS(make_state({2, 1}, {cd(1, 0), cd(0, 0)}), std::invalid_argument);
}

TEST_CASE("mixed-radix convention: party 0 is most significant", "[state]") {
    // |10> of two qubits lives at index 2
    std::vector<cd> amps(4, cd(0, 0));
    amps[2] = 1.0;
    const PureState s = make_state({2, 2}, amps);
    const CMat r0 = reduced_density(s, 0);
    const CMat r1 = reduced_density(s, 1);
    REQUIRE(r0(1, 1).real() == Approx(1.0).margin(1e-14));
    REQUIRE(r0(0, 0).real() == Approx(0.0).margin(1e-14));
    REQUIRE(r1(0, 0).real() == Approx(1.0).margin(1e-14));

    // dims {2,3}: |1,2> at index 1*3+2 = 5
    std::vector<cd> amps2(6, cd(0, 0));
    amps2[5] = 1.0;
    const PureState t = make_state({2, 3}, amps2);
    const CMat rho1 = reduced_density(t, 1);
    REQUIRE(rho1(2, 2).real() == Approx(1.0).margin(1e-14));
}

TEST_CASE("reduced density examples", "[state]") {
    const PureState zz = make_state({2, 2}, {cd(1, 0), cd(0, 0), cd(0, 0), cd(0, 0)});
    const CMat r = reduced_density(zz, 0);
    REQUIRE(r(0, 0).real() == Approx(1.0).margin(1e-14));
    REQUIRE(r(1, 1).real() == Approx(0.0).margin(1e-14));
    REQUIRE(std::abs(r(0, 1)) == Approx(0.0).margin(1e-14));

    const PureState bell =
        make_state({2, 2}, {cd(1, 0), cd(0, 0), cd(0, 0), cd(1, 0)}, Normalize::renorm);
    const CMat rb = reduced_density(bell, 0);
    REQUIRE(rb(0, 0).real() == Approx(0.5).margin(1e-14));
    REQUIRE(rb(1, 1).real() == Approx(0.5).margin(1e-14));

    const double a = 1.0 / std::sqrt(3.0);
    const PureState w = w_state({a, a, a});
    const CMat rw = reduced_density(w, 0);
    REQUIRE(rw(0, 0).real() == Approx(2.0 / 3.0).margin(1e-12));
    REQUIRE(rw(1, 1).real() == Approx(1.0 / 3.0).margin(1e-12));

    REQUIRE_THROWS_AS(reduced_density(bell, 2), std::out_of_range);
    REQUIRE_THROWS_AS(reduced_density(bell, -1), std::out_of_range);
}

TEST_CASE("reduced density matches the dense-oracle partial trace", "[state]") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        for (const auto& dims : {std::vector<int>{2, 2, 2}, std::vector<int>{2, 3, 4}}) {
            const PureState s = haar_random(dims, seed);
            for (int p = 0; p < s.parties(); ++p) {
                const CMat fast = reduced_density(s, p);
                const CMat dense = oracle::reduced_density_dense(s, p);
                REQUIRE((fast - dense).max_abs() < 1e-13);
            }
        }
    }
}

TEST_CASE("partial trace consistency across 1000 random states", "[state]") {
    for (int t = 0; t < 1000; ++t) {
        const PureState s = haar_random({2, 2, 2}, rng::substream_seed(11, t));
        for (int p = 0; p < 3; ++p) {
            const CMat rho = reduced_density(s, p);
            REQUIRE(std::abs(rho.trace_real() - 1.0) < 1e-12);
        }
    }
    // positive semidefinite within -1e-12 on a smaller qudit batch
    for (int t = 0; t < 50; ++t) {
        const PureState s = haar_random({3, 2, 3}, rng::substream_seed(12, t));
        for (int p = 0; p < 3; ++p) {
            const EigenSystem es = hermitian_eigensystem(reduced_density(s, p));
            for (double v : es.values) REQUIRE(v > -1e-12);
        }
    }
}

TEST_CASE("schmidt spectrum closed forms", "[state]") {
    for (double theta : {0.0, kPi / 6.0, kPi / 4.0, 1.1}) {
        const SchmidtSpectrum spec = schmidt_spectrum(ghz_state({theta}), 1);
        const double c2 = std::cos(theta) * std::cos(theta);
        const double s2 = std::sin(theta) * std::sin(theta);
        REQUIRE(spec.lambdas[0] == Approx(std::max(c2, s2)).margin(1e-12));
        REQUIRE(spec.lambdas[1] == Approx(std::min(c2, s2)).margin(1e-12));
        REQUIRE(spec.lambdas[0] + spec.lambdas[1] == Approx(1.0).margin(1e-10));
    }

    const PureState prod = make_state({2, 2}, {cd(1, 0), cd(0, 0), cd(0, 0), cd(0, 0)});
    const SchmidtSpectrum ps = schmidt_spectrum(prod, 0);
    REQUIRE(ps.lambdas[0] == 1.0);
    REQUIRE(ps.lambdas[1] == 0.0);

    const PureState bell =
        make_state({2, 2}, {cd(1, 0), cd(0, 0), cd(0, 0), cd(1, 0)}, Normalize::renorm);
    REQUIRE(schmidt_spectrum(bell, 0).lambdas[0] == Approx(0.5).margin(1e-14));

    // single party: complement is trivial, spectrum exactly (1, 0)
    const PureState one = haar_random({2}, 5);
    const SchmidtSpectrum os = schmidt_spectrum(one, 0);
    REQUIRE(os.lambdas[0] == 1.0);
    REQUIRE(os.lambdas[1] == 0.0);
}

TEST_CASE("qudit spectra agree with characteristic-polynomial roots", "[state]") {
    const PureState s = haar_random({3, 3, 3}, 77);
    for (int p = 0; p < 3; ++p) {
        const SchmidtSpectrum spec = schmidt_spectrum(s, p);
        auto roots = oracle::poly_roots(oracle::char_poly(reduced_density(s, p)));
        std::vector<double> rv;
        for (const cd& r : roots) rv.push_back(r.real());
        std::sort(rv.begin(), rv.end(), std::greater<>());
        for (std::size_t i = 0; i < 3; ++i) REQUIRE(spec.lambdas[i] == Approx(rv[i]).margin(1e-9));
    }
}

TEST_CASE("spectra are invariant under local unitaries", "[state]") {
    rng::Stream s(21);
    for (int rep = 0; rep < 25; ++rep) {
        const PureState psi = haar_random({2, 2, 2, 2}, rng::substream_seed(22, rep));
        const int target = rep % 4;
        const PureState rotated = apply_local_unitary(psi, target, random_unitary(2, s));
        for (int p = 0; p < 4; ++p) {
            const SchmidtSpectrum before = schmidt_spectrum(psi, p);
            const SchmidtSpectrum after = schmidt_spectrum(rotated, p);
            REQUIRE(oracle::max_abs_diff(before.lambdas, after.lambdas) < 1e-10);
        }
    }
}

TEST_CASE("schmidt_data reconstructs the state and is biorthonormal", "[state]") {
    // Bell: cofactors are an orthonormal pair
    const PureState bell =
        make_state({2, 2}, {cd(1, 0), cd(0, 0), cd(0, 0), cd(1, 0)}, Normalize::renorm);
    const SchmidtData bd = schmidt_data(bell, 0);
    cd dot{0, 0};
    for (std::size_t i = 0; i < 2; ++i) dot += std::conj(bd.cofactors[0][i]) * bd.cofactors[1][i];
    REQUIRE(std::abs(dot) < 1e-9);

    // GHZ(pi/6) wrt party 1: residual below 1e-9
    const PureState g = ghz_state({kPi / 6.0});
    const SchmidtData gd = schmidt_data(g, 1);
    REQUIRE(phase_distance(reconstruct_schmidt(gd, g, 1), g) < 1e-9);

    // |000>: single nonzero Schmidt term, completion stays orthonormal
    std::vector<cd> amps(8, cd(0, 0));
    amps[0] = 1.0;
    const PureState zzz = make_state({2, 2, 2}, amps);
    const SchmidtData zd = schmidt_data(zzz, 0);
    REQUIRE(zd.spectrum.lambdas[0] == Approx(1.0).margin(1e-12));
    REQUIRE(zd.spectrum.lambdas[1] == Approx(0.0).margin(1e-12));
    cd zdot{0, 0};
    double n1 = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        zdot += std::conj(zd.cofactors[0][i]) * zd.cofactors[1][i];
        n1 += std::norm(zd.cofactors[1][i]);
    }
    REQUIRE(std::abs(zdot) < 1e-9);
    REQUIRE(n1 == Approx(1.0).margin(1e-9));

    // random states, all parties; lambda_min comfortably above 1e-8 for Haar
    for (int rep = 0; rep < 30; ++rep) {
        const PureState psi = haar_random({2, 2, 2}, rng::substream_seed(23, rep));
        for (int p = 0; p < 3; ++p) {
            const SchmidtData d = schmidt_data(psi, p);
            if (d.spectrum.lambdas[1] < 1e-8) continue;
            REQUIRE(phase_distance(reconstruct_schmidt(d, psi, p), psi) < 1e-9);
            for (std::size_t m = 0; m < 2; ++m)
                for (std::size_t n = 0; n < 2; ++n) {
                    cd g{0, 0};
                    for (std::size_t i = 0; i < 4; ++i)
                        g += std::conj(d.cofactors[m][i]) * d.cofactors[n][i];
                    REQUIRE(std::abs(g - (m == n ? 1.0 : 0.0)) < 1e-9);
                }
        }
    }
}

TEST_CASE("haar sampling is deterministic, normalized, and has the right Schmidt mean",
          "[state]") {
    const PureState a = haar_random({2, 2, 2}, 99);
    const PureState b = haar_random({2, 2, 2}, 99);
    REQUIRE(a.amps == b.amps);
    REQUIRE(haar_random({2, 2, 2}, 100).amps != a.amps);
    REQUIRE(std::abs(a.norm_sq() - 1.0) < 1e-12);

    // mean of lambda_2 for two-qubit Haar states, against quadrature of the
    // Schmidt density 6*(1-2L)^2 on [0, 1/2]
    const double expected =
        oracle::simpson([](double l) { return 6.0 * l * (1.0 - 2.0 * l) * (1.0 - 2.0 * l); },
                        0.0, 0.5, 2000);
    REQUIRE(expected == Approx(0.125).margin(1e-9));
    const int n = 10000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double l2 = schmidt_spectrum(haar_random({2, 2}, rng::substream_seed(31, i)), 0)
                              .lambdas[1];
        sum += l2;
        sumsq += l2 * l2;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq / n - mean * mean) / n);
    REQUIRE(std::abs(mean - expected) < 4.0 * se);
}
