// Deterministic, counter-based random streams.
//
// Every sampler in this library draws from a Stream derived from
// (master seed, stream index), so results are reproducible and
// independent of how work is split across threads.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace epi::rng {

// splitmix64 output mixer (Vigna). Passes BigCrush; plenty for Monte Carlo.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Collapse (master, stream) into one well-mixed 64-bit substream seed.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    splitmix64(s);
    return splitmix64(s);
}

// Small self-contained generator. Behavior is fully specified here (no
// reliance on std distribution internals), so outputs are identical on
// every platform and standard library.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}
    Stream(std::uint64_t master, std::uint64_t stream)
        : state_(substream_seed(master, stream)) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform in [0,1) with 53 random bits
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller; second deviate is cached
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u = 1.0 - uniform();  // (0,1], keeps log finite
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 2.0 * std::numbers::pi * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace epi::rng
