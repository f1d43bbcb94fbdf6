// Deterministic random streams.
//
// Every estimator in this library draws from an RngStream, a value type
// naming a (master_seed, stream_id) pair. Substreams are derived in O(1)
// by hashing, so Monte Carlo loops can assign one stream per sample index
// and the result is independent of how samples are distributed over
// workers. Same descriptor, same parameters -> bitwise identical draws.

#pragma once

#include <cstdint>
#include <cmath>
#include <stdexcept>

namespace spectra {

/// SplitMix64 output function. Bijective mixer on 64-bit words.
inline constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Immutable stream descriptor. Drawing never mutates the descriptor;
/// construct an RngEngine from it to get per-call local state.
struct RngStream {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;

    /// Derive the k-th substream. Used to give each Monte Carlo sample,
    /// worker-independent, its own stream: child(i) for sample index i.
    [[nodiscard]] constexpr RngStream child(std::uint64_t k) const noexcept {
        return RngStream{master_seed, splitmix64(stream_id ^ splitmix64(k ^ 0x6a09e667f3bcc909ULL))};
    }
};

inline constexpr bool operator==(const RngStream& a, const RngStream& b) noexcept {
    return a.master_seed == b.master_seed && a.stream_id == b.stream_id;
}

/// xoshiro256++ engine seeded from an RngStream via SplitMix64 expansion.
/// Cheap to construct, so make one per sample rather than sharing across
/// concurrent consumers.
class RngEngine {
public:
    explicit RngEngine(RngStream stream) noexcept {
        std::uint64_t x = splitmix64(stream.master_seed) ^ splitmix64(splitmix64(stream.stream_id));
        for (auto& word : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            word = splitmix64(x);
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform draw in [0, 1) with 53 random bits.
    double uniform01() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform draw in (0, 1]; safe as a log() argument.
    double uniform01_open_below() noexcept {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the paired deviate is cached.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u = uniform01_open_below();
        const double v = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// One chi-square draw with k degrees of freedom (sum of k squared
/// standard normals).
inline double chi2_sample(int k, RngEngine& eng) {
    if (k < 1) throw std::invalid_argument("chi2_sample: degrees of freedom must be >= 1");
    double s = 0.0;
    for (int i = 0; i < k; ++i) {
        const double z = eng.normal();
        s += z * z;
    }
    return s;
}

inline double chi2_sample(int k, RngStream stream) {
    RngEngine eng(stream);
    return chi2_sample(k, eng);
}

} // namespace spectra
