// rng.hpp
// Deterministic 64-bit random number generation: xoshiro256** seeded through
// splitmix64, with derived per-stream seeds for device/chunk splitting.
// The generator identity is recorded in simulation metadata so outputs can
// name the exact algorithm that produced them.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ontic {

inline constexpr const char* kRngId = "xoshiro256** (splitmix64 seeding)";

// splitmix64: used only to expand seeds and derive sub-stream seeds.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// Derive an independent seed for a named sub-stream (device index, chunk
// index, restart index). Mixing through splitmix64 decorrelates streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 sm(seed ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL));
    sm.next();
    return sm.next();
}

class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed = 1) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    static Xoshiro256 stream(std::uint64_t seed, std::uint64_t stream_id) {
        return Xoshiro256(derive_seed(seed, stream_id));
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    // Uniform integer in [0, n).
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(u01() * static_cast<double>(n)) % n;
    }

    bool bernoulli(double p) { return u01() < p; }

    // Inverse-CDF draw over a probability vector, stable in index order.
    std::size_t categorical(const std::vector<double>& p) {
        const double u = u01();
        double cum = 0.0;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            cum += p[i];
            if (u < cum) return i;
        }
        return p.empty() ? 0 : p.size() - 1;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

} // namespace ontic
