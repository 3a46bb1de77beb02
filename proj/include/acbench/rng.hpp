#pragma once

#include <cstdint>
#include <cmath>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

namespace acbench {

/**
 * Deterministic, platform-independent PRNG (xoshiro256** seeded via
 * splitmix64). The standard <random> distributions are implementation
 * defined, so uniform/normal draws are generated here explicitly: the
 * same seed yields the same byte-identical sequence everywhere.
 *
 * Streams for independent work units (room, structure, trial, ...) are
 * derived with Rng::stream(seed, tags...), which hashes the tags into the
 * seed so parallel schedules never affect results.
 */
class Rng {
public:
    explicit Rng(uint64_t seed) { reseed(seed); }

    void reseed(uint64_t seed) {
        uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    /// Uniform integer in [0, n). n must be > 0.
    uint64_t below(uint64_t n) {
        // Rejection-free is unnecessary here; modulo bias is negligible for
        // the index ranges used (n << 2^64), but keep it exact anyway.
        const uint64_t threshold = (0 - n) % n;
        for (;;) {
            const uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    /// Standard normal via Box-Muller (cosine branch; two uniforms per draw).
    double normal() {
        double u1 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double std) { return mean + normal() * std; }

    /// Fisher-Yates shuffle of an index-addressable container.
    template <typename Vec>
    void shuffle(Vec& v) {
        for (size_t i = v.size(); i > 1; --i) {
            const size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Derive a child stream from a base seed and a sequence of tags.
    template <typename... Tags>
    static Rng stream(uint64_t seed, const Tags&... tags) {
        uint64_t h = 0xcbf29ce484222325ULL ^ seed;
        (mix(h, tags), ...);
        return Rng(h);
    }

private:
    static uint64_t splitmix64(uint64_t& x) {
        uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static void mix(uint64_t& h, std::string_view tag) {
        for (const char c : tag) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        h ^= 0xff;
        h *= 0x100000001b3ULL;
    }
    static void mix(uint64_t& h, const std::string& tag) { mix(h, std::string_view(tag)); }
    static void mix(uint64_t& h, const char* tag) { mix(h, std::string_view(tag)); }
    template <typename T>
        requires std::is_integral_v<T>
    static void mix(uint64_t& h, T tag) {
        const uint64_t v = static_cast<uint64_t>(tag);
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    }

    uint64_t state_[4];
};

}  // namespace acbench
