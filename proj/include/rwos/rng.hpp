#pragma once
/**
 * @file rng.hpp
 * @brief Counter-based random streams for reproducible parallel sampling.
 *
 * Every Monte Carlo path owns a Philox4x32-10 stream addressed by
 * (key, path index, attempt). The key is derived from the run seed and the
 * evaluation point index, so the bits a path consumes depend only on its
 * address and never on thread scheduling.
 */

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace rwos {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed for sub-stream `index` of `seed` (per evaluation point, per problem).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index ^ 0xD1B54A32D192ED03ULL));
}

/// Philox4x32 with 10 rounds.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter block(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        return ctr;
    }
};

/// One path's random stream. Satisfies UniformRandomBitGenerator, but the
/// sampler only uses the explicit conversions below so results do not
/// depend on the standard library's distribution implementations.
class PathRng {
public:
    using result_type = std::uint64_t;

    PathRng(std::uint64_t key, std::uint64_t path, std::uint32_t attempt = 0)
        : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
          path_(path), attempt_(attempt) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() {
        if (have_ == 0) refill();
        --have_;
        return buffer_[have_];
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; pairs are cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    std::uint64_t blocks_used() const { return block_; }

private:
    void refill() {
        const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_), attempt_,
                                      static_cast<std::uint32_t>(path_),
                                      static_cast<std::uint32_t>(path_ >> 32)};
        const auto out = Philox4x32::block(ctr, key_);
        ++block_;
        buffer_[1] = (std::uint64_t{out[0]} << 32) | out[1];
        buffer_[0] = (std::uint64_t{out[2]} << 32) | out[3];
        have_ = 2;
    }

    Philox4x32::Key key_;
    std::uint64_t path_;
    std::uint32_t attempt_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int have_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rwos
