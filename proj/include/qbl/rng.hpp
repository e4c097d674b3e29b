#pragma once

// Counter-based random streams.
//
// Every trial of every experiment draws from its own stream, addressed by a
// (root_seed, stream_id) pair. The generator behind a stream is Philox4x64-10
// keyed by the root seed, with the stream id in the second counter word, so
// no two streams of the same root overlap and the values a trial sees do not
// depend on which thread runs it or in which order.
//
// Gaussians use the Box-Muller transform (both outputs are used). This is
// fixed for the 0.x series; golden values in tests rely on it.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace qbl {

struct SeedSpec {
    std::uint64_t root_seed = 0;
    std::uint64_t stream_id = 0;

    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

inline constexpr std::uint64_t kDefaultSeed = 20120301;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Child stream `sub` of `parent`, for nested sampling (one stream per line,
/// per rotation, ...). Distinct parents give distinct child roots except with
/// probability ~2^-64.
constexpr SeedSpec derive_seed(SeedSpec parent, std::uint64_t sub) noexcept {
    return SeedSpec{splitmix64(parent.root_seed ^ splitmix64(parent.stream_id + 0x632BE59BD9B4E019ULL)),
                    sub};
}

namespace detail {

inline void mulhilo64(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) noexcept {
    __extension__ using u128 = unsigned __int128;
    const u128 p = static_cast<u128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

}  // namespace detail

using Philox4x64Counter = std::array<std::uint64_t, 4>;
using Philox4x64Key = std::array<std::uint64_t, 2>;

/// The Philox4x64 bijection with 10 rounds (Salmon et al., SC'11).
inline Philox4x64Counter philox4x64_10(Philox4x64Counter ctr, Philox4x64Key key) noexcept {
    constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
    constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
    constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
    constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kW0;
            key[1] += kW1;
        }
        std::uint64_t hi0, lo0, hi1, lo1;
        detail::mulhilo64(kM0, ctr[0], hi0, lo0);
        detail::mulhilo64(kM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

/// One random stream. Satisfies UniformRandomBitGenerator.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(SeedSpec seed) noexcept
        : key_{seed.root_seed, 0x5175616472696373ULL}, stream_(seed.stream_id) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (pos_ == 4) {
            buffer_ = philox4x64_10({block_++, stream_, 0, 0}, key_);
            pos_ = 0;
        }
        return buffer_[pos_++];
    }

    /// Uniform on (0, 1], 53 random bits.
    double uniform_open0() noexcept {
        return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Uniform on [0, 1).
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_open0()));
        const double phi = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

    double normal(double stddev) noexcept { return stddev * normal(); }

private:
    Philox4x64Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Philox4x64Counter buffer_{};
    int pos_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace qbl
