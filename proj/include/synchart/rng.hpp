#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace synchart {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// 64-bit FNV-1a, used to turn stream names into keys.
constexpr std::uint64_t fnv1a64(std::string_view text)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Per-record seed: mix64(base_seed ^ mix64(index + 0x632BE59BD9B4E019)).
/// Any record can be regenerated from (base_seed, index) alone.
constexpr std::uint64_t derive_record_seed(std::uint64_t base_seed, std::uint64_t index)
{
    return mix64(base_seed ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

/// Counter-based generator: output k of stream (seed, name) is
///   mix64(key + (k + 1) * 0x9E3779B97F4A7C15), key = mix64(seed ^ fnv1a64(name)).
///
/// Identical on every platform; integer draws use rejection sampling, never
/// the implementation-defined std distributions.
class CounterRng {
public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    CounterRng(std::uint64_t seed, std::string_view stream) : key_(mix64(seed ^ fnv1a64(stream))) {}

    std::uint64_t next() { return mix64(key_ + (++counter_) * kGamma); }
    std::uint64_t counter() const { return counter_; }

    /// Uniform in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound);
    /// Uniform in [lo, hi] inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi);
    /// Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    bool chance(double p) { return unit() < p; }

    /// Index drawn proportionally to non-negative weights (at least one > 0).
    std::size_t weighted(std::span<const double> weights);
    std::size_t weighted(std::span<const std::uint32_t> weights);

    template <class T>
    const T& pick(std::span<const T> items)
    {
        return items[static_cast<std::size_t>(below(items.size()))];
    }

    template <class It>
    void shuffle(It first, It last)
    {
        auto n = static_cast<std::uint64_t>(last - first);
        for (std::uint64_t i = n; i > 1; --i) {
            std::uint64_t j = below(i);
            std::iter_swap(first + static_cast<std::ptrdiff_t>(i - 1), first + static_cast<std::ptrdiff_t>(j));
        }
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace synchart
