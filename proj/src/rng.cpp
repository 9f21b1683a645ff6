#include "synchart/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace synchart {

std::uint64_t CounterRng::below(std::uint64_t bound)
{
    if (bound == 0) throw std::invalid_argument("CounterRng::below: bound must be positive");
    // Reject the top partial bucket so every residue is equally likely.
    const std::uint64_t limit = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
        std::uint64_t x = next();
        if (x >= limit) return x % bound;
    }
}

std::int64_t CounterRng::range(std::int64_t lo, std::int64_t hi)
{
    if (hi < lo) throw std::invalid_argument("CounterRng::range: empty range");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(span == 0 ? next() : below(span));
}

std::size_t CounterRng::weighted(std::span<const double> weights)
{
    double total = 0.0;
    for (double w : weights) total += std::max(w, 0.0);
    if (!(total > 0.0)) throw std::invalid_argument("CounterRng::weighted: no positive weight");
    double target = unit() * total;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        last_positive = i;
        if (target < weights[i]) return i;
        target -= weights[i];
    }
    return last_positive;
}

std::size_t CounterRng::weighted(std::span<const std::uint32_t> weights)
{
    std::uint64_t total = 0;
    for (auto w : weights) total += w;
    if (total == 0) throw std::invalid_argument("CounterRng::weighted: no positive weight");
    std::uint64_t target = below(total);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (target < weights[i]) return i;
        target -= weights[i];
    }
    return weights.size() - 1;
}

}  // namespace synchart
