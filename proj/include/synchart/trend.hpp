#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "synchart/core_types.hpp"
#include "synchart/decimal.hpp"
#include "synchart/rng.hpp"

namespace synchart {

/// Rule-based family classifier. Rules are tried in order:
///
///  1. constant     fewer than 2 points, or all equal
///  2. spike        unique interior argmax m with m >= 2 * median(rest)
///                  and m - median(rest) > 2 * range(rest)
///  3. dip          unique interior argmin m with m <= median(rest) / 2
///                  and median(rest) - m > 2 * range(rest)
///  4. plateau_then_change  k >= 1 leading zero steps, then >= 2 steps that
///                  are all nonzero with one sign
///  5. all steps > 0: accelerating (n >= 4, second differences > 0, last
///                  step >= 2 * first), decelerating (second differences < 0,
///                  first step >= 2 * last), else monotone_increasing
///  6. all steps < 0: monotone_decreasing
///  7. cyclic       >= 2 direction changes and max normalized
///                  autocorrelation over lags 2..n/2 >= 0.6
///  8. volatile     everything else
TrendFamily classify_trend(std::span<const Decimal> series);
TrendFamily classify_trend(std::span<const std::int64_t> series);

/// Normalized autocorrelation used by rule 7:
///   r(L) = [sum_i (x_i - m)(x_{i+L} - m) / (n - L)] / [sum_i (x_i - m)^2 / n]
double autocorrelation(std::span<const std::int64_t> series, int lag);

struct TrendParams {
    std::int64_t base_units = 100;  // >= 100
    double noise_level = 0.0;       // in [0, 1]
};

/// Integer series realizing the tag. With noise_level 0 the result is an
/// exact member of the tag's family; with noise it is re-checked and falls
/// back to the noise-free shape when the family would be lost.
std::vector<std::int64_t> realize_trend(const TrendTag& tag, int length, const TrendParams& params, CounterRng& rng);

}  // namespace synchart
