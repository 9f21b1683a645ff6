#include "synchart/trend.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace synchart {
namespace {

using Wide = __int128;

// Twice the median, so halves stay integral.
Wide median2(std::vector<Wide> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return 2 * v[n / 2];
    return v[n / 2 - 1] + v[n / 2];
}

bool extreme_rule(const std::vector<Wide>& x, bool high)
{
    const std::size_t n = x.size();
    if (n < 3) return false;
    std::size_t at = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (high ? x[i] > x[at] : x[i] < x[at]) at = i;
    }
    if (at == 0 || at == n - 1) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (i != at && x[i] == x[at]) return false;
    }
    std::vector<Wide> rest;
    for (std::size_t i = 0; i < n; ++i) {
        if (i != at) rest.push_back(x[i]);
    }
    const Wide m2 = median2(rest);
    const auto [lo, hi] = std::minmax_element(rest.begin(), rest.end());
    const Wide range4 = 4 * (*hi - *lo);
    const Wide e = x[at];
    if (high) return e >= m2 && 2 * e - m2 > range4;
    return 4 * e <= m2 && m2 - 2 * e > range4;
}

double autocorr_wide(const std::vector<Wide>& x, int lag)
{
    const int n = static_cast<int>(x.size());
    if (lag <= 0 || lag >= n) return 0.0;
    long double mean = 0;
    for (Wide v : x) mean += static_cast<long double>(v);
    mean /= n;
    long double var = 0;
    for (Wide v : x) {
        long double d = static_cast<long double>(v) - mean;
        var += d * d;
    }
    var /= n;
    if (var == 0) return 0.0;
    long double cov = 0;
    for (int i = 0; i + lag < n; ++i) {
        cov += (static_cast<long double>(x[static_cast<std::size_t>(i)]) - mean) *
               (static_cast<long double>(x[static_cast<std::size_t>(i + lag)]) - mean);
    }
    cov /= (n - lag);
    return static_cast<double>(cov / var);
}

TrendFamily classify_wide(const std::vector<Wide>& x)
{
    const std::size_t n = x.size();
    if (n < 2 || std::all_of(x.begin(), x.end(), [&](Wide v) { return v == x[0]; })) return TrendFamily::Constant;
    if (extreme_rule(x, true)) return TrendFamily::Spike;
    if (extreme_rule(x, false)) return TrendFamily::Dip;

    std::vector<Wide> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = x[i + 1] - x[i];

    std::size_t lead = 0;
    while (lead < d.size() && d[lead] == 0) ++lead;
    if (lead >= 1 && d.size() - lead >= 2) {
        const bool up = d[lead] > 0;
        bool same = true;
        for (std::size_t i = lead; i < d.size(); ++i) {
            if (d[i] == 0 || (d[i] > 0) != up) same = false;
        }
        if (same) return TrendFamily::PlateauThenChange;
    }

    if (std::all_of(d.begin(), d.end(), [](Wide v) { return v > 0; })) {
        if (n >= 4) {
            bool all_pos = true;
            bool all_neg = true;
            for (std::size_t i = 0; i + 1 < d.size(); ++i) {
                Wide d2 = d[i + 1] - d[i];
                if (d2 <= 0) all_pos = false;
                if (d2 >= 0) all_neg = false;
            }
            if (all_pos && d.back() >= 2 * d.front()) return TrendFamily::Accelerating;
            if (all_neg && d.front() >= 2 * d.back()) return TrendFamily::Decelerating;
        }
        return TrendFamily::MonotoneIncreasing;
    }
    if (std::all_of(d.begin(), d.end(), [](Wide v) { return v < 0; })) return TrendFamily::MonotoneDecreasing;

    int changes = 0;
    int last_sign = 0;
    for (Wide v : d) {
        int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (s == 0) continue;
        if (last_sign != 0 && s != last_sign) ++changes;
        last_sign = s;
    }
    if (changes >= 2) {
        double best = -1.0;
        for (int lag = 2; lag <= static_cast<int>(n) / 2; ++lag) best = std::max(best, autocorr_wide(x, lag));
        if (best >= 0.6) return TrendFamily::Cyclic;
    }
    return TrendFamily::Volatile;
}

}  // namespace

TrendFamily classify_trend(std::span<const std::int64_t> series)
{
    return classify_wide(std::vector<Wide>(series.begin(), series.end()));
}

TrendFamily classify_trend(std::span<const Decimal> series)
{
    int scale = 0;
    for (const auto& d : series) scale = std::max(scale, d.scale());
    std::vector<Wide> x;
    x.reserve(series.size());
    for (const auto& d : series) {
        Wide v = d.units();
        for (int i = d.scale(); i < scale; ++i) v *= 10;
        x.push_back(v);
    }
    return classify_wide(x);
}

double autocorrelation(std::span<const std::int64_t> series, int lag)
{
    return autocorr_wide(std::vector<Wide>(series.begin(), series.end()), lag);
}

namespace {

using Series = std::vector<std::int64_t>;

std::int64_t round_i(double v)
{
    return static_cast<std::int64_t>(std::llround(v));
}

double draw(CounterRng& rng, ParamRange r)
{
    return r.lo == r.hi ? r.lo : rng.uniform(r.lo, r.hi);
}

Series linear(std::int64_t start, std::int64_t total, int n, int dir)
{
    Series s;
    for (int i = 0; i < n; ++i) {
        double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        s.push_back(start + dir * round_i(f * static_cast<double>(total)));
    }
    return s;
}

// Noise-free member of the family.
Series shape(const TrendTag& tag, int n, std::int64_t base, CounterRng& rng)
{
    const auto steps = static_cast<std::int64_t>(std::max(1, n - 1));
    switch (tag.family) {
    case TrendFamily::Constant:
        return Series(static_cast<std::size_t>(n), base);
    case TrendFamily::MonotoneIncreasing: {
        double amp = draw(rng, tag.param("amp", {0.3, 0.8}));
        std::int64_t total = std::max(steps, round_i(base * amp));
        return linear(base, total, n, 1);
    }
    case TrendFamily::MonotoneDecreasing: {
        double amp = draw(rng, tag.param("amp", {0.2, 0.6}));
        std::int64_t total = std::max(steps, round_i(base * amp));
        total = std::min(total, base - 1);
        if (total < steps) {
            base = steps + 1 + base;
            total = steps;
        }
        return linear(base, total, n, -1);
    }
    case TrendFamily::Spike:
    case TrendFamily::Dip: {
        double factor = draw(rng, tag.param("factor", tag.family == TrendFamily::Spike ? ParamRange{2.5, 4}
                                                                                          : ParamRange{0.1, 0.4}));
        Series s(static_cast<std::size_t>(n), base);
        auto at = static_cast<std::size_t>(rng.range(1, n - 2));
        s[at] = std::max<std::int64_t>(1, round_i(base * factor));
        return s;
    }
    case TrendFamily::PlateauThenChange: {
        double split = draw(rng, tag.param("split", {0.3, 0.6}));
        int dir = tag.param("dir", {1, 1}).lo < 0 ? -1 : 1;
        double amp = draw(rng, tag.param("amp", {0.3, 0.8}));
        int flat = std::clamp(static_cast<int>(std::lround(n * split)), 2, n - 2);
        int moving = n - flat;
        std::int64_t total = std::max<std::int64_t>(moving, round_i(base * amp));
        if (dir < 0) {
            total = std::min(total, base - 1);
            if (total < moving) {
                base += moving;
                total = moving;
            }
        }
        Series s(static_cast<std::size_t>(flat), base);
        for (int i = 1; i <= moving; ++i) {
            s.push_back(base + dir * round_i(static_cast<double>(total) * i / moving));
        }
        return s;
    }
    case TrendFamily::Accelerating:
    case TrendFamily::Decelerating: {
        double amp = draw(rng, tag.param("amp", {1.0, 2.0}));
        const std::int64_t m = steps;  // number of increments, >= 3
        std::int64_t total = std::max<std::int64_t>(round_i(base * amp), 3 * m * m);
        std::int64_t tri = m * (m - 1) / 2;
        std::int64_t a = std::max<std::int64_t>(1, total / (4 * m));
        std::int64_t b = std::max<std::int64_t>(1, (total - a * m) / std::max<std::int64_t>(1, tri));
        if (b * (m - 1) < a) b = (a + m - 2) / (m - 1);
        Series inc;
        for (std::int64_t i = 0; i < m; ++i) inc.push_back(a + b * i);
        if (tag.family == TrendFamily::Decelerating) std::reverse(inc.begin(), inc.end());
        Series s{base};
        for (auto d : inc) s.push_back(s.back() + d);
        return s;
    }
    case TrendFamily::Cyclic: {
        ParamRange pr = tag.param("period", {4, 6});
        int period = static_cast<int>(rng.range(static_cast<std::int64_t>(pr.lo), static_cast<std::int64_t>(pr.hi)));
        period = std::clamp(period, 2, n / 2);
        double amp = draw(rng, tag.param("amp", {0.2, 0.4}));
        int phase = static_cast<int>(rng.below(static_cast<std::uint64_t>(period)));
        Series s;
        for (int i = 0; i < n; ++i) {
            double angle = 2.0 * std::numbers::pi * (i + phase) / period;
            s.push_back(base + round_i(base * amp * std::cos(angle)));
        }
        return s;
    }
    case TrendFamily::Volatile: {
        double amp = draw(rng, tag.param("amp", {0.3, 0.6}));
        Series s;
        for (int i = 0; i < n; ++i) s.push_back(std::max<std::int64_t>(1, base + round_i(base * amp * rng.uniform(-1, 1))));
        return s;
    }
    }
    return Series(static_cast<std::size_t>(n), base);
}

// Shapes that are members of their family by construction.
Series fallback(const TrendTag& tag, int n, std::int64_t base)
{
    switch (tag.family) {
    case TrendFamily::Cyclic: {
        std::int64_t a = std::max<std::int64_t>(1, base / 4);
        Series s;
        for (int i = 0; i < n; ++i) s.push_back(i % 2 == 0 ? base + a : base - a);
        return s;
    }
    case TrendFamily::Volatile: {
        // Tent: one direction change, extremes at the ends or repeated.
        std::int64_t a = std::max<std::int64_t>(n, base / 3);
        Series s;
        for (int i = 0; i < n; ++i) {
            double t = 1.0 - std::abs(2.0 * i / (n - 1) - 1.0);
            s.push_back(base + round_i(a * t));
        }
        return s;
    }
    default:
        return {};
    }
}

}  // namespace

std::vector<std::int64_t> realize_trend(const TrendTag& tag, int length, const TrendParams& params, CounterRng& rng)
{
    const int n = std::max(1, length);
    const std::int64_t base = std::max<std::int64_t>(100, params.base_units);
    if (n < min_series_length(tag.family)) return Series(static_cast<std::size_t>(n), base);

    const bool noisy = params.noise_level > 0.0;
    const int attempts = noisy || tag.family == TrendFamily::Volatile || tag.family == TrendFamily::Cyclic ? 48 : 1;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        Series s = shape(tag, n, base, rng);
        if (noisy && tag.family != TrendFamily::Constant) {
            const double spread = static_cast<double>(base) * params.noise_level;
            for (auto& v : s) v = std::max<std::int64_t>(1, v + round_i(spread * rng.uniform(-1, 1)));
        }
        if (classify_trend(s) == tag.family) return s;
    }
    for (int attempt = 0; attempt < 16; ++attempt) {
        Series s = shape(tag, n, base, rng);
        if (classify_trend(s) == tag.family) return s;
    }
    Series s = fallback(tag, n, base);
    if (!s.empty()) return s;
    return shape(tag, n, base, rng);
}

}  // namespace synchart
