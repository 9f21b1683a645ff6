#include "synchart/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "synchart/error.hpp"

namespace synchart {

GenConfig GenConfig::defaults()
{
    GenConfig c;
    c.catalogs = Catalogs::bundled();
    return c;
}

double GenConfig::type_weight(ChartType type) const
{
    auto it = chart_type_weights.find(type);
    return it == chart_type_weights.end() ? 1.0 : it->second;
}

double GenConfig::engine_weight(EngineId engine) const
{
    auto it = engine_weights.find(engine);
    return it == engine_weights.end() ? 1.0 : it->second;
}

std::vector<std::pair<EngineId, ChartType>> GenConfig::domain() const
{
    std::vector<std::pair<EngineId, ChartType>> out;
    for (auto [engine, type] : compatible_pairs()) {
        if (allow_types && !allow_types->count(type)) continue;
        if (allow_engines && !allow_engines->count(engine)) continue;
        if (type_weight(type) <= 0.0 || engine_weight(engine) <= 0.0) continue;
        out.emplace_back(engine, type);
    }
    return out;
}

void GenConfig::validate() const
{
    if (!catalogs) throw Error(ErrorCode::ConfigInvalid, "no catalogs loaded");
    for (const auto& [type, w] : chart_type_weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw Error(ErrorCode::ConfigInvalid, fmt::format("bad weight for {}", to_string(type)));
        }
    }
    for (const auto& [engine, w] : engine_weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw Error(ErrorCode::ConfigInvalid, fmt::format("bad weight for {}", to_string(engine)));
        }
    }
    if (domain().empty()) throw Error(ErrorCode::EmptyDomain, "no compatible (engine, chart type) pair left");
}

std::string record_id_for_seed(std::uint64_t seed)
{
    return fmt::format("{:016x}", seed);
}

Theme sample_theme(std::uint64_t seed, const Catalogs& catalogs)
{
    if (catalogs.themes.empty()) throw Error(ErrorCode::CatalogEmpty, "theme catalog is empty");
    CounterRng rng(seed, "theme");
    return catalogs.themes[rng.below(catalogs.themes.size())];
}

std::pair<int, int> sample_dimensions(ChartType type, CounterRng& rng)
{
    const DimConstraint& dc = dim_constraint(type);
    int cols = dc.cols.values[rng.weighted(std::span<const std::uint32_t>(dc.cols.weights))];
    int rows = dc.rows.values[rng.weighted(std::span<const std::uint32_t>(dc.rows.weights))];
    return {rows, cols};
}

std::vector<std::string> assign_trends(ChartType type, int n_series, int series_len, std::uint64_t seed,
                                       const Catalogs& catalogs)
{
    CounterRng rng(seed, "trends");
    auto pool = catalogs.trends_for(type, series_len);
    if (pool.empty()) throw Error(ErrorCode::CatalogInvalid, fmt::format("no trend fits {}", to_string(type)));

    std::vector<const TrendTag*> chosen;
    for (int s = 0; s < n_series; ++s) {
        if (type == ChartType::Scatter && s == 0) {
            std::vector<const TrendTag*> rising;
            for (const auto* t : pool) {
                if (t->family == TrendFamily::MonotoneIncreasing) rising.push_back(t);
            }
            if (!rising.empty()) {
                chosen.push_back(rising[rng.below(rising.size())]);
                continue;
            }
        }
        chosen.push_back(pool[rng.below(pool.size())]);
    }

    if (n_series >= 3) {
        std::set<TrendFamily> families;
        for (const auto* t : chosen) families.insert(t->family);
        if (families.size() < 2) {
            std::vector<const TrendTag*> other;
            for (const auto* t : pool) {
                if (t->family != chosen.front()->family) other.push_back(t);
            }
            if (!other.empty()) chosen.back() = other[rng.below(other.size())];
        }
    }

    std::vector<std::string> ids;
    for (const auto* t : chosen) ids.push_back(t->id);
    return ids;
}

ChartSpec sample_chart_spec(std::uint64_t seed, const GenConfig& config)
{
    config.validate();
    CounterRng rng(seed, "spec");

    // Type first, then an engine among those compatible with it.
    auto domain = config.domain();
    std::vector<ChartType> types;
    for (ChartType t : kChartTypes) {
        for (auto& [e, dt] : domain) {
            if (dt == t) {
                types.push_back(t);
                break;
            }
        }
    }
    std::vector<double> tw;
    for (ChartType t : types) tw.push_back(config.type_weight(t));
    ChartType type = types[rng.weighted(std::span<const double>(tw))];

    std::vector<EngineId> engines;
    std::vector<double> ew;
    for (auto& [e, dt] : domain) {
        if (dt == type) {
            engines.push_back(e);
            ew.push_back(config.engine_weight(e));
        }
    }
    EngineId engine = engines[rng.weighted(std::span<const double>(ew))];

    ChartSpec spec;
    spec.seed = seed;
    spec.record_id = record_id_for_seed(seed);
    spec.chart_type = type;
    spec.engine = engine;
    spec.theme = sample_theme(seed, *config.catalogs);
    auto [rows, cols] = sample_dimensions(type, rng);
    spec.n_rows = rows;
    spec.n_cols = cols;
    spec.trends = assign_trends(type, series_count(type, rows, cols), series_length(type, rows, cols), seed,
                                *config.catalogs);
    spec.style_seed = mix64(seed ^ 0x5354594C45ULL);
    return spec;
}

}  // namespace synchart
