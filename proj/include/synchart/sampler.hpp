#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "synchart/catalog.hpp"
#include "synchart/core_types.hpp"
#include "synchart/rng.hpp"

namespace synchart {

/// Generation config for the spec sampler. Missing weights count as 1.
struct GenConfig {
    std::map<ChartType, double> chart_type_weights;
    std::map<EngineId, double> engine_weights;
    std::shared_ptr<const Catalogs> catalogs;
    std::optional<std::set<ChartType>> allow_types;
    std::optional<std::set<EngineId>> allow_engines;

    static GenConfig defaults();

    double type_weight(ChartType type) const;
    double engine_weight(EngineId engine) const;
    /// Compatible (engine, type) pairs left after restrictions and zero weights.
    std::vector<std::pair<EngineId, ChartType>> domain() const;
    /// Throws ConfigInvalid (bad weights, no catalogs) or EmptyDomain.
    void validate() const;
};

ChartSpec sample_chart_spec(std::uint64_t seed, const GenConfig& config);

/// Uniform draw over the catalog's themes; throws CatalogEmpty.
Theme sample_theme(std::uint64_t seed, const Catalogs& catalogs);

/// (n_rows, n_cols) drawn independently from the per-type distributions.
std::pair<int, int> sample_dimensions(ChartType type, CounterRng& rng);

/// One trend id per series, each applicable to the type and realizable at
/// the series length. Three or more series always mix at least two families.
/// Scatter series 0 is the x variable and always gets an increasing trend.
std::vector<std::string> assign_trends(ChartType type, int n_series, int series_len, std::uint64_t seed,
                                       const Catalogs& catalogs);

std::string record_id_for_seed(std::uint64_t seed);

}  // namespace synchart
