#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "synchart/backend.hpp"
#include "synchart/catalog.hpp"
#include "synchart/core_types.hpp"
#include "synchart/data_table.hpp"

namespace synchart {

/// A cell multiplied to stand out from its series.
struct OutlierMark {
    CellRef cell;
    int multiplier = 2;
    friend bool operator==(const OutlierMark&, const OutlierMark&) = default;
};

struct SynthOptions {
    double noise_level = 0.04;
    bool inject_outliers = true;
    int max_backend_attempts = 3;
};

struct SynthesizedTable {
    DataTable table;
    std::string measure;  // value-axis wording
    /// What the series labels name: a lowercase category word, "year",
    /// "month" or "measure".
    std::string col_kind;
    std::vector<OutlierMark> outliers;
    /// Description returned alongside the data by a text-generation backend.
    std::optional<std::string> backend_description;
};

/// Outliers: one for tables of at least 12 cells, two from 48 cells.
int outlier_count_for(int n_rows, int n_cols);

/// Values of series s, in order (a column, or a row for radar).
std::vector<Decimal> series_values(ChartType type, const DataTable& table, std::size_t s);
std::string series_label(ChartType type, const DataTable& table, std::size_t s);
/// Labels along a series (index labels, or column labels for radar).
const std::vector<std::string>& series_positions(ChartType type, const DataTable& table);

SynthesizedTable synth_table(const ChartSpec& spec, const Catalogs& catalogs, TextGenBackend& backend,
                             const SynthOptions& options = {});

}  // namespace synchart
