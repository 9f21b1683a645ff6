#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synchart/decimal.hpp"

namespace synchart {

/// Rectangular labeled numeric table; the ground truth every label derives from.
///
/// Canonical CSV: comma separator, header row first (index_label then series
/// labels), LF line endings with a trailing LF, fields quoted only when they
/// contain a comma or a quote (quotes doubled inside quoted fields).
struct DataTable {
    std::string index_label;
    std::vector<std::string> index;
    std::vector<std::string> series_labels;
    std::vector<std::vector<Decimal>> cells;  // row-major

    std::size_t rows() const { return index.size(); }
    std::size_t cols() const { return series_labels.size(); }
    const Decimal& at(std::size_t row, std::size_t col) const { return cells[row][col]; }

    std::optional<std::size_t> find_row(std::string_view label) const;
    std::optional<std::size_t> find_col(std::string_view label) const;

    std::vector<Decimal> column(std::size_t col) const;
    const std::vector<Decimal>& row(std::size_t r) const { return cells[r]; }

    std::string to_csv() const;
    /// Throws Error(ParseError) on malformed text or non-numeric cells.
    static DataTable from_csv(std::string_view text);

    friend bool operator==(const DataTable&, const DataTable&) = default;
};

/// Invariant check; returns human-readable problems, empty when valid.
std::vector<std::string> table_problems(const DataTable& table);

/// Splits one CSV line honoring double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_field(std::string_view value);

}  // namespace synchart
