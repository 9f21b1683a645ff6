#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "synchart/core_types.hpp"
#include "synchart/data_table.hpp"

namespace synchart {

/// What the two table axes mean on the chart, for phrasing questions.
struct QAContext {
    ChartType chart_type = ChartType::Bar;
    std::string row_kind;  // e.g. "year", "genre"
    std::string col_kind;  // e.g. "genre", "measure"
    bool rows_temporal = false;
    bool cols_temporal = false;
    bool cols_are_measures = false;
};

/// Labels that are all years or all month names read as positions in time.
bool labels_temporal(const std::vector<std::string>& labels);
QAContext infer_context(const DataTable& table, ChartType type, const std::string& col_kind);

inline constexpr int kSimpleMin = 3;
inline constexpr int kSimpleMax = 20;
inline constexpr int kComplexMin = 2;
inline constexpr int kComplexMax = 10;

/// Target counts drawn per record: simple uniform in [16, 20], complex in
/// [4, 10]; realized counts are capped by what the table supports.
int target_simple_count(std::uint64_t seed);
int target_complex_count(std::uint64_t seed);

/// Up to n simple items, answers produced by the oracle. Throws
/// InsufficientTable when fewer than 3 distinct items exist.
std::vector<QAItem> gen_simple_qa(const DataTable& table, const QAContext& ctx, std::uint64_t seed, int n);
/// Up to n complex items with describe/compute/conclude traces. Throws
/// InsufficientTable when fewer than 2 exist.
std::vector<QAItem> gen_complex_qa(const DataTable& table, const QAContext& ctx, std::uint64_t seed, int n);

/// Question and trace text for a program; exposed for fixtures.
QAItem make_item(const OracleProgram& program, QAKind kind, const DataTable& table, const QAContext& ctx,
                 std::uint64_t phrasing);

/// True iff the oracle reproduces the answer exactly and every number in
/// the reasoning is a cell, a numeric label or a derivation intermediate.
/// Throws UnresolvableReference.
bool verify_answer(const QAItem& item, const DataTable& table);

/// Whitespace-separated tokens.
std::size_t token_count(const std::string& text);

}  // namespace synchart
