#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synchart/decimal.hpp"

namespace synchart {

enum class ChartType {
    Bar,
    Line,
    Radar,
    StackedBar,
    Doughnut,
    Pie,
    Scatter,
    Boxplot,
    StackedArea,
};

inline constexpr std::array<ChartType, 9> kChartTypes = {
    ChartType::Bar,      ChartType::Line,   ChartType::Radar,   ChartType::StackedBar,  ChartType::Doughnut,
    ChartType::Pie,      ChartType::Scatter, ChartType::Boxplot, ChartType::StackedArea,
};

/// Wire identifier, e.g. "stacked_bar".
std::string_view to_string(ChartType type);
/// Human wording used in descriptions, e.g. "stacked bar chart".
std::string_view display_name(ChartType type);
std::optional<ChartType> parse_chart_type(std::string_view id);

enum class EngineId {
    Matplotlib,
    Seaborn,
    Plotly,
    Bokeh,
};

inline constexpr std::array<EngineId, 4> kEngines = {
    EngineId::Matplotlib,
    EngineId::Seaborn,
    EngineId::Plotly,
    EngineId::Bokeh,
};

std::string_view to_string(EngineId engine);
std::string_view display_name(EngineId engine);
std::optional<EngineId> parse_engine(std::string_view id);

/// Engine coverage matrix: Matplotlib and Plotly draw every type, Seaborn
/// {bar, line, scatter, boxplot}, Bokeh {bar, line, stacked_bar, scatter,
/// boxplot, stacked_area}.
bool engine_supports(EngineId engine, ChartType type);
std::vector<std::pair<EngineId, ChartType>> compatible_pairs();

enum class TrendFamily {
    MonotoneIncreasing,
    MonotoneDecreasing,
    Constant,
    Spike,
    Dip,
    PlateauThenChange,
    Cyclic,
    Volatile,
    Accelerating,
    Decelerating,
};

inline constexpr std::array<TrendFamily, 10> kTrendFamilies = {
    TrendFamily::MonotoneIncreasing, TrendFamily::MonotoneDecreasing, TrendFamily::Constant,
    TrendFamily::Spike,              TrendFamily::Dip,                TrendFamily::PlateauThenChange,
    TrendFamily::Cyclic,             TrendFamily::Volatile,           TrendFamily::Accelerating,
    TrendFamily::Decelerating,
};

std::string_view to_string(TrendFamily family);
std::optional<TrendFamily> parse_trend_family(std::string_view id);
/// Families that only make sense along an ordered (time-like) axis.
bool is_temporal_family(TrendFamily family);
/// Types whose value axis runs along an ordered sequence (periods, x values).
bool has_ordered_axis(ChartType type);
/// Shortest series on which the family can be realized and recognized.
int min_series_length(TrendFamily family);

struct ParamRange {
    double lo = 0.0;
    double hi = 0.0;
    friend bool operator==(const ParamRange&, const ParamRange&) = default;
};

/// One entry of the trend catalog.
struct TrendTag {
    std::string id;
    TrendFamily family = TrendFamily::Constant;
    std::vector<ChartType> applicable;
    std::map<std::string, ParamRange> params;

    bool applies_to(ChartType type) const;
    ParamRange param(const std::string& key, ParamRange fallback) const;
};

struct Theme {
    std::string topic;
    std::string phrase;

    static constexpr std::size_t kMaxPhraseLength = 120;
    bool valid() const { return !topic.empty() && !phrase.empty() && phrase.size() <= kMaxPhraseLength; }
    friend bool operator==(const Theme&, const Theme&) = default;
};

/// Discrete distribution with integer weights: P(values[i]) = weights[i] / sum.
struct DiscreteDist {
    std::vector<int> values;
    std::vector<std::uint32_t> weights;

    static DiscreteDist uniform_range(int lo, int hi);
    static DiscreteDist choice(const std::vector<int>& multiset);
    bool contains(int value) const;
    double probability(int value) const;
    std::uint64_t total_weight() const;
};

/// Per-type column/row constraint. n_cols is the column count exactly as the
/// constraint table states it; numeric series and series length are derived
/// from it per type (see series_count / series_length).
struct DimConstraint {
    ChartType chart_type = ChartType::Bar;
    DiscreteDist cols;
    DiscreteDist rows;
    std::string notes;

    bool satisfied_by(int n_rows, int n_cols) const;
};

const DimConstraint& dim_constraint(ChartType type);

/// Radar charts plot one polygon per row; every other type plots columns.
bool series_are_rows(ChartType type);
/// Number of numeric value columns the table carries.
int value_columns(ChartType type, int n_cols);
/// Number of data series (one trend each).
int series_count(ChartType type, int n_rows, int n_cols);
/// Length of each series.
int series_length(ChartType type, int n_rows, int n_cols);

struct ChartSpec {
    std::string record_id;
    std::uint64_t seed = 0;
    ChartType chart_type = ChartType::Bar;
    EngineId engine = EngineId::Matplotlib;
    Theme theme;
    std::vector<std::string> trends;  // trend ids, one per series
    int n_rows = 0;
    int n_cols = 0;
    std::uint64_t style_seed = 0;

    friend bool operator==(const ChartSpec&, const ChartSpec&) = default;
};

enum class OracleOp {
    CellLookup,
    ColMax,
    ColMin,
    RowMax,
    RowMin,
    ArgmaxLabel,
    ArgminLabel,
    CountAbove,
    Difference,
    Sum,
    Mean,
    PercentChange,
    LargestDeclineLabel,
};

inline constexpr std::array<OracleOp, 13> kOracleOps = {
    OracleOp::CellLookup,  OracleOp::ColMax,      OracleOp::ColMin,     OracleOp::RowMax, OracleOp::RowMin,
    OracleOp::ArgmaxLabel, OracleOp::ArgminLabel, OracleOp::CountAbove, OracleOp::Difference,
    OracleOp::Sum,         OracleOp::Mean,        OracleOp::PercentChange, OracleOp::LargestDeclineLabel,
};

std::string_view to_string(OracleOp op);
std::optional<OracleOp> parse_oracle_op(std::string_view id);

enum class Axis { Row, Col };
std::string_view to_string(Axis axis);
std::optional<Axis> parse_axis(std::string_view id);

struct CellRef {
    std::string row;
    std::string col;
    friend bool operator==(const CellRef&, const CellRef&) = default;
    friend auto operator<=>(const CellRef&, const CellRef&) = default;
};

enum class AnswerType { Number, Label };

/// Serializable computation over a table that produces a QA answer.
///
/// Operand use by op:
///   cell_lookup            a
///   col_max / col_min      line (column label)
///   row_max / row_min      line (row label)
///   argmax/argmin_label    axis + line; answers with a label on the other axis
///   count_above            axis + line + threshold (strictly greater)
///   difference             a - b
///   sum / mean             axis + line
///   percent_change         a (from) -> b (to)
///   largest_decline_label  axis names the entity axis; from_line/to_line are
///                          labels on the other axis
struct OracleProgram {
    OracleOp op = OracleOp::CellLookup;
    Axis axis = Axis::Col;
    std::string line;
    CellRef a;
    CellRef b;
    std::optional<Decimal> threshold;
    std::string from_line;
    std::string to_line;

    AnswerType expected_type() const;
    /// Canonical identity used to reject duplicate questions.
    std::string key() const;
    friend bool operator==(const OracleProgram&, const OracleProgram&) = default;
};

enum class QAKind { Simple, Complex };
std::string_view to_string(QAKind kind);

struct QAItem {
    QAKind kind = QAKind::Simple;
    std::string question;
    std::string answer;
    std::vector<std::string> reasoning;  // describe, compute, conclude
    OracleProgram oracle;

    friend bool operator==(const QAItem&, const QAItem&) = default;
};

}  // namespace synchart
