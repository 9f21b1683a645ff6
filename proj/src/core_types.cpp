#include "synchart/core_types.hpp"

#include <algorithm>
#include <numeric>

#include "synchart/error.hpp"

namespace synchart {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::CatalogEmpty: return "CatalogEmpty";
    case ErrorCode::CatalogInvalid: return "CatalogInvalid";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::BackendFailure: return "BackendFailure";
    case ErrorCode::ConstraintUnsatisfiable: return "ConstraintUnsatisfiable";
    case ErrorCode::NoTemplate: return "NoTemplate";
    case ErrorCode::HarnessUnavailable: return "HarnessUnavailable";
    case ErrorCode::InsufficientTable: return "InsufficientTable";
    case ErrorCode::UnresolvableReference: return "UnresolvableReference";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::DigestMismatch: return "DigestMismatch";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    }
    return "Unknown";
}

std::string_view to_string(ChartType type)
{
    switch (type) {
    case ChartType::Bar: return "bar";
    case ChartType::Line: return "line";
    case ChartType::Radar: return "radar";
    case ChartType::StackedBar: return "stacked_bar";
    case ChartType::Doughnut: return "doughnut";
    case ChartType::Pie: return "pie";
    case ChartType::Scatter: return "scatter";
    case ChartType::Boxplot: return "boxplot";
    case ChartType::StackedArea: return "stacked_area";
    }
    return "bar";
}

std::string_view display_name(ChartType type)
{
    switch (type) {
    case ChartType::Bar: return "bar chart";
    case ChartType::Line: return "line chart";
    case ChartType::Radar: return "radar chart";
    case ChartType::StackedBar: return "stacked bar chart";
    case ChartType::Doughnut: return "doughnut chart";
    case ChartType::Pie: return "pie chart";
    case ChartType::Scatter: return "scatter plot";
    case ChartType::Boxplot: return "boxplot";
    case ChartType::StackedArea: return "stacked area chart";
    }
    return "chart";
}

std::optional<ChartType> parse_chart_type(std::string_view id)
{
    for (ChartType t : kChartTypes) {
        if (to_string(t) == id) return t;
    }
    return std::nullopt;
}

std::string_view to_string(EngineId engine)
{
    switch (engine) {
    case EngineId::Matplotlib: return "matplotlib";
    case EngineId::Seaborn: return "seaborn";
    case EngineId::Plotly: return "plotly";
    case EngineId::Bokeh: return "bokeh";
    }
    return "matplotlib";
}

std::string_view display_name(EngineId engine)
{
    switch (engine) {
    case EngineId::Matplotlib: return "Matplotlib";
    case EngineId::Seaborn: return "Seaborn";
    case EngineId::Plotly: return "Plotly";
    case EngineId::Bokeh: return "Bokeh";
    }
    return "Matplotlib";
}

std::optional<EngineId> parse_engine(std::string_view id)
{
    for (EngineId e : kEngines) {
        if (to_string(e) == id) return e;
    }
    return std::nullopt;
}

bool engine_supports(EngineId engine, ChartType type)
{
    switch (engine) {
    case EngineId::Matplotlib:
    case EngineId::Plotly:
        return true;
    case EngineId::Seaborn:
        return type == ChartType::Bar || type == ChartType::Line || type == ChartType::Scatter ||
               type == ChartType::Boxplot;
    case EngineId::Bokeh:
        return type == ChartType::Bar || type == ChartType::Line || type == ChartType::StackedBar ||
               type == ChartType::Scatter || type == ChartType::Boxplot || type == ChartType::StackedArea;
    }
    return false;
}

std::vector<std::pair<EngineId, ChartType>> compatible_pairs()
{
    std::vector<std::pair<EngineId, ChartType>> out;
    for (EngineId e : kEngines) {
        for (ChartType t : kChartTypes) {
            if (engine_supports(e, t)) out.emplace_back(e, t);
        }
    }
    return out;
}

std::string_view to_string(TrendFamily family)
{
    switch (family) {
    case TrendFamily::MonotoneIncreasing: return "monotone_increasing";
    case TrendFamily::MonotoneDecreasing: return "monotone_decreasing";
    case TrendFamily::Constant: return "constant";
    case TrendFamily::Spike: return "spike";
    case TrendFamily::Dip: return "dip";
    case TrendFamily::PlateauThenChange: return "plateau_then_change";
    case TrendFamily::Cyclic: return "cyclic";
    case TrendFamily::Volatile: return "volatile";
    case TrendFamily::Accelerating: return "accelerating";
    case TrendFamily::Decelerating: return "decelerating";
    }
    return "constant";
}

std::optional<TrendFamily> parse_trend_family(std::string_view id)
{
    for (TrendFamily f : kTrendFamilies) {
        if (to_string(f) == id) return f;
    }
    return std::nullopt;
}

bool is_temporal_family(TrendFamily family)
{
    return family == TrendFamily::PlateauThenChange || family == TrendFamily::Cyclic ||
           family == TrendFamily::Accelerating || family == TrendFamily::Decelerating;
}

bool has_ordered_axis(ChartType type)
{
    return type == ChartType::Bar || type == ChartType::Line || type == ChartType::StackedBar ||
           type == ChartType::Scatter || type == ChartType::StackedArea;
}

int min_series_length(TrendFamily family)
{
    switch (family) {
    case TrendFamily::Constant: return 1;
    case TrendFamily::MonotoneIncreasing:
    case TrendFamily::MonotoneDecreasing: return 2;
    case TrendFamily::Spike:
    case TrendFamily::Dip: return 3;
    case TrendFamily::PlateauThenChange:
    case TrendFamily::Accelerating:
    case TrendFamily::Decelerating:
    case TrendFamily::Volatile: return 4;
    case TrendFamily::Cyclic: return 5;
    }
    return 1;
}

bool TrendTag::applies_to(ChartType type) const
{
    return std::find(applicable.begin(), applicable.end(), type) != applicable.end();
}

ParamRange TrendTag::param(const std::string& key, ParamRange fallback) const
{
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

DiscreteDist DiscreteDist::uniform_range(int lo, int hi)
{
    DiscreteDist d;
    for (int v = lo; v <= hi; ++v) {
        d.values.push_back(v);
        d.weights.push_back(1);
    }
    return d;
}

DiscreteDist DiscreteDist::choice(const std::vector<int>& multiset)
{
    DiscreteDist d;
    for (int v : multiset) {
        auto it = std::find(d.values.begin(), d.values.end(), v);
        if (it == d.values.end()) {
            d.values.push_back(v);
            d.weights.push_back(1);
        } else {
            ++d.weights[static_cast<std::size_t>(it - d.values.begin())];
        }
    }
    return d;
}

bool DiscreteDist::contains(int value) const
{
    return std::find(values.begin(), values.end(), value) != values.end();
}

std::uint64_t DiscreteDist::total_weight() const
{
    return std::accumulate(weights.begin(), weights.end(), std::uint64_t{0});
}

double DiscreteDist::probability(int value) const
{
    auto it = std::find(values.begin(), values.end(), value);
    if (it == values.end()) return 0.0;
    return static_cast<double>(weights[static_cast<std::size_t>(it - values.begin())]) /
           static_cast<double>(total_weight());
}

bool DimConstraint::satisfied_by(int n_rows, int n_cols) const
{
    return rows.contains(n_rows) && cols.contains(n_cols);
}

namespace {

const std::vector<int> kGroupChoices = {2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 25, 30};

// Line charts draw randint(1,2) x-axis columns plus randint(1,5) y-axis
// columns; n_cols is their sum.
DiscreteDist line_columns()
{
    DiscreteDist d;
    for (int x = 1; x <= 2; ++x) {
        for (int y = 1; y <= 5; ++y) {
            int total = x + y;
            auto it = std::find(d.values.begin(), d.values.end(), total);
            if (it == d.values.end()) {
                d.values.push_back(total);
                d.weights.push_back(1);
            } else {
                ++d.weights[static_cast<std::size_t>(it - d.values.begin())];
            }
        }
    }
    return d;
}

std::array<DimConstraint, 9> build_constraints()
{
    std::vector<int> scatter_cols(10, 2);
    scatter_cols.insert(scatter_cols.end(), {3, 4, 5});
    return {{
        {ChartType::Bar, DiscreteDist::uniform_range(1, 3), DiscreteDist::choice(kGroupChoices),
         "n_cols value variables besides the category axis"},
        {ChartType::Line, line_columns(), DiscreteDist::choice(kGroupChoices),
         "n_cols = x-axis columns (1-2, the first is the label column) + y-axis columns (1-5)"},
        {ChartType::Radar, DiscreteDist::uniform_range(3, 10), DiscreteDist::uniform_range(1, 10),
         "each column is a plotted dimension; each row is one polygon"},
        {ChartType::StackedBar, DiscreteDist::uniform_range(2, 10), DiscreteDist::choice(kGroupChoices),
         "n_cols stacked series; rows are groups"},
        {ChartType::Doughnut, DiscreteDist::choice({2}),
         DiscreteDist::choice({2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20}),
         "label column plus one data column"},
        {ChartType::Pie, DiscreteDist::choice({2}), DiscreteDist::uniform_range(2, 8),
         "one categorical and one numerical column"},
        {ChartType::Scatter, DiscreteDist::choice(scatter_cols), DiscreteDist::choice(kGroupChoices),
         "numeric columns; the first is the x variable"},
        {ChartType::Boxplot, DiscreteDist::uniform_range(1, 10), DiscreteDist::choice(kGroupChoices),
         "each column is one distribution; rows are observations"},
        {ChartType::StackedArea, DiscreteDist::uniform_range(2, 5),
         DiscreteDist::choice({5, 6, 7, 8, 9, 10, 15, 20, 25, 30}), "n_cols stacked series; rows are periods"},
    }};
}

}  // namespace

const DimConstraint& dim_constraint(ChartType type)
{
    static const std::array<DimConstraint, 9> table = build_constraints();
    return table[static_cast<std::size_t>(type)];
}

bool series_are_rows(ChartType type)
{
    return type == ChartType::Radar;
}

int value_columns(ChartType type, int n_cols)
{
    switch (type) {
    case ChartType::Line:
    case ChartType::Pie:
    case ChartType::Doughnut:
        return n_cols - 1;
    default:
        return n_cols;
    }
}

int series_count(ChartType type, int n_rows, int n_cols)
{
    return series_are_rows(type) ? n_rows : value_columns(type, n_cols);
}

int series_length(ChartType type, int n_rows, int n_cols)
{
    return series_are_rows(type) ? value_columns(type, n_cols) : n_rows;
}

std::string_view to_string(OracleOp op)
{
    switch (op) {
    case OracleOp::CellLookup: return "cell_lookup";
    case OracleOp::ColMax: return "col_max";
    case OracleOp::ColMin: return "col_min";
    case OracleOp::RowMax: return "row_max";
    case OracleOp::RowMin: return "row_min";
    case OracleOp::ArgmaxLabel: return "argmax_label";
    case OracleOp::ArgminLabel: return "argmin_label";
    case OracleOp::CountAbove: return "count_above";
    case OracleOp::Difference: return "difference";
    case OracleOp::Sum: return "sum";
    case OracleOp::Mean: return "mean";
    case OracleOp::PercentChange: return "percent_change";
    case OracleOp::LargestDeclineLabel: return "largest_decline_label";
    }
    return "cell_lookup";
}

std::optional<OracleOp> parse_oracle_op(std::string_view id)
{
    for (OracleOp op : kOracleOps) {
        if (to_string(op) == id) return op;
    }
    return std::nullopt;
}

std::string_view to_string(Axis axis)
{
    return axis == Axis::Row ? "row" : "col";
}

std::optional<Axis> parse_axis(std::string_view id)
{
    if (id == "row") return Axis::Row;
    if (id == "col") return Axis::Col;
    return std::nullopt;
}

AnswerType OracleProgram::expected_type() const
{
    switch (op) {
    case OracleOp::ArgmaxLabel:
    case OracleOp::ArgminLabel:
    case OracleOp::LargestDeclineLabel:
        return AnswerType::Label;
    default:
        return AnswerType::Number;
    }
}

std::string OracleProgram::key() const
{
    std::string k(to_string(op));
    auto add = [&k](std::string_view part) {
        k += '\x1f';
        k += part;
    };
    switch (op) {
    case OracleOp::CellLookup:
        add(a.row);
        add(a.col);
        break;
    case OracleOp::ColMax:
    case OracleOp::ColMin:
    case OracleOp::RowMax:
    case OracleOp::RowMin:
        add(line);
        break;
    case OracleOp::ArgmaxLabel:
    case OracleOp::ArgminLabel:
    case OracleOp::Sum:
    case OracleOp::Mean:
        add(to_string(axis));
        add(line);
        break;
    case OracleOp::CountAbove:
        add(to_string(axis));
        add(line);
        add(threshold ? threshold->str() : "");
        break;
    case OracleOp::Difference:
    case OracleOp::PercentChange:
        add(a.row);
        add(a.col);
        add(b.row);
        add(b.col);
        break;
    case OracleOp::LargestDeclineLabel:
        add(to_string(axis));
        add(from_line);
        add(to_line);
        break;
    }
    return k;
}

std::string_view to_string(QAKind kind)
{
    return kind == QAKind::Simple ? "simple" : "complex";
}

}  // namespace synchart
