#include "synchart/oracle.hpp"

#include <fmt/format.h>

#include "synchart/error.hpp"

namespace synchart {

Axis other_axis(Axis axis)
{
    return axis == Axis::Row ? Axis::Col : Axis::Row;
}

const std::vector<std::string>& line_labels(const DataTable& table, Axis axis)
{
    return axis == Axis::Row ? table.index : table.series_labels;
}

namespace {

[[noreturn]] void unresolved(const std::string& what)
{
    throw Error(ErrorCode::UnresolvableReference, what);
}

std::size_t row_of(const DataTable& t, const std::string& label)
{
    auto r = t.find_row(label);
    if (!r) unresolved(fmt::format("no row '{}'", label));
    return *r;
}

std::size_t col_of(const DataTable& t, const std::string& label)
{
    auto c = t.find_col(label);
    if (!c) unresolved(fmt::format("no column '{}'", label));
    return *c;
}

const Decimal& cell(const DataTable& t, const CellRef& ref)
{
    return t.at(row_of(t, ref.row), col_of(t, ref.col));
}

Decimal sum_of(const std::vector<Decimal>& v)
{
    Decimal s;
    for (const auto& x : v) s = s + x;
    return s;
}

OracleValue number(Decimal d)
{
    return {AnswerType::Number, d, {}};
}

OracleValue label(std::string s)
{
    return {AnswerType::Label, {}, std::move(s)};
}

}  // namespace

std::vector<Decimal> line_values(const DataTable& table, Axis axis, const std::string& label)
{
    if (axis == Axis::Row) return table.row(row_of(table, label));
    return table.column(col_of(table, label));
}

Derivation derive(const OracleProgram& p, const DataTable& t)
{
    Derivation d;
    switch (p.op) {
    case OracleOp::CellLookup:
        d.value = number(cell(t, p.a));
        break;
    case OracleOp::ColMax:
    case OracleOp::ColMin:
    case OracleOp::RowMax:
    case OracleOp::RowMin: {
        const Axis axis = (p.op == OracleOp::ColMax || p.op == OracleOp::ColMin) ? Axis::Col : Axis::Row;
        const bool want_max = p.op == OracleOp::ColMax || p.op == OracleOp::RowMax;
        auto v = line_values(t, axis, p.line);
        if (v.empty()) unresolved("empty line");
        Decimal best = v.front();
        for (const auto& x : v) {
            if (want_max ? x > best : x < best) best = x;
        }
        d.value = number(best);
        break;
    }
    case OracleOp::ArgmaxLabel:
    case OracleOp::ArgminLabel: {
        const bool want_max = p.op == OracleOp::ArgmaxLabel;
        auto v = line_values(t, p.axis, p.line);
        if (v.empty()) unresolved("empty line");
        std::size_t best = 0;
        for (std::size_t i = 1; i < v.size(); ++i) {
            if (want_max ? v[i] > v[best] : v[i] < v[best]) best = i;
        }
        d.value = label(line_labels(t, other_axis(p.axis))[best]);
        break;
    }
    case OracleOp::CountAbove: {
        if (!p.threshold) unresolved("count_above without threshold");
        auto v = line_values(t, p.axis, p.line);
        std::int64_t n = 0;
        for (const auto& x : v) n += x > *p.threshold ? 1 : 0;
        d.value = number(Decimal(n));
        d.intermediates.push_back(*p.threshold);
        break;
    }
    case OracleOp::Difference:
        d.value = number(cell(t, p.a) - cell(t, p.b));
        break;
    case OracleOp::Sum:
    case OracleOp::Mean: {
        auto v = line_values(t, p.axis, p.line);
        if (v.empty()) unresolved("empty line");
        Decimal s = sum_of(v);
        const Decimal n(static_cast<std::int64_t>(v.size()));
        d.intermediates.push_back(s);
        d.intermediates.push_back(n);
        d.value = number(p.op == OracleOp::Sum ? s : Decimal::divide(s, n, kOracleDecimals));
        break;
    }
    case OracleOp::PercentChange: {
        const Decimal from = cell(t, p.a);
        const Decimal to = cell(t, p.b);
        if (from.is_zero()) unresolved("percent change from zero");
        const Decimal diff = to - from;
        d.intermediates.push_back(diff);
        d.intermediates.push_back(Decimal(100));
        d.value = number(Decimal::divide(diff.times(100), from, kOracleDecimals));
        break;
    }
    case OracleOp::LargestDeclineLabel: {
        const Axis across = other_axis(p.axis);
        auto from = line_values(t, across, p.from_line);
        auto to = line_values(t, across, p.to_line);
        if (from.empty()) unresolved("empty line");
        std::size_t best = 0;
        Decimal best_drop = from[0] - to[0];
        d.intermediates.push_back(best_drop);
        for (std::size_t i = 1; i < from.size(); ++i) {
            Decimal drop = from[i] - to[i];
            d.intermediates.push_back(drop);
            if (drop > best_drop) {
                best_drop = drop;
                best = i;
            }
        }
        d.value = label(line_labels(t, p.axis)[best]);
        break;
    }
    }
    return d;
}

}  // namespace synchart
