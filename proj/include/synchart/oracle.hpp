#pragma once

#include <string>
#include <vector>

#include "synchart/core_types.hpp"
#include "synchart/data_table.hpp"
#include "synchart/decimal.hpp"

namespace synchart {

struct OracleValue {
    AnswerType type = AnswerType::Number;
    Decimal number;
    std::string label;

    /// Answer text: canonical decimal or the label verbatim.
    std::string str() const { return type == AnswerType::Number ? number.str() : label; }
};

/// Result plus the numbers a reasoning trace may legitimately mention
/// beyond table cells (partial results, counts, the 100 of a percentage).
struct Derivation {
    OracleValue value;
    std::vector<Decimal> intermediates;
};

/// Mean and percent_change round to this many decimals, half away from zero.
inline constexpr int kOracleDecimals = 2;

/// Exact evaluation; throws Error(UnresolvableReference) for unknown labels,
/// empty lines or a zero base in percent_change. Ties resolve to the first
/// label in table order.
Derivation derive(const OracleProgram& program, const DataTable& table);
inline OracleValue evaluate(const OracleProgram& program, const DataTable& table)
{
    return derive(program, table).value;
}

/// Cells of a row (axis Row) or column (axis Col) named by label.
std::vector<Decimal> line_values(const DataTable& table, Axis axis, const std::string& label);
const std::vector<std::string>& line_labels(const DataTable& table, Axis axis);
Axis other_axis(Axis axis);

}  // namespace synchart
