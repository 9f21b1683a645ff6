#include "synchart/data_table.hpp"

#include <set>

#include <fmt/format.h>

#include "synchart/error.hpp"

namespace synchart {

std::optional<std::size_t> DataTable::find_row(std::string_view label) const
{
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (index[i] == label) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> DataTable::find_col(std::string_view label) const
{
    for (std::size_t i = 0; i < series_labels.size(); ++i) {
        if (series_labels[i] == label) return i;
    }
    return std::nullopt;
}

std::vector<Decimal> DataTable::column(std::size_t col) const
{
    std::vector<Decimal> out;
    out.reserve(cells.size());
    for (const auto& r : cells) out.push_back(r[col]);
    return out;
}

std::string csv_field(std::string_view value)
{
    if (value.find_first_of(",\"") == std::string_view::npos) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"' && current.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (quoted) throw Error(ErrorCode::ParseError, "unterminated quoted CSV field");
    fields.push_back(std::move(current));
    return fields;
}

std::string DataTable::to_csv() const
{
    std::string out = csv_field(index_label);
    for (const auto& s : series_labels) {
        out += ',';
        out += csv_field(s);
    }
    out += '\n';
    for (std::size_t r = 0; r < index.size(); ++r) {
        out += csv_field(index[r]);
        for (const auto& cell : cells[r]) {
            out += ',';
            out += cell.str();
        }
        out += '\n';
    }
    return out;
}

DataTable DataTable::from_csv(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.push_back(line);
        start = end + 1;
    }
    if (lines.empty()) throw Error(ErrorCode::ParseError, "empty CSV");

    DataTable t;
    auto header = split_csv_line(lines[0]);
    if (header.size() < 2) throw Error(ErrorCode::ParseError, "CSV header needs a label column and a series");
    t.index_label = header[0];
    t.series_labels.assign(header.begin() + 1, header.end());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto fields = split_csv_line(lines[i]);
        if (fields.size() != header.size()) {
            throw Error(ErrorCode::ParseError,
                        fmt::format("CSV row {} has {} fields, expected {}", i, fields.size(), header.size()));
        }
        t.index.push_back(fields[0]);
        std::vector<Decimal> row;
        for (std::size_t c = 1; c < fields.size(); ++c) {
            auto value = Decimal::parse(fields[c]);
            if (!value) throw Error(ErrorCode::ParseError, fmt::format("non-numeric cell '{}'", fields[c]));
            row.push_back(*value);
        }
        t.cells.push_back(std::move(row));
    }
    return t;
}

std::vector<std::string> table_problems(const DataTable& table)
{
    std::vector<std::string> problems;
    if (table.index_label.empty()) problems.emplace_back("empty index label");
    if (table.rows() == 0 || table.cols() == 0) problems.emplace_back("table has no cells");
    if (table.cells.size() != table.rows()) problems.emplace_back("cell row count differs from index length");
    for (std::size_t r = 0; r < table.cells.size(); ++r) {
        if (table.cells[r].size() != table.cols()) {
            problems.push_back(fmt::format("row {} has {} cells, expected {}", r, table.cells[r].size(), table.cols()));
        }
        for (const auto& cell : table.cells[r]) {
            if (cell.significant_digits() > Decimal::kMaxSignificantDigits) {
                problems.push_back(fmt::format("cell {} exceeds {} significant digits", cell.str(),
                                               Decimal::kMaxSignificantDigits));
            }
        }
    }
    auto check_axis = [&](const std::vector<std::string>& labels, const char* axis) {
        std::set<std::string> seen;
        for (const auto& l : labels) {
            if (l.empty()) problems.push_back(fmt::format("empty {} label", axis));
            if (l.find('\n') != std::string::npos) problems.push_back(fmt::format("{} label contains newline", axis));
            if (!seen.insert(l).second) problems.push_back(fmt::format("duplicate {} label '{}'", axis, l));
        }
    };
    check_axis(table.index, "row");
    check_axis(table.series_labels, "column");
    return problems;
}

}  // namespace synchart
