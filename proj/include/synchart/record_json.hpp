#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "synchart/record.hpp"

namespace synchart {

nlohmann::json to_json(const OracleProgram& program);
OracleProgram oracle_from_json(const nlohmann::json& j);
nlohmann::json to_json(const QAItem& item);
QAItem qa_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ChartSpec& spec);
ChartSpec spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DatasetRecord& record);
/// Throws Error(ParseError).
DatasetRecord record_from_json(const nlohmann::json& j);

/// One JSON line, keys sorted, UTF-8 kept as is.
std::string record_line(const DatasetRecord& record);
/// The same line without provenance.wall_ms; what digests cover.
std::string canonical_line(const DatasetRecord& record);
DatasetRecord parse_record_line(std::string_view line);

}  // namespace synchart
