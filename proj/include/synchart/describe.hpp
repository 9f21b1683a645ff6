#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "synchart/backend.hpp"
#include "synchart/codegen.hpp"
#include "synchart/core_types.hpp"
#include "synchart/table_synth.hpp"

namespace synchart {

/// Data description: theme, per-series trend, cross-series comparison and
/// every injected outlier. Template output is 100-600 words and states only
/// table cells and labels as digits.
std::string gen_data_description(const ChartSpec& spec, const SynthesizedTable& synth, TextGenBackend& backend);

/// Chart description: chart type, axes, legend, annotations when drawn and
/// at least two observations. Template output is 80-400 words; an LLM
/// backend is asked to describe the script instead.
std::string gen_chart_description(const ChartSpec& spec, const SynthesizedTable& synth, const PlotScript& script,
                                  TextGenBackend& backend);

/// Decimal literals in running text (digits with an optional fraction).
std::vector<std::string> extract_numbers(std::string_view text);
std::size_t word_count(std::string_view text);

/// Numbers in the text that are neither cells nor numeric labels.
std::vector<std::string> unsupported_numbers(std::string_view text, const DataTable& table);

/// English words for counts below ten thousand ("six", "one hundred and
/// twelve"); digits beyond.
std::string count_word(std::size_t n);

}  // namespace synchart
