#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "synchart/codegen.hpp"
#include "synchart/core_types.hpp"
#include "synchart/data_table.hpp"
#include "synchart/image.hpp"
#include "synchart/table_synth.hpp"

namespace synchart {

struct ImageRef {
    std::string path;  // relative to the dataset root
    ImageMeta meta;
    friend bool operator==(const ImageRef&, const ImageRef&) = default;
};

struct Provenance {
    std::uint64_t index = 0;
    std::string backend;
    std::string generator_version;
    int repair_attempts = 0;
    std::vector<std::string> repair_rules;
    std::vector<OutlierMark> outliers;
    std::string measure;
    std::string col_kind;
    std::int64_t wall_ms = 0;  // excluded from digests
    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct DatasetRecord {
    ChartSpec spec;
    DataTable table;
    PlotScript code;
    ImageRef image;
    std::string data_description;
    std::string chart_description;
    std::vector<QAItem> simple_qa;
    std::vector<QAItem> complex_qa;
    Provenance provenance;
    friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

std::string generator_version();

}  // namespace synchart
