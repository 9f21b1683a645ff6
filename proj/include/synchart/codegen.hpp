#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synchart/backend.hpp"
#include "synchart/core_types.hpp"
#include "synchart/data_table.hpp"

namespace synchart {

enum class LegendPos { Off, UpperRight, UpperLeft, LowerRight, OutsideRight };

inline constexpr std::array<LegendPos, 5> kLegendPositions = {
    LegendPos::Off, LegendPos::UpperRight, LegendPos::UpperLeft, LegendPos::LowerRight, LegendPos::OutsideRight,
};

std::string_view to_string(LegendPos pos);
std::optional<LegendPos> parse_legend_pos(std::string_view id);

struct Palette {
    std::string_view id;
    std::array<std::string_view, 10> colors;
};

const std::array<Palette, 8>& palettes();

struct FigureSize {
    int width_in;
    int height_in;
};

inline constexpr std::array<FigureSize, 3> kFigureSizes = {{{8, 6}, {10, 8}, {12, 6}}};
inline constexpr int kDpi = 100;

struct StyleChoice {
    std::string title;
    std::string x_label;
    std::string y_label;
    LegendPos legend = LegendPos::UpperRight;
    bool annotations = false;
    int palette = 0;      // index into palettes()
    int figure_size = 0;  // index into kFigureSizes

    int width_px() const { return kFigureSizes[static_cast<std::size_t>(figure_size)].width_in * kDpi; }
    int height_px() const { return kFigureSizes[static_cast<std::size_t>(figure_size)].height_in * kDpi; }
    friend bool operator==(const StyleChoice&, const StyleChoice&) = default;
};

struct PlotScript {
    EngineId engine = EngineId::Matplotlib;
    std::string source;
    std::string output_filename;
    StyleChoice style;
    friend bool operator==(const PlotScript&, const PlotScript&) = default;
};

/// Style drawn from the spec's style seed; labels come from the table.
StyleChoice sample_style(const ChartSpec& spec, const DataTable& table, const std::string& measure);

std::string output_filename_for(const ChartSpec& spec);
std::string template_path(EngineId engine, ChartType type);

/// Renders templates/<engine>/<chart_type>.tpl, or asks an LLM backend for
/// code (the backend's description is returned through `llm_description`).
PlotScript gen_code(const ChartSpec& spec, const DataTable& table, const std::string& measure,
                    TextGenBackend& backend, std::string* llm_description = nullptr);

}  // namespace synchart
