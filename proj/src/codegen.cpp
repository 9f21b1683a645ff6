#include "synchart/codegen.hpp"

#include <fmt/format.h>

#include "synchart/catalog.hpp"
#include "synchart/error.hpp"
#include "synchart/rng.hpp"
#include "synchart/template_engine.hpp"

namespace synchart {

std::string_view to_string(LegendPos pos)
{
    switch (pos) {
    case LegendPos::Off: return "off";
    case LegendPos::UpperRight: return "upper_right";
    case LegendPos::UpperLeft: return "upper_left";
    case LegendPos::LowerRight: return "lower_right";
    case LegendPos::OutsideRight: return "outside_right";
    }
    return "off";
}

std::optional<LegendPos> parse_legend_pos(std::string_view id)
{
    for (auto pos : kLegendPositions) {
        if (to_string(pos) == id) return pos;
    }
    return std::nullopt;
}

const std::array<Palette, 8>& palettes()
{
    static const std::array<Palette, 8> kPalettes = {{
        {"tableau", {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
                     "#9c755f", "#bab0ac"}},
        {"category", {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                      "#bcbd22", "#17becf"}},
        {"pastel", {"#a1c9f4", "#ffb482", "#8de5a1", "#ff9f9b", "#d0bbff", "#debb9b", "#fab0e4", "#cfcfcf",
                    "#fffea3", "#b9f2f0"}},
        {"deep", {"#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860", "#da8bc3", "#8c8c8c",
                  "#ccb974", "#64b5cd"}},
        {"ocean", {"#023e8a", "#0077b6", "#0096c7", "#00b4d8", "#48cae4", "#90e0ef", "#03045e", "#2a9d8f",
                   "#264653", "#8ecae6"}},
        {"earth", {"#8c510a", "#bf812d", "#dfc27d", "#80cdc1", "#35978f", "#01665e", "#543005", "#c7eae5",
                   "#f6e8c3", "#003c30"}},
        {"vivid", {"#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4", "#46f0f0", "#f032e6",
                   "#bcf60c", "#fabebe"}},
        {"muted", {"#6f4e7c", "#0b84a5", "#f6c85f", "#9dd866", "#ca472f", "#ffa056", "#8dddd0", "#7f7f7f",
                   "#b3a2c7", "#5b8e7d"}},
    }};
    return kPalettes;
}

StyleChoice sample_style(const ChartSpec& spec, const DataTable& table, const std::string& measure)
{
    CounterRng rng(spec.style_seed, "style");
    StyleChoice st;
    st.title = spec.theme.phrase;
    st.x_label = table.index_label;
    st.y_label = measure;
    switch (spec.chart_type) {
    case ChartType::Scatter:
        st.x_label = table.series_labels.at(0);
        st.y_label = table.cols() == 2 ? table.series_labels[1] : "Value";
        break;
    case ChartType::Boxplot:
        st.x_label = "Series";
        break;
    default:
        break;
    }
    st.legend = kLegendPositions[rng.below(kLegendPositions.size())];
    if (spec.chart_type == ChartType::Boxplot) st.legend = LegendPos::Off;
    const bool can_annotate = spec.chart_type != ChartType::Boxplot && spec.chart_type != ChartType::Radar &&
                              table.rows() * table.cols() <= 60;
    st.annotations = rng.chance(0.3) && can_annotate;
    st.palette = static_cast<int>(rng.below(palettes().size()));
    st.figure_size = static_cast<int>(rng.below(kFigureSizes.size()));
    return st;
}

std::string output_filename_for(const ChartSpec& spec)
{
    return spec.record_id + ".jpg";
}

std::string template_path(EngineId engine, ChartType type)
{
    return fmt::format("templates/{}/{}.tpl", to_string(engine), to_string(type));
}

namespace {

struct LegendPlacement {
    std::string mpl_loc;
    std::string plotly_x, plotly_y, plotly_xanchor, plotly_yanchor;
    std::string bokeh_loc;
};

LegendPlacement placement(LegendPos pos)
{
    switch (pos) {
    case LegendPos::UpperLeft: return {"upper left", "0.01", "0.99", "left", "top", "top_left"};
    case LegendPos::LowerRight: return {"lower right", "0.99", "0.01", "right", "bottom", "bottom_right"};
    case LegendPos::OutsideRight: return {"upper left", "1.02", "1.0", "left", "top", "top_left"};
    case LegendPos::UpperRight:
    case LegendPos::Off: break;
    }
    return {"upper right", "0.99", "0.99", "right", "top", "top_right"};
}

std::string py_list(const Palette& p)
{
    std::string out = "[";
    for (std::size_t i = 0; i < p.colors.size(); ++i) {
        if (i) out += ", ";
        out += py_str(p.colors[i]);
    }
    return out + "]";
}

TemplateContext context_for(const StyleChoice& st, const std::string& csv, const std::string& output)
{
    const auto& size = kFigureSizes[static_cast<std::size_t>(st.figure_size)];
    const LegendPlacement lp = placement(st.legend);
    const bool legend = st.legend != LegendPos::Off;
    return TemplateContext{
        {"csv", csv},
        {"title", py_str(st.title)},
        {"x_label", py_str(st.x_label)},
        {"y_label", py_str(st.y_label)},
        {"colors", py_list(palettes()[static_cast<std::size_t>(st.palette)])},
        {"width_in", std::to_string(size.width_in)},
        {"height_in", std::to_string(size.height_in)},
        {"width_px", std::to_string(st.width_px())},
        {"height_px", std::to_string(st.height_px())},
        {"dpi", std::to_string(kDpi)},
        {"output", py_str(output)},
        {"legend", legend},
        {"legend_outside", st.legend == LegendPos::OutsideRight},
        {"legend_py", std::string(legend ? "True" : "False")},
        {"legend_loc", py_str(lp.mpl_loc)},
        {"legend_x", lp.plotly_x},
        {"legend_y", lp.plotly_y},
        {"legend_xanchor", py_str(lp.plotly_xanchor)},
        {"legend_yanchor", py_str(lp.plotly_yanchor)},
        {"bokeh_legend_loc", py_str(lp.bokeh_loc)},
        {"annotate", st.annotations},
    };
}

std::string legend_text(LegendPos pos)
{
    switch (pos) {
    case LegendPos::Off: return "off";
    case LegendPos::UpperRight: return "in the upper right";
    case LegendPos::UpperLeft: return "in the upper left";
    case LegendPos::LowerRight: return "in the lower right";
    case LegendPos::OutsideRight: return "outside the plot on the right";
    }
    return "off";
}

}  // namespace

PlotScript gen_code(const ChartSpec& spec, const DataTable& table, const std::string& measure,
                    TextGenBackend& backend, std::string* llm_description)
{
    if (!engine_supports(spec.engine, spec.chart_type)) {
        throw Error(ErrorCode::NoTemplate,
                    fmt::format("{} cannot draw a {}", to_string(spec.engine), to_string(spec.chart_type)));
    }
    PlotScript script;
    script.engine = spec.engine;
    script.output_filename = output_filename_for(spec);
    script.style = sample_style(spec, table, measure);
    const std::string csv = table.to_csv();

    if (backend.is_template()) {
        auto tpl = embedded_asset(template_path(spec.engine, spec.chart_type));
        if (!tpl) throw Error(ErrorCode::NoTemplate, template_path(spec.engine, spec.chart_type));
        script.source = render_template(*tpl, context_for(script.style, csv, script.output_filename));
        return script;
    }

    const StyleChoice& st = script.style;
    std::string colors;
    for (auto c : palettes()[static_cast<std::size_t>(st.palette)].colors) {
        if (!colors.empty()) colors += ", ";
        colors += c;
    }
    const std::string prompt = fill_prompt("code", {{"chart_type", std::string(display_name(spec.chart_type))},
                                                    {"engine", std::string(display_name(spec.engine))},
                                                    {"csv", csv},
                                                    {"title", st.title},
                                                    {"x_label", st.x_label},
                                                    {"y_label", st.y_label},
                                                    {"legend", legend_text(st.legend)},
                                                    {"palette", colors},
                                                    {"width", std::to_string(st.width_px())},
                                                    {"height", std::to_string(st.height_px())},
                                                    {"output_filename", script.output_filename}});
    const std::string response = backend.request(prompt, 4096, 0.2);
    script.source = extract_wrapped(response, "code");
    if (llm_description) {
        try {
            *llm_description = trim(extract_wrapped(response, "description"));
        } catch (const Error&) {
            llm_description->clear();
        }
    }
    return script;
}

}  // namespace synchart
