#include "synchart/describe.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "synchart/catalog.hpp"
#include "synchart/error.hpp"
#include "synchart/qa_synth.hpp"
#include "synchart/rng.hpp"
#include "synchart/trend.hpp"

namespace synchart {

std::string count_word(std::size_t n)
{
    static constexpr std::array<std::string_view, 20> kOnes = {
        "zero",    "one",     "two",       "three",    "four",     "five",    "six",
        "seven",   "eight",   "nine",      "ten",      "eleven",   "twelve",  "thirteen",
        "fourteen", "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen"};
    static constexpr std::array<std::string_view, 10> kTens = {"",      "",      "twenty",  "thirty", "forty",
                                                               "fifty", "sixty", "seventy", "eighty", "ninety"};
    if (n >= 10000) return std::to_string(n);
    if (n < 20) return std::string(kOnes[n]);
    if (n < 100) {
        std::string out(kTens[n / 10]);
        if (n % 10) out += "-" + std::string(kOnes[n % 10]);
        return out;
    }
    if (n < 1000) {
        std::string out = std::string(kOnes[n / 100]) + " hundred";
        if (n % 100) out += " and " + count_word(n % 100);
        return out;
    }
    std::string out = count_word(n / 1000) + " thousand";
    if (n % 1000) out += (n % 1000 < 100 ? " and " : " ") + count_word(n % 1000);
    return out;
}

std::vector<std::string> extract_numbers(std::string_view text)
{
    static const std::regex re(R"(\d+(?:\.\d+)?)");
    std::vector<std::string> out;
    std::string s(text);
    for (std::sregex_iterator it(s.begin(), s.end(), re), end; it != end; ++it) out.push_back(it->str());
    return out;
}

std::size_t word_count(std::string_view text)
{
    return token_count(std::string(text));
}

std::vector<std::string> unsupported_numbers(std::string_view text, const DataTable& table)
{
    std::set<Decimal> allowed;
    for (const auto& row : table.cells) {
        for (const auto& c : row) allowed.insert(c.is_negative() ? -c : c);
    }
    std::set<std::string> label_numbers;
    for (const auto* labels : {&table.index, &table.series_labels}) {
        for (const auto& l : *labels) {
            for (const auto& n : extract_numbers(l)) label_numbers.insert(n);
        }
    }
    for (const auto& n : extract_numbers(table.index_label)) label_numbers.insert(n);
    std::vector<std::string> out;
    for (const auto& n : extract_numbers(text)) {
        if (label_numbers.count(n)) continue;
        auto v = Decimal::parse(n);
        if (v && allowed.count(*v)) continue;
        out.push_back(n);
    }
    return out;
}

namespace {

std::string lower(std::string s)
{
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string join_list(const std::vector<std::string>& items)
{
    if (items.empty()) return "";
    if (items.size() == 1) return items[0];
    std::string out;
    for (std::size_t i = 0; i + 1 < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i];
    }
    return out + " and " + items.back();
}

struct SeriesView {
    std::string label;
    std::vector<Decimal> values;
    const std::vector<std::string>* positions;
    std::string prep;  // "in" for periods, "for" for named categories

    std::size_t argmax() const
    {
        return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
    }
    std::size_t argmin() const
    {
        return static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    }
    std::string at(std::size_t i) const { return fmt::format("{} {} {}", values[i].str(), prep, (*positions)[i]); }
};

std::vector<SeriesView> series_views(ChartType type, const DataTable& t)
{
    std::vector<SeriesView> out;
    const auto& positions = series_positions(type, t);
    const std::string prep = labels_temporal(positions) ? "in" : "for";
    const std::size_t n = series_are_rows(type) ? t.rows() : t.cols();
    for (std::size_t s = 0; s < n; ++s) {
        out.push_back({series_label(type, t, s), series_values(type, t, s), &positions, prep});
    }
    return out;
}

std::string trend_sentence(const SeriesView& s, CounterRng& rng)
{
    const auto& v = s.values;
    const std::size_t last = v.size() - 1;
    const auto hi = s.argmax();
    const auto lo = s.argmin();
    switch (classify_trend(v)) {
    case TrendFamily::MonotoneIncreasing:
        return rng.chance(0.5) ? fmt::format("{} rises steadily from {} to {}.", s.label, s.at(0), s.at(last))
                               : fmt::format("{} climbs at every step, going from {} to {}.", s.label, s.at(0),
                                             s.at(last));
    case TrendFamily::MonotoneDecreasing:
        return rng.chance(0.5) ? fmt::format("{} falls steadily from {} to {}.", s.label, s.at(0), s.at(last))
                               : fmt::format("{} declines at every step, going from {} to {}.", s.label, s.at(0),
                                             s.at(last));
    case TrendFamily::Constant:
        return fmt::format("{} holds flat at {} throughout.", s.label, v[0].str());
    case TrendFamily::Spike: {
        auto rest = v;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(hi));
        auto [mn, mx] = std::minmax_element(rest.begin(), rest.end());
        return fmt::format("{} stays between {} and {} apart from a sharp peak of {}.", s.label, mn->str(), mx->str(),
                           s.at(hi));
    }
    case TrendFamily::Dip: {
        auto rest = v;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(lo));
        auto [mn, mx] = std::minmax_element(rest.begin(), rest.end());
        return fmt::format("{} stays between {} and {} apart from a sharp drop to {}.", s.label, mn->str(), mx->str(),
                           s.at(lo));
    }
    case TrendFamily::PlateauThenChange: {
        std::size_t k = 0;
        while (k + 1 < v.size() && v[k + 1] == v[0]) ++k;
        return fmt::format("{} holds level at {} through {} and then {} to {}.", s.label, v[0].str(), (*s.positions)[k],
                           v[last] > v[0] ? "rises" : "falls", s.at(last));
    }
    case TrendFamily::Accelerating:
        return fmt::format("{} grows at a quickening pace, from {} to {}.", s.label, s.at(0), s.at(last));
    case TrendFamily::Decelerating:
        return fmt::format("{} grows quickly at first and then levels off, moving from {} to {}.", s.label, s.at(0),
                           s.at(last));
    case TrendFamily::Cyclic:
        return fmt::format("{} moves in a repeating cycle between a low of {} and a high of {}.", s.label, s.at(lo),
                           s.at(hi));
    case TrendFamily::Volatile:
        return fmt::format("{} swings up and down without a clear direction, ranging from {} to {}.", s.label,
                           s.at(lo), s.at(hi));
    }
    return {};
}

std::vector<std::string> comparison_sentences(const std::vector<SeriesView>& views)
{
    std::vector<std::string> out;
    if (views.size() == 1) {
        const auto& s = views[0];
        if (s.values.size() >= 2) {
            out.push_back(fmt::format("The largest value is {} and the smallest is {}.", s.at(s.argmax()),
                                      s.at(s.argmin())));
        }
        return out;
    }
    std::size_t best = 0, worst = 0;
    for (std::size_t i = 1; i < views.size(); ++i) {
        if (views[i].values[views[i].argmax()] > views[best].values[views[best].argmax()]) best = i;
        if (views[i].values[views[i].argmin()] < views[worst].values[views[worst].argmin()]) worst = i;
    }
    out.push_back(fmt::format("Across all series the highest value belongs to {} at {}, while the lowest belongs to "
                              "{} at {}.",
                              views[best].label, views[best].at(views[best].argmax()), views[worst].label,
                              views[worst].at(views[worst].argmin())));
    const std::size_t last = views[0].values.size() - 1;
    std::vector<std::size_t> order(views.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return views[a].values[last] > views[b].values[last]; });
    if (views[order[0]].values[last] > views[order[1]].values[last]) {
        out.push_back(fmt::format("At {} the leader is {} with {}, ahead of {} with {}.", (*views[0].positions)[last],
                                  views[order[0]].label, views[order[0]].values[last].str(), views[order[1]].label,
                                  views[order[1]].values[last].str()));
    }
    return out;
}

std::string outlier_sentence(const ChartSpec& spec, const DataTable& t, const OutlierMark& m)
{
    const bool rows = series_are_rows(spec.chart_type);
    const std::string& series = rows ? m.cell.row : m.cell.col;
    const std::string& pos = rows ? m.cell.col : m.cell.row;
    const auto& positions = rows ? t.series_labels : t.index;
    const std::string prep = labels_temporal(positions) ? "in" : "for";
    auto r = t.find_row(m.cell.row);
    auto c = t.find_col(m.cell.col);
    const std::string value = (r && c) ? t.at(*r, *c).str() : std::string("an unusual level");
    return fmt::format("One value stands out as an outlier: {} {} {} reaches {}, roughly {} times the level the rest "
                       "of that series would suggest.",
                       series, prep, pos, value, count_word(static_cast<std::size_t>(m.multiplier)));
}

void pad(std::vector<std::string>& sentences, std::vector<std::string> pool, std::size_t min_words)
{
    auto words = [&] {
        std::size_t n = 0;
        for (const auto& s : sentences) n += word_count(s);
        return n;
    };
    for (auto& extra : pool) {
        if (words() >= min_words) return;
        sentences.push_back(std::move(extra));
    }
}

std::string joined(const std::vector<std::string>& sentences)
{
    std::string out;
    for (const auto& s : sentences) {
        if (!out.empty()) out += ' ';
        out += s;
    }
    return out;
}

std::string position_kind(const DataTable& t, ChartType type)
{
    if (series_are_rows(type)) return "axis";
    return lower(t.index_label);
}

std::string template_data_description(const ChartSpec& spec, const SynthesizedTable& synth)
{
    CounterRng rng(spec.seed, "describe-data");
    const DataTable& t = synth.table;
    auto views = series_views(spec.chart_type, t);
    std::vector<std::string> labels;
    for (const auto& v : views) labels.push_back(v.label);

    std::vector<std::string> sentences;
    sentences.push_back(fmt::format("This data set is about {}.", spec.theme.phrase));
    sentences.push_back(fmt::format(
        "It holds {} {} indexed by {} and {} series: {}.", count_word(t.rows()), t.rows() == 1 ? "row" : "rows",
        lower(t.index_label), count_word(views.size()), join_list(labels)));
    for (const auto& v : views) sentences.push_back(trend_sentence(v, rng));
    for (auto& s : comparison_sentences(views)) sentences.push_back(std::move(s));
    for (const auto& m : synth.outliers) sentences.push_back(outlier_sentence(spec, t, m));

    std::vector<std::string> pool;
    for (const auto& v : views) {
        if (v.values.size() >= 2 && !(v.values[v.argmax()] == v.values[v.argmin()])) {
            pool.push_back(fmt::format("For {}, the peak is {} and the low point is {}.", v.label, v.at(v.argmax()),
                                       v.at(v.argmin())));
        }
    }
    pool.push_back(fmt::format("All figures are expressed as {}.", lower(synth.measure)));
    pool.push_back(fmt::format("The {} labels run from {} to {}.", lower(t.index_label), t.index.front(),
                               t.index.back()));
    pool.push_back(fmt::format("In total the table contains {} numeric values.", count_word(t.rows() * t.cols())));
    pool.push_back(fmt::format("Read together, the series give a compact picture of how the figures behind {} "
                               "differ from one {} to the next.",
                               spec.theme.phrase, position_kind(t, spec.chart_type)));
    pool.push_back("No value in the table is missing, so every comparison above is drawn from complete data.");
    pool.push_back("The descriptions of each series are based on the exact values rather than on rounded or "
                   "smoothed figures.");
    pool.push_back("Readers looking for the broad pattern should focus on where each series starts, where it ends "
                   "and where it reaches its extremes.");
    pad(sentences, std::move(pool), 100);
    return joined(sentences);
}

std::string_view legend_words(LegendPos pos)
{
    switch (pos) {
    case LegendPos::UpperRight: return "upper right corner";
    case LegendPos::UpperLeft: return "upper left corner";
    case LegendPos::LowerRight: return "lower right corner";
    case LegendPos::OutsideRight: return "space to the right of the plot";
    case LegendPos::Off: break;
    }
    return "";
}

std::string_view mark_word(ChartType type)
{
    switch (type) {
    case ChartType::Bar:
    case ChartType::StackedBar: return "bar segment";
    case ChartType::Pie:
    case ChartType::Doughnut: return "slice";
    case ChartType::Scatter: return "point";
    case ChartType::Boxplot: return "box";
    default: return "data point";
    }
}

std::string template_chart_description(const ChartSpec& spec, const SynthesizedTable& synth,
                                       const PlotScript& script)
{
    CounterRng rng(spec.seed, "describe-chart");
    const DataTable& t = synth.table;
    const StyleChoice& st = script.style;
    auto views = series_views(spec.chart_type, t);
    std::vector<std::string> labels;
    for (const auto& v : views) labels.push_back(v.label);

    std::vector<std::string> sentences;
    sentences.push_back(fmt::format("The image is a {} drawn with {} under the title \"{}\".",
                                    display_name(spec.chart_type), display_name(spec.engine), st.title));
    switch (spec.chart_type) {
    case ChartType::Pie:
    case ChartType::Doughnut:
        sentences.push_back(fmt::format("Each slice stands for one {} and its size reflects the {}.",
                                        lower(t.index_label), lower(synth.measure)));
        break;
    case ChartType::Radar:
        sentences.push_back(fmt::format("Each spoke of the radar is one of {}, and each polygon traces one {}.",
                                        join_list(t.series_labels), lower(t.index_label)));
        break;
    case ChartType::Scatter:
        sentences.push_back(fmt::format("The horizontal axis shows {} and the vertical axis shows {}.", st.x_label,
                                        st.y_label));
        break;
    default:
        sentences.push_back(fmt::format("The horizontal axis shows {} and the vertical axis shows {}.", st.x_label,
                                        st.y_label));
        break;
    }
    const bool legend_items_are_rows = spec.chart_type == ChartType::Pie || spec.chart_type == ChartType::Doughnut;
    if (st.legend == LegendPos::Off) {
        sentences.push_back("No legend is drawn.");
    } else {
        const auto& items = legend_items_are_rows ? t.index : labels;
        sentences.push_back(fmt::format("A legend in the {} lists {}.", legend_words(st.legend), join_list(items)));
    }
    if (st.annotations) {
        sentences.push_back(fmt::format("Every {} carries a label with its exact value.", mark_word(spec.chart_type)));
    }
    // Observations.
    for (auto& s : comparison_sentences(views)) sentences.push_back(std::move(s));
    for (std::size_t i = 0; i < views.size() && i < 3; ++i) sentences.push_back(trend_sentence(views[i], rng));
    for (const auto& m : synth.outliers) sentences.push_back(outlier_sentence(spec, t, m));

    std::vector<std::string> pool;
    pool.push_back(fmt::format("The figure measures {} by {} inches.",
                               count_word(static_cast<std::size_t>(kFigureSizes[st.figure_size].width_in)),
                               count_word(static_cast<std::size_t>(kFigureSizes[st.figure_size].height_in))));
    pool.push_back(fmt::format("Colors follow the {} palette, with one color per series.",
                               palettes()[static_cast<std::size_t>(st.palette)].id));
    pool.push_back(fmt::format("The chart shows {} categories along the {} dimension.", count_word(t.rows()),
                               lower(t.index_label)));
    pool.push_back("Gridlines and tick labels make it possible to read approximate values directly from the chart.");
    pool.push_back("A reader can compare the series at a glance by looking at their relative heights and positions.");
    pad(sentences, std::move(pool), 80);
    return joined(sentences);
}

}  // namespace

std::string gen_data_description(const ChartSpec& spec, const SynthesizedTable& synth, TextGenBackend& backend)
{
    if (!backend.is_template() && synth.backend_description && !synth.backend_description->empty()) {
        return *synth.backend_description;
    }
    return template_data_description(spec, synth);
}

std::string gen_chart_description(const ChartSpec& spec, const SynthesizedTable& synth, const PlotScript& script,
                                  TextGenBackend& backend)
{
    if (backend.is_template()) return template_chart_description(spec, synth, script);
    const std::string prompt = fill_prompt("describe", {{"chart_type", std::string(display_name(spec.chart_type))},
                                                        {"theme", spec.theme.phrase},
                                                        {"csv", synth.table.to_csv()},
                                                        {"code", script.source}});
    return trim(extract_wrapped(backend.request(prompt, 1024, 0.7), "description"));
}

}  // namespace synchart
