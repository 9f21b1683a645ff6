#include "synchart/table_synth.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "synchart/error.hpp"
#include "synchart/rng.hpp"
#include "synchart/trend.hpp"

namespace synchart {

int outlier_count_for(int n_rows, int n_cols)
{
    const int cells = n_rows * n_cols;
    if (cells >= 48) return 2;
    if (cells >= 12) return 1;
    return 0;
}

std::vector<Decimal> series_values(ChartType type, const DataTable& table, std::size_t s)
{
    return series_are_rows(type) ? table.row(s) : table.column(s);
}

std::string series_label(ChartType type, const DataTable& table, std::size_t s)
{
    return series_are_rows(type) ? table.index[s] : table.series_labels[s];
}

const std::vector<std::string>& series_positions(ChartType type, const DataTable& table)
{
    return series_are_rows(type) ? table.series_labels : table.index;
}

namespace {

enum class AxisKind { Periods, Nouns, Measures };

constexpr std::array<std::string_view, 12> kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                      "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
constexpr std::array<std::string_view, 6> kQualifiers = {"Northern", "Southern", "Eastern",
                                                         "Western",  "Central",  "Coastal"};

struct Layout {
    AxisKind rows = AxisKind::Periods;
    AxisKind cols = AxisKind::Nouns;
};

Layout choose_layout(const ChartSpec& spec, const Catalogs& catalogs, CounterRng& rng)
{
    switch (spec.chart_type) {
    case ChartType::Line:
    case ChartType::StackedArea:
    case ChartType::Boxplot:
        return {AxisKind::Periods, AxisKind::Nouns};
    case ChartType::Radar:
        return {AxisKind::Nouns, AxisKind::Nouns};
    case ChartType::Pie:
    case ChartType::Doughnut:
    case ChartType::Scatter:
        return {AxisKind::Nouns, AxisKind::Measures};
    case ChartType::Bar:
    case ChartType::StackedBar: {
        bool temporal = spec.n_rows > 20;
        for (const auto& id : spec.trends) {
            const TrendTag* tag = catalogs.find_trend(id);
            if (tag && is_temporal_family(tag->family)) temporal = true;
        }
        if (temporal || rng.chance(0.5)) return {AxisKind::Periods, AxisKind::Nouns};
        return {AxisKind::Nouns, spec.n_cols == 1 ? AxisKind::Measures : AxisKind::Periods};
    }
    }
    return {};
}

class NounPool {
public:
    NounPool(const TopicLexicon& lex, CounterRng& rng) : base_(lex.nouns)
    {
        rng.shuffle(base_.begin(), base_.end());
    }

    std::vector<std::string> take(int n)
    {
        std::vector<std::string> out;
        for (int i = 0; i < n; ++i) {
            std::size_t k = next_++;
            std::size_t round = k / base_.size();
            const std::string& noun = base_[k % base_.size()];
            if (round == 0) {
                out.push_back(noun);
            } else {
                out.push_back(fmt::format("{} {}", kQualifiers[(round - 1) % kQualifiers.size()], noun));
            }
        }
        return out;
    }

private:
    std::vector<std::string> base_;
    std::size_t next_ = 0;
};

struct Periods {
    std::string label;
    std::vector<std::string> values;
};

Periods make_periods(int n, CounterRng& rng, bool allow_months)
{
    if (allow_months && n <= 12 && rng.chance(0.3)) {
        Periods p{"Month", {}};
        int start = static_cast<int>(rng.range(0, 12 - n));
        for (int i = 0; i < n; ++i) p.values.emplace_back(kMonths[static_cast<std::size_t>(start + i)]);
        return p;
    }
    Periods p{"Year", {}};
    int last = static_cast<int>(rng.range(2005, 2025));
    int first = last - n + 1;
    for (int i = 0; i < n; ++i) p.values.push_back(std::to_string(first + i));
    return p;
}

std::vector<std::string> measure_labels(const TopicLexicon& lex, int n, CounterRng& rng)
{
    std::vector<std::string> m = lex.measures;
    rng.shuffle(m.begin(), m.end());
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) {
        std::size_t round = static_cast<std::size_t>(i) / m.size();
        const std::string& base = m[static_cast<std::size_t>(i) % m.size()];
        out.push_back(round == 0 ? base : fmt::format("{} {}", kQualifiers[(round - 1) % kQualifiers.size()], base));
    }
    return out;
}

std::string lower(std::string s)
{
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::int64_t series_median(std::vector<std::int64_t> v)
{
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

constexpr std::int64_t kMaxUnits = 999999;

void inject_outliers(std::vector<std::vector<std::int64_t>>& series, int count, CounterRng& rng,
                     std::vector<std::pair<std::size_t, std::size_t>>& marked, std::vector<int>& multipliers)
{
    struct Candidate {
        std::size_t s;
        std::size_t i;
    };
    std::set<std::size_t> used_series;
    for (int k = 0; k < count; ++k) {
        const int mult = static_cast<int>(rng.range(2, 4));
        std::vector<Candidate> all;
        for (std::size_t s = 0; s < series.size(); ++s) {
            std::int64_t med = series_median(series[s]);
            for (std::size_t i = 0; i < series[s].size(); ++i) {
                if (series[s][i] < med || series[s][i] * mult > kMaxUnits) continue;
                if (std::find(marked.begin(), marked.end(), std::make_pair(s, i)) != marked.end()) continue;
                all.push_back({s, i});
            }
        }
        if (all.empty()) return;
        rng.shuffle(all.begin(), all.end());
        // Prefer cells whose scaling keeps the series' family, and fresh series.
        const Candidate* pick = nullptr;
        for (int pass = 0; pass < 3 && !pick; ++pass) {
            for (const auto& c : all) {
                if (pass < 2 && used_series.count(c.s)) continue;
                if (pass == 0) {
                    auto trial = series[c.s];
                    trial[c.i] *= mult;
                    if (classify_trend(trial) != classify_trend(series[c.s])) continue;
                }
                pick = &c;
                break;
            }
        }
        if (!pick) pick = &all.front();
        series[pick->s][pick->i] *= mult;
        marked.emplace_back(pick->s, pick->i);
        multipliers.push_back(mult);
        used_series.insert(pick->s);
    }
}

SynthesizedTable synth_template(const ChartSpec& spec, const Catalogs& catalogs, const SynthOptions& options)
{
    CounterRng rng(spec.seed, "table");
    const TopicLexicon& lex = catalogs.lexicon_for(spec.theme.topic);
    const ChartType type = spec.chart_type;
    const int n_value_cols = value_columns(type, spec.n_cols);
    const int n_series = series_count(type, spec.n_rows, spec.n_cols);
    const int len = series_length(type, spec.n_rows, spec.n_cols);
    if (n_value_cols < 1 || static_cast<int>(spec.trends.size()) != n_series) {
        throw Error(ErrorCode::ConstraintUnsatisfiable, "spec dimensions and trends disagree");
    }

    SynthesizedTable out;
    DataTable& t = out.table;
    Layout layout = choose_layout(spec, catalogs, rng);
    NounPool nouns(lex, rng);

    if (layout.rows == AxisKind::Periods) {
        Periods p = make_periods(spec.n_rows, rng, true);
        t.index_label = p.label;
        t.index = p.values;
    } else {
        t.index_label = lex.category_label;
        t.index = nouns.take(spec.n_rows);
    }
    std::vector<std::string> measures = measure_labels(lex, std::max(1, n_value_cols), rng);
    switch (layout.cols) {
    case AxisKind::Nouns:
        t.series_labels = nouns.take(n_value_cols);
        out.measure = measures.front();
        out.col_kind = lower(lex.category_label);
        break;
    case AxisKind::Measures:
        t.series_labels.assign(measures.begin(), measures.begin() + n_value_cols);
        out.measure = measures.front();
        out.col_kind = "measure";
        break;
    case AxisKind::Periods:
        t.series_labels = make_periods(n_value_cols, rng, false).values;
        out.measure = measures.front();
        out.col_kind = "year";
        break;
    }

    // Base magnitude log-uniform in [1, 10^4]; the quantum keeps every base
    // at 100 units or more.
    const double base = std::pow(10.0, rng.uniform(0.0, 4.0));
    const int scale = base >= 100.0 ? 0 : (base >= 10.0 ? 1 : 2);
    const auto table_units = std::max<std::int64_t>(100, std::llround(base * std::pow(10.0, scale)));

    std::vector<std::vector<std::int64_t>> series;
    for (int s = 0; s < n_series; ++s) {
        const TrendTag* tag = catalogs.find_trend(spec.trends[static_cast<std::size_t>(s)]);
        if (!tag) throw Error(ErrorCode::ConstraintUnsatisfiable, fmt::format("unknown trend '{}'", spec.trends[s]));
        TrendParams params;
        params.base_units = std::max<std::int64_t>(100, std::llround(table_units * rng.uniform(0.5, 1.5)));
        params.noise_level = options.noise_level;
        series.push_back(realize_trend(*tag, len, params, rng));
    }

    std::vector<std::pair<std::size_t, std::size_t>> marked;
    std::vector<int> multipliers;
    if (options.inject_outliers) {
        inject_outliers(series, outlier_count_for(spec.n_rows, n_value_cols), rng, marked, multipliers);
    }

    t.cells.assign(static_cast<std::size_t>(spec.n_rows), std::vector<Decimal>(static_cast<std::size_t>(n_value_cols)));
    for (std::size_t s = 0; s < series.size(); ++s) {
        for (std::size_t i = 0; i < series[s].size(); ++i) {
            Decimal v = Decimal::from_units(std::min(series[s][i], kMaxUnits), scale);
            if (series_are_rows(type)) {
                t.cells[s][i] = v;
            } else {
                t.cells[i][s] = v;
            }
        }
    }
    for (std::size_t k = 0; k < marked.size(); ++k) {
        auto [s, i] = marked[k];
        CellRef ref = series_are_rows(type) ? CellRef{t.index[s], t.series_labels[i]}
                                            : CellRef{t.index[i], t.series_labels[s]};
        out.outliers.push_back({ref, multipliers[k]});
    }
    return out;
}

bool labels_look_temporal(const std::vector<std::string>& labels)
{
    return std::all_of(labels.begin(), labels.end(), [](const std::string& l) {
        return l.size() == 4 && std::all_of(l.begin(), l.end(), [](char c) { return c >= '0' && c <= '9'; });
    });
}

std::string constraint_text(const ChartSpec& spec)
{
    return std::string(dim_constraint(spec.chart_type).notes);
}

SynthesizedTable synth_llm(const ChartSpec& spec, const Catalogs& catalogs, TextGenBackend& backend,
                           const SynthOptions& options)
{
    std::string trends;
    for (const auto& id : spec.trends) {
        const TrendTag* tag = catalogs.find_trend(id);
        if (!trends.empty()) trends += ", ";
        trends += tag ? fmt::format("{} ({})", id, to_string(tag->family)) : id;
    }
    const std::string prompt =
        fill_prompt("data", {{"chart_type", std::string(display_name(spec.chart_type))},
                             {"theme", spec.theme.phrase},
                             {"trends", trends},
                             {"row_column", fmt::format("{} rows and {} columns", spec.n_rows, spec.n_cols)},
                             {"data_constraints", constraint_text(spec)}});
    const int want_cols = value_columns(spec.chart_type, spec.n_cols);
    std::string last_problem;
    for (int attempt = 0; attempt < std::max(1, options.max_backend_attempts); ++attempt) {
        try {
            std::string response = backend.request(prompt, 2048, 0.7);
            DataTable table = DataTable::from_csv(trim(extract_wrapped(response, "data")));
            auto problems = table_problems(table);
            if (!problems.empty()) throw Error(ErrorCode::BackendFailure, problems.front());
            if (static_cast<int>(table.rows()) != spec.n_rows || static_cast<int>(table.cols()) != want_cols) {
                throw Error(ErrorCode::BackendFailure,
                            fmt::format("table is {}x{}, wanted {}x{}", table.rows(), table.cols(), spec.n_rows,
                                        want_cols));
            }
            SynthesizedTable out;
            out.table = std::move(table);
            const TopicLexicon& lex = catalogs.lexicon_for(spec.theme.topic);
            out.measure = lex.measures.front();
            out.col_kind = labels_look_temporal(out.table.series_labels) ? "year" : lower(lex.category_label);
            out.backend_description = trim(extract_wrapped(response, "description"));
            return out;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::BackendFailure && e.code() != ErrorCode::ParseError) throw;
            last_problem = e.what();
        }
    }
    throw Error(ErrorCode::BackendFailure, fmt::format("no usable table after retries: {}", last_problem));
}

}  // namespace

SynthesizedTable synth_table(const ChartSpec& spec, const Catalogs& catalogs, TextGenBackend& backend,
                             const SynthOptions& options)
{
    if (backend.is_template()) return synth_template(spec, catalogs, options);
    return synth_llm(spec, catalogs, backend, options);
}

}  // namespace synchart
