// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "dual_oracle.hpp"
#include "fixtures.hpp"
#include "synchart/catalog.hpp"
#include "synchart/dataset_io.hpp"
#include "synchart/harness.hpp"
#include "synchart/oracle.hpp"
#include "synchart/pipeline.hpp"
#include "synchart/qa_synth.hpp"
#include "synchart/record_json.hpp"
#include "synchart/render.hpp"
#include "synchart/repair.hpp"
#include "synchart/rng.hpp"
#include "synchart/sampler.hpp"

using namespace synchart;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances and sizes.
constexpr std::uint64_t kRecords = 1000;
constexpr std::uint64_t kSeed = 20240917;
constexpr double kOracleMinutes = 10.0;
constexpr int kSpecs = 10000;
constexpr double kMarginalTolerance = 0.03;
constexpr int kPerPairRecords = 20;
constexpr double kTemplateSuccessMin = 0.95;
constexpr int kFaultsPerPair = 20;
constexpr double kSimpleDensityLo = 15.0, kSimpleDensityHi = 20.0;
constexpr double kComplexDensityLo = 5.0, kComplexDensityHi = 9.0;
constexpr std::uint64_t kDeterminismRecords = 200;

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail)
{
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double secs(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

RunConfig config(const fs::path& out, std::uint64_t count, int workers)
{
    RunConfig c;
    c.count = count;
    c.seed = kSeed;
    c.out_dir = out;
    c.workers = workers;
    c.shard_size = 100;
    c.timeout_s = 10;
    c.harness_command = {SYNCHART_MOCK_HARNESS};
    return c;
}

std::vector<std::string> shard_lines(const fs::path& root)
{
    std::vector<std::string> out;
    auto m = read_manifest(root);
    for (const auto& s : m.shards) {
        std::ifstream in(root / s.path);
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) out.push_back(line);
    }
    return out;
}

// ---------------------------------------------------------------- oracle

void oracle_soundness(const fs::path& root, double gen_s)
{
    auto t0 = Clock::now();
    auto report_v = verify_dataset(root);
    std::uint64_t items = 0, mismatches = 0;
    std::string first;
    for (const auto& line : shard_lines(root)) {
        auto j = nlohmann::json::parse(line);
        const std::string csv = j["table"]["csv_text"];
        for (const char* set : {"simple_qa", "complex_qa"}) {
            for (const auto& qa : j[set]) {
                ++items;
                auto why = dual::check(qa, csv);
                if (!why.empty()) {
                    ++mismatches;
                    if (first.empty()) first = qa["question"].get<std::string>() + " -> " + why;
                }
            }
        }
    }
    const double minutes = (gen_s + secs(t0)) / 60.0;
    const auto qa_fail = report_v.count("QA_VERIFY_FAILED");
    bool ok = report_v.records == kRecords && qa_fail == 0 && mismatches == 0 && items > 0 && minutes < kOracleMinutes;
    report(ok, "oracle_soundness",
           fmt::format("{} records, {} QA items, verify QA failures {}, dual-oracle mismatches {}, {} total verify "
                       "failures, {:.2f} min{}",
                       report_v.records, items, qa_fail, mismatches, report_v.failures.size(), minutes,
                       first.empty() ? "" : "; first: " + first));
}

// ---------------------------------------------------------------- golden

void golden_fixtures()
{
    auto t = fixtures::anime();
    auto ctx = infer_context(t, ChartType::StackedBar, "year");
    OracleProgram argmax;
    argmax.op = OracleOp::ArgmaxLabel;
    argmax.axis = Axis::Col;
    argmax.line = "2022";
    OracleProgram decline;
    decline.op = OracleOp::LargestDeclineLabel;
    decline.axis = Axis::Row;
    decline.from_line = "2014";
    decline.to_line = "2022";
    OracleProgram diff;
    diff.op = OracleOp::Difference;
    diff.a = {"Horror", "2022"};
    diff.b = {"Horror", "2018"};
    auto item = make_item(diff, QAKind::Complex, t, ctx, 0);
    bool trace = false;
    for (const auto& s : item.reasoning) trace = trace || s.find("74 - 44 = 30") != std::string::npos;
    const auto a = evaluate(argmax, t).str();
    const auto d = evaluate(decline, t).str();
    const auto n = evaluate(diff, t).str();
    bool ok = a == "Action" && d == "Mecha" && n == "30" && item.answer == "30" && trace && verify_answer(item, t);
    report(ok, "golden_fixtures",
           fmt::format("argmax 2022 = {}, largest decline 2014->2022 = {}, Horror 2022-2018 = {}, trace {}", a, d, n,
                       trace ? "contains \"74 - 44 = 30\"" : "missing"));
}

// ---------------------------------------------------------------- constraints

using Dist = std::map<int, double>;

Dist uniform(int lo, int hi)
{
    Dist d;
    for (int v = lo; v <= hi; ++v) d[v] = 1.0 / (hi - lo + 1);
    return d;
}

Dist choice(const std::vector<int>& items)
{
    Dist d;
    for (int v : items) d[v] += 1.0 / static_cast<double>(items.size());
    return d;
}

// Column and row distributions written out from the constraint table.
std::pair<Dist, Dist> expected(ChartType t)
{
    const std::vector<int> groups = {2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 25, 30};
    switch (t) {
    case ChartType::Bar: return {uniform(1, 3), choice(groups)};
    case ChartType::Line: {
        Dist cols;
        for (int x = 1; x <= 2; ++x)
            for (int y = 1; y <= 5; ++y) cols[x + y] += 0.1;
        return {cols, choice(groups)};
    }
    case ChartType::Radar: return {uniform(3, 10), uniform(1, 10)};
    case ChartType::StackedBar: return {uniform(2, 10), choice(groups)};
    case ChartType::Doughnut: return {choice({2}), choice({2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20})};
    case ChartType::Pie: return {choice({2}), uniform(2, 8)};
    case ChartType::Scatter: return {choice({2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 3, 4, 5}), choice(groups)};
    case ChartType::Boxplot: return {uniform(1, 10), choice(groups)};
    case ChartType::StackedArea: return {uniform(2, 5), choice({5, 6, 7, 8, 9, 10, 15, 20, 25, 30})};
    }
    return {};
}

const std::set<std::pair<std::string, std::string>>& allowed_pairs()
{
    static const std::set<std::pair<std::string, std::string>> s = [] {
        std::set<std::pair<std::string, std::string>> out;
        for (const char* t : {"bar", "line", "radar", "stacked_bar", "doughnut", "pie", "scatter", "boxplot",
                              "stacked_area"}) {
            out.insert({"matplotlib", t});
            out.insert({"plotly", t});
        }
        for (const char* t : {"bar", "line", "scatter", "boxplot"}) out.insert({"seaborn", t});
        for (const char* t : {"bar", "line", "stacked_bar", "scatter", "boxplot", "stacked_area"})
            out.insert({"bokeh", t});
        return out;
    }();
    return s;
}

void constraint_conformance()
{
    auto gen = GenConfig::defaults();
    std::map<ChartType, std::map<int, int>> cols, rows;
    std::map<ChartType, int> per_type;
    int violations = 0;
    for (int i = 0; i < kSpecs; ++i) {
        auto spec = sample_chart_spec(derive_record_seed(kSeed, static_cast<std::uint64_t>(i)), gen);
        auto [c, r] = expected(spec.chart_type);
        bool ok = c.count(spec.n_cols) && r.count(spec.n_rows) &&
                  allowed_pairs().count({std::string(to_string(spec.engine)), std::string(to_string(spec.chart_type))});
        if (!ok) ++violations;
        ++cols[spec.chart_type][spec.n_cols];
        ++rows[spec.chart_type][spec.n_rows];
        ++per_type[spec.chart_type];
    }
    double worst = 0;
    std::string worst_at;
    for (auto t : kChartTypes) {
        auto [c, r] = expected(t);
        const double n = per_type[t];
        auto compare = [&](const Dist& want, std::map<int, int>& got, const char* what) {
            std::set<int> keys;
            for (auto& [k, v] : want) keys.insert(k);
            for (auto& [k, v] : got) keys.insert(k);
            for (int k : keys) {
                double diff = std::abs((n > 0 ? got[k] / n : 0.0) - (want.count(k) ? want.at(k) : 0.0));
                if (diff > worst) {
                    worst = diff;
                    worst_at = fmt::format("{} {}={}", to_string(t), what, k);
                }
            }
        };
        compare(c, cols[t], "cols");
        compare(r, rows[t], "rows");
    }
    bool ok = violations == 0 && worst <= kMarginalTolerance;
    report(ok, "constraint_conformance",
           fmt::format("{} specs, {} violations, max marginal deviation {:.4f} at {} (tolerance {:.2f})", kSpecs,
                       violations, worst, worst_at, kMarginalTolerance));
}

// ---------------------------------------------------------------- repair

enum Fault { Clean, Fence, Import, Kwarg, Show, Network, Target, CsvPath, ShapeError, KeyMissing, kFaults };

std::string replace_once(std::string s, const std::string& from, const std::string& to)
{
    auto p = s.find(from);
    if (p != std::string::npos) s.replace(p, from.size(), to);
    return s;
}

std::string inject(Fault f, const PlotScript& script)
{
    const std::string& s = script.source;
    switch (f) {
    case Clean: return s;
    case Fence: return "```python\n" + s + "```\n";
    case Import: return replace_once(s, "import pandas as pd\n", "");
    case Kwarg: return replace_once(s, "index_col=0)", "index_col=0, normed=True)");
    case Show:
        if (script.engine == EngineId::Plotly) return s + "fig.show()\n";
        if (script.engine == EngineId::Bokeh) return s + "import bokeh.io\nbokeh.io.show(p)\n";
        return s + "plt.show()\n";
    case Network: return "import socket\nsocket.create_connection((\"example.com\", 80))\n" + s;
    case Target: return replace_once(s, "\"" + script.output_filename + "\"", "\"chart.png\"");
    case CsvPath: return replace_once(s, "io.StringIO(csv_data)", "\"data.csv\"");
    case ShapeError: return "raise ValueError('x and y must have same first dimension')\n" + s;
    case KeyMissing: return "raise KeyError('Value')\n" + s;
    default: return s;
    }
}

DatasetRecord draft_for(EngineId e, ChartType t, std::uint64_t index)
{
    auto gen = GenConfig::defaults();
    gen.allow_engines = std::set<EngineId>{e};
    gen.allow_types = std::set<ChartType>{t};
    TemplateBackend backend;
    return draft_record(kSeed + 1, index, gen, backend);
}

void repair_direction_and_template_success()
{
    auto dir = fixtures::temp_dir("accept-repair");
    HarnessHandle harness({SYNCHART_MOCK_HARNESS});
    const int max_attempts = RunConfig{}.max_repairs + 1;
    static const std::vector<RepairRule> no_rules;

    int corpus = 0, ok_with = 0, ok_without = 0;
    std::map<int, int> fault_seen;
    double worst_pair = 1.0;
    std::string worst_name;
    int pairs = 0, template_total = 0, template_ok = 0;
    std::uint64_t index = 0;
    for (auto [engine, type] : compatible_pairs()) {
        ++pairs;
        int pair_ok = 0;
        for (int k = 0; k < kPerPairRecords; ++k) {
            auto rec = draft_for(engine, type, index++);
            auto out = dir / rec.code.output_filename;
            auto rr = repair_loop(rec.code, harness, default_repair_rules(), max_attempts, 10, out, rec.spec.record_id);
            pair_ok += rr.outcome.success ? 1 : 0;
        }
        template_total += kPerPairRecords;
        template_ok += pair_ok;
        double rate = static_cast<double>(pair_ok) / kPerPairRecords;
        if (rate < worst_pair) {
            worst_pair = rate;
            worst_name = fmt::format("{}/{}", to_string(engine), to_string(type));
        }
        if (worst_name.empty()) worst_name = fmt::format("{}/{}", to_string(engine), to_string(type));

        for (int k = 0; k < kFaultsPerPair; ++k) {
            auto rec = draft_for(engine, type, index++);
            CounterRng rng(rec.spec.seed, "fault");
            auto fault = static_cast<Fault>(rng.below(kFaults));
            ++fault_seen[fault];
            PlotScript mutated = rec.code;
            mutated.source = inject(fault, rec.code);
            auto out = dir / rec.code.output_filename;
            auto a = repair_loop(mutated, harness, default_repair_rules(), max_attempts, 10, out, "w" + rec.spec.record_id);
            auto b = repair_loop(mutated, harness, no_rules, max_attempts, 10, out, "n" + rec.spec.record_id);
            ++corpus;
            ok_with += a.outcome.success ? 1 : 0;
            ok_without += b.outcome.success ? 1 : 0;
        }
    }
    fs::remove_all(dir);
    const double with = 100.0 * ok_with / corpus;
    const double without = 100.0 * ok_without / corpus;
    report(ok_with > ok_without && static_cast<int>(fault_seen.size()) == kFaults, "repair_loop_direction",
           fmt::format("fault corpus of {} scripts ({} fault kinds incl. clean): {:.1f}% without repairs -> {:.1f}% "
                       "with repairs (reference movement 64.0% -> 76.8%)",
                       corpus, fault_seen.size(), without, with));
    report(worst_pair >= kTemplateSuccessMin && pairs == 28, "template_success",
           fmt::format("{}/{} template scripts rendered across {} engine/type pairs; lowest pair {} at {:.1f}% "
                       "(minimum {:.0f}%); the engine matrix yields 28 pairs, not 30",
                       template_ok, template_total, pairs, worst_name, 100.0 * worst_pair,
                       100.0 * kTemplateSuccessMin));
}

// ---------------------------------------------------------------- card

void dataset_card(const fs::path& root)
{
    auto card = stats_report(root);
    const double images = static_cast<double>(card.images);
    const double desc = images > 0 ? card.descriptions / images : 0;
    const double simple = images > 0 ? card.simple_qa / images : 0;
    const double complex = images > 0 ? card.complex_qa / images : 0;
    bool ok = card.images == kRecords && card.descriptions == 2 * card.images && simple >= kSimpleDensityLo &&
              simple <= kSimpleDensityHi && complex >= kComplexDensityLo && complex <= kComplexDensityHi;
    report(ok, "dataset_card",
           fmt::format("{} images, {:.2f} descriptions/image, simple QA {:.2f}/image (range [{}, {}], target 18.2), "
                       "complex QA {:.2f}/image (range [{}, {}], target 6.9)",
                       card.images, desc, simple, kSimpleDensityLo, kSimpleDensityHi, complex, kComplexDensityLo,
                       kComplexDensityHi));
}

// ---------------------------------------------------------------- determinism

void determinism()
{
    auto a = fixtures::temp_dir("det-a"), b = fixtures::temp_dir("det-b"), c = fixtures::temp_dir("det-c");
    auto ra = run_generate(config(a, kDeterminismRecords, 1));
    auto rb = run_generate(config(b, kDeterminismRecords, 1));
    auto rc = run_generate(config(c, kDeterminismRecords, 8));
    auto digests = [](const RunResult& r) {
        std::vector<std::string> d;
        for (const auto& s : r.manifest.shards) d.push_back(s.digest);
        return d;
    };
    auto set_of = [](const fs::path& root) {
        std::set<std::string> s;
        for (const auto& line : shard_lines(root)) s.insert(canonical_line(parse_record_line(line)));
        return s;
    };
    bool same_runs = digests(ra) == digests(rb);
    bool same_parallel = set_of(a) == set_of(c) && digests(ra) == digests(rc);
    report(same_runs && same_parallel, "determinism",
           fmt::format("{} records: repeated run shard digests {}, workers=1 vs workers=8 record sets {} "
                       "(peak workers in use {})",
                       kDeterminismRecords, same_runs ? "identical" : "DIFFER", same_parallel ? "identical" : "DIFFER",
                       rc.summary.peak_in_flight));
    for (const auto& p : {a, b, c}) fs::remove_all(p);
}

// ---------------------------------------------------------------- faithfulness

void faithfulness(const fs::path& root)
{
    static const std::regex number(R"(\d+(?:\.\d+)?)");
    std::uint64_t numbers = 0, unsupported = 0, texts = 0;
    std::string first;
    for (const auto& line : shard_lines(root)) {
        auto j = nlohmann::json::parse(line);
        auto t = dual::Table::from_csv(j["table"]["csv_text"]);
        std::set<dual::Q> allowed;
        for (const auto& row : t.cells)
            for (const auto& v : row) allowed.insert(v);
        std::vector<std::string> labels = t.rows;
        labels.insert(labels.end(), t.header.begin(), t.header.end());
        for (const auto& l : labels)
            for (auto it = std::sregex_iterator(l.begin(), l.end(), number); it != std::sregex_iterator(); ++it)
                allowed.insert(*dual::parse_number(it->str()));
        for (const char* key : {"data_description", "chart_description"}) {
            const std::string text = j[key];
            ++texts;
            for (auto it = std::sregex_iterator(text.begin(), text.end(), number); it != std::sregex_iterator(); ++it) {
                ++numbers;
                if (!allowed.count(*dual::parse_number(it->str()))) {
                    ++unsupported;
                    if (first.empty()) first = it->str() + " in " + j["record_id"].get<std::string>();
                }
            }
        }
    }
    report(unsupported == 0 && numbers > 0, "description_faithfulness",
           fmt::format("{} descriptions, {} numbers, {} not found in the table or its labels{}", texts, numbers,
                       unsupported, first.empty() ? "" : "; first: " + first));
}

}  // namespace

int main()
{
    auto root = fixtures::temp_dir("accept");
    auto t0 = Clock::now();
    auto run = run_generate(config(root, kRecords, 1));
    const double gen_s = secs(t0);
    std::printf("generated %llu records in %.1f s (%llu rejected)\n",
                static_cast<unsigned long long>(run.summary.succeeded), gen_s,
                static_cast<unsigned long long>(run.summary.rejected));

    oracle_soundness(root, gen_s);
    golden_fixtures();
    constraint_conformance();
    repair_direction_and_template_success();
    dataset_card(root);
    determinism();
    faithfulness(root);
    fs::remove_all(root);
    std::printf("%s\n", failures == 0 ? "ALL PASS" : fmt::format("{} FAILED", failures).c_str());
    return failures == 0 ? 0 : 1;
}
