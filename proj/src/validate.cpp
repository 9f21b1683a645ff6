#include "synchart/validate.hpp"

#include <set>

#include <fmt/format.h>

#include "synchart/catalog.hpp"
#include "synchart/error.hpp"
#include "synchart/lint.hpp"
#include "synchart/qa_synth.hpp"
#include "synchart/sampler.hpp"

namespace synchart {

bool ValidationReport::has(const std::string& code) const
{
    for (const auto& v : violations) {
        if (v.code == code) return true;
    }
    return false;
}

namespace {

constexpr std::size_t kSimpleAnswerMaxTokens = 5;
constexpr std::size_t kMinReasoningSteps = 2;

void check_qa(const DatasetRecord& r, ValidationReport& report)
{
    auto add = [&](const char* code, std::string detail) { report.violations.push_back({code, std::move(detail)}); };
    const int ns = static_cast<int>(r.simple_qa.size());
    const int nc = static_cast<int>(r.complex_qa.size());
    if (ns < kSimpleMin) add("QA_COUNT_LOW", fmt::format("{} simple items", ns));
    if (ns > kSimpleMax) add("QA_COUNT_HIGH", fmt::format("{} simple items", ns));
    if (nc < kComplexMin) add("COMPLEX_COUNT_LOW", fmt::format("{} complex items", nc));
    if (nc > kComplexMax) add("COMPLEX_COUNT_HIGH", fmt::format("{} complex items", nc));

    std::set<std::string> keys;
    auto check_item = [&](const QAItem& q, QAKind expected, std::size_t i) {
        const std::string where = fmt::format("{} item {}", to_string(expected), i);
        if (q.kind != expected) add("QA_KIND", where);
        if (expected == QAKind::Simple && token_count(q.answer) > kSimpleAnswerMaxTokens) {
            add("SIMPLE_ANSWER_LONG", fmt::format("{}: '{}'", where, q.answer));
        }
        if (expected == QAKind::Complex) {
            if (q.reasoning.size() < kMinReasoningSteps) {
                add("REASONING_SHORT", fmt::format("{}: {} steps", where, q.reasoning.size()));
            } else {
                bool empty_step = false;
                bool computes = false;
                for (const auto& step : q.reasoning) {
                    if (trim(step).empty()) empty_step = true;
                    if (step.find('=') != std::string::npos) computes = true;
                }
                if (empty_step || !computes) add("REASONING_WORDING", where);
            }
        }
        if (!keys.insert(q.oracle.key()).second) add("QA_DUPLICATE", where);
        try {
            if (!verify_answer(q, r.table)) add("QA_VERIFY_FAILED", where);
        } catch (const Error& e) {
            add("QA_VERIFY_FAILED", fmt::format("{}: {}", where, e.what()));
        }
    };
    for (std::size_t i = 0; i < r.simple_qa.size(); ++i) check_item(r.simple_qa[i], QAKind::Simple, i);
    for (std::size_t i = 0; i < r.complex_qa.size(); ++i) check_item(r.complex_qa[i], QAKind::Complex, i);
}

}  // namespace

ValidationReport validate_record(const DatasetRecord& r)
{
    ValidationReport report;
    auto add = [&](const char* code, std::string detail) { report.violations.push_back({code, std::move(detail)}); };
    const ChartSpec& s = r.spec;

    if (s.record_id != record_id_for_seed(s.seed)) add("RECORD_ID", s.record_id);
    if (!engine_supports(s.engine, s.chart_type) || r.code.engine != s.engine) {
        add("ENGINE_INCOMPATIBLE", fmt::format("{} / {}", to_string(s.engine), to_string(s.chart_type)));
    }
    if (!dim_constraint(s.chart_type).satisfied_by(s.n_rows, s.n_cols)) {
        add("DIMS_CONSTRAINT", fmt::format("{} rows x {} cols", s.n_rows, s.n_cols));
    }
    if (static_cast<int>(r.table.rows()) != s.n_rows ||
        static_cast<int>(r.table.cols()) != value_columns(s.chart_type, s.n_cols)) {
        add("DIMS_MISMATCH", fmt::format("table is {}x{}", r.table.rows(), r.table.cols()));
    }
    if (static_cast<int>(s.trends.size()) != series_count(s.chart_type, s.n_rows, s.n_cols)) {
        add("TREND_COUNT", fmt::format("{} trends", s.trends.size()));
    }
    std::shared_ptr<const Catalogs> catalogs;
    try {
        catalogs = Catalogs::bundled();
    } catch (const Error&) {
    }
    for (const auto& id : s.trends) {
        const TrendTag* tag = catalogs ? catalogs->find_trend(id) : nullptr;
        if (!tag) {
            add("TREND_UNKNOWN", id);
        } else if (!tag->applies_to(s.chart_type)) {
            add("TREND_INAPPLICABLE", id);
        }
    }

    const auto problems = table_problems(r.table);
    if (!problems.empty()) add("TABLE_INVALID", problems.front());
    std::string csv;
    try {
        csv = r.table.to_csv();
        if (!(DataTable::from_csv(csv) == r.table)) add("CSV_ROUNDTRIP", "parsed table differs");
    } catch (const std::exception& e) {
        add("CSV_ROUNDTRIP", e.what());
    }
    const auto lint = lint_script(r.code, csv);
    if (!lint.empty()) add("CODE_LINT", lint.front());
    if (trim(r.data_description).empty()) add("DESCRIPTION_MISSING", "data description");
    if (trim(r.chart_description).empty()) add("DESCRIPTION_MISSING", "chart description");

    check_qa(r, report);

    const auto& m = r.image.meta;
    if (r.image.path.empty() || m.width < kMinImageSide || m.height < kMinImageSide || m.bytes == 0 ||
        m.variance < kBlankVarianceThreshold) {
        add("IMAGE_META", fmt::format("{} {}x{}", r.image.path, m.width, m.height));
    }
    return report;
}

}  // namespace synchart
