#include <gtest/gtest.h>

#include <set>

#include "fake_backend.hpp"
#include "fixtures.hpp"
#include "synchart/catalog.hpp"
#include "synchart/codegen.hpp"
#include "synchart/describe.hpp"
#include "synchart/error.hpp"
#include "synchart/qa_synth.hpp"
#include "synchart/rng.hpp"
#include "synchart/sampler.hpp"
#include "synchart/table_synth.hpp"
#include "synchart/trend.hpp"

using namespace synchart;

namespace {

ChartSpec spec_for(ChartType type, std::uint64_t seed)
{
    auto cfg = GenConfig::defaults();
    cfg.allow_types = std::set<ChartType>{type};
    return sample_chart_spec(seed, cfg);
}

}  // namespace

TEST(TableSynth, ShapeLabelsAndCells)
{
    auto catalogs = Catalogs::bundled();
    TemplateBackend backend;
    for (auto type : kChartTypes) {
        for (std::uint64_t s = 0; s < 60; ++s) {
            auto spec = spec_for(type, derive_record_seed(17, s));
            auto synth = synth_table(spec, *catalogs, backend);
            const auto& t = synth.table;
            ASSERT_EQ(static_cast<int>(t.rows()), spec.n_rows) << to_string(type);
            ASSERT_EQ(static_cast<int>(t.cols()), value_columns(type, spec.n_cols)) << to_string(type);
            ASSERT_TRUE(table_problems(t).empty()) << table_problems(t).front();
            std::set<std::string> labels(t.index.begin(), t.index.end());
            labels.insert(t.series_labels.begin(), t.series_labels.end());
            labels.insert(t.index_label);
            ASSERT_EQ(labels.size(), t.rows() + t.cols() + 1) << "labels must be distinct";
            for (const auto& row : t.cells) {
                for (const auto& c : row) {
                    ASSERT_LE(c.significant_digits(), Decimal::kMaxSignificantDigits);
                    ASSERT_FALSE(c.is_negative());
                }
            }
            ASSERT_EQ(static_cast<int>(synth.outliers.size()),
                      outlier_count_for(static_cast<int>(t.rows()), static_cast<int>(t.cols())));
            ASSERT_FALSE(synth.measure.empty());
            ASSERT_FALSE(synth.col_kind.empty());
        }
    }
}

TEST(TableSynth, Deterministic)
{
    auto catalogs = Catalogs::bundled();
    TemplateBackend backend;
    auto spec = spec_for(ChartType::Line, 77);
    EXPECT_EQ(synth_table(spec, *catalogs, backend).table, synth_table(spec, *catalogs, backend).table);
}

TEST(TableSynth, SeriesFollowTheirTrendsWithoutOutliers)
{
    auto catalogs = Catalogs::bundled();
    TemplateBackend backend;
    SynthOptions opts;
    opts.inject_outliers = false;
    int checked = 0;
    for (auto type : kChartTypes) {
        for (std::uint64_t s = 0; s < 40; ++s) {
            auto spec = spec_for(type, derive_record_seed(5, s));
            auto synth = synth_table(spec, *catalogs, backend, opts);
            ASSERT_TRUE(synth.outliers.empty());
            for (std::size_t k = 0; k < spec.trends.size(); ++k) {
                auto values = series_values(type, synth.table, k);
                auto fam = catalogs->find_trend(spec.trends[k])->family;
                ASSERT_EQ(classify_trend(values), fam) << to_string(type) << " " << spec.trends[k];
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 500);
}

TEST(TableSynth, OutlierCounts)
{
    EXPECT_EQ(outlier_count_for(2, 5), 0);
    EXPECT_EQ(outlier_count_for(3, 4), 1);
    EXPECT_EQ(outlier_count_for(6, 8), 2);
}

TEST(TableSynth, LlmPathRetriesUntilDimensionsFit)
{
    auto catalogs = Catalogs::bundled();
    auto spec = spec_for(ChartType::Bar, 3);
    spec.n_rows = 2;
    spec.n_cols = 1;
    ScriptedBackend backend;
    backend.responses = {
        "nothing useful",
        "<data start>\nItem,A,B\nx,1,2\ny,3,4\n<data end><description start>d<description end>",
        "<data start>\nItem,A\nx,1\ny,3\n<data end>\n<description start>\nTwo items.\n<description end>",
    };
    auto synth = synth_table(spec, *catalogs, backend);
    EXPECT_EQ(backend.prompts.size(), 3u);
    EXPECT_EQ(synth.table.to_csv(), "Item,A\nx,1\ny,3\n");
    EXPECT_EQ(synth.backend_description, "Two items.");
    EXPECT_NE(backend.prompts[0].find(spec.theme.phrase), std::string::npos);
    EXPECT_EQ(backend.prompts[0].find("{theme}"), std::string::npos);
}

TEST(TableSynth, LlmPathGivesUp)
{
    auto catalogs = Catalogs::bundled();
    auto spec = spec_for(ChartType::Bar, 3);
    ScriptedBackend backend;
    try {
        synth_table(spec, *catalogs, backend);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BackendFailure);
    }
}

TEST(Describe, CountWords)
{
    EXPECT_EQ(count_word(0), "zero");
    EXPECT_EQ(count_word(6), "six");
    EXPECT_EQ(count_word(21), "twenty-one");
    EXPECT_EQ(count_word(112), "one hundred and twelve");
    EXPECT_EQ(count_word(10000), "10000");
}

TEST(Describe, NumbersAndWords)
{
    EXPECT_EQ(extract_numbers("from 30 in 2014 to 74.5, then -3"),
              (std::vector<std::string>{"30", "2014", "74.5", "3"}));
    EXPECT_EQ(word_count("  one two\nthree "), 3u);
    auto t = fixtures::anime();
    EXPECT_TRUE(unsupported_numbers("Horror rose from 30 in 2014 to 74 in 2022.", t).empty());
    EXPECT_EQ(unsupported_numbers("Horror rose by 44 percent to 75.", t), (std::vector<std::string>{"75"}));
}

TEST(Describe, TemplateDescriptionsAreFaithfulAndSized)
{
    auto catalogs = Catalogs::bundled();
    TemplateBackend backend;
    for (auto type : kChartTypes) {
        for (std::uint64_t s = 0; s < 30; ++s) {
            auto spec = spec_for(type, derive_record_seed(23, s));
            auto synth = synth_table(spec, *catalogs, backend);
            auto data = gen_data_description(spec, synth, backend);
            auto script = gen_code(spec, synth.table, synth.measure, backend);
            auto chart = gen_chart_description(spec, synth, script, backend);
            ASSERT_GE(word_count(data), 100u) << data;
            ASSERT_LE(word_count(data), 600u);
            ASSERT_GE(word_count(chart), 80u) << chart;
            ASSERT_LE(word_count(chart), 400u);
            ASSERT_TRUE(unsupported_numbers(data, synth.table).empty()) << data;
            ASSERT_TRUE(unsupported_numbers(chart, synth.table).empty()) << chart;
            ASSERT_NE(data.find(spec.theme.phrase), std::string::npos);
            ASSERT_NE(chart.find(std::string(display_name(type))), std::string::npos) << chart;
            ASSERT_NE(data, chart);
        }
    }
}

TEST(Describe, OutliersAreMentioned)
{
    auto catalogs = Catalogs::bundled();
    TemplateBackend backend;
    int seen = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        auto spec = spec_for(ChartType::StackedBar, derive_record_seed(8, s));
        auto synth = synth_table(spec, *catalogs, backend);
        auto text = gen_data_description(spec, synth, backend);
        for (const auto& o : synth.outliers) {
            auto r = synth.table.find_row(o.cell.row);
            auto c = synth.table.find_col(o.cell.col);
            ASSERT_TRUE(r && c);
            EXPECT_NE(text.find(synth.table.at(*r, *c).str()), std::string::npos) << text;
            ++seen;
        }
    }
    EXPECT_GT(seen, 10);
}

TEST(Describe, LlmDescriptionsComeFromBackend)
{
    auto catalogs = Catalogs::bundled();
    auto spec = spec_for(ChartType::Pie, 4);
    TemplateBackend tb;
    auto synth = synth_table(spec, *catalogs, tb);
    synth.backend_description = "Backend text.";
    ScriptedBackend backend;
    EXPECT_EQ(gen_data_description(spec, synth, backend), "Backend text.");
    backend.responses = {"<description start>The chart shows slices.<description end>"};
    auto script = gen_code(spec, synth.table, synth.measure, tb);
    EXPECT_EQ(gen_chart_description(spec, synth, script, backend), "The chart shows slices.");
    ASSERT_EQ(backend.prompts.size(), 1u);
    EXPECT_NE(backend.prompts[0].find(script.source), std::string::npos);
}

TEST(QaSynth, CountsAndKinds)
{
    auto catalogs = Catalogs::bundled();
    TemplateBackend backend;
    for (auto type : kChartTypes) {
        for (std::uint64_t s = 0; s < 40; ++s) {
            auto spec = spec_for(type, derive_record_seed(31, s));
            auto synth = synth_table(spec, *catalogs, backend);
            auto ctx = infer_context(synth.table, type, synth.col_kind);
            auto simple = gen_simple_qa(synth.table, ctx, spec.seed, target_simple_count(spec.seed));
            auto complex = gen_complex_qa(synth.table, ctx, spec.seed, target_complex_count(spec.seed));
            ASSERT_GE(simple.size(), 3u);
            ASSERT_LE(simple.size(), 20u);
            ASSERT_GE(complex.size(), 2u);
            ASSERT_LE(complex.size(), 10u);
            std::set<std::string> keys;
            for (const auto& q : simple) {
                ASSERT_EQ(q.kind, QAKind::Simple);
                ASSERT_LE(token_count(q.answer), 5u);
                ASSERT_TRUE(q.reasoning.empty());
                ASSERT_TRUE(keys.insert(q.oracle.key()).second);
                ASSERT_TRUE(verify_answer(q, synth.table)) << q.question;
            }
            for (const auto& q : complex) {
                ASSERT_EQ(q.kind, QAKind::Complex);
                ASSERT_EQ(q.reasoning.size(), 3u);
                ASSERT_TRUE(keys.insert(q.oracle.key()).second);
                ASSERT_TRUE(verify_answer(q, synth.table)) << q.question;
            }
        }
    }
}

TEST(QaSynth, TargetCountsStayInRange)
{
    for (std::uint64_t s = 0; s < 500; ++s) {
        int a = target_simple_count(s);
        int b = target_complex_count(s);
        ASSERT_GE(a, 16);
        ASSERT_LE(a, 20);
        ASSERT_GE(b, 4);
        ASSERT_LE(b, 10);
    }
}

TEST(QaSynth, TinyTableIsInsufficient)
{
    auto t = DataTable::from_csv("Item,A\nx,1\n");
    auto ctx = infer_context(t, ChartType::Pie, "measure");
    try {
        gen_complex_qa(t, ctx, 1, 10);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientTable);
    }
}

TEST(QaSynth, TemporalLabels)
{
    EXPECT_TRUE(labels_temporal({"2014", "2015"}));
    EXPECT_TRUE(labels_temporal({"January", "February"}));
    EXPECT_TRUE(labels_temporal({"Jan", "Feb", "Mar"}));
    EXPECT_FALSE(labels_temporal({"Action", "2015"}));
}
