#include <gtest/gtest.h>

#include <map>
#include <set>

#include "synchart/catalog.hpp"
#include "synchart/error.hpp"
#include "synchart/rng.hpp"
#include "synchart/sampler.hpp"
#include "synchart/trend.hpp"

using namespace synchart;

namespace {
std::vector<std::int64_t> V(std::initializer_list<std::int64_t> v) { return v; }
}

TEST(Sampler, SpecsSatisfyConstraintsAndMatrix)
{
    auto cfg = GenConfig::defaults();
    auto catalogs = Catalogs::bundled();
    for (std::uint64_t i = 0; i < 2000; ++i) {
        auto spec = sample_chart_spec(derive_record_seed(3, i), cfg);
        ASSERT_TRUE(engine_supports(spec.engine, spec.chart_type));
        ASSERT_TRUE(dim_constraint(spec.chart_type).satisfied_by(spec.n_rows, spec.n_cols));
        ASSERT_EQ(static_cast<int>(spec.trends.size()), series_count(spec.chart_type, spec.n_rows, spec.n_cols));
        for (const auto& id : spec.trends) {
            const auto* tag = catalogs->find_trend(id);
            ASSERT_NE(tag, nullptr);
            ASSERT_TRUE(tag->applies_to(spec.chart_type));
        }
        ASSERT_EQ(spec.record_id, record_id_for_seed(spec.seed));
    }
}

TEST(Sampler, Deterministic)
{
    auto cfg = GenConfig::defaults();
    EXPECT_EQ(sample_chart_spec(99, cfg), sample_chart_spec(99, cfg));
    EXPECT_NE(sample_chart_spec(99, cfg).record_id, sample_chart_spec(100, cfg).record_id);
}

TEST(Sampler, RestrictionsAndWeights)
{
    auto cfg = GenConfig::defaults();
    cfg.allow_engines = std::set<EngineId>{EngineId::Seaborn};
    for (std::uint64_t i = 0; i < 300; ++i) {
        auto spec = sample_chart_spec(i, cfg);
        EXPECT_EQ(spec.engine, EngineId::Seaborn);
        EXPECT_TRUE(engine_supports(EngineId::Seaborn, spec.chart_type));
    }
    cfg = GenConfig::defaults();
    cfg.chart_type_weights[ChartType::Bar] = 0;
    for (std::uint64_t i = 0; i < 300; ++i) EXPECT_NE(sample_chart_spec(i, cfg).chart_type, ChartType::Bar);
}

TEST(Sampler, EmptyDomainAndBadWeights)
{
    auto cfg = GenConfig::defaults();
    cfg.allow_engines = std::set<EngineId>{EngineId::Seaborn};
    cfg.allow_types = std::set<ChartType>{ChartType::Pie};
    try {
        cfg.validate();
        FAIL() << "expected EmptyDomain";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyDomain);
    }
    cfg = GenConfig::defaults();
    cfg.engine_weights[EngineId::Plotly] = -1;
    EXPECT_THROW(cfg.validate(), Error);
}

TEST(Sampler, EmptyThemeCatalog)
{
    Catalogs empty;
    try {
        sample_theme(1, empty);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CatalogEmpty);
    }
}

TEST(Sampler, ManySeriesMixFamilies)
{
    auto catalogs = Catalogs::bundled();
    for (std::uint64_t s = 0; s < 500; ++s) {
        auto ids = assign_trends(ChartType::StackedBar, 5, 10, s, *catalogs);
        std::set<TrendFamily> fam;
        for (auto& id : ids) fam.insert(catalogs->find_trend(id)->family);
        EXPECT_GE(fam.size(), 2u);
    }
    auto ids = assign_trends(ChartType::Scatter, 3, 10, 5, *catalogs);
    EXPECT_EQ(catalogs->find_trend(ids[0])->family, TrendFamily::MonotoneIncreasing);
}

TEST(Trend, ClassifierRules)
{
    EXPECT_EQ(classify_trend(V({5, 5, 5})), TrendFamily::Constant);
    EXPECT_EQ(classify_trend(V({10, 11, 40, 12, 11})), TrendFamily::Spike);
    EXPECT_EQ(classify_trend(V({40, 41, 10, 40, 42})), TrendFamily::Dip);
    EXPECT_EQ(classify_trend(V({10, 10, 10, 12, 15})), TrendFamily::PlateauThenChange);
    EXPECT_EQ(classify_trend(V({1, 2, 4, 8, 16})), TrendFamily::Accelerating);
    EXPECT_EQ(classify_trend(V({1, 9, 15, 19, 21})), TrendFamily::Decelerating);
    EXPECT_EQ(classify_trend(V({1, 2, 3, 4, 5})), TrendFamily::MonotoneIncreasing);
    EXPECT_EQ(classify_trend(V({9, 7, 6, 2})), TrendFamily::MonotoneDecreasing);
    EXPECT_EQ(classify_trend(V({10, 20, 10, 20, 10, 20, 10, 20})), TrendFamily::Cyclic);
    EXPECT_EQ(classify_trend(V({10, 14, 30, 22, 25, 8, 31})), TrendFamily::Volatile);
}

TEST(Trend, AutocorrelationOfAlternatingSeries)
{
    auto s = V({1, -1, 1, -1, 1, -1});
    EXPECT_NEAR(autocorrelation(s, 2), 1.0, 1e-12);
}

TEST(Trend, RealizedSeriesKeepTheirFamily)
{
    auto catalogs = Catalogs::bundled();
    int checked = 0;
    for (const auto& tag : catalogs->trends) {
        for (int len : {5, 8, 12, 30}) {
            if (len < min_series_length(tag.family)) continue;
            for (std::uint64_t s = 0; s < 20; ++s) {
                CounterRng rng(s, tag.id);
                for (double noise : {0.0, 0.04}) {
                    auto series = realize_trend(tag, len, TrendParams{1000, noise}, rng);
                    ASSERT_EQ(static_cast<int>(series.size()), len);
                    ASSERT_EQ(classify_trend(series), tag.family) << tag.id << " len " << len;
                    for (auto v : series) ASSERT_GT(v, 0) << tag.id;
                    ++checked;
                }
            }
        }
    }
    EXPECT_GT(checked, 1000);
}
