#include <gtest/gtest.h>

#include <set>

#include "fake_backend.hpp"
#include "synchart/catalog.hpp"
#include "synchart/codegen.hpp"
#include "synchart/error.hpp"
#include "synchart/harness.hpp"
#include "synchart/lint.hpp"
#include "synchart/repair.hpp"
#include "synchart/rng.hpp"
#include "synchart/sampler.hpp"
#include "synchart/table_synth.hpp"
#include "synchart/template_engine.hpp"

using namespace synchart;

namespace {

struct Drafted {
    ChartSpec spec;
    SynthesizedTable synth;
    PlotScript script;
};

Drafted draft(EngineId engine, ChartType type, std::uint64_t seed)
{
    auto cfg = GenConfig::defaults();
    cfg.allow_types = std::set<ChartType>{type};
    cfg.allow_engines = std::set<EngineId>{engine};
    TemplateBackend backend;
    Drafted d;
    d.spec = sample_chart_spec(seed, cfg);
    d.synth = synth_table(d.spec, *cfg.catalogs, backend);
    d.script = gen_code(d.spec, d.synth.table, d.synth.measure, backend);
    return d;
}

std::optional<AppliedRepair> fix(const std::string& stderr_text, const std::string& source,
                                 const std::string& out = "x.jpg")
{
    auto cls = ErrorClassifier::bundled().classify(stderr_text);
    return apply_repair(default_repair_rules(), cls, stderr_text, source, RepairContext{out});
}

}  // namespace

TEST(TemplateEngine, VariablesAndSections)
{
    TemplateContext ctx{{"name", std::string("bar")}, {"on", true}, {"off", false}};
    EXPECT_EQ(render_template("a {{name}} b", ctx), "a bar b");
    EXPECT_EQ(render_template("{{#on}}yes{{/on}}{{^off}}!{{/off}}", ctx), "yes!");
    EXPECT_EQ(render_template("x\n{{#off}}\nhidden\n{{/off}}\ny\n", ctx), "x\ny\n");
    EXPECT_THROW(render_template("{{missing}}", ctx), Error);
    EXPECT_THROW(render_template("{{#on}}open", ctx), Error);
    EXPECT_THROW(render_template("{{#name}}x{{/name}}", ctx), Error);
}

TEST(TemplateEngine, PyStr)
{
    EXPECT_EQ(py_str("a \"b\"\\"), "\"a \\\"b\\\"\\\\\"");
    EXPECT_EQ(py_str("l1\nl2"), "\"l1\\nl2\"");
}

TEST(Codegen, EveryPairHasATemplateAndLintsClean)
{
    int pairs = 0;
    for (auto [engine, type] : compatible_pairs()) {
        ASSERT_TRUE(embedded_asset(template_path(engine, type))) << template_path(engine, type);
        for (std::uint64_t s = 0; s < 15; ++s) {
            auto d = draft(engine, type, derive_record_seed(s, 1));
            const auto& src = d.script.source;
            ASSERT_EQ(d.script.engine, engine);
            ASSERT_EQ(d.script.output_filename, d.spec.record_id + ".jpg");
            auto problems = lint_script(d.script, d.synth.table.to_csv());
            ASSERT_TRUE(problems.empty()) << template_path(engine, type) << ": " << problems.front() << "\n" << src;
            ASSERT_NE(src.find(py_str(d.script.style.title)), std::string::npos);
            ASSERT_EQ(src.find("{{"), std::string::npos);
        }
        ++pairs;
    }
    EXPECT_EQ(pairs, 28);
}

TEST(Codegen, MissingTemplateIsNoTemplate)
{
    auto d = draft(EngineId::Matplotlib, ChartType::Pie, 1);
    d.spec.engine = EngineId::Seaborn;
    TemplateBackend backend;
    try {
        gen_code(d.spec, d.synth.table, d.synth.measure, backend);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoTemplate);
    }
}

TEST(Codegen, StyleIsDeterministicAndVaried)
{
    std::set<int> used_palettes, sizes;
    std::set<LegendPos> legends;
    for (std::uint64_t s = 0; s < 200; ++s) {
        auto d = draft(EngineId::Plotly, ChartType::Bar, s);
        auto again = sample_style(d.spec, d.synth.table, d.synth.measure);
        ASSERT_EQ(again, d.script.style);
        used_palettes.insert(again.palette);
        sizes.insert(again.figure_size);
        legends.insert(again.legend);
        ASSERT_FALSE(again.title.empty());
    }
    EXPECT_EQ(used_palettes.size(), palettes().size());
    EXPECT_EQ(sizes.size(), kFigureSizes.size());
    EXPECT_EQ(legends.size(), kLegendPositions.size());
    for (std::uint64_t s = 0; s < 30; ++s) {
        auto box = draft(EngineId::Matplotlib, ChartType::Boxplot, s);
        EXPECT_EQ(box.script.style.legend, LegendPos::Off);
        EXPECT_FALSE(box.script.style.annotations);
    }
}

TEST(Codegen, LlmPath)
{
    auto d = draft(EngineId::Matplotlib, ChartType::Line, 9);
    ScriptedBackend backend;
    backend.responses = {"<code start>\nprint(1)\n<code end>\n<description start>A line chart.<description end>"};
    std::string desc;
    auto script = gen_code(d.spec, d.synth.table, d.synth.measure, backend, &desc);
    EXPECT_EQ(script.source.find("print(1)") != std::string::npos, true);
    EXPECT_EQ(desc, "A line chart.");
    ASSERT_EQ(backend.prompts.size(), 1u);
    EXPECT_NE(backend.prompts[0].find(d.synth.table.to_csv()), std::string::npos);
    EXPECT_NE(backend.prompts[0].find(script.output_filename), std::string::npos);
}

TEST(Lint, FlagsEachProblem)
{
    auto d = draft(EngineId::Matplotlib, ChartType::Bar, 3);
    auto csv = d.synth.table.to_csv();
    auto with = [&](const std::string& src) {
        auto s = d.script;
        s.source = src;
        return lint_script(s, csv);
    };
    const auto& src = d.script.source;
    EXPECT_FALSE(with(src + "\nplt.show()\n").empty());
    EXPECT_FALSE(with("import socket\n" + src).empty());
    EXPECT_FALSE(with(src + "\nimport subprocess\n").empty());
    EXPECT_FALSE(with(src + "\nopen(\"x\")\n").empty());
    EXPECT_FALSE(with(src + "\nplt.savefig(\"other.jpg\")\n").empty());
    EXPECT_FALSE(with("import pandas as pd\ndf = pd.read_csv(\"data.csv\")\n" + src).empty());
    auto retarget = src;
    retarget.replace(retarget.find(d.script.output_filename), d.script.output_filename.size(), "other.jpg");
    EXPECT_FALSE(with(retarget).empty());
    EXPECT_FALSE(lint_script(d.script, csv + "Extra,1\n").empty());
}

TEST(Lint, IgnoresWordsInsideStrings)
{
    auto d = draft(EngineId::Matplotlib, ChartType::Bar, 3);
    auto s = d.script;
    s.source = "# open( requests\n" + s.source + "\nlabel = \"Service requests and socket counts\"\n";
    EXPECT_TRUE(lint_script(s, d.synth.table.to_csv()).empty());
}

TEST(Classifier, BundledTable)
{
    const auto& c = ErrorClassifier::bundled();
    EXPECT_EQ(c.classify("  File \"x\"\nSyntaxError: invalid syntax"), ErrorClass::Syntax);
    EXPECT_EQ(c.classify("NameError: name 'np' is not defined"), ErrorClass::MissingSymbol);
    EXPECT_EQ(c.classify("ModuleNotFoundError: No module named 'kaleido'"), ErrorClass::MissingSymbol);
    EXPECT_EQ(c.classify("ValueError: x and y must have same first dimension"), ErrorClass::DataShape);
    EXPECT_EQ(c.classify("subprocess.TimeoutExpired"), ErrorClass::Timeout);
    EXPECT_EQ(c.classify("SandboxViolation: network access denied"), ErrorClass::SandboxViolation);
    EXPECT_EQ(c.classify("no image written"), ErrorClass::EmptyImage);
    EXPECT_EQ(c.classify("FileNotFoundError: [Errno 2]"), ErrorClass::Other);
    EXPECT_EQ(c.classify(""), ErrorClass::Other);
    auto custom = ErrorClassifier::parse("# c\ntimeout\tslow\n");
    EXPECT_EQ(custom.classify("too slow"), ErrorClass::Timeout);
}

TEST(Repair, StripFences)
{
    auto r = fix("SyntaxError: invalid syntax", "```python\nprint(1)\n```\n");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->rule_id, "strip_markdown_fences");
    EXPECT_EQ(r->source, "print(1)\n");
}

TEST(Repair, AddMissingImport)
{
    auto r = fix("NameError: name 'np' is not defined", "x = np.arange(3)\n");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->rule_id, "add_missing_import");
    EXPECT_EQ(r->source, "import numpy as np\nx = np.arange(3)\n");
    EXPECT_FALSE(fix("NameError: name 'zz' is not defined", "zz()\n"));
}

TEST(Repair, DropRemovedKwarg)
{
    auto r = fix("TypeError: hist() got an unexpected keyword argument 'normed'", "plt.hist(x, normed=True)\n");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->rule_id, "drop_removed_kwarg");
    EXPECT_EQ(r->source, "plt.hist(x)\n");
    r = fix("TypeError: f() got an unexpected keyword argument 'hold'", "f(hold=True, y=1)\n");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->source, "f(y=1)\n");
}

TEST(Repair, RemoveShowAndNetwork)
{
    auto r = fix("SandboxViolation: interactive display is not available", "a = 1\nplt.show()\nb = 2\n");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->rule_id, "remove_show_call");
    EXPECT_EQ(r->source, "a = 1\nb = 2\n");
    r = fix("SandboxViolation: network access denied",
            "import socket\ntitle = \"Service requests\"\nsocket.create_connection((\"h\", 80))\n");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->rule_id, "remove_network_access");
    EXPECT_EQ(r->source, "title = \"Service requests\"\n");
}

TEST(Repair, FixOutputTarget)
{
    auto r = fix("OSError: no image written", "plt.savefig('chart.png')\n", "abc.jpg");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->rule_id, "fix_output_target");
    EXPECT_EQ(r->source, "plt.savefig(\"abc.jpg\")\n");
    r = fix("no image written", "import plotly.graph_objects as go\nfig = go.Figure()\n", "abc.jpg");
    ASSERT_TRUE(r);
    EXPECT_NE(r->source.find("fig.write_image(\"abc.jpg\""), std::string::npos);
}

TEST(Repair, InlineCsvSource)
{
    auto src = "csv_data = \"\"\"\nA,B\nx,1\n\"\"\"\ndf = pd.read_csv('data.csv', index_col=0)\n";
    auto r = fix("FileNotFoundError: [Errno 2] No such file or directory: 'data.csv'", src);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->rule_id, "inline_csv_source");
    EXPECT_NE(r->source.find("read_csv(io.StringIO(csv_data), index_col=0)"), std::string::npos);
    EXPECT_EQ(r->source.rfind("import io\n", 0), 0u);
    EXPECT_FALSE(fix("FileNotFoundError: x", "df = pd.read_csv('data.csv')\n"));
}

TEST(Repair, NothingForUnknownFailures)
{
    EXPECT_FALSE(fix("ValueError: shapes do not match", "x = 1\n"));
    EXPECT_FALSE(fix("subprocess.TimeoutExpired", "while True: pass\n"));
}
