#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <fstream>
#include <set>
#include <thread>

#include <json.hpp>

#include "fixtures.hpp"
#include "synchart/catalog.hpp"
#include "synchart/codegen.hpp"
#include "synchart/error.hpp"
#include "synchart/harness.hpp"
#include "synchart/image.hpp"
#include "synchart/render.hpp"
#include "synchart/repair.hpp"
#include "synchart/sampler.hpp"
#include "synchart/table_synth.hpp"
#include "synchart/template_engine.hpp"

using namespace synchart;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kMock = {SYNCHART_MOCK_HARNESS};
constexpr auto kGrace = std::chrono::milliseconds(2000);

// Sample listing in the shape of the worked example: inline CSV, stacked bars.
std::string listing(const std::string& out)
{
    return "import io\nimport matplotlib\nmatplotlib.use(\"Agg\")\nimport matplotlib.pyplot as plt\n"
           "import pandas as pd\n\ncsv_data = \"\"\"\n" +
           std::string(fixtures::kAnimeCsv) +
           "\"\"\"\ndf = pd.read_csv(io.StringIO(csv_data), index_col=0)\n"
           "fig, ax = plt.subplots(figsize=(10, 8))\ndf.T.plot(kind=\"bar\", stacked=True, ax=ax)\n"
           "plt.savefig(\"" + out + "\", format=\"jpg\")\n";
}

HarnessRequest request(const std::string& id, const std::string& code, const fs::path& out, double timeout = 10)
{
    return HarnessRequest{id, "matplotlib", code, timeout, out.string()};
}

// Worker that answers every request with a fixed body after some noise.
std::vector<std::string> shell_worker(const std::string& body)
{
    return {"/bin/sh", "-c",
            "while IFS= read -r l; do id=$(printf '%s' \"$l\" | sed 's/.*\"id\":\"\\([^\"]*\\)\".*/\\1/'); "
            "echo 'not json'; echo '{\"id\":\"someone-else\",\"status\":\"success\"}'; "
            "echo \"{\\\"id\\\":\\\"$id\\\"," + body + "}\"; done"};
}

}  // namespace

TEST(Protocol, RoundTrip)
{
    HarnessRequest req{"r1", "plotly", "print(1)\n", 2.5, "/tmp/x.jpg"};
    auto back = decode_request(encode_request(req));
    EXPECT_EQ(back.id, "r1");
    EXPECT_EQ(back.engine, "plotly");
    EXPECT_EQ(back.code, "print(1)\n");
    EXPECT_DOUBLE_EQ(back.timeout_s, 2.5);
    EXPECT_EQ(back.out_path, "/tmp/x.jpg");
    EXPECT_EQ(encode_request(req).find('\n'), std::string::npos);

    HarnessResponse resp{"r1", "failure", ErrorClass::MissingSymbol, "NameError", "", 12};
    auto j = nlohmann::json::parse(encode_response(resp));
    EXPECT_EQ(j["error_class"], "missing_symbol");
    EXPECT_TRUE(j["image_path"].is_null());
    auto r = decode_response(encode_response(resp));
    EXPECT_EQ(r.error_class, ErrorClass::MissingSymbol);
    EXPECT_EQ(r.wall_ms, 12);
    HarnessResponse ok{"r2", "success", ErrorClass::None, "", "/tmp/x.jpg", 3};
    EXPECT_TRUE(nlohmann::json::parse(encode_response(ok))["error_class"].is_null());
}

TEST(Protocol, DecodeErrors)
{
    EXPECT_THROW(decode_request("{}"), Error);
    EXPECT_THROW(decode_request("not json"), Error);
    EXPECT_THROW(decode_request(R"({"id":"a","engine":"x","code":"","out_path":"o","timeout_s":0})"), Error);
    EXPECT_NO_THROW(decode_request(R"({"id":"a","engine":"x","code":"","out_path":"o","timeout_s":1,"extra":1})"));
    EXPECT_THROW(decode_response(R"({"id":"a","status":"maybe"})"), Error);
    auto r = decode_response(R"({"id":"a","status":"failure","error_class":"brand_new"})");
    EXPECT_EQ(r.error_class, ErrorClass::Other);
}

TEST(Protocol, TailBytesKeepsUtf8Whole)
{
    std::string s(3000, 'a');
    EXPECT_EQ(tail_bytes(s).size(), kStderrTailMax);
    std::string u = "x\xC3\xA9\xC3\xA9";  // x + two 2-byte characters
    EXPECT_EQ(tail_bytes(u, 3), "\xC3\xA9");
    for (auto c : {ErrorClass::None, ErrorClass::Syntax, ErrorClass::Timeout, ErrorClass::EmptyImage})
        EXPECT_EQ(parse_error_class(to_string(c)), c);
}

TEST(MockHarness, RendersListingToJpeg)
{
    auto dir = fixtures::temp_dir("mock");
    HarnessHandle h(kMock, kGrace);
    auto out = dir / "listing.jpg";
    auto r = h.call(request("a", listing("listing.jpg"), out));
    ASSERT_EQ(r.status, "success") << r.stderr_tail;
    EXPECT_EQ(r.id, "a");
    EXPECT_EQ(r.image_path, out.string());
    auto check = validate_image_file(out);
    ASSERT_TRUE(check.meta) << check.problem;
    EXPECT_EQ(check.meta->width, 1000);
    EXPECT_EQ(check.meta->height, 800);
}

TEST(MockHarness, ClassifiesFailures)
{
    auto dir = fixtures::temp_dir("mock");
    HarnessHandle h(kMock, kGrace);
    auto out = dir / "c.jpg";
    auto base = listing("c.jpg");
    struct Case {
        std::string code;
        ErrorClass expected;
    };
    std::vector<Case> cases = {
        {"```python\n" + base + "```\n", ErrorClass::Syntax},
        {base.substr(base.find("import pandas")), ErrorClass::MissingSymbol},
        {"import socket\nsocket.create_connection((\"example.com\", 80))\n" + base, ErrorClass::SandboxViolation},
        {base + "plt.show()\n", ErrorClass::SandboxViolation},
        {"raise ValueError('bad shape')\n", ErrorClass::DataShape},
        {base.substr(0, base.find("plt.savefig")), ErrorClass::EmptyImage},
        {"", ErrorClass::Other},
    };
    int n = 0;
    for (const auto& c : cases) {
        auto r = h.call(request("c" + std::to_string(n++), c.code, out));
        EXPECT_EQ(r.status, "failure") << c.code;
        EXPECT_EQ(r.error_class, c.expected) << r.stderr_tail;
    }
}

TEST(MockHarness, EnforcesScriptTimeout)
{
    auto dir = fixtures::temp_dir("mock");
    HarnessHandle h(kMock, kGrace);
    auto start = std::chrono::steady_clock::now();
    auto r = h.call(request("t", "import time\ntime.sleep(10)\n", dir / "t.jpg", 1));
    auto took = std::chrono::steady_clock::now() - start;
    EXPECT_EQ(r.error_class, ErrorClass::Timeout);
    EXPECT_LT(took, std::chrono::seconds(5));
}

TEST(MockHarness, SurvivesManyCrashingScripts)
{
    auto dir = fixtures::temp_dir("mock");
    HarnessHandle h(kMock, kGrace);
    for (int i = 0; i < 100; ++i) {
        auto id = "k" + std::to_string(i);
        auto r = h.call(request(id, "raise RuntimeError('boom " + std::to_string(i) + "')\n", dir / "k.jpg"));
        ASSERT_EQ(r.id, id);
        ASSERT_EQ(r.status, "failure");
        ASSERT_NE(r.stderr_tail.find("boom"), std::string::npos);
    }
    EXPECT_EQ(h.restarts(), 0);
}

TEST(HarnessHandle, SilentWorkerTimesOutAndIsReplaced)
{
    HarnessHandle h({"/bin/sh", "-c", "cat > /dev/null"}, std::chrono::milliseconds(200));
    auto start = std::chrono::steady_clock::now();
    auto r = h.call(request("s", "x", "/tmp/none.jpg", 0.3));
    auto took = std::chrono::steady_clock::now() - start;
    EXPECT_EQ(r.status, "failure");
    EXPECT_EQ(r.error_class, ErrorClass::Timeout);
    EXPECT_GE(took, std::chrono::milliseconds(450));
    EXPECT_LT(took, std::chrono::seconds(3));
    EXPECT_GE(h.restarts(), 1);
}

TEST(HarnessHandle, DyingWorkerIsRetriedOnceThenUnavailable)
{
    auto dir = fixtures::temp_dir("mock");
    HarnessHandle h(kMock, kGrace);
    try {
        h.call(request("d", "import os\nos._exit(1)\n", dir / "d.jpg"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::HarnessUnavailable);
    }
    auto r = h.call(request("after", listing("after.jpg"), dir / "after.jpg"));
    EXPECT_EQ(r.status, "success") << r.stderr_tail;
}

TEST(HarnessHandle, SkipsStrayAndForeignLines)
{
    HarnessHandle h(shell_worker("\\\"status\\\":\\\"failure\\\",\\\"error_class\\\":\\\"data_shape\\\""), kGrace);
    for (int i = 0; i < 3; ++i) {
        auto r = h.call(request("q" + std::to_string(i), "x", "/tmp/none.jpg"));
        EXPECT_EQ(r.id, "q" + std::to_string(i));
        EXPECT_EQ(r.error_class, ErrorClass::DataShape);
    }
}

TEST(HarnessHandle, MissingExecutableIsUnavailable)
{
    HarnessHandle h({"/nonexistent/worker"}, std::chrono::milliseconds(200));
    EXPECT_THROW(h.call(request("m", "x", "/tmp/none.jpg", 0.5)), Error);
}

TEST(HarnessPool, BoundsConcurrency)
{
    HarnessPool pool(kMock, 3, kGrace);
    EXPECT_EQ(pool.size(), 3);
    auto dir = fixtures::temp_dir("pool");
    std::atomic<int> ok{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 6; ++t) {
        threads.emplace_back([&, t] {
            for (int i = 0; i < 4; ++i) {
                auto name = "p" + std::to_string(t) + "_" + std::to_string(i) + ".jpg";
                auto lease = pool.lease();
                auto r = lease->call(request(name, listing(name), dir / name));
                if (r.status == "success") ++ok;
            }
        });
    }
    for (auto& th : threads) th.join();
    EXPECT_EQ(ok.load(), 24);
    EXPECT_LE(pool.peak_in_use(), 3);
    EXPECT_GE(pool.peak_in_use(), 1);
}

TEST(Render, ValidatesImageAndClearsStaleOutput)
{
    auto dir = fixtures::temp_dir("render");
    HarnessHandle h(kMock, kGrace);
    PlotScript s;
    s.output_filename = "r.jpg";
    s.source = listing("r.jpg");
    auto out = dir / "r.jpg";
    auto oc = render(s, h, 10, out, "r");
    ASSERT_TRUE(oc.success) << oc.stderr_tail;
    ASSERT_TRUE(oc.image_meta);
    EXPECT_EQ(oc.attempts, 1);

    // A worker claiming success without writing a file.
    HarnessHandle liar(shell_worker("\\\"status\\\":\\\"success\\\""), kGrace);
    auto bad = render(s, liar, 10, out, "r2");
    EXPECT_FALSE(bad.success);
    EXPECT_EQ(bad.error_class, ErrorClass::EmptyImage);
    EXPECT_FALSE(fs::exists(out));
}

TEST(RepairLoop, FixesOneFaultPerAttempt)
{
    auto dir = fixtures::temp_dir("repair");
    HarnessHandle h(kMock, kGrace);
    PlotScript s;
    s.output_filename = "f.jpg";
    auto base = listing("f.jpg");
    auto no_pandas = base;
    no_pandas.erase(no_pandas.find("import pandas as pd\n"), 20);
    s.source = "```python\n" + no_pandas + "```\n";
    auto rr = repair_loop(s, h, default_repair_rules(), 3, 10, dir / "f.jpg", "f");
    ASSERT_TRUE(rr.outcome.success) << rr.outcome.stderr_tail;
    EXPECT_EQ(rr.outcome.attempts, 3);
    EXPECT_EQ(rr.outcome.rules_applied, (std::vector<std::string>{"strip_markdown_fences", "add_missing_import"}));
    EXPECT_EQ(rr.final_script.source.find("```"), std::string::npos);

    auto no = repair_loop(s, h, default_repair_rules(), 2, 10, dir / "f.jpg", "g");
    EXPECT_FALSE(no.outcome.success);
    EXPECT_EQ(no.outcome.attempts, 2);

    static const std::vector<RepairRule> none;
    auto off = repair_loop(s, h, none, 3, 10, dir / "f.jpg", "h");
    EXPECT_FALSE(off.outcome.success);
    EXPECT_EQ(off.outcome.attempts, 1);
}
