// synchart: generate, verify and summarize chart datasets.
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "synchart/dataset_io.hpp"
#include "synchart/error.hpp"
#include "synchart/pipeline.hpp"
#include "synchart/subprocess.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitInfra = 2;
// A run whose rejects exceed this share of attempts counts as a data failure.
constexpr double kMaxRejectShare = 0.05;

template <class T, class Parse>
std::set<T> parse_list(const std::string& text, Parse parse, const char* what)
{
    std::set<T> out;
    for (const auto& part : synchart::split(text, ',')) {
        auto id = synchart::trim(part);
        if (id.empty()) continue;
        auto v = parse(id);
        if (!v) throw synchart::Error(synchart::ErrorCode::ConfigInvalid, fmt::format("unknown {} '{}'", what, id));
        out.insert(*v);
    }
    return out;
}

int exit_code_for(const synchart::Error& e)
{
    using synchart::ErrorCode;
    switch (e.code()) {
    case ErrorCode::DigestMismatch:
    case ErrorCode::ParseError:
        return kExitData;
    default:
        return kExitInfra;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Synthetic chart dataset generator"};
    app.require_subcommand(1);

    synchart::RunConfig config;
    std::string out_dir, engines, types, harness;
    bool no_repairs = false;
    auto* gen = app.add_subcommand("generate", "Generate records, render images and write shards");
    gen->add_option("--count", config.count, "Records to attempt")->required();
    gen->add_option("--seed", config.seed, "Base seed")->required();
    gen->add_option("--out", out_dir, "Output directory")->required();
    gen->add_option("--backend", config.backend, "template or llm")->check(CLI::IsMember({"template", "llm"}));
    gen->add_option("--llm-endpoint", config.llm_endpoint, "Text-generation endpoint URL");
    gen->add_option("--engines", engines, "Comma-separated engines to allow");
    gen->add_option("--chart-types", types, "Comma-separated chart types to allow");
    gen->add_option("--workers", config.workers, "Harness pool size");
    gen->add_option("--shard-size", config.shard_size, "Records per shard");
    gen->add_option("--timeout-s", config.timeout_s, "Per-render timeout in seconds");
    gen->add_option("--max-repairs", config.max_repairs, "Repair attempts after the first render");
    gen->add_option("--noise", config.synth.noise_level, "Relative noise added to trend shapes");
    gen->add_flag("--no-repairs", no_repairs, "Disable the repair loop");
    gen->add_option("--harness", harness, "Harness worker command (default: SYNCHART_HARNESS or the mock)");

    std::string dir;
    bool as_json = false;
    auto* verify = app.add_subcommand("verify", "Re-validate every record, answer and image");
    verify->add_option("dir", dir, "Dataset directory")->required();
    verify->add_flag("--json", as_json, "Print the report as JSON");
    auto* stats = app.add_subcommand("stats", "Print the dataset card");
    stats->add_option("dir", dir, "Dataset directory")->required();
    stats->add_flag("--json", as_json, "Print JSON instead of a table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInfra;
    }

    try {
        if (*gen) {
            config.out_dir = out_dir;
            config.repairs_enabled = !no_repairs;
            if (!engines.empty()) {
                config.engines = parse_list<synchart::EngineId>(engines, synchart::parse_engine, "engine");
            }
            if (!types.empty()) {
                config.chart_types = parse_list<synchart::ChartType>(types, synchart::parse_chart_type, "chart type");
            }
            if (!harness.empty()) config.harness_command = synchart::split_command(harness);
            auto result = synchart::run_generate(config);
            const auto& s = result.summary;
            std::cout << s.to_json().dump(2) << "\n";
            if (s.attempted > 0 && static_cast<double>(s.rejected) > kMaxRejectShare * static_cast<double>(s.attempted)) {
                return kExitData;
            }
            return kExitOk;
        }
        if (*verify) {
            auto report = synchart::verify_dataset(dir);
            if (as_json) {
                nlohmann::json failures = nlohmann::json::array();
                for (const auto& f : report.failures) {
                    failures.push_back(
                        {{"record_id", f.record_id}, {"shard", f.shard_id}, {"code", f.code}, {"detail", f.detail}});
                }
                std::cout << nlohmann::json{{"records", report.records},
                                            {"qa_items", report.qa_items},
                                            {"images", report.images},
                                            {"failures", failures}}
                                 .dump(2)
                          << "\n";
            } else {
                for (const auto& f : report.failures) {
                    std::cout << fmt::format("FAIL shard {:05} record {} {}: {}\n", f.shard_id,
                                             f.record_id.empty() ? "-" : f.record_id, f.code, f.detail);
                }
                std::cout << fmt::format("{} records, {} QA items, {} images, {} failures\n", report.records,
                                         report.qa_items, report.images, report.failures.size());
            }
            return report.ok() ? kExitOk : kExitData;
        }
        if (*stats) {
            auto card = synchart::stats_report(dir);
            std::cout << (as_json ? card.to_json().dump(2) + "\n" : card.to_text());
            return kExitOk;
        }
    } catch (const synchart::Error& e) {
        std::cerr << "synchart: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "synchart: " << e.what() << "\n";
        return kExitInfra;
    }
    return kExitOk;
}
