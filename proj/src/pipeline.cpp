#include "synchart/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "synchart/codegen.hpp"
#include "synchart/describe.hpp"
#include "synchart/digest.hpp"
#include "synchart/error.hpp"
#include "synchart/harness.hpp"
#include "synchart/qa_synth.hpp"
#include "synchart/render.hpp"
#include "synchart/repair.hpp"
#include "synchart/rng.hpp"
#include "synchart/subprocess.hpp"
#include "synchart/validate.hpp"

namespace synchart {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

void RunConfig::validate() const
{
    auto invalid = [](const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); };
    if (count == 0) invalid("count must be positive");
    if (out_dir.empty()) invalid("out_dir is required");
    if (workers < 1) invalid("workers must be at least 1");
    if (shard_size == 0) invalid("shard_size must be positive");
    if (!(timeout_s > 0.0)) invalid("timeout_s must be positive");
    if (max_repairs < 0) invalid("max_repairs must not be negative");
    if (backend != "template" && backend != "llm") invalid(fmt::format("unknown backend '{}'", backend));
    if (backend == "llm" && llm_endpoint.empty()) invalid("the llm backend needs an endpoint");
    if (synth.noise_level < 0.0 || synth.noise_level > 1.0) invalid("noise level must be in [0, 1]");
    gen_config().validate();
}

GenConfig RunConfig::gen_config() const
{
    GenConfig g = GenConfig::defaults();
    g.allow_engines = engines;
    g.allow_types = chart_types;
    return g;
}

std::string RunConfig::digest(const Catalogs& catalogs) const
{
    json engines_json = nullptr;
    if (engines) {
        engines_json = json::array();
        for (auto e : *engines) engines_json.push_back(std::string(to_string(e)));
    }
    json types_json = nullptr;
    if (chart_types) {
        types_json = json::array();
        for (auto t : *chart_types) types_json.push_back(std::string(to_string(t)));
    }
    json j{{"generator_version", generator_version()},
           {"count", count},
           {"seed", seed},
           {"backend", backend},
           {"llm_endpoint", llm_endpoint},
           {"engines", engines_json},
           {"chart_types", types_json},
           {"shard_size", shard_size},
           {"timeout_s", timeout_s},
           {"max_repairs", max_repairs},
           {"repairs_enabled", repairs_enabled},
           {"noise_level", synth.noise_level},
           {"inject_outliers", synth.inject_outliers},
           {"max_backend_attempts", synth.max_backend_attempts},
           {"catalogs", catalogs.digest}};
    return sha256_hex(j.dump());
}

json RunSummary::to_json() const
{
    json engines = json::object();
    for (const auto& [k, v] : per_engine) engines[k] = json{{"attempted", v.attempted}, {"succeeded", v.succeeded}};
    json hist = json::object();
    for (const auto& [k, v] : repair_histogram) hist[std::to_string(k)] = v;
    return json{{"attempted", attempted},
                {"succeeded", succeeded},
                {"rejected", rejected},
                {"shards_skipped", shards_skipped},
                {"per_engine", std::move(engines)},
                {"repair_histogram", std::move(hist)},
                {"wall_s", wall_s},
                {"stage_s", stage_s},
                {"render_s", render_s},
                {"records_per_s", records_per_s},
                {"peak_in_flight", peak_in_flight}};
}

DatasetRecord draft_record(std::uint64_t base_seed, std::uint64_t index, const GenConfig& gen, TextGenBackend& backend,
                           const SynthOptions& synth_options)
{
    const std::uint64_t seed = derive_record_seed(base_seed, index);
    DatasetRecord r;
    r.spec = sample_chart_spec(seed, gen);
    SynthesizedTable synth = synth_table(r.spec, *gen.catalogs, backend, synth_options);
    r.table = synth.table;
    r.data_description = gen_data_description(r.spec, synth, backend);
    std::string llm_description;
    r.code = gen_code(r.spec, r.table, synth.measure, backend, &llm_description);
    r.chart_description =
        llm_description.empty() ? gen_chart_description(r.spec, synth, r.code, backend) : llm_description;

    const QAContext ctx = infer_context(r.table, r.spec.chart_type, synth.col_kind);
    r.simple_qa = gen_simple_qa(r.table, ctx, seed, target_simple_count(seed));
    r.complex_qa = gen_complex_qa(r.table, ctx, seed, target_complex_count(seed));

    r.image.path = image_rel_path(r.spec.record_id);
    r.provenance.index = index;
    r.provenance.backend = backend.id();
    r.provenance.generator_version = generator_version();
    r.provenance.outliers = synth.outliers;
    r.provenance.measure = synth.measure;
    r.provenance.col_kind = synth.col_kind;
    return r;
}

std::vector<std::string> default_harness_command()
{
    if (const char* env = std::getenv("SYNCHART_HARNESS"); env && *env) return split_command(env);
    std::error_code ec;
    fs::path self = fs::read_symlink("/proc/self/exe", ec);
    if (!ec) {
        fs::path sibling = self.parent_path() / "synchart-mock-harness";
        if (fs::exists(sibling)) return {sibling.string()};
    }
    return {"synchart-mock-harness"};
}

namespace {

struct Outcome {
    std::optional<DatasetRecord> record;
    json reject;
    int attempts = 0;
    double stage_s = 0.0;
    double render_s = 0.0;
};

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

json reject_entry(std::uint64_t index, const std::string& record_id, const std::string& stage, const std::string& cls,
                  const std::string& detail)
{
    return json{{"index", index}, {"record_id", record_id}, {"stage", stage}, {"error_class", cls}, {"detail", detail}};
}

Outcome produce(std::uint64_t index, const RunConfig& config, const GenConfig& gen, TextGenBackend& backend,
                HarnessPool& pool)
{
    Outcome out;
    const auto t0 = Clock::now();
    DatasetRecord record;
    try {
        record = draft_record(config.seed, index, gen, backend, config.synth);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::HarnessUnavailable) throw;
        out.stage_s = seconds_since(t0);
        out.reject = reject_entry(index, record_id_for_seed(derive_record_seed(config.seed, index)), "draft",
                                  std::string(to_string(e.code())), e.what());
        return out;
    }
    out.stage_s = seconds_since(t0);

    static const std::vector<RepairRule> kNoRules;
    const auto& rules = config.repairs_enabled ? default_repair_rules() : kNoRules;
    const fs::path image = image_file(config.out_dir, record.spec.record_id);
    const auto t1 = Clock::now();
    RepairResult rr;
    {
        auto lease = pool.lease();
        rr = repair_loop(record.code, *lease, rules, config.max_repairs + 1, config.timeout_s, image,
                         record.spec.record_id);
    }
    out.render_s = seconds_since(t1);
    out.attempts = rr.outcome.attempts;
    const auto& oc = rr.outcome;
    if (!oc.success) {
        json j = reject_entry(index, record.spec.record_id, "render", std::string(to_string(oc.error_class)),
                              oc.stderr_tail);
        j["engine"] = std::string(to_string(record.spec.engine));
        j["chart_type"] = std::string(to_string(record.spec.chart_type));
        j["attempts"] = oc.attempts;
        j["repair_rules"] = oc.rules_applied;
        out.reject = std::move(j);
        return out;
    }
    record.code = rr.final_script;
    record.image.meta = *oc.image_meta;
    record.provenance.repair_attempts = oc.attempts;
    record.provenance.repair_rules = oc.rules_applied;
    record.provenance.wall_ms = static_cast<std::int64_t>(seconds_since(t0) * 1000.0);

    ValidationReport report = validate_record(record);
    if (!report.ok()) {
        std::error_code ec;
        fs::remove(image, ec);
        out.reject = reject_entry(index, record.spec.record_id, "validate", report.violations.front().code,
                                  report.violations.front().detail);
        out.reject["engine"] = std::string(to_string(record.spec.engine));
        out.reject["chart_type"] = std::string(to_string(record.spec.chart_type));
        return out;
    }
    out.record = std::move(record);
    return out;
}

}  // namespace

RunResult run_generate(const RunConfig& config)
{
    config.validate();
    const auto t_start = Clock::now();
    const GenConfig gen = config.gen_config();
    const std::string cfg_digest = config.digest(*gen.catalogs);
    auto backend = make_backend(config.backend, config.llm_endpoint);

    std::error_code ec;
    for (const char* sub : {"shards", "rejects", "images", ".staging"}) {
        fs::create_directories(config.out_dir / sub, ec);
        if (ec) throw Error(ErrorCode::IoFailure, fmt::format("cannot create {}: {}", sub, ec.message()));
    }

    RunResult result;
    Manifest& m = result.manifest;
    RunSummary& summary = result.summary;
    m.generator_version = generator_version();
    m.config_digest = cfg_digest;
    m.base_seed = config.seed;
    m.count = config.count;
    m.shard_size = config.shard_size;

    std::unique_ptr<HarnessPool> pool;
    const auto harness = config.harness_command.empty() ? default_harness_command() : config.harness_command;
    const std::uint64_t n_shards = (config.count + config.shard_size - 1) / config.shard_size;
    std::uint64_t written = 0;

    for (std::uint64_t shard = 0; shard < n_shards; ++shard) {
        if (auto done = completed_shard(config.out_dir, shard, cfg_digest)) {
            ++summary.shards_skipped;
            m.shards.push_back(*done);
            for (const auto& r : read_shard(config.out_dir / done->path)) m.stats.add(r, true);
            continue;
        }
        if (!pool) pool = std::make_unique<HarnessPool>(harness, config.workers);

        const std::uint64_t first = shard * config.shard_size;
        const std::uint64_t last = std::min(config.count, first + config.shard_size);
        std::vector<Outcome> outcomes(last - first);
        std::atomic<std::uint64_t> next{first};
        std::exception_ptr failure;
        std::mutex failure_mu;
        auto work = [&] {
            while (true) {
                const std::uint64_t i = next.fetch_add(1);
                if (i >= last) return;
                try {
                    outcomes[i - first] = produce(i, config, gen, *backend, *pool);
                } catch (...) {
                    std::lock_guard lock(failure_mu);
                    if (!failure) failure = std::current_exception();
                    next.store(last);
                    return;
                }
            }
        };
        std::vector<std::thread> threads;
        for (int k = 0; k < config.workers; ++k) threads.emplace_back(work);
        for (auto& t : threads) t.join();
        if (failure) std::rethrow_exception(failure);

        std::vector<DatasetRecord> records;
        std::vector<json> rejects;
        for (auto& o : outcomes) {
            ++summary.attempted;
            summary.stage_s += o.stage_s;
            summary.render_s += o.render_s;
            std::string engine = o.record ? std::string(to_string(o.record->spec.engine))
                                          : o.reject.value("engine", std::string("unknown"));
            ++summary.per_engine[engine].attempted;
            if (o.record) {
                ++summary.succeeded;
                ++summary.per_engine[engine].succeeded;
                ++summary.repair_histogram[o.attempts];
                m.stats.add(*o.record, true);
                records.push_back(std::move(*o.record));
            } else {
                ++summary.rejected;
                rejects.push_back(std::move(o.reject));
            }
        }
        m.shards.push_back(write_shard(config.out_dir, shard, records, rejects, cfg_digest));
        ++written;
        if (config.stop_after_shards && written >= *config.stop_after_shards) {
            summary.wall_s = seconds_since(t_start);
            return result;
        }
    }
    fs::remove_all(config.out_dir / ".staging", ec);
    write_manifest(config.out_dir, m);

    summary.wall_s = seconds_since(t_start);
    summary.records_per_s = summary.wall_s > 0 ? static_cast<double>(summary.succeeded) / summary.wall_s : 0.0;
    summary.peak_in_flight = pool ? pool->peak_in_use() : 0;
    write_text_atomic(config.out_dir / "run_summary.json", summary.to_json().dump(2) + "\n");
    return result;
}

}  // namespace synchart
