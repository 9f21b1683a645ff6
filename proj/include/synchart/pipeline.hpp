#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "synchart/backend.hpp"
#include "synchart/dataset_io.hpp"
#include "synchart/record.hpp"
#include "synchart/sampler.hpp"
#include "synchart/table_synth.hpp"

namespace synchart {

struct RunConfig {
    std::uint64_t count = 1;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir;
    std::string backend = "template";
    std::string llm_endpoint;
    std::optional<std::set<EngineId>> engines;
    std::optional<std::set<ChartType>> chart_types;
    int workers = 1;
    std::uint64_t shard_size = 100;
    double timeout_s = 30.0;
    int max_repairs = 2;
    std::vector<std::string> harness_command;  // empty: default_harness_command()
    SynthOptions synth;
    bool repairs_enabled = true;
    /// Stops after this many shards were written in this run (for crash tests).
    std::optional<std::uint64_t> stop_after_shards;

    /// Throws ConfigInvalid or EmptyDomain.
    void validate() const;
    GenConfig gen_config() const;
    /// Digest of everything that changes record content; worker count and
    /// paths are excluded.
    std::string digest(const Catalogs& catalogs) const;
};

struct EngineTally {
    std::uint64_t attempted = 0;
    std::uint64_t succeeded = 0;
};

struct RunSummary {
    std::uint64_t attempted = 0;
    std::uint64_t succeeded = 0;
    std::uint64_t rejected = 0;
    std::uint64_t shards_skipped = 0;
    std::map<std::string, EngineTally> per_engine;
    std::map<int, std::uint64_t> repair_histogram;  // attempts -> records
    double wall_s = 0.0;
    double stage_s = 0.0;   // CPU stages summed over workers
    double render_s = 0.0;  // render wall time summed over workers
    double records_per_s = 0.0;
    int peak_in_flight = 0;

    nlohmann::json to_json() const;
};

struct RunResult {
    Manifest manifest;
    RunSummary summary;
};

/// Generates `count` records (index i uses derive_record_seed(seed, i)),
/// renders them on a pool of `workers` harness processes, writes shards,
/// rejects, the manifest and run_summary.json. Completed shards of an
/// earlier run with the same config are kept.
RunResult run_generate(const RunConfig& config);

/// Stages 1 to 3 for one index, without rendering: spec, table,
/// descriptions, code and QA. The image reference is filled in but the
/// file is not produced.
DatasetRecord draft_record(std::uint64_t base_seed, std::uint64_t index, const GenConfig& gen, TextGenBackend& backend,
                           const SynthOptions& synth = {});

/// SYNCHART_HARNESS if set, else the mock harness installed beside the
/// running executable.
std::vector<std::string> default_harness_command();

}  // namespace synchart
