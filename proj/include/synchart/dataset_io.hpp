#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "synchart/record.hpp"

namespace synchart {

/// Annotation totals mirroring the dataset-card rows.
struct DatasetCard {
    std::uint64_t images = 0;
    std::uint64_t data_tables = 0;
    std::uint64_t code = 0;
    std::uint64_t descriptions = 0;
    std::uint64_t simple_qa = 0;
    std::uint64_t complex_qa = 0;
    std::uint64_t invalid_records = 0;
    std::map<std::string, std::uint64_t> per_chart_type;
    std::map<std::string, std::uint64_t> per_engine;

    void add(const DatasetRecord& record, bool valid);
    /// Per-image density; nullopt for an empty dataset.
    std::optional<double> density(std::uint64_t total) const;
    nlohmann::json to_json() const;
    static DatasetCard from_json(const nlohmann::json& j);
    std::string to_text() const;
    friend bool operator==(const DatasetCard&, const DatasetCard&) = default;
};

struct ShardInfo {
    std::uint64_t shard_id = 0;
    std::string path;  // relative to the dataset root
    std::uint64_t records = 0;
    std::uint64_t rejects = 0;
    std::uint64_t byte_size = 0;  // canonical bytes
    std::string digest;           // SHA-256 over canonical lines
    friend bool operator==(const ShardInfo&, const ShardInfo&) = default;
};

struct Manifest {
    std::string generator_version;
    std::string config_digest;
    std::uint64_t base_seed = 0;
    std::uint64_t first_index = 0;
    std::uint64_t count = 0;
    std::uint64_t shard_size = 0;
    std::vector<ShardInfo> shards;
    DatasetCard stats;

    std::uint64_t total_records() const;
    nlohmann::json to_json() const;
    static Manifest from_json(const nlohmann::json& j);
};

/// out/shards/NNNNN.jsonl, its NNNNN.meta.json sidecar, out/rejects/NNNNN.jsonl,
/// out/images/<record_id>.jpg, out/manifest.json.
std::filesystem::path shard_file(const std::filesystem::path& root, std::uint64_t shard_id);
std::filesystem::path sidecar_file(const std::filesystem::path& root, std::uint64_t shard_id);
std::filesystem::path reject_file(const std::filesystem::path& root, std::uint64_t shard_id);
std::filesystem::path manifest_file(const std::filesystem::path& root);
std::filesystem::path image_file(const std::filesystem::path& root, const std::string& record_id);
std::string image_rel_path(const std::string& record_id);

/// Canonical bytes of a record list and their digest.
ShardInfo describe_shard(std::uint64_t shard_id, const std::vector<DatasetRecord>& records);

/// Writes the shard and rejects through a staging file and rename, then the
/// sidecar. Throws IoFailure.
ShardInfo write_shard(const std::filesystem::path& root, std::uint64_t shard_id,
                      const std::vector<DatasetRecord>& records, const std::vector<nlohmann::json>& rejects,
                      std::string_view config_digest);

/// A finished shard from an earlier run: its sidecar info when the shard
/// bytes still hash to the recorded digest, nullopt when the shard or
/// sidecar is missing. Throws DigestMismatch on corruption and ConfigInvalid
/// when the shard belongs to another config.
std::optional<ShardInfo> completed_shard(const std::filesystem::path& root, std::uint64_t shard_id,
                                         std::string_view config_digest);

std::vector<DatasetRecord> read_shard(const std::filesystem::path& path);

/// Atomic write (temp file + rename).
void write_text_atomic(const std::filesystem::path& path, std::string_view text);
void write_manifest(const std::filesystem::path& root, const Manifest& manifest);
Manifest read_manifest(const std::filesystem::path& root);

/// Writes records in shards of shard_size (images are expected in place)
/// and a manifest; returns the manifest.
Manifest write_records(const std::vector<DatasetRecord>& records, const std::filesystem::path& root,
                       std::uint64_t shard_size, std::uint64_t base_seed = 0);

/// Dataset card recomputed by streaming every shard.
DatasetCard stats_report(const std::filesystem::path& root);

struct VerifyFailure {
    std::string record_id;
    std::uint64_t shard_id = 0;
    std::string code;
    std::string detail;
};

struct VerifyReport {
    std::uint64_t records = 0;
    std::uint64_t qa_items = 0;
    std::uint64_t images = 0;
    std::vector<VerifyFailure> failures;
    bool ok() const { return failures.empty(); }
    std::uint64_t count(const std::string& code) const;
};

/// Re-runs record validation, answer verification and image validation over
/// every record. Throws IoFailure when the manifest is unreadable.
VerifyReport verify_dataset(const std::filesystem::path& root);

}  // namespace synchart
