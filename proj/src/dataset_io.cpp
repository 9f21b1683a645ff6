#include "synchart/dataset_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "synchart/digest.hpp"
#include "synchart/error.hpp"
#include "synchart/record_json.hpp"
#include "synchart/validate.hpp"

namespace synchart {

namespace fs = std::filesystem;
using nlohmann::json;

void DatasetCard::add(const DatasetRecord& r, bool valid)
{
    if (!r.image.path.empty()) ++images;
    ++data_tables;
    if (!r.code.source.empty()) ++code;
    descriptions += (r.data_description.empty() ? 0 : 1) + (r.chart_description.empty() ? 0 : 1);
    simple_qa += r.simple_qa.size();
    complex_qa += r.complex_qa.size();
    if (!valid) ++invalid_records;
    ++per_chart_type[std::string(to_string(r.spec.chart_type))];
    ++per_engine[std::string(to_string(r.spec.engine))];
}

std::optional<double> DatasetCard::density(std::uint64_t total) const
{
    if (images == 0) return std::nullopt;
    return static_cast<double>(total) / static_cast<double>(images);
}

json DatasetCard::to_json() const
{
    return json{{"images", images},
                {"data_tables", data_tables},
                {"code", code},
                {"descriptions", descriptions},
                {"simple_qa", simple_qa},
                {"complex_qa", complex_qa},
                {"invalid_records", invalid_records},
                {"per_chart_type", per_chart_type},
                {"per_engine", per_engine}};
}

DatasetCard DatasetCard::from_json(const json& j)
{
    DatasetCard c;
    try {
        c.images = j.at("images").get<std::uint64_t>();
        c.data_tables = j.at("data_tables").get<std::uint64_t>();
        c.code = j.at("code").get<std::uint64_t>();
        c.descriptions = j.at("descriptions").get<std::uint64_t>();
        c.simple_qa = j.at("simple_qa").get<std::uint64_t>();
        c.complex_qa = j.at("complex_qa").get<std::uint64_t>();
        c.invalid_records = j.at("invalid_records").get<std::uint64_t>();
        c.per_chart_type = j.at("per_chart_type").get<std::map<std::string, std::uint64_t>>();
        c.per_engine = j.at("per_engine").get<std::map<std::string, std::uint64_t>>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, fmt::format("dataset card: {}", e.what()));
    }
    return c;
}

std::string DatasetCard::to_text() const
{
    auto per = [&](std::uint64_t n) {
        auto d = density(n);
        return d ? fmt::format("{:.2f}", *d) : std::string("-");
    };
    std::string out = fmt::format("{:<16}{:>12}{:>12}\n", "annotation", "count", "per image");
    out += fmt::format("{:<16}{:>12}{:>12}\n", "images", images, "");
    out += fmt::format("{:<16}{:>12}{:>12}\n", "data tables", data_tables, per(data_tables));
    out += fmt::format("{:<16}{:>12}{:>12}\n", "code", code, per(code));
    out += fmt::format("{:<16}{:>12}{:>12}\n", "descriptions", descriptions, per(descriptions));
    out += fmt::format("{:<16}{:>12}{:>12}\n", "simple QA", simple_qa, per(simple_qa));
    out += fmt::format("{:<16}{:>12}{:>12}\n", "complex QA", complex_qa, per(complex_qa));
    out += fmt::format("{:<16}{:>12}\n", "invalid", invalid_records);
    out += "\nchart types\n";
    for (const auto& [k, v] : per_chart_type) out += fmt::format("  {:<14}{:>12}\n", k, v);
    out += "\nengines\n";
    for (const auto& [k, v] : per_engine) out += fmt::format("  {:<14}{:>12}\n", k, v);
    return out;
}

std::uint64_t Manifest::total_records() const
{
    std::uint64_t n = 0;
    for (const auto& s : shards) n += s.records;
    return n;
}

namespace {

json shard_json(const ShardInfo& s)
{
    return json{{"shard_id", s.shard_id}, {"path", s.path},           {"records", s.records},
                {"rejects", s.rejects},   {"byte_size", s.byte_size}, {"digest", s.digest}};
}

ShardInfo shard_from(const json& j)
{
    ShardInfo s;
    s.shard_id = j.at("shard_id").get<std::uint64_t>();
    s.path = j.at("path").get<std::string>();
    s.records = j.at("records").get<std::uint64_t>();
    s.rejects = j.at("rejects").get<std::uint64_t>();
    s.byte_size = j.at("byte_size").get<std::uint64_t>();
    s.digest = j.at("digest").get<std::string>();
    return s;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, fmt::format("cannot read {}", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

}  // namespace

json Manifest::to_json() const
{
    json shard_list = json::array();
    for (const auto& s : shards) shard_list.push_back(shard_json(s));
    return json{{"generator_version", generator_version},
                {"config_digest", config_digest},
                {"seed_range", json{{"base_seed", base_seed}, {"first_index", first_index}, {"count", count}}},
                {"shard_size", shard_size},
                {"shards", std::move(shard_list)},
                {"stats", stats.to_json()}};
}

Manifest Manifest::from_json(const json& j)
{
    Manifest m;
    try {
        m.generator_version = j.at("generator_version").get<std::string>();
        m.config_digest = j.at("config_digest").get<std::string>();
        const json& range = j.at("seed_range");
        m.base_seed = range.at("base_seed").get<std::uint64_t>();
        m.first_index = range.at("first_index").get<std::uint64_t>();
        m.count = range.at("count").get<std::uint64_t>();
        m.shard_size = j.at("shard_size").get<std::uint64_t>();
        for (const auto& s : j.at("shards")) m.shards.push_back(shard_from(s));
        m.stats = DatasetCard::from_json(j.at("stats"));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, fmt::format("manifest: {}", e.what()));
    }
    return m;
}

fs::path shard_file(const fs::path& root, std::uint64_t id)
{
    return root / "shards" / fmt::format("{:05}.jsonl", id);
}

fs::path sidecar_file(const fs::path& root, std::uint64_t id)
{
    return root / "shards" / fmt::format("{:05}.meta.json", id);
}

fs::path reject_file(const fs::path& root, std::uint64_t id)
{
    return root / "rejects" / fmt::format("{:05}.jsonl", id);
}

fs::path manifest_file(const fs::path& root)
{
    return root / "manifest.json";
}

fs::path image_file(const fs::path& root, const std::string& record_id)
{
    return root / image_rel_path(record_id);
}

std::string image_rel_path(const std::string& record_id)
{
    return fmt::format("images/{}.jpg", record_id);
}

ShardInfo describe_shard(std::uint64_t shard_id, const std::vector<DatasetRecord>& records)
{
    ShardInfo info;
    info.shard_id = shard_id;
    info.path = fmt::format("shards/{:05}.jsonl", shard_id);
    info.records = records.size();
    Sha256 h;
    for (const auto& r : records) {
        std::string line = canonical_line(r) + "\n";
        info.byte_size += line.size();
        h.update(line);
    }
    info.digest = h.hex();
    return info;
}

void write_text_atomic(const fs::path& path, std::string_view text)
{
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoFailure, fmt::format("cannot write {}", tmp.string()));
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.flush();
        if (!out) throw Error(ErrorCode::IoFailure, fmt::format("short write to {}", tmp.string()));
    }
    fs::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::IoFailure, fmt::format("cannot rename {}: {}", tmp.string(), ec.message()));
}

namespace {

void write_staged(const fs::path& root, const fs::path& final_path, std::string_view text)
{
    const fs::path staging = root / ".staging";
    std::error_code ec;
    fs::create_directories(staging, ec);
    fs::create_directories(final_path.parent_path(), ec);
    const fs::path tmp = staging / final_path.filename();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoFailure, fmt::format("cannot write {}", tmp.string()));
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.flush();
        if (!out) throw Error(ErrorCode::IoFailure, fmt::format("short write to {}", tmp.string()));
    }
    fs::rename(tmp, final_path, ec);
    if (ec) throw Error(ErrorCode::IoFailure, fmt::format("cannot move {}: {}", tmp.string(), ec.message()));
}

}  // namespace

ShardInfo write_shard(const fs::path& root, std::uint64_t shard_id, const std::vector<DatasetRecord>& records,
                      const std::vector<json>& rejects, std::string_view config_digest)
{
    ShardInfo info = describe_shard(shard_id, records);
    info.rejects = rejects.size();

    std::string body;
    for (const auto& r : records) body += record_line(r) + "\n";
    std::string reject_body;
    for (const auto& r : rejects) reject_body += r.dump() + "\n";

    // Sidecar last: its presence marks the shard as complete.
    std::error_code ec;
    fs::remove(sidecar_file(root, shard_id), ec);
    write_staged(root, shard_file(root, shard_id), body);
    if (rejects.empty()) {
        fs::remove(reject_file(root, shard_id), ec);
    } else {
        write_staged(root, reject_file(root, shard_id), reject_body);
    }
    json side = shard_json(info);
    side["config_digest"] = std::string(config_digest);
    write_staged(root, sidecar_file(root, shard_id), side.dump(2) + "\n");
    return info;
}

std::vector<DatasetRecord> read_shard(const fs::path& path)
{
    std::vector<DatasetRecord> out;
    for (const auto& line : lines_of(read_file(path))) out.push_back(parse_record_line(line));
    return out;
}

std::optional<ShardInfo> completed_shard(const fs::path& root, std::uint64_t shard_id, std::string_view config_digest)
{
    const fs::path side = sidecar_file(root, shard_id);
    const fs::path shard = shard_file(root, shard_id);
    if (!fs::exists(side) || !fs::exists(shard)) return std::nullopt;
    json meta;
    try {
        meta = json::parse(read_file(side));
    } catch (const json::exception&) {
        return std::nullopt;
    }
    if (meta.value("config_digest", std::string()) != config_digest) {
        throw Error(ErrorCode::ConfigInvalid,
                    fmt::format("shard {} was written with a different configuration", shard_id));
    }
    ShardInfo recorded = shard_from(meta);
    std::vector<DatasetRecord> records;
    try {
        records = read_shard(shard);
    } catch (const Error& e) {
        throw Error(ErrorCode::DigestMismatch, fmt::format("shard {} is unreadable: {}", shard_id, e.what()));
    }
    ShardInfo actual = describe_shard(shard_id, records);
    if (actual.digest != recorded.digest || actual.records != recorded.records) {
        throw Error(ErrorCode::DigestMismatch, fmt::format("shard {} does not match its recorded digest", shard_id));
    }
    return recorded;
}

void write_manifest(const fs::path& root, const Manifest& manifest)
{
    write_text_atomic(manifest_file(root), manifest.to_json().dump(2) + "\n");
}

Manifest read_manifest(const fs::path& root)
{
    std::string text = read_file(manifest_file(root));
    try {
        return Manifest::from_json(json::parse(text));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::IoFailure, fmt::format("manifest is not JSON: {}", e.what()));
    } catch (const Error& e) {
        throw Error(ErrorCode::IoFailure, e.what());
    }
}

Manifest write_records(const std::vector<DatasetRecord>& records, const fs::path& root, std::uint64_t shard_size,
                       std::uint64_t base_seed)
{
    if (shard_size == 0) throw Error(ErrorCode::ConfigInvalid, "shard_size must be positive");
    Manifest m;
    m.generator_version = generator_version();
    m.base_seed = base_seed;
    m.count = records.size();
    m.shard_size = shard_size;
    for (std::uint64_t start = 0, id = 0; start < records.size(); start += shard_size, ++id) {
        auto end = std::min<std::uint64_t>(records.size(), start + shard_size);
        std::vector<DatasetRecord> chunk(records.begin() + static_cast<std::ptrdiff_t>(start),
                                         records.begin() + static_cast<std::ptrdiff_t>(end));
        m.shards.push_back(write_shard(root, id, chunk, {}, m.config_digest));
        for (const auto& r : chunk) m.stats.add(r, validate_record(r).ok());
    }
    write_manifest(root, m);
    return m;
}

DatasetCard stats_report(const fs::path& root)
{
    Manifest m = read_manifest(root);
    DatasetCard card;
    for (const auto& s : m.shards) {
        for (const auto& r : read_shard(root / s.path)) card.add(r, validate_record(r).ok());
    }
    return card;
}

std::uint64_t VerifyReport::count(const std::string& code) const
{
    std::uint64_t n = 0;
    for (const auto& f : failures) n += f.code == code ? 1 : 0;
    return n;
}

VerifyReport verify_dataset(const fs::path& root)
{
    Manifest m = read_manifest(root);
    VerifyReport report;
    for (const auto& s : m.shards) {
        std::vector<DatasetRecord> records;
        try {
            records = read_shard(root / s.path);
        } catch (const Error& e) {
            report.failures.push_back({"", s.shard_id, "SHARD_UNREADABLE", e.what()});
            continue;
        }
        ShardInfo actual = describe_shard(s.shard_id, records);
        if (actual.digest != s.digest || actual.records != s.records) {
            report.failures.push_back({"", s.shard_id, "SHARD_DIGEST", s.path});
        }
        for (const auto& r : records) {
            ++report.records;
            report.qa_items += r.simple_qa.size() + r.complex_qa.size();
            for (const auto& v : validate_record(r).violations) {
                report.failures.push_back({r.spec.record_id, s.shard_id, v.code, v.detail});
            }
            ImageCheck img = validate_image_file(root / r.image.path);
            if (!img.meta) {
                report.failures.push_back({r.spec.record_id, s.shard_id, "IMAGE_INVALID", img.problem});
                continue;
            }
            ++report.images;
            if (img.meta->width != r.image.meta.width || img.meta->height != r.image.meta.height ||
                img.meta->bytes != r.image.meta.bytes) {
                report.failures.push_back({r.spec.record_id, s.shard_id, "IMAGE_MISMATCH", r.image.path});
            }
        }
    }
    if (report.records != m.total_records()) {
        report.failures.push_back(
            {"", 0, "RECORD_COUNT", fmt::format("manifest lists {}, shards hold {}", m.total_records(), report.records)});
    }
    return report;
}

}  // namespace synchart
