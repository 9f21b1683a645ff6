#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "synchart/codegen.hpp"
#include "synchart/harness.hpp"
#include "synchart/image.hpp"
#include "synchart/repair.hpp"

namespace synchart {

struct RenderOutcome {
    bool success = false;
    ErrorClass error_class = ErrorClass::Other;
    std::string stderr_tail;
    std::optional<ImageMeta> image_meta;
    std::int64_t wall_ms = 0;
    int attempts = 0;
    std::vector<std::string> rules_applied;
};

/// Runs one script on a worker; on success the image at out_path has passed
/// validate_image. Script failures come back as outcomes; only transport
/// failures throw (HarnessUnavailable).
RenderOutcome render(const PlotScript& script, HarnessHandle& harness, double timeout_s,
                     const std::filesystem::path& out_path, const std::string& request_id);

struct RepairResult {
    RenderOutcome outcome;
    PlotScript final_script;
};

/// Render, and on failure apply at most one rule and retry, up to
/// max_attempts renders in total.
RepairResult repair_loop(PlotScript script, HarnessHandle& harness, const std::vector<RepairRule>& rules,
                         int max_attempts, double timeout_s, const std::filesystem::path& out_path,
                         const std::string& request_id);

}  // namespace synchart
