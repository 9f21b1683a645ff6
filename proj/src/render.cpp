#include "synchart/render.hpp"

#include <system_error>

#include <fmt/format.h>

namespace synchart {

RenderOutcome render(const PlotScript& script, HarnessHandle& harness, double timeout_s,
                     const std::filesystem::path& out_path, const std::string& request_id)
{
    std::error_code ec;
    std::filesystem::remove(out_path, ec);

    HarnessRequest req;
    req.id = request_id;
    req.engine = std::string(to_string(script.engine));
    req.code = script.source;
    req.timeout_s = timeout_s;
    req.out_path = std::filesystem::absolute(out_path).string();

    HarnessResponse resp = harness.call(req);
    RenderOutcome out;
    out.attempts = 1;
    out.wall_ms = resp.wall_ms;
    if (resp.status != "success") {
        out.error_class = resp.error_class == ErrorClass::None ? ErrorClass::Other : resp.error_class;
        out.stderr_tail = resp.stderr_tail;
        return out;
    }
    ImageCheck check = validate_image_file(out_path);
    if (!check.meta) {
        out.error_class = ErrorClass::EmptyImage;
        out.stderr_tail = fmt::format("cannot identify image file: {}", check.problem);
        std::filesystem::remove(out_path, ec);
        return out;
    }
    out.success = true;
    out.error_class = ErrorClass::None;
    out.image_meta = check.meta;
    return out;
}

RepairResult repair_loop(PlotScript script, HarnessHandle& harness, const std::vector<RepairRule>& rules,
                         int max_attempts, double timeout_s, const std::filesystem::path& out_path,
                         const std::string& request_id)
{
    RepairResult result;
    std::vector<std::string> applied;
    std::int64_t wall = 0;
    const RepairContext ctx{script.output_filename};
    for (int attempt = 1;; ++attempt) {
        RenderOutcome outcome = render(script, harness, timeout_s, out_path, fmt::format("{}#{}", request_id, attempt));
        wall += outcome.wall_ms;
        outcome.attempts = attempt;
        outcome.wall_ms = wall;
        outcome.rules_applied = applied;
        if (outcome.success || attempt >= max_attempts) {
            result.outcome = std::move(outcome);
            break;
        }
        auto fix = apply_repair(rules, outcome.error_class, outcome.stderr_tail, script.source, ctx);
        if (!fix) {
            result.outcome = std::move(outcome);
            break;
        }
        applied.push_back(fix->rule_id);
        script.source = std::move(fix->source);
    }
    result.final_script = std::move(script);
    return result;
}

}  // namespace synchart
