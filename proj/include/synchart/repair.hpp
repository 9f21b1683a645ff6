#pragma once

#include <functional>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "synchart/harness.hpp"

namespace synchart {

struct RepairContext {
    std::string output_filename;
};

/// Fires when the outcome's class matches and the pattern is found in the
/// stderr tail; the rewrite returns nullopt when it has nothing to change.
struct RepairRule {
    std::string id;
    ErrorClass error_class = ErrorClass::Other;
    std::regex pattern;
    std::function<std::optional<std::string>(const std::string& source, const std::smatch& match,
                                             const RepairContext& ctx)>
        rewrite;
};

/// Shipped catalog, in priority order:
///   strip_markdown_fences  syntax            ``` fence lines
///   add_missing_import     missing_symbol    NameError on a known alias
///   drop_removed_kwarg     missing_symbol    unexpected keyword 'normed'/'hold'
///   remove_show_call       sandbox_violation interactive display
///   remove_network_access  sandbox_violation network access
///   fix_output_target      empty_image       no image written
///   inline_csv_source      other             FileNotFoundError on read_csv
const std::vector<RepairRule>& default_repair_rules();

struct AppliedRepair {
    std::string rule_id;
    std::string source;
};

/// First matching rule that changes the source; at most one fires.
std::optional<AppliedRepair> apply_repair(const std::vector<RepairRule>& rules, ErrorClass error_class,
                                          const std::string& stderr_tail, const std::string& source,
                                          const RepairContext& ctx);

}  // namespace synchart
