#pragma once

#include <string>
#include <vector>

#include "synchart/codegen.hpp"

namespace synchart {

/// Static checks every emitted script must pass: inline CSV present, exactly
/// one save call targeting the output filename, no interactive show, no
/// network or filesystem access. Returns problems, empty when clean.
std::vector<std::string> lint_script(const PlotScript& script, const std::string& csv_text);

}  // namespace synchart
