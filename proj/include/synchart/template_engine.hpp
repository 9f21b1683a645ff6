#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>

namespace synchart {

/// Values for a template. Text is inserted verbatim; booleans drive sections.
using TemplateValue = std::variant<std::string, bool>;
using TemplateContext = std::map<std::string, TemplateValue>;

/// Minimal logic-less template renderer:
///   {{name}}              text value
///   {{#flag}}...{{/flag}} kept when flag is true
///   {{^flag}}...{{/flag}} kept when flag is false
/// A section tag alone on its line removes the whole line. Unknown names and
/// unbalanced sections throw Error(NoTemplate).
std::string render_template(std::string_view tpl, const TemplateContext& ctx);

/// Python string literal (double quoted, escaped).
std::string py_str(std::string_view text);

}  // namespace synchart
