#include "synchart/repair.hpp"

#include <array>

#include <fmt/format.h>

namespace synchart {

namespace {

std::optional<std::string> changed(const std::string& before, std::string after)
{
    if (after == before) return std::nullopt;
    return after;
}

std::string drop_lines(const std::string& source, const std::regex& re)
{
    std::string out;
    std::size_t start = 0;
    while (start < source.size()) {
        auto end = source.find('\n', start);
        std::string line = source.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (!std::regex_search(line, re)) {
            out += line;
            if (end != std::string::npos) out += '\n';
        }
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

std::string with_import(const std::string& source, const std::string& import_text)
{
    if (source.find(import_text) != std::string::npos) return source;
    return import_text + "\n" + source;
}

std::optional<std::string> strip_fences(const std::string& source, const std::smatch&, const RepairContext&)
{
    static const std::regex fence(R"(^\s*```)");
    return changed(source, drop_lines(source, fence));
}

std::optional<std::string> add_import(const std::string& source, const std::smatch& m, const RepairContext&)
{
    static const std::array<std::pair<std::string_view, std::string_view>, 8> kAliases = {{
        {"np", "import numpy as np"},
        {"pd", "import pandas as pd"},
        {"plt", "import matplotlib\nmatplotlib.use(\"Agg\")\nimport matplotlib.pyplot as plt"},
        {"sns", "import seaborn as sns"},
        {"go", "import plotly.graph_objects as go"},
        {"px", "import plotly.express as px"},
        {"io", "import io"},
        {"math", "import math"},
    }};
    const std::string name = m[1].str();
    for (const auto& [alias, text] : kAliases) {
        if (alias == name) return changed(source, with_import(source, std::string(text)));
    }
    return std::nullopt;
}

std::optional<std::string> drop_kwarg(const std::string& source, const std::smatch& m, const RepairContext&)
{
    const std::string kw = m[1].str();
    // ", kw=value" or "kw=value, " with a simple value.
    const std::regex after(fmt::format(R"(,\s*{}\s*=\s*[^,()]+)", kw));
    const std::regex before(fmt::format(R"(\b{}\s*=\s*[^,()]+,\s*)", kw));
    const std::regex alone(fmt::format(R"(\b{}\s*=\s*[^,()]+)", kw));
    std::string out = std::regex_replace(source, after, "");
    out = std::regex_replace(out, before, "");
    out = std::regex_replace(out, alone, "");
    return changed(source, out);
}

std::optional<std::string> remove_show(const std::string& source, const std::smatch&, const RepairContext&)
{
    static const std::regex show(R"(^\s*[\w.]*\.show\s*\([^)]*\)\s*(#.*)?$)");
    return changed(source, drop_lines(source, show));
}

std::optional<std::string> remove_network(const std::string& source, const std::smatch&, const RepairContext&)
{
    static const std::regex net(
        R"(^\s*(import|from)\s+(socket|urllib|requests|http\.client)\b|^[^"'#]*\b(socket|urllib|requests|http\.client)\.)");
    return changed(source, drop_lines(source, net));
}

std::optional<std::string> fix_target(const std::string& source, const std::smatch&, const RepairContext& ctx)
{
    static const std::regex target(R"(((?:savefig|write_image|\.save)\s*\(\s*)(['"])[^'"]*\2)");
    static const std::regex any_save(R"((?:savefig|write_image|\.save)\s*\()");
    if (std::regex_search(source, any_save)) {
        return changed(source, std::regex_replace(source, target, "$1\"" + ctx.output_filename + "\""));
    }
    std::string line;
    if (source.find("plotly") != std::string::npos) {
        line = fmt::format("fig.write_image(\"{}\", format=\"jpg\")", ctx.output_filename);
    } else if (source.find("bokeh") != std::string::npos) {
        line = fmt::format("get_screenshot_as_png(p).convert(\"RGB\").save(\"{}\", format=\"JPEG\")",
                           ctx.output_filename);
    } else {
        line = fmt::format("plt.savefig(\"{}\", format=\"jpg\")", ctx.output_filename);
    }
    std::string out = source;
    if (!out.empty() && out.back() != '\n') out += '\n';
    return out + line + "\n";
}

std::optional<std::string> inline_csv(const std::string& source, const std::smatch&, const RepairContext&)
{
    static const std::regex literal(R"(read_csv\(\s*[rb]?(['"])[^'"]*\1)");
    if (source.find("csv_data") == std::string::npos) return std::nullopt;
    std::string out = std::regex_replace(source, literal, "read_csv(io.StringIO(csv_data)");
    if (out == source) return std::nullopt;
    return with_import(out, "import io");
}

}  // namespace

const std::vector<RepairRule>& default_repair_rules()
{
    static const std::vector<RepairRule> kRules = {
        {"strip_markdown_fences", ErrorClass::Syntax, std::regex("SyntaxError"), strip_fences},
        {"add_missing_import", ErrorClass::MissingSymbol, std::regex(R"(NameError: name '(\w+)' is not defined)"),
         add_import},
        {"drop_removed_kwarg", ErrorClass::MissingSymbol, std::regex(R"(unexpected keyword argument '(normed|hold)')"),
         drop_kwarg},
        {"remove_show_call", ErrorClass::SandboxViolation, std::regex("interactive display"), remove_show},
        {"remove_network_access", ErrorClass::SandboxViolation, std::regex("network access denied"), remove_network},
        {"fix_output_target", ErrorClass::EmptyImage, std::regex("no image written"), fix_target},
        {"inline_csv_source", ErrorClass::Other, std::regex(R"(FileNotFoundError)"), inline_csv},
    };
    return kRules;
}

std::optional<AppliedRepair> apply_repair(const std::vector<RepairRule>& rules, ErrorClass error_class,
                                          const std::string& stderr_tail, const std::string& source,
                                          const RepairContext& ctx)
{
    for (const auto& rule : rules) {
        if (rule.error_class != error_class) continue;
        std::smatch m;
        if (!std::regex_search(stderr_tail, m, rule.pattern)) continue;
        auto out = rule.rewrite(source, m, ctx);
        if (out && *out != source) return AppliedRepair{rule.id, std::move(*out)};
    }
    return std::nullopt;
}

}  // namespace synchart
