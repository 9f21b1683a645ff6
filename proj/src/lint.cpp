#include "synchart/lint.hpp"

#include <algorithm>
#include <regex>

#include <fmt/format.h>

namespace synchart {

namespace {

// Python source with string literal bodies and comments blanked out, so that
// labels and titles never look like calls.
std::string code_only(const std::string& src)
{
    std::string out = src;
    std::size_t i = 0;
    while (i < out.size()) {
        char c = out[i];
        if (c == '#') {
            while (i < out.size() && out[i] != '\n') out[i++] = ' ';
            continue;
        }
        if (c != '"' && c != '\'') {
            ++i;
            continue;
        }
        bool triple = i + 2 < out.size() && out[i + 1] == c && out[i + 2] == c;
        std::size_t quote_len = triple ? 3 : 1;
        std::size_t j = i + quote_len;
        while (j < out.size()) {
            if (out[j] == '\\') {
                j += 2;
                continue;
            }
            if (!triple && out[j] == '\n') break;
            if (out[j] == c && (!triple || (j + 2 < out.size() && out[j + 1] == c && out[j + 2] == c))) break;
            ++j;
        }
        std::size_t end = std::min(j, out.size());
        for (std::size_t k = i + quote_len; k < end; ++k) {
            if (out[k] != '\n') out[k] = ' ';
        }
        i = std::min(out.size(), end + (end < out.size() ? quote_len : 0));
    }
    return out;
}

}  // namespace

std::vector<std::string> lint_script(const PlotScript& script, const std::string& csv_text)
{
    static const std::regex save_call(R"((?:savefig|write_image|\.save)\s*\()");
    static const std::regex save_target(R"((?:savefig|write_image|\.save)\s*\(\s*(['"])([^'"]*)\1)");
    static const std::regex show_call(R"(\.show\s*\()");
    static const std::regex literal_read(R"(read_csv\s*\(\s*[rbf]?['"])");
    static const std::vector<std::pair<std::string, std::regex>> forbidden = {
        {"socket", std::regex(R"(\bsocket\b)")},
        {"urllib", std::regex(R"(\burllib\b)")},
        {"requests", std::regex(R"(\brequests\b)")},
        {"http.client", std::regex(R"(\bhttp\.client\b)")},
        {"open(", std::regex(R"(\bopen\s*\()")},
        {"os.system", std::regex(R"(\bos\.system\b)")},
        {"subprocess", std::regex(R"(\bsubprocess\b)")},
        {"shutil", std::regex(R"(\bshutil\b)")},
        {"to_csv(", std::regex(R"(\bto_csv\s*\()")},
        {"eval(", std::regex(R"(\beval\s*\()")},
        {"exec(", std::regex(R"(\bexec\s*\()")},
        {"__import__", std::regex(R"(__import__)")},
    };

    const std::string& src = script.source;
    const std::string code = code_only(src);
    std::vector<std::string> problems;
    if (csv_text.empty() || src.find(csv_text) == std::string::npos) {
        problems.emplace_back("data table is not embedded verbatim");
    }
    const auto saves = std::distance(std::sregex_iterator(code.begin(), code.end(), save_call), std::sregex_iterator());
    if (saves != 1) {
        problems.push_back(fmt::format("expected exactly one save call, found {}", saves));
    } else {
        std::smatch m;
        if (!std::regex_search(src, m, save_target) || m[2].str() != script.output_filename) {
            problems.push_back(fmt::format("save call does not target '{}'", script.output_filename));
        }
    }
    if (std::regex_search(code, show_call)) problems.emplace_back("interactive show call");
    if (std::regex_search(src, literal_read)) problems.emplace_back("reads data from a file path");
    for (const auto& [name, re] : forbidden) {
        if (std::regex_search(code, re)) problems.push_back(fmt::format("forbidden call or module: {}", name));
    }
    return problems;
}

}  // namespace synchart
