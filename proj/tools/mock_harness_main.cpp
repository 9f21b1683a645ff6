// Stand-in render worker speaking the harness protocol on stdin/stdout.
//
// It does not run Python. It screens the script for the failure patterns a
// real interpreter would hit, then draws a bar raster from the embedded CSV
// and writes it as a JPEG at out_path.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <thread>
#include <unistd.h>

#include <fmt/format.h>

#include "synchart/catalog.hpp"
#include "synchart/data_table.hpp"
#include "synchart/error.hpp"
#include "synchart/harness.hpp"
#include "synchart/image.hpp"

namespace {

using synchart::ErrorClass;
using synchart::HarnessRequest;
using synchart::HarnessResponse;

struct Outcome {
    std::string stderr_text;  // empty on success
    bool timed_out = false;
};

bool contains(const std::string& s, std::string_view needle) { return s.find(needle) != std::string::npos; }

struct Alias {
    const char* name;
    std::regex use;
    std::regex import;
};

const std::vector<Alias>& aliases()
{
    static const std::vector<Alias> table = [] {
        std::vector<Alias> t;
        auto add = [&](const char* name, const char* import) {
            t.push_back({name, std::regex(fmt::format(R"((^|[^\w.]){}\.)", name)), std::regex(import)});
        };
        add("np", R"(import numpy as np)");
        add("pd", R"(import pandas as pd)");
        add("plt", R"(import matplotlib\.pyplot as plt)");
        add("sns", R"(import seaborn as sns)");
        add("go", R"(import plotly\.graph_objects as go)");
        add("px", R"(import plotly\.express as px)");
        add("io", R"((^|\n)\s*import io\b)");
        add("math", R"((^|\n)\s*import math\b)");
        return t;
    }();
    return table;
}

std::optional<std::string> embedded_csv(const std::string& code)
{
    static const std::regex re(R"re(csv_data\s*=\s*"""\n?([\s\S]*?)""")re");
    std::smatch m;
    if (!std::regex_search(code, m, re)) return std::nullopt;
    return m[1].str();
}

std::pair<int, int> canvas_size(const std::string& code)
{
    std::smatch m;
    static const std::regex figsize(R"(figsize\s*=\s*\(\s*([\d.]+)\s*,\s*([\d.]+)\s*\))");
    static const std::regex dpi_re(R"(dpi\s*=\s*(\d+))");
    if (std::regex_search(code, m, figsize)) {
        double dpi = 100;
        std::smatch d;
        if (std::regex_search(code, d, dpi_re)) dpi = std::stod(d[1].str());
        return {static_cast<int>(std::stod(m[1].str()) * dpi), static_cast<int>(std::stod(m[2].str()) * dpi)};
    }
    static const std::regex width(R"(width\s*=\s*(\d+))");
    static const std::regex height(R"(height\s*=\s*(\d+))");
    std::smatch w, h;
    if (std::regex_search(code, w, width) && std::regex_search(code, h, height)) {
        return {std::stoi(w[1].str()), std::stoi(h[1].str())};
    }
    return {640, 480};
}

Outcome draw(const std::string& code, const std::string& out_path)
{
    auto csv = embedded_csv(code);
    if (!csv) return {"ValueError: no data to plot"};
    synchart::DataTable table;
    try {
        table = synchart::DataTable::from_csv(*csv);
    } catch (const synchart::Error& e) {
        return {fmt::format("pandas.errors.ParserError: {}", e.what())};
    }
    auto [w, h] = canvas_size(code);
    w = std::clamp(w, 64, 4000);
    h = std::clamp(h, 64, 4000);
    synchart::Raster raster(w, h);
    std::vector<double> values;
    for (const auto& row : table.cells) {
        for (const auto& c : row) values.push_back(std::abs(c.to_double()));
    }
    if (values.empty()) return {"ValueError: no numeric data to plot"};
    double top = *std::max_element(values.begin(), values.end());
    if (top <= 0) top = 1;
    static const std::uint32_t colors[] = {0x4E79A7, 0xF28E2B, 0xE15759, 0x76B7B2, 0x59A14F, 0xEDC948};
    int margin = std::max(4, w / 20);
    int plot_w = w - 2 * margin;
    int plot_h = h - 2 * margin;
    double slot = static_cast<double>(plot_w) / static_cast<double>(values.size());
    raster.fill_rect(margin, h - margin, w - margin, h - margin + 2, 0x000000);
    for (std::size_t i = 0; i < values.size(); ++i) {
        int x0 = margin + static_cast<int>(slot * static_cast<double>(i));
        int x1 = std::max(x0 + 1, margin + static_cast<int>(slot * (static_cast<double>(i) + 0.8)));
        int bar = std::max(1, static_cast<int>(values[i] / top * plot_h));
        raster.fill_rect(x0, h - margin - bar, x1, h - margin, colors[i % 6]);
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) return {fmt::format("PermissionError: cannot write {}", out_path)};
    out << synchart::encode_jpeg(raster);
    return {};
}

Outcome screen(const HarnessRequest& req)
{
    const std::string& code = req.code;
    std::smatch m;
    if (synchart::trim(code).empty()) return {"Error: empty script"};
    if (contains(code, "```")) return {"SyntaxError: invalid syntax"};
    static const std::regex raise_re(R"(raise\s+(\w+)\(\s*['"]([^'"]*)['"]\s*\))");
    if (std::regex_search(code, m, raise_re)) return {fmt::format("{}: {}", m[1].str(), m[2].str())};
    if (contains(code, "os._exit(")) {
        std::cout.flush();
        std::_Exit(3);
    }
    if (contains(code, "while True")) {
        std::this_thread::sleep_for(std::chrono::duration<double>(req.timeout_s));
        return {"subprocess.TimeoutExpired: script exceeded its time limit", true};
    }
    static const std::regex sleep_re(R"(time\.sleep\(\s*([\d.]+)\s*\))");
    if (std::regex_search(code, m, sleep_re)) {
        double s = std::stod(m[1].str());
        if (s >= req.timeout_s) {
            std::this_thread::sleep_for(std::chrono::duration<double>(req.timeout_s));
            return {"subprocess.TimeoutExpired: script exceeded its time limit", true};
        }
        std::this_thread::sleep_for(std::chrono::duration<double>(s));
    }
    static const std::regex net_re(R"((^|\n)\s*(import|from)\s+(socket|urllib|requests|http\.client)\b)");
    if (std::regex_search(code, net_re)) return {"SandboxViolation: network access denied"};
    for (const auto& a : aliases()) {
        if (std::regex_search(code, a.use) && !std::regex_search(code, a.import)) {
            return {fmt::format("NameError: name '{}' is not defined", a.name)};
        }
    }
    static const std::regex kwarg_re(R"(\b(normed|hold)\s*=)");
    if (std::regex_search(code, m, kwarg_re)) {
        return {fmt::format("TypeError: plot() got an unexpected keyword argument '{}'", m[1].str())};
    }
    static const std::regex path_re(R"(read_csv\(\s*['"]([^'"]+)['"])");
    if (std::regex_search(code, m, path_re)) {
        return {fmt::format("FileNotFoundError: [Errno 2] No such file or directory: '{}'", m[1].str())};
    }
    if (contains(code, ".show(")) return {"SandboxViolation: interactive display is not available"};
    auto target = std::filesystem::path(req.out_path).filename().string();
    static const std::regex save_re(R"((savefig|write_image|\.save)\(\s*['"]([^'"]+)['"])");
    bool saved = false;
    for (auto it = std::sregex_iterator(code.begin(), code.end(), save_re); it != std::sregex_iterator(); ++it) {
        if (std::filesystem::path((*it)[2].str()).filename().string() == target) saved = true;
    }
    if (!saved) return {"OSError: cannot identify image file: no image written"};
    return draw(code, req.out_path);
}

}  // namespace

int main()
{
    std::signal(SIGPIPE, SIG_IGN);
    std::ios::sync_with_stdio(false);
    const auto& classifier = synchart::ErrorClassifier::bundled();
    std::string line;
    while (std::getline(std::cin, line)) {
        if (synchart::trim(line).empty()) continue;
        HarnessRequest req;
        try {
            req = synchart::decode_request(line);
        } catch (const synchart::Error& e) {
            std::cerr << "mock-harness: dropping malformed request: " << e.what() << "\n";
            continue;
        }
        auto start = std::chrono::steady_clock::now();
        Outcome out = screen(req);
        HarnessResponse resp;
        resp.id = req.id;
        resp.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                           .count();
        if (out.stderr_text.empty()) {
            resp.status = "success";
            resp.image_path = req.out_path;
        } else {
            resp.status = "failure";
            resp.error_class = out.timed_out ? ErrorClass::Timeout : classifier.classify(out.stderr_text);
            resp.stderr_tail = synchart::tail_bytes(out.stderr_text);
        }
        std::cout << synchart::encode_response(resp) << "\n";
        std::cout.flush();
    }
    return 0;
}
