#include "synchart/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "synchart/digest.hpp"
#include "synchart/error.hpp"

namespace synchart {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_assets();
}

std::optional<std::string_view> embedded_asset(std::string_view path)
{
    for (const auto& [name, data] : detail::embedded_assets()) {
        if (name == path) return data;
    }
    return std::nullopt;
}

std::vector<std::string> embedded_asset_paths()
{
    std::vector<std::string> out;
    for (const auto& entry : detail::embedded_assets()) out.emplace_back(entry.first);
    std::sort(out.begin(), out.end());
    return out;
}

std::string_view require_asset(std::string_view path)
{
    auto asset = embedded_asset(path);
    if (!asset) throw Error(ErrorCode::IoFailure, fmt::format("missing embedded asset {}", path));
    return *asset;
}

std::vector<std::string> split(std::string_view text, char delim)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = text.find(delim, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(text.substr(start));
            return out;
        }
        out.emplace_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string trim(std::string_view text)
{
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    return std::string(text.substr(b, e - b));
}

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string> fields;
};

std::vector<Line> tsv_lines(std::string_view text)
{
    std::vector<Line> out;
    std::size_t number = 0;
    for (const auto& raw : split(text, '\n')) {
        ++number;
        std::string line = raw;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line[0] == '#') continue;
        auto fields = split(line, '\t');
        for (auto& f : fields) f = trim(f);
        out.push_back({number, std::move(fields)});
    }
    return out;
}

[[noreturn]] void invalid(std::string_view file, std::size_t line, const std::string& what)
{
    throw Error(ErrorCode::CatalogInvalid, fmt::format("{}:{}: {}", file, line, what));
}

bool has_digit(std::string_view s)
{
    return std::any_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

// Labels end up in CSV, Python string literals and QA text; keep them plain.
void check_label(std::string_view file, std::size_t line, const std::string& label)
{
    if (label.empty()) invalid(file, line, "empty label");
    if (has_digit(label)) invalid(file, line, fmt::format("label '{}' contains a digit", label));
    if (label.find_first_of(",\"'\\") != std::string::npos) {
        invalid(file, line, fmt::format("label '{}' contains a comma, quote or backslash", label));
    }
    std::string lower;
    for (char c : label) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (const auto& word : split(lower, ' ')) {
        if (word == "table" || word == "code") invalid(file, line, fmt::format("label '{}' uses a reserved word", label));
    }
}

ParamRange parse_range(std::string_view file, std::size_t line, const std::string& text)
{
    auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            double v = std::stod(text);
            return {v, v};
        }
        return {std::stod(text.substr(0, dots)), std::stod(text.substr(dots + 2))};
    } catch (const std::exception&) {
        invalid(file, line, fmt::format("bad parameter range '{}'", text));
    }
}

}  // namespace

Catalogs Catalogs::parse(std::string_view themes_tsv, std::string_view lexicon_tsv, std::string_view trends_tsv)
{
    Catalogs c;
    std::set<std::pair<std::string, std::string>> seen_themes;
    for (const auto& line : tsv_lines(themes_tsv)) {
        if (line.fields.size() != 2) invalid("themes.tsv", line.number, "expected topic<TAB>theme");
        Theme theme{line.fields[0], line.fields[1]};
        if (!theme.valid()) invalid("themes.tsv", line.number, "empty field or theme longer than 120 characters");
        if (has_digit(theme.phrase) || theme.phrase.find_first_of("\"\\") != std::string::npos) {
            invalid("themes.tsv", line.number, "theme must not contain digits, double quotes or backslashes");
        }
        if (!seen_themes.emplace(theme.topic, theme.phrase).second) {
            invalid("themes.tsv", line.number, "duplicate theme");
        }
        c.themes.push_back(std::move(theme));
    }

    for (const auto& line : tsv_lines(lexicon_tsv)) {
        if (line.fields.size() != 4) invalid("lexicon.tsv", line.number, "expected 4 tab-separated fields");
        TopicLexicon lex;
        lex.topic = line.fields[0];
        lex.category_label = line.fields[1];
        check_label("lexicon.tsv", line.number, lex.category_label);
        for (auto& m : split(line.fields[2], '|')) {
            m = trim(m);
            check_label("lexicon.tsv", line.number, m);
            lex.measures.push_back(m);
        }
        std::set<std::string> nouns;
        for (auto& n : split(line.fields[3], '|')) {
            n = trim(n);
            check_label("lexicon.tsv", line.number, n);
            if (!nouns.insert(n).second) invalid("lexicon.tsv", line.number, fmt::format("duplicate noun '{}'", n));
            lex.nouns.push_back(n);
        }
        if (lex.nouns.size() < 10 || lex.nouns.size() > 40) {
            invalid("lexicon.tsv", line.number, fmt::format("topic '{}' needs 10-40 nouns", lex.topic));
        }
        if (lex.measures.empty()) invalid("lexicon.tsv", line.number, "at least one measure required");
        if (!c.lexicon.emplace(lex.topic, lex).second) invalid("lexicon.tsv", line.number, "duplicate topic");
    }
    for (const auto& theme : c.themes) {
        if (!c.lexicon.count(theme.topic)) {
            throw Error(ErrorCode::CatalogInvalid, fmt::format("theme topic '{}' has no lexicon entry", theme.topic));
        }
    }

    std::set<std::string> trend_ids;
    for (const auto& line : tsv_lines(trends_tsv)) {
        if (line.fields.size() != 4) invalid("trends.tsv", line.number, "expected 4 tab-separated fields");
        TrendTag tag;
        tag.id = line.fields[0];
        if (!trend_ids.insert(tag.id).second) invalid("trends.tsv", line.number, "duplicate trend id");
        auto family = parse_trend_family(line.fields[1]);
        if (!family) invalid("trends.tsv", line.number, fmt::format("unknown family '{}'", line.fields[1]));
        tag.family = *family;
        for (const auto& t : split(line.fields[2], ',')) {
            auto type = parse_chart_type(trim(t));
            if (!type) invalid("trends.tsv", line.number, fmt::format("unknown chart type '{}'", t));
            if (is_temporal_family(tag.family) && !has_ordered_axis(*type)) {
                invalid("trends.tsv", line.number,
                        fmt::format("family {} needs an ordered axis, {} has none", line.fields[1], to_string(*type)));
            }
            tag.applicable.push_back(*type);
        }
        if (line.fields[3] != "-") {
            for (const auto& kv : split(line.fields[3], ';')) {
                auto eq = kv.find('=');
                if (eq == std::string::npos) invalid("trends.tsv", line.number, fmt::format("bad parameter '{}'", kv));
                tag.params[trim(kv.substr(0, eq))] = parse_range("trends.tsv", line.number, trim(kv.substr(eq + 1)));
            }
        }
        c.trends.push_back(std::move(tag));
    }

    Sha256 h;
    for (auto part : {themes_tsv, lexicon_tsv, trends_tsv}) {
        h.update(sha256_hex(part));
    }
    c.digest = h.hex();
    return c;
}

const TrendTag* Catalogs::find_trend(std::string_view id) const
{
    for (const auto& t : trends) {
        if (t.id == id) return &t;
    }
    return nullptr;
}

const TopicLexicon& Catalogs::lexicon_for(const std::string& topic) const
{
    auto it = lexicon.find(topic);
    if (it == lexicon.end()) throw Error(ErrorCode::CatalogInvalid, fmt::format("no lexicon for topic '{}'", topic));
    return it->second;
}

std::vector<const TrendTag*> Catalogs::trends_for(ChartType type, int series_length) const
{
    std::vector<const TrendTag*> out;
    for (const auto& t : trends) {
        if (t.applies_to(type) && min_series_length(t.family) <= series_length) out.push_back(&t);
    }
    return out;
}

std::size_t Catalogs::topic_count() const
{
    std::set<std::string> topics;
    for (const auto& t : themes) topics.insert(t.topic);
    return topics.size();
}

std::shared_ptr<const Catalogs> Catalogs::bundled()
{
    static const std::shared_ptr<const Catalogs> instance = std::make_shared<const Catalogs>(
        parse(require_asset("assets/themes.tsv"), require_asset("assets/lexicon.tsv"),
              require_asset("assets/trends.tsv")));
    return instance;
}

std::shared_ptr<const Catalogs> Catalogs::load_dir(const std::filesystem::path& dir)
{
    auto read = [&](const char* name) {
        std::ifstream in(dir / name, std::ios::binary);
        if (!in) throw Error(ErrorCode::IoFailure, fmt::format("cannot read {}", (dir / name).string()));
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    return std::make_shared<const Catalogs>(parse(read("themes.tsv"), read("lexicon.tsv"), read("trends.tsv")));
}

}  // namespace synchart
