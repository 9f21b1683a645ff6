#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synchart/core_types.hpp"

namespace synchart {

/// Vocabulary attached to a topic: the noun naming its categories (the index
/// label, e.g. "Genre"), measures used for value axes, and nouns used as
/// row and series labels.
struct TopicLexicon {
    std::string topic;
    std::string category_label;
    std::vector<std::string> measures;
    std::vector<std::string> nouns;
};

/// Static catalogs shipped with the generator.
///
/// File formats (UTF-8, one entry per line, '#' starts a comment line):
///   themes.tsv   topic <TAB> theme
///   lexicon.tsv  topic <TAB> category_label <TAB> measure|measure... <TAB> noun|noun...
///   trends.tsv   trend_id <TAB> family <TAB> type,type... <TAB> key=lo..hi;key=v
class Catalogs {
public:
    std::vector<Theme> themes;
    std::map<std::string, TopicLexicon> lexicon;
    std::vector<TrendTag> trends;
    /// SHA-256 over the three source texts; part of every run's config digest.
    std::string digest;

    const TrendTag* find_trend(std::string_view id) const;
    const TopicLexicon& lexicon_for(const std::string& topic) const;
    std::vector<const TrendTag*> trends_for(ChartType type, int series_length) const;
    std::size_t topic_count() const;

    /// Parses and validates catalog texts; throws Error(CatalogInvalid).
    static Catalogs parse(std::string_view themes_tsv, std::string_view lexicon_tsv, std::string_view trends_tsv);
    /// Catalogs compiled into the binary.
    static std::shared_ptr<const Catalogs> bundled();
    /// Reads themes.tsv, lexicon.tsv and trends.tsv from a directory.
    static std::shared_ptr<const Catalogs> load_dir(const std::filesystem::path& dir);
};

/// Repository asset compiled into the library, keyed by repo-relative path
/// (e.g. "templates/matplotlib/bar.tpl").
std::optional<std::string_view> embedded_asset(std::string_view path);
std::vector<std::string> embedded_asset_paths();
/// Embedded asset or Error(IoFailure).
std::string_view require_asset(std::string_view path);

/// Splits on a delimiter, keeping empty fields.
std::vector<std::string> split(std::string_view text, char delim);
std::string trim(std::string_view text);

}  // namespace synchart
