#include "synchart/template_engine.hpp"

#include <optional>
#include <vector>

#include <fmt/format.h>

#include "synchart/error.hpp"

namespace synchart {

namespace {

struct Tag {
    std::size_t begin;  // position of "{{"
    std::size_t end;    // one past "}}"
    char kind;          // 0 for a value, or '#', '^', '/'
    std::string name;
};

std::optional<Tag> next_tag(std::string_view tpl, std::size_t from)
{
    auto b = tpl.find("{{", from);
    if (b == std::string_view::npos) return std::nullopt;
    auto e = tpl.find("}}", b + 2);
    if (e == std::string_view::npos) throw Error(ErrorCode::NoTemplate, "unterminated tag");
    std::string body(tpl.substr(b + 2, e - b - 2));
    char kind = 0;
    if (!body.empty() && (body[0] == '#' || body[0] == '^' || body[0] == '/')) {
        kind = body[0];
        body.erase(0, 1);
    }
    return Tag{b, e + 2, kind, body};
}

// Expands a section tag alone on its line to cover the whole line.
void widen_standalone(std::string_view tpl, Tag& tag)
{
    std::size_t line_start = tag.begin;
    while (line_start > 0 && (tpl[line_start - 1] == ' ' || tpl[line_start - 1] == '\t')) --line_start;
    if (line_start > 0 && tpl[line_start - 1] != '\n') return;
    std::size_t line_end = tag.end;
    while (line_end < tpl.size() && (tpl[line_end] == ' ' || tpl[line_end] == '\t')) ++line_end;
    if (line_end < tpl.size() && tpl[line_end] != '\n') return;
    tag.begin = line_start;
    tag.end = line_end < tpl.size() ? line_end + 1 : line_end;
}

const TemplateValue& lookup(const TemplateContext& ctx, const std::string& name)
{
    auto it = ctx.find(name);
    if (it == ctx.end()) throw Error(ErrorCode::NoTemplate, fmt::format("no value for '{}'", name));
    return it->second;
}

std::string render_range(std::string_view tpl, std::size_t& pos, const TemplateContext& ctx,
                         const std::string& closing)
{
    std::string out;
    while (true) {
        auto tag = next_tag(tpl, pos);
        if (!tag) {
            if (!closing.empty()) throw Error(ErrorCode::NoTemplate, fmt::format("section '{}' not closed", closing));
            out.append(tpl.substr(pos));
            pos = tpl.size();
            return out;
        }
        if (tag->kind) widen_standalone(tpl, *tag);
        out.append(tpl.substr(pos, tag->begin - pos));
        pos = tag->end;
        if (tag->kind == '/') {
            if (tag->name != closing) {
                throw Error(ErrorCode::NoTemplate, fmt::format("unexpected close of '{}'", tag->name));
            }
            return out;
        }
        const TemplateValue& value = lookup(ctx, tag->name);
        if (tag->kind == 0) {
            if (!std::holds_alternative<std::string>(value)) {
                throw Error(ErrorCode::NoTemplate, fmt::format("'{}' is a flag, not text", tag->name));
            }
            out += std::get<std::string>(value);
            continue;
        }
        if (!std::holds_alternative<bool>(value)) {
            throw Error(ErrorCode::NoTemplate, fmt::format("'{}' is text, not a flag", tag->name));
        }
        const bool keep = std::get<bool>(value) == (tag->kind == '#');
        std::string inner = render_range(tpl, pos, ctx, tag->name);
        if (keep) out += inner;
    }
}

}  // namespace

std::string render_template(std::string_view tpl, const TemplateContext& ctx)
{
    std::size_t pos = 0;
    return render_range(tpl, pos, ctx, "");
}

std::string py_str(std::string_view text)
{
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '"': out += "\\\""; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    return out + "\"";
}

}  // namespace synchart
