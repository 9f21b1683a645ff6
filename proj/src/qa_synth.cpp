#include "synchart/qa_synth.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "synchart/error.hpp"
#include "synchart/oracle.hpp"
#include "synchart/rng.hpp"

namespace synchart {

namespace {

constexpr std::array<std::string_view, 12> kMonthNames = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                          "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

bool is_year(const std::string& s)
{
    return s.size() == 4 && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

constexpr std::array<std::string_view, 12> kMonthFullNames = {"January", "February", "March",     "April",
                                                              "May",     "June",     "July",      "August",
                                                              "September", "October", "November", "December"};

bool is_month(const std::string& s)
{
    return std::find(kMonthNames.begin(), kMonthNames.end(), s) != kMonthNames.end() ||
           std::find(kMonthFullNames.begin(), kMonthFullNames.end(), s) != kMonthFullNames.end();
}

std::string lower(std::string s)
{
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

bool labels_temporal(const std::vector<std::string>& labels)
{
    if (labels.empty()) return false;
    return std::all_of(labels.begin(), labels.end(), is_year) || std::all_of(labels.begin(), labels.end(), is_month);
}

QAContext infer_context(const DataTable& table, ChartType type, const std::string& col_kind)
{
    QAContext ctx;
    ctx.chart_type = type;
    ctx.row_kind = lower(table.index_label);
    ctx.col_kind = col_kind.empty() ? "series" : col_kind;
    ctx.rows_temporal = labels_temporal(table.index);
    ctx.cols_temporal = labels_temporal(table.series_labels);
    ctx.cols_are_measures = ctx.col_kind == "measure";
    return ctx;
}

int target_simple_count(std::uint64_t seed)
{
    CounterRng rng(seed, "qa-count");
    return static_cast<int>(rng.range(16, kSimpleMax));
}

int target_complex_count(std::uint64_t seed)
{
    CounterRng rng(seed, "qa-count");
    rng.next();
    return static_cast<int>(rng.range(4, kComplexMax));
}

std::size_t token_count(const std::string& text)
{
    std::istringstream in(text);
    std::size_t n = 0;
    std::string tok;
    while (in >> tok) ++n;
    return n;
}

namespace {

// Phrase naming one cell, matched to what the axes mean.
std::string cell_phrase(const CellRef& c, const QAContext& ctx)
{
    if (ctx.cols_are_measures) return fmt::format("the {} of {}", c.col, c.row);
    if (ctx.rows_temporal) return fmt::format("{} in {}", c.col, c.row);
    if (ctx.cols_temporal) return fmt::format("{} in {}", c.row, c.col);
    if (ctx.chart_type == ChartType::Radar) return fmt::format("{} on the {} axis", c.row, c.col);
    return fmt::format("{} for {}", c.col, c.row);
}

// Qualifier for all values along one row or column, e.g. "in 2015" or "for Rock".
std::string line_phrase(Axis axis, const std::string& label, const QAContext& ctx)
{
    if (axis == Axis::Col) {
        if (ctx.cols_are_measures) return fmt::format("for the {}", label);
        if (ctx.cols_temporal) return fmt::format("in {}", label);
        if (ctx.chart_type == ChartType::Radar) return fmt::format("on the {} axis", label);
        return fmt::format("for {}", label);
    }
    if (ctx.rows_temporal) return fmt::format("in {}", label);
    return fmt::format("for {}", label);
}

const std::string& kind_of(Axis axis, const QAContext& ctx)
{
    return axis == Axis::Row ? ctx.row_kind : ctx.col_kind;
}

bool axis_temporal(Axis axis, const QAContext& ctx)
{
    return axis == Axis::Row ? ctx.rows_temporal : ctx.cols_temporal;
}

std::string join_values(const std::vector<Decimal>& v, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += v[i].str();
    }
    return out;
}

std::size_t position(const DataTable& t, Axis axis, const std::string& label)
{
    const auto& labels = line_labels(t, axis);
    return static_cast<std::size_t>(std::find(labels.begin(), labels.end(), label) - labels.begin());
}

std::string difference_question(const OracleProgram& p, const DataTable& t, const QAContext& ctx,
                                std::uint64_t phrasing)
{
    const bool same_col = p.a.col == p.b.col;
    const bool same_row = p.a.row == p.b.row;
    if ((same_col && ctx.rows_temporal) || (same_row && ctx.cols_temporal)) {
        const Axis along = same_col ? Axis::Row : Axis::Col;
        const std::string& subject = same_col ? p.a.col : p.a.row;
        const std::string& a_pos = same_col ? p.a.row : p.a.col;
        const std::string& b_pos = same_col ? p.b.row : p.b.col;
        const std::string who = ctx.cols_are_measures ? fmt::format("the {}", subject) : subject;
        if (position(t, along, a_pos) > position(t, along, b_pos)) {
            return fmt::format("By how much did {} increase from {} to {}?", who, b_pos, a_pos);
        }
        return fmt::format("By how much did {} decrease from {} to {}?", who, a_pos, b_pos);
    }
    if (phrasing % 2) {
        return fmt::format("What is the difference between {} and {}?", cell_phrase(p.a, ctx),
                           cell_phrase(p.b, ctx));
    }
    return fmt::format("How much higher is {} than {}?", cell_phrase(p.a, ctx), cell_phrase(p.b, ctx));
}

std::string simple_question(const OracleProgram& p, const QAContext& ctx, std::uint64_t phrasing)
{
    const bool alt = phrasing % 2;
    switch (p.op) {
    case OracleOp::CellLookup:
        return alt ? fmt::format("What value does the chart show for {}?", cell_phrase(p.a, ctx))
                   : fmt::format("What is the value of {}?", cell_phrase(p.a, ctx));
    case OracleOp::ColMax:
        return fmt::format("What is the highest value recorded {}?", line_phrase(Axis::Col, p.line, ctx));
    case OracleOp::ColMin:
        return fmt::format("What is the lowest value recorded {}?", line_phrase(Axis::Col, p.line, ctx));
    case OracleOp::RowMax:
        return fmt::format("What is the highest value recorded {}?", line_phrase(Axis::Row, p.line, ctx));
    case OracleOp::RowMin:
        return fmt::format("What is the lowest value recorded {}?", line_phrase(Axis::Row, p.line, ctx));
    case OracleOp::ArgmaxLabel:
        return fmt::format("Which {} has the highest value {}?", kind_of(other_axis(p.axis), ctx),
                           line_phrase(p.axis, p.line, ctx));
    case OracleOp::ArgminLabel:
        return fmt::format("Which {} has the lowest value {}?", kind_of(other_axis(p.axis), ctx),
                           line_phrase(p.axis, p.line, ctx));
    case OracleOp::CountAbove:
        return fmt::format("How many {} entries {} have a value greater than {}?", kind_of(other_axis(p.axis), ctx),
                           line_phrase(p.axis, p.line, ctx), p.threshold ? p.threshold->str() : "0");
    case OracleOp::LargestDeclineLabel:
        return fmt::format("Which {} shows the largest decrease from {} to {}?", kind_of(p.axis, ctx), p.from_line,
                           p.to_line);
    default:
        break;
    }
    throw Error(ErrorCode::UnresolvableReference, "not a simple operation");
}

Decimal cell_value(const DataTable& t, const CellRef& c)
{
    OracleProgram p;
    p.a = c;
    return evaluate(p, t).number;
}

std::string two_decimals_note(const Decimal& exact_num, const Decimal& den, const Decimal& rounded)
{
    // Flag rounding only when it actually happened.
    return Decimal::divide(exact_num, den, 8) == rounded ? "" : ", rounded to two decimals";
}

void complex_text(QAItem& item, const OracleProgram& p, const DataTable& t, const QAContext& ctx,
                  const Derivation& d, std::uint64_t phrasing)
{
    const std::string ans = d.value.str();
    switch (p.op) {
    case OracleOp::Difference: {
        const Decimal va = cell_value(t, p.a);
        const Decimal vb = cell_value(t, p.b);
        item.question = difference_question(p, t, ctx, phrasing);
        item.reasoning = {
            fmt::format("The chart gives {} as {} and {} as {}.", cell_phrase(p.a, ctx), va.str(),
                        cell_phrase(p.b, ctx), vb.str()),
            fmt::format("Subtracting gives {} - {} = {}.", va.str(), vb.str(), ans),
            fmt::format("The difference is {}.", ans),
        };
        return;
    }
    case OracleOp::Sum:
    case OracleOp::Mean: {
        auto values = line_values(t, p.axis, p.line);
        const std::string where = line_phrase(p.axis, p.line, ctx);
        const std::string listed = join_values(values, ", ");
        const Decimal total = d.intermediates.at(0);
        if (p.op == OracleOp::Sum) {
            item.question = phrasing % 2 ? fmt::format("What is the sum of all values {}?", where)
                                         : fmt::format("What is the total of the values {}?", where);
            item.reasoning = {
                fmt::format("The values {} are {}.", where, listed),
                fmt::format("Adding them gives {} = {}.", join_values(values, " + "), ans),
                fmt::format("The total is {}.", ans),
            };
        } else {
            const Decimal n = d.intermediates.at(1);
            item.question = phrasing % 2 ? fmt::format("What is the mean of the values {}?", where)
                                         : fmt::format("What is the average value {}?", where);
            item.reasoning = {
                fmt::format("The values {} are {}.", where, listed),
                fmt::format("Their sum is {} = {}, and {} / {} = {}{}.", join_values(values, " + "), total.str(),
                            total.str(), n.str(), ans, two_decimals_note(total, n, d.value.number)),
                fmt::format("The average is {}.", ans),
            };
        }
        return;
    }
    case OracleOp::PercentChange: {
        const Decimal va = cell_value(t, p.a);
        const Decimal vb = cell_value(t, p.b);
        item.question = fmt::format("What is the percentage change from {} to {}?", cell_phrase(p.a, ctx),
                                    cell_phrase(p.b, ctx));
        item.reasoning = {
            fmt::format("The starting value, {}, is {} and the ending value, {}, is {}.", cell_phrase(p.a, ctx),
                        va.str(), cell_phrase(p.b, ctx), vb.str()),
            fmt::format("The change is ({} - {}) / {} * 100 = {}{}.", vb.str(), va.str(), va.str(), ans,
                        two_decimals_note((vb - va).times(100), va, d.value.number)),
            fmt::format("The percentage change is {}%.", ans),
        };
        return;
    }
    default:
        break;
    }
    throw Error(ErrorCode::UnresolvableReference, "not a complex operation");
}

}  // namespace

QAItem make_item(const OracleProgram& program, QAKind kind, const DataTable& table, const QAContext& ctx,
                 std::uint64_t phrasing)
{
    QAItem item;
    item.kind = kind;
    item.oracle = program;
    Derivation d = derive(program, table);
    item.answer = d.value.str();
    if (kind == QAKind::Simple) {
        item.question = simple_question(program, ctx, phrasing);
    } else {
        complex_text(item, program, table, ctx, d, phrasing);
    }
    return item;
}

namespace {

const std::regex& number_re()
{
    static const std::regex re(R"((\d+(?:\.\d+)?))");
    return re;
}

}  // namespace

bool verify_answer(const QAItem& item, const DataTable& table)
{
    Derivation d = derive(item.oracle, table);
    if (d.value.type != item.oracle.expected_type()) return false;
    if (d.value.str() != item.answer) return false;

    std::set<Decimal> allowed;
    auto allow = [&](const Decimal& v) { allowed.insert(v.is_negative() ? -v : v); };
    for (const auto& row : table.cells) {
        for (const auto& c : row) allow(c);
    }
    for (const auto* labels : {&table.index, &table.series_labels}) {
        for (const auto& l : *labels) {
            if (auto v = Decimal::parse(l)) allow(*v);
        }
    }
    for (const auto& v : d.intermediates) allow(v);
    if (d.value.type == AnswerType::Number) allow(d.value.number);
    if (item.oracle.threshold) allow(*item.oracle.threshold);

    for (const auto& step : item.reasoning) {
        for (std::sregex_iterator it(step.begin(), step.end(), number_re()), end; it != end; ++it) {
            auto v = Decimal::parse((*it)[1].str());
            if (!v || !allowed.count(*v)) return false;
        }
    }
    return true;
}

namespace {

struct Pool {
    std::map<OracleOp, std::vector<OracleProgram>> by_op;

    void add(OracleProgram p) { by_op[p.op].push_back(std::move(p)); }
};

// Round-robin over shuffled operation groups so small targets still mix kinds.
std::vector<OracleProgram> draw(Pool& pool, CounterRng& rng, int n)
{
    std::vector<std::vector<OracleProgram>> groups;
    for (auto& [op, programs] : pool.by_op) {
        rng.shuffle(programs.begin(), programs.end());
        groups.push_back(programs);
    }
    rng.shuffle(groups.begin(), groups.end());
    std::vector<OracleProgram> out;
    std::set<std::string> keys;
    std::vector<std::size_t> next(groups.size(), 0);
    bool progressed = true;
    while (static_cast<int>(out.size()) < n && progressed) {
        progressed = false;
        for (std::size_t g = 0; g < groups.size() && static_cast<int>(out.size()) < n; ++g) {
            while (next[g] < groups[g].size()) {
                const OracleProgram& p = groups[g][next[g]++];
                if (keys.insert(p.key()).second) {
                    out.push_back(p);
                    progressed = true;
                    break;
                }
            }
        }
    }
    return out;
}

bool unique_extreme(const std::vector<Decimal>& v, bool want_max)
{
    auto it = want_max ? std::max_element(v.begin(), v.end()) : std::min_element(v.begin(), v.end());
    return std::count(v.begin(), v.end(), *it) == 1;
}

CellRef ref(const DataTable& t, std::size_t r, std::size_t c)
{
    return {t.index[r], t.series_labels[c]};
}

void add_line_ops(Pool& pool, const DataTable& t, Axis axis, CounterRng& rng)
{
    for (const auto& label : line_labels(t, axis)) {
        auto v = line_values(t, axis, label);
        if (v.size() < 2) continue;
        OracleProgram p;
        p.axis = axis;
        p.line = label;
        p.op = axis == Axis::Col ? OracleOp::ColMax : OracleOp::RowMax;
        pool.add(p);
        p.op = axis == Axis::Col ? OracleOp::ColMin : OracleOp::RowMin;
        pool.add(p);
        if (unique_extreme(v, true)) {
            p.op = OracleOp::ArgmaxLabel;
            pool.add(p);
        }
        if (unique_extreme(v, false)) {
            p.op = OracleOp::ArgminLabel;
            pool.add(p);
        }
        if (v.size() >= 3) {
            auto sorted = v;
            std::sort(sorted.begin(), sorted.end());
            // A threshold below the maximum so the count is informative.
            auto k = static_cast<std::size_t>(rng.below(sorted.size() - 1));
            p.op = OracleOp::CountAbove;
            p.threshold = sorted[k];
            pool.add(p);
            p.threshold.reset();
        }
    }
}

void add_declines(Pool& pool, const DataTable& t, Axis entity, const QAContext& ctx)
{
    const Axis across = other_axis(entity);
    const auto& positions = line_labels(t, across);
    const auto& entities = line_labels(t, entity);
    if (!axis_temporal(across, ctx) || positions.size() < 2 || entities.size() < 2) return;
    std::vector<std::pair<std::size_t, std::size_t>> spans = {{0, positions.size() - 1}};
    if (positions.size() >= 3) spans.emplace_back(positions.size() - 2, positions.size() - 1);
    for (auto [from, to] : spans) {
        OracleProgram p;
        p.op = OracleOp::LargestDeclineLabel;
        p.axis = entity;
        p.from_line = positions[from];
        p.to_line = positions[to];
        auto d = derive(p, t);
        auto best = *std::max_element(d.intermediates.begin(), d.intermediates.end());
        if (best.is_negative() || best.is_zero()) continue;
        if (std::count(d.intermediates.begin(), d.intermediates.end(), best) != 1) continue;
        pool.add(p);
    }
}

}  // namespace

std::vector<QAItem> gen_simple_qa(const DataTable& table, const QAContext& ctx, std::uint64_t seed, int n)
{
    CounterRng rng(seed, "qa-simple");
    Pool pool;
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < table.cols(); ++c) {
            OracleProgram p;
            p.op = OracleOp::CellLookup;
            p.a = ref(table, r, c);
            pool.add(p);
        }
    }
    add_line_ops(pool, table, Axis::Col, rng);
    add_line_ops(pool, table, Axis::Row, rng);
    add_declines(pool, table, Axis::Col, ctx);
    add_declines(pool, table, Axis::Row, ctx);

    auto programs = draw(pool, rng, std::min(n, kSimpleMax));
    if (static_cast<int>(programs.size()) < kSimpleMin) {
        throw Error(ErrorCode::InsufficientTable, fmt::format("only {} simple questions available", programs.size()));
    }
    std::vector<QAItem> out;
    for (const auto& p : programs) out.push_back(make_item(p, QAKind::Simple, table, ctx, rng.next()));
    return out;
}

std::vector<QAItem> gen_complex_qa(const DataTable& table, const QAContext& ctx, std::uint64_t seed, int n)
{
    CounterRng rng(seed, "qa-complex");
    Pool pool;
    for (Axis axis : {Axis::Col, Axis::Row}) {
        for (const auto& label : line_labels(table, axis)) {
            auto v = line_values(table, axis, label);
            if (v.size() < 2) continue;
            OracleProgram p;
            p.axis = axis;
            p.line = label;
            p.op = OracleOp::Sum;
            pool.add(p);
            p.op = OracleOp::Mean;
            pool.add(p);

            const auto& positions = line_labels(table, other_axis(axis));
            auto cell_at = [&](std::size_t i) {
                return axis == Axis::Col ? CellRef{positions[i], label} : CellRef{label, positions[i]};
            };
            for (int k = 0; k < 3; ++k) {
                auto i = static_cast<std::size_t>(rng.below(v.size()));
                auto j = static_cast<std::size_t>(rng.below(v.size() - 1));
                if (j >= i) ++j;
                if (v[i] == v[j]) continue;
                OracleProgram diff;
                diff.op = OracleOp::Difference;
                diff.a = cell_at(v[i] > v[j] ? i : j);
                diff.b = cell_at(v[i] > v[j] ? j : i);
                pool.add(diff);
                auto [from, to] = std::minmax(i, j);
                if (!v[from].is_zero()) {
                    OracleProgram pc;
                    pc.op = OracleOp::PercentChange;
                    pc.a = cell_at(from);
                    pc.b = cell_at(to);
                    pool.add(pc);
                }
            }
        }
    }
    auto programs = draw(pool, rng, std::min(n, kComplexMax));
    if (static_cast<int>(programs.size()) < kComplexMin) {
        throw Error(ErrorCode::InsufficientTable,
                    fmt::format("only {} complex questions available", programs.size()));
    }
    std::vector<QAItem> out;
    for (const auto& p : programs) out.push_back(make_item(p, QAKind::Complex, table, ctx, rng.next()));
    return out;
}

}  // namespace synchart
