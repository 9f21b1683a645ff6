#include "synchart/record_json.hpp"

#include <fmt/format.h>

#include "synchart/error.hpp"

namespace synchart {

using nlohmann::json;

std::string generator_version()
{
    return SYNCHART_VERSION;
}

namespace {

[[noreturn]] void bad(const std::string& what)
{
    throw Error(ErrorCode::ParseError, fmt::format("record: {}", what));
}

const json& field(const json& j, const char* key)
{
    if (!j.is_object()) bad(fmt::format("expected an object around '{}'", key));
    auto it = j.find(key);
    if (it == j.end()) bad(fmt::format("missing '{}'", key));
    return *it;
}

std::string str(const json& j, const char* key)
{
    const json& v = field(j, key);
    if (!v.is_string()) bad(fmt::format("'{}' must be a string", key));
    return v.get<std::string>();
}

template <class T>
T num(const json& j, const char* key)
{
    const json& v = field(j, key);
    if (!v.is_number()) bad(fmt::format("'{}' must be a number", key));
    return v.get<T>();
}

std::vector<std::string> str_list(const json& j, const char* key)
{
    const json& v = field(j, key);
    if (!v.is_array()) bad(fmt::format("'{}' must be a list", key));
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) bad(fmt::format("'{}' must hold strings", key));
        out.push_back(e.get<std::string>());
    }
    return out;
}

json cell_json(const CellRef& c)
{
    return json{{"row", c.row}, {"col", c.col}};
}

CellRef cell_from(const json& j)
{
    return {str(j, "row"), str(j, "col")};
}

Decimal decimal_from(const json& j, const char* key)
{
    auto d = Decimal::parse(str(j, key));
    if (!d) bad(fmt::format("'{}' is not a decimal", key));
    return *d;
}

json table_json(const DataTable& t)
{
    json cells = json::array();
    for (const auto& row : t.cells) {
        json r = json::array();
        for (const auto& c : row) r.push_back(c.str());
        cells.push_back(std::move(r));
    }
    return json{{"index_label", t.index_label},
                {"index", t.index},
                {"series_labels", t.series_labels},
                {"cells", std::move(cells)},
                {"csv_text", t.to_csv()}};
}

DataTable table_from(const json& j)
{
    DataTable t;
    t.index_label = str(j, "index_label");
    t.index = str_list(j, "index");
    t.series_labels = str_list(j, "series_labels");
    const json& cells = field(j, "cells");
    if (!cells.is_array()) bad("'cells' must be a list");
    for (const auto& row : cells) {
        if (!row.is_array()) bad("'cells' rows must be lists");
        std::vector<Decimal> r;
        for (const auto& c : row) {
            auto d = c.is_string() ? Decimal::parse(c.get<std::string>()) : std::nullopt;
            if (!d) bad("cell is not a decimal string");
            r.push_back(*d);
        }
        t.cells.push_back(std::move(r));
    }
    if (str(j, "csv_text") != t.to_csv()) bad("csv_text does not match cells");
    return t;
}

json style_json(const StyleChoice& s)
{
    return json{{"title", s.title},
                {"x_label", s.x_label},
                {"y_label", s.y_label},
                {"legend", std::string(to_string(s.legend))},
                {"annotations", s.annotations},
                {"palette", std::string(palettes()[static_cast<std::size_t>(s.palette)].id)},
                {"width_px", s.width_px()},
                {"height_px", s.height_px()}};
}

StyleChoice style_from(const json& j)
{
    StyleChoice s;
    s.title = str(j, "title");
    s.x_label = str(j, "x_label");
    s.y_label = str(j, "y_label");
    auto legend = parse_legend_pos(str(j, "legend"));
    if (!legend) bad("unknown legend position");
    s.legend = *legend;
    const json& ann = field(j, "annotations");
    if (!ann.is_boolean()) bad("'annotations' must be a boolean");
    s.annotations = ann.get<bool>();
    const std::string palette = str(j, "palette");
    s.palette = -1;
    for (std::size_t i = 0; i < palettes().size(); ++i) {
        if (palettes()[i].id == palette) s.palette = static_cast<int>(i);
    }
    if (s.palette < 0) bad(fmt::format("unknown palette '{}'", palette));
    const int w = num<int>(j, "width_px");
    const int h = num<int>(j, "height_px");
    s.figure_size = -1;
    for (std::size_t i = 0; i < kFigureSizes.size(); ++i) {
        if (kFigureSizes[i].width_in * kDpi == w && kFigureSizes[i].height_in * kDpi == h) {
            s.figure_size = static_cast<int>(i);
        }
    }
    if (s.figure_size < 0) bad("unknown figure size");
    return s;
}

}  // namespace

json to_json(const OracleProgram& p)
{
    json j{{"op", std::string(to_string(p.op))},
           {"expected_type", p.expected_type() == AnswerType::Number ? "number" : "label"}};
    switch (p.op) {
    case OracleOp::CellLookup:
        j["a"] = cell_json(p.a);
        break;
    case OracleOp::ColMax:
    case OracleOp::ColMin:
    case OracleOp::RowMax:
    case OracleOp::RowMin:
        j["line"] = p.line;
        break;
    case OracleOp::ArgmaxLabel:
    case OracleOp::ArgminLabel:
    case OracleOp::Sum:
    case OracleOp::Mean:
        j["axis"] = std::string(to_string(p.axis));
        j["line"] = p.line;
        break;
    case OracleOp::CountAbove:
        j["axis"] = std::string(to_string(p.axis));
        j["line"] = p.line;
        if (p.threshold) j["threshold"] = p.threshold->str();
        break;
    case OracleOp::Difference:
    case OracleOp::PercentChange:
        j["a"] = cell_json(p.a);
        j["b"] = cell_json(p.b);
        break;
    case OracleOp::LargestDeclineLabel:
        j["axis"] = std::string(to_string(p.axis));
        j["from_line"] = p.from_line;
        j["to_line"] = p.to_line;
        break;
    }
    return j;
}

OracleProgram oracle_from_json(const json& j)
{
    OracleProgram p;
    auto op = parse_oracle_op(str(j, "op"));
    if (!op) bad("unknown oracle op");
    p.op = *op;
    if (j.contains("axis")) {
        auto axis = parse_axis(str(j, "axis"));
        if (!axis) bad("unknown axis");
        p.axis = *axis;
    }
    if (j.contains("line")) p.line = str(j, "line");
    if (j.contains("a")) p.a = cell_from(j["a"]);
    if (j.contains("b")) p.b = cell_from(j["b"]);
    if (j.contains("threshold")) p.threshold = decimal_from(j, "threshold");
    if (j.contains("from_line")) p.from_line = str(j, "from_line");
    if (j.contains("to_line")) p.to_line = str(j, "to_line");
    return p;
}

json to_json(const QAItem& item)
{
    json j{{"kind", std::string(to_string(item.kind))},
           {"question", item.question},
           {"answer", item.answer},
           {"oracle", to_json(item.oracle)}};
    if (!item.reasoning.empty()) j["reasoning"] = item.reasoning;
    return j;
}

QAItem qa_from_json(const json& j)
{
    QAItem item;
    const std::string kind = str(j, "kind");
    if (kind != "simple" && kind != "complex") bad("unknown QA kind");
    item.kind = kind == "simple" ? QAKind::Simple : QAKind::Complex;
    item.question = str(j, "question");
    item.answer = str(j, "answer");
    if (j.contains("reasoning")) item.reasoning = str_list(j, "reasoning");
    item.oracle = oracle_from_json(field(j, "oracle"));
    return item;
}

json to_json(const ChartSpec& s)
{
    return json{{"record_id", s.record_id},
                {"seed", s.seed},
                {"chart_type", std::string(to_string(s.chart_type))},
                {"engine", std::string(to_string(s.engine))},
                {"theme", json{{"topic", s.theme.topic}, {"theme_phrase", s.theme.phrase}}},
                {"trends", s.trends},
                {"n_rows", s.n_rows},
                {"n_cols", s.n_cols},
                {"style_seed", s.style_seed}};
}

ChartSpec spec_from_json(const json& j)
{
    ChartSpec s;
    s.record_id = str(j, "record_id");
    s.seed = num<std::uint64_t>(j, "seed");
    auto type = parse_chart_type(str(j, "chart_type"));
    if (!type) bad("unknown chart type");
    s.chart_type = *type;
    auto engine = parse_engine(str(j, "engine"));
    if (!engine) bad("unknown engine");
    s.engine = *engine;
    const json& theme = field(j, "theme");
    s.theme = {str(theme, "topic"), str(theme, "theme_phrase")};
    s.trends = str_list(j, "trends");
    s.n_rows = num<int>(j, "n_rows");
    s.n_cols = num<int>(j, "n_cols");
    s.style_seed = num<std::uint64_t>(j, "style_seed");
    return s;
}

json to_json(const DatasetRecord& r)
{
    json simple = json::array();
    for (const auto& q : r.simple_qa) simple.push_back(to_json(q));
    json complex = json::array();
    for (const auto& q : r.complex_qa) complex.push_back(to_json(q));
    json outliers = json::array();
    for (const auto& o : r.provenance.outliers) {
        outliers.push_back(json{{"row", o.cell.row}, {"col", o.cell.col}, {"multiplier", o.multiplier}});
    }
    const auto& p = r.provenance;
    return json{
        {"record_id", r.spec.record_id},
        {"spec", to_json(r.spec)},
        {"table", table_json(r.table)},
        {"code",
         json{{"engine", std::string(to_string(r.code.engine))},
              {"source", r.code.source},
              {"output_filename", r.code.output_filename},
              {"style", style_json(r.code.style)}}},
        {"image_ref",
         json{{"path", r.image.path},
              {"width", r.image.meta.width},
              {"height", r.image.meta.height},
              {"bytes", r.image.meta.bytes},
              {"variance", r.image.meta.variance}}},
        {"data_description", r.data_description},
        {"chart_description", r.chart_description},
        {"simple_qa", std::move(simple)},
        {"complex_qa", std::move(complex)},
        {"provenance",
         json{{"index", p.index},
              {"backend", p.backend},
              {"generator_version", p.generator_version},
              {"repair_attempts", p.repair_attempts},
              {"repair_rules", p.repair_rules},
              {"outliers", std::move(outliers)},
              {"measure", p.measure},
              {"col_kind", p.col_kind},
              {"wall_ms", p.wall_ms}}},
    };
}

DatasetRecord record_from_json(const json& j)
{
    try {
        DatasetRecord r;
        r.spec = spec_from_json(field(j, "spec"));
        if (str(j, "record_id") != r.spec.record_id) bad("record_id differs from spec.record_id");
        r.table = table_from(field(j, "table"));
        const json& code = field(j, "code");
        auto engine = parse_engine(str(code, "engine"));
        if (!engine) bad("unknown code engine");
        r.code.engine = *engine;
        r.code.source = str(code, "source");
        r.code.output_filename = str(code, "output_filename");
        r.code.style = style_from(field(code, "style"));
        const json& img = field(j, "image_ref");
        r.image.path = str(img, "path");
        r.image.meta.width = num<int>(img, "width");
        r.image.meta.height = num<int>(img, "height");
        r.image.meta.bytes = num<std::uint64_t>(img, "bytes");
        r.image.meta.variance = num<double>(img, "variance");
        r.data_description = str(j, "data_description");
        r.chart_description = str(j, "chart_description");
        for (const auto& q : field(j, "simple_qa")) r.simple_qa.push_back(qa_from_json(q));
        for (const auto& q : field(j, "complex_qa")) r.complex_qa.push_back(qa_from_json(q));
        const json& p = field(j, "provenance");
        r.provenance.index = num<std::uint64_t>(p, "index");
        r.provenance.backend = str(p, "backend");
        r.provenance.generator_version = str(p, "generator_version");
        r.provenance.repair_attempts = num<int>(p, "repair_attempts");
        r.provenance.repair_rules = str_list(p, "repair_rules");
        for (const auto& o : field(p, "outliers")) {
            r.provenance.outliers.push_back({cell_from(o), num<int>(o, "multiplier")});
        }
        r.provenance.measure = str(p, "measure");
        r.provenance.col_kind = str(p, "col_kind");
        r.provenance.wall_ms = num<std::int64_t>(p, "wall_ms");
        return r;
    } catch (const json::exception& e) {
        bad(e.what());
    }
}

std::string record_line(const DatasetRecord& record)
{
    return to_json(record).dump();
}

std::string canonical_line(const DatasetRecord& record)
{
    json j = to_json(record);
    j["provenance"].erase("wall_ms");
    return j.dump();
}

DatasetRecord parse_record_line(std::string_view line)
{
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        bad(e.what());
    }
    return record_from_json(j);
}

}  // namespace synchart
