#include "quadclass/report.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "quadclass/error.hpp"

namespace quadclass::report {

namespace {

using nlohmann::ordered_json;

bool needs_quotes(std::string_view s)
{
    return s.find_first_of(",\"\r\n") != std::string_view::npos;
}

std::string csv_field(Cell const & c)
{
    std::string s = cell_text(c);
    if (!needs_quotes(s))
        return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + "\"";
}

Cell parse_scalar(std::string const & s, CellKind kind)
{
    if (s.empty())
        return std::monostate{};
    switch (kind) {
    case CellKind::Bool:
        if (s == "true")
            return true;
        if (s == "false")
            return false;
        throw ParseError("expected true/false, got '" + s + "'");
    case CellKind::Integer:
        try {
            std::size_t pos = 0;
            long long v = std::stoll(s, &pos);
            if (pos != s.size())
                throw ParseError("trailing characters in integer '" + s + "'");
            return static_cast<std::int64_t>(v);
        } catch (std::logic_error const &) {
            throw ParseError("bad integer '" + s + "'");
        }
    case CellKind::Text:
        return s;
    }
    return std::monostate{};
}

/* RFC 4180 records; accepts CRLF or LF line ends. */
std::vector<std::vector<std::string>> split_csv(std::string_view text)
{
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> rec;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        any = true;
        if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            rec.push_back(std::move(field));
            field.clear();
        } else if (ch == '\r' || ch == '\n') {
            if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
                ++i;
            rec.push_back(std::move(field));
            field.clear();
            records.push_back(std::move(rec));
            rec.clear();
            any = false;
        } else {
            field += ch;
        }
    }
    if (quoted)
        throw ParseError("unterminated quoted CSV field");
    if (any) {
        rec.push_back(std::move(field));
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace

Format parse_format(std::string_view name)
{
    if (name == "table")
        return Format::Table;
    if (name == "csv")
        return Format::Csv;
    if (name == "json")
        return Format::Json;
    throw std::invalid_argument("unknown format '" + std::string(name) + "'");
}

std::string cell_text(Cell const & c)
{
    struct
    {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(std::string const & s) const { return s; }
    } visit;
    return std::visit(visit, c);
}

std::string to_text(Table const & t)
{
    std::vector<std::size_t> width;
    for (auto const & c : t.columns)
        width.push_back(c.name.size());
    for (auto const & row : t.rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            width[i] = std::max(width[i], std::holds_alternative<std::monostate>(row[i]) ? 1 : cell_text(row[i]).size());
    std::ostringstream os;
    auto line = [&](auto const & get) {
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            std::string s = get(i);
            os << (i ? "  " : "") << s;
            if (i + 1 < t.columns.size())
                os << std::string(width[i] - s.size(), ' ');
        }
        os << '\n';
    };
    line([&](std::size_t i) { return t.columns[i].name; });
    for (auto const & row : t.rows)
        line([&](std::size_t i) {
            return std::holds_alternative<std::monostate>(row[i]) ? std::string("-") : cell_text(row[i]);
        });
    return os.str();
}

std::string to_csv(Table const & t)
{
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out += (i ? "," : "") + csv_field(t.columns[i].name);
    out += "\r\n";
    for (auto const & row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + csv_field(row[i]);
        out += "\r\n";
    }
    return out;
}

std::string to_ndjson(Table const & t)
{
    std::string out;
    for (auto const & row : t.rows) {
        ordered_json obj = ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            auto const & name = t.columns[i].name;
            std::visit(
                [&](auto const & v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, std::monostate>)
                        obj[name] = nullptr;
                    else
                        obj[name] = v;
                },
                row[i]);
        }
        out += obj.dump();
        out += '\n';
    }
    return out;
}

std::string render(Table const & t, Format f)
{
    switch (f) {
    case Format::Table:
        return to_text(t);
    case Format::Csv:
        return to_csv(t);
    case Format::Json:
        return to_ndjson(t);
    }
    return {};
}

Table parse_csv(std::string_view text, std::vector<Column> const & columns)
{
    auto records = split_csv(text);
    if (records.empty())
        throw ParseError("CSV input has no header");
    Table t{columns, {}};
    if (records[0].size() != columns.size())
        throw ParseError("CSV header has the wrong number of columns");
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (records[0][i] != columns[i].name)
            throw ParseError("CSV header mismatch at column '" + columns[i].name + "'");
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != columns.size())
            throw ParseError("CSV row " + std::to_string(r) + " has the wrong number of fields");
        std::vector<Cell> row;
        for (std::size_t i = 0; i < columns.size(); ++i)
            row.push_back(parse_scalar(records[r][i], columns[i].kind));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table parse_ndjson(std::string_view text, std::vector<Column> const & columns)
{
    Table t{columns, {}};
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        ordered_json obj;
        try {
            obj = ordered_json::parse(line);
        } catch (nlohmann::json::exception const & e) {
            throw ParseError(std::string("bad JSON record: ") + e.what());
        }
        std::vector<Cell> row;
        for (auto const & col : columns) {
            if (!obj.contains(col.name))
                throw ParseError("JSON record lacks field '" + col.name + "'");
            auto const & v = obj[col.name];
            if (v.is_null())
                row.emplace_back(std::monostate{});
            else if (col.kind == CellKind::Bool && v.is_boolean())
                row.emplace_back(v.get<bool>());
            else if (col.kind == CellKind::Integer && v.is_number_integer())
                row.emplace_back(v.get<std::int64_t>());
            else if (col.kind == CellKind::Text && v.is_string())
                row.emplace_back(v.get<std::string>());
            else
                throw ParseError("JSON field '" + col.name + "' has the wrong type");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace quadclass::report
