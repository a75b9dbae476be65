#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace quadclass::report {

/* null | bool | machine integer | text. Big integers travel as decimal
 * text so they survive JSON consumers limited to doubles. */
using Cell = std::variant<std::monostate, bool, std::int64_t, std::string>;

enum class CellKind { Bool, Integer, Text };

struct Column
{
    std::string name;
    CellKind kind;

    bool operator==(Column const &) const = default;
};

struct Table
{
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;

    bool operator==(Table const &) const = default;
};

enum class Format { Table, Csv, Json };

Format parse_format(std::string_view name);

/* Aligned plain-text table. */
std::string to_text(Table const & t);

/* Header row, RFC 4180 quoting, CRLF line ends; null is an empty field. */
std::string to_csv(Table const & t);

/* One JSON object per line, keys in column order. */
std::string to_ndjson(Table const & t);

std::string render(Table const & t, Format f);

/* Inverses of to_csv / to_ndjson for a known column schema. Throw
 * quadclass::ParseError on malformed input. */
Table parse_csv(std::string_view text, std::vector<Column> const & columns);
Table parse_ndjson(std::string_view text, std::vector<Column> const & columns);

std::string cell_text(Cell const & c);

} // namespace quadclass::report
