#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fieldsens::csv {

struct Row {
  std::size_t line = 0;  ///< 1-based line where the record starts
  std::vector<std::string> fields;
};

/// RFC 4180 reader: comma separated, double-quote escaping, LF or CRLF line
/// ends, quoted fields may span lines. Blank lines are skipped. Throws
/// SchemaError on an unterminated quote.
std::vector<Row> parse(std::string_view text);

/// Quotes the field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

/// Joins escaped fields with commas and terminates with CRLF.
std::string format_row(const std::vector<std::string>& fields);

}  // namespace fieldsens::csv
