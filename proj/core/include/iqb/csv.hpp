#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace iqb {

// A parsed CSV document: first row is the header, the rest are data rows.
// Field counts are not enforced here; consumers validate per-row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC 4180 parser: comma-delimited, double-quote quoting with "" escapes,
// accepts LF and CRLF line endings and a missing final newline.
// Throws std::runtime_error on input that cannot be framed at all
// (unterminated quote), since everything after such a point is garbage.
CsvTable parse_csv(std::string_view text);

CsvTable load_csv(const std::string& path);

// Quotes a field only when needed (comma, quote, CR or LF present).
std::string csv_escape(std::string_view field);

std::string format_csv_row(const std::vector<std::string>& fields);

}  // namespace iqb
