#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace masader::csv {

using Row = std::vector<std::string>;

// RFC 4180 reader: comma separated, double-quote quoting with "" as the
// escaped quote, LF or CRLF line endings, quoted fields may span lines.
// A leading UTF-8 byte order mark is dropped and completely blank lines are
// skipped. Throws SourceUnreadable on an unterminated quoted field.
std::vector<Row> parse(std::string_view text);

}  // namespace masader::csv
