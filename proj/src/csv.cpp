#include "masader/csv.hpp"

#include "masader/error.hpp"

namespace masader::csv {

std::vector<Row> parse(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<Row> rows;
  Row row;
  std::string field;
  bool row_started = false;  // distinguishes an empty line from a row of one empty field
  bool field_open = false;   // current field already has content or a quoted section
  std::size_t line = 1;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_open = false;
  };
  auto end_row = [&] {
    if (row_started) {
      end_field();
      rows.push_back(std::move(row));
    }
    row.clear();
    row_started = false;
    field_open = false;
  };

  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '"' && !field_open) {
      // Quoted field.
      std::size_t open_line = line;
      ++i;
      row_started = true;
      field_open = true;
      bool closed = false;
      while (i < text.size()) {
        char q = text[i];
        if (q == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        if (q == '\n') ++line;
        field.push_back(q);
        ++i;
      }
      if (!closed) {
        throw Error(ErrorCode::SourceUnreadable,
                    "unterminated quoted field starting on line " + std::to_string(open_line));
      }
      continue;
    }
    if (c == ',') {
      row_started = true;
      end_field();
      ++i;
      continue;
    }
    if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      ++i;
      continue;
    }
    if (c == '\n') {
      end_row();
      ++line;
      ++i;
      continue;
    }
    row_started = true;
    field_open = true;
    field.push_back(c);
    ++i;
  }
  end_row();
  return rows;
}

}  // namespace masader::csv
