#include "coarrest/csv.hpp"

#include "coarrest/errors.hpp"

namespace coarrest {

CsvReader::CsvReader(std::istream& in, CsvDialect dialect) : in_(in), dialect_(dialect) {}

bool CsvReader::next(std::vector<std::string>& fields) {
  using traits = std::istream::traits_type;
  while (true) {
    fields.clear();
    if (in_.peek() == traits::eof()) return false;

    std::string field;
    if (first_) {
      first_ = false;
      // UTF-8 byte order mark; a partial match is kept as field data.
      for (int b : {0xEF, 0xBB, 0xBF}) {
        if (in_.peek() != b) break;
        field.push_back(static_cast<char>(in_.get()));
      }
      if (field == "\xEF\xBB\xBF") field.clear();
    }

    record_line_ = current_line_;
    bool quoted = false;       // inside quotes
    bool was_quoted = false;   // current field started with a quote
    bool after_close = false;  // closing quote seen, expecting separator
    bool done = false;

    while (!done) {
      int c = in_.get();
      if (c == traits::eof()) {
        if (quoted) throw ParseError(record_line_, "unterminated quoted field");
        fields.push_back(std::move(field));
        break;
      }
      char ch = static_cast<char>(c);
      if (quoted) {
        if (ch == dialect_.quote) {
          if (in_.peek() == dialect_.quote) {
            in_.get();
            field.push_back(ch);
          } else {
            quoted = false;
            after_close = true;
          }
        } else {
          if (ch == '\n') ++current_line_;
          field.push_back(ch);
        }
        continue;
      }
      if (ch == dialect_.separator) {
        fields.push_back(std::move(field));
        field.clear();
        was_quoted = after_close = false;
      } else if (ch == '\n' || ch == '\r') {
        if (ch == '\r' && in_.peek() == '\n') in_.get();
        ++current_line_;
        fields.push_back(std::move(field));
        done = true;
      } else if (after_close) {
        if (ch == ' ' || ch == '\t') continue;
        throw ParseError(current_line_, "unexpected character after closing quote");
      } else if (ch == dialect_.quote) {
        if (was_quoted || !trim(field).empty()) {
          throw ParseError(current_line_, "quote inside unquoted field");
        }
        field.clear();
        quoted = was_quoted = true;
      } else {
        field.push_back(ch);
      }
    }

    bool blank = fields.size() == 1 && trim(fields[0]).empty();
    if (!blank) return true;
  }
}

std::string trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace coarrest
