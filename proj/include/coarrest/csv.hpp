#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

namespace coarrest {

struct CsvDialect {
  char separator = ',';
  char quote = '"';
  bool header = true;
};

// Minimal RFC 4180 reader. Quoted fields may span lines; doubled quotes
// inside a quoted field produce one quote character.
class CsvReader {
 public:
  CsvReader(std::istream& in, CsvDialect dialect);

  // Reads the next non-blank record into `fields`. Returns false at end of
  // input. Throws ParseError on malformed quoting.
  bool next(std::vector<std::string>& fields);

  // Physical line on which the most recently returned record started.
  std::size_t line() const noexcept { return record_line_; }

 private:
  std::istream& in_;
  CsvDialect dialect_;
  std::size_t current_line_ = 1;
  std::size_t record_line_ = 0;
  bool first_ = true;
};

std::string trim(std::string_view s);

}  // namespace coarrest
