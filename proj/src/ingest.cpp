#include "coarrest/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "coarrest/errors.hpp"

namespace coarrest {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Maps column names to positions. With no header the positional order of
// `names` is used.
class Columns {
 public:
  Columns(CsvReader& reader, const CsvDialect& dialect, std::vector<std::string> names,
          std::size_t required)
      : names_(std::move(names)) {
    if (!dialect.header) {
      for (std::size_t k = 0; k < names_.size(); ++k) index_[names_[k]] = k;
      width_ = names_.size();
      return;
    }
    std::vector<std::string> header;
    if (!reader.next(header)) {
      empty_ = true;
      return;
    }
    for (std::size_t k = 0; k < header.size(); ++k) {
      auto name = lower(trim(header[k]));
      if (!index_.contains(name)) index_[name] = k;
    }
    width_ = header.size();
    for (std::size_t k = 0; k < required; ++k) {
      if (!index_.contains(names_[k])) {
        throw SchemaError("missing required column '" + names_[k] + "'");
      }
    }
  }

  bool empty() const { return empty_; }

  std::string get(const std::vector<std::string>& row, const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end() || it->second >= row.size()) return {};
    return trim(row[it->second]);
  }

  void check_width(const std::vector<std::string>& row, std::size_t line) const {
    if (row.size() > width_) {
      throw ParseError(line, fmt::format("expected at most {} fields, found {}", width_,
                                         row.size()));
    }
  }

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
  std::size_t width_ = 0;
  bool empty_ = false;
};

bool valid_iso_date(const std::string& s) {
  unsigned y = 0, m = 0, d = 0;
  char dash1 = 0, dash2 = 0;
  std::istringstream in(s);
  if (s.size() != 10 || !(in >> y >> dash1 >> m >> dash2 >> d) || dash1 != '-' ||
      dash2 != '-') {
    return false;
  }
  std::chrono::year_month_day ymd{std::chrono::year(static_cast<int>(y)),
                                  std::chrono::month(m), std::chrono::day(d)};
  return ymd.ok();
}

std::optional<std::string> normalize_claim(const std::string& raw) {
  if (raw.empty() || lower(raw) == kUndisclosed) return std::nullopt;
  return raw;
}

std::vector<RelationshipRecord> accumulate_pairs(
    const std::map<std::pair<std::string, std::string>, std::int64_t>& counts) {
  std::vector<RelationshipRecord> out;
  out.reserve(counts.size());
  for (const auto& [pair, weight] : counts) out.push_back({pair.first, pair.second, weight});
  return out;
}

}  // namespace

Parsed<ArrestRecord> parse_arrests(std::istream& in, const CsvDialect& dialect) {
  Parsed<ArrestRecord> out;
  CsvReader reader(in, dialect);
  Columns columns(reader, dialect, {"arrest_id", "person_id", "gang_claim", "date"}, 2);
  if (columns.empty()) {
    out.stats.warnings.push_back("arrest file is empty (no header)");
    return out;
  }

  std::unordered_map<std::string, std::size_t> seen;  // arrest \x1f person -> record
  std::vector<std::string> row;
  while (reader.next(row)) {
    ++out.stats.rows;
    columns.check_width(row, reader.line());
    ArrestRecord rec{columns.get(row, "arrest_id"), columns.get(row, "person_id"),
                     normalize_claim(columns.get(row, "gang_claim")), std::nullopt};
    if (rec.arrest_id.empty() || rec.person_id.empty()) {
      ++out.stats.rejected;
      out.stats.warnings.push_back(
          fmt::format("line {}: missing {}", reader.line(),
                      rec.arrest_id.empty() ? "arrest_id" : "person_id"));
      continue;
    }
    if (auto date = columns.get(row, "date"); !date.empty()) {
      if (valid_iso_date(date)) {
        rec.date = date;
      } else {
        out.stats.warnings.push_back(
            fmt::format("line {}: ignoring invalid date '{}'", reader.line(), date));
      }
    }

    auto key = rec.arrest_id + '\x1f' + rec.person_id;
    if (auto it = seen.find(key); it != seen.end()) {
      ++out.stats.duplicates;
      auto& kept = out.records[it->second];
      if (!kept.gang_claim && rec.gang_claim) {
        kept.gang_claim = rec.gang_claim;
      } else if (kept.gang_claim && rec.gang_claim && *kept.gang_claim != *rec.gang_claim) {
        out.stats.warnings.push_back(fmt::format(
            "line {}: conflicting claim '{}' for {} in arrest {} (kept '{}')", reader.line(),
            *rec.gang_claim, rec.person_id, rec.arrest_id, *kept.gang_claim));
      }
      if (!kept.date && rec.date) kept.date = rec.date;
      continue;
    }
    seen.emplace(std::move(key), out.records.size());
    out.records.push_back(std::move(rec));
  }
  out.stats.accepted = out.records.size();
  if (out.stats.duplicates > 0) {
    out.stats.warnings.push_back(
        fmt::format("collapsed {} duplicate arrest rows", out.stats.duplicates));
  }
  return out;
}

Parsed<RelationshipRecord> parse_relationships(std::istream& in, const CsvDialect& dialect) {
  Parsed<RelationshipRecord> out;
  CsvReader reader(in, dialect);
  Columns columns(reader, dialect, {"person_a", "person_b"}, 2);
  if (columns.empty()) {
    out.stats.warnings.push_back("relationship file is empty (no header)");
    return out;
  }

  std::map<std::pair<std::string, std::string>, std::int64_t> counts;
  std::vector<std::string> row;
  while (reader.next(row)) {
    ++out.stats.rows;
    columns.check_width(row, reader.line());
    auto a = columns.get(row, "person_a");
    auto b = columns.get(row, "person_b");
    if (a.empty() || b.empty()) {
      ++out.stats.rejected;
      out.stats.warnings.push_back(fmt::format("line {}: missing person id", reader.line()));
      continue;
    }
    if (a == b) {
      ++out.stats.rejected;
      out.stats.warnings.push_back(
          fmt::format("line {}: self relationship for {} rejected", reader.line(), a));
      continue;
    }
    if (b < a) std::swap(a, b);
    auto [it, inserted] = counts.try_emplace({a, b}, 0);
    if (!inserted) ++out.stats.duplicates;
    ++it->second;
    ++out.stats.accepted;
  }
  out.records = accumulate_pairs(counts);
  return out;
}

std::vector<RelationshipRecord> derive_coarrest_edges(std::span<const ArrestRecord> arrests) {
  std::map<std::string, std::set<std::string>> by_arrest;
  for (const auto& rec : arrests) by_arrest[rec.arrest_id].insert(rec.person_id);

  std::map<std::pair<std::string, std::string>, std::int64_t> counts;
  for (const auto& [arrest, persons] : by_arrest) {
    for (auto a = persons.begin(); a != persons.end(); ++a) {
      for (auto b = std::next(a); b != persons.end(); ++b) ++counts[{*a, *b}];
    }
  }
  return accumulate_pairs(counts);
}

std::int64_t edge_occurrences(std::span<const RelationshipRecord> edges) {
  std::int64_t total = 0;
  for (const auto& e : edges) total += e.weight;
  return total;
}

nlohmann::json ingest_summary_json(const IngestStats& arrests,
                                   const IngestStats* relationships) {
  auto block = [](const IngestStats& s) {
    return nlohmann::json{{"rows", s.rows},
                          {"accepted", s.accepted},
                          {"rejected", s.rejected},
                          {"duplicates", s.duplicates},
                          {"warnings", s.warnings}};
  };
  nlohmann::json doc{{"arrests", block(arrests)}};
  doc["relationships"] = relationships ? block(*relationships) : nlohmann::json(nullptr);
  return doc;
}

}  // namespace coarrest
