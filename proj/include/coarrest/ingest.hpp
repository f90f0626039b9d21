#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "coarrest/csv.hpp"

namespace coarrest {

// Label used in reports for a person whose arrest rows carry no gang claim.
inline constexpr const char* kUndisclosed = "undisclosed";

struct ArrestRecord {
  std::string arrest_id;
  std::string person_id;
  std::optional<std::string> gang_claim;  // nullopt = undisclosed
  std::optional<std::string> date;        // YYYY-MM-DD

  bool operator==(const ArrestRecord&) const = default;
};

// Undirected person pair, stored with person_a < person_b. `weight` counts
// how many times the pair occurred in the source.
struct RelationshipRecord {
  std::string person_a;
  std::string person_b;
  std::int64_t weight = 1;

  bool operator==(const RelationshipRecord&) const = default;
};

struct IngestStats {
  std::size_t rows = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t duplicates = 0;
  std::vector<std::string> warnings;
};

template <class Record>
struct Parsed {
  std::vector<Record> records;
  IngestStats stats;
};

// Columns: arrest_id, person_id, and optionally gang_claim, date (any order
// when the dialect has a header). Rows missing an id are rejected;
// duplicate (arrest_id, person_id) rows collapse onto the first occurrence.
Parsed<ArrestRecord> parse_arrests(std::istream& in, const CsvDialect& dialect = {});

// Columns: person_a, person_b. Pairs are canonicalized and repeated pairs
// accumulate into weight. Self loops are rejected.
Parsed<RelationshipRecord> parse_relationships(std::istream& in,
                                               const CsvDialect& dialect = {});

// One edge occurrence for every unordered pair of distinct persons sharing an
// arrest; occurrences of the same pair accumulate. Output sorted by pair.
std::vector<RelationshipRecord> derive_coarrest_edges(std::span<const ArrestRecord> arrests);

// Sum of weights, i.e. the number of pair occurrences an edge list encodes.
std::int64_t edge_occurrences(std::span<const RelationshipRecord> edges);

nlohmann::json ingest_summary_json(const IngestStats& arrests,
                                   const IngestStats* relationships);

}  // namespace coarrest
