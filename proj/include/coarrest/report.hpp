#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coarrest/community.hpp"
#include "coarrest/membership.hpp"
#include "coarrest/network.hpp"
#include "coarrest/tipping.hpp"

namespace coarrest {

// Settings that shape the report. They are echoed into the report so that a
// re-render from JSON reproduces the original artifacts.
struct ReportOptions {
  std::optional<double> tau;  // inferred members admitted to communities at >= tau
  std::vector<double> bins = default_histogram_edges();
  int connector_threshold = 2;
  int moderate_ties = 2;  // tie count at which a relation is "moderate"
  int strong_ties = 5;    // ... and "strong"

  bool operator==(const ReportOptions&) const = default;
};

struct RunMetadata {
  std::string version;
  std::map<std::string, std::string> input_digests;  // name -> fnv1a64 hex
  ReportOptions options;

  bool operator==(const RunMetadata&) const = default;
};

struct NetworkSummary {
  std::int64_t vertices = 0;
  std::int64_t edges = 0;
  std::int64_t total_weight = 0;
  std::int64_t gangs = 0;
  std::int64_t components = 0;
  std::int64_t unadmitted_connected = 0;  // no admitted gang, degree >= 1
  std::int64_t unadmitted_assigned = 0;   // ... with a nonzero inferred value
  std::int64_t unadmitted_over_half = 0;  // ... with some value > 0.5

  bool operator==(const NetworkSummary&) const = default;
};

struct InferredAssignment {
  std::string person;
  std::string gang;
  double confidence = 0.0;

  bool operator==(const InferredAssignment&) const = default;
};

struct GangSection {
  std::string gang;
  std::string group;
  GangSeedReport seeds;
  GangPartition community;

  bool operator==(const GangSection&) const = default;
};

// Everything the rendered artifacts show. Renderers only format these
// numbers; they compute nothing new.
struct AnalysisReport {
  RunMetadata meta;
  NetworkSummary summary;
  std::vector<InfluenceFunction> influence;
  std::vector<InferredAssignment> assignments;
  MembershipHistogram histogram;
  std::vector<GangSection> gangs;
  std::map<std::string, double> group_mean_seed_pct;
  std::map<std::string, double> group_mean_modularity;
  std::vector<Ecosystem> ecosystems;
  std::vector<Connector> connectors;
  std::vector<std::string> warnings;

  bool operator==(const AnalysisReport&) const = default;
};

nlohmann::json to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::json& doc);

// Sections: summary, membership, seeds, communities, ecosystems, connectors.
// An empty network renders the summary only.
std::string render_markdown(const AnalysisReport& report);

struct DotStyle {
  double penwidth_per_weight = 1.0;
  bool weight_labels = true;
};

std::string render_dot(const CoArrestNetwork& net, const DotStyle& style = {});
std::string render_dot(const Ecosystem& eco, const DotStyle& style = {});

// Figure series as CSV, keyed by file name: influence.csv, histogram.csv,
// seed_pct.csv, modularity.csv.
std::map<std::string, std::string> chart_data(const AnalysisReport& report);

std::string strength_band(std::int64_t ties, const ReportOptions& options);

// File name for an ecosystem DOT, safe for arbitrary gang names.
std::string ecosystem_file_name(const std::string& gang);

std::string fnv1a64_hex(std::string_view bytes);

}  // namespace coarrest
