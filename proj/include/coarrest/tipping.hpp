#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coarrest/network.hpp"

namespace coarrest {

// Majority threshold of the tipping model: ceil(d / 2) infected neighbours.
constexpr int majority_threshold(int degree) noexcept { return (degree + 1) / 2; }

// Marks a vertex whose remaining demand was pushed below zero; it can no
// longer be removed and ends up in the seed set.
inline constexpr int kSaturated = std::numeric_limits<int>::max();

struct RemovalStep {
  VertexId vertex;
  int dist;  // slack at the moment of removal

  bool operator==(const RemovalStep&) const = default;
};

struct TipDecomposition {
  std::vector<VertexId> seeds;  // ascending
  std::vector<RemovalStep> trace;
};

// Starts from dist_i = floor(d_i / 2) and repeatedly removes the vertex of
// minimal unsaturated dist (ties: smallest id). Each surviving neighbour is
// decremented while positive, saturated once at zero. Survivors form a seed
// set under the majority tipping model.
TipDecomposition tip_decomp(const CoArrestNetwork& net);

struct CascadeState {
  std::vector<std::uint8_t> infected;        // per vertex
  std::vector<std::vector<VertexId>> rounds; // rounds[0] are the seeds

  std::size_t infected_count() const;
  bool all_infected() const { return infected_count() == infected.size(); }
  // Rounds after the seeding round that infected at least one vertex.
  std::size_t round_count() const { return rounds.empty() ? 0 : rounds.size() - 1; }
};

// Synchronous rounds to the fixpoint. Throws InputError for out-of-range
// seeds.
CascadeState simulate_cascade(const CoArrestNetwork& net, std::span<const VertexId> seeds);
CascadeState simulate_cascade(const CoArrestNetwork& net,
                              std::span<const std::string> seed_ids);

// k-core index of every vertex (unweighted degrees).
std::vector<int> shell_numbers(const CoArrestNetwork& net);

// Gang name -> member person ids.
using GangMembers = std::map<std::string, std::vector<std::string>>;
// Gang name -> group tag (e.g. organisational style).
using GroupTags = std::map<std::string, std::string>;

struct GangSeedReport {
  std::string gang;
  std::string group;
  std::size_t members = 0;
  std::vector<std::string> seed;
  double seed_pct = 0.0;
  std::vector<std::pair<std::string, int>> trace;
  std::map<std::string, int> shells;

  bool operator==(const GangSeedReport&) const = default;
};

struct SeedSetSummary {
  std::vector<GangSeedReport> gangs;
  std::map<std::string, double> group_mean_pct;
  std::vector<std::string> warnings;
};

// Decomposes each gang's induced subgraph (in parallel) and reports the seed
// size as a percentage of the gang. Empty gangs are skipped with a warning.
SeedSetSummary seed_set_report(const CoArrestNetwork& net, const GangMembers& gangs,
                               const GroupTags& groups = {});

// Mean of `first` minus mean of `second`; nullopt when either is absent.
std::optional<double> group_gap(const std::map<std::string, double>& means,
                                const std::string& first, const std::string& second);

}  // namespace coarrest
