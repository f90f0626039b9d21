#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coarrest/network.hpp"
#include "coarrest/tipping.hpp"

namespace coarrest {

struct Partition {
  // Community of each vertex. Ids are 0..num_communities-1, ordered by size
  // descending, then by smallest member.
  std::vector<int> community;
  int num_communities = 0;
  double modularity = 0.0;
};

// M(C) = 1/(2m) * sum_c sum_{i,j in c} (w_ij - k_i k_j / 2m), evaluated from
// exact integer per-community sums. Throws AnalysisError when m == 0.
double modularity(const CoArrestNetwork& net, std::span<const int> community);

// Relabels communities by size descending, then smallest member.
int canonicalize_communities(std::vector<int>& community);

// Two-phase Louvain with deterministic order: vertices ascending, ties in
// gain resolved toward the lowest community id, a vertex only moves on a
// strict gain. Gains are compared in exact integer arithmetic. An edgeless
// graph yields the all-singleton partition with modularity 0.
Partition louvain(const CoArrestNetwork& net);

struct Subgroup {
  std::string id;  // "<gang>.<index>", index from 1 by size
  std::string gang;
  std::vector<std::string> members;

  bool operator==(const Subgroup&) const = default;
};

struct GangPartition {
  std::string gang;
  std::string group;
  std::optional<double> modularity;  // absent when the gang has no internal ties
  std::vector<Subgroup> subgroups;

  bool operator==(const GangPartition&) const = default;
};

// Louvain over the subgraph induced by `members`.
GangPartition partition_gang(const CoArrestNetwork& net, const std::string& gang,
                             std::span<const std::string> members);

struct EcosystemEdge {
  std::string a;  // a precedes b in partition order
  std::string b;
  std::int64_t ties = 0;            // person-level edges between the subgroups
  std::int64_t shared_members = 0;  // persons whose claims place them in both
  std::int64_t co_arrest_weight = 0;

  std::int64_t weight() const noexcept { return ties + shared_members; }
  std::string provenance() const;  // "social tie", "shared member" or "mixed"

  bool operator==(const EcosystemEdge&) const = default;
};

struct Connector {
  std::string person;
  std::vector<std::string> touched;  // subgroup ids, sorted

  bool operator==(const Connector&) const = default;
};

struct Ecosystem {
  std::string focal;
  std::vector<Subgroup> nodes;      // focal subgroups first, then foreign, by id
  std::vector<EcosystemEdge> edges; // every edge has a focal endpoint
  std::vector<Connector> connectors;

  bool operator==(const Ecosystem&) const = default;
};

// Persons touching at least `threshold` subgroups other than their own,
// through neighbours or through claims on several gangs. Sorted by number
// of touched subgroups descending, then id.
std::vector<Connector> find_connectors(const CoArrestNetwork& net,
                                       std::span<const GangPartition> partitions,
                                       int threshold = 2);

// Subgroup graph around `focal`: all focal subgroups plus every foreign
// subgroup linked to one of them. Throws InputError when `focal` has no
// partition. Connectors are those touching or belonging to a focal subgroup.
Ecosystem build_ecosystem(const CoArrestNetwork& net,
                          std::span<const GangPartition> partitions,
                          const std::string& focal, int connector_threshold = 2);

}  // namespace coarrest
