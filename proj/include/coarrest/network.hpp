#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coarrest/ingest.hpp"

namespace coarrest {

// Dense vertex index. Vertices are numbered in ascending person-id order, so
// index order doubles as the deterministic processing order everywhere.
using VertexId = std::int32_t;

struct PersonNode {
  std::string id;
  std::set<std::string> admitted_gangs;
  int arrest_count = 0;

  bool operator==(const PersonNode&) const = default;
};

struct IndexEdge {
  VertexId u;
  VertexId v;
  std::int64_t weight;

  bool operator==(const IndexEdge&) const = default;
};

// Immutable undirected weighted graph in CSR form. Two degree notions are
// kept apart: degree() counts distinct neighbours (d_i), weighted_degree()
// sums incident weights (k_i). total_weight() is m, and the handshake
// identity sum_i k_i == 2m holds exactly.
class CoArrestNetwork {
 public:
  CoArrestNetwork() = default;

  // `nodes` must be sorted by id without duplicates. Edges are accumulated
  // by unordered pair; self loops and non-positive weights are dropped.
  CoArrestNetwork(std::vector<PersonNode> nodes, std::vector<IndexEdge> edges);

  std::size_t num_vertices() const noexcept { return nodes_.size(); }
  std::size_t num_edges() const noexcept { return adjacency_.size() / 2; }
  std::int64_t total_weight() const noexcept { return total_weight_; }
  int max_degree() const noexcept { return max_degree_; }

  int degree(VertexId v) const {
    return static_cast<int>(offsets_[v + 1] - offsets_[v]);
  }
  std::int64_t weighted_degree(VertexId v) const { return weighted_degree_[v]; }

  // Sorted ascending.
  std::span<const VertexId> neighbors(VertexId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::span<const std::int64_t> neighbor_weights(VertexId v) const {
    return {weights_.data() + offsets_[v], weights_.data() + offsets_[v + 1]};
  }

  const PersonNode& node(VertexId v) const { return nodes_[v]; }
  std::span<const PersonNode> nodes() const noexcept { return nodes_; }
  const std::string& id(VertexId v) const { return nodes_[v].id; }

  std::optional<VertexId> find(std::string_view id) const;
  // Throws InputError for an unknown id.
  VertexId index_of(std::string_view id) const;

  bool is_admitted(VertexId v, const std::string& gang) const {
    return nodes_[v].admitted_gangs.contains(gang);
  }

  // Edge weight, 0 when the pair is not adjacent.
  std::int64_t weight(VertexId u, VertexId v) const;

  // All gangs with at least one admitted member, sorted.
  std::vector<std::string> gangs() const;

  // Each edge once with u < v, in (u, v) order.
  std::vector<IndexEdge> edges() const;

  bool operator==(const CoArrestNetwork&) const = default;

 private:
  std::vector<PersonNode> nodes_;
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> adjacency_;
  std::vector<std::int64_t> weights_;
  std::vector<std::int64_t> weighted_degree_;
  std::int64_t total_weight_ = 0;
  int max_degree_ = 0;
};

// One node per distinct person id across both inputs. Gang claims become
// admitted gangs; arrest_count is the number of distinct arrests.
CoArrestNetwork build_network(std::span<const ArrestRecord> arrests,
                              std::span<const RelationshipRecord> edges);

CoArrestNetwork induced_subgraph(const CoArrestNetwork& net,
                                 const std::function<bool(const PersonNode&)>& keep);

// Components ordered by their smallest vertex; members ascending.
std::vector<std::vector<VertexId>> connected_components(const CoArrestNetwork& net);

nlohmann::json to_json(const CoArrestNetwork& net);
CoArrestNetwork network_from_json(const nlohmann::json& doc);

}  // namespace coarrest
