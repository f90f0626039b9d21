#include "coarrest/network.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "coarrest/errors.hpp"

namespace coarrest {

CoArrestNetwork::CoArrestNetwork(std::vector<PersonNode> nodes, std::vector<IndexEdge> edges)
    : nodes_(std::move(nodes)) {
  const auto n = nodes_.size();
  for (std::size_t k = 1; k < n; ++k) {
    if (!(nodes_[k - 1].id < nodes_[k].id)) {
      throw InputError("network nodes must be sorted by unique id");
    }
  }

  // Canonicalize and merge parallel edges.
  std::erase_if(edges, [](const IndexEdge& e) { return e.u == e.v || e.weight <= 0; });
  for (auto& e : edges) {
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n ||
        static_cast<std::size_t>(e.v) >= n) {
      throw InputError("edge endpoint out of range");
    }
    if (e.v < e.u) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const IndexEdge& a, const IndexEdge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  std::vector<IndexEdge> merged;
  merged.reserve(edges.size());
  for (const auto& e : edges) {
    if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v) {
      merged.back().weight += e.weight;
    } else {
      merged.push_back(e);
    }
  }

  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : merged) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(offsets_[n]);
  weights_.resize(offsets_[n]);
  weighted_degree_.assign(n, 0);

  // Smaller neighbours first, then larger ones. Both runs come out ascending
  // because `merged` is sorted by (u, v).
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  std::vector<std::vector<std::pair<VertexId, std::int64_t>>> lower(n);
  for (const auto& e : merged) lower[e.v].emplace_back(e.u, e.weight);
  for (std::size_t x = 0; x < n; ++x) {
    for (auto [u, w] : lower[x]) {
      adjacency_[cursor[x]] = u;
      weights_[cursor[x]++] = w;
    }
  }
  for (const auto& e : merged) {
    adjacency_[cursor[e.u]] = e.v;
    weights_[cursor[e.u]++] = e.weight;
  }

  for (std::size_t v = 0; v < n; ++v) {
    weighted_degree_[v] = std::accumulate(weights_.begin() + offsets_[v],
                                          weights_.begin() + offsets_[v + 1], std::int64_t{0});
    max_degree_ = std::max(max_degree_, static_cast<int>(degree[v]));
  }
  for (const auto& e : merged) total_weight_ += e.weight;
}

std::optional<VertexId> CoArrestNetwork::find(std::string_view id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const PersonNode& n, std::string_view key) { return n.id < key; });
  if (it == nodes_.end() || it->id != id) return std::nullopt;
  return static_cast<VertexId>(it - nodes_.begin());
}

VertexId CoArrestNetwork::index_of(std::string_view id) const {
  if (auto v = find(id)) return *v;
  throw InputError("unknown person id '" + std::string(id) + "'");
}

std::int64_t CoArrestNetwork::weight(VertexId u, VertexId v) const {
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return 0;
  return neighbor_weights(u)[it - nb.begin()];
}

std::vector<std::string> CoArrestNetwork::gangs() const {
  std::set<std::string> all;
  for (const auto& node : nodes_) all.insert(node.admitted_gangs.begin(), node.admitted_gangs.end());
  return {all.begin(), all.end()};
}

std::vector<IndexEdge> CoArrestNetwork::edges() const {
  std::vector<IndexEdge> out;
  out.reserve(num_edges());
  for (VertexId u = 0; u < static_cast<VertexId>(nodes_.size()); ++u) {
    auto nb = neighbors(u);
    auto w = neighbor_weights(u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (u < nb[k]) out.push_back({u, nb[k], w[k]});
    }
  }
  return out;
}

CoArrestNetwork build_network(std::span<const ArrestRecord> arrests,
                              std::span<const RelationshipRecord> edges) {
  std::map<std::string, PersonNode> persons;
  std::map<std::string, std::set<std::string>> arrests_of;
  for (const auto& rec : arrests) {
    auto& node = persons[rec.person_id];
    node.id = rec.person_id;
    if (rec.gang_claim) node.admitted_gangs.insert(*rec.gang_claim);
    arrests_of[rec.person_id].insert(rec.arrest_id);
  }
  for (const auto& e : edges) {
    persons[e.person_a].id = e.person_a;
    persons[e.person_b].id = e.person_b;
  }

  std::vector<PersonNode> nodes;
  nodes.reserve(persons.size());
  for (auto& [id, node] : persons) {
    node.arrest_count = static_cast<int>(arrests_of[id].size());
    nodes.push_back(std::move(node));
  }

  auto index = [&](const std::string& id) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                               [](const PersonNode& n, const std::string& k) { return n.id < k; });
    return static_cast<VertexId>(it - nodes.begin());
  };
  std::vector<IndexEdge> indexed;
  indexed.reserve(edges.size());
  for (const auto& e : edges) indexed.push_back({index(e.person_a), index(e.person_b), e.weight});
  return CoArrestNetwork(std::move(nodes), std::move(indexed));
}

CoArrestNetwork induced_subgraph(const CoArrestNetwork& net,
                                 const std::function<bool(const PersonNode&)>& keep) {
  const auto n = static_cast<VertexId>(net.num_vertices());
  std::vector<VertexId> remap(n, -1);
  std::vector<PersonNode> nodes;
  for (VertexId v = 0; v < n; ++v) {
    if (keep(net.node(v))) {
      remap[v] = static_cast<VertexId>(nodes.size());
      nodes.push_back(net.node(v));
    }
  }
  std::vector<IndexEdge> edges;
  for (const auto& e : net.edges()) {
    if (remap[e.u] >= 0 && remap[e.v] >= 0) edges.push_back({remap[e.u], remap[e.v], e.weight});
  }
  return CoArrestNetwork(std::move(nodes), std::move(edges));
}

std::vector<std::vector<VertexId>> connected_components(const CoArrestNetwork& net) {
  const auto n = static_cast<VertexId>(net.num_vertices());
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<std::vector<VertexId>> out;
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < n; ++s) {
    if (seen[s]) continue;
    auto& comp = out.emplace_back();
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (auto u : net.neighbors(v)) {
        if (!seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
  }
  return out;
}

nlohmann::json to_json(const CoArrestNetwork& net) {
  auto nodes = nlohmann::json::array();
  for (const auto& node : net.nodes()) {
    nodes.push_back({{"id", node.id},
                     {"admitted_gangs", node.admitted_gangs},
                     {"arrest_count", node.arrest_count}});
  }
  auto edges = nlohmann::json::array();
  for (const auto& e : net.edges()) {
    edges.push_back({{"a", net.id(e.u)}, {"b", net.id(e.v)}, {"weight", e.weight}});
  }
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

CoArrestNetwork network_from_json(const nlohmann::json& doc) {
  try {
    std::vector<PersonNode> nodes;
    for (const auto& item : doc.at("nodes")) {
      PersonNode node;
      node.id = item.at("id").get<std::string>();
      node.admitted_gangs = item.value("admitted_gangs", std::set<std::string>{});
      node.arrest_count = item.value("arrest_count", 0);
      nodes.push_back(std::move(node));
    }
    std::sort(nodes.begin(), nodes.end(),
              [](const PersonNode& a, const PersonNode& b) { return a.id < b.id; });

    std::vector<RelationshipRecord> edges;
    for (const auto& item : doc.at("edges")) {
      edges.push_back({item.at("a").get<std::string>(), item.at("b").get<std::string>(),
                       item.value("weight", std::int64_t{1})});
    }
    CoArrestNetwork skeleton(nodes, {});
    std::vector<IndexEdge> indexed;
    for (const auto& e : edges) {
      indexed.push_back({skeleton.index_of(e.person_a), skeleton.index_of(e.person_b), e.weight});
    }
    return CoArrestNetwork(std::move(nodes), std::move(indexed));
  } catch (const nlohmann::json::exception& ex) {
    throw SchemaError(std::string("malformed network JSON: ") + ex.what());
  } catch (const InputError& ex) {
    throw SchemaError(std::string("malformed network JSON: ") + ex.what());
  }
}

}  // namespace coarrest
