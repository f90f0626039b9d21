#include "coarrest/community.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

#include "coarrest/errors.hpp"
#include "coarrest/kernels.hpp"

namespace coarrest {

double modularity(const CoArrestNetwork& net, std::span<const int> community) {
  const std::int64_t m = net.total_weight();
  if (m == 0) throw AnalysisError("modularity is undefined for a graph without edges");
  if (community.size() != net.num_vertices()) {
    throw InputError("partition size does not match the network");
  }
  int q = 0;
  for (int c : community) {
    if (c < 0) throw InputError("negative community id");
    q = std::max(q, c + 1);
  }
  const auto sums = kernels::omp::community_sums(net, community, q);
  // sum_c (internal_c * 2m - total_c^2) / (2m)^2, numerator exact.
  const std::int64_t two_m = 2 * m;
  std::int64_t numerator = 0;
  for (int c = 0; c < q; ++c) {
    numerator += sums.internal[c] * two_m - sums.total[c] * sums.total[c];
  }
  return static_cast<double>(numerator) /
         (static_cast<double>(two_m) * static_cast<double>(two_m));
}

int canonicalize_communities(std::vector<int>& community) {
  std::map<int, std::pair<std::size_t, std::size_t>> info;  // id -> (size, first vertex)
  for (std::size_t v = 0; v < community.size(); ++v) {
    auto [it, fresh] = info.try_emplace(community[v], 0, v);
    ++it->second.first;
  }
  std::vector<std::pair<int, std::pair<std::size_t, std::size_t>>> order(info.begin(), info.end());
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second.first != b.second.first) return a.second.first > b.second.first;
    return a.second.second < b.second.second;
  });
  std::map<int, int> relabel;
  for (std::size_t k = 0; k < order.size(); ++k) relabel[order[k].first] = static_cast<int>(k);
  for (auto& c : community) c = relabel[c];
  return static_cast<int>(order.size());
}

namespace {

// Graph of one Louvain level. Internal (self-loop) weight is folded into k
// and never moves, so only inter-node adjacency is stored.
constexpr int kLouvainRuns = 16;
constexpr std::uint64_t kLouvainSeed = 0x5eed;
constexpr int kTuneHorizon = 64;

struct LevelGraph {
  std::vector<std::vector<std::pair<int, std::int64_t>>> adjacency;
  std::vector<std::int64_t> k;

  int size() const { return static_cast<int>(k.size()); }
};

LevelGraph level_from_network(const CoArrestNetwork& net) {
  LevelGraph g;
  const auto n = static_cast<VertexId>(net.num_vertices());
  g.adjacency.resize(n);
  g.k.resize(n);
  for (VertexId v = 0; v < n; ++v) {
    auto nb = net.neighbors(v);
    auto w = net.neighbor_weights(v);
    for (std::size_t j = 0; j < nb.size(); ++j) g.adjacency[v].emplace_back(nb[j], w[j]);
    g.k[v] = net.weighted_degree(v);
  }
  return g;
}

// Local moving from the partition in `comm` until no vertex moves. Moving
// i into community c changes modularity in proportion to
// k_i,c * 2m - tot_c * k_i, which is compared exactly.
void local_moves(const LevelGraph& g, std::int64_t two_m, const std::vector<int>& order,
                 std::vector<int>& comm) {
  const int n = g.size();
  std::vector<std::int64_t> tot(n, 0);
  std::vector<int> size(n, 0);
  for (int i = 0; i < n; ++i) {
    tot[comm[i]] += g.k[i];
    ++size[comm[i]];
  }
  std::set<int> empty;
  for (int c = 0; c < n; ++c) {
    if (size[c] == 0) empty.insert(c);
  }
  std::vector<std::int64_t> link(n, -1);
  std::vector<int> touched;

  bool moved = true;
  while (moved) {
    moved = false;
    for (int i : order) {
      const int own = comm[i];
      const std::int64_t ki = g.k[i];
      touched.clear();
      for (auto [j, w] : g.adjacency[i]) {
        const int c = comm[j];
        if (link[c] < 0) {
          link[c] = 0;
          touched.push_back(c);
        }
        link[c] += w;
      }
      tot[own] -= ki;
      const std::int64_t own_link = link[own] < 0 ? 0 : link[own];
      int best = own;
      std::int64_t best_gain = own_link * two_m - tot[own] * ki;
      std::sort(touched.begin(), touched.end());
      for (int c : touched) {
        if (c == own) continue;
        const std::int64_t gain = link[c] * two_m - tot[c] * ki;
        if (gain > best_gain) {
          best = c;
          best_gain = gain;
        }
      }
      // Leaving for an empty community gains nothing, which still beats a
      // community i no longer fits.
      if (best_gain < 0 && size[own] > 1) best = *empty.begin();
      tot[best] += ki;
      if (best != own) {
        comm[i] = best;
        if (--size[own] == 0) empty.insert(own);
        if (size[best]++ == 0) empty.erase(best);
        moved = true;
      }
      for (int c : touched) link[c] = -1;
    }
  }
}

// Splits each community of `comm` back into well-connected pieces: every
// still-alone node merges into the neighbouring piece of its own community
// with the largest strictly positive gain. Aggregating the pieces instead of
// the communities lets the next level undo a poor greedy merge.
std::vector<int> refine(const LevelGraph& g, std::int64_t two_m, const std::vector<int>& comm) {
  const int n = g.size();
  std::vector<int> piece(n);
  std::iota(piece.begin(), piece.end(), 0);
  std::vector<std::int64_t> comm_tot(n, 0);
  for (int i = 0; i < n; ++i) comm_tot[comm[i]] += g.k[i];
  std::vector<std::int64_t> tot(g.k);
  std::vector<std::int64_t> ext(n, 0);  // weight from a piece to the rest of its community
  for (int i = 0; i < n; ++i) {
    for (auto [j, w] : g.adjacency[i]) {
      if (comm[j] == comm[i]) ext[i] += w;
    }
  }
  std::vector<std::uint8_t> alone(n, 1);
  std::vector<std::int64_t> link(n, -1);
  std::vector<int> touched;

  auto well_connected = [&](std::int64_t e, std::int64_t k, std::int64_t total) {
    return e * two_m >= k * (total - k);
  };

  for (int i = 0; i < n; ++i) {
    if (!alone[i]) continue;
    const std::int64_t whole = comm_tot[comm[i]];
    if (!well_connected(ext[i], g.k[i], whole)) continue;
    touched.clear();
    for (auto [j, w] : g.adjacency[i]) {
      if (comm[j] != comm[i]) continue;
      const int r = piece[j];
      if (link[r] < 0) {
        link[r] = 0;
        touched.push_back(r);
      }
      link[r] += w;
    }
    std::sort(touched.begin(), touched.end());
    int best = -1;
    std::int64_t best_gain = 0;
    for (int r : touched) {
      if (r == piece[i] || !well_connected(ext[r], tot[r], whole)) continue;
      const std::int64_t gain = link[r] * two_m - tot[r] * g.k[i];
      if (gain > best_gain) {
        best = r;
        best_gain = gain;
      }
    }
    if (best >= 0) {
      ext[best] += ext[i] - 2 * link[best];
      tot[best] += g.k[i];
      tot[i] = 0;
      alone[best] = 0;
      alone[i] = 0;
      piece[i] = best;
    }
    for (int r : touched) link[r] = -1;
  }
  return piece;
}

int count_distinct(const std::vector<int>& ids) {
  std::vector<std::uint8_t> seen(ids.size(), 0);
  int q = 0;
  for (int c : ids) {
    if (!seen[c]) {
      seen[c] = 1;
      ++q;
    }
  }
  return q;
}

// Renumbers `comm` compactly by first appearance and builds the next level.
LevelGraph aggregate(const LevelGraph& g, std::vector<int>& comm) {
  std::vector<int> renumber(g.size(), -1);
  int q = 0;
  for (auto& c : comm) {
    if (renumber[c] < 0) renumber[c] = q++;
    c = renumber[c];
  }
  LevelGraph next;
  next.k.assign(q, 0);
  std::vector<std::map<int, std::int64_t>> links(q);
  for (int i = 0; i < g.size(); ++i) {
    next.k[comm[i]] += g.k[i];
    for (auto [j, w] : g.adjacency[i]) {
      if (comm[i] != comm[j]) links[comm[i]][comm[j]] += w;
    }
  }
  next.adjacency.resize(q);
  for (int c = 0; c < q; ++c) next.adjacency[c].assign(links[c].begin(), links[c].end());
  return next;
}


// One multilevel pass starting from `comm` on the vertex graph; returns the
// resulting vertex partition.
// Visiting order for one level: ascending ids, or a Fisher-Yates shuffle
// drawn from `rng` (spelled out so the result does not depend on the
// standard library's std::shuffle).
std::vector<int> visit_order(int n, std::mt19937_64* rng) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (rng) {
    for (int i = n - 1; i > 0; --i) {
      std::swap(order[i], order[(*rng)() % static_cast<std::uint64_t>(i + 1)]);
    }
  }
  return order;
}

std::vector<int> multilevel_pass(const LevelGraph& base, std::int64_t two_m,
                                 std::vector<int> comm, std::mt19937_64* rng) {
  const int n = base.size();
  LevelGraph g = base;
  std::vector<int> node(n);  // vertex -> node of the current level
  std::iota(node.begin(), node.end(), 0);
  while (true) {
    local_moves(g, two_m, visit_order(g.size(), rng), comm);
    if (count_distinct(comm) == g.size()) break;
    auto groups = refine(g, two_m, comm);
    if (count_distinct(groups) == g.size()) groups = comm;
    LevelGraph next = aggregate(g, groups);
    // Aggregated nodes start out in the community their members were in.
    std::vector<int> next_comm(next.size());
    for (int i = 0; i < g.size(); ++i) next_comm[groups[i]] = comm[i];
    std::vector<int> renumber(g.size(), -1);
    int q = 0;
    for (auto& c : next_comm) {
      if (renumber[c] < 0) renumber[c] = q++;
      c = renumber[c];
    }
    for (auto& v : node) v = groups[v];
    g = std::move(next);
    comm = std::move(next_comm);
  }
  std::vector<int> out(n);
  for (int v = 0; v < n; ++v) out[v] = comm[node[v]];
  return out;
}

// Kernighan-Lin style fine tuning: every vertex makes its best single move
// (into a neighbouring or an empty community, even at a loss) and is then
// locked. The best prefix of that sequence is kept. Sequences stop after
// kTuneHorizon moves; repeats while the kept prefix improves.
void fine_tune(const LevelGraph& g, std::int64_t two_m, std::vector<int>& comm) {
  const int n = g.size();
  std::vector<std::int64_t> link(n, -1);
  std::vector<int> touched;
  while (true) {
    std::vector<std::int64_t> tot(n, 0);
    std::vector<int> size(n, 0);
    for (int i = 0; i < n; ++i) {
      tot[comm[i]] += g.k[i];
      ++size[comm[i]];
    }
    std::vector<char> locked(n, 0);
    std::vector<std::pair<int, int>> moves;  // (vertex, previous community)
    std::int64_t running = 0, best_total = 0;
    std::size_t best_prefix = 0;
    for (int step = 0; step < std::min(n, kTuneHorizon); ++step) {
      int pick = -1, pick_to = -1;
      std::int64_t pick_gain = 0;
      for (int i = 0; i < n; ++i) {
        if (locked[i]) continue;
        const int own = comm[i];
        const std::int64_t ki = g.k[i];
        touched.clear();
        for (auto [j, w] : g.adjacency[i]) {
          const int c = comm[j];
          if (link[c] < 0) {
            link[c] = 0;
            touched.push_back(c);
          }
          link[c] += w;
        }
        const std::int64_t own_link = link[own] < 0 ? 0 : link[own];
        const std::int64_t stay = own_link * two_m - (tot[own] - ki) * ki;
        std::sort(touched.begin(), touched.end());
        int to = -1;
        std::int64_t gain = 0;
        for (int c : touched) {
          if (c == own) continue;
          const std::int64_t g_c = link[c] * two_m - tot[c] * ki - stay;
          if (to < 0 || g_c > gain) {
            to = c;
            gain = g_c;
          }
        }
        if (size[own] > 1 && (to < 0 || -stay > gain)) {
          to = static_cast<int>(std::find(size.begin(), size.end(), 0) - size.begin());
          gain = -stay;
        }
        for (int c : touched) link[c] = -1;
        if (to >= 0 && (pick < 0 || gain > pick_gain)) {
          pick = i;
          pick_to = to;
          pick_gain = gain;
        }
      }
      if (pick < 0) break;
      const int from = comm[pick];
      tot[from] -= g.k[pick];
      --size[from];
      tot[pick_to] += g.k[pick];
      ++size[pick_to];
      comm[pick] = pick_to;
      locked[pick] = 1;
      moves.emplace_back(pick, from);
      running += pick_gain;
      if (running > best_total) {
        best_total = running;
        best_prefix = moves.size();
      }
    }
    for (std::size_t s = moves.size(); s > best_prefix; --s) {
      comm[moves[s - 1].first] = moves[s - 1].second;
    }
    if (best_total <= 0) return;
  }
}

std::int64_t modularity_numerator(const CoArrestNetwork& net, const std::vector<int>& comm) {
  const auto sums = kernels::omp::community_sums(net, comm, static_cast<int>(comm.size()));
  const std::int64_t two_m = 2 * net.total_weight();
  std::int64_t numerator = 0;
  for (std::size_t c = 0; c < sums.total.size(); ++c) {
    numerator += sums.internal[c] * two_m - sums.total[c] * sums.total[c];
  }
  return numerator;
}

}  // namespace

Partition louvain(const CoArrestNetwork& net) {
  const auto n = static_cast<int>(net.num_vertices());
  Partition out;
  out.community.resize(n);
  std::iota(out.community.begin(), out.community.end(), 0);
  if (net.total_weight() == 0) {
    out.num_communities = n;
    return out;
  }

  const std::int64_t two_m = 2 * net.total_weight();
  const LevelGraph base = level_from_network(net);
  std::vector<int> best;
  std::int64_t best_score = 0;
  std::mt19937_64 rng(kLouvainSeed);
  for (int run = 0; run < kLouvainRuns; ++run) {
    std::mt19937_64* order = run == 0 ? nullptr : &rng;
    std::vector<int> start(n);
    std::iota(start.begin(), start.end(), 0);
    auto comm = multilevel_pass(base, two_m, std::move(start), order);
    auto score = modularity_numerator(net, comm);
    // Further passes start from the previous partition and are kept only
    // while they strictly improve it.
    while (true) {
      auto next = multilevel_pass(base, two_m, comm, order);
      const auto next_score = modularity_numerator(net, next);
      if (next_score <= score) break;
      comm = std::move(next);
      score = next_score;
    }
    if (best.empty() || score > best_score) {
      best = std::move(comm);
      best_score = score;
    }
  }
  // Polish the winner, alternating with multilevel passes while that helps.
  while (true) {
    auto next = best;
    fine_tune(base, two_m, next);
    next = multilevel_pass(base, two_m, std::move(next), nullptr);
    const auto next_score = modularity_numerator(net, next);
    if (next_score <= best_score) break;
    best = std::move(next);
    best_score = next_score;
  }
  out.community = std::move(best);
  out.num_communities = canonicalize_communities(out.community);
  out.modularity = modularity(net, out.community);
  return out;
}

GangPartition partition_gang(const CoArrestNetwork& net, const std::string& gang,
                             std::span<const std::string> members) {
  std::unordered_set<std::string> keep(members.begin(), members.end());
  auto sub = induced_subgraph(net, [&](const PersonNode& p) { return keep.contains(p.id); });
  auto part = louvain(sub);

  GangPartition out;
  out.gang = gang;
  if (sub.total_weight() > 0) out.modularity = part.modularity;
  out.subgroups.resize(part.num_communities);
  for (int c = 0; c < part.num_communities; ++c) {
    out.subgroups[c].id = gang + "." + std::to_string(c + 1);
    out.subgroups[c].gang = gang;
  }
  for (VertexId v = 0; v < static_cast<VertexId>(sub.num_vertices()); ++v) {
    out.subgroups[part.community[v]].members.push_back(sub.id(v));
  }
  return out;
}

std::string EcosystemEdge::provenance() const {
  if (ties > 0 && shared_members > 0) return "mixed";
  return shared_members > 0 ? "shared member" : "social tie";
}

namespace {

// Flat list of all subgroups and, per vertex, the subgroups it belongs to.
struct SubgroupIndex {
  std::vector<const Subgroup*> subgroups;
  std::vector<std::vector<int>> home;

  SubgroupIndex(const CoArrestNetwork& net, std::span<const GangPartition> partitions)
      : home(net.num_vertices()) {
    for (const auto& part : partitions) {
      for (const auto& sg : part.subgroups) {
        const int idx = static_cast<int>(subgroups.size());
        subgroups.push_back(&sg);
        for (const auto& id : sg.members) {
          if (auto v = net.find(id)) home[*v].push_back(idx);
        }
      }
    }
    for (auto& h : home) {
      std::sort(h.begin(), h.end());
      h.erase(std::unique(h.begin(), h.end()), h.end());
    }
  }

  // Subgroups touched by v other than its own; a person with several
  // homes (claims on several gangs) has no single own subgroup.
  std::set<int> touched(const CoArrestNetwork& net, VertexId v) const {
    std::set<int> out;
    for (auto u : net.neighbors(v)) out.insert(home[u].begin(), home[u].end());
    if (home[v].size() == 1) {
      out.erase(home[v][0]);
    } else {
      out.insert(home[v].begin(), home[v].end());
    }
    return out;
  }
};

std::vector<Connector> connectors_from(const CoArrestNetwork& net, const SubgroupIndex& index,
                                       int threshold) {
  std::vector<Connector> out;
  for (VertexId v = 0; v < static_cast<VertexId>(net.num_vertices()); ++v) {
    auto touched = index.touched(net, v);
    if (static_cast<int>(touched.size()) < threshold) continue;
    Connector c{net.id(v), {}};
    for (int s : touched) c.touched.push_back(index.subgroups[s]->id);
    std::sort(c.touched.begin(), c.touched.end());
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const Connector& a, const Connector& b) {
    if (a.touched.size() != b.touched.size()) return a.touched.size() > b.touched.size();
    return a.person < b.person;
  });
  return out;
}

}  // namespace

std::vector<Connector> find_connectors(const CoArrestNetwork& net,
                                       std::span<const GangPartition> partitions,
                                       int threshold) {
  return connectors_from(net, SubgroupIndex(net, partitions), threshold);
}

Ecosystem build_ecosystem(const CoArrestNetwork& net,
                          std::span<const GangPartition> partitions,
                          const std::string& focal, int connector_threshold) {
  if (std::none_of(partitions.begin(), partitions.end(),
                   [&](const GangPartition& p) { return p.gang == focal; })) {
    throw InputError("no partition for focal gang '" + focal + "'");
  }
  const SubgroupIndex index(net, partitions);
  const int count = static_cast<int>(index.subgroups.size());
  auto is_focal = [&](int s) { return index.subgroups[s]->gang == focal; };

  std::map<std::pair<int, int>, EcosystemEdge> links;
  auto link = [&](int s, int t) -> EcosystemEdge& {
    return links[{std::min(s, t), std::max(s, t)}];
  };
  for (const auto& e : net.edges()) {
    std::set<std::pair<int, int>> pairs;
    for (int s : index.home[e.u]) {
      for (int t : index.home[e.v]) {
        if (s != t) pairs.emplace(std::min(s, t), std::max(s, t));
      }
    }
    for (auto [s, t] : pairs) {
      auto& edge = link(s, t);
      ++edge.ties;
      edge.co_arrest_weight += e.weight;
    }
  }
  for (const auto& home : index.home) {
    for (std::size_t x = 0; x < home.size(); ++x) {
      for (std::size_t y = x + 1; y < home.size(); ++y) ++link(home[x], home[y]).shared_members;
    }
  }

  std::vector<std::uint8_t> include(count, 0);
  for (int s = 0; s < count; ++s) include[s] = is_focal(s) ? 1 : 0;
  for (const auto& [key, edge] : links) {
    if (edge.weight() == 0) continue;
    if (is_focal(key.first)) include[key.second] = 1;
    if (is_focal(key.second)) include[key.first] = 1;
  }

  Ecosystem eco;
  eco.focal = focal;
  for (int s = 0; s < count; ++s) {
    if (include[s] && is_focal(s)) eco.nodes.push_back(*index.subgroups[s]);
  }
  for (int s = 0; s < count; ++s) {
    if (include[s] && !is_focal(s)) eco.nodes.push_back(*index.subgroups[s]);
  }
  for (const auto& [key, edge] : links) {
    if (edge.weight() == 0 || !(is_focal(key.first) || is_focal(key.second))) continue;
    auto out = edge;
    out.a = index.subgroups[key.first]->id;
    out.b = index.subgroups[key.second]->id;
    eco.edges.push_back(std::move(out));
  }

  std::set<std::string> focal_ids;
  for (int s = 0; s < count; ++s) {
    if (is_focal(s)) focal_ids.insert(index.subgroups[s]->id);
  }
  for (auto& c : connectors_from(net, index, connector_threshold)) {
    const auto v = *net.find(c.person);
    bool relevant = std::any_of(index.home[v].begin(), index.home[v].end(), is_focal) ||
                    std::any_of(c.touched.begin(), c.touched.end(),
                                [&](const std::string& id) { return focal_ids.contains(id); });
    if (relevant) eco.connectors.push_back(std::move(c));
  }
  return eco;
}

}  // namespace coarrest
