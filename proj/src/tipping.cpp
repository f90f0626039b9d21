#include "coarrest/tipping.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "coarrest/errors.hpp"
#include "coarrest/kernels.hpp"
#include "parallel.hpp"

namespace coarrest {

TipDecomposition tip_decomp(const CoArrestNetwork& net) {
  const auto n = static_cast<VertexId>(net.num_vertices());
  std::vector<int> dist(n);
  std::vector<std::uint8_t> removed(n, 0);
  std::set<std::pair<int, VertexId>> queue;  // (dist, vertex): min dist, then smallest id
  for (VertexId v = 0; v < n; ++v) {
    dist[v] = net.degree(v) / 2;
    queue.emplace(dist[v], v);
  }

  TipDecomposition out;
  out.trace.reserve(n);
  while (!queue.empty()) {
    auto [d, v] = *queue.begin();
    queue.erase(queue.begin());
    removed[v] = 1;
    out.trace.push_back({v, d});
    for (auto u : net.neighbors(v)) {
      if (removed[u] || dist[u] == kSaturated) continue;
      queue.erase({dist[u], u});
      if (dist[u] > 0) {
        --dist[u];
        queue.emplace(dist[u], u);
      } else {
        dist[u] = kSaturated;
      }
    }
  }
  for (VertexId v = 0; v < n; ++v) {
    if (!removed[v]) out.seeds.push_back(v);
  }
  return out;
}

std::size_t CascadeState::infected_count() const {
  return static_cast<std::size_t>(std::count(infected.begin(), infected.end(), 1));
}

CascadeState simulate_cascade(const CoArrestNetwork& net, std::span<const VertexId> seeds) {
  const auto n = static_cast<VertexId>(net.num_vertices());
  CascadeState state;
  state.infected.assign(n, 0);
  auto& first = state.rounds.emplace_back();
  for (auto s : seeds) {
    if (s < 0 || s >= n) throw InputError("seed vertex out of range");
    if (!state.infected[s]) {
      state.infected[s] = 1;
      first.push_back(s);
    }
  }
  std::sort(first.begin(), first.end());

  while (true) {
    auto fresh = kernels::omp::cascade_round(net, state.infected);
    if (fresh.empty()) break;
    for (auto v : fresh) state.infected[v] = 1;
    state.rounds.push_back(std::move(fresh));
  }
  return state;
}

CascadeState simulate_cascade(const CoArrestNetwork& net,
                              std::span<const std::string> seed_ids) {
  std::vector<VertexId> seeds;
  seeds.reserve(seed_ids.size());
  for (const auto& id : seed_ids) seeds.push_back(net.index_of(id));
  return simulate_cascade(net, seeds);
}

// Batagelj-Zaversnik bucket peeling, O(n + m).
std::vector<int> shell_numbers(const CoArrestNetwork& net) {
  const auto n = static_cast<VertexId>(net.num_vertices());
  std::vector<int> deg(n), shell(n, 0);
  const int max_deg = net.max_degree();
  std::vector<int> bin(max_deg + 2, 0);
  for (VertexId v = 0; v < n; ++v) {
    deg[v] = net.degree(v);
    ++bin[deg[v]];
  }
  int start = 0;
  for (int d = 0; d <= max_deg; ++d) {
    int count = bin[d];
    bin[d] = start;
    start += count;
  }
  std::vector<VertexId> order(n);
  std::vector<int> pos(n);
  for (VertexId v = 0; v < n; ++v) {
    pos[v] = bin[deg[v]]++;
    order[pos[v]] = v;
  }
  for (int d = max_deg; d >= 1; --d) bin[d] = bin[d - 1];
  if (max_deg >= 0) bin[0] = 0;

  for (int k = 0; k < n; ++k) {
    const VertexId v = order[k];
    shell[v] = deg[v];
    for (auto u : net.neighbors(v)) {
      if (deg[u] > deg[v]) {
        const int du = deg[u];
        const int pu = pos[u];
        const int pw = bin[du];
        const VertexId w = order[pw];
        if (u != w) {
          pos[u] = pw;
          order[pu] = w;
          pos[w] = pu;
          order[pw] = u;
        }
        ++bin[du];
        --deg[u];
      }
    }
  }
  return shell;
}

SeedSetSummary seed_set_report(const CoArrestNetwork& net, const GangMembers& gangs,
                               const GroupTags& groups) {
  SeedSetSummary summary;
  std::vector<const std::pair<const std::string, std::vector<std::string>>*> work;
  for (const auto& entry : gangs) {
    if (entry.second.empty()) {
      summary.warnings.push_back("gang '" + entry.first + "' has no members; omitted");
    } else {
      work.push_back(&entry);
    }
  }

  summary.gangs.resize(work.size());
  detail::parallel_for(static_cast<std::ptrdiff_t>(work.size()), [&](std::ptrdiff_t g) {
    const auto& [gang, members] = *work[g];
    std::unordered_set<std::string> keep(members.begin(), members.end());
    auto sub = induced_subgraph(net, [&](const PersonNode& p) { return keep.contains(p.id); });
    auto decomposition = tip_decomp(sub);
    auto shells = shell_numbers(sub);

    auto& rep = summary.gangs[g];
    rep.gang = gang;
    if (auto it = groups.find(gang); it != groups.end()) rep.group = it->second;
    rep.members = sub.num_vertices();
    for (auto v : decomposition.seeds) rep.seed.push_back(sub.id(v));
    rep.seed_pct = rep.members == 0 ? 0.0
                                    : 100.0 * static_cast<double>(rep.seed.size()) /
                                          static_cast<double>(rep.members);
    for (const auto& step : decomposition.trace) rep.trace.emplace_back(sub.id(step.vertex), step.dist);
    for (VertexId v = 0; v < static_cast<VertexId>(sub.num_vertices()); ++v) {
      rep.shells[sub.id(v)] = shells[v];
    }
  });

  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& rep : summary.gangs) {
    if (rep.group.empty()) continue;
    acc[rep.group].first += rep.seed_pct;
    ++acc[rep.group].second;
  }
  for (const auto& [group, sum] : acc) summary.group_mean_pct[group] = sum.first / sum.second;
  return summary;
}

std::optional<double> group_gap(const std::map<std::string, double>& means,
                                const std::string& first, const std::string& second) {
  auto a = means.find(first);
  auto b = means.find(second);
  if (a == means.end() || b == means.end()) return std::nullopt;
  return a->second - b->second;
}

}  // namespace coarrest
