#pragma once

// Independent reference implementations for the tests. Everything here is
// written straight from the definitions, favouring obviousness over speed,
// and shares no code with the library beyond the graph container.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "coarrest/network.hpp"

namespace oracle {

using coarrest::CoArrestNetwork;
using coarrest::IndexEdge;
using coarrest::PersonNode;
using coarrest::VertexId;

// ---- graph construction ----------------------------------------------------

// Zero-padded names keep vertex index order equal to creation order.
inline std::string vname(int i) { return fmt::format("v{:04d}", i); }

struct Spec {
  int n = 0;
  std::vector<std::tuple<int, int, std::int64_t>> edges;
  std::map<int, std::set<std::string>> gangs;
};

inline CoArrestNetwork make(const Spec& s) {
  std::vector<PersonNode> nodes(s.n);
  for (int i = 0; i < s.n; ++i) {
    nodes[i].id = vname(i);
    if (auto it = s.gangs.find(i); it != s.gangs.end()) nodes[i].admitted_gangs = it->second;
  }
  std::vector<IndexEdge> edges;
  for (auto [u, v, w] : s.edges) edges.push_back({u, v, w});
  return CoArrestNetwork(std::move(nodes), std::move(edges));
}

// Named construction for hand fixtures: ids are taken literally.
inline CoArrestNetwork make_named(std::vector<std::string> ids,
                                  const std::vector<std::pair<std::string, std::string>>& edges,
                                  const std::map<std::string, std::set<std::string>>& gangs = {}) {
  std::sort(ids.begin(), ids.end());
  std::vector<PersonNode> nodes;
  for (const auto& id : ids) {
    PersonNode p;
    p.id = id;
    if (auto it = gangs.find(id); it != gangs.end()) p.admitted_gangs = it->second;
    nodes.push_back(p);
  }
  auto idx = [&](const std::string& id) {
    return static_cast<VertexId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  std::vector<IndexEdge> out;
  for (const auto& [a, b] : edges) out.push_back({idx(a), idx(b), 1});
  return CoArrestNetwork(std::move(nodes), std::move(out));
}

// ---- random families -------------------------------------------------------

inline Spec erdos_renyi(int n, double p, std::mt19937_64& rng, int max_weight = 1) {
  Spec s;
  s.n = n;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> w(1, max_weight);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (u(rng) < p) s.edges.emplace_back(i, j, w(rng));
  return s;
}

inline Spec planted(int groups, int size, double p_in, double p_out, std::mt19937_64& rng,
                    int max_weight = 1) {
  Spec s;
  s.n = groups * size;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> w(1, max_weight);
  for (int i = 0; i < s.n; ++i)
    for (int j = i + 1; j < s.n; ++j)
      if (u(rng) < (i / size == j / size ? p_in : p_out)) s.edges.emplace_back(i, j, w(rng));
  return s;
}

inline Spec disjoint_cliques(const std::vector<int>& sizes) {
  Spec s;
  for (int k : sizes) {
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) s.edges.emplace_back(s.n + i, s.n + j, 1);
    s.n += k;
  }
  return s;
}

// `count` cliques of `size`, consecutive cliques joined by a single edge.
inline Spec clique_ring(int count, int size) {
  Spec s = disjoint_cliques(std::vector<int>(count, size));
  if (count > 1) {
    for (int c = 0; c < count; ++c) {
      int next = (c + 1) % count;
      if (count == 2 && c == 1) break;
      s.edges.emplace_back(c * size + size - 1, next * size, 1);
    }
  }
  return s;
}

// Random gang labels on a graph: each vertex admits to one of `gangs` with
// probability `rate`, rarely to two.
inline void label(Spec& s, int gangs, double rate, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> g(0, gangs - 1);
  for (int i = 0; i < s.n; ++i) {
    if (u(rng) >= rate) continue;
    s.gangs[i].insert(fmt::format("g{}", g(rng)));
    if (u(rng) < 0.05) s.gangs[i].insert(fmt::format("g{}", g(rng)));
  }
}

// ---- influence learning ----------------------------------------------------

inline int admitted_neighbours(const CoArrestNetwork& net, VertexId v, const std::string& gang) {
  int c = 0;
  for (VertexId u = 0; u < static_cast<VertexId>(net.num_vertices()); ++u)
    if (u != v && net.weight(u, v) > 0 && net.node(u).admitted_gangs.count(gang)) ++c;
  return c;
}

struct Learned {
  std::vector<double> R;  // R[0] = 0
  std::vector<std::int64_t> pos, tot;
};

// Literal double loop: for each i up to the maximum degree, scan every
// vertex and count.
inline Learned learn(const CoArrestNetwork& net, const std::string& gang) {
  int dmax = 0;
  for (VertexId v = 0; v < static_cast<VertexId>(net.num_vertices()); ++v)
    dmax = std::max(dmax, net.degree(v));
  Learned out;
  out.R.assign(dmax + 1, 0.0);
  out.pos.assign(dmax + 1, 0);
  out.tot.assign(dmax + 1, 0);
  for (int i = 1; i <= dmax; ++i) {
    std::int64_t pos = 0, neg = 0;
    for (VertexId v = 0; v < static_cast<VertexId>(net.num_vertices()); ++v) {
      if (admitted_neighbours(net, v, gang) < i) continue;
      if (net.node(v).admitted_gangs.count(gang)) ++pos; else ++neg;
    }
    out.pos[i] = pos;
    out.tot[i] = pos + neg;
    double r = out.R[i - 1];
    if (pos + neg > 0) {
      double p = double(pos) / double(pos + neg);
      double lb = p - 1.96 * std::sqrt(p * (1 - p) / double(pos + neg));
      lb = std::clamp(lb, 0.0, 1.0);
      if (lb > r) r = lb;
    }
    out.R[i] = r;
  }
  return out;
}

// ---- tipping ---------------------------------------------------------------

// Cascade to fixpoint, one vertex at a time. For a monotone threshold rule
// the final set does not depend on update order, so this matches any
// synchronous simulation in outcome.
inline std::vector<bool> spread(const CoArrestNetwork& net, const std::vector<VertexId>& seeds) {
  const int n = static_cast<int>(net.num_vertices());
  std::vector<bool> on(n, false);
  for (VertexId s : seeds) on[s] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      if (on[v]) continue;
      int active = 0;
      for (VertexId u : net.neighbors(v)) active += on[u];
      if (2 * active >= net.degree(v)) {
        on[v] = true;
        changed = true;
      }
    }
  }
  return on;
}

inline bool tips(const CoArrestNetwork& net, const std::vector<VertexId>& seeds) {
  auto on = spread(net, seeds);
  return std::all_of(on.begin(), on.end(), [](bool b) { return b; });
}

// Smallest seed set size by exhaustive search over subsets in size order.
// Vertices of degree zero activate on their own, so n <= ~20 is fine.
inline int min_seed_size(const CoArrestNetwork& net) {
  const int n = static_cast<int>(net.num_vertices());
  std::vector<std::uint32_t> masks(std::size_t(1) << n);
  for (std::uint32_t m = 0; m < masks.size(); ++m) masks[m] = m;
  std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    return __builtin_popcount(a) < __builtin_popcount(b);
  });
  for (std::uint32_t m : masks) {
    std::vector<VertexId> seeds;
    for (int v = 0; v < n; ++v)
      if (m >> v & 1u) seeds.push_back(v);
    if (tips(net, seeds)) return static_cast<int>(seeds.size());
  }
  return n;
}

// k-core index by repeated peeling: shell(v) is the largest k such that v
// survives in the k-core.
inline std::vector<int> shells(const CoArrestNetwork& net) {
  const int n = static_cast<int>(net.num_vertices());
  std::vector<int> shell(n, 0);
  for (int k = 1;; ++k) {
    std::vector<bool> alive(n, true);
    bool changed = true;
    while (changed) {
      changed = false;
      for (int v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        int d = 0;
        for (VertexId u : net.neighbors(v)) d += alive[u];
        if (d < k) {
          alive[v] = false;
          changed = true;
        }
      }
    }
    bool any = false;
    for (int v = 0; v < n; ++v)
      if (alive[v]) {
        shell[v] = k;
        any = true;
      }
    if (!any) break;
  }
  return shell;
}

// ---- modularity ------------------------------------------------------------

// 1/(2m) sum over all ordered pairs in the same community of
// (A_ij - k_i k_j / 2m), as a plain double sum.
inline double modularity(const CoArrestNetwork& net, const std::vector<int>& c) {
  const int n = static_cast<int>(net.num_vertices());
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      k[i] += double(net.weight(i, j));
    }
  for (double x : k) two_m += x;
  double q = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (c[i] == c[j]) q += double(net.weight(i, j)) - k[i] * k[j] / two_m;
  return q / two_m;
}

// Exact numerator (2m)^2 * M as an integer: sum_c in_c * 2m - tot_c^2.
inline std::int64_t modularity_numerator(const CoArrestNetwork& net, const std::vector<int>& c) {
  const int n = static_cast<int>(net.num_vertices());
  std::map<int, std::int64_t> in, tot;
  std::int64_t two_m = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::int64_t w = net.weight(i, j);
      two_m += w;
      tot[c[i]] += w;
      if (c[i] == c[j]) in[c[i]] += w;
    }
  std::int64_t num = 0;
  for (auto& [comm, t] : tot) num += in[comm] * two_m - t * t;
  return num;
}

// Best modularity numerator over every set partition, enumerated as
// restricted growth strings. Bell(12) is about 4.2 million.
inline std::int64_t max_modularity_numerator(const CoArrestNetwork& net) {
  const int n = static_cast<int>(net.num_vertices());
  std::vector<std::int64_t> k(n, 0);
  std::int64_t two_m = 0;
  for (int i = 0; i < n; ++i) {
    k[i] = net.weighted_degree(i);
    two_m += k[i];
  }
  std::vector<std::vector<std::int64_t>> w(n, std::vector<std::int64_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w[i][j] = net.weight(i, j);

  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  std::vector<int> a(n, 0);
  std::vector<std::int64_t> in(n + 1, 0), tot(n + 1, 0);
  // Depth-first over restricted growth strings with incremental sums.
  auto rec = [&](auto&& self, int i, int blocks) -> void {
    if (i == n) {
      std::int64_t num = 0;
      for (int b = 0; b < blocks; ++b) num += in[b] * two_m - tot[b] * tot[b];
      best = std::max(best, num);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      std::int64_t add = w[i][i];
      for (int j = 0; j < i; ++j)
        if (a[j] == b) add += 2 * w[i][j];
      a[i] = b;
      in[b] += add;
      tot[b] += k[i];
      self(self, i + 1, std::max(blocks, b + 1));
      in[b] -= add;
      tot[b] -= k[i];
    }
  };
  if (n == 0) return 0;
  rec(rec, 0, 0);
  return best;
}

}  // namespace oracle
