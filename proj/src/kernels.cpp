#include "coarrest/kernels.hpp"

#include <omp.h>

#include <algorithm>

#include "coarrest/tipping.hpp"

namespace coarrest::kernels {

namespace serial {

std::vector<int> flagged_neighbor_counts(const CoArrestNetwork& net,
                                         std::span<const std::uint8_t> flag) {
  const auto n = static_cast<VertexId>(net.num_vertices());
  std::vector<int> counts(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    int c = 0;
    for (auto u : net.neighbors(v)) c += flag[u] ? 1 : 0;
    counts[v] = c;
  }
  return counts;
}

std::vector<VertexId> cascade_round(const CoArrestNetwork& net,
                                    std::span<const std::uint8_t> infected) {
  const auto n = static_cast<VertexId>(net.num_vertices());
  std::vector<VertexId> out;
  for (VertexId v = 0; v < n; ++v) {
    if (infected[v]) continue;
    int c = 0;
    for (auto u : net.neighbors(v)) c += infected[u] ? 1 : 0;
    if (c >= majority_threshold(net.degree(v))) out.push_back(v);
  }
  return out;
}

CommunitySums community_sums(const CoArrestNetwork& net, std::span<const int> community,
                             int num_communities) {
  CommunitySums sums{std::vector<std::int64_t>(num_communities, 0),
                     std::vector<std::int64_t>(num_communities, 0)};
  const auto n = static_cast<VertexId>(net.num_vertices());
  for (VertexId v = 0; v < n; ++v) {
    const int c = community[v];
    sums.total[c] += net.weighted_degree(v);
    auto nb = net.neighbors(v);
    auto w = net.neighbor_weights(v);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (community[nb[k]] == c) sums.internal[c] += w[k];
    }
  }
  return sums;
}

}  // namespace serial

namespace omp {

std::vector<int> flagged_neighbor_counts(const CoArrestNetwork& net,
                                         std::span<const std::uint8_t> flag) {
  const auto n = static_cast<VertexId>(net.num_vertices());
  std::vector<int> counts(n, 0);
#pragma omp parallel for schedule(dynamic, 256)
  for (VertexId v = 0; v < n; ++v) {
    int c = 0;
    for (auto u : net.neighbors(v)) c += flag[u] ? 1 : 0;
    counts[v] = c;
  }
  return counts;
}

std::vector<VertexId> cascade_round(const CoArrestNetwork& net,
                                    std::span<const std::uint8_t> infected) {
  const auto n = static_cast<VertexId>(net.num_vertices());
  std::vector<std::uint8_t> fresh(n, 0);
#pragma omp parallel for schedule(dynamic, 256)
  for (VertexId v = 0; v < n; ++v) {
    if (infected[v]) continue;
    int c = 0;
    for (auto u : net.neighbors(v)) c += infected[u] ? 1 : 0;
    fresh[v] = c >= majority_threshold(net.degree(v)) ? 1 : 0;
  }
  std::vector<VertexId> out;
  for (VertexId v = 0; v < n; ++v) {
    if (fresh[v]) out.push_back(v);
  }
  return out;
}

CommunitySums community_sums(const CoArrestNetwork& net, std::span<const int> community,
                             int num_communities) {
  CommunitySums sums{std::vector<std::int64_t>(num_communities, 0),
                     std::vector<std::int64_t>(num_communities, 0)};
  const auto n = static_cast<VertexId>(net.num_vertices());
#pragma omp parallel
  {
    // Integer partial sums merge exactly, so the result does not depend on
    // the thread count.
    std::vector<std::int64_t> internal(num_communities, 0);
    std::vector<std::int64_t> total(num_communities, 0);
#pragma omp for schedule(static) nowait
    for (VertexId v = 0; v < n; ++v) {
      const int c = community[v];
      total[c] += net.weighted_degree(v);
      auto nb = net.neighbors(v);
      auto w = net.neighbor_weights(v);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        if (community[nb[k]] == c) internal[c] += w[k];
      }
    }
#pragma omp critical
    for (int c = 0; c < num_communities; ++c) {
      sums.internal[c] += internal[c];
      sums.total[c] += total[c];
    }
  }
  return sums;
}

}  // namespace omp

}  // namespace coarrest::kernels
