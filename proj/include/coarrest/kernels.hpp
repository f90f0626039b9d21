#pragma once

// Data-parallel inner loops shared by the analyses. Each kernel has a serial
// reference in `serial` and an OpenMP version in `omp` with an identical
// signature and bit-identical output; tests and the benchmark compare them.

#include <cstdint>
#include <span>
#include <vector>

#include "coarrest/network.hpp"

namespace coarrest::kernels {

// Per-community integer sums behind modularity. `internal[c]` is the sum of
// w_ij over ordered pairs i, j in c (twice the internal edge weight);
// `total[c]` is the sum of weighted degrees in c.
struct CommunitySums {
  std::vector<std::int64_t> internal;
  std::vector<std::int64_t> total;

  bool operator==(const CommunitySums&) const = default;
};

namespace serial {

// For each vertex, the number of neighbours whose `flag` is set.
std::vector<int> flagged_neighbor_counts(const CoArrestNetwork& net,
                                         std::span<const std::uint8_t> flag);

// Uninfected vertices meeting their majority threshold given `infected`,
// ascending.
std::vector<VertexId> cascade_round(const CoArrestNetwork& net,
                                    std::span<const std::uint8_t> infected);

CommunitySums community_sums(const CoArrestNetwork& net, std::span<const int> community,
                             int num_communities);

}  // namespace serial

namespace omp {

std::vector<int> flagged_neighbor_counts(const CoArrestNetwork& net,
                                         std::span<const std::uint8_t> flag);

std::vector<VertexId> cascade_round(const CoArrestNetwork& net,
                                    std::span<const std::uint8_t> infected);

CommunitySums community_sums(const CoArrestNetwork& net, std::span<const int> community,
                             int num_communities);

}  // namespace omp

}  // namespace coarrest::kernels
