#include <doctest.h>

#include <random>

#include "coarrest/kernels.hpp"
#include "oracles.hpp"

using namespace coarrest;

TEST_SUITE("kernels") {

TEST_CASE("parallel kernels match the serial reference") {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 40; ++t) {
    int n = 1 + static_cast<int>(rng() % 400);
    auto net = oracle::make(oracle::erdos_renyi(n, 4.0 / n, rng, 4));
    std::vector<std::uint8_t> flag(n);
    for (auto& f : flag) f = rng() % 3 == 0;
    CHECK(kernels::omp::flagged_neighbor_counts(net, flag) ==
          kernels::serial::flagged_neighbor_counts(net, flag));
    CHECK(kernels::omp::cascade_round(net, flag) == kernels::serial::cascade_round(net, flag));

    int q = 1 + static_cast<int>(rng() % 10);
    std::vector<int> c(n);
    for (auto& x : c) x = static_cast<int>(rng() % q);
    CHECK(kernels::omp::community_sums(net, c, q) == kernels::serial::community_sums(net, c, q));
  }
}

TEST_CASE("serial kernels agree with direct counts") {
  std::mt19937_64 rng(52);
  auto net = oracle::make(oracle::erdos_renyi(50, 0.1, rng, 3));
  std::vector<std::uint8_t> flag(50);
  for (auto& f : flag) f = rng() % 2;
  auto counts = kernels::serial::flagged_neighbor_counts(net, flag);
  auto next = kernels::serial::cascade_round(net, flag);
  for (VertexId v = 0; v < 50; ++v) {
    int c = 0;
    for (VertexId u = 0; u < 50; ++u) c += net.weight(u, v) > 0 && flag[u];
    CHECK(counts[v] == c);
    bool joins = !flag[v] && 2 * c >= net.degree(v);
    CHECK(std::binary_search(next.begin(), next.end(), v) == joins);
  }

  std::vector<int> comm(50);
  for (auto& x : comm) x = static_cast<int>(rng() % 3);
  auto sums = kernels::serial::community_sums(net, comm, 3);
  std::int64_t two_m = 2 * net.total_weight(), num = 0;
  for (int k = 0; k < 3; ++k) num += sums.internal[k] * two_m - sums.total[k] * sums.total[k];
  CHECK(num == oracle::modularity_numerator(net, comm));
}

}  // TEST_SUITE
