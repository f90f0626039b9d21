#include <benchmark/benchmark.h>
#include <fmt/format.h>

#include <map>
#include <random>
#include <sstream>

#include "coarrest/community.hpp"
#include "coarrest/ingest.hpp"
#include "coarrest/kernels.hpp"
#include "coarrest/network.hpp"
#include "coarrest/synth.hpp"

using namespace coarrest;

namespace {

// Random graph with `n` vertices and about `avg_degree * n / 2` edges of
// weight 1..3. Built once per size and shared by every benchmark.
const CoArrestNetwork& random_network(int n) {
  static std::map<int, CoArrestNetwork> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  constexpr int avg_degree = 6;
  std::mt19937_64 rng(99);
  std::vector<PersonNode> nodes(n);
  for (int v = 0; v < n; ++v) nodes[v].id = fmt::format("p{:08d}", v);
  std::vector<IndexEdge> edges;
  const auto count = static_cast<std::size_t>(n) * avg_degree / 2;
  edges.reserve(count);
  for (std::size_t e = 0; e < count; ++e) {
    auto u = static_cast<VertexId>(rng() % n);
    auto v = static_cast<VertexId>(rng() % n);
    edges.push_back({u, v, static_cast<std::int64_t>(1 + rng() % 3)});
  }
  return cache.emplace(n, CoArrestNetwork(std::move(nodes), std::move(edges))).first->second;
}

std::vector<std::uint8_t> every_third(std::size_t n) {
  std::vector<std::uint8_t> flag(n);
  for (std::size_t v = 0; v < n; v += 3) flag[v] = 1;
  return flag;
}

std::vector<int> blocks(std::size_t n, int q) {
  std::vector<int> c(n);
  for (std::size_t v = 0; v < n; ++v) c[v] = static_cast<int>(v % q);
  return c;
}

template <auto Kernel>
void BM_flagged(benchmark::State& state) {
  const auto& net = random_network(static_cast<int>(state.range(0)));
  auto flag = every_third(net.num_vertices());
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(net, flag));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(net.num_edges()));
}

template <auto Kernel>
void BM_cascade(benchmark::State& state) {
  const auto& net = random_network(static_cast<int>(state.range(0)));
  auto infected = every_third(net.num_vertices());
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(net, infected));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(net.num_edges()));
}

template <auto Kernel>
void BM_sums(benchmark::State& state) {
  const auto& net = random_network(static_cast<int>(state.range(0)));
  auto comm = blocks(net.num_vertices(), 64);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(net, comm, 64));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(net.num_edges()));
}

void BM_louvain_default_synth(benchmark::State& state) {
  auto ds = generate(SynthConfig{});
  std::istringstream in(ds.arrests_csv);
  auto parsed = parse_arrests(in);
  auto net = build_network(parsed.records, derive_coarrest_edges(parsed.records));
  for (auto _ : state) benchmark::DoNotOptimize(louvain(net));
}

}  // namespace

BENCHMARK(BM_flagged<kernels::serial::flagged_neighbor_counts>)->Arg(10'000)->Arg(200'000);
BENCHMARK(BM_flagged<kernels::omp::flagged_neighbor_counts>)->Arg(10'000)->Arg(200'000);
BENCHMARK(BM_cascade<kernels::serial::cascade_round>)->Arg(10'000)->Arg(200'000);
BENCHMARK(BM_cascade<kernels::omp::cascade_round>)->Arg(10'000)->Arg(200'000);
BENCHMARK(BM_sums<kernels::serial::community_sums>)->Arg(10'000)->Arg(200'000);
BENCHMARK(BM_sums<kernels::omp::community_sums>)->Arg(10'000)->Arg(200'000);
BENCHMARK(BM_louvain_default_synth)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
