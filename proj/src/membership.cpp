#include "coarrest/membership.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "coarrest/errors.hpp"
#include "coarrest/kernels.hpp"
#include "parallel.hpp"

namespace coarrest {

double InfluenceFunction::operator()(std::int64_t x) const noexcept {
  if (x <= 0 || max_signals() == 0) return 0.0;
  return values[static_cast<std::size_t>(std::min<std::int64_t>(x, max_signals()))];
}

double fraction_lower_bound(std::int64_t pos, std::int64_t tot) {
  const double p = static_cast<double>(pos) / static_cast<double>(tot);
  const double standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(tot));
  return std::clamp(p - kLowerBoundZ * standard_error, 0.0, 1.0);
}

InfluenceFunction learn_influence(const CoArrestNetwork& net, std::string_view gang) {
  const std::string name(gang);
  const auto n = static_cast<VertexId>(net.num_vertices());
  std::vector<std::uint8_t> member(n, 0);
  bool any = false;
  for (VertexId v = 0; v < n; ++v) {
    member[v] = net.is_admitted(v, name) ? 1 : 0;
    any = any || member[v];
  }
  if (!any) throw InputError("unknown gang '" + name + "' (no admitted members)");

  InfluenceFunction f;
  f.gang = name;
  const int max_signals = net.max_degree();
  if (max_signals == 0) {
    f.degenerate = true;
    return f;
  }

  // Histogram of signal counts, then suffix sums give "at least i" tallies.
  const auto signals = kernels::omp::flagged_neighbor_counts(net, member);
  std::vector<std::int64_t> tot(max_signals + 2, 0), pos(max_signals + 2, 0);
  for (VertexId v = 0; v < n; ++v) {
    ++tot[signals[v]];
    if (member[v]) ++pos[signals[v]];
  }
  for (int i = max_signals - 1; i >= 0; --i) {
    tot[i] += tot[i + 1];
    pos[i] += pos[i + 1];
  }

  f.values.assign(max_signals + 1, 0.0);
  f.support.reserve(max_signals);
  for (int i = 1; i <= max_signals; ++i) {
    f.support.push_back({i, pos[i], tot[i]});
    f.values[i] = tot[i] == 0 ? f.values[i - 1]
                              : std::max(f.values[i - 1], fraction_lower_bound(pos[i], tot[i]));
  }
  return f;
}

std::vector<InfluenceFunction> learn_influence_all(const CoArrestNetwork& net,
                                                   std::span<const std::string> gangs) {
  std::vector<InfluenceFunction> out(gangs.size());
  detail::parallel_for(static_cast<std::ptrdiff_t>(gangs.size()),
                       [&](std::ptrdiff_t g) { out[g] = learn_influence(net, gangs[g]); });
  return out;
}

double MembershipState::confidence(VertexId v, std::string_view gang) const {
  for (const auto& fact : facts_[v]) {
    if (fact.gang == gang) return fact.confidence;
  }
  return 0.0;
}

bool MembershipState::is_admitted(VertexId v) const {
  return std::any_of(facts_[v].begin(), facts_[v].end(),
                     [](const MembershipFact& f) { return f.provenance == Provenance::admitted; });
}

MembershipState infer_membership(const CoArrestNetwork& net,
                                 std::span<const InfluenceFunction> functions) {
  std::map<std::string, const InfluenceFunction*> by_gang;
  for (const auto& f : functions) by_gang[f.gang] = &f;

  const auto n = static_cast<VertexId>(net.num_vertices());
  std::vector<std::vector<MembershipFact>> facts(n);
#pragma omp parallel for schedule(dynamic, 64)
  for (VertexId v = 0; v < n; ++v) {
    const auto& node = net.node(v);
    if (!node.admitted_gangs.empty()) {
      for (const auto& g : node.admitted_gangs) {
        facts[v].push_back({g, 1.0, Provenance::admitted});
      }
      continue;
    }
    std::map<std::string, std::int64_t> signals;
    for (auto u : net.neighbors(v)) {
      for (const auto& g : net.node(u).admitted_gangs) ++signals[g];
    }
    for (const auto& [g, count] : signals) {
      auto it = by_gang.find(g);
      if (it == by_gang.end()) continue;
      const double x = (*it->second)(count);
      if (x > 0.0) facts[v].push_back({g, x, Provenance::inferred});
    }
  }
  return MembershipState(std::move(facts));
}

std::vector<double> default_histogram_edges() {
  std::vector<double> edges;
  for (int k = 0; k <= 10; ++k) edges.push_back(k / 10.0);
  return edges;
}

MembershipHistogram membership_histogram(const MembershipState& state,
                                         std::span<const double> edges) {
  if (edges.size() < 2) throw InputError("histogram needs at least two bin edges");
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (!(edges[k - 1] < edges[k])) throw InputError("histogram bin edges must increase");
  }
  MembershipHistogram h;
  h.edges.assign(edges.begin(), edges.end());
  h.per_assignment.assign(edges.size() - 1, 0);
  h.per_person_max.assign(edges.size() - 1, 0);

  // Bin k holds (edges[k], edges[k+1]].
  auto bin_of = [&](double x) -> std::ptrdiff_t {
    auto it = std::lower_bound(edges.begin(), edges.end(), x);
    if (it == edges.begin() || it == edges.end()) return -1;
    return (it - edges.begin()) - 1;
  };

  for (VertexId v = 0; v < static_cast<VertexId>(state.num_vertices()); ++v) {
    double best = 0.0;
    bool any = false;
    for (const auto& fact : state.facts(v)) {
      if (fact.provenance != Provenance::inferred) continue;
      if (auto k = bin_of(fact.confidence); k >= 0) ++h.per_assignment[k];
      best = std::max(best, fact.confidence);
      any = true;
    }
    if (any) {
      if (auto k = bin_of(best); k >= 0) ++h.per_person_max[k];
    }
  }
  return h;
}

nlohmann::json to_json(const InfluenceFunction& f) {
  auto support = nlohmann::json::array();
  for (const auto& s : f.support) {
    support.push_back({{"i", s.signals}, {"pos", s.pos}, {"tot", s.tot}});
  }
  return {{"gang", f.gang},
          {"R", std::vector<double>(f.values.begin() + 1, f.values.end())},
          {"support", std::move(support)},
          {"degenerate", f.degenerate}};
}

InfluenceFunction influence_from_json(const nlohmann::json& doc) {
  InfluenceFunction f;
  f.gang = doc.at("gang").get<std::string>();
  for (const auto& r : doc.at("R")) f.values.push_back(r.get<double>());
  for (const auto& s : doc.at("support")) {
    f.support.push_back({s.at("i").get<int>(), s.at("pos").get<std::int64_t>(),
                         s.at("tot").get<std::int64_t>()});
  }
  f.degenerate = doc.value("degenerate", false);
  return f;
}

}  // namespace coarrest
