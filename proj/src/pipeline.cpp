#include "coarrest/pipeline.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <set>

#include "coarrest/community.hpp"
#include "coarrest/errors.hpp"
#include "parallel.hpp"

namespace coarrest {

namespace {

constexpr const char* kVersion = "1.0.0";

class Stopwatch {
 public:
  explicit Stopwatch(StageTimings* sink) : sink_(sink) {}

  void lap(std::string stage) {
    auto now = std::chrono::steady_clock::now();
    if (sink_) {
      sink_->seconds.emplace_back(std::move(stage),
                                  std::chrono::duration<double>(now - last_).count());
    }
    last_ = now;
  }

 private:
  StageTimings* sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

// Runs one pipeline stage, prefixing any error with the stage name.
template <class Body>
void stage(const char* name, Body&& body) {
  try {
    body();
  } catch (const InputError& e) {
    throw InputError(std::string(name) + ": " + e.what());
  } catch (const AnalysisError& e) {
    throw AnalysisError(std::string(name) + ": " + e.what());
  }
}

}  // namespace

double StageTimings::total() const {
  double sum = 0.0;
  for (const auto& [stage, s] : seconds) sum += s;
  return sum;
}

GangMembers gang_members(const CoArrestNetwork& net, const MembershipState& state,
                         std::optional<double> tau) {
  GangMembers members;
  for (const auto& g : net.gangs()) members[g];
  for (VertexId v = 0; v < static_cast<VertexId>(net.num_vertices()); ++v) {
    for (const auto& g : net.node(v).admitted_gangs) members[g].push_back(net.id(v));
    if (!tau || state.num_vertices() == 0) continue;
    for (const auto& fact : state.facts(v)) {
      if (fact.provenance == Provenance::inferred && fact.confidence >= *tau) {
        members[fact.gang].push_back(net.id(v));
      }
    }
  }
  return members;
}

AnalysisReport analyze(const CoArrestNetwork& net, const AnalysisOptions& options,
                       StageTimings* timings, std::map<std::string, std::string> input_digests) {
  if (options.threads > 0) omp_set_num_threads(options.threads);
  Stopwatch clock(timings);

  AnalysisReport report;
  report.meta.version = kVersion;
  report.meta.input_digests = std::move(input_digests);
  report.meta.options = options.report;

  const auto all_gangs = net.gangs();
  std::vector<std::string> selected = all_gangs;
  if (!options.gang_filter.empty()) {
    std::set<std::string> wanted(options.gang_filter.begin(), options.gang_filter.end());
    for (const auto& g : wanted) {
      if (!std::binary_search(all_gangs.begin(), all_gangs.end(), g)) {
        throw InputError("unknown gang '" + g + "'");
      }
    }
    selected.assign(wanted.begin(), wanted.end());
  }
  auto group_of = [&](const std::string& gang) {
    auto it = options.groups.find(gang);
    return it == options.groups.end() ? std::string() : it->second;
  };

  auto& s = report.summary;
  MembershipState state;
  stage("membership", [&] {
    report.influence = learn_influence_all(net, all_gangs);
    for (const auto& f : report.influence) {
      if (f.degenerate) {
        report.warnings.push_back("influence function for '" + f.gang +
                                  "' is degenerate (all zero)");
      }
    }
    state = infer_membership(net, report.influence);
    report.histogram = membership_histogram(state, options.report.bins);
    for (VertexId v = 0; v < static_cast<VertexId>(net.num_vertices()); ++v) {
      if (!net.node(v).admitted_gangs.empty()) continue;
      if (net.degree(v) > 0) ++s.unadmitted_connected;
      double best = 0.0;
      for (const auto& fact : state.facts(v)) {
        report.assignments.push_back({net.id(v), fact.gang, fact.confidence});
        best = std::max(best, fact.confidence);
      }
      if (best > 0.0) ++s.unadmitted_assigned;
      if (best > 0.5) ++s.unadmitted_over_half;
    }
  });
  clock.lap("membership");

  const auto all_members = gang_members(net, state, options.report.tau);
  SeedSetSummary seeds;
  stage("tipping", [&] {
    GangMembers chosen;
    for (const auto& g : selected) chosen[g] = all_members.at(g);
    seeds = seed_set_report(net, chosen, options.groups);
  });
  report.group_mean_seed_pct = seeds.group_mean_pct;
  report.warnings.insert(report.warnings.end(), seeds.warnings.begin(), seeds.warnings.end());
  clock.lap("tipping");

  // Communities for every gang: ecosystems need the foreign subgroups too.
  std::vector<GangPartition> partitions(all_gangs.size());
  stage("community", [&] {
    detail::parallel_for(static_cast<std::ptrdiff_t>(all_gangs.size()), [&](std::ptrdiff_t g) {
      partitions[g] = partition_gang(net, all_gangs[g], all_members.at(all_gangs[g]));
      partitions[g].group = group_of(all_gangs[g]);
    });
  });
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& p : partitions) {
    if (p.group.empty() || !p.modularity ||
        !std::binary_search(selected.begin(), selected.end(), p.gang)) {
      continue;
    }
    acc[p.group].first += *p.modularity;
    ++acc[p.group].second;
  }
  for (const auto& [group, sum] : acc) report.group_mean_modularity[group] = sum.first / sum.second;
  clock.lap("community");

  // Ecosystems and connectors.
  report.ecosystems.resize(selected.size());
  stage("ecosystems", [&] {
    detail::parallel_for(static_cast<std::ptrdiff_t>(selected.size()), [&](std::ptrdiff_t k) {
      report.ecosystems[k] =
          build_ecosystem(net, partitions, selected[k], options.report.connector_threshold);
    });
    report.connectors = find_connectors(net, partitions, options.report.connector_threshold);
  });
  clock.lap("ecosystems");

  for (const auto& g : selected) {
    GangSection section;
    section.gang = g;
    section.group = group_of(g);
    auto sit = std::find_if(seeds.gangs.begin(), seeds.gangs.end(),
                            [&](const GangSeedReport& r) { return r.gang == g; });
    if (sit != seeds.gangs.end()) section.seeds = *sit;
    auto pit = std::lower_bound(all_gangs.begin(), all_gangs.end(), g) - all_gangs.begin();
    section.community = partitions[pit];
    report.gangs.push_back(std::move(section));
  }

  s.vertices = static_cast<std::int64_t>(net.num_vertices());
  s.edges = static_cast<std::int64_t>(net.num_edges());
  s.total_weight = net.total_weight();
  s.gangs = static_cast<std::int64_t>(all_gangs.size());
  s.components = static_cast<std::int64_t>(connected_components(net).size());
  clock.lap("report");
  return report;
}

}  // namespace coarrest
