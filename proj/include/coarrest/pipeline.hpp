#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarrest/membership.hpp"
#include "coarrest/network.hpp"
#include "coarrest/report.hpp"
#include "coarrest/tipping.hpp"

namespace coarrest {

struct AnalysisOptions {
  ReportOptions report;
  std::vector<std::string> gang_filter;  // empty: every gang
  GroupTags groups;
  int threads = 0;  // 0: OpenMP default
};

struct StageTimings {
  std::vector<std::pair<std::string, double>> seconds;
  double total() const;
};

// Admitted members of every gang, plus inferred members at >= tau.
GangMembers gang_members(const CoArrestNetwork& net, const MembershipState& state,
                         std::optional<double> tau);

// membership -> tipping -> community -> ecosystems. Throws InputError when
// the gang filter names an unknown gang.
AnalysisReport analyze(const CoArrestNetwork& net, const AnalysisOptions& options,
                       StageTimings* timings = nullptr,
                       std::map<std::string, std::string> input_digests = {});

}  // namespace coarrest
