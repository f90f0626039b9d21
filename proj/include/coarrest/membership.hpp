#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coarrest/network.hpp"

namespace coarrest {

// z-score of the one-sided 95% normal lower bound applied to each fraction.
inline constexpr double kLowerBoundZ = 1.96;

struct SignalSupport {
  int signals = 0;        // i
  std::int64_t pos = 0;   // vertices with >= i admitted neighbours that are admitted
  std::int64_t tot = 0;   // vertices with >= i admitted neighbours

  bool operator==(const SignalSupport&) const = default;
};

// Learned step function from "number of admitted neighbours" to a
// membership confidence. values[0] is fixed at 0; values[i] for
// i = 1..max_signals is nondecreasing and within [0, 1].
struct InfluenceFunction {
  std::string gang;
  std::vector<double> values{0.0};
  std::vector<SignalSupport> support;  // one entry per i = 1..max_signals
  bool degenerate = false;             // no edges or no admitted members

  int max_signals() const noexcept { return static_cast<int>(values.size()) - 1; }

  // 0 for x == 0, values[min(x, max_signals)] otherwise.
  double operator()(std::int64_t x) const noexcept;

  bool operator==(const InfluenceFunction&) const = default;
};

// Lower confidence bound of pos/tot: p - 1.96 * sqrt(p(1-p)/tot), clamped
// to [0, 1]. tot must be positive.
double fraction_lower_bound(std::int64_t pos, std::int64_t tot);

// Throws InputError when no vertex admits to `gang`. The signal range runs to
// the maximum degree of `net`; an edgeless network yields a degenerate,
// all-zero function.
InfluenceFunction learn_influence(const CoArrestNetwork& net, std::string_view gang);

// One function per entry of `gangs`, learned in parallel.
std::vector<InfluenceFunction> learn_influence_all(const CoArrestNetwork& net,
                                                   std::span<const std::string> gangs);

enum class Provenance { admitted, inferred };

struct MembershipFact {
  std::string gang;
  double confidence = 0.0;
  Provenance provenance = Provenance::inferred;

  bool operator==(const MembershipFact&) const = default;
};

// Per-vertex facts, each list sorted by gang. Zero-confidence inferences are
// not stored.
class MembershipState {
 public:
  MembershipState() = default;
  explicit MembershipState(std::vector<std::vector<MembershipFact>> facts)
      : facts_(std::move(facts)) {}

  std::size_t num_vertices() const noexcept { return facts_.size(); }
  std::span<const MembershipFact> facts(VertexId v) const { return facts_[v]; }
  double confidence(VertexId v, std::string_view gang) const;
  bool is_admitted(VertexId v) const;

  bool operator==(const MembershipState&) const = default;

 private:
  std::vector<std::vector<MembershipFact>> facts_;
};

// Admitted persons keep their admitted facts only. Every other person gets,
// for each gang, ifl_gang(number of neighbours admitted to that gang).
// Only admitted labels count as signals, so a single pass is the fixpoint.
MembershipState infer_membership(const CoArrestNetwork& net,
                                 std::span<const InfluenceFunction> functions);

struct MembershipHistogram {
  std::vector<double> edges;                 // bins are (edges[k], edges[k+1]]
  std::vector<std::int64_t> per_assignment;  // one count per inferred (person, gang)
  std::vector<std::int64_t> per_person_max;  // one count per person, max over gangs

  bool operator==(const MembershipHistogram&) const = default;
};

std::vector<double> default_histogram_edges();

// Throws InputError unless `edges` has at least two strictly increasing
// values.
MembershipHistogram membership_histogram(const MembershipState& state,
                                         std::span<const double> edges);

nlohmann::json to_json(const InfluenceFunction& f);
InfluenceFunction influence_from_json(const nlohmann::json& doc);

}  // namespace coarrest
