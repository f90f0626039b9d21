#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "coarrest/tipping.hpp"

namespace coarrest {

enum class GangStyle { centralized, decentralized };

std::string to_string(GangStyle style);

struct SynthConfig {
  int gangs = 18;
  int members_min = 62;
  int members_max = 101;
  std::vector<GangStyle> styles;  // empty: alternate, starting centralized

  // Centralized gangs: a few hubs, each arrest pairs a hub with 1-2 members.
  double hub_fraction = 0.06;
  double hub_core_density = 0.6;
  double extra_hub_rate = 0.3;  // chance a member is also arrested with a second hub

  // Decentralized gangs: cells of cell_min..cell_max members.
  int cell_min = 4;
  int cell_max = 8;
  double intra_density = 0.3;  // fraction of cell pairs realized by arrests

  double inter_subgroup_rate = 0.06;  // members with a cross-cell arrest
  double inter_gang_rate = 0.03;      // members with a cross-gang arrest
  double multi_claim_rate = 0.01;     // disclosed members claiming a second gang
  double disclosure_rate = 0.88;
  std::uint64_t seed = 42;
};

// Throws InputError for rates outside [0, 1] or inconsistent sizes.
void validate(const SynthConfig& config);

struct SynthPerson {
  std::string id;
  std::string gang;
  int subgroup = 0;
  bool disclosed = true;
  std::vector<std::string> extra_claims;
};

struct SynthDataset {
  std::string arrests_csv;
  std::string relationships_csv;
  std::vector<SynthPerson> persons;
  std::map<std::string, GangStyle> styles;

  nlohmann::json truth() const;
};

// Fully determined by the config, including the seed.
SynthDataset generate(const SynthConfig& config);

// Gang -> style tag, read from a truth document.
GroupTags group_tags_from_truth(const nlohmann::json& truth);

}  // namespace coarrest
