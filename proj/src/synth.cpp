#include "coarrest/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <fmt/format.h>

#include "coarrest/errors.hpp"

namespace coarrest {

std::string to_string(GangStyle style) {
  return style == GangStyle::centralized ? "centralized" : "decentralized";
}

void validate(const SynthConfig& c) {
  auto rate = [](double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw InputError(fmt::format("{} must lie in [0, 1], got {}", name, x));
    }
  };
  rate(c.hub_fraction, "hub_fraction");
  rate(c.hub_core_density, "hub_core_density");
  rate(c.extra_hub_rate, "extra_hub_rate");
  rate(c.intra_density, "intra_density");
  rate(c.inter_subgroup_rate, "inter_subgroup_rate");
  rate(c.inter_gang_rate, "inter_gang_rate");
  rate(c.multi_claim_rate, "multi_claim_rate");
  rate(c.disclosure_rate, "disclosure_rate");
  if (c.gangs < 1) throw InputError("gang count must be positive");
  if (c.members_min < 2 || c.members_max < c.members_min) {
    throw InputError("member range must satisfy 2 <= min <= max");
  }
  if (c.cell_min < 2 || c.cell_max < c.cell_min) {
    throw InputError("cell size range must satisfy 2 <= min <= max");
  }
  if (!c.styles.empty() && static_cast<int>(c.styles.size()) != c.gangs) {
    throw InputError("one style per gang is required when styles are given");
  }
  if (std::lround(c.hub_fraction * c.members_max) >= c.members_min) {
    throw InputError("hub_fraction leaves centralized gangs without rank-and-file members");
  }
}

namespace {

// Draws from the raw engine output so the stream is identical on every
// standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [lo, hi].
  int uniform(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<int>(x % span);
  }

  bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[uniform(0, static_cast<int>(items.size()) - 1)];
  }

  // k distinct items of `items`, in draw order.
  template <class T>
  std::vector<T> sample(std::vector<T> items, int k) {
    for (int i = 0; i < k; ++i) std::swap(items[i], items[uniform(i, static_cast<int>(items.size()) - 1)]);
    items.resize(k);
    return items;
  }

 private:
  std::mt19937_64 engine_;
};

struct Participant {
  int person;
  std::string claim;  // gang named in this arrest row
};

struct Event {
  std::vector<Participant> people;
};

struct Gang {
  std::string name;
  GangStyle style;
  std::vector<int> members;
  std::vector<std::vector<int>> subgroups;
};

std::string iso_date(int day_offset) {
  using namespace std::chrono;
  const sys_days start = year{2010} / January / 1;
  const year_month_day ymd{start + days{day_offset}};
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

}  // namespace

SynthDataset generate(const SynthConfig& config) {
  validate(config);
  Rng rng(config.seed);
  SynthDataset data;
  std::vector<Gang> gangs(config.gangs);
  std::vector<Event> events;

  auto add_event = [&](const std::vector<int>& people) {
    Event e;
    for (int p : people) e.people.push_back({p, data.persons[p].gang});
    events.push_back(std::move(e));
  };

  // Person ids are a random permutation so that id order carries no
  // structural information (hubs are not systematically first).
  std::vector<int> sizes(config.gangs);
  int total = 0;
  for (auto& size : sizes) total += size = rng.uniform(config.members_min, config.members_max);
  std::vector<int> id_numbers(total);
  std::iota(id_numbers.begin(), id_numbers.end(), 1);
  id_numbers = rng.sample(std::move(id_numbers), total);

  for (int g = 0; g < config.gangs; ++g) {
    auto& gang = gangs[g];
    gang.name = fmt::format("G{:02d}", g + 1);
    gang.style = config.styles.empty()
                     ? (g % 2 == 0 ? GangStyle::centralized : GangStyle::decentralized)
                     : config.styles[g];
    data.styles[gang.name] = gang.style;
    const int size = sizes[g];
    for (int k = 0; k < size; ++k) {
      const auto index = data.persons.size();
      gang.members.push_back(static_cast<int>(index));
      data.persons.push_back({fmt::format("P{:05d}", id_numbers[index]), gang.name, 0,
                              rng.chance(config.disclosure_rate), {}});
    }

    if (gang.style == GangStyle::centralized) {
      // Hubs, each with a crew; members are arrested alongside hubs.
      const int hubs = std::max(1, static_cast<int>(std::lround(config.hub_fraction * size)));
      std::vector<int> hub_ids(gang.members.begin(), gang.members.begin() + hubs);
      std::vector<int> rank(gang.members.begin() + hubs, gang.members.end());
      gang.subgroups.assign(hubs, {});
      for (int h = 0; h < hubs; ++h) {
        gang.subgroups[h].push_back(hub_ids[h]);
        data.persons[hub_ids[h]].subgroup = h;
        for (int h2 = h + 1; h2 < hubs; ++h2) {
          if (rng.chance(config.hub_core_density)) add_event({hub_ids[h], hub_ids[h2]});
        }
      }
      for (int m : rank) {
        const int h = rng.uniform(0, hubs - 1);
        data.persons[m].subgroup = h;
        gang.subgroups[h].push_back(m);
        std::vector<int> people{hub_ids[h], m};
        if (rng.chance(0.1)) {
          int other = rng.pick(rank);
          if (other != m) people.push_back(other);
        }
        add_event(people);
        if (hubs > 1 && rng.chance(config.extra_hub_rate)) {
          int h2 = rng.uniform(0, hubs - 2);
          if (h2 >= h) ++h2;
          add_event({hub_ids[h2], m});
        }
      }
    } else {
      // Dense cells with occasional cross-cell arrests.
      std::vector<int> order = rng.sample(gang.members, size);
      for (std::size_t k = 0; k < order.size();) {
        int cell = rng.uniform(config.cell_min, config.cell_max);
        if (order.size() - k < static_cast<std::size_t>(cell) + config.cell_min) {
          cell = static_cast<int>(order.size() - k);
        }
        gang.subgroups.emplace_back(order.begin() + k, order.begin() + k + cell);
        k += cell;
      }
      for (std::size_t c = 0; c < gang.subgroups.size(); ++c) {
        const auto& cell = gang.subgroups[c];
        for (int m : cell) data.persons[m].subgroup = static_cast<int>(c);
        const int s = static_cast<int>(cell.size());
        const auto target =
            static_cast<std::size_t>(std::lround(config.intra_density * s * (s - 1) / 2.0));
        std::set<std::pair<int, int>> pairs;
        while (pairs.size() < target) {
          auto people = rng.sample(cell, rng.uniform(2, std::min(4, s)));
          for (std::size_t a = 0; a < people.size(); ++a) {
            for (std::size_t b = a + 1; b < people.size(); ++b) {
              pairs.emplace(std::min(people[a], people[b]), std::max(people[a], people[b]));
            }
          }
          add_event(people);
        }
      }
      if (gang.subgroups.size() > 1) {
        for (std::size_t c = 0; c < gang.subgroups.size(); ++c) {
          for (int m : gang.subgroups[c]) {
            if (!rng.chance(config.inter_subgroup_rate)) continue;
            auto other = static_cast<std::size_t>(
                rng.uniform(0, static_cast<int>(gang.subgroups.size()) - 2));
            if (other >= c) ++other;
            add_event({m, rng.pick(gang.subgroups[other])});
          }
        }
      }
    }
  }

  if (config.gangs > 1) {
    for (int g = 0; g < config.gangs; ++g) {
      for (int m : gangs[g].members) {
        auto other_gang = [&] {
          int h = rng.uniform(0, config.gangs - 2);
          return h >= g ? h + 1 : h;
        };
        if (rng.chance(config.inter_gang_rate)) {
          add_event({m, rng.pick(gangs[other_gang()].members)});
        }
        if (data.persons[m].disclosed && rng.chance(config.multi_claim_rate)) {
          const auto& host = gangs[other_gang()];
          add_event({m, rng.pick(host.members)});
          events.back().people[0].claim = host.name;
          data.persons[m].extra_claims.push_back(host.name);
        }
      }
    }
  }

  // Everyone appears in the arrest table, if only alone.
  std::vector<std::uint8_t> seen(data.persons.size(), 0);
  for (const auto& e : events) {
    for (const auto& p : e.people) seen[p.person] = 1;
  }
  for (std::size_t p = 0; p < data.persons.size(); ++p) {
    if (!seen[p]) add_event({static_cast<int>(p)});
  }

  data.arrests_csv = "arrest_id,person_id,gang_claim,date\n";
  data.relationships_csv = "person_a,person_b\n";
  for (std::size_t k = 0; k < events.size(); ++k) {
    const auto arrest = fmt::format("A{:06d}", k + 1);
    const auto date = iso_date(rng.uniform(0, 3 * 365 - 1));
    const auto& people = events[k].people;
    for (const auto& p : people) {
      const auto& person = data.persons[p.person];
      data.arrests_csv += fmt::format("{},{},{},{}\n", arrest, person.id,
                                      person.disclosed ? p.claim : std::string(), date);
    }
    for (std::size_t a = 0; a < people.size(); ++a) {
      for (std::size_t b = a + 1; b < people.size(); ++b) {
        auto x = data.persons[people[a].person].id;
        auto y = data.persons[people[b].person].id;
        if (y < x) std::swap(x, y);
        data.relationships_csv += x + "," + y + "\n";
      }
    }
  }
  return data;
}

nlohmann::json SynthDataset::truth() const {
  std::map<std::string, int> sizes;
  for (const auto& p : persons) ++sizes[p.gang];
  auto gangs = nlohmann::json::array();
  for (const auto& [name, style] : styles) {
    gangs.push_back({{"name", name}, {"style", to_string(style)}, {"size", sizes[name]}});
  }
  auto people = nlohmann::json::array();
  for (const auto& p : persons) {
    people.push_back({{"id", p.id},
                      {"gang", p.gang},
                      {"subgroup", p.subgroup},
                      {"disclosed", p.disclosed},
                      {"extra_claims", p.extra_claims}});
  }
  return {{"gangs", std::move(gangs)}, {"persons", std::move(people)}};
}

GroupTags group_tags_from_truth(const nlohmann::json& truth) {
  GroupTags tags;
  try {
    for (const auto& g : truth.at("gangs")) {
      tags[g.at("name").get<std::string>()] = g.at("style").get<std::string>();
    }
  } catch (const nlohmann::json::exception& ex) {
    throw SchemaError(std::string("malformed truth JSON: ") + ex.what());
  }
  return tags;
}

}  // namespace coarrest
