#include <doctest.h>

#include "coarrest/errors.hpp"
#include "coarrest/synth.hpp"
#include "support.hpp"

using namespace coarrest;

TEST_SUITE("synth") {

TEST_CASE("same seed gives identical bytes") {
  SynthConfig cfg;
  auto a = generate(cfg);
  auto b = generate(cfg);
  CHECK(a.arrests_csv == b.arrests_csv);
  CHECK(a.relationships_csv == b.relationships_csv);
  CHECK(a.truth().dump() == b.truth().dump());
  cfg.seed = 43;
  CHECK(generate(cfg).arrests_csv != a.arrests_csv);
}

TEST_CASE("full disclosure leaves nobody unadmitted") {
  SynthConfig cfg;
  cfg.gangs = 6;
  cfg.disclosure_rate = 1.0;
  auto net = support::network_of(generate(cfg));
  for (const auto& p : net.nodes()) CHECK_FALSE(p.admitted_gangs.empty());
}

TEST_CASE("zero disclosure leaves everybody unadmitted") {
  SynthConfig cfg;
  cfg.gangs = 6;
  cfg.disclosure_rate = 0.0;
  auto net = support::network_of(generate(cfg));
  CHECK(net.num_vertices() > 0);
  for (const auto& p : net.nodes()) CHECK(p.admitted_gangs.empty());
}

TEST_CASE("default scale lands near the target network size") {
  for (std::uint64_t seed : {1, 2, 3}) {
    SynthConfig cfg;
    cfg.seed = seed;
    auto net = support::network_of(generate(cfg));
    CHECK(net.num_vertices() >= 1101);  // 1468 +- 25%
    CHECK(net.num_vertices() <= 1835);
    CHECK(net.num_edges() >= 1435);  // 1913 +- 25%
    CHECK(net.num_edges() <= 2391);
  }
}

TEST_CASE("ground truth partitions the generated persons") {
  SynthConfig cfg;
  cfg.gangs = 5;
  auto ds = generate(cfg);
  auto net = support::network_of(ds);
  std::set<std::string> seen;
  for (const auto& p : ds.persons) {
    CHECK(seen.insert(p.id).second);
    CHECK(ds.styles.contains(p.gang));
    REQUIRE(net.find(p.id));
  }
  CHECK(seen.size() == net.num_vertices());
  auto tags = group_tags_from_truth(ds.truth());
  CHECK(tags.size() == 5);
  CHECK(tags.at("G01") == "centralized");
  CHECK(tags.at("G02") == "decentralized");
  CHECK_THROWS_AS(group_tags_from_truth(nlohmann::json{{"gangs", 1}}), SchemaError);
}

TEST_CASE("explicit styles are honoured") {
  SynthConfig cfg;
  cfg.gangs = 3;
  cfg.styles = {GangStyle::decentralized, GangStyle::decentralized, GangStyle::centralized};
  auto ds = generate(cfg);
  CHECK(ds.styles.at("G01") == GangStyle::decentralized);
  CHECK(ds.styles.at("G03") == GangStyle::centralized);
}

TEST_CASE("invalid configurations are rejected") {
  auto bad = [](auto mutate) {
    SynthConfig cfg;
    mutate(cfg);
    return cfg;
  };
  CHECK_THROWS_AS(validate(bad([](SynthConfig& c) { c.disclosure_rate = 1.5; })), InputError);
  CHECK_THROWS_AS(validate(bad([](SynthConfig& c) { c.intra_density = -0.1; })), InputError);
  CHECK_THROWS_AS(validate(bad([](SynthConfig& c) { c.members_min = 50; c.members_max = 10; })),
                  InputError);
  CHECK_THROWS_AS(validate(bad([](SynthConfig& c) { c.gangs = 0; })), InputError);
  CHECK_THROWS_AS(validate(bad([](SynthConfig& c) { c.styles = {GangStyle::centralized}; })),
                  InputError);
  CHECK_NOTHROW(validate(SynthConfig{}));
}

}  // TEST_SUITE
