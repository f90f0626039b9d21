#include <doctest.h>

#include <random>

#include "coarrest/errors.hpp"
#include "coarrest/membership.hpp"
#include "oracles.hpp"

using namespace coarrest;

namespace {

// Ten persons, six admitted to G. At one signal all ten qualify and six are
// admitted; at two signals three qualify (a2, a4, u1), two admitted.
CoArrestNetwork ten_node_fixture() {
  std::map<std::string, std::set<std::string>> gangs;
  for (auto id : {"a1", "a2", "a3", "a4", "a5", "a6"}) gangs[id] = {"G"};
  return oracle::make_named({"a1", "a2", "a3", "a4", "a5", "a6", "u1", "u2", "u3", "u4"},
                            {{"a1", "a2"},
                             {"a3", "a4"},
                             {"a5", "a6"},
                             {"a2", "a4"},
                             {"u1", "a1"},
                             {"u1", "a3"},
                             {"u2", "a2"},
                             {"u3", "a4"},
                             {"u4", "a5"}},
                            gangs);
}

CoArrestNetwork random_labelled(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto spec = u(rng) < 0.5 ? oracle::erdos_renyi(n, 3.0 / n + u(rng) * 0.1, rng)
                           : oracle::planted(4, n / 4 + 1, 0.4, 0.03, rng);
  oracle::label(spec, 3, 0.2 + 0.6 * u(rng), rng);
  return oracle::make(spec);
}

}  // namespace

TEST_SUITE("membership") {

TEST_CASE("lower bound of a fraction") {
  CHECK(fraction_lower_bound(6, 10) == doctest::Approx(0.2963581056573385).epsilon(1e-12));
  CHECK(fraction_lower_bound(2, 3) == doctest::Approx(0.13322223379388565).epsilon(1e-12));
  CHECK(fraction_lower_bound(5, 5) == 1.0);
  CHECK(fraction_lower_bound(0, 5) == 0.0);
  CHECK(fraction_lower_bound(1, 10) == 0.0);  // clamped below
}

TEST_CASE("ten node fixture matches hand arithmetic") {
  auto net = ten_node_fixture();
  auto f = learn_influence(net, "G");
  CHECK(net.max_degree() == 3);
  REQUIRE(f.max_signals() == 3);
  CHECK(f.values[0] == 0.0);
  CHECK(std::abs(f.values[1] - 0.2963581056573385) < 1e-9);
  // at two signals the bound is 0.1332, below R[1], so R[1] carries over
  CHECK(f.values[2] == f.values[1]);
  CHECK(f.values[3] == f.values[1]);
  CHECK(f.support[0] == SignalSupport{1, 6, 10});
  CHECK(f.support[1] == SignalSupport{2, 2, 3});
  CHECK(f.support[2] == SignalSupport{3, 0, 0});
  CHECK(f(0) == 0.0);
  CHECK(f(1) == f.values[1]);
  CHECK(f(99) == f.values[3]);
  CHECK_FALSE(f.degenerate);
}

TEST_CASE("every qualifying vertex admitted gives R = 1") {
  auto net = oracle::make_named({"a", "b", "c", "z"}, {{"a", "b"}, {"b", "c"}},
                                {{"a", {"G"}}, {"b", {"G"}}, {"c", {"G"}}});
  auto f = learn_influence(net, "G");
  CHECK(f.values[1] == 1.0);
  CHECK(f.values[2] == 1.0);
}

TEST_CASE("unknown gang and edgeless network") {
  auto net = ten_node_fixture();
  CHECK_THROWS_AS(learn_influence(net, "nobody"), InputError);
  auto lonely = oracle::make_named({"a", "b"}, {}, {{"a", {"G"}}});
  auto f = learn_influence(lonely, "G");
  CHECK(f.degenerate);
  CHECK(f.max_signals() == 0);
  CHECK(f(3) == 0.0);
}

TEST_CASE("learned support matches a brute force recount") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 40; ++t) {
    auto net = random_labelled(rng, 12 + t);
    for (const auto& gang : net.gangs()) {
      auto f = learn_influence(net, gang);
      auto ref = oracle::learn(net, gang);
      REQUIRE(f.max_signals() == static_cast<int>(ref.R.size()) - 1);
      for (int i = 1; i <= f.max_signals(); ++i) {
        CHECK(f.support[i - 1].pos == ref.pos[i]);
        CHECK(f.support[i - 1].tot == ref.tot[i]);
        CHECK(std::abs(f.values[i] - ref.R[i]) < 1e-12);
        CHECK(f.values[i] >= f.values[i - 1]);
        CHECK(f.values[i] <= 1.0);
      }
    }
  }
}

TEST_CASE("learn_influence_all agrees with one at a time") {
  std::mt19937_64 rng(22);
  auto net = random_labelled(rng, 60);
  auto gangs = net.gangs();
  auto all = learn_influence_all(net, gangs);
  REQUIRE(all.size() == gangs.size());
  for (std::size_t g = 0; g < gangs.size(); ++g) CHECK(all[g] == learn_influence(net, gangs[g]));
}

TEST_CASE("admitted persons receive no inferred values") {
  // v is admitted to G2 and has five G1 neighbours.
  std::map<std::string, std::set<std::string>> gangs{{"v", {"G2"}}};
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::string> ids{"v"};
  for (int i = 0; i < 5; ++i) {
    std::string id = "g" + std::to_string(i);
    ids.push_back(id);
    gangs[id] = {"G1"};
    edges.push_back({"v", id});
  }
  ids.push_back("w");
  edges.push_back({"w", "g0"});
  auto net = oracle::make_named(ids, edges, gangs);
  auto fs = learn_influence_all(net, net.gangs());
  auto state = infer_membership(net, fs);
  auto v = net.index_of("v");
  REQUIRE(state.facts(v).size() == 1);
  CHECK(state.facts(v)[0] == MembershipFact{"G2", 1.0, Provenance::admitted});
  CHECK(state.confidence(v, "G1") == 0.0);
  CHECK(state.is_admitted(v));
}

TEST_CASE("three admitted neighbours read ifl(3)") {
  auto f = learn_influence(ten_node_fixture(), "G");
  auto net = oracle::make_named({"a", "b", "c", "v", "z"}, {{"v", "a"}, {"v", "b"}, {"v", "c"}},
                                {{"a", {"G"}}, {"b", {"G"}}, {"c", {"G"}}});
  std::vector<InfluenceFunction> fs{f};
  auto state = infer_membership(net, fs);
  auto v = net.index_of("v");
  REQUIRE(state.facts(v).size() == 1);
  CHECK(state.facts(v)[0].provenance == Provenance::inferred);
  CHECK(std::abs(state.facts(v)[0].confidence - 0.2963581056573385) < 1e-9);
  CHECK(state.facts(net.index_of("z")).empty());
}

TEST_CASE("membership semantics hold on random networks") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 30; ++t) {
    auto net = random_labelled(rng, 40);
    auto gangs = net.gangs();
    auto fs = learn_influence_all(net, gangs);
    auto state = infer_membership(net, fs);
    CHECK(state == infer_membership(net, fs));
    for (VertexId v = 0; v < static_cast<VertexId>(net.num_vertices()); ++v) {
      const auto& node = net.node(v);
      if (!node.admitted_gangs.empty()) {
        CHECK(state.facts(v).size() == node.admitted_gangs.size());
        for (const auto& f : state.facts(v)) {
          CHECK(f.provenance == Provenance::admitted);
          CHECK(f.confidence == 1.0);
        }
        continue;
      }
      for (std::size_t g = 0; g < gangs.size(); ++g) {
        int x = oracle::admitted_neighbours(net, v, gangs[g]);
        CHECK(state.confidence(v, gangs[g]) == fs[g](x));
      }
      for (const auto& f : state.facts(v)) {
        CHECK(f.provenance == Provenance::inferred);
        CHECK(f.confidence > 0.0);
        CHECK(f.confidence <= 1.0);
      }
    }
  }
}

TEST_CASE("histogram placement") {
  auto edges = default_histogram_edges();
  CHECK(edges.size() == 11);
  CHECK(membership_histogram(MembershipState{}, edges).per_assignment ==
        std::vector<std::int64_t>(10, 0));

  std::vector<double> halves{0.0, 0.5, 1.0};
  MembershipState one({{{"G", 0.6, Provenance::inferred}}});
  CHECK(membership_histogram(one, halves).per_assignment == std::vector<std::int64_t>{0, 1});

  MembershipState three({{{"G", 0.3, Provenance::inferred}, {"H", 0.7, Provenance::inferred}},
                         {{"G", 0.3, Provenance::inferred}},
                         {{"G", 1.0, Provenance::admitted}}});
  auto h = membership_histogram(three, halves);
  CHECK(h.per_assignment == std::vector<std::int64_t>{2, 1});
  CHECK(h.per_person_max == std::vector<std::int64_t>{1, 1});

  std::vector<double> bad{0.0, 0.5, 0.5, 1.0};
  CHECK_THROWS_AS(membership_histogram(three, bad), InputError);
  std::vector<double> single{0.5};
  CHECK_THROWS_AS(membership_histogram(three, single), InputError);
}

TEST_CASE("influence json round trip") {
  auto f = learn_influence(ten_node_fixture(), "G");
  CHECK(influence_from_json(to_json(f)) == f);
  CHECK(to_json(f)["R"].size() == 3);
}

}  // TEST_SUITE
