#include <doctest.h>

#include <random>

#include "reference.hpp"
#include "sfcbackup/harness.hpp"
#include "sfcbackup/placement.hpp"

using namespace sfcbackup;

namespace {

EdgeNetwork pair_net(std::int64_t a, std::int64_t b, double latency) {
  return EdgeNetwork({a, b}, {{ServerId{0}, ServerId{1}, latency}});
}

std::vector<ServerId> servers(std::initializer_list<std::size_t> ids) {
  std::vector<ServerId> out;
  for (auto i : ids) out.emplace_back(i);
  return out;
}

ResidualCapacity random_residual(const EdgeNetwork& net, std::mt19937_64& rng) {
  ResidualCapacity r(net);
  for (std::size_t s = 0; s < net.num_servers(); ++s) {
    std::uniform_int_distribution<std::int64_t> take(0, net.capacity(ServerId{s}));
    r.consume(ServerId{s}, take(rng) / 2);
  }
  return r;
}

}  // namespace

TEST_CASE("whole chain on the anchor costs nothing") {
  const auto net = pair_net(20, 5, 1.0);
  const Catalog cat({4, 4, 4}, {{VnfId{0}, VnfId{1}, VnfId{2}}});
  const auto plan = get_consumption(net, cat, ResidualCapacity(net), SfcId{0});
  CHECK(plan.at_edge);
  CHECK(plan.assignment == servers({0, 0, 0}));
  CHECK(plan.latency == 0.0);
}

TEST_CASE("overflow hops to the cheapest neighbor") {
  const auto net = pair_net(10, 10, 5.0);
  const Catalog cat({4, 4, 4}, {{VnfId{0}, VnfId{1}, VnfId{2}}});
  const ResidualCapacity full(net);
  const auto plan = get_consumption(net, cat, full, SfcId{0});
  CHECK(plan.assignment == servers({0, 0, 1}));
  CHECK(plan.latency == 5.0);
  const auto best = ref::brute_force_latency(net, cat, {10, 10}, SfcId{0});
  REQUIRE(best);
  CHECK(*best == 5.0);
  CHECK(full == ResidualCapacity(net));  // tentative only
}

TEST_CASE("cloud when an occurrence fits nowhere") {
  const auto net = pair_net(10, 10, 1.0);
  const Catalog cat({4, 11}, {{VnfId{0}, VnfId{1}}});
  const auto plan = get_consumption(net, cat, ResidualCapacity(net), SfcId{0});
  CHECK_FALSE(plan.at_edge);
  CHECK(plan.assignment.empty());
  CHECK(std::isinf(plan.latency));
  CHECK_THROWS_AS(get_consumption(net, cat, ResidualCapacity(net), SfcId{4}),
                  std::out_of_range);
}

TEST_CASE("greedy only walks to direct neighbors") {
  // Path 0 - 1 - 2; server 1 is full, so the walk from 0 is stuck even though
  // server 2 could take the rest.
  const EdgeNetwork net({5, 0, 5}, {{ServerId{0}, ServerId{1}, 1.0},
                                    {ServerId{1}, ServerId{2}, 1.0}});
  const Catalog cat({5, 5}, {{VnfId{0}, VnfId{1}}});
  CHECK_FALSE(get_consumption(net, cat, ResidualCapacity(net), SfcId{0}).at_edge);
  const auto best = ref::brute_force_latency(net, cat, {5, 0, 5}, SfcId{0});
  REQUIRE(best);
  CHECK(*best == 2.0);
}

TEST_CASE("plan_all on the reference instance") {
  const auto cfg = canonical_config();
  const ResidualCapacity full(cfg.network);
  const std::vector<std::uint8_t> none(6, 0), all(6, 1);
  CHECK(plan_all(cfg.network, cfg.catalog, full, all).empty());

  const auto plans = plan_all(cfg.network, cfg.catalog, full, none);
  REQUIRE(plans.size() == 6);
  const std::vector<std::int64_t> caps(cfg.network.capacities().begin(),
                                       cfg.network.capacities().end());
  for (std::size_t f = 0; f < 6; ++f) {
    CHECK(plans[f].sfc == SfcId{f});
    const auto best = ref::brute_force_latency(cfg.network, cfg.catalog, caps, SfcId{f});
    if (plans[f].at_edge) {
      REQUIRE(best);
      CHECK(plans[f].latency >= *best - 1e-12);
    } else {
      CHECK(plans[f].assignment.empty());
    }
    if (!best) CHECK_FALSE(plans[f].at_edge);
  }

  std::vector<std::uint8_t> skip(6, 1);
  skip[2] = 0;
  const auto one = plan_all(cfg.network, cfg.catalog, full, skip);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == plans[2]);
}

TEST_CASE("identical chains get identical plans") {
  const auto net = pair_net(9, 9, 2.0);
  const Catalog cat({3, 5}, {{VnfId{0}, VnfId{1}, VnfId{0}}, {VnfId{0}, VnfId{1}, VnfId{0}}});
  const auto plans = plan_all(net, cat, ResidualCapacity(net), std::vector<std::uint8_t>{0, 0});
  CHECK(plans[0].assignment == plans[1].assignment);
  CHECK(plans[0].latency == plans[1].latency);
}

TEST_CASE("first-fit walks server indices") {
  const EdgeNetwork net({10, 8, 6}, {{ServerId{0}, ServerId{1}, 1.5},
                                     {ServerId{1}, ServerId{2}, 1.0}});
  const Catalog cat({8, 8, 2, 30}, {{VnfId{0}, VnfId{1}}, {VnfId{2}, VnfId{2}}, {VnfId{3}}});
  const ResidualCapacity full(net);
  const auto split = first_fit_placement(net, cat, full, SfcId{0});
  CHECK(split.assignment == servers({0, 1}));
  CHECK(split.latency == 1.5);
  const auto packed = first_fit_placement(net, cat, full, SfcId{1});
  CHECK(packed.assignment == servers({0, 0}));
  CHECK(packed.latency == 0.0);
  CHECK_FALSE(first_fit_placement(net, cat, full, SfcId{2}).at_edge);
}

TEST_CASE("placers respect residual capacity and report the folded latency") {
  std::mt19937_64 rng(77);
  std::mt19937_64 placer_rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const auto inst = ref::random_instance(rng, 5, 5, 2);
    const auto& net = inst.network;
    const auto& cat = inst.catalog;
    const auto residual = random_residual(net, rng);
    const auto dist = ref::shortest_paths(net);
    const std::vector<std::int64_t> free(residual.values().begin(), residual.values().end());

    for (std::size_t f = 0; f < cat.num_sfcs(); ++f) {
      const SfcId sfc{f};
      const std::vector<PlacementPlan> plans{
          get_consumption(net, cat, residual, sfc),
          first_fit_placement(net, cat, residual, sfc),
          random_placement(net, cat, residual, sfc, placer_rng)};
      const auto best = ref::brute_force_latency(net, cat, free, sfc);
      for (const auto& plan : plans) {
        CHECK(plan.at_edge == (plan.assignment.size() == cat.chain(sfc).size()));
        if (!plan.at_edge) continue;
        const auto used = ref::usage(net, cat, {plan});
        for (std::size_t s = 0; s < net.num_servers(); ++s) CHECK(used[s] <= free[s]);
        CHECK(plan.latency == doctest::Approx(ref::fold_latency(dist, plan.assignment)).epsilon(1e-12));
        REQUIRE(best);
        CHECK(plan.latency >= *best - 1e-12);
      }
      if (!best) {
        for (const auto& plan : plans) CHECK_FALSE(plan.at_edge);
      }

      const auto& greedy = plans[0];
      if (greedy.at_edge) {
        for (std::size_t j = 1; j < greedy.assignment.size(); ++j) {
          const auto a = greedy.assignment[j - 1], b = greedy.assignment[j];
          CHECK((a == b || net.link_latency(a, b).has_value()));
        }
      }
      CHECK(get_consumption(net, cat, residual, sfc) == greedy);
    }
  }
}
