#include <doctest.h>

#include <cmath>
#include <random>

#include "reference.hpp"
#include "sfcbackup/harness.hpp"
#include "sfcbackup/policy.hpp"

using namespace sfcbackup;

namespace {

// Straight-line re-implementation of one learning slot: estimates from the
// raw history, then the commit-best-positive loop. Placement itself comes
// from the library (tested separately).
struct ReferenceRtsd {
  double pop_scale;
  double fail_scale;
  int fail_sign;
  std::vector<std::vector<int>> q_seen;     // per SFC, Q values when deployed
  std::vector<std::uint64_t> h;             // per VNF, copies placed
  std::vector<double> fail_sum;             // per VNF, V summed over slots with copies

  std::vector<SfcId> step(const EdgeNetwork& net, const Catalog& cat,
                          std::uint64_t t, const SlotObservation& obs) {
    const double lt = std::log(static_cast<double>(t));
    std::vector<double> q(cat.num_sfcs()), v(cat.num_vnfs(), 0.0);
    for (std::size_t f = 0; f < q.size(); ++f) {
      const auto& seen = q_seen[f];
      if (seen.empty()) {
        q[f] = ref::kInf;
        continue;
      }
      double sum = 0.0;
      for (int r : seen) sum += r;
      const double n = static_cast<double>(seen.size());
      q[f] = sum / n + pop_scale * std::sqrt(3.0 * lt / (2.0 * n));
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (h[i] == 0) continue;
      const double n = static_cast<double>(h[i]);
      const double raw = fail_sum[i] / n + fail_sign * fail_scale * std::sqrt(3.0 * lt / (2.0 * n));
      v[i] = std::min(1.0, std::max(0.0, raw));
    }

    ResidualCapacity residual(net);
    std::vector<bool> done(cat.num_sfcs(), false);
    std::vector<SfcId> order;
    std::vector<int> copies(cat.num_vnfs(), 0);
    while (true) {
      double best = 0.0;
      std::optional<PlacementPlan> pick;
      for (std::size_t f = 0; f < cat.num_sfcs(); ++f) {
        if (done[f]) continue;
        const auto plan = get_consumption(net, cat, residual, SfcId{f});
        if (!plan.at_edge) continue;
        double u = 0.0;
        for (VnfId i : cat.chain(SfcId{f})) u = std::max(u, v[i.value]);
        const double score = u >= 1.0 ? 0.0 : (q[f] - plan.latency) * (1.0 - u);
        if (score > best) {
          best = score;
          pick = plan;
        }
      }
      if (!pick) break;
      const auto chain = cat.chain(pick->sfc);
      for (std::size_t j = 0; j < chain.size(); ++j) {
        residual.consume(pick->assignment[j], cat.demand(chain[j]));
        ++copies[chain[j].value];
      }
      done[pick->sfc.value] = true;
      order.push_back(pick->sfc);
    }
    for (SfcId f : order) q_seen[f.value].push_back(obs.requests[f.value]);
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (copies[i] == 0) continue;
      h[i] += static_cast<std::uint64_t>(copies[i]);
      fail_sum[i] += obs.vnf_failed[i];
    }
    return order;
  }
};

std::vector<SfcId> commit_order(const SlotDecision& d) {
  std::vector<SfcId> out;
  for (const auto& p : d.deployed) out.push_back(p.sfc);
  return out;
}

}  // namespace

TEST_CASE("pre_reward") {
  const RewardWeights w;
  CHECK(pre_reward(w, 10.0, 2.0, 0.5) == 4.0);
  CHECK(pre_reward(w, 1e9, 0.0, 1.0) == 0.0);
  CHECK(pre_reward(w, kUnexplored, 0.0, 1.0) == 0.0);
  CHECK(pre_reward(w, 0.0, 3.0, 0.0) == -3.0);
  CHECK(pre_reward(RewardWeights{2.0, 0.5}, 3.0, 2.0, 0.0) == 5.0);
  CHECK_THROWS(RewardWeights{0.0, 1.0}.validate());
}

TEST_CASE("no capacity, no deployment") {
  const auto cfg = canonical_config();
  const EdgeNetwork net(std::vector<std::int64_t>(6, 0),
                        {cfg.network.links().begin(), cfg.network.links().end()});
  const auto gt = cfg.ground_truth(1);
  auto learners = init_learners(sample_slot(gt, 0), 10);
  const auto d = rtsd_slot(net, cfg.catalog, learners, 1, sample_slot(gt, 1));
  CHECK(d.num_deployed() == 0);
  CHECK(d.x == std::vector<std::uint8_t>(6, 0));

  std::mt19937_64 rng(1);
  CHECK(random_scheme_slot(rng, net, cfg.catalog).num_deployed() == 0);
}

TEST_CASE("ample capacity deploys every chain") {
  const auto cfg = canonical_config();
  const auto net = cfg.network.with_capacity_scale(100.0);
  const auto gt = cfg.ground_truth(1);
  auto learners = init_learners(sample_slot(gt, 0), 10);
  const auto d = rtsd_slot(net, cfg.catalog, learners, 1, sample_slot(gt, 1));
  CHECK(d.num_deployed() == 6);
  CHECK(d.rounds.size() == 6);  // at most one round per SFC
  CHECK(ref::check_decision(net, cfg.catalog, d).empty());
}

TEST_CASE("bandit scheme places first-fit") {
  const EdgeNetwork net({10, 8, 9}, {{ServerId{0}, ServerId{1}, 1.0},
                                     {ServerId{1}, ServerId{2}, 0.5}});
  const Catalog cat({8, 8}, {{VnfId{0}, VnfId{1}}});
  auto learners = init_learners(SlotObservation{0, {5}, {0, 0}}, 10);
  const SlotObservation obs{1, {5}, {0, 0}};
  auto bandit = learners;
  const auto d = bandit_scheme_slot(net, cat, bandit, 1, obs);
  REQUIRE(d.num_deployed() == 1);
  CHECK(d.deployed[0].assignment == std::vector<ServerId>{ServerId{0}, ServerId{1}});
  // The greedy walk starts at the anchor of the 0.5 link instead.
  const auto g = rtsd_slot(net, cat, learners, 1, obs);
  REQUIRE(g.num_deployed() == 1);
  CHECK(g.deployed[0].assignment.front() == ServerId{2});
}

TEST_CASE("random scheme picks uniformly among symmetric chains") {
  const EdgeNetwork net({5}, {});
  const Catalog cat({5}, {{VnfId{0}}, {VnfId{0}}});
  const int seeds = 10000;
  int first = 0;
  for (int s = 0; s < seeds; ++s) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(s));
    const auto d = random_scheme_slot(rng, net, cat);
    REQUIRE(d.num_deployed() == 1);
    first += d.x[0];
  }
  CHECK(std::abs(first / double(seeds) - 0.5) < 3.0 * std::sqrt(0.25 / seeds));

  const Catalog single({2}, {{VnfId{0}}});
  for (int s = 0; s < 100; ++s) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(s));
    CHECK(random_scheme_slot(rng, net, single).num_deployed() == 1);
  }
}

TEST_CASE("commit_plan rejects bad plans without side effects") {
  const EdgeNetwork net({4, 4}, {{ServerId{0}, ServerId{1}, 1.0}});
  const Catalog cat({4, 4}, {{VnfId{0}, VnfId{1}}, {VnfId{0}}});
  auto d = empty_decision(net, cat);
  CHECK_THROWS_AS(commit_plan(d, cat, PlacementPlan::cloud(SfcId{0})), std::logic_error);
  const auto plan = get_consumption(net, cat, d.residual_after, SfcId{0});
  commit_plan(d, cat, plan);
  CHECK_THROWS_AS(commit_plan(d, cat, plan), std::logic_error);
  const auto before = d.residual_after;
  CHECK_THROWS_AS(commit_plan(d, cat, PlacementPlan{SfcId{1}, {ServerId{0}}, 0.0, true}),
                  std::logic_error);
  CHECK(d.residual_after == before);
  CHECK(d.x == std::vector<std::uint8_t>{1, 0});
}

TEST_CASE("realized and expected reward") {
  const EdgeNetwork net({4, 4}, {{ServerId{0}, ServerId{1}, 1.0}});
  const Catalog cat({4, 4}, {{VnfId{0}, VnfId{1}}});
  auto d = empty_decision(net, cat);
  commit_plan(d, cat, get_consumption(net, cat, d.residual_after, SfcId{0}));
  REQUIRE(d.deployed[0].latency == 1.0);

  const std::vector<double> q{4.0}, v{0.1, 0.0};
  const auto ok = realized_reward({}, SlotObservation{1, {6}, {0, 0}}, d, cat, q, v);
  CHECK(ok.realized_total == 5.0);
  CHECK(ok.expected_total == doctest::Approx(2.7));
  const auto failed = realized_reward({}, SlotObservation{1, {6}, {0, 1}}, d, cat, q, v);
  CHECK(failed.realized_total == 0.0);

  // Only VNF 0 can fail, so P(chain survives) = 1 - max v and the realized
  // average must converge to the expectation form.
  const GroundTruth gt = GroundTruth::per_sfc(10, {0.4}, {0.1, 0.0}, 99);
  const int slots = 100000;
  double sum = 0.0, sq = 0.0;
  for (int t = 0; t < slots; ++t) {
    const auto obs = sample_slot(gt, static_cast<std::uint64_t>(t));
    const double r = realized_reward({}, obs, d, cat, q, v).realized_total;
    sum += r;
    sq += r * r;
  }
  const double mean = sum / slots;
  const double sd = std::sqrt((sq - slots * mean * mean) / (slots - 1));
  CHECK(std::abs(mean - 2.7) < 3.0 * sd / std::sqrt(double(slots)));
}

TEST_CASE("rtsd matches a straight-line reference on the reference instance") {
  const auto cfg = canonical_config();
  for (const LearnerKnobs knobs : {LearnerKnobs{}, cfg.knobs}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto gt = cfg.ground_truth(seed);
      auto learners = init_learners(sample_slot(gt, 0), cfg.users, knobs);
      ReferenceRtsd reference{static_cast<double>(cfg.users),
                              knobs.failure_scale_for(cfg.users),
                              knobs.failure_bonus_sign,
                              std::vector<std::vector<int>>(6),
                              std::vector<std::uint64_t>(15, 0),
                              std::vector<double>(15, 0.0)};
      for (std::uint64_t t = 1; t <= 300; ++t) {
        const auto obs = sample_slot(gt, t);
        const auto d = rtsd_slot(cfg.network, cfg.catalog, learners, t, obs, cfg.weights);
        const auto expect = reference.step(cfg.network, cfg.catalog, t, obs);
        REQUIRE(commit_order(d) == expect);
      }
    }
  }
}

TEST_CASE("decisions are feasible and greedy rounds pick the argmax") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = ref::random_instance(rng, 5, 4, 5, 20);
    const auto& net = inst.network;
    const auto& cat = inst.catalog;
    std::uniform_real_distribution<double> p(0.0, 1.0), fail(0.0, 0.3);
    std::vector<double> per_sfc(cat.num_sfcs()), fm(cat.num_vnfs());
    for (auto& x : per_sfc) x = p(rng);
    for (auto& x : fm) x = fail(rng);
    const auto gt = GroundTruth::per_sfc(6, per_sfc, fm, static_cast<std::uint64_t>(trial));

    for (PolicyKind kind : {PolicyKind::kRtsd, PolicyKind::kBandit, PolicyKind::kRandom}) {
      PolicyContext ctx{&net, &cat, 6, {}, {}, static_cast<std::uint64_t>(trial)};
      ctx.knobs.failure_bonus_sign = -1;
      ctx.knobs.failure_bonus_scale = 1.0;
      auto policy = make_policy(kind, ctx);
      policy->start(sample_slot(gt, 0));
      for (std::uint64_t t = 1; t <= 40; ++t) {
        const auto d = policy->step(t, sample_slot(gt, t));
        REQUIRE(ref::check_decision(net, cat, d) == "");
        for (const auto& plan : d.deployed) CHECK(std::isfinite(plan.latency));
        if (kind == PolicyKind::kRandom) continue;
        CHECK(d.rounds.size() <= cat.num_sfcs());
        for (std::size_t r = 0; r < d.rounds.size(); ++r) {
          const auto& round = d.rounds[r];
          if (!round.chosen) {
            CHECK(r + 1 == d.rounds.size());
            for (const auto& c : round.candidates) CHECK_FALSE(c.score > 0.0);
            continue;
          }
          CHECK(d.deployed[r].sfc == *round.chosen);
          double chosen_score = 0.0;
          for (const auto& c : round.candidates) {
            if (c.sfc == *round.chosen) chosen_score = c.score;
          }
          CHECK(chosen_score > 0.0);
          for (const auto& c : round.candidates) {
            CHECK(c.score <= chosen_score);
            if (c.score == chosen_score) CHECK(*round.chosen <= c.sfc);
          }
        }
      }
    }
  }
}

TEST_CASE("policy names round-trip") {
  for (PolicyKind k : {PolicyKind::kRtsd, PolicyKind::kBandit, PolicyKind::kRandom}) {
    CHECK(parse_policy(to_string(k)) == k);
  }
  CHECK_FALSE(parse_policy("nosuch").has_value());
}
