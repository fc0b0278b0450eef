#include <doctest.h>

#include <cmath>

#include "sfcbackup/harness.hpp"
#include "sfcbackup/workload.hpp"

using namespace sfcbackup;

TEST_CASE("degenerate request probabilities") {
  const auto none = GroundTruth::uniform(10, 3, 0.0, {0.0}, 1);
  const auto all = GroundTruth::uniform(10, 3, 1.0, {1.0}, 1);
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto a = sample_slot(none, t);
    const auto b = sample_slot(all, t);
    CHECK(a.requests == std::vector<int>{0, 0, 0});
    CHECK(b.requests == std::vector<int>{10, 10, 10});
    CHECK(a.vnf_failed[0] == 0);
    CHECK(b.vnf_failed[0] == 1);
  }
}

TEST_CASE("request counts average to the popularity") {
  // K = 10, p = 0.3: E[Q] = 3, Var[Q] = 2.1.
  const auto gt = GroundTruth::uniform(10, 1, 0.3, {0.2}, 42);
  const int slots = 100000;
  double sum = 0.0, fails = 0.0;
  for (int t = 0; t < slots; ++t) {
    const auto obs = sample_slot(gt, static_cast<std::uint64_t>(t));
    CHECK(obs.requests[0] >= 0);
    CHECK(obs.requests[0] <= 10);
    sum += obs.requests[0];
    fails += obs.vnf_failed[0];
  }
  CHECK(std::abs(sum / slots - 3.0) < 3.0 * std::sqrt(2.1 / slots));
  CHECK(std::abs(fails / slots - 0.2) < 3.0 * std::sqrt(0.16 / slots));
}

TEST_CASE("popularity is the sum of user request probabilities") {
  GroundTruth gt;
  gt.request_prob = {{1.0, 0.0, 0.25}, {0.5, 0.5, 0.25}};
  gt.failure_mean = {0.1};
  CHECK(true_popularity(gt) == std::vector<double>{1.5, 0.5, 0.5});

  const auto cfg = canonical_config();
  const auto ref = cfg.ground_truth(1);
  const auto q = true_popularity(ref);
  REQUIRE(q.size() == 6);
  for (std::size_t f = 0; f < 6; ++f) {
    double direct = 0.0;
    for (const auto& row : ref.request_prob) direct += row[f];
    CHECK(q[f] == doctest::Approx(direct).epsilon(1e-15));
  }
  CHECK(q[0] == doctest::Approx(7.0));
}

TEST_CASE("draws depend only on seed and slot") {
  const auto gt = GroundTruth::uniform(10, 4, 0.5, {0.3, 0.3, 0.3}, 9);
  const auto first = sample_slot(gt, 17);
  for (std::uint64_t t = 0; t < 40; ++t) sample_slot(gt, t);
  CHECK(sample_slot(gt, 17) == first);

  bool differs = false;
  for (std::uint64_t t = 18; t < 30; ++t) differs = differs || !(sample_slot(gt, t) == first);
  CHECK(differs);

  auto other = gt;
  other.seed = 10;
  bool seed_matters = false;
  for (std::uint64_t t = 0; t < 10; ++t) {
    seed_matters = seed_matters || !(sample_slot(other, t) == sample_slot(gt, t));
  }
  CHECK(seed_matters);
}

TEST_CASE("counter uniform stays in [0, 1)") {
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = detail::counter_uniform(3, i, 1, i * 7);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("ground truth validation") {
  auto gt = GroundTruth::uniform(2, 2, 0.5, {0.1}, 0);
  CHECK_NOTHROW(gt.validate());
  gt.request_prob[1][0] = 1.5;
  CHECK_THROWS_AS(gt.validate(), std::invalid_argument);
  gt = GroundTruth::uniform(2, 2, 0.5, {-0.1}, 0);
  CHECK_THROWS_AS(gt.validate(), std::invalid_argument);
  gt = GroundTruth::uniform(2, 2, 0.5, {0.1}, 0);
  gt.request_prob[0].push_back(0.2);
  CHECK_THROWS_AS(gt.validate(), std::invalid_argument);
}
