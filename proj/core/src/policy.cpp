#include "sfcbackup/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sfcbackup {

void RewardWeights::validate() const {
  if (!(omega > 0.0) || !(mu > 0.0) || !std::isfinite(omega) ||
      !std::isfinite(mu)) {
    throw std::invalid_argument("reward weights must be finite and positive");
  }
}

double pre_reward(const RewardWeights& weights, double popularity,
                  double latency, double failure) {
  const double success = 1.0 - failure;
  if (success <= 0.0) return 0.0;
  return (weights.omega * popularity - weights.mu * latency) * success;
}

SlotDecision empty_decision(const EdgeNetwork& network, const Catalog& catalog) {
  SlotDecision d;
  d.x.assign(catalog.num_sfcs(), 0);
  d.placed.assign(catalog.num_vnfs(), 0);
  d.residual_after = ResidualCapacity(network);
  return d;
}

void commit_plan(SlotDecision& decision, const Catalog& catalog,
                 const PlacementPlan& plan) {
  if (!plan.at_edge || !std::isfinite(plan.latency)) {
    throw std::logic_error("cannot commit a cloud plan");
  }
  const auto chain = catalog.chain(plan.sfc);
  if (plan.assignment.size() != chain.size()) {
    throw std::logic_error("plan does not cover the whole chain");
  }
  if (decision.x.at(plan.sfc.value)) {
    throw std::logic_error("SFC " + std::to_string(plan.sfc.value) +
                           " already deployed this slot");
  }
  // Check the whole plan first so a failure leaves the decision untouched.
  ResidualCapacity after = decision.residual_after;
  for (std::size_t j = 0; j < chain.size(); ++j) {
    after.consume(plan.assignment[j], catalog.demand(chain[j]));
  }
  decision.residual_after = std::move(after);
  for (VnfId i : chain) ++decision.placed[i.value];
  decision.x[plan.sfc.value] = 1;
  decision.deployed.push_back(plan);
}

SlotDecision greedy_selection(const EdgeNetwork& network, const Catalog& catalog,
                              std::span<const double> popularity_estimate,
                              std::span<const double> vnf_failure_estimate,
                              const RewardWeights& weights, const Placer& placer) {
  SlotDecision decision = empty_decision(network, catalog);
  for (std::size_t iter = 0; iter < catalog.num_sfcs(); ++iter) {
    const auto plans =
        plan_all(network, catalog, decision.residual_after, decision.x, placer);

    SelectionRound round;
    const PlacementPlan* best = nullptr;
    double best_score = 0.0;
    for (const PlacementPlan& plan : plans) {
      if (!plan.at_edge) continue;
      const double failure =
          chain_failure_rate(catalog, vnf_failure_estimate, plan.sfc);
      const double score = pre_reward(
          weights, popularity_estimate[plan.sfc.value], plan.latency, failure);
      round.candidates.push_back({plan.sfc, score});
      if (score > best_score) {
        best_score = score;
        best = &plan;
      }
    }
    if (best != nullptr) round.chosen = best->sfc;
    decision.rounds.push_back(std::move(round));
    if (best == nullptr) break;
    commit_plan(decision, catalog, *best);
  }
  return decision;
}

SlotDecision learning_slot(const EdgeNetwork& network, const Catalog& catalog,
                           Learners& learners, std::uint64_t t,
                           const SlotObservation& obs,
                           const RewardWeights& weights, const Placer& placer) {
  if (t == 0) throw std::invalid_argument("slot 0 only initializes learners");
  learners.popularity.refresh(t);
  learners.failure.refresh(t);
  SlotDecision decision = greedy_selection(
      network, catalog, learners.popularity.current_estimate(),
      learners.failure.current_estimate(), weights, placer);
  learners.popularity.update(obs, decision.x);
  learners.failure.update(obs, decision.placed);
  return decision;
}

SlotDecision rtsd_slot(const EdgeNetwork& network, const Catalog& catalog,
                       Learners& learners, std::uint64_t t,
                       const SlotObservation& obs, const RewardWeights& weights) {
  return learning_slot(network, catalog, learners, t, obs, weights,
                       get_consumption);
}

SlotDecision bandit_scheme_slot(const EdgeNetwork& network,
                                const Catalog& catalog, Learners& learners,
                                std::uint64_t t, const SlotObservation& obs,
                                const RewardWeights& weights) {
  return learning_slot(network, catalog, learners, t, obs, weights,
                       first_fit_placement);
}

SlotDecision random_scheme_slot(std::mt19937_64& rng, const EdgeNetwork& network,
                                const Catalog& catalog) {
  SlotDecision decision = empty_decision(network, catalog);
  std::vector<SfcId> remaining;
  for (std::size_t f = 0; f < catalog.num_sfcs(); ++f) remaining.emplace_back(f);

  while (!remaining.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, remaining.size() - 1);
    const std::size_t k = pick(rng);
    const SfcId f = remaining[k];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(k));

    const PlacementPlan plan =
        random_placement(network, catalog, decision.residual_after, f, rng);
    if (plan.at_edge) commit_plan(decision, catalog, plan);
  }
  return decision;
}

RewardAccount realized_reward(const RewardWeights& weights,
                              const SlotObservation& obs,
                              const SlotDecision& decision,
                              const Catalog& catalog,
                              std::span<const double> true_popularity,
                              std::span<const double> true_failure) {
  RewardAccount account;
  account.realized.assign(catalog.num_sfcs(), 0.0);
  account.expected.assign(catalog.num_sfcs(), 0.0);
  for (const PlacementPlan& plan : decision.deployed) {
    const std::size_t f = plan.sfc.value;
    const auto chain = catalog.chain(plan.sfc);
    const bool failed = std::any_of(chain.begin(), chain.end(), [&](VnfId i) {
      return obs.vnf_failed[i.value] != 0;
    });
    const double base = weights.omega * obs.requests[f] - weights.mu * plan.latency;
    account.realized[f] = failed ? 0.0 : base;
    account.expected[f] =
        (weights.omega * true_popularity[f] - weights.mu * plan.latency) *
        (1.0 - chain_failure_rate(catalog, true_failure, plan.sfc));
  }
  // Sum in SFC order so totals do not depend on commit order.
  for (std::size_t f = 0; f < catalog.num_sfcs(); ++f) {
    account.realized_total += account.realized[f];
    account.expected_total += account.expected[f];
  }
  return account;
}

SlotMetrics slot_metrics(const SlotDecision& decision,
                         const RewardAccount& account) {
  return {account.expected_total, account.realized_total,
          decision.residual_after.total(), decision.num_deployed()};
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kRtsd: return "rtsd";
    case PolicyKind::kBandit: return "bandit";
    case PolicyKind::kRandom: return "random";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy(std::string_view name) {
  if (name == "rtsd") return PolicyKind::kRtsd;
  if (name == "bandit") return PolicyKind::kBandit;
  if (name == "random") return PolicyKind::kRandom;
  return std::nullopt;
}

namespace {

class LearningPolicy final : public Policy {
 public:
  LearningPolicy(PolicyKind kind, const PolicyContext& ctx, Placer placer)
      : kind_(kind), ctx_(ctx), placer_(std::move(placer)) {}

  PolicyKind kind() const override { return kind_; }

  void start(const SlotObservation& obs0) override {
    learners_ = init_learners(obs0, ctx_.users, ctx_.knobs);
  }

  SlotDecision step(std::uint64_t t, const SlotObservation& obs) override {
    return learning_slot(*ctx_.network, *ctx_.catalog, learners_, t, obs,
                         ctx_.weights, placer_);
  }

  const Learners* learners() const override { return &learners_; }

 private:
  PolicyKind kind_;
  PolicyContext ctx_;
  Placer placer_;
  Learners learners_;
};

class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(const PolicyContext& ctx) : ctx_(ctx) {
    // Own stream, disjoint from the environment's counter keys.
    rng_.seed(detail::splitmix64(ctx.seed ^ 0x52414e444f4dULL));
  }

  PolicyKind kind() const override { return PolicyKind::kRandom; }
  void start(const SlotObservation&) override {}

  SlotDecision step(std::uint64_t, const SlotObservation&) override {
    return random_scheme_slot(rng_, *ctx_.network, *ctx_.catalog);
  }

 private:
  PolicyContext ctx_;
  std::mt19937_64 rng_;
};

}  // namespace

std::unique_ptr<Policy> make_policy(PolicyKind kind, const PolicyContext& ctx) {
  if (ctx.network == nullptr || ctx.catalog == nullptr) {
    throw std::invalid_argument("policy context is missing the instance");
  }
  switch (kind) {
    case PolicyKind::kRtsd:
      return std::make_unique<LearningPolicy>(kind, ctx, get_consumption);
    case PolicyKind::kBandit:
      return std::make_unique<LearningPolicy>(kind, ctx, first_fit_placement);
    case PolicyKind::kRandom:
      return std::make_unique<RandomPolicy>(ctx);
  }
  throw std::invalid_argument("unknown policy kind");
}

}  // namespace sfcbackup
