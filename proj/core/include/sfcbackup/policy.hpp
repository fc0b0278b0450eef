#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "sfcbackup/learning.hpp"
#include "sfcbackup/model.hpp"
#include "sfcbackup/placement.hpp"
#include "sfcbackup/workload.hpp"

namespace sfcbackup {

// omega weighs popularity, mu weighs latency. Both strictly positive.
struct RewardWeights {
  double omega = 1.0;
  double mu = 1.0;

  void validate() const;
};

// (omega q - mu L)(1 - U) for an edge-feasible plan. U >= 1 annihilates the
// reward even when q is the unexplored sentinel.
double pre_reward(const RewardWeights& weights, double popularity,
                  double latency, double failure);

struct ScoredCandidate {
  SfcId sfc;
  double score = 0.0;
};

// One iteration of the greedy selection loop.
struct SelectionRound {
  std::vector<ScoredCandidate> candidates;  // edge-feasible plans only
  std::optional<SfcId> chosen;
};

struct SlotDecision {
  std::vector<PlacementPlan> deployed;  // commit order
  std::vector<std::uint8_t> x;          // X_f(t)
  std::vector<int> placed;              // sum_n P_{i,n}(t) per VNF
  ResidualCapacity residual_after;
  std::vector<SelectionRound> rounds;

  std::size_t num_deployed() const { return deployed.size(); }
};

SlotDecision empty_decision(const EdgeNetwork& network, const Catalog& catalog);

// Consumes the plan's demands from residual_after and marks X_f and the
// placement counts. Throws std::logic_error for cloud plans, repeated SFCs
// or plans that no longer fit.
void commit_plan(SlotDecision& decision, const Catalog& catalog,
                 const PlacementPlan& plan);

// Repeatedly plans all not-yet-deployed SFCs, scores edge-feasible plans with
// pre_reward and commits the best one (ties to the smaller id). Stops when no
// candidate has a positive score.
SlotDecision greedy_selection(const EdgeNetwork& network, const Catalog& catalog,
                              std::span<const double> popularity_estimate,
                              std::span<const double> vnf_failure_estimate,
                              const RewardWeights& weights, const Placer& placer);

// Learning slot shared by RTSD and the bandit baseline: refresh estimates for
// slot t, select with `placer`, then feed this slot's observation back for
// the deployed arms.
SlotDecision learning_slot(const EdgeNetwork& network, const Catalog& catalog,
                           Learners& learners, std::uint64_t t,
                           const SlotObservation& obs,
                           const RewardWeights& weights, const Placer& placer);

SlotDecision rtsd_slot(const EdgeNetwork& network, const Catalog& catalog,
                       Learners& learners, std::uint64_t t,
                       const SlotObservation& obs,
                       const RewardWeights& weights = {});

SlotDecision bandit_scheme_slot(const EdgeNetwork& network,
                                const Catalog& catalog, Learners& learners,
                                std::uint64_t t, const SlotObservation& obs,
                                const RewardWeights& weights = {});

// No learning or scoring: repeatedly draws a remaining SFC uniformly, tries
// random_placement, commits on success, drops it either way.
SlotDecision random_scheme_slot(std::mt19937_64& rng, const EdgeNetwork& network,
                                const Catalog& catalog);

struct RewardAccount {
  std::vector<double> realized;  // per SFC
  std::vector<double> expected;  // per SFC, with true q and U
  double realized_total = 0.0;
  double expected_total = 0.0;
};

// Realized: (omega Q_f(t) - mu L_f) if no occurrence of f failed, else 0.
// Expected: (omega q_f - mu L_f)(1 - max_i v_i). Cloud chains earn 0.
RewardAccount realized_reward(const RewardWeights& weights,
                              const SlotObservation& obs,
                              const SlotDecision& decision,
                              const Catalog& catalog,
                              std::span<const double> true_popularity,
                              std::span<const double> true_failure);

struct SlotMetrics {
  double expected_reward = 0.0;
  double realized_reward = 0.0;
  std::int64_t remaining_resource = 0;
  std::size_t num_deployed = 0;
};

SlotMetrics slot_metrics(const SlotDecision& decision,
                         const RewardAccount& account);

enum class PolicyKind { kRtsd, kBandit, kRandom };

std::string_view to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy(std::string_view name);

// Per-run decision engine. start() consumes the slot-0 observation; step()
// is then called for t = 1, 2, ...
class Policy {
 public:
  virtual ~Policy() = default;
  virtual PolicyKind kind() const = 0;
  virtual void start(const SlotObservation& obs0) = 0;
  virtual SlotDecision step(std::uint64_t t, const SlotObservation& obs) = 0;
  virtual const Learners* learners() const { return nullptr; }
};

struct PolicyContext {
  const EdgeNetwork* network = nullptr;
  const Catalog* catalog = nullptr;
  std::size_t users = 0;
  LearnerKnobs knobs;
  RewardWeights weights;
  std::uint64_t seed = 0;
};

std::unique_ptr<Policy> make_policy(PolicyKind kind, const PolicyContext& ctx);

}  // namespace sfcbackup
