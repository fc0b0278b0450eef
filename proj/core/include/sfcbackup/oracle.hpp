#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sfcbackup/model.hpp"
#include "sfcbackup/placement.hpp"
#include "sfcbackup/policy.hpp"
#include "sfcbackup/workload.hpp"

namespace sfcbackup {

// Thrown when a search would exceed its budget.
class SearchSpaceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultStateBudget = 10'000'000;

// Exact minimum routed chain latency over every capacity-feasible assignment
// of the chain's occurrences to servers, or nullopt when none exists.
// Refuses when num_servers^chain_length exceeds `state_budget`.
std::optional<double> optimal_chain_latency(
    const EdgeNetwork& network, const Catalog& catalog,
    const ResidualCapacity& residual, SfcId f,
    std::uint64_t state_budget = kDefaultStateBudget);

struct OracleResult {
  std::vector<std::optional<double>> best_latency;  // per SFC, standalone
  std::vector<SfcId> best_selection;
  std::vector<PlacementPlan> best_plans;            // joint placement
  double best_value = 0.0;
};

// Best expected slot value sum_f (omega q_f - mu L_f)(1 - max v_i) over every
// SFC subset together with a jointly capacity-feasible placement. Exact
// branch and bound; throws once more than `state_budget` search nodes have
// been visited rather than returning a possibly suboptimal answer.
OracleResult optimal_slot_value(const EdgeNetwork& network,
                                const Catalog& catalog,
                                std::span<const double> popularity,
                                std::span<const double> failure,
                                const RewardWeights& weights,
                                std::uint64_t state_budget = kDefaultStateBudget);

OracleResult optimal_slot_value(const EdgeNetwork& network,
                                const Catalog& catalog, const GroundTruth& gt,
                                const RewardWeights& weights,
                                std::uint64_t state_budget = kDefaultStateBudget);

}  // namespace sfcbackup
