#pragma once

#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "sfcbackup/ids.hpp"
#include "sfcbackup/model.hpp"

namespace sfcbackup {

inline constexpr double kCloudLatency = std::numeric_limits<double>::infinity();

// Where one SFC's VNF occurrences go. A cloud plan has no assignment and
// infinite latency.
struct PlacementPlan {
  SfcId sfc;
  std::vector<ServerId> assignment;  // one server per chain occurrence
  double latency = kCloudLatency;
  bool at_edge = false;

  static PlacementPlan cloud(SfcId f) { return PlacementPlan{f, {}, kCloudLatency, false}; }

  friend bool operator==(const PlacementPlan&, const PlacementPlan&) = default;
};

// Sum of routed latency between consecutive hosts; co-located hops cost 0.
double chain_latency(const EdgeNetwork& network,
                     std::span<const ServerId> assignment);

// Tentative (non-mutating) placement of one chain.
using Placer = std::function<PlacementPlan(const EdgeNetwork&, const Catalog&,
                                           const ResidualCapacity&, SfcId)>;

// Prim-inspired minimum-latency walk. Starts at the anchor of the cheapest
// link, packs consecutive occurrences onto the current server while its
// effective residual (residual minus what this plan already took there)
// covers them, then hops to the first direct neighbor, in ascending latency
// order, that can cover the next occurrence. Servers may be revisited. If no
// neighbor fits, the chain goes to the cloud.
PlacementPlan get_consumption(const EdgeNetwork& network, const Catalog& catalog,
                              const ResidualCapacity& residual, SfcId f);

// First-fit by server index: stay on the current server while it fits, else
// advance to the next index that fits (no wrap). Used by the bandit baseline.
PlacementPlan first_fit_placement(const EdgeNetwork& network,
                                  const Catalog& catalog,
                                  const ResidualCapacity& residual, SfcId f);

// Each occurrence goes to the first qualified server in a freshly shuffled
// order. Used by the random baseline.
PlacementPlan random_placement(const EdgeNetwork& network,
                               const Catalog& catalog,
                               const ResidualCapacity& residual, SfcId f,
                               std::mt19937_64& rng);

// Plans every SFC whose skip flag is 0 against the same residual snapshot.
std::vector<PlacementPlan> plan_all(const EdgeNetwork& network,
                                    const Catalog& catalog,
                                    const ResidualCapacity& residual,
                                    std::span<const std::uint8_t> skip,
                                    const Placer& placer = get_consumption);

}  // namespace sfcbackup
