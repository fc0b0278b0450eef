#include "sfcbackup/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sfcbackup/learning.hpp"

namespace sfcbackup {

namespace {

// log-space so huge instances do not overflow the estimate.
double log_states(std::size_t servers, std::size_t length) {
  return static_cast<double>(length) * std::log(static_cast<double>(servers));
}

void guard(double log_estimate, std::uint64_t budget, const char* what) {
  if (log_estimate > std::log(static_cast<double>(budget))) {
    throw SearchSpaceTooLarge(std::string(what) + ": about e^" +
                              std::to_string(log_estimate) +
                              " states exceeds budget " + std::to_string(budget));
  }
}

// Enumerates every capacity-feasible assignment of one chain and calls
// visit(assignment) at each leaf.
template <typename Visit>
void enumerate_chain(const EdgeNetwork& network, const Catalog& catalog,
                     std::span<const VnfId> chain, std::vector<std::int64_t>& free,
                     std::vector<ServerId>& assignment, Visit&& visit) {
  const std::size_t j = assignment.size();
  if (j == chain.size()) {
    visit(assignment);
    return;
  }
  const std::int64_t demand = catalog.demand(chain[j]);
  for (std::size_t n = 0; n < network.num_servers(); ++n) {
    if (free[n] < demand) continue;
    free[n] -= demand;
    assignment.emplace_back(n);
    enumerate_chain(network, catalog, chain, free, assignment, visit);
    assignment.pop_back();
    free[n] += demand;
  }
}

// Depth-first over SFCs in index order (deploy branches before skipping),
// then over hosts for each occurrence. Values accumulate in index order so a
// leaf reproduces, bit for bit, what realized_reward() sums for the same
// selection and placement. Pruning uses only valid upper bounds (latency is
// never negative), with a small slack so rounding cannot drop a better leaf.
struct SlotSearch {
  const EdgeNetwork& network;
  const Catalog& catalog;
  std::span<const double> popularity;
  std::span<const double> failure;
  const RewardWeights& weights;
  std::uint64_t budget;

  std::vector<std::int64_t> free;
  std::vector<double> success;        // 1 - U_f
  std::vector<double> optimistic;     // max(0, omega q_f (1 - U_f))
  std::vector<double> tail_bound;     // sum of optimistic over g >= f
  std::vector<PlacementPlan> current;
  std::vector<PlacementPlan> best_plans;
  double best_value = 0.0;
  std::uint64_t visited = 0;

  void prepare() {
    const std::size_t count = catalog.num_sfcs();
    success.resize(count);
    optimistic.resize(count);
    tail_bound.assign(count + 1, 0.0);
    for (std::size_t f = 0; f < count; ++f) {
      success[f] = 1.0 - chain_failure_rate(catalog, failure, SfcId{f});
      optimistic[f] = std::max(0.0, weights.omega * popularity[f] * success[f]);
    }
    for (std::size_t f = count; f-- > 0;) {
      tail_bound[f] = tail_bound[f + 1] + optimistic[f];
    }
  }

  bool hopeless(double bound) const {
    return bound < best_value - 1e-9 * (1.0 + std::abs(best_value));
  }

  void tick() {
    if (++visited > budget) {
      throw SearchSpaceTooLarge("optimal_slot_value: search visited more than " +
                                std::to_string(budget) + " nodes");
    }
  }

  void search(std::size_t f, double value) {
    tick();
    if (f == catalog.num_sfcs()) {
      if (value > best_value) {
        best_value = value;
        best_plans = current;
      }
      return;
    }
    if (hopeless(value + tail_bound[f])) return;

    if (optimistic[f] > 0.0) {
      std::vector<ServerId> assignment;
      assign(f, value, assignment, 0.0);
    }
    search(f + 1, value);
  }

  // Hosts for occurrence j of chain f: stay put first, then by distance.
  void assign(std::size_t f, double value, std::vector<ServerId>& assignment,
              double partial_latency) {
    tick();
    const SfcId sfc{f};
    const auto chain = catalog.chain(sfc);
    const double chain_bound =
        (weights.omega * popularity[f] - weights.mu * partial_latency) * success[f];
    if (chain_bound <= 0.0) return;  // skipping f is at least as good
    if (hopeless(value + chain_bound + tail_bound[f + 1])) return;

    const std::size_t j = assignment.size();
    if (j == chain.size()) {
      const double latency = chain_latency(network, assignment);
      const double reward =
          (weights.omega * popularity[f] - weights.mu * latency) * success[f];
      if (reward <= 0.0) return;
      current.push_back(PlacementPlan{sfc, assignment, latency, true});
      search(f + 1, value + reward);
      current.pop_back();
      return;
    }

    const std::int64_t demand = catalog.demand(chain[j]);
    std::vector<ServerId> hosts;
    for (std::size_t n = 0; n < network.num_servers(); ++n) {
      if (free[n] >= demand) hosts.emplace_back(n);
    }
    if (j > 0) {
      const ServerId prev = assignment.back();
      std::stable_sort(hosts.begin(), hosts.end(), [&](ServerId a, ServerId b) {
        return network.distance(prev, a) < network.distance(prev, b);
      });
    }
    for (ServerId n : hosts) {
      const double step = j > 0 ? network.distance(assignment.back(), n) : 0.0;
      free[n.value] -= demand;
      assignment.push_back(n);
      assign(f, value, assignment, partial_latency + step);
      assignment.pop_back();
      free[n.value] += demand;
    }
  }
};

}  // namespace

std::optional<double> optimal_chain_latency(const EdgeNetwork& network,
                                            const Catalog& catalog,
                                            const ResidualCapacity& residual,
                                            SfcId f, std::uint64_t state_budget) {
  const auto chain = catalog.chain(f);
  guard(log_states(network.num_servers(), chain.size()), state_budget,
        "optimal_chain_latency");

  std::vector<std::int64_t> free(residual.values().begin(), residual.values().end());
  std::vector<ServerId> assignment;
  std::optional<double> best;
  enumerate_chain(network, catalog, chain, free, assignment,
                  [&](const std::vector<ServerId>& a) {
                    const double latency = chain_latency(network, a);
                    if (!best || latency < *best) best = latency;
                  });
  return best;
}

OracleResult optimal_slot_value(const EdgeNetwork& network,
                                const Catalog& catalog,
                                std::span<const double> popularity,
                                std::span<const double> failure,
                                const RewardWeights& weights,
                                std::uint64_t state_budget) {
  const ResidualCapacity full(network);
  OracleResult result;
  for (std::size_t f = 0; f < catalog.num_sfcs(); ++f) {
    result.best_latency.push_back(
        optimal_chain_latency(network, catalog, full, SfcId{f}, state_budget));
  }

  if (popularity.size() != catalog.num_sfcs() ||
      failure.size() != catalog.num_vnfs()) {
    throw std::invalid_argument("oracle parameter size mismatch");
  }
  SlotSearch search{network, catalog, popularity, failure, weights, state_budget,
                    {full.values().begin(), full.values().end()}};
  search.prepare();
  search.search(0, 0.0);

  result.best_value = search.best_value;
  result.best_plans = std::move(search.best_plans);
  for (const PlacementPlan& plan : result.best_plans) {
    result.best_selection.push_back(plan.sfc);
  }
  return result;
}

OracleResult optimal_slot_value(const EdgeNetwork& network,
                                const Catalog& catalog, const GroundTruth& gt,
                                const RewardWeights& weights,
                                std::uint64_t state_budget) {
  const auto q = true_popularity(gt);
  return optimal_slot_value(network, catalog, q, gt.failure_mean, weights,
                            state_budget);
}

}  // namespace sfcbackup
