#include <cmath>
#include <optional>

#include "sfcbackup/harness.hpp"
#include "sfcbackup/oracle.hpp"

namespace sfcbackup {

namespace {

class Fnv1a {
 public:
  void add(std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      hash_ ^= (v >> (8 * b)) & 0xff;
      hash_ *= 0x100000001b3ULL;
    }
  }
  void add(const SlotObservation& obs) {
    add(obs.t);
    for (int q : obs.requests) add(static_cast<std::uint64_t>(q));
    for (std::uint8_t v : obs.vnf_failed) add(v);
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

RunAggregates aggregate(const std::vector<TraceRow>& rows) {
  RunAggregates agg;
  if (rows.empty()) return agg;
  for (const TraceRow& row : rows) {
    agg.mean_realized_reward += row.realized_reward;
    agg.mean_expected_reward += row.expected_reward;
    agg.mean_remaining_resource += static_cast<double>(row.remaining_resource);
    agg.mean_num_deployed += static_cast<double>(row.num_deployed);
    agg.mean_regret += row.regret.value_or(0.0);
  }
  const auto n = static_cast<double>(rows.size());
  agg.mean_realized_reward /= n;
  agg.mean_expected_reward /= n;
  agg.mean_remaining_resource /= n;
  agg.mean_num_deployed /= n;
  agg.mean_regret /= n;
  return agg;
}

std::vector<RunTrace> run(const ExperimentConfig& config,
                          const SlotObserver& observer) {
  config.validate();
  const EdgeNetwork network = config.effective_network();
  const Catalog& catalog = config.catalog;

  // Ground-truth parameters do not depend on the seed and capacities reset
  // every slot, so the per-slot optimum is a constant.
  std::optional<double> oracle_value;
  if (config.regret) {
    oracle_value = optimal_slot_value(network, catalog, config.ground_truth(0),
                                      config.weights, config.oracle_budget)
                       .best_value;
  }

  std::vector<RunTrace> traces;
  for (PolicyKind kind : config.policies) {
    for (std::uint64_t seed : config.seeds) {
      const GroundTruth gt = config.ground_truth(seed);
      const std::vector<double> popularity = true_popularity(gt);

      PolicyContext ctx;
      ctx.network = &network;
      ctx.catalog = &catalog;
      ctx.users = config.users;
      ctx.knobs = config.knobs;
      ctx.weights = config.weights;
      ctx.seed = seed;
      const auto engine = make_policy(kind, ctx);

      RunTrace trace;
      trace.policy = kind;
      trace.seed = seed;
      trace.total_capacity = network.total_capacity();
      trace.rows.reserve(config.slots);

      Fnv1a hash;
      const SlotObservation obs0 = sample_slot(gt, 0);
      hash.add(obs0);
      engine->start(obs0);

      for (std::uint64_t t = 1; t <= config.slots; ++t) {
        const SlotObservation obs = sample_slot(gt, t);
        hash.add(obs);
        const SlotDecision decision = engine->step(t, obs);
        const RewardAccount account = realized_reward(
            config.weights, obs, decision, catalog, popularity, gt.failure_mean);
        const SlotMetrics metrics = slot_metrics(decision, account);

        TraceRow row;
        row.t = t;
        row.policy = kind;
        row.seed = seed;
        row.realized_reward = metrics.realized_reward;
        row.expected_reward = metrics.expected_reward;
        row.remaining_resource = metrics.remaining_resource;
        row.num_deployed = metrics.num_deployed;
        if (oracle_value) {
          row.oracle_value = *oracle_value;
          row.regret = *oracle_value - metrics.expected_reward;
        }
        trace.rows.push_back(row);
        if (observer) {
          observer(SlotEvent{kind, seed, t, network, catalog, obs, decision,
                             trace.rows.back(), *engine});
        }
      }
      trace.aggregates = aggregate(trace.rows);
      trace.observation_hash = hash.value();
      traces.push_back(std::move(trace));
    }
  }
  return traces;
}

std::vector<PolicySummary> summarize(const std::vector<RunTrace>& traces) {
  std::vector<PolicySummary> out;
  std::vector<PolicyKind> order;
  for (const RunTrace& t : traces) {
    bool seen = false;
    for (PolicyKind k : order) seen = seen || k == t.policy;
    if (!seen) order.push_back(t.policy);
  }
  for (PolicyKind kind : order) {
    std::vector<double> reward, expected, remaining, deployed, regret;
    for (const RunTrace& t : traces) {
      if (t.policy != kind) continue;
      reward.push_back(t.aggregates.mean_realized_reward);
      expected.push_back(t.aggregates.mean_expected_reward);
      remaining.push_back(t.aggregates.mean_remaining_resource);
      deployed.push_back(t.aggregates.mean_num_deployed);
      regret.push_back(t.aggregates.mean_regret);
    }
    PolicySummary s;
    s.policy = kind;
    s.runs = reward.size();
    s.mean_reward = mean_of(reward);
    s.std_reward = sample_std(reward, s.mean_reward);
    s.mean_expected_reward = mean_of(expected);
    s.mean_remaining = mean_of(remaining);
    s.std_remaining = sample_std(remaining, s.mean_remaining);
    s.mean_deployed = mean_of(deployed);
    s.std_deployed = sample_std(deployed, s.mean_deployed);
    s.mean_regret = mean_of(regret);
    out.push_back(s);
  }
  return out;
}

}  // namespace sfcbackup
