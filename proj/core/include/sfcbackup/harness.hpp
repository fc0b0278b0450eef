#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sfcbackup/learning.hpp"
#include "sfcbackup/model.hpp"
#include "sfcbackup/policy.hpp"
#include "sfcbackup/workload.hpp"

namespace sfcbackup {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Request probabilities as written in the config: one value for every
// (user, SFC) pair, one per SFC shared by all users, or a full user x SFC
// matrix. Only the first two survive a user-count override.
struct RequestModel {
  enum class Form { kUniform, kPerSfc, kMatrix };
  Form form = Form::kUniform;
  double uniform = 0.0;
  std::vector<double> per_sfc;
  std::vector<std::vector<double>> matrix;
};

struct ExperimentConfig {
  EdgeNetwork network;  // as configured, before capacity scaling
  Catalog catalog;
  std::size_t users = 10;
  RequestModel requests;
  std::vector<double> failure_mean;
  RewardWeights weights;
  std::uint64_t slots = 500;
  std::vector<std::uint64_t> seeds{1};
  std::vector<PolicyKind> policies{PolicyKind::kRtsd, PolicyKind::kBandit,
                                   PolicyKind::kRandom};
  LearnerKnobs knobs;
  double capacity_scale = 1.0;
  bool regret = false;
  std::uint64_t oracle_budget = 10'000'000;

  // Throws ConfigError describing the first problem found.
  void validate() const;

  // Changes K. Throws ConfigError when the config pins a user x SFC matrix
  // of a different size.
  void set_users(std::size_t k);

  EdgeNetwork effective_network() const {
    return network.with_capacity_scale(capacity_scale);
  }
  GroundTruth ground_truth(std::uint64_t seed) const;
};

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

// JSON of the bundled six-server instance (capacities, VNF demands and SFC
// compositions of the reference scenario plus a pinned latency matrix).
std::string canonical_config_json();
ExperimentConfig canonical_config();

// "7" -> {7}; "1..30" -> {1, ..., 30}. Throws ConfigError.
std::vector<std::uint64_t> parse_seed_spec(std::string_view text);

struct TraceRow {
  std::uint64_t t = 0;
  PolicyKind policy = PolicyKind::kRtsd;
  std::uint64_t seed = 0;
  double realized_reward = 0.0;
  double expected_reward = 0.0;
  std::int64_t remaining_resource = 0;
  std::size_t num_deployed = 0;
  std::optional<double> oracle_value;
  std::optional<double> regret;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct RunAggregates {
  double mean_realized_reward = 0.0;
  double mean_expected_reward = 0.0;
  double mean_remaining_resource = 0.0;
  double mean_num_deployed = 0.0;
  double mean_regret = 0.0;  // 0 unless regret was requested
};

struct RunTrace {
  PolicyKind policy = PolicyKind::kRtsd;
  std::uint64_t seed = 0;
  std::int64_t total_capacity = 0;
  std::vector<TraceRow> rows;
  RunAggregates aggregates;
  std::uint64_t observation_hash = 0;  // FNV-1a over slots 0..T
};

RunAggregates aggregate(const std::vector<TraceRow>& rows);

// Per-slot view handed to run() observers.
struct SlotEvent {
  PolicyKind policy;
  std::uint64_t seed;
  std::uint64_t t;
  const EdgeNetwork& network;
  const Catalog& catalog;
  const SlotObservation& obs;
  const SlotDecision& decision;
  const TraceRow& row;
  const Policy& engine;
};

using SlotObserver = std::function<void(const SlotEvent&)>;

// Runs every (policy, seed) pair for slots 1..T after the slot-0
// initialization. Environment draws depend only on (seed, t).
std::vector<RunTrace> run(const ExperimentConfig& config,
                          const SlotObserver& observer = {});

struct PolicySummary {
  PolicyKind policy = PolicyKind::kRtsd;
  std::size_t runs = 0;
  double mean_reward = 0.0;  // mean over runs of the time-average reward
  double std_reward = 0.0;   // sample std over runs
  double mean_expected_reward = 0.0;
  double mean_remaining = 0.0;
  double std_remaining = 0.0;
  double mean_deployed = 0.0;
  double std_deployed = 0.0;
  double mean_regret = 0.0;
};

std::vector<PolicySummary> summarize(const std::vector<RunTrace>& traces);

enum class OutputFormat { kCsv, kJsonLines };

inline constexpr std::string_view kCsvHeader =
    "t,policy,seed,realized_reward,expected_reward,remaining_resource,"
    "num_deployed,oracle_value,regret";

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

void write_csv(std::ostream& os, const std::vector<RunTrace>& traces);
void write_jsonl(std::ostream& os, const std::vector<RunTrace>& traces);
std::string summary_json(const std::vector<RunTrace>& traces);

std::vector<TraceRow> read_csv(std::istream& is);

// One JSON line with the learner state after slot e.t (c, q_bar, q_tilde, h,
// v_bar, v_tilde; unexplored estimates as null). Empty for the random policy.
std::string learner_state_jsonl(const SlotEvent& e);

// A directory target (existing, or spelled with a trailing '/') receives
// trace.csv / trace.jsonl plus summary.json; a file target receives the trace
// and a "<file>.summary.json" sidecar. Returns the paths written. I/O errors
// throw std::runtime_error naming the path.
std::vector<std::filesystem::path> emit(const std::vector<RunTrace>& traces,
                                        const std::filesystem::path& target,
                                        OutputFormat format);

}  // namespace sfcbackup
