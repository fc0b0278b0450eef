#pragma once

#include <cstdint>
#include <vector>

#include "sfcbackup/ids.hpp"

namespace sfcbackup {

// Hidden stationary environment: per-(user, SFC) request probabilities and
// per-VNF failure probabilities. Policies never read these directly.
struct GroundTruth {
  std::vector<std::vector<double>> request_prob;  // [user][sfc]
  std::vector<double> failure_mean;               // [vnf]
  std::uint64_t seed = 0;

  std::size_t num_users() const { return request_prob.size(); }
  std::size_t num_sfcs() const {
    return request_prob.empty() ? 0 : request_prob.front().size();
  }
  std::size_t num_vnfs() const { return failure_mean.size(); }

  // Same probability for every (user, SFC) pair.
  static GroundTruth uniform(std::size_t users, std::size_t sfcs, double p,
                             std::vector<double> failure_mean,
                             std::uint64_t seed);
  // One probability per SFC, shared by all users.
  static GroundTruth per_sfc(std::size_t users, const std::vector<double>& p,
                             std::vector<double> failure_mean,
                             std::uint64_t seed);

  // Throws std::invalid_argument on ragged rows or probabilities outside [0,1].
  void validate() const;
};

struct SlotObservation {
  std::uint64_t t = 0;
  std::vector<int> requests;              // Q_f(t) in {0..K}
  std::vector<std::uint8_t> vnf_failed;   // V_i(t) in {0,1}

  friend bool operator==(const SlotObservation&,
                         const SlotObservation&) = default;
};

// Draws slot t. Each Bernoulli trial reads its own counter-keyed uniform,
// so the result depends only on (gt.seed, t) and is independent of how many
// other slots or policies were evaluated.
SlotObservation sample_slot(const GroundTruth& gt, std::uint64_t t);

// q_f = sum_k p_{k,f}.
std::vector<double> true_popularity(const GroundTruth& gt);

namespace detail {

std::uint64_t splitmix64(std::uint64_t x);

// Uniform in [0, 1) keyed by (seed, slot, stream, index).
double counter_uniform(std::uint64_t seed, std::uint64_t slot,
                       std::uint64_t stream, std::uint64_t index);

}  // namespace detail

}  // namespace sfcbackup
