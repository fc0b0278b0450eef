#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "sfcbackup/ids.hpp"
#include "sfcbackup/model.hpp"
#include "sfcbackup/workload.hpp"

namespace sfcbackup {

inline constexpr double kUnexplored = std::numeric_limits<double>::infinity();

// scale * sqrt(3 ln t / (2 count)). Natural log; requires t >= 1, count > 0.
// t is real-valued so the bonus can be evaluated between slots.
double ucb_bonus(double scale, double t, std::uint64_t count);

// Tuning of the failure-rate confidence term. The popularity bonus is always
// scaled by the user count.
struct LearnerKnobs {
  int failure_bonus_sign = +1;                 // +1 pessimistic, -1 optimistic
  std::optional<double> failure_bonus_scale;   // unset: user count K

  double failure_scale_for(std::size_t users) const {
    return failure_bonus_scale.value_or(static_cast<double>(users));
  }
};

// UCB estimator of per-SFC popularity. An arm is "pulled" in every slot
// where the SFC is backed up at the edge.
class PopularityLearner {
 public:
  PopularityLearner() = default;
  PopularityLearner(std::size_t num_sfcs, double bonus_scale);

  // Slot-0 state: counts and means zero, estimate equal to Q_f(0).
  static PopularityLearner initialize(const SlotObservation& obs0,
                                      double bonus_scale);

  std::size_t size() const { return count_.size(); }
  std::uint64_t count(SfcId f) const { return count_.at(f.value); }
  double mean(SfcId f) const { return mean_.at(f.value); }
  double bonus_scale() const { return bonus_scale_; }
  std::span<const std::uint64_t> counts() const { return count_; }
  std::span<const double> means() const { return mean_; }

  // Incremental running mean over the slots where deployed[f] != 0.
  void update(const SlotObservation& obs, std::span<const std::uint8_t> deployed);

  // mean + K sqrt(3 ln t / (2 c)) for explored arms, kUnexplored otherwise.
  std::vector<double> estimate(std::uint64_t t) const;

  // Stores estimate(t) as the current estimate.
  void refresh(std::uint64_t t) { estimate_ = estimate(t); }
  std::span<const double> current_estimate() const { return estimate_; }

 private:
  double bonus_scale_ = 0.0;
  std::vector<std::uint64_t> count_;
  std::vector<double> mean_;
  std::vector<double> estimate_;
};

// UCB-style estimator of per-VNF failure probability. The count grows by the
// number of placed copies of the VNF in a slot; the mean absorbs one
// observation per slot.
class FailureLearner {
 public:
  FailureLearner() = default;
  FailureLearner(std::size_t num_vnfs, double bonus_scale, int bonus_sign);

  static FailureLearner initialize(const SlotObservation& obs0,
                                   double bonus_scale, int bonus_sign);

  std::size_t size() const { return count_.size(); }
  std::uint64_t count(VnfId i) const { return count_.at(i.value); }
  double mean(VnfId i) const { return mean_.at(i.value); }
  std::span<const std::uint64_t> counts() const { return count_; }
  std::span<const double> means() const { return mean_; }
  double bonus_scale() const { return bonus_scale_; }
  int bonus_sign() const { return bonus_sign_; }

  void update(const SlotObservation& obs, std::span<const int> placed);

  // clamp(mean + sign * scale * sqrt(3 ln t / (2 h)), 0, 1); 0 for h == 0.
  std::vector<double> estimate(std::uint64_t t) const;

  void refresh(std::uint64_t t) { estimate_ = estimate(t); }
  std::span<const double> current_estimate() const { return estimate_; }

 private:
  double bonus_scale_ = 0.0;
  int bonus_sign_ = +1;
  std::vector<std::uint64_t> count_;
  std::vector<double> mean_;
  std::vector<double> estimate_;
};

struct Learners {
  PopularityLearner popularity;
  FailureLearner failure;
};

Learners init_learners(const SlotObservation& obs0, std::size_t users,
                       const LearnerKnobs& knobs = {});

// U_f: largest per-VNF rate over the occurrences of chain f.
double chain_failure_rate(const Catalog& catalog, std::span<const double> rates,
                          SfcId f);

}  // namespace sfcbackup
