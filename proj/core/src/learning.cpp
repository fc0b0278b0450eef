#include "sfcbackup/learning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sfcbackup {

double ucb_bonus(double scale, double t, std::uint64_t count) {
  if (!(t >= 1.0) || count == 0) {
    throw std::domain_error("ucb_bonus needs t >= 1 and count > 0");
  }
  return scale * std::sqrt(3.0 * std::log(t) /
                           (2.0 * static_cast<double>(count)));
}

PopularityLearner::PopularityLearner(std::size_t num_sfcs, double bonus_scale)
    : bonus_scale_(bonus_scale),
      count_(num_sfcs, 0),
      mean_(num_sfcs, 0.0),
      estimate_(num_sfcs, 0.0) {}

PopularityLearner PopularityLearner::initialize(const SlotObservation& obs0,
                                                double bonus_scale) {
  PopularityLearner learner(obs0.requests.size(), bonus_scale);
  for (std::size_t f = 0; f < obs0.requests.size(); ++f) {
    learner.estimate_[f] = static_cast<double>(obs0.requests[f]);
  }
  return learner;
}

void PopularityLearner::update(const SlotObservation& obs,
                               std::span<const std::uint8_t> deployed) {
  if (deployed.size() != count_.size() || obs.requests.size() != count_.size()) {
    throw std::invalid_argument("popularity update size mismatch");
  }
  for (std::size_t f = 0; f < count_.size(); ++f) {
    if (!deployed[f]) continue;
    const auto old_count = static_cast<double>(count_[f]);
    ++count_[f];
    mean_[f] = (old_count * mean_[f] + obs.requests[f]) /
               static_cast<double>(count_[f]);
  }
}

std::vector<double> PopularityLearner::estimate(std::uint64_t t) const {
  std::vector<double> out(count_.size(), kUnexplored);
  for (std::size_t f = 0; f < count_.size(); ++f) {
    if (count_[f] > 0) out[f] = mean_[f] + ucb_bonus(bonus_scale_, static_cast<double>(t), count_[f]);
  }
  return out;
}

FailureLearner::FailureLearner(std::size_t num_vnfs, double bonus_scale,
                               int bonus_sign)
    : bonus_scale_(bonus_scale),
      bonus_sign_(bonus_sign),
      count_(num_vnfs, 0),
      mean_(num_vnfs, 0.0),
      estimate_(num_vnfs, 0.0) {
  if (bonus_sign != 1 && bonus_sign != -1) {
    throw std::invalid_argument("failure bonus sign must be +1 or -1");
  }
}

FailureLearner FailureLearner::initialize(const SlotObservation& obs0,
                                          double bonus_scale, int bonus_sign) {
  FailureLearner learner(obs0.vnf_failed.size(), bonus_scale, bonus_sign);
  for (std::size_t i = 0; i < obs0.vnf_failed.size(); ++i) {
    learner.estimate_[i] = obs0.vnf_failed[i] ? 1.0 : 0.0;
  }
  return learner;
}

void FailureLearner::update(const SlotObservation& obs,
                            std::span<const int> placed) {
  if (placed.size() != count_.size() || obs.vnf_failed.size() != count_.size()) {
    throw std::invalid_argument("failure update size mismatch");
  }
  for (std::size_t i = 0; i < count_.size(); ++i) {
    if (placed[i] < 0) throw std::invalid_argument("negative placement count");
    if (placed[i] == 0) continue;
    const auto old_count = static_cast<double>(count_[i]);
    count_[i] += static_cast<std::uint64_t>(placed[i]);
    mean_[i] = (old_count * mean_[i] + (obs.vnf_failed[i] ? 1.0 : 0.0)) /
               static_cast<double>(count_[i]);
  }
}

std::vector<double> FailureLearner::estimate(std::uint64_t t) const {
  std::vector<double> out(count_.size(), 0.0);
  for (std::size_t i = 0; i < count_.size(); ++i) {
    if (count_[i] == 0) continue;
    const double raw =
        mean_[i] + bonus_sign_ * ucb_bonus(bonus_scale_, static_cast<double>(t), count_[i]);
    out[i] = std::clamp(raw, 0.0, 1.0);
  }
  return out;
}

Learners init_learners(const SlotObservation& obs0, std::size_t users,
                       const LearnerKnobs& knobs) {
  return {PopularityLearner::initialize(obs0, static_cast<double>(users)),
          FailureLearner::initialize(obs0, knobs.failure_scale_for(users),
                                     knobs.failure_bonus_sign)};
}

double chain_failure_rate(const Catalog& catalog, std::span<const double> rates,
                          SfcId f) {
  double worst = 0.0;
  for (VnfId i : catalog.chain(f)) worst = std::max(worst, rates[i.value]);
  return worst;
}

}  // namespace sfcbackup
