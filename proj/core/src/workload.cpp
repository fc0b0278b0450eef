#include "sfcbackup/workload.hpp"

#include <stdexcept>
#include <string>

namespace sfcbackup {

namespace {

constexpr std::uint64_t kRequestStream = 1;
constexpr std::uint64_t kFailureStream = 2;

}  // namespace

namespace detail {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double counter_uniform(std::uint64_t seed, std::uint64_t slot,
                       std::uint64_t stream, std::uint64_t index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ slot);
  h = splitmix64(h ^ stream);
  h = splitmix64(h ^ index);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace detail

GroundTruth GroundTruth::uniform(std::size_t users, std::size_t sfcs, double p,
                                 std::vector<double> failure_mean,
                                 std::uint64_t seed) {
  GroundTruth gt;
  gt.request_prob.assign(users, std::vector<double>(sfcs, p));
  gt.failure_mean = std::move(failure_mean);
  gt.seed = seed;
  return gt;
}

GroundTruth GroundTruth::per_sfc(std::size_t users, const std::vector<double>& p,
                                 std::vector<double> failure_mean,
                                 std::uint64_t seed) {
  GroundTruth gt;
  gt.request_prob.assign(users, p);
  gt.failure_mean = std::move(failure_mean);
  gt.seed = seed;
  return gt;
}

void GroundTruth::validate() const {
  const std::size_t sfcs = num_sfcs();
  for (std::size_t k = 0; k < request_prob.size(); ++k) {
    if (request_prob[k].size() != sfcs) {
      throw std::invalid_argument("request_prob row " + std::to_string(k) +
                                  " has inconsistent length");
    }
    for (double p : request_prob[k]) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("request probability outside [0,1]");
      }
    }
  }
  for (double v : failure_mean) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("failure mean outside [0,1]");
    }
  }
}

SlotObservation sample_slot(const GroundTruth& gt, std::uint64_t t) {
  const std::size_t users = gt.num_users();
  const std::size_t sfcs = gt.num_sfcs();

  SlotObservation obs;
  obs.t = t;
  obs.requests.assign(sfcs, 0);
  for (std::size_t k = 0; k < users; ++k) {
    for (std::size_t f = 0; f < sfcs; ++f) {
      const double u =
          detail::counter_uniform(gt.seed, t, kRequestStream, k * sfcs + f);
      if (u < gt.request_prob[k][f]) ++obs.requests[f];
    }
  }
  obs.vnf_failed.assign(gt.num_vnfs(), 0);
  for (std::size_t i = 0; i < gt.num_vnfs(); ++i) {
    const double u = detail::counter_uniform(gt.seed, t, kFailureStream, i);
    obs.vnf_failed[i] = u < gt.failure_mean[i] ? 1 : 0;
  }
  return obs;
}

std::vector<double> true_popularity(const GroundTruth& gt) {
  std::vector<double> q(gt.num_sfcs(), 0.0);
  for (const auto& row : gt.request_prob) {
    for (std::size_t f = 0; f < row.size(); ++f) q[f] += row[f];
  }
  return q;
}

}  // namespace sfcbackup
