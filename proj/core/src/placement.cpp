#include "sfcbackup/placement.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace sfcbackup {

namespace {

// Residual minus what the plan under construction has already claimed.
class TentativeLoad {
 public:
  explicit TentativeLoad(const ResidualCapacity& residual)
      : residual_(residual), used_(residual.size(), 0) {}

  bool fits(ServerId n, std::int64_t demand) const {
    return residual_[n] - used_[n.value] >= demand;
  }
  void take(ServerId n, std::int64_t demand) { used_[n.value] += demand; }

 private:
  const ResidualCapacity& residual_;
  std::vector<std::int64_t> used_;
};

PlacementPlan finish(const EdgeNetwork& network, SfcId f,
                     std::vector<ServerId> assignment) {
  PlacementPlan plan;
  plan.sfc = f;
  plan.latency = chain_latency(network, assignment);
  plan.assignment = std::move(assignment);
  plan.at_edge = true;
  return plan;
}

void check_sfc(const Catalog& catalog, SfcId f) {
  if (f.value >= catalog.num_sfcs()) {
    throw std::out_of_range("invalid SfcId " + std::to_string(f.value));
  }
}

}  // namespace

double chain_latency(const EdgeNetwork& network,
                     std::span<const ServerId> assignment) {
  double total = 0.0;
  for (std::size_t j = 1; j < assignment.size(); ++j) {
    if (assignment[j] != assignment[j - 1]) {
      total += network.distance(assignment[j - 1], assignment[j]);
    }
  }
  return total;
}

PlacementPlan get_consumption(const EdgeNetwork& network, const Catalog& catalog,
                              const ResidualCapacity& residual, SfcId f) {
  check_sfc(catalog, f);
  const auto chain = catalog.chain(f);
  if (network.num_servers() == 0) return PlacementPlan::cloud(f);

  TentativeLoad load(residual);
  std::vector<ServerId> assignment;
  assignment.reserve(chain.size());

  ServerId current = cheapest_link_anchor(network, residual);
  for (VnfId vnf : chain) {
    const std::int64_t demand = catalog.demand(vnf);
    if (!load.fits(current, demand)) {
      const auto nbs = network.neighbors(current);
      const auto next = std::find_if(nbs.begin(), nbs.end(), [&](const Neighbor& nb) {
        return load.fits(nb.server, demand);
      });
      if (next == nbs.end()) return PlacementPlan::cloud(f);
      current = next->server;
    }
    load.take(current, demand);
    assignment.push_back(current);
  }
  return finish(network, f, std::move(assignment));
}

PlacementPlan first_fit_placement(const EdgeNetwork& network,
                                  const Catalog& catalog,
                                  const ResidualCapacity& residual, SfcId f) {
  check_sfc(catalog, f);
  const auto chain = catalog.chain(f);
  const std::size_t servers = network.num_servers();

  TentativeLoad load(residual);
  std::vector<ServerId> assignment;
  assignment.reserve(chain.size());

  std::size_t current = 0;
  for (VnfId vnf : chain) {
    const std::int64_t demand = catalog.demand(vnf);
    while (current < servers && !load.fits(ServerId{current}, demand)) ++current;
    if (current == servers) return PlacementPlan::cloud(f);
    load.take(ServerId{current}, demand);
    assignment.push_back(ServerId{current});
  }
  return finish(network, f, std::move(assignment));
}

PlacementPlan random_placement(const EdgeNetwork& network,
                               const Catalog& catalog,
                               const ResidualCapacity& residual, SfcId f,
                               std::mt19937_64& rng) {
  check_sfc(catalog, f);
  const auto chain = catalog.chain(f);

  TentativeLoad load(residual);
  std::vector<ServerId> assignment;
  assignment.reserve(chain.size());

  std::vector<ServerId> order(network.num_servers());
  for (std::size_t n = 0; n < order.size(); ++n) order[n] = ServerId{n};

  for (VnfId vnf : chain) {
    const std::int64_t demand = catalog.demand(vnf);
    std::shuffle(order.begin(), order.end(), rng);
    const auto host = std::find_if(order.begin(), order.end(), [&](ServerId n) {
      return load.fits(n, demand);
    });
    if (host == order.end()) return PlacementPlan::cloud(f);
    load.take(*host, demand);
    assignment.push_back(*host);
  }
  return finish(network, f, std::move(assignment));
}

std::vector<PlacementPlan> plan_all(const EdgeNetwork& network,
                                    const Catalog& catalog,
                                    const ResidualCapacity& residual,
                                    std::span<const std::uint8_t> skip,
                                    const Placer& placer) {
  if (skip.size() != catalog.num_sfcs()) {
    throw std::invalid_argument("skip mask size mismatch");
  }
  std::vector<PlacementPlan> plans;
  for (std::size_t f = 0; f < catalog.num_sfcs(); ++f) {
    if (skip[f]) continue;
    plans.push_back(placer(network, catalog, residual, SfcId{f}));
  }
  return plans;
}

}  // namespace sfcbackup
