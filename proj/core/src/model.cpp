#include "sfcbackup/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace sfcbackup {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

EdgeNetwork::EdgeNetwork(std::vector<std::int64_t> capacities,
                         std::vector<Link> links)
    : capacities_(std::move(capacities)), links_(std::move(links)) {
  const std::size_t n = capacities_.size();
  for (Link& link : links_) {
    if (link.u.value >= n || link.v.value >= n) {
      throw std::invalid_argument("link endpoint out of range");
    }
    if (link.u == link.v) {
      throw std::invalid_argument("self-loop link on server " +
                                  std::to_string(link.u.value));
    }
    if (link.v < link.u) std::swap(link.u, link.v);
  }
  std::sort(links_.begin(), links_.end(), [](const Link& a, const Link& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  for (std::size_t k = 1; k < links_.size(); ++k) {
    if (links_[k].u == links_[k - 1].u && links_[k].v == links_[k - 1].v) {
      throw std::invalid_argument("duplicate link (" +
                                  std::to_string(links_[k].u.value) + "," +
                                  std::to_string(links_[k].v.value) + ")");
    }
  }

  adjacency_.assign(n, {});
  for (const Link& link : links_) {
    adjacency_[link.u.value].push_back({link.v, link.latency});
    adjacency_[link.v.value].push_back({link.u, link.latency});
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end(), [](const Neighbor& a, const Neighbor& b) {
      if (a.latency != b.latency) return a.latency < b.latency;
      return a.server < b.server;
    });
  }

  // Floyd-Warshall; edge networks here are a handful of servers.
  distance_.assign(n * n, kInf);
  for (std::size_t a = 0; a < n; ++a) distance_[a * n + a] = 0.0;
  for (const Link& link : links_) {
    const std::size_t a = link.u.value, b = link.v.value;
    distance_[a * n + b] = std::min(distance_[a * n + b], link.latency);
    distance_[b * n + a] = distance_[a * n + b];
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t a = 0; a < n; ++a) {
      const double ak = distance_[a * n + k];
      if (ak == kInf) continue;
      for (std::size_t b = 0; b < n; ++b) {
        const double via = ak + distance_[k * n + b];
        if (via < distance_[a * n + b]) distance_[a * n + b] = via;
      }
    }
  }
}

std::int64_t EdgeNetwork::total_capacity() const {
  return std::accumulate(capacities_.begin(), capacities_.end(),
                         std::int64_t{0});
}

std::optional<double> EdgeNetwork::link_latency(ServerId a, ServerId b) const {
  for (const Neighbor& nb : adjacency_.at(a.value)) {
    if (nb.server == b) return nb.latency;
  }
  return std::nullopt;
}

double EdgeNetwork::distance(ServerId a, ServerId b) const {
  const std::size_t n = num_servers();
  if (a.value >= n || b.value >= n) {
    throw std::out_of_range("server id out of range");
  }
  return distance_[a.value * n + b.value];
}

bool EdgeNetwork::connected() const {
  const std::size_t n = num_servers();
  if (n == 0) return false;
  for (std::size_t b = 0; b < n; ++b) {
    if (distance_[b] == kInf) return false;
  }
  return true;
}

EdgeNetwork EdgeNetwork::with_capacity_scale(double factor) const {
  if (!(factor > 0.0)) {
    throw std::invalid_argument("capacity scale must be positive");
  }
  std::vector<std::int64_t> scaled;
  scaled.reserve(capacities_.size());
  for (std::int64_t c : capacities_) {
    scaled.push_back(
        static_cast<std::int64_t>(std::floor(static_cast<double>(c) * factor)));
  }
  return EdgeNetwork(std::move(scaled), links_);
}

Catalog::Catalog(std::vector<std::int64_t> vnf_demand,
                 std::vector<std::vector<VnfId>> chains)
    : vnf_demand_(std::move(vnf_demand)), chains_(std::move(chains)) {}

bool Catalog::contains(SfcId f, VnfId i) const {
  const auto c = chain(f);
  return std::find(c.begin(), c.end(), i) != c.end();
}

std::int64_t Catalog::chain_demand(SfcId f) const {
  std::int64_t total = 0;
  for (VnfId i : chain(f)) total += demand(i);
  return total;
}

ResidualCapacity::ResidualCapacity(const EdgeNetwork& network)
    : capacity_(network.capacities().begin(), network.capacities().end()),
      residual_(capacity_) {
  for (auto& r : residual_) r = std::max<std::int64_t>(r, 0);
}

void ResidualCapacity::consume(ServerId n, std::int64_t amount) {
  if (amount < 0) throw std::logic_error("negative consumption");
  if (!can_hold(n, amount)) {
    std::ostringstream os;
    os << "server " << n << " cannot cover demand " << amount
       << " (residual " << residual_.at(n.value) << ")";
    throw std::logic_error(os.str());
  }
  residual_[n.value] -= amount;
}

std::int64_t ResidualCapacity::total() const {
  return std::accumulate(residual_.begin(), residual_.end(), std::int64_t{0});
}

std::int64_t ResidualCapacity::total_consumed() const {
  std::int64_t used = 0;
  for (std::size_t n = 0; n < residual_.size(); ++n) {
    used += std::max<std::int64_t>(capacity_[n], 0) - residual_[n];
  }
  return used;
}

std::string_view to_string(IssueKind kind) {
  switch (kind) {
    case IssueKind::kDisconnected: return "disconnected";
    case IssueKind::kNegativeCapacity: return "negative capacity";
    case IssueKind::kNegativeLatency: return "negative latency";
    case IssueKind::kNegativeDemand: return "negative demand";
    case IssueKind::kEmptyChain: return "empty chain";
    case IssueKind::kDanglingVnf: return "dangling VnfId";
    case IssueKind::kNoServers: return "no servers";
  }
  return "unknown";
}

std::vector<ValidationIssue> validate_instance(const EdgeNetwork& network,
                                               const Catalog& catalog) {
  std::vector<ValidationIssue> issues;
  auto report = [&issues](IssueKind kind, std::string detail) {
    issues.push_back({kind, std::string(to_string(kind)) + ": " + detail});
  };

  if (network.num_servers() == 0) {
    report(IssueKind::kNoServers, "edge network has no servers");
  } else if (!network.connected()) {
    report(IssueKind::kDisconnected, "link graph is not connected");
  }
  for (std::size_t n = 0; n < network.num_servers(); ++n) {
    if (network.capacities()[n] < 0) {
      report(IssueKind::kNegativeCapacity, "server " + std::to_string(n));
    }
  }
  for (const Link& link : network.links()) {
    if (!(link.latency >= 0.0) || !std::isfinite(link.latency)) {
      report(IssueKind::kNegativeLatency,
             "link (" + std::to_string(link.u.value) + "," +
                 std::to_string(link.v.value) + ")");
    }
  }
  for (std::size_t i = 0; i < catalog.num_vnfs(); ++i) {
    if (catalog.demands()[i] < 0) {
      report(IssueKind::kNegativeDemand, "vnf " + std::to_string(i));
    }
  }
  for (std::size_t f = 0; f < catalog.num_sfcs(); ++f) {
    const auto chain = catalog.chain(SfcId{f});
    if (chain.empty()) {
      report(IssueKind::kEmptyChain, "sfc " + std::to_string(f));
    }
    for (VnfId i : chain) {
      if (i.value >= catalog.num_vnfs()) {
        report(IssueKind::kDanglingVnf,
               "sfc " + std::to_string(f) + " references vnf " +
                   std::to_string(i.value) + " but only " +
                   std::to_string(catalog.num_vnfs()) + " exist");
      }
    }
  }
  return issues;
}

std::vector<Neighbor> neighbors_by_latency(const EdgeNetwork& network,
                                           ServerId node) {
  const auto nbs = network.neighbors(node);
  return {nbs.begin(), nbs.end()};
}

ServerId cheapest_link_anchor(const EdgeNetwork& network,
                              const ResidualCapacity& residual) {
  const auto links = network.links();
  if (links.empty()) return ServerId{0};
  // links() is sorted by (u, v), so a strict comparison keeps the
  // lexicographically first among equal latencies.
  const Link* best = &links.front();
  for (const Link& link : links) {
    if (link.latency < best->latency) best = &link;
  }
  return residual[best->v] > residual[best->u] ? best->v : best->u;
}

}  // namespace sfcbackup
