#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfcbackup/ids.hpp"

namespace sfcbackup {

struct Link {
  ServerId u;
  ServerId v;
  double latency = 0.0;
};

struct Neighbor {
  ServerId server;
  double latency = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Edge servers with integral resource capacities and an undirected weighted
// latency graph. Links are stored normalized (u < v) and sorted by (u, v).
//
// Structural problems that make the graph unrepresentable (endpoint out of
// range, self-loop, duplicate pair) throw std::invalid_argument. Value-level
// problems (negative numbers, disconnected graph) are accepted here and
// reported by validate_instance().
class EdgeNetwork {
 public:
  EdgeNetwork() = default;
  EdgeNetwork(std::vector<std::int64_t> capacities, std::vector<Link> links);

  std::size_t num_servers() const { return capacities_.size(); }
  std::int64_t capacity(ServerId n) const { return capacities_.at(n.value); }
  std::span<const std::int64_t> capacities() const { return capacities_; }
  std::int64_t total_capacity() const;

  std::span<const Link> links() const { return links_; }
  std::optional<double> link_latency(ServerId a, ServerId b) const;

  // Direct neighbors sorted by ascending latency, ties by ascending id.
  std::span<const Neighbor> neighbors(ServerId n) const {
    return adjacency_.at(n.value);
  }

  // Shortest-path latency over the link graph; 0 for a == b and +inf when
  // no path exists. Consecutive chain hops are routed along this path.
  double distance(ServerId a, ServerId b) const;

  bool connected() const;

  // Capacities multiplied by `factor` and floored; links unchanged.
  EdgeNetwork with_capacity_scale(double factor) const;

 private:
  std::vector<std::int64_t> capacities_;
  std::vector<Link> links_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<double> distance_;  // row-major num_servers x num_servers
};

// VNF resource demands and SFC compositions. A chain is an ordered sequence
// of VNF occurrences and may repeat a VNF.
class Catalog {
 public:
  Catalog() = default;
  Catalog(std::vector<std::int64_t> vnf_demand,
          std::vector<std::vector<VnfId>> chains);

  std::size_t num_vnfs() const { return vnf_demand_.size(); }
  std::size_t num_sfcs() const { return chains_.size(); }

  std::int64_t demand(VnfId i) const { return vnf_demand_.at(i.value); }
  std::span<const std::int64_t> demands() const { return vnf_demand_; }

  std::span<const VnfId> chain(SfcId f) const { return chains_.at(f.value); }
  const std::vector<std::vector<VnfId>>& chains() const { return chains_; }

  // Y_{i,f}: whether VNF i occurs anywhere in chain f.
  bool contains(SfcId f, VnfId i) const;

  // Sum of demands over every occurrence in the chain.
  std::int64_t chain_demand(SfcId f) const;

 private:
  std::vector<std::int64_t> vnf_demand_;
  std::vector<std::vector<VnfId>> chains_;
};

// Per-server remaining resource while deployments are committed within one
// slot. Always 0 <= residual[n] <= capacity[n].
class ResidualCapacity {
 public:
  ResidualCapacity() = default;
  explicit ResidualCapacity(const EdgeNetwork& network);

  std::size_t size() const { return residual_.size(); }
  std::int64_t operator[](ServerId n) const { return residual_.at(n.value); }
  std::span<const std::int64_t> values() const { return residual_; }
  std::int64_t capacity(ServerId n) const { return capacity_.at(n.value); }

  bool can_hold(ServerId n, std::int64_t amount) const {
    return residual_.at(n.value) >= amount;
  }

  // Throws std::logic_error when the server cannot cover `amount`.
  void consume(ServerId n, std::int64_t amount);

  std::int64_t total() const;
  std::int64_t total_consumed() const;

  friend bool operator==(const ResidualCapacity&,
                         const ResidualCapacity&) = default;

 private:
  std::vector<std::int64_t> capacity_;
  std::vector<std::int64_t> residual_;
};

enum class IssueKind {
  kDisconnected,
  kNegativeCapacity,
  kNegativeLatency,
  kNegativeDemand,
  kEmptyChain,
  kDanglingVnf,
  kNoServers,
};

struct ValidationIssue {
  IssueKind kind;
  std::string message;
};

std::string_view to_string(IssueKind kind);

std::vector<ValidationIssue> validate_instance(const EdgeNetwork& network,
                                               const Catalog& catalog);

std::vector<Neighbor> neighbors_by_latency(const EdgeNetwork& network,
                                           ServerId node);

// Endpoint with the larger residual capacity of the globally cheapest link.
// Link ties go to the lexicographically smallest (u, v); capacity ties to the
// smaller id. A network without links anchors at server 0.
ServerId cheapest_link_anchor(const EdgeNetwork& network,
                              const ResidualCapacity& residual);

}  // namespace sfcbackup
