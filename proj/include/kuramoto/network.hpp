#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kuramoto {

/// Thrown when a network, partition or perturbation violates its structural invariants.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A directed edge j -> i. Following the coupling sum of the phase equation,
/// a_ij = 1 means node `receiver` (i) takes input from node `source` (j).
struct Edge {
  std::size_t receiver = 0;
  std::size_t source = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Dense 0/1 adjacency plus natural frequencies. Node indices are 0-based
/// internally; files and reports use 1-based labels.
class OscillatorNetwork {
 public:
  OscillatorNetwork() = default;

  /// Validates the matrix (square, 0/1, zero diagonal) and the frequency length.
  OscillatorNetwork(std::vector<std::vector<int>> adjacency, std::vector<double> frequencies);

  std::size_t size() const noexcept { return n_; }
  bool has_edge(std::size_t i, std::size_t j) const { return adjacency_[i * n_ + j] != 0; }
  int a(std::size_t i, std::size_t j) const { return adjacency_[i * n_ + j]; }
  double frequency(std::size_t i) const { return frequencies_[i]; }
  std::span<const double> frequencies() const noexcept { return frequencies_; }

  std::size_t edge_count() const;
  /// All edges in row-major order (receiver first, then source).
  std::vector<Edge> edges() const;
  std::vector<std::vector<int>> adjacency_rows() const;

  friend bool operator==(const OscillatorNetwork&, const OscillatorNetwork&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> adjacency_;
  std::vector<double> frequencies_;
};

/// Disjoint cover of the node set by m >= 2 non-empty clusters, each with a
/// designated representative node. Representatives default to the smallest
/// node index of each cluster.
class ClusterPartition {
 public:
  ClusterPartition() = default;
  ClusterPartition(std::size_t n_nodes, std::vector<std::vector<std::size_t>> clusters);
  ClusterPartition(std::size_t n_nodes, std::vector<std::vector<std::size_t>> clusters,
                   std::vector<std::size_t> representatives);

  std::size_t cluster_count() const noexcept { return clusters_.size(); }
  std::size_t node_count() const noexcept { return cluster_of_.size(); }
  const std::vector<std::size_t>& cluster(std::size_t s) const { return clusters_[s]; }
  const std::vector<std::vector<std::size_t>>& clusters() const noexcept { return clusters_; }
  std::size_t representative(std::size_t s) const { return representatives_[s]; }
  const std::vector<std::size_t>& representatives() const noexcept { return representatives_; }
  std::size_t cluster_of(std::size_t node) const { return cluster_of_[node]; }
  bool same_cluster(std::size_t i, std::size_t j) const { return cluster_of_[i] == cluster_of_[j]; }

  /// Nodes carrying an intra-cluster error coordinate: every non-representative,
  /// ordered by cluster and then by node index.
  std::vector<std::size_t> error_nodes() const;

  friend bool operator==(const ClusterPartition&, const ClusterPartition&) = default;

 private:
  std::vector<std::vector<std::size_t>> clusters_;
  std::vector<std::size_t> representatives_;
  std::vector<std::size_t> cluster_of_;
};

/// Signed edit mask on the adjacency matrix: +1 adds an edge, -1 removes one.
class PerturbationMatrix {
 public:
  PerturbationMatrix() = default;
  explicit PerturbationMatrix(std::size_t n) : n_(n), entries_(n * n, 0) {}
  explicit PerturbationMatrix(const std::vector<std::vector<int>>& rows);

  std::size_t size() const noexcept { return n_; }
  int at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, int value);
  std::size_t edit_count() const;

  struct Entry {
    Edge edge;
    int value = 0;
  };
  /// Non-zero entries, row-major.
  std::vector<Entry> nonzero() const;

  friend bool operator==(const PerturbationMatrix&, const PerturbationMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::int8_t> entries_;
};

struct A2Violation {
  std::size_t cluster = 0;       // s, receiving cluster
  std::size_t from_cluster = 0;  // r
  /// (node, incoming count from `from_cluster`) for every node of `cluster`.
  std::vector<std::pair<std::size_t, std::size_t>> counts;
};

/// Combinatorial quantities of a network relative to a partition.
///
/// When A2 fails, c_sr holds the per-pair maximum of the incoming counts so the
/// downstream condition report can still display something meaningful.
struct CardinalityReport {
  std::size_t c_in = 0;
  std::size_t c_out = 0;
  std::vector<std::vector<std::size_t>> c_sr;              // m x m, diagonal 0
  std::vector<std::vector<std::size_t>> per_node_incoming;  // N x m
  std::size_t c_max = 0;
  std::size_t sum_c_sr = 0;
  bool a2_holds = false;
  std::vector<A2Violation> violations;
};

CardinalityReport compute_cardinalities(const OscillatorNetwork& net, const ClusterPartition& part);

struct A1Violation {
  std::size_t cluster = 0;
  std::size_t first = 0;
  std::size_t second = 0;
};

struct A1Result {
  bool holds = true;
  std::vector<A1Violation> violations;
};

/// Equal natural frequencies within each cluster. `tolerance` 0 means exact equality.
A1Result check_a1(const OscillatorNetwork& net, const ClusterPartition& part, double tolerance = 0.0);

/// Checks the sign constraints of `tilde_a` against `net` without applying it.
void validate_perturbation(const OscillatorNetwork& net, const PerturbationMatrix& tilde_a);

OscillatorNetwork apply_perturbation(const OscillatorNetwork& net, const PerturbationMatrix& tilde_a);

/// Inter-cluster edges in canonical row-major order.
std::vector<Edge> inter_cluster_edges(const OscillatorNetwork& net, const ClusterPartition& part);
std::vector<Edge> intra_cluster_edges(const OscillatorNetwork& net, const ClusterPartition& part);

void check_partition_matches(const OscillatorNetwork& net, const ClusterPartition& part);

}  // namespace kuramoto
