#include "kuramoto/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kuramoto {

namespace {

std::string label(std::size_t node) { return std::to_string(node + 1); }

}  // namespace

OscillatorNetwork::OscillatorNetwork(std::vector<std::vector<int>> adjacency,
                                     std::vector<double> frequencies)
    : n_(adjacency.size()), frequencies_(std::move(frequencies)) {
  if (n_ == 0) throw InvalidInput("adjacency matrix is empty");
  if (frequencies_.size() != n_) {
    throw InvalidInput("frequency vector has length " + std::to_string(frequencies_.size()) +
                       " but the network has " + std::to_string(n_) + " nodes");
  }
  adjacency_.assign(n_ * n_, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    if (adjacency[i].size() != n_) {
      throw InvalidInput("adjacency row " + label(i) + " has length " +
                         std::to_string(adjacency[i].size()) + ", expected " + std::to_string(n_));
    }
    for (std::size_t j = 0; j < n_; ++j) {
      const int v = adjacency[i][j];
      if (v != 0 && v != 1) {
        throw InvalidInput("adjacency entry (" + label(i) + "," + label(j) + ") is " +
                           std::to_string(v) + ", expected 0 or 1");
      }
      if (i == j && v != 0) throw InvalidInput("self-loop at node " + label(i));
      adjacency_[i * n_ + j] = static_cast<std::uint8_t>(v);
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (!std::isfinite(frequencies_[i])) throw InvalidInput("frequency of node " + label(i) + " is not finite");
  }
}

std::size_t OscillatorNetwork::edge_count() const {
  return static_cast<std::size_t>(std::count(adjacency_.begin(), adjacency_.end(), 1));
}

std::vector<Edge> OscillatorNetwork::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (has_edge(i, j)) out.push_back({i, j});
  return out;
}

std::vector<std::vector<int>> OscillatorNetwork::adjacency_rows() const {
  std::vector<std::vector<int>> rows(n_, std::vector<int>(n_, 0));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) rows[i][j] = a(i, j);
  return rows;
}

ClusterPartition::ClusterPartition(std::size_t n_nodes, std::vector<std::vector<std::size_t>> clusters)
    : ClusterPartition(n_nodes, clusters, [&] {
        std::vector<std::size_t> reps;
        for (const auto& c : clusters) {
          if (c.empty()) throw InvalidInput("partition contains an empty cluster");
          reps.push_back(*std::min_element(c.begin(), c.end()));
        }
        return reps;
      }()) {}

ClusterPartition::ClusterPartition(std::size_t n_nodes, std::vector<std::vector<std::size_t>> clusters,
                                   std::vector<std::size_t> representatives)
    : clusters_(std::move(clusters)), representatives_(std::move(representatives)) {
  if (clusters_.size() < 2) throw InvalidInput("partition needs at least two clusters");
  if (representatives_.size() != clusters_.size())
    throw InvalidInput("one representative per cluster is required");

  constexpr std::size_t unassigned = static_cast<std::size_t>(-1);
  cluster_of_.assign(n_nodes, unassigned);
  for (std::size_t s = 0; s < clusters_.size(); ++s) {
    auto& c = clusters_[s];
    if (c.empty()) throw InvalidInput("partition contains an empty cluster");
    std::sort(c.begin(), c.end());
    for (std::size_t node : c) {
      if (node >= n_nodes) throw InvalidInput("partition references node " + label(node) + " outside the network");
      if (cluster_of_[node] != unassigned) throw InvalidInput("node " + label(node) + " appears in two clusters");
      cluster_of_[node] = s;
    }
    if (!std::binary_search(c.begin(), c.end(), representatives_[s]))
      throw InvalidInput("representative " + label(representatives_[s]) + " is not in cluster " + label(s));
  }
  for (std::size_t node = 0; node < n_nodes; ++node) {
    if (cluster_of_[node] == unassigned) throw InvalidInput("node " + label(node) + " is not covered by the partition");
  }
}

std::vector<std::size_t> ClusterPartition::error_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < clusters_.size(); ++s)
    for (std::size_t node : clusters_[s])
      if (node != representatives_[s]) out.push_back(node);
  return out;
}

PerturbationMatrix::PerturbationMatrix(const std::vector<std::vector<int>>& rows) : PerturbationMatrix(rows.size()) {
  for (std::size_t i = 0; i < n_; ++i) {
    if (rows[i].size() != n_) throw InvalidInput("perturbation matrix is not square");
    for (std::size_t j = 0; j < n_; ++j) set(i, j, rows[i][j]);
  }
}

void PerturbationMatrix::set(std::size_t i, std::size_t j, int value) {
  if (value < -1 || value > 1) throw InvalidInput("perturbation entries must be -1, 0 or +1");
  if (i == j && value != 0) throw InvalidInput("perturbation diagonal must be zero");
  entries_[i * n_ + j] = static_cast<std::int8_t>(value);
}

std::size_t PerturbationMatrix::edit_count() const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [](auto v) { return v != 0; }));
}

std::vector<PerturbationMatrix::Entry> PerturbationMatrix::nonzero() const {
  std::vector<Entry> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (at(i, j) != 0) out.push_back({{i, j}, at(i, j)});
  return out;
}

void check_partition_matches(const OscillatorNetwork& net, const ClusterPartition& part) {
  if (part.node_count() != net.size()) {
    throw InvalidInput("partition covers " + std::to_string(part.node_count()) + " nodes but the network has " +
                       std::to_string(net.size()));
  }
}

CardinalityReport compute_cardinalities(const OscillatorNetwork& net, const ClusterPartition& part) {
  check_partition_matches(net, part);
  const std::size_t n = net.size();
  const std::size_t m = part.cluster_count();

  CardinalityReport rep;
  rep.per_node_incoming.assign(n, std::vector<std::size_t>(m, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!net.has_edge(i, j)) continue;
      ++rep.per_node_incoming[i][part.cluster_of(j)];
      if (part.same_cluster(i, j)) ++rep.c_in; else ++rep.c_out;
    }
  }

  rep.c_sr.assign(m, std::vector<std::size_t>(m, 0));
  rep.a2_holds = true;
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t r = 0; r < m; ++r) {
      if (r == s) continue;
      const auto& members = part.cluster(s);
      const std::size_t first = rep.per_node_incoming[members.front()][r];
      std::size_t hi = first;
      bool uniform = true;
      for (std::size_t node : members) {
        const std::size_t c = rep.per_node_incoming[node][r];
        hi = std::max(hi, c);
        uniform = uniform && c == first;
      }
      rep.c_sr[s][r] = hi;
      if (!uniform) {
        rep.a2_holds = false;
        A2Violation v{s, r, {}};
        for (std::size_t node : members) v.counts.emplace_back(node, rep.per_node_incoming[node][r]);
        rep.violations.push_back(std::move(v));
      }
    }
  }

  for (std::size_t s = 0; s < m; ++s) {
    const std::size_t row = std::accumulate(rep.c_sr[s].begin(), rep.c_sr[s].end(), std::size_t{0});
    rep.sum_c_sr += row;
    rep.c_max = std::max(rep.c_max, row);
  }
  return rep;
}

A1Result check_a1(const OscillatorNetwork& net, const ClusterPartition& part, double tolerance) {
  check_partition_matches(net, part);
  A1Result result;
  for (std::size_t s = 0; s < part.cluster_count(); ++s) {
    const auto& c = part.cluster(s);
    for (std::size_t a = 0; a < c.size(); ++a) {
      for (std::size_t b = a + 1; b < c.size(); ++b) {
        const double diff = std::abs(net.frequency(c[a]) - net.frequency(c[b]));
        const bool equal = tolerance == 0.0 ? net.frequency(c[a]) == net.frequency(c[b]) : diff <= tolerance;
        if (!equal) {
          result.holds = false;
          result.violations.push_back({s, c[a], c[b]});
        }
      }
    }
  }
  return result;
}

void validate_perturbation(const OscillatorNetwork& net, const PerturbationMatrix& tilde_a) {
  if (tilde_a.size() != net.size()) throw InvalidInput("perturbation size does not match the network");
  for (std::size_t i = 0; i < net.size(); ++i) {
    for (std::size_t j = 0; j < net.size(); ++j) {
      const int v = tilde_a.at(i, j);
      if (v == 1 && net.has_edge(i, j))
        throw InvalidInput("perturbation adds edge (" + label(i) + "," + label(j) + ") which already exists");
      if (v == -1 && !net.has_edge(i, j))
        throw InvalidInput("perturbation removes edge (" + label(i) + "," + label(j) + ") which does not exist");
    }
  }
}

OscillatorNetwork apply_perturbation(const OscillatorNetwork& net, const PerturbationMatrix& tilde_a) {
  validate_perturbation(net, tilde_a);
  auto rows = net.adjacency_rows();
  for (std::size_t i = 0; i < net.size(); ++i)
    for (std::size_t j = 0; j < net.size(); ++j) rows[i][j] += tilde_a.at(i, j);
  return OscillatorNetwork(std::move(rows), std::vector<double>(net.frequencies().begin(), net.frequencies().end()));
}

std::vector<Edge> inter_cluster_edges(const OscillatorNetwork& net, const ClusterPartition& part) {
  check_partition_matches(net, part);
  std::vector<Edge> out;
  for (const Edge& e : net.edges())
    if (!part.same_cluster(e.receiver, e.source)) out.push_back(e);
  return out;
}

std::vector<Edge> intra_cluster_edges(const OscillatorNetwork& net, const ClusterPartition& part) {
  check_partition_matches(net, part);
  std::vector<Edge> out;
  for (const Edge& e : net.edges())
    if (part.same_cluster(e.receiver, e.source)) out.push_back(e);
  return out;
}

}  // namespace kuramoto
