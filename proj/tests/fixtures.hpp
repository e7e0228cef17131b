#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "kuramoto/conditions.hpp"
#include "kuramoto/learning_rule.hpp"
#include "kuramoto/network.hpp"

namespace fixtures {

using namespace kuramoto;

inline OscillatorNetwork five_node() {
  std::vector<std::vector<int>> a(5, std::vector<int>(5, 1));
  for (int i = 0; i < 5; ++i) a[i][i] = 0;
  const double w = std::sqrt(2.0) / 3.0;
  return OscillatorNetwork(a, {0.5, 0.5, 0.5, w, w});
}

inline ClusterPartition five_node_partition() { return ClusterPartition(5, {{0, 1, 2}, {3, 4}}); }

inline PlasticityParams five_node_plasticity() { return PlasticityParams::make(1.0, 0.01); }

inline std::vector<std::vector<int>> seven_node_rows() {
  return {{0, 1, 0, 0, 1, 0, 0}, {0, 0, 1, 0, 0, 0, 1}, {1, 0, 0, 1, 0, 0, 0}, {0, 1, 0, 0, 1, 0, 0},
          {0, 1, 0, 0, 0, 1, 0}, {0, 0, 1, 0, 0, 0, 1}, {1, 0, 1, 1, 0, 0, 0}};
}

inline std::vector<double> seven_node_frequencies() {
  const double w = std::sqrt(4.0 / 5.0);
  return {0.5, 0.5, 0.5, w, w, w, w};
}

inline OscillatorNetwork seven_node() { return OscillatorNetwork(seven_node_rows(), seven_node_frequencies()); }

inline OscillatorNetwork seven_node_fixed() {
  auto rows = seven_node_rows();
  rows[6][0] = 0;
  return OscillatorNetwork(rows, seven_node_frequencies());
}

inline ClusterPartition seven_node_partition() { return ClusterPartition(7, {{0, 1, 2}, {3, 4, 5, 6}}); }

inline PlasticityParams seven_node_plasticity() { return PlasticityParams::make(0.2, 0.001); }

/// Random instance: n nodes split into m contiguous clusters, each edge present
/// with probability p, frequencies constant per cluster.
struct RandomInstance {
  OscillatorNetwork net;
  ClusterPartition part;
};

inline RandomInstance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t m, double p) {
  std::bernoulli_distribution edge(p);
  std::uniform_real_distribution<double> freq(0.5, 2.0);
  std::vector<std::vector<std::size_t>> clusters(m);
  for (std::size_t i = 0; i < n; ++i) clusters[i < m ? i : rng() % m].push_back(i);
  for (auto& c : clusters) std::sort(c.begin(), c.end());
  ClusterPartition part(n, clusters);
  std::vector<double> cluster_freq(m);
  for (auto& f : cluster_freq) f = freq(rng);
  std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = cluster_freq[part.cluster_of(i)];
    for (std::size_t j = 0; j < n; ++j) a[i][j] = (i != j && edge(rng)) ? 1 : 0;
  }
  return {OscillatorNetwork(a, w), part};
}


/// Smallest number of inter-cluster flips giving a passing check, by trying
/// every subset of inter-cluster positions of size <= limit.
inline std::optional<std::size_t> brute_force_min_edits(const OscillatorNetwork& net, const ClusterPartition& part,
                                                 const PlasticityParams& pp, std::size_t limit) {
  std::vector<Edge> positions;
  for (std::size_t i = 0; i < net.size(); ++i)
    for (std::size_t j = 0; j < net.size(); ++j)
      if (i != j && !part.same_cluster(i, j)) positions.push_back({i, j});
  std::optional<std::size_t> best;
  std::vector<std::size_t> pick;
  auto recurse = [&](auto&& self, std::size_t start) -> void {
    if (best && pick.size() >= *best) return;
    PerturbationMatrix p(net.size());
    for (std::size_t k : pick) p.set(positions[k].receiver, positions[k].source, net.has_edge(positions[k].receiver, positions[k].source) ? -1 : 1);
    if (check_corollary(net, p, part, pp).overall) {
      best = pick.size();
      return;
    }
    if (pick.size() == limit) return;
    for (std::size_t k = start; k < positions.size(); ++k) {
      pick.push_back(k);
      self(self, k + 1);
      pick.pop_back();
    }
  };
  recurse(recurse, 0);
  return best;
}

}  // namespace fixtures
