#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kuramoto/learning_rule.hpp"
#include "kuramoto/network.hpp"

namespace kuramoto {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Phase representative in [0, 2π).
inline double wrap_phase(double x) {
  if (x >= 0.0 && x < two_pi) return x;
  double r = x - two_pi * std::floor(x / two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r -= two_pi;
  return r;
}

/// Phase difference representative in (-π, π].
inline double wrap_error(double x) {
  double r = x - two_pi * std::round(x / two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  if (r > std::numbers::pi) r -= two_pi;
  return r;
}

/// Phases θ and the dense coupling matrix K (row-major, k(i, j) on edge j -> i).
struct NetworkState {
  std::vector<double> phases;
  std::vector<double> couplings;

  NetworkState() = default;
  explicit NetworkState(std::size_t n) : phases(n, 0.0), couplings(n * n, 0.0) {}

  std::size_t size() const noexcept { return phases.size(); }
  double& k(std::size_t i, std::size_t j) { return couplings[i * phases.size() + j]; }
  double k(std::size_t i, std::size_t j) const { return couplings[i * phases.size() + j]; }
};

/// θ̇_i = w_i + Σ_j a_ij k_ij sin(θ_j − θ_i),  k̇_ij = −γ k_ij + μ Γ(θ_j − θ_i) on edges.
NetworkState rhs_full(const OscillatorNetwork& net, const PlasticityParams& pp, const NetworkState& state);

struct SimulationOptions {
  double t_end = 100.0;
  double step = 0.01;
  std::size_t record_stride = 10;
};

/// Recorded samples of a run. `errors[k]` lists wrap(θ_i − θ_{i_s}) for the
/// nodes in `error_nodes` when a partition was supplied.
struct Trajectory {
  std::vector<double> times;
  std::vector<NetworkState> states;
  std::vector<std::vector<double>> errors;
  std::optional<ClusterPartition> partition;
  std::vector<std::size_t> error_nodes;
  /// Intra-cluster edges of the network active at the end of the run.
  std::vector<Edge> intra_edges;
  /// Every edge that was active at some point, for export.
  std::vector<Edge> edges;

  bool empty() const noexcept { return times.empty(); }
  double max_abs_error(std::size_t sample) const;
};

/// Integration produced a non-finite state.
class SimulationDiverged : public std::runtime_error {
 public:
  SimulationDiverged(double last_valid_time)
      : std::runtime_error("integration produced a non-finite state after t = " + std::to_string(last_valid_time)),
        last_valid_time_(last_valid_time) {}
  double last_valid_time() const noexcept { return last_valid_time_; }

 private:
  double last_valid_time_;
};

/// Fixed-step RK4 integration of the adaptive network; phases are wrapped
/// after every step. Coupling entries on non-edges of `initial` are zeroed.
Trajectory simulate(const OscillatorNetwork& net, const PlasticityParams& pp, const NetworkState& initial,
                    const SimulationOptions& opts, const std::optional<ClusterPartition>& part = std::nullopt);

/// Runs under `before` until t_switch and continues the same state under
/// `after`. Couplings of removed edges are kept but no longer read; added
/// edges start from 0.
Trajectory switch_topology_scenario(const OscillatorNetwork& before, const OscillatorNetwork& after,
                                    const PlasticityParams& pp, const NetworkState& initial, double t_switch,
                                    const SimulationOptions& opts,
                                    const std::optional<ClusterPartition>& part = std::nullopt);

struct IntraCouplingLimit {
  Edge edge;
  double mean = 0.0;
};

struct ErrorMetrics {
  double sup_final_error = 0.0;
  /// First recorded time after which max_i |e_i| stays below the tolerance.
  std::optional<double> time_to_tolerance;
  std::vector<IntraCouplingLimit> intra_coupling_limits;
};

/// Statistics over the last 5% of samples (at least one).
ErrorMetrics error_metrics(const Trajectory& traj, double tolerance = 1e-3);

/// State on the reduced torus system: representative phases and inter-cluster couplings.
struct ReducedState {
  std::vector<double> phi;
  std::vector<double> k_inter;
};

/// The reduced system on T_m × R^{c_out}:
///   φ̇ = w̄ + B(φ) k_inter,   k̇_inter = −γ k_inter + μ G(φ)
/// B has entries a_{i_s j} sin(φ_r − φ_s) in row s; G has Γ(φ_r − φ_s) per
/// inter-cluster edge. Requires uniform incoming counts (A2).
class ReducedModel {
 public:
  ReducedModel(const OscillatorNetwork& net, const ClusterPartition& part, const PlasticityParams& pp);

  std::size_t clusters() const noexcept { return w_bar_.size(); }
  std::size_t inter_edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<double>& w_bar() const noexcept { return w_bar_; }
  const PlasticityParams& params() const noexcept { return pp_; }
  /// Cluster indices (s, r) of inter edge e: receiver in P_s, source in P_r.
  std::size_t receiving_cluster(std::size_t e) const { return edge_s_[e]; }
  std::size_t source_cluster(std::size_t e) const { return edge_r_[e]; }
  /// Edges whose receiver is the representative of its cluster; only these enter B.
  const std::vector<std::size_t>& representative_edges() const noexcept { return rep_edges_; }

  /// m × c_out, row-major.
  std::vector<double> b_matrix(const std::vector<double>& phi) const;
  std::vector<double> g_vector(const std::vector<double>& phi) const;
  ReducedState derivative(const ReducedState& state) const;

 private:
  PlasticityParams pp_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> edge_s_, edge_r_;
  std::vector<std::size_t> rep_edges_;
  std::vector<double> w_bar_;
};

ReducedState rhs_reduced(const OscillatorNetwork& net, const ClusterPartition& part, const PlasticityParams& pp,
                         const ReducedState& state);

struct TwoOscillatorAnalysis {
  double d = 0.0;  // NaN when not synchronizable
  double mean_freq = 0.0;
  bool synchronizable = false;
};

/// Static coupling k > 0: sin d = (w2 − w1) / (2k), common frequency (w1 + w2)/2.
TwoOscillatorAnalysis two_oscillator_static_analysis(double w1, double w2, double k);

struct TwoOscillatorRun {
  double final_phase_difference = 0.0;  // wrap(θ2 − θ1) at t_end
  double measured_frequency = 0.0;      // mean θ̇1 over the second half of the run
};

/// Integrates θ̇1 = w1 + k sin(θ2 − θ1), θ̇2 = w2 + k sin(θ1 − θ2) with RK4.
TwoOscillatorRun simulate_two_oscillator_static(double w1, double w2, double k, double theta1, double theta2,
                                                double t_end, double step);

}  // namespace kuramoto
