#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "kuramoto/dynamics.hpp"
#include "kuramoto/network.hpp"

namespace kuramoto {

/// Grid samples of a map T_m -> R^c over the uniform grid φ_s = 2π i_s / R,
/// i_s = 0..R-1, with periodic multilinear interpolation between nodes.
/// Grid nodes are stored with axis 0 varying fastest; each node holds one
/// value per entry of `edge_order`.
class TorusFunction {
 public:
  TorusFunction() = default;
  TorusFunction(std::size_t m, std::size_t resolution, std::vector<Edge> edge_order);

  std::size_t dimension() const noexcept { return m_; }
  std::size_t resolution() const noexcept { return resolution_; }
  std::size_t components() const noexcept { return edge_order_.size(); }
  std::size_t node_count() const noexcept { return nodes_; }
  double spacing() const noexcept { return two_pi / static_cast<double>(resolution_); }
  const std::vector<Edge>& edge_order() const noexcept { return edge_order_; }

  std::span<double> node(std::size_t flat) { return {values_.data() + flat * components(), components()}; }
  std::span<const double> node(std::size_t flat) const { return {values_.data() + flat * components(), components()}; }
  std::vector<double>& values() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Multi-index of a flat node index and back (with periodic wrap of the index).
  std::vector<std::size_t> index_of(std::size_t flat) const;
  std::size_t flat_of(std::span<const long> index) const;
  std::vector<double> phase_of(std::size_t flat) const;

  /// Interpolated value of every component at φ.
  void evaluate(std::span<const double> phi, std::span<double> out) const;
  std::vector<double> evaluate(std::span<const double> phi) const;
  /// Interpolated values of the listed components only.
  void evaluate(std::span<const double> phi, std::span<const std::size_t> comps, std::span<double> out) const;
  /// Tensor-product periodic 4-point Lagrange interpolation (fourth order);
  /// used for off-grid comparisons where the multilinear error would dominate.
  std::vector<double> evaluate_cubic(std::span<const double> phi) const;

  /// max over grid nodes of the Euclidean norm of the node vector.
  double sup_norm() const;
  /// max over grid nodes of ‖this − other‖; grids must match.
  double sup_distance(const TorusFunction& other) const;

  std::size_t edge_index(const Edge& e) const;

 private:
  std::size_t m_ = 0;
  std::size_t resolution_ = 0;
  std::size_t nodes_ = 0;
  std::vector<Edge> edge_order_;
  std::vector<double> values_;
};

struct TorusOptions {
  /// Truncation of the improper integral over (−∞, 0]; 0 selects 40/γ.
  double horizon = 0.0;
  double step = 0.01;
  /// Worker threads; 0 reads KURAMOTO_THREADS or falls back to the hardware count.
  unsigned threads = 0;
  /// Verify uniform incoming counts and a positive A3 left-hand side.
  bool check_preconditions = true;
};

/// One successive approximation:
///   u_next(φ) = ∫_{−H}^{0} e^{γτ} μ G(φ_τ) dτ,   dφ/dτ = w̄ + B(φ) u_prev(φ),  φ_0 = φ.
/// The characteristic and the integral are advanced together by RK4 in
/// negative time, so the quadrature uses the RK4 stage values.
TorusFunction iterate_once(const ReducedModel& model, const TorusFunction& u_prev, const TorusOptions& opts = {});
TorusFunction iterate_once(const OscillatorNetwork& net, const ClusterPartition& part, const PlasticityParams& pp,
                           const TorusFunction& u_prev, const TorusOptions& opts = {});

struct IterationLog {
  std::vector<double> differences;  // z_l = |u^(l) − u^(l−1)|_0, l = 1..
  std::vector<double> sup_norms;    // |u^(l)|_0
  double theoretical_ratio = 0.0;
  bool converged = false;
  std::size_t iterations_used = 0;

  /// z_{l+1} / z_l for consecutive differences (entries with z_l = 0 are skipped).
  std::vector<double> empirical_ratios() const;
};

struct SolveOptions {
  std::size_t resolution = 64;
  double tol = 1e-10;
  std::size_t max_iter = 100;
  TorusOptions torus;
  /// Run even when the sufficient conditions fail.
  bool force = false;
};

struct TorusSolution {
  TorusFunction u;
  IterationLog log;
};

class ConditionsNotMet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TorusNotConverged : public std::runtime_error {
 public:
  explicit TorusNotConverged(TorusSolution partial);
  const TorusSolution& partial() const noexcept { return partial_; }

 private:
  TorusSolution partial_;
};

/// Successive approximations from u^(0) ≡ 0 until the sup-norm change drops
/// below `tol`. Refuses to run when the sufficient conditions fail unless
/// `force` is set; throws TorusNotConverged after `max_iter` iterations.
TorusSolution solve_torus(const OscillatorNetwork& net, const ClusterPartition& part, const PlasticityParams& pp,
                          const SolveOptions& opts = {});

/// max over grid nodes of ‖(∂u/∂φ)(w̄ + B u) + γ u − μ G‖ with central differences.
double invariance_residual(const ReducedModel& model, const TorusFunction& u);
double invariance_residual(const OscillatorNetwork& net, const ClusterPartition& part, const PlasticityParams& pp,
                           const TorusFunction& u);

/// e ≡ 0, constant intra-cluster couplings μΓ(0)/γ, inter-cluster couplings u(φ).
class InvariantManifold {
 public:
  InvariantManifold(const OscillatorNetwork& net, const ClusterPartition& part, const PlasticityParams& pp,
                    TorusFunction inter);

  double intra_value() const noexcept { return intra_value_; }
  const TorusFunction& inter() const noexcept { return inter_; }

  /// Full network state on the manifold above φ: θ_i = φ_s for i in P_s.
  NetworkState state_at(std::span<const double> phi) const;

 private:
  OscillatorNetwork net_;
  ClusterPartition part_;
  double intra_value_ = 0.0;
  TorusFunction inter_;
};

InvariantManifold full_manifold(const OscillatorNetwork& net, const ClusterPartition& part, const PlasticityParams& pp,
                                const TorusFunction& u);

struct SurfacePoint {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double value = 0.0;
};

/// Grid table of one inter-cluster component for m = 2, φ_1 varying slowest.
std::vector<SurfacePoint> export_surface(const TorusFunction& u, const Edge& edge);

}  // namespace kuramoto
