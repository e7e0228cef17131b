#include "kuramoto/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kuramoto/rk4.hpp"

namespace kuramoto {

namespace {

void check_state(const OscillatorNetwork& net, const NetworkState& s) {
  if (s.phases.size() != net.size() || s.couplings.size() != net.size() * net.size())
    throw InvalidInput("state dimensions do not match the network");
}

/// Right-hand side over a flat state [θ (N), K (N×N)] restricted to an edge list.
struct FullSystem {
  const std::vector<double>* w = nullptr;
  const PlasticityParams* pp = nullptr;
  std::vector<Edge> edges;
  std::size_t n = 0;

  void operator()(double, std::span<const double> y, std::span<double> dy) const {
    const double* theta = y.data();
    const double* k = y.data() + n;
    std::fill(dy.begin(), dy.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) dy[i] = (*w)[i];
    double* dk = dy.data() + n;
    for (const Edge& e : edges) {
      const std::size_t idx = e.receiver * n + e.source;
      const double diff = theta[e.source] - theta[e.receiver];
      dy[e.receiver] += k[idx] * std::sin(diff);
      dk[idx] = -pp->gamma * k[idx] + pp->mu * pp->rule.value(diff);
    }
  }
};

void record(Trajectory& traj, double t, std::span<const double> y, std::size_t n) {
  NetworkState s(n);
  std::copy(y.begin(), y.begin() + static_cast<long>(n), s.phases.begin());
  std::copy(y.begin() + static_cast<long>(n), y.end(), s.couplings.begin());
  if (traj.partition) {
    std::vector<double> e;
    e.reserve(traj.error_nodes.size());
    for (std::size_t node : traj.error_nodes) {
      const std::size_t rep = traj.partition->representative(traj.partition->cluster_of(node));
      e.push_back(wrap_error(s.phases[node] - s.phases[rep]));
    }
    traj.errors.push_back(std::move(e));
  }
  traj.times.push_back(t);
  traj.states.push_back(std::move(s));
}

Trajectory run_with_switch(const OscillatorNetwork& before, const OscillatorNetwork& after, const PlasticityParams& pp,
                           const NetworkState& initial, std::optional<double> t_switch, const SimulationOptions& opts,
                           const std::optional<ClusterPartition>& part) {
  if (!(opts.step > 0) || !std::isfinite(opts.step)) throw InvalidInput("integration step must be positive");
  if (!(opts.t_end > 0) || !std::isfinite(opts.t_end)) throw InvalidInput("t_end must be positive");
  if (opts.record_stride == 0) throw InvalidInput("record_stride must be at least 1");
  if (before.size() != after.size()) throw InvalidInput("switched networks differ in size");
  if (!std::equal(before.frequencies().begin(), before.frequencies().end(), after.frequencies().begin()))
    throw InvalidInput("switched networks differ in natural frequencies");
  check_state(before, initial);
  if (part) check_partition_matches(before, *part);

  const std::size_t n = before.size();
  const auto n_steps = static_cast<long long>(std::llround(opts.t_end / opts.step));
  long long switch_step = std::numeric_limits<long long>::max();
  if (t_switch && *t_switch < opts.t_end) switch_step = std::max(0LL, std::llround(*t_switch / opts.step));

  std::vector<double> w(before.frequencies().begin(), before.frequencies().end());
  FullSystem sys{&w, &pp, before.edges(), n};

  std::vector<double> y(n + n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) y[i] = wrap_phase(initial.phases[i]);
  for (const Edge& e : sys.edges) y[n + e.receiver * n + e.source] = initial.k(e.receiver, e.source);

  Trajectory traj;
  traj.partition = part;
  if (part) traj.error_nodes = part->error_nodes();
  traj.edges = sys.edges;
  if (switch_step != std::numeric_limits<long long>::max()) {
    for (const Edge& e : after.edges())
      if (std::find(traj.edges.begin(), traj.edges.end(), e) == traj.edges.end()) traj.edges.push_back(e);
    std::sort(traj.edges.begin(), traj.edges.end());
  }
  const OscillatorNetwork& final_net = switch_step != std::numeric_limits<long long>::max() ? after : before;
  if (part) traj.intra_edges = intra_cluster_edges(final_net, *part);

  const auto expected = static_cast<std::size_t>(n_steps) / opts.record_stride + 1;
  traj.times.reserve(expected);
  traj.states.reserve(expected);
  record(traj, 0.0, y, n);

  Rk4Workspace ws(y.size());
  for (long long k = 0; k < n_steps; ++k) {
    if (k == switch_step) {
      for (const Edge& e : after.edges())
        if (!before.has_edge(e.receiver, e.source)) y[n + e.receiver * n + e.source] = 0.0;
      sys.edges = after.edges();
    }
    const double t = static_cast<double>(k) * opts.step;
    ws.step(y, t, opts.step, sys);
    for (std::size_t i = 0; i < n; ++i) y[i] = wrap_phase(y[i]);
    if (!std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); })) throw SimulationDiverged(t);
    if ((k + 1) % static_cast<long long>(opts.record_stride) == 0)
      record(traj, static_cast<double>(k + 1) * opts.step, y, n);
  }
  return traj;
}

}  // namespace

NetworkState rhs_full(const OscillatorNetwork& net, const PlasticityParams& pp, const NetworkState& state) {
  check_state(net, state);
  const std::size_t n = net.size();
  std::vector<double> w(net.frequencies().begin(), net.frequencies().end());
  FullSystem sys{&w, &pp, net.edges(), n};
  std::vector<double> y(n + n * n), dy(n + n * n);
  std::copy(state.phases.begin(), state.phases.end(), y.begin());
  std::copy(state.couplings.begin(), state.couplings.end(), y.begin() + static_cast<long>(n));
  sys(0.0, y, dy);
  NetworkState out(n);
  std::copy(dy.begin(), dy.begin() + static_cast<long>(n), out.phases.begin());
  std::copy(dy.begin() + static_cast<long>(n), dy.end(), out.couplings.begin());
  return out;
}

double Trajectory::max_abs_error(std::size_t sample) const {
  double hi = 0.0;
  for (double e : errors.at(sample)) hi = std::max(hi, std::abs(e));
  return hi;
}

Trajectory simulate(const OscillatorNetwork& net, const PlasticityParams& pp, const NetworkState& initial,
                    const SimulationOptions& opts, const std::optional<ClusterPartition>& part) {
  return run_with_switch(net, net, pp, initial, std::nullopt, opts, part);
}

Trajectory switch_topology_scenario(const OscillatorNetwork& before, const OscillatorNetwork& after,
                                    const PlasticityParams& pp, const NetworkState& initial, double t_switch,
                                    const SimulationOptions& opts, const std::optional<ClusterPartition>& part) {
  return run_with_switch(before, after, pp, initial, t_switch, opts, part);
}

ErrorMetrics error_metrics(const Trajectory& traj, double tolerance) {
  if (traj.empty()) throw InvalidInput("trajectory has no samples");
  if (!traj.partition) throw InvalidInput("trajectory was recorded without a partition");
  const std::size_t total = traj.times.size();
  const std::size_t tail = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(total))));
  const std::size_t first = total - tail;

  ErrorMetrics m;
  for (std::size_t k = first; k < total; ++k) m.sup_final_error = std::max(m.sup_final_error, traj.max_abs_error(k));

  std::optional<std::size_t> settled;
  for (std::size_t k = total; k-- > 0;) {
    if (traj.max_abs_error(k) >= tolerance) break;
    settled = k;
  }
  if (settled) m.time_to_tolerance = traj.times[*settled];

  const std::size_t n = traj.states.front().size();
  for (const Edge& e : traj.intra_edges) {
    double sum = 0.0;
    for (std::size_t k = first; k < total; ++k) sum += traj.states[k].couplings[e.receiver * n + e.source];
    m.intra_coupling_limits.push_back({e, sum / static_cast<double>(tail)});
  }
  return m;
}

ReducedModel::ReducedModel(const OscillatorNetwork& net, const ClusterPartition& part, const PlasticityParams& pp)
    : pp_(pp) {
  const auto card = compute_cardinalities(net, part);
  if (!card.a2_holds)
    throw InvalidInput("reduced system needs uniform incoming inter-cluster counts (A2 is violated)");
  edges_ = inter_cluster_edges(net, part);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const std::size_t s = part.cluster_of(edges_[e].receiver);
    edge_s_.push_back(s);
    edge_r_.push_back(part.cluster_of(edges_[e].source));
    if (edges_[e].receiver == part.representative(s)) rep_edges_.push_back(e);
  }
  for (std::size_t s = 0; s < part.cluster_count(); ++s) w_bar_.push_back(net.frequency(part.representative(s)));
}

std::vector<double> ReducedModel::b_matrix(const std::vector<double>& phi) const {
  const std::size_t c = edges_.size();
  std::vector<double> b(clusters() * c, 0.0);
  for (std::size_t e : rep_edges_) b[edge_s_[e] * c + e] = std::sin(phi[edge_r_[e]] - phi[edge_s_[e]]);
  return b;
}

std::vector<double> ReducedModel::g_vector(const std::vector<double>& phi) const {
  std::vector<double> g(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) g[e] = pp_.rule.value(phi[edge_r_[e]] - phi[edge_s_[e]]);
  return g;
}

ReducedState ReducedModel::derivative(const ReducedState& state) const {
  if (state.phi.size() != clusters() || state.k_inter.size() != edges_.size())
    throw InvalidInput("reduced state dimensions do not match the model");
  ReducedState d{w_bar_, std::vector<double>(edges_.size())};
  for (std::size_t e : rep_edges_)
    d.phi[edge_s_[e]] += state.k_inter[e] * std::sin(state.phi[edge_r_[e]] - state.phi[edge_s_[e]]);
  const auto g = g_vector(state.phi);
  for (std::size_t e = 0; e < edges_.size(); ++e) d.k_inter[e] = -pp_.gamma * state.k_inter[e] + pp_.mu * g[e];
  return d;
}

ReducedState rhs_reduced(const OscillatorNetwork& net, const ClusterPartition& part, const PlasticityParams& pp,
                         const ReducedState& state) {
  return ReducedModel(net, part, pp).derivative(state);
}

TwoOscillatorAnalysis two_oscillator_static_analysis(double w1, double w2, double k) {
  if (!(k > 0)) throw InvalidInput("static coupling strength must be positive");
  TwoOscillatorAnalysis a;
  a.mean_freq = 0.5 * (w1 + w2);
  a.synchronizable = std::abs(w2 - w1) <= 2.0 * k;
  a.d = a.synchronizable ? std::asin((w2 - w1) / (2.0 * k)) : std::numeric_limits<double>::quiet_NaN();
  return a;
}

TwoOscillatorRun simulate_two_oscillator_static(double w1, double w2, double k, double theta1, double theta2,
                                                double t_end, double step) {
  if (!(step > 0) || !(t_end > 0)) throw InvalidInput("step and t_end must be positive");
  auto rhs = [&](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = w1 + k * std::sin(y[1] - y[0]);
    dy[1] = w2 + k * std::sin(y[0] - y[1]);
  };
  const auto n_steps = std::llround(t_end / step);
  const auto half = n_steps / 2;
  std::vector<double> y{theta1, theta2};
  Rk4Workspace ws(2);
  double theta1_half = y[0];
  for (long long s = 0; s < n_steps; ++s) {
    if (s == half) theta1_half = y[0];
    ws.step(y, static_cast<double>(s) * step, step, rhs);
  }
  TwoOscillatorRun run;
  run.final_phase_difference = wrap_error(y[1] - y[0]);
  run.measured_frequency = (y[0] - theta1_half) / (static_cast<double>(n_steps - half) * step);
  return run;
}

}  // namespace kuramoto
