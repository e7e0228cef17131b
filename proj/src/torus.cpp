#include "kuramoto/torus.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "kuramoto/conditions.hpp"
#include "kuramoto/parallel.hpp"
#include "kuramoto/rk4.hpp"

namespace kuramoto {

namespace {

constexpr std::size_t max_dimension = 8;

/// Distinct ordered cluster pairs (s, r). sin and cos are evaluated once per
/// unordered pair and stage; Γ and the sine of each ordered pair follow from them.
struct PairTable {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;      // ordered (s, r)
  std::vector<std::pair<std::size_t, std::size_t>> unordered;  // (a, b), a < b
  std::vector<std::size_t> pair_unordered;                     // per ordered pair
  std::vector<double> pair_sign;                               // φ_r − φ_s = sign (φ_b − φ_a)
  std::vector<std::size_t> edge_pair;                          // per inter edge
  std::vector<std::size_t> rep_pair;                           // per representative edge

  explicit PairTable(const ReducedModel& model) {
    auto find_or_add = [](auto& list, std::pair<std::size_t, std::size_t> key) {
      auto it = std::find(list.begin(), list.end(), key);
      if (it != list.end()) return static_cast<std::size_t>(it - list.begin());
      list.push_back(key);
      return list.size() - 1;
    };
    for (std::size_t e = 0; e < model.inter_edge_count(); ++e) {
      const std::size_t s = model.receiving_cluster(e), r = model.source_cluster(e);
      const std::size_t before = pairs.size();
      edge_pair.push_back(find_or_add(pairs, {s, r}));
      if (pairs.size() != before) {
        pair_unordered.push_back(find_or_add(unordered, {std::min(s, r), std::max(s, r)}));
        pair_sign.push_back(s < r ? 1.0 : -1.0);
      }
    }
    for (std::size_t e : model.representative_edges()) rep_pair.push_back(edge_pair[e]);
  }
};

void check_compatible(const ReducedModel& model, const TorusFunction& u) {
  if (u.dimension() != model.clusters()) throw InvalidInput("torus dimension does not match the number of clusters");
  if (u.edge_order() != model.edges()) throw InvalidInput("torus edge order does not match the inter-cluster edges");
}

}  // namespace

TorusFunction::TorusFunction(std::size_t m, std::size_t resolution, std::vector<Edge> edge_order)
    : m_(m), resolution_(resolution), edge_order_(std::move(edge_order)) {
  if (m == 0 || m > max_dimension) throw InvalidInput("torus dimension must be between 1 and 8");
  if (resolution < 2) throw InvalidInput("torus resolution must be at least 2");
  nodes_ = 1;
  for (std::size_t a = 0; a < m; ++a) nodes_ *= resolution;
  values_.assign(nodes_ * edge_order_.size(), 0.0);
}

std::vector<std::size_t> TorusFunction::index_of(std::size_t flat) const {
  std::vector<std::size_t> idx(m_);
  for (std::size_t a = 0; a < m_; ++a) {
    idx[a] = flat % resolution_;
    flat /= resolution_;
  }
  return idx;
}

std::size_t TorusFunction::flat_of(std::span<const long> index) const {
  const auto r = static_cast<long>(resolution_);
  std::size_t flat = 0, stride = 1;
  for (std::size_t a = 0; a < m_; ++a) {
    flat += static_cast<std::size_t>(((index[a] % r) + r) % r) * stride;
    stride *= resolution_;
  }
  return flat;
}

std::vector<double> TorusFunction::phase_of(std::size_t flat) const {
  std::vector<double> phi(m_);
  const auto idx = index_of(flat);
  for (std::size_t a = 0; a < m_; ++a) phi[a] = spacing() * static_cast<double>(idx[a]);
  return phi;
}

void TorusFunction::evaluate(std::span<const double> phi, std::span<const std::size_t> comps,
                             std::span<double> out) const {
  std::array<std::size_t, max_dimension> lo{}, hi{}, stride{};
  std::array<double, max_dimension> frac{};
  std::size_t s = 1;
  const double inv_h = static_cast<double>(resolution_) / two_pi;
  for (std::size_t a = 0; a < m_; ++a) {
    const double x = wrap_phase(phi[a]) * inv_h;
    auto i0 = static_cast<std::size_t>(x);
    frac[a] = x - static_cast<double>(i0);
    if (i0 >= resolution_) {
      i0 = resolution_ - 1;
      frac[a] = 1.0;
    }
    lo[a] = i0 * s;
    hi[a] = ((i0 + 1) % resolution_) * s;
    stride[a] = s;
    s *= resolution_;
  }
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t c = components();
  for (std::size_t corner = 0; corner < (std::size_t{1} << m_); ++corner) {
    double weight = 1.0;
    std::size_t flat = 0;
    for (std::size_t a = 0; a < m_; ++a) {
      if (corner & (std::size_t{1} << a)) {
        weight *= frac[a];
        flat += hi[a];
      } else {
        weight *= 1.0 - frac[a];
        flat += lo[a];
      }
    }
    if (weight == 0.0) continue;
    const double* v = values_.data() + flat * c;
    for (std::size_t k = 0; k < comps.size(); ++k) out[k] += weight * v[comps[k]];
  }
}

void TorusFunction::evaluate(std::span<const double> phi, std::span<double> out) const {
  std::vector<std::size_t> all(components());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  evaluate(phi, all, out);
}

std::vector<double> TorusFunction::evaluate(std::span<const double> phi) const {
  std::vector<double> out(components());
  evaluate(phi, std::span<double>(out));
  return out;
}

std::vector<double> TorusFunction::evaluate_cubic(std::span<const double> phi) const {
  std::array<std::array<std::size_t, 4>, max_dimension> idx{};
  std::array<std::array<double, 4>, max_dimension> wts{};
  std::size_t stride = 1;
  const double inv_h = static_cast<double>(resolution_) / two_pi;
  const auto r = static_cast<long>(resolution_);
  for (std::size_t a = 0; a < m_; ++a) {
    const double x = wrap_phase(phi[a]) * inv_h;
    const auto i0 = static_cast<long>(std::floor(x));
    const double t = x - static_cast<double>(i0);
    // Lagrange weights on nodes i0-1, i0, i0+1, i0+2.
    wts[a] = {-t * (t - 1) * (t - 2) / 6, (t + 1) * (t - 1) * (t - 2) / 2, -(t + 1) * t * (t - 2) / 2,
              (t + 1) * t * (t - 1) / 6};
    for (long k = 0; k < 4; ++k) idx[a][k] = static_cast<std::size_t>((((i0 - 1 + k) % r) + r) % r) * stride;
    stride *= resolution_;
  }
  std::vector<double> out(components(), 0.0);
  std::size_t corners = 1;
  for (std::size_t a = 0; a < m_; ++a) corners *= 4;
  for (std::size_t corner = 0; corner < corners; ++corner) {
    double weight = 1.0;
    std::size_t flat = 0, code = corner;
    for (std::size_t a = 0; a < m_; ++a, code /= 4) {
      weight *= wts[a][code % 4];
      flat += idx[a][code % 4];
    }
    const auto v = node(flat);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += weight * v[k];
  }
  return out;
}

double TorusFunction::sup_norm() const {
  double hi = 0.0;
  for (std::size_t f = 0; f < nodes_; ++f) {
    double sq = 0.0;
    for (double v : node(f)) sq += v * v;
    hi = std::max(hi, std::sqrt(sq));
  }
  return hi;
}

double TorusFunction::sup_distance(const TorusFunction& other) const {
  if (other.m_ != m_ || other.resolution_ != resolution_ || other.components() != components())
    throw InvalidInput("torus grids differ");
  double hi = 0.0;
  for (std::size_t f = 0; f < nodes_; ++f) {
    double sq = 0.0;
    const auto a = node(f), b = other.node(f);
    for (std::size_t k = 0; k < a.size(); ++k) sq += (a[k] - b[k]) * (a[k] - b[k]);
    hi = std::max(hi, std::sqrt(sq));
  }
  return hi;
}

std::size_t TorusFunction::edge_index(const Edge& e) const {
  auto it = std::find(edge_order_.begin(), edge_order_.end(), e);
  if (it == edge_order_.end())
    throw InvalidInput("edge (" + std::to_string(e.receiver + 1) + "," + std::to_string(e.source + 1) +
                       ") is not an inter-cluster edge of this torus");
  return static_cast<std::size_t>(it - edge_order_.begin());
}

TorusFunction iterate_once(const ReducedModel& model, const TorusFunction& u_prev, const TorusOptions& opts) {
  check_compatible(model, u_prev);
  const auto& pp = model.params();
  if (!(opts.step > 0)) throw InvalidInput("torus integration step must be positive");
  const double horizon = opts.horizon > 0 ? opts.horizon : 40.0 / pp.gamma;
  const auto n_steps = static_cast<long>(std::ceil(horizon / opts.step - 1e-9));
  const double h = horizon / static_cast<double>(n_steps);

  if (opts.check_preconditions) {
    double w_min = std::abs(model.w_bar().front());
    for (double w : model.w_bar()) w_min = std::min(w_min, std::abs(w));
    // c_max over the representative rows of B.
    std::vector<double> row(model.clusters(), 0.0);
    for (std::size_t e : model.representative_edges()) row[model.receiving_cluster(e)] += 1.0;
    const double c_max = row.empty() ? 0.0 : *std::max_element(row.begin(), row.end());
    if (!(w_min - pp.mu * pp.delta * c_max / pp.gamma > 0))
      throw InvalidInput("torus vector field is not separated from zero (w_min - mu*delta*c_max/gamma <= 0)");
  }

  const std::size_t m = model.clusters();
  const std::size_t c = model.inter_edge_count();
  const PairTable table(model);
  const auto& reps = model.representative_edges();
  const auto& w_bar = model.w_bar();

  TorusFunction out(u_prev.dimension(), u_prev.resolution(), u_prev.edge_order());

  parallel_for(out.node_count(), opts.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> y(m + c);
    std::vector<double> u_rep(reps.size()), pair_sin(table.pairs.size()), pair_rule(table.pairs.size());
    std::vector<double> base_sin(table.unordered.size()), base_cos(table.unordered.size());
    Rk4Workspace ws(y.size());
    double cached_tau = 1.0, cached_weight = 0.0;

    // y = [φ, accumulated integral]; t is τ <= 0.
    auto rhs = [&](double tau, std::span<const double> state, std::span<double> d) {
      const std::span<const double> phi = state.first(m);
      for (std::size_t q = 0; q < table.unordered.size(); ++q) {
        const double diff = phi[table.unordered[q].second] - phi[table.unordered[q].first];
        base_sin[q] = std::sin(diff);
        base_cos[q] = std::cos(diff);
      }
      for (std::size_t p = 0; p < table.pairs.size(); ++p) {
        const std::size_t q = table.pair_unordered[p];
        const double sign = table.pair_sign[p];
        pair_sin[p] = sign * base_sin[q];
        const double diff = phi[table.pairs[p].second] - phi[table.pairs[p].first];
        pair_rule[p] = pp.rule.value(diff, pair_sin[p], base_cos[q]);
      }
      u_prev.evaluate(phi, reps, u_rep);
      for (std::size_t s = 0; s < m; ++s) d[s] = w_bar[s];
      for (std::size_t k = 0; k < reps.size(); ++k)
        d[model.receiving_cluster(reps[k])] += u_rep[k] * pair_sin[table.rep_pair[k]];
      if (tau != cached_tau) {
        cached_tau = tau;
        cached_weight = pp.mu * std::exp(pp.gamma * tau);
      }
      for (std::size_t e = 0; e < c; ++e) d[m + e] = cached_weight * pair_rule[table.edge_pair[e]];
    };

    for (std::size_t f = begin; f < end; ++f) {
      const auto phi0 = out.phase_of(f);
      std::copy(phi0.begin(), phi0.end(), y.begin());
      std::fill(y.begin() + static_cast<long>(m), y.end(), 0.0);
      for (long k = 0; k < n_steps; ++k) ws.step(y, -h * static_cast<double>(k), -h, rhs);
      auto dst = out.node(f);
      for (std::size_t e = 0; e < c; ++e) {
        // Integrating backwards accumulates −∫_{−H}^{0}.
        dst[e] = -y[m + e];
        if (!std::isfinite(dst[e])) throw std::runtime_error("non-finite value in torus iteration");
      }
    }
  });
  return out;
}

TorusFunction iterate_once(const OscillatorNetwork& net, const ClusterPartition& part, const PlasticityParams& pp,
                           const TorusFunction& u_prev, const TorusOptions& opts) {
  return iterate_once(ReducedModel(net, part, pp), u_prev, opts);
}

std::vector<double> IterationLog::empirical_ratios() const {
  std::vector<double> r;
  for (std::size_t l = 1; l < differences.size(); ++l)
    if (differences[l - 1] > 0) r.push_back(differences[l] / differences[l - 1]);
  return r;
}

TorusNotConverged::TorusNotConverged(TorusSolution partial)
    : std::runtime_error("successive approximations did not converge within " +
                         std::to_string(partial.log.iterations_used) + " iterations (last change " +
                         std::to_string(partial.log.differences.empty() ? 0.0 : partial.log.differences.back()) + ")"),
      partial_(std::move(partial)) {}

TorusSolution solve_torus(const OscillatorNetwork& net, const ClusterPartition& part, const PlasticityParams& pp,
                          const SolveOptions& opts) {
  const auto report = check_theorem1(net, part, pp);
  if (!opts.force && !report.overall) {
    throw ConditionsNotMet(std::string("sufficient conditions fail (A1 ") + (report.a1_holds ? "ok" : "fails") +
                           ", A2 " + (report.a2_holds ? "ok" : "fails") + ", A3 " +
                           (report.a3_holds ? "ok" : "fails") + "); use force to iterate anyway");
  }
  if (opts.max_iter == 0) throw InvalidInput("max_iter must be at least 1");
  const ReducedModel model(net, part, pp);
  TorusOptions torus_opts = opts.torus;
  torus_opts.check_preconditions = !opts.force;

  TorusSolution sol;
  sol.log.theoretical_ratio = report.ratio_a3;
  sol.u = TorusFunction(part.cluster_count(), opts.resolution, model.edges());
  for (std::size_t l = 1; l <= opts.max_iter; ++l) {
    TorusFunction next = iterate_once(model, sol.u, torus_opts);
    const double z = next.sup_distance(sol.u);
    sol.u = std::move(next);
    sol.log.differences.push_back(z);
    sol.log.sup_norms.push_back(sol.u.sup_norm());
    sol.log.iterations_used = l;
    if (z < opts.tol) {
      sol.log.converged = true;
      return sol;
    }
  }
  throw TorusNotConverged(std::move(sol));
}

double invariance_residual(const ReducedModel& model, const TorusFunction& u) {
  check_compatible(model, u);
  if (u.resolution() < 16) throw InvalidInput("invariance residual needs a resolution of at least 16");
  const auto& pp = model.params();
  const std::size_t m = u.dimension();
  const std::size_t c = u.components();
  const double inv_2h = 1.0 / (2.0 * u.spacing());
  const auto& reps = model.representative_edges();

  double worst = 0.0;
  std::vector<long> idx(m);
  std::vector<double> velocity(m), residual(c);
  for (std::size_t f = 0; f < u.node_count(); ++f) {
    const auto phi = u.phase_of(f);
    const auto here = u.node(f);
    const auto base = u.index_of(f);

    for (std::size_t s = 0; s < m; ++s) velocity[s] = model.w_bar()[s];
    for (std::size_t e : reps) {
      const std::size_t s = model.receiving_cluster(e), r = model.source_cluster(e);
      velocity[s] += here[e] * std::sin(phi[r] - phi[s]);
    }
    const auto g = model.g_vector(phi);
    for (std::size_t e = 0; e < c; ++e) residual[e] = pp.gamma * here[e] - pp.mu * g[e];

    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) idx[b] = static_cast<long>(base[b]);
      idx[a] += 1;
      const auto plus = u.node(u.flat_of(idx));
      idx[a] -= 2;
      const auto minus = u.node(u.flat_of(idx));
      for (std::size_t e = 0; e < c; ++e) residual[e] += (plus[e] - minus[e]) * inv_2h * velocity[a];
    }
    double sq = 0.0;
    for (double r : residual) sq += r * r;
    worst = std::max(worst, std::sqrt(sq));
  }
  return worst;
}

double invariance_residual(const OscillatorNetwork& net, const ClusterPartition& part, const PlasticityParams& pp,
                           const TorusFunction& u) {
  return invariance_residual(ReducedModel(net, part, pp), u);
}

InvariantManifold::InvariantManifold(const OscillatorNetwork& net, const ClusterPartition& part,
                                     const PlasticityParams& pp, TorusFunction inter)
    : net_(net), part_(part), intra_value_(pp.mu * pp.rule.value(0.0) / pp.gamma), inter_(std::move(inter)) {
  check_partition_matches(net, part);
  if (inter_.dimension() != part.cluster_count() || inter_.edge_order() != inter_cluster_edges(net, part))
    throw InvalidInput("torus does not belong to this network and partition");
}

NetworkState InvariantManifold::state_at(std::span<const double> phi) const {
  if (phi.size() != part_.cluster_count()) throw InvalidInput("expected one phase per cluster");
  NetworkState state(net_.size());
  for (std::size_t i = 0; i < net_.size(); ++i) state.phases[i] = wrap_phase(phi[part_.cluster_of(i)]);
  const auto inter = inter_.evaluate(phi);
  for (std::size_t e = 0; e < inter.size(); ++e) {
    const Edge& edge = inter_.edge_order()[e];
    state.k(edge.receiver, edge.source) = inter[e];
  }
  for (const Edge& edge : intra_cluster_edges(net_, part_)) state.k(edge.receiver, edge.source) = intra_value_;
  return state;
}

InvariantManifold full_manifold(const OscillatorNetwork& net, const ClusterPartition& part, const PlasticityParams& pp,
                                const TorusFunction& u) {
  return InvariantManifold(net, part, pp, u);
}

std::vector<SurfacePoint> export_surface(const TorusFunction& u, const Edge& edge) {
  if (u.dimension() != 2) throw InvalidInput("surface export needs a two-dimensional torus");
  const std::size_t comp = u.edge_index(edge);
  const std::size_t r = u.resolution();
  std::vector<SurfacePoint> rows;
  rows.reserve(r * r);
  for (std::size_t i1 = 0; i1 < r; ++i1) {
    for (std::size_t i2 = 0; i2 < r; ++i2) {
      const std::size_t flat = i1 + r * i2;
      rows.push_back({u.spacing() * static_cast<double>(i1), u.spacing() * static_cast<double>(i2), u.node(flat)[comp]});
    }
  }
  return rows;
}

}  // namespace kuramoto
