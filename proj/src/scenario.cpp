#include "kuramoto/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "kuramoto/conditions.hpp"
#include "kuramoto/parallel.hpp"

namespace kuramoto {

namespace {

const json& need(const json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key)) throw InvalidInput(context + ": missing key '" + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw InvalidInput(what + " must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& context) {
  return obj.contains(key) ? number(obj.at(key), context + "." + key) : fallback;
}

std::size_t count_or(const json& obj, const char* key, std::size_t fallback, const std::string& context) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw InvalidInput(context + "." + key + " must be a non-negative integer");
  return v.get<std::size_t>();
}

std::vector<double> number_list(const json& v, const std::string& what) {
  if (!v.is_array()) throw InvalidInput(what + " must be a list of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, what + " entry"));
  return out;
}

std::pair<double, double> range(const json& v, const std::string& what) {
  const auto r = number_list(v, what);
  if (r.size() != 2 || !(r[0] <= r[1])) throw InvalidInput(what + " must be [lo, hi] with lo <= hi");
  return {r[0], r[1]};
}

Edge edge_from_labels(const json& v, std::size_t n, const std::string& what) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
    throw InvalidInput(what + " must be [receiver, source] with 1-based labels");
  const auto i = v[0].get<long long>(), j = v[1].get<long long>();
  if (i < 1 || j < 1 || static_cast<std::size_t>(i) > n || static_cast<std::size_t>(j) > n)
    throw InvalidInput(what + " refers to a node outside 1.." + std::to_string(n));
  return {static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)};
}

InitialCondition initial_from_json(const json& j, std::size_t n) {
  reject_unknown_keys(j, {"phases", "couplings"}, "initial");
  InitialCondition ic;
  if (j.contains("phases")) {
    const auto& p = j.at("phases");
    if (p.is_object()) {
      reject_unknown_keys(p, {"random"}, "initial.phases");
      std::tie(ic.phase_lo, ic.phase_hi) = range(need(p, "random", "initial.phases"), "initial.phases.random");
      ic.random_phases = true;
    } else {
      ic.phases = number_list(p, "initial.phases");
      if (ic.phases.size() != n) throw InvalidInput("initial.phases must have one entry per node");
    }
  } else {
    ic.phases.assign(n, 0.0);
  }
  if (!j.contains("couplings")) return ic;
  const auto& c = j.at("couplings");
  auto& ci = ic.couplings;
  if (c.is_string()) {
    if (c.get<std::string>() != "zero") throw InvalidInput("initial.couplings string must be \"zero\"");
    return ic;
  }
  reject_unknown_keys(c, {"random", "intra", "inter", "matrix"}, "initial.couplings");
  if (c.contains("random")) {
    ci.kind = CouplingInit::Kind::random;
    std::tie(ci.lo, ci.hi) = range(c.at("random"), "initial.couplings.random");
  } else if (c.contains("matrix")) {
    ci.kind = CouplingInit::Kind::matrix;
    for (const auto& row : c.at("matrix")) ci.matrix.push_back(number_list(row, "initial.couplings.matrix row"));
    if (ci.matrix.size() != n) throw InvalidInput("initial.couplings.matrix must be N x N");
    for (const auto& row : ci.matrix)
      if (row.size() != n) throw InvalidInput("initial.couplings.matrix must be N x N");
  } else {
    ci.kind = CouplingInit::Kind::split;
    ci.intra = number_or(c, "intra", 0.0, "initial.couplings");
    ci.inter = number_or(c, "inter", 0.0, "initial.couplings");
  }
  return ic;
}

std::vector<Expectation> expectations_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("expect must map metric names to conditions");
  std::vector<Expectation> out;
  for (const auto& [metric, cond] : j.items()) {
    const std::string ctx = "expect." + metric;
    reject_unknown_keys(cond, {"value", "tol", "max", "min"}, ctx);
    Expectation e;
    e.metric = metric;
    if (cond.contains("value")) {
      e.value = number(cond.at("value"), ctx + ".value");
      e.tol = number_or(cond, "tol", 0.0, ctx);
    }
    if (cond.contains("max")) e.max = number(cond.at("max"), ctx + ".max");
    if (cond.contains("min")) e.min = number(cond.at("min"), ctx + ".min");
    if (!e.value && !e.max && !e.min) throw InvalidInput(ctx + " needs value, max or min");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ReferenceValue> references_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("reference must map metric names to values");
  std::vector<ReferenceValue> out;
  for (const auto& [metric, ref] : j.items()) {
    reject_unknown_keys(ref, {"value", "note"}, "reference." + metric);
    ReferenceValue r;
    r.metric = metric;
    r.value = number(need(ref, "value", "reference." + metric), "reference." + metric + ".value");
    if (ref.contains("note")) r.note = ref.at("note").get<std::string>();
    out.push_back(std::move(r));
  }
  return out;
}

/// Uniform double in [lo, hi] from the top 53 bits of a 64-bit draw.
/// Written out by hand so that results match across standard libraries.
double draw(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

/// Index of the first sample of the final 5% (at least one sample).
std::size_t tail_start(const Trajectory& traj) {
  const std::size_t total = traj.times.size();
  return total - std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(total))));
}

void add_trajectory_metrics(const Scenario& sc, const Trajectory& traj, std::map<std::string, double>& metrics,
                            json& report) {
  const auto em = error_metrics(traj, sc.error_tolerance);
  report["error_metrics"] = metrics_to_json(em);
  metrics["sup_final_error"] = em.sup_final_error;
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) worst = std::max(worst, traj.max_abs_error(k));
  metrics["max_error"] = worst;
  if (em.time_to_tolerance) metrics["time_to_tolerance"] = *em.time_to_tolerance;

  const auto& pp = sc.plasticity;
  const double target = pp.mu * pp.rule.value(0.0) / pp.gamma;
  double deviation = 0.0;
  for (std::size_t k = tail_start(traj); k < traj.times.size(); ++k)
    for (const Edge& e : traj.intra_edges)
      deviation = std::max(deviation, std::abs(traj.states[k].k(e.receiver, e.source) - target));
  metrics["intra_coupling_target"] = target;
  if (!traj.intra_edges.empty()) metrics["intra_coupling_final_deviation"] = deviation;
}

void write_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write_trajectory_csv(os, traj);
}

/// First successive approximation from u ≡ 0 for cosine-type rules, in closed
/// form: the characteristic is φ + w̄τ, so each component integrates
/// μ e^{γτ} cos(ψ + Δτ + offset) over τ <= 0 exactly.
std::optional<double> first_iterate_error(const ReducedModel& model, const TorusFunction& u1) {
  const auto& pp = model.params();
  if (pp.rule.kind() == LearningRule::Kind::tabulated) return std::nullopt;
  const double offset = pp.rule.offset();
  double worst = 0.0;
  for (std::size_t f = 0; f < u1.node_count(); ++f) {
    const auto phi = u1.phase_of(f);
    const auto got = u1.node(f);
    for (std::size_t e = 0; e < u1.components(); ++e) {
      const std::size_t s = model.receiving_cluster(e), r = model.source_cluster(e);
      const double psi = phi[r] - phi[s] + offset;
      const double delta = model.w_bar()[r] - model.w_bar()[s];
      const double g = pp.gamma;
      const double exact = pp.mu * (g * std::cos(psi) + delta * std::sin(psi)) / (g * g + delta * delta);
      worst = std::max(worst, std::abs(got[e] - exact));
    }
  }
  return worst;
}

void run_check(const Scenario& sc, ScenarioResult& res) {
  const auto rep = sc.perturbation ? check_corollary(sc.network, *sc.perturbation, sc.partition, sc.plasticity)
                                   : check_theorem1(sc.network, sc.partition, sc.plasticity);
  res.report["conditions"] = condition_report_to_json(rep);
  auto& m = res.metrics;
  m["overall"] = rep.overall;
  m["a1_holds"] = rep.a1_holds;
  m["a2_holds"] = rep.a2_holds;
  m["a3_holds"] = rep.a3_holds;
  m["w_min"] = rep.w_min;
  m["w_max"] = rep.w_max;
  m["lhs_a3"] = rep.lhs_a3;
  m["ratio_a3"] = rep.ratio_a3;
  m["c_in"] = static_cast<double>(rep.cardinalities.c_in);
  m["c_out"] = static_cast<double>(rep.cardinalities.c_out);
  m["c_out_effective"] = static_cast<double>(rep.c_out_effective);
  m["c_tilde_out"] = static_cast<double>(rep.c_tilde_out);
  m["c_max"] = static_cast<double>(rep.cardinalities.c_max);
  m["sum_c_sr"] = static_cast<double>(rep.cardinalities.sum_c_sr);
  const auto& c_sr = rep.cardinalities.c_sr;
  for (std::size_t s = 0; s < c_sr.size(); ++s)
    for (std::size_t r = 0; r < c_sr.size(); ++r)
      if (s != r) m["c_" + std::to_string(s + 1) + "_" + std::to_string(r + 1)] = static_cast<double>(c_sr[s][r]);
  if (!rep.overall) res.exit_code = 2;
}

void run_simulate(const Scenario& sc, const std::filesystem::path& out, ScenarioResult& res) {
  const auto initial = make_initial_state(sc);
  const auto traj = simulate(sc.network, sc.plasticity, initial, sc.simulation, sc.partition);
  write_csv(out / "trajectory.csv", traj);
  res.report["conditions"] = condition_report_to_json(check_theorem1(sc.network, sc.partition, sc.plasticity));
  add_trajectory_metrics(sc, traj, res.metrics, res.report);
}

void run_switch(const Scenario& sc, const std::filesystem::path& out, ScenarioResult& res) {
  if (!sc.network_after) throw InvalidInput("switch task needs a 'switch' block");
  const auto initial = make_initial_state(sc);
  const auto traj =
      switch_topology_scenario(sc.network, *sc.network_after, sc.plasticity, initial, sc.t_switch, sc.simulation,
                               sc.partition);
  write_csv(out / "trajectory.csv", traj);
  save_network_file(out / "network_after.json", *sc.network_after, sc.partition);
  res.report["conditions_before"] = condition_report_to_json(check_theorem1(sc.network, sc.partition, sc.plasticity));
  res.report["conditions_after"] =
      condition_report_to_json(check_theorem1(*sc.network_after, sc.partition, sc.plasticity));
  add_trajectory_metrics(sc, traj, res.metrics, res.report);
  double before = 0.0;
  for (std::size_t k = 0; k < traj.times.size() && traj.times[k] <= sc.t_switch; ++k)
    before = std::max(before, traj.max_abs_error(k));
  res.metrics["max_error_before_switch"] = before;
}

void run_torus(const Scenario& sc, const std::filesystem::path& out, bool force, ScenarioResult& res) {
  const auto& tt = sc.torus;
  SolveOptions so = tt.solve;
  so.force = so.force || force;
  TorusSolution sol;
  try {
    sol = solve_torus(sc.network, sc.partition, sc.plasticity, so);
  } catch (const TorusNotConverged& e) {
    res.report["iteration_log"] = iteration_log_to_json(e.partial().log);
    write_json_file(out / "torus.json", torus_to_json(e.partial().u, sc.plasticity));
    throw;
  }
  const auto& log = sol.log;
  res.report["iteration_log"] = iteration_log_to_json(log);
  write_json_file(out / "torus.json", torus_to_json(sol.u, sc.plasticity));

  auto& m = res.metrics;
  m["converged"] = log.converged;
  m["iterations"] = static_cast<double>(log.iterations_used);
  m["final_difference"] = log.differences.back();
  m["theoretical_ratio"] = log.theoretical_ratio;
  const auto ratios = log.empirical_ratios();
  // ratios[k] = z_{k+2}/z_{k+1}; the burn-in skips the first iterations.
  double tail_ratio = 0.0;
  for (std::size_t k = tt.burn_in; k < ratios.size(); ++k) tail_ratio = std::max(tail_ratio, ratios[k]);
  if (ratios.size() > tt.burn_in) {
    m["max_empirical_ratio"] = tail_ratio;
    if (log.theoretical_ratio > 0) m["empirical_over_theoretical"] = tail_ratio / log.theoretical_ratio;
  }
  const auto& pp = sc.plasticity;
  m["sup_norm"] = *std::max_element(log.sup_norms.begin(), log.sup_norms.end());
  m["sup_norm_bound"] = pp.mu * pp.delta * std::sqrt(static_cast<double>(sol.u.components())) / pp.gamma;

  const ReducedModel model(sc.network, sc.partition, pp);
  TorusOptions first_opts = so.torus;
  first_opts.check_preconditions = false;
  const TorusFunction zero(sol.u.dimension(), sol.u.resolution(), sol.u.edge_order());
  if (auto err = first_iterate_error(model, iterate_once(model, zero, first_opts))) m["first_iterate_error"] = *err;

  double residual = std::numeric_limits<double>::quiet_NaN();
  if (sol.u.resolution() >= 16) {
    residual = invariance_residual(model, sol.u);
    m["invariance_residual"] = residual;
  }
  const auto manifold = full_manifold(sc.network, sc.partition, pp, sol.u);
  m["intra_value"] = manifold.intra_value();

  if (tt.surface_edge && sol.u.dimension() == 2) {
    std::ofstream os(out / "surface.csv");
    write_surface_csv(os, export_surface(sol.u, *tt.surface_edge));
  }

  if (tt.tracking_phi) {
    if (tt.tracking_phi->size() != sol.u.dimension()) throw InvalidInput("torus.tracking.phi needs one entry per cluster");
    const SimulationOptions so_track{tt.tracking_t_end, tt.tracking_step, 10};
    const auto traj = simulate(sc.network, pp, manifold.state_at(*tt.tracking_phi), so_track, sc.partition);
    const auto& reps = sc.partition.representatives();
    double deviation = 0.0, drift = 0.0;
    std::vector<double> phi(reps.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      const auto& st = traj.states[k];
      for (std::size_t s = 0; s < reps.size(); ++s) phi[s] = st.phases[reps[s]];
      const auto u = sol.u.evaluate_cubic(phi);
      double sq = 0.0;
      for (std::size_t e = 0; e < u.size(); ++e) {
        const Edge& edge = sol.u.edge_order()[e];
        const double d = st.k(edge.receiver, edge.source) - u[e];
        sq += d * d;
      }
      deviation = std::max(deviation, std::sqrt(sq));
      drift = std::max(drift, traj.max_abs_error(k));
    }
    m["tracking_deviation"] = deviation;
    m["tracking_error_max"] = drift;
    if (std::isfinite(residual) && residual > 0) m["tracking_over_residual"] = deviation / residual;
  }
}

void run_design(const Scenario& sc, const std::filesystem::path& out, ScenarioResult& res) {
  const auto result = design_topology(sc.network, sc.partition, sc.plasticity, sc.design);
  res.report["design"] = design_result_to_json(result);
  save_network_file(out / "network_designed.json", apply_perturbation(sc.network, result.perturbation), sc.partition);
  auto& m = res.metrics;
  m["feasible"] = result.feasible;
  m["edits"] = static_cast<double>(result.edits);
  m["candidates_checked"] = static_cast<double>(result.candidates_checked);
  m["ratio_a3"] = result.report.ratio_a3;
  m["lhs_a3"] = result.report.lhs_a3;
  m["c_tilde_out"] = static_cast<double>(result.report.c_tilde_out);
  m["c_out_effective"] = static_cast<double>(result.report.c_out_effective);
}

void run_two_osc(const Scenario& sc, ScenarioResult& res) {
  const auto& t = sc.two_osc;
  const auto analysis = two_oscillator_static_analysis(t.w1, t.w2, t.k);
  const auto run = simulate_two_oscillator_static(t.w1, t.w2, t.k, t.theta1, t.theta2, t.t_end, t.step);
  auto& m = res.metrics;
  m["synchronizable"] = analysis.synchronizable;
  m["mean_freq"] = analysis.mean_freq;
  m["freq_simulated"] = run.measured_frequency;
  m["freq_error"] = std::abs(run.measured_frequency - analysis.mean_freq);
  m["d_simulated"] = run.final_phase_difference;
  if (analysis.synchronizable) {
    m["d_analytic"] = analysis.d;
    m["d_error"] = std::abs(run.final_phase_difference - analysis.d);
  }
  res.report["analysis"] = {{"d", number_or_null(analysis.d)},
                            {"mean_freq", analysis.mean_freq},
                            {"synchronizable", analysis.synchronizable}};
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

}  // namespace

std::string task_name(Task t) {
  switch (t) {
    case Task::check: return "check";
    case Task::simulate: return "simulate";
    case Task::torus: return "torus";
    case Task::design: return "design";
    case Task::two_osc: return "two-osc";
    case Task::switch_topology: return "switch";
  }
  return "unknown";
}

Task task_from_name(const std::string& name) {
  for (Task t : {Task::check, Task::simulate, Task::torus, Task::design, Task::two_osc, Task::switch_topology})
    if (task_name(t) == name) return t;
  throw InvalidInput("unknown task '" + name + "'");
}

Scenario scenario_from_json(const json& j, const std::filesystem::path& base_dir) {
  reject_unknown_keys(j,
                      {"name", "task", "network", "plasticity", "perturbation", "seed", "initial", "simulation",
                       "torus", "design", "two_osc", "switch", "expect", "expect_exit", "reference", "output_dir",
                       "description"},
                      "scenario");
  Scenario sc;
  sc.name = need(j, "name", "scenario").get<std::string>();
  if (j.contains("task")) sc.task = task_from_name(j.at("task").get<std::string>());

  const bool needs_network = !sc.task || *sc.task != Task::two_osc || j.contains("network");
  if (needs_network) {
    auto spec = network_from_json(need(j, "network", "scenario"));
    if (!spec.partition) throw InvalidInput("scenario network needs a partition");
    sc.network = std::move(spec.network);
    sc.partition = std::move(*spec.partition);
    sc.plasticity = plasticity_from_json(need(j, "plasticity", "scenario"));
  }
  const std::size_t n = sc.network.size();
  if (j.contains("perturbation")) sc.perturbation = perturbation_from_json(j.at("perturbation"), n);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw InvalidInput("seed must be a non-negative integer");
    sc.seed = j.at("seed").get<std::uint64_t>();
  }
  sc.initial = initial_from_json(j.value("initial", json::object()), n);

  if (j.contains("simulation")) {
    const auto& s = j.at("simulation");
    reject_unknown_keys(s, {"t_end", "step", "record_stride", "error_tolerance"}, "simulation");
    sc.simulation.t_end = number_or(s, "t_end", sc.simulation.t_end, "simulation");
    sc.simulation.step = number_or(s, "step", sc.simulation.step, "simulation");
    sc.simulation.record_stride = count_or(s, "record_stride", sc.simulation.record_stride, "simulation");
    sc.error_tolerance = number_or(s, "error_tolerance", sc.error_tolerance, "simulation");
  }

  if (j.contains("torus")) {
    const auto& t = j.at("torus");
    reject_unknown_keys(t, {"resolution", "tol", "max_iter", "step", "horizon", "force", "surface_edge", "tracking",
                            "burn_in"},
                        "torus");
    auto& so = sc.torus.solve;
    so.resolution = count_or(t, "resolution", so.resolution, "torus");
    so.tol = number_or(t, "tol", so.tol, "torus");
    so.max_iter = count_or(t, "max_iter", so.max_iter, "torus");
    so.torus.step = number_or(t, "step", so.torus.step, "torus");
    so.torus.horizon = number_or(t, "horizon", so.torus.horizon, "torus");
    so.force = t.value("force", false);
    sc.torus.burn_in = count_or(t, "burn_in", sc.torus.burn_in, "torus");
    if (t.contains("surface_edge")) sc.torus.surface_edge = edge_from_labels(t.at("surface_edge"), n, "torus.surface_edge");
    if (t.contains("tracking")) {
      const auto& tr = t.at("tracking");
      reject_unknown_keys(tr, {"phi", "t_end", "step"}, "torus.tracking");
      sc.torus.tracking_phi = number_list(need(tr, "phi", "torus.tracking"), "torus.tracking.phi");
      sc.torus.tracking_t_end = number_or(tr, "t_end", sc.torus.tracking_t_end, "torus.tracking");
      sc.torus.tracking_step = number_or(tr, "step", sc.torus.tracking_step, "torus.tracking");
    }
  }

  if (j.contains("design")) {
    const auto& d = j.at("design");
    reject_unknown_keys(d, {"max_edits", "max_candidates"}, "design");
    sc.design.max_edits = count_or(d, "max_edits", sc.design.max_edits, "design");
    sc.design.max_candidates = count_or(d, "max_candidates", sc.design.max_candidates, "design");
  }

  if (j.contains("two_osc")) {
    const auto& t = j.at("two_osc");
    reject_unknown_keys(t, {"w1", "w2", "k", "theta1", "theta2", "t_end", "step"}, "two_osc");
    auto& o = sc.two_osc;
    o.w1 = number_or(t, "w1", o.w1, "two_osc");
    o.w2 = number_or(t, "w2", o.w2, "two_osc");
    o.k = number_or(t, "k", o.k, "two_osc");
    o.theta1 = number_or(t, "theta1", o.theta1, "two_osc");
    o.theta2 = number_or(t, "theta2", o.theta2, "two_osc");
    o.t_end = number_or(t, "t_end", o.t_end, "two_osc");
    o.step = number_or(t, "step", o.step, "two_osc");
  }

  if (j.contains("switch")) {
    const auto& s = j.at("switch");
    reject_unknown_keys(s, {"t_switch", "perturbation", "network"}, "switch");
    sc.t_switch = number(need(s, "t_switch", "switch"), "switch.t_switch");
    if (s.contains("network") == s.contains("perturbation"))
      throw InvalidInput("switch needs exactly one of 'network' or 'perturbation'");
    if (s.contains("network")) {
      sc.network_after = network_from_json(s.at("network")).network;
    } else {
      sc.network_after = apply_perturbation(sc.network, perturbation_from_json(s.at("perturbation"), n));
    }
  }

  if (j.contains("expect")) sc.expect = expectations_from_json(j.at("expect"));
  if (j.contains("expect_exit")) sc.expect_exit = j.at("expect_exit").get<int>();
  if (j.contains("reference")) sc.reference = references_from_json(j.at("reference"));
  if (j.contains("output_dir")) {
    std::filesystem::path p = j.at("output_dir").get<std::string>();
    sc.output_dir = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json_file(path), path.parent_path());
}

NetworkState make_initial_state(const Scenario& sc) {
  const std::size_t n = sc.network.size();
  const auto& ic = sc.initial;
  std::mt19937_64 rng(sc.seed);
  NetworkState s(n);
  for (std::size_t i = 0; i < n; ++i)
    s.phases[i] = wrap_phase(ic.random_phases ? draw(rng, ic.phase_lo, ic.phase_hi) : ic.phases[i]);
  const auto& c = ic.couplings;
  for (const Edge& e : sc.network.edges()) {
    double& k = s.k(e.receiver, e.source);
    switch (c.kind) {
      case CouplingInit::Kind::zero: k = 0.0; break;
      case CouplingInit::Kind::random: k = draw(rng, c.lo, c.hi); break;
      case CouplingInit::Kind::split: k = sc.partition.same_cluster(e.receiver, e.source) ? c.intra : c.inter; break;
      case CouplingInit::Kind::matrix: k = c.matrix[e.receiver][e.source]; break;
    }
  }
  return s;
}

bool ScenarioResult::expectations_met() const {
  return error.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.passed; });
}

ScenarioResult run_scenario(const Scenario& input, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  ScenarioResult res;
  res.name = input.name;
  try {
    Scenario sc = input;
    if (opts.seed) sc.seed = *opts.seed;
    const Task task = opts.task ? *opts.task : sc.task ? *sc.task : throw InvalidInput("scenario names no task");
    res.task = task;
    if (task != Task::two_osc && sc.network.size() == 0) throw InvalidInput("task needs a network");
    const std::filesystem::path out =
        opts.out ? *opts.out : !sc.output_dir.empty() ? sc.output_dir : std::filesystem::path("out") / sc.name;
    std::filesystem::create_directories(out);

    res.report["name"] = sc.name;
    res.report["task"] = task_name(task);
    res.report["seed"] = sc.seed;
    if (task != Task::two_osc) {
      res.report["network"] = network_to_json(sc.network, sc.partition);
      res.report["plasticity"] = plasticity_to_json(sc.plasticity);
    }

    switch (task) {
      case Task::check: run_check(sc, res); break;
      case Task::simulate: run_simulate(sc, out, res); break;
      case Task::switch_topology: run_switch(sc, out, res); break;
      case Task::torus: run_torus(sc, out, opts.force, res); break;
      case Task::design: run_design(sc, out, res); break;
      case Task::two_osc: run_two_osc(sc, res); break;
    }

    json metrics = json::object();
    for (const auto& [k, v] : res.metrics) metrics[k] = number_or_null(v);
    res.report["metrics"] = metrics;

    json refs = json::array();
    for (const auto& r : sc.reference) {
      json entry{{"metric", r.metric}, {"reference", r.value}};
      const auto it = res.metrics.find(r.metric);
      if (it != res.metrics.end()) {
        entry["computed"] = number_or_null(it->second);
        entry["difference"] = number_or_null(it->second - r.value);
      }
      if (!r.note.empty()) entry["note"] = r.note;
      refs.push_back(entry);
    }
    if (!refs.empty()) res.report["reference_comparison"] = refs;

    json checks = json::array();
    for (const auto& e : sc.expect) {
      CheckOutcome c{e, std::numeric_limits<double>::quiet_NaN(), false};
      const auto it = res.metrics.find(e.metric);
      if (it != res.metrics.end()) {
        c.actual = it->second;
        c.passed = !std::isnan(c.actual);
        if (e.value) c.passed = c.passed && std::abs(c.actual - *e.value) <= *e.tol;
        if (e.max) c.passed = c.passed && c.actual < *e.max;
        if (e.min) c.passed = c.passed && c.actual > *e.min;
      }
      json cj{{"metric", e.metric}, {"actual", number_or_null(c.actual)}, {"passed", c.passed}};
      if (e.value) {
        cj["value"] = *e.value;
        cj["tol"] = *e.tol;
      }
      if (e.max) cj["max"] = *e.max;
      if (e.min) cj["min"] = *e.min;
      checks.push_back(cj);
      res.checks.push_back(std::move(c));
    }
    res.report["expectations"] = checks;
    res.report["exit_code"] = res.exit_code == 0 && !res.expectations_met() ? 3 : res.exit_code;
    write_json_file(out / "report.json", res.report);
    if (res.exit_code == 0 && !res.expectations_met()) res.exit_code = 3;
  } catch (const std::exception& e) {
    res.exit_code = 1;
    res.error = e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

ScenarioResult run_scenario_file(const std::filesystem::path& path, const RunOptions& opts) {
  try {
    return run_scenario(load_scenario(path), opts);
  } catch (const std::exception& e) {
    ScenarioResult res;
    res.name = path.stem().string();
    res.exit_code = 1;
    res.error = e.what();
    return res;
  }
}

int reproduce_all(const std::filesystem::path& dir, const std::optional<std::string>& only,
                  const std::filesystem::path& out_root, std::ostream& os) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    os << "error: scenario directory '" << dir.string() << "' does not exist\n";
    return 1;
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  struct Job {
    std::filesystem::path path;
    std::optional<Scenario> scenario;
    std::string load_error;
  };
  std::vector<Job> jobs;
  for (const auto& f : files) {
    Job job{f, std::nullopt, {}};
    try {
      job.scenario = load_scenario(f);
    } catch (const std::exception& e) {
      job.load_error = e.what();
    }
    const std::string name = job.scenario ? job.scenario->name : f.stem().string();
    if (only && name != *only && f.stem().string() != *only) continue;
    jobs.push_back(std::move(job));
  }
  if (jobs.empty()) {
    os << "error: no scenarios" << (only ? " named '" + *only + "'" : std::string()) << " in '" << dir.string()
       << "'\n";
    return 1;
  }

  std::vector<ScenarioResult> results(jobs.size());
  parallel_for(jobs.size(), default_thread_count(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      if (!jobs[k].scenario) {
        results[k].name = jobs[k].path.stem().string();
        results[k].exit_code = 1;
        results[k].error = jobs[k].load_error;
        continue;
      }
      RunOptions ro;
      ro.out = out_root / jobs[k].scenario->name;
      results[k] = run_scenario(*jobs[k].scenario, ro);
    }
  });

  std::size_t passed = 0;
  os << std::left << std::setw(30) << "scenario" << std::setw(10) << "task" << std::setw(6) << "exit"
     << std::setw(10) << "checks" << std::setw(10) << "seconds" << "result\n";
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const auto& r = results[k];
    const int expected = jobs[k].scenario ? jobs[k].scenario->expect_exit : 0;
    const bool ok = r.error.empty() && r.expectations_met() && r.exit_code == expected;
    std::size_t good = 0;
    for (const auto& c : r.checks) good += c.passed;
    os << std::left << std::setw(30) << r.name << std::setw(10) << task_name(r.task) << std::setw(6) << r.exit_code
       << std::setw(10) << (std::to_string(good) + "/" + std::to_string(r.checks.size())) << std::setw(10)
       << fixed(r.seconds, 3) << (ok ? "PASS" : "FAIL") << "\n";
    if (!r.error.empty()) os << "    error: " << r.error << "\n";
    for (const auto& c : r.checks)
      if (!c.passed) os << "    " << c.expectation.metric << " = " << fixed(c.actual, 10) << " outside expectation\n";
    passed += ok;
  }
  os << passed << "/" << jobs.size() << " scenarios passed\n";
  return passed == jobs.size() ? 0 : 1;
}

}  // namespace kuramoto
