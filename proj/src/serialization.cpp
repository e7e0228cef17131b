#include "kuramoto/serialization.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace kuramoto {

namespace {

std::size_t node_from_label(const json& v, std::size_t n, const std::string& what) {
  if (!v.is_number_integer()) throw InvalidInput(what + " must be an integer node label");
  const auto label = v.get<long long>();
  if (label < 1 || static_cast<std::size_t>(label) > n)
    throw InvalidInput(what + " " + std::to_string(label) + " is outside 1.." + std::to_string(n));
  return static_cast<std::size_t>(label - 1);
}

const json& require(const json& obj, const char* key, const std::string& context) {
  if (!obj.is_object() || !obj.contains(key)) throw InvalidInput(context + ": missing key '" + key + "'");
  return obj.at(key);
}

void write_double(std::ostream& os, double v) {
  if (std::isfinite(v)) {
    std::ostringstream s;
    s << std::setprecision(17) << v;
    os << s.str();
  } else {
    os << "nan";
  }
}

}  // namespace

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& context) {
  if (!obj.is_object()) throw InvalidInput(context + " must be an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || item.key() == a;
    if (!known) throw InvalidInput(context + ": unknown key '" + item.key() + "'");
  }
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

ClusterPartition partition_from_json(const json& clusters, const json* representatives, std::size_t n_nodes) {
  if (!clusters.is_array()) throw InvalidInput("partition must be a list of clusters");
  std::vector<std::vector<std::size_t>> parts;
  for (const auto& c : clusters) {
    if (!c.is_array()) throw InvalidInput("each cluster must be a list of node labels");
    std::vector<std::size_t> nodes;
    for (const auto& v : c) nodes.push_back(node_from_label(v, n_nodes, "partition node"));
    parts.push_back(std::move(nodes));
  }
  if (!representatives) return ClusterPartition(n_nodes, std::move(parts));
  if (!representatives->is_array()) throw InvalidInput("representatives must be a list of node labels");
  std::vector<std::size_t> reps;
  for (const auto& v : *representatives) reps.push_back(node_from_label(v, n_nodes, "representative"));
  return ClusterPartition(n_nodes, std::move(parts), std::move(reps));
}

NetworkSpec network_from_json(const json& j) {
  reject_unknown_keys(j, {"adjacency", "frequencies", "partition", "representatives"}, "network");
  const auto& adj = require(j, "adjacency", "network");
  if (!adj.is_array()) throw InvalidInput("adjacency must be a list of rows");
  std::vector<std::vector<int>> rows;
  for (const auto& row : adj) {
    if (!row.is_array()) throw InvalidInput("adjacency rows must be lists");
    std::vector<int> r;
    for (const auto& v : row) {
      if (!v.is_number_integer()) throw InvalidInput("adjacency entries must be integers 0 or 1");
      r.push_back(v.get<int>());
    }
    rows.push_back(std::move(r));
  }
  const auto& freq = require(j, "frequencies", "network");
  if (!freq.is_array()) throw InvalidInput("frequencies must be a list");
  std::vector<double> w;
  for (const auto& v : freq) {
    if (!v.is_number()) throw InvalidInput("frequencies must be numbers");
    w.push_back(v.get<double>());
  }
  NetworkSpec spec{OscillatorNetwork(std::move(rows), std::move(w)), std::nullopt};
  if (j.contains("partition")) {
    const json* reps = j.contains("representatives") ? &j.at("representatives") : nullptr;
    spec.partition = partition_from_json(j.at("partition"), reps, spec.network.size());
  } else if (j.contains("representatives")) {
    throw InvalidInput("representatives given without a partition");
  }
  return spec;
}

json network_to_json(const OscillatorNetwork& net, const std::optional<ClusterPartition>& part) {
  json j;
  j["adjacency"] = net.adjacency_rows();
  j["frequencies"] = std::vector<double>(net.frequencies().begin(), net.frequencies().end());
  if (part) {
    json clusters = json::array();
    for (const auto& c : part->clusters()) {
      json nodes = json::array();
      for (std::size_t node : c) nodes.push_back(node + 1);
      clusters.push_back(nodes);
    }
    j["partition"] = clusters;
    json reps = json::array();
    for (std::size_t r : part->representatives()) reps.push_back(r + 1);
    j["representatives"] = reps;
  }
  return j;
}

NetworkSpec load_network_file(const std::filesystem::path& path) { return network_from_json(read_json_file(path)); }

void save_network_file(const std::filesystem::path& path, const OscillatorNetwork& net,
                       const std::optional<ClusterPartition>& part) {
  write_json_file(path, network_to_json(net, part));
}

PlasticityParams plasticity_from_json(const json& j) {
  reject_unknown_keys(j, {"gamma", "mu", "rule", "delta"}, "plasticity");
  const double gamma = require(j, "gamma", "plasticity").get<double>();
  const double mu = require(j, "mu", "plasticity").get<double>();
  LearningRule rule = LearningRule::hebbian();
  if (j.contains("rule")) {
    const auto& r = j.at("rule");
    if (r.is_string()) {
      if (r.get<std::string>() != "hebbian") throw InvalidInput("unknown learning rule '" + r.get<std::string>() + "'");
    } else {
      reject_unknown_keys(r, {"kind", "offset", "samples"}, "rule");
      const auto kind = require(r, "kind", "rule").get<std::string>();
      if (kind == "hebbian") {
      } else if (kind == "shifted-cosine") {
        rule = LearningRule::shifted_cosine(require(r, "offset", "rule").get<double>());
      } else if (kind == "tabulated") {
        rule = LearningRule::tabulated(require(r, "samples", "rule").get<std::vector<double>>());
      } else {
        throw InvalidInput("unknown learning rule kind '" + kind + "'");
      }
    }
  }
  auto pp = PlasticityParams::make(gamma, mu, std::move(rule));
  // delta is derived from the rule; a stored value must agree with it.
  if (j.contains("delta") && std::abs(j.at("delta").get<double>() - pp.delta) > 1e-9 * std::max(1.0, pp.delta))
    throw InvalidInput("plasticity: delta does not match the learning rule");
  return pp;
}

json plasticity_to_json(const PlasticityParams& pp) {
  json rule;
  rule["kind"] = pp.rule.name();
  if (pp.rule.kind() == LearningRule::Kind::shifted_cosine) rule["offset"] = pp.rule.offset();
  if (pp.rule.kind() == LearningRule::Kind::tabulated) rule["samples"] = pp.rule.samples();
  return json{{"gamma", pp.gamma}, {"mu", pp.mu}, {"rule", rule}, {"delta", pp.delta}};
}

PerturbationMatrix perturbation_from_json(const json& j, std::size_t n) {
  if (!j.is_array()) throw InvalidInput("perturbation must be a list of [i, j, value] triples");
  PerturbationMatrix p(n);
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 3) throw InvalidInput("perturbation entries must be [i, j, value]");
    const std::size_t i = node_from_label(entry[0], n, "perturbation row");
    const std::size_t k = node_from_label(entry[1], n, "perturbation column");
    if (!entry[2].is_number_integer()) throw InvalidInput("perturbation value must be -1 or +1");
    p.set(i, k, entry[2].get<int>());
  }
  return p;
}

json perturbation_to_json(const PerturbationMatrix& p) {
  json out = json::array();
  for (const auto& e : p.nonzero()) out.push_back(json::array({e.edge.receiver + 1, e.edge.source + 1, e.value}));
  return out;
}

json edge_to_json(const Edge& e) { return json::array({e.receiver + 1, e.source + 1}); }

json cardinalities_to_json(const CardinalityReport& card) {
  json j;
  j["c_in"] = card.c_in;
  j["c_out"] = card.c_out;
  j["c_sr"] = card.c_sr;
  j["c_max"] = card.c_max;
  j["sum_c_sr"] = card.sum_c_sr;
  j["per_node_incoming"] = card.per_node_incoming;
  j["a2_holds"] = card.a2_holds;
  json violations = json::array();
  for (const auto& v : card.violations) {
    json counts = json::array();
    for (const auto& [node, count] : v.counts) counts.push_back(json::array({node + 1, count}));
    violations.push_back({{"cluster", v.cluster + 1}, {"from_cluster", v.from_cluster + 1}, {"counts", counts}});
  }
  j["violations"] = violations;
  return j;
}

json condition_report_to_json(const ConditionReport& rep) {
  json j;
  j["overall"] = rep.overall;
  j["a1_holds"] = rep.a1_holds;
  j["a2_holds"] = rep.a2_holds;
  j["a3_holds"] = rep.a3_holds;
  j["a3_applicable"] = rep.a3_applicable;
  j["w_min"] = rep.w_min;
  j["w_max"] = rep.w_max;
  j["plasticity_shift"] = rep.plasticity_shift;
  j["lhs_a3"] = rep.lhs_a3;
  j["ratio_a3"] = number_or_null(rep.ratio_a3);
  j["c_out_effective"] = rep.c_out_effective;
  j["c_tilde_out"] = rep.c_tilde_out;
  json a1 = json::array();
  for (const auto& v : rep.a1.violations)
    a1.push_back({{"cluster", v.cluster + 1}, {"nodes", json::array({v.first + 1, v.second + 1})}});
  j["a1_violations"] = a1;
  j["cardinalities"] = cardinalities_to_json(rep.cardinalities);
  return j;
}

json design_result_to_json(const DesignResult& result) {
  json j;
  j["feasible"] = result.feasible;
  j["edits"] = result.edits;
  j["perturbation"] = perturbation_to_json(result.perturbation);
  j["targets"] = result.targets;
  j["candidates_checked"] = result.candidates_checked;
  j["report"] = condition_report_to_json(result.report);
  return j;
}

json iteration_log_to_json(const IterationLog& log) {
  json diffs = json::array(), norms = json::array(), ratios = json::array();
  for (double z : log.differences) diffs.push_back(z);
  for (double s : log.sup_norms) norms.push_back(s);
  for (double r : log.empirical_ratios()) ratios.push_back(r);
  return json{{"converged", log.converged},
              {"iterations_used", log.iterations_used},
              {"theoretical_ratio", number_or_null(log.theoretical_ratio)},
              {"differences", diffs},
              {"sup_norms", norms},
              {"empirical_ratios", ratios}};
}

json metrics_to_json(const ErrorMetrics& metrics) {
  json limits = json::array();
  for (const auto& l : metrics.intra_coupling_limits) limits.push_back({{"edge", edge_to_json(l.edge)}, {"mean", l.mean}});
  return json{{"sup_final_error", metrics.sup_final_error},
              {"time_to_tolerance", metrics.time_to_tolerance ? json(*metrics.time_to_tolerance) : json(nullptr)},
              {"intra_coupling_limits", limits}};
}

json torus_to_json(const TorusFunction& u, const PlasticityParams& pp) {
  json edges = json::array();
  for (const Edge& e : u.edge_order()) edges.push_back(edge_to_json(e));
  json values = json::array();
  for (std::size_t f = 0; f < u.node_count(); ++f) {
    const auto v = u.node(f);
    values.push_back(std::vector<double>(v.begin(), v.end()));
  }
  return json{{"m", u.dimension()},
              {"resolution", u.resolution()},
              {"edge_order", edges},
              {"parameters", plasticity_to_json(pp)},
              {"values", values}};
}

TorusFunction torus_from_json(const json& j) {
  reject_unknown_keys(j, {"m", "resolution", "edge_order", "parameters", "values"}, "torus");
  const auto m = require(j, "m", "torus").get<std::size_t>();
  const auto res = require(j, "resolution", "torus").get<std::size_t>();
  std::vector<Edge> edges;
  for (const auto& e : require(j, "edge_order", "torus")) {
    const auto pair = e.get<std::vector<std::size_t>>();
    if (pair.size() != 2 || pair[0] == 0 || pair[1] == 0) throw InvalidInput("torus edge_order entries must be [i, j]");
    edges.push_back({pair[0] - 1, pair[1] - 1});
  }
  TorusFunction u(m, res, std::move(edges));
  const auto& values = require(j, "values", "torus");
  if (values.size() != u.node_count()) throw InvalidInput("torus values do not match the grid size");
  for (std::size_t f = 0; f < u.node_count(); ++f) {
    const auto row = values[f].get<std::vector<double>>();
    if (row.size() != u.components()) throw InvalidInput("torus value row has the wrong length");
    std::copy(row.begin(), row.end(), u.node(f).begin());
  }
  return u;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  if (traj.empty()) return;
  const std::size_t n = traj.states.front().size();
  os << "t";
  for (std::size_t i = 0; i < n; ++i) os << ",theta_" << i + 1;
  for (std::size_t node : traj.error_nodes) os << ",e_" << node + 1;
  for (const Edge& e : traj.edges) os << ",k_" << e.receiver + 1 << "_" << e.source + 1;
  os << "\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    write_double(os, traj.times[k]);
    for (double th : traj.states[k].phases) {
      os << ",";
      write_double(os, th);
    }
    if (!traj.errors.empty()) {
      for (double e : traj.errors[k]) {
        os << ",";
        write_double(os, e);
      }
    }
    for (const Edge& e : traj.edges) {
      os << ",";
      write_double(os, traj.states[k].k(e.receiver, e.source));
    }
    os << "\n";
  }
}

void write_surface_csv(std::ostream& os, const std::vector<SurfacePoint>& rows) {
  os << "phi_1,phi_2,u\n";
  for (const auto& r : rows) {
    write_double(os, r.phi1);
    os << ",";
    write_double(os, r.phi2);
    os << ",";
    write_double(os, r.value);
    os << "\n";
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace kuramoto
