#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kuramoto/serialization.hpp"

namespace kuramoto {

enum class Task { check, simulate, torus, design, two_osc, switch_topology };

std::string task_name(Task t);
Task task_from_name(const std::string& name);

/// How initial couplings are drawn; entries are only set on edges.
struct CouplingInit {
  enum class Kind { zero, random, split, matrix };
  Kind kind = Kind::zero;
  double lo = 0.0, hi = 0.0;          // random
  double intra = 0.0, inter = 0.0;    // split
  std::vector<std::vector<double>> matrix;
};

struct InitialCondition {
  /// Explicit phases, or empty with `random_phases` set.
  std::vector<double> phases;
  bool random_phases = false;
  double phase_lo = 0.0, phase_hi = two_pi;
  CouplingInit couplings;
};

struct TorusTask {
  SolveOptions solve;
  /// 1-based edge whose surface is exported (m = 2 only).
  std::optional<Edge> surface_edge;
  /// Simulate from the manifold above `tracking_phi` for `tracking_t_end`.
  std::optional<std::vector<double>> tracking_phi;
  double tracking_t_end = 200.0;
  double tracking_step = 0.01;
  std::size_t burn_in = 3;
};

struct TwoOscTask {
  double w1 = 0.9, w2 = 1.1, k = 1.0;
  double theta1 = 0.0, theta2 = 0.0;
  double t_end = 200.0, step = 0.01;
};

/// One expectation on a named metric: |value − target| <= tol, or a bound.
struct Expectation {
  std::string metric;
  std::optional<double> value, tol, max, min;
};

/// A published reference value shown next to the computed one in the report.
struct ReferenceValue {
  std::string metric;
  double value = 0.0;
  std::string note;
};

struct Scenario {
  std::string name;
  std::optional<Task> task;
  OscillatorNetwork network;
  ClusterPartition partition;
  PlasticityParams plasticity;
  std::optional<PerturbationMatrix> perturbation;
  std::uint64_t seed = 0;
  InitialCondition initial;
  SimulationOptions simulation;
  double error_tolerance = 1e-3;
  TorusTask torus;
  DesignOptions design;
  TwoOscTask two_osc;
  /// Switch task: the network after the switch and the switch time.
  std::optional<OscillatorNetwork> network_after;
  double t_switch = 0.0;
  std::vector<Expectation> expect;
  int expect_exit = 0;
  std::vector<ReferenceValue> reference;
  std::filesystem::path output_dir;
};

/// Parses a scenario document; unknown keys are rejected at every level.
Scenario scenario_from_json(const json& j, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// State at t = 0 built from the scenario's initial block and seed.
NetworkState make_initial_state(const Scenario& sc);

struct RunOptions {
  std::optional<Task> task;  // overrides the scenario's task
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  bool force = false;
};

struct CheckOutcome {
  Expectation expectation;
  double actual = 0.0;
  bool passed = false;
};

struct ScenarioResult {
  std::string name;
  Task task = Task::check;
  /// 0 success, 2 conditions fail (check task), 3 expectations not met, 1 error.
  int exit_code = 0;
  std::map<std::string, double> metrics;
  std::vector<CheckOutcome> checks;
  json report;
  std::string error;
  double seconds = 0.0;

  bool expectations_met() const;
};

/// Runs the scenario and writes report.json plus task artifacts into the
/// output directory. Never throws; failures land in exit_code and error.
ScenarioResult run_scenario(const Scenario& sc, const RunOptions& opts = {});
ScenarioResult run_scenario_file(const std::filesystem::path& path, const RunOptions& opts = {});

/// Runs every *.json scenario in `dir` (or only `only`) concurrently and
/// prints a summary table. Returns 0 when every scenario meets its
/// expectations and expected exit code, 1 otherwise.
int reproduce_all(const std::filesystem::path& dir, const std::optional<std::string>& only,
                  const std::filesystem::path& out_root, std::ostream& os);

}  // namespace kuramoto
