#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "kuramoto/scenario.hpp"

namespace {

using namespace kuramoto;

struct Flags {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool force = false;
};

void print_result(const ScenarioResult& r) {
  if (!r.error.empty()) {
    std::cerr << "error: " << r.error << "\n";
    return;
  }
  std::cout << r.name << " [" << task_name(r.task) << "]\n";
  for (const auto& [k, v] : r.metrics) std::cout << "  " << k << " = " << v << "\n";
  for (const auto& c : r.checks)
    std::cout << "  expect " << c.expectation.metric << ": " << (c.passed ? "ok" : "FAILED") << "\n";
  std::cout << "  exit " << r.exit_code << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive Kuramoto networks: condition checks, simulation, invariant tori and topology design"};
  app.require_subcommand(1);
  Flags flags;
  std::optional<Task> forced_task;

  const std::pair<const char*, std::optional<Task>> commands[] = {
      {"check", Task::check},   {"simulate", Task::simulate},  {"torus", Task::torus},
      {"design", Task::design}, {"two-osc", Task::two_osc},    {"switch", Task::switch_topology},
      {"run", std::nullopt}};
  for (const auto& [name, task] : commands) {
    auto* sub = app.add_subcommand(name, task ? "Run the scenario as task '" + std::string(name) + "'"
                                              : std::string("Run the scenario's own task"));
    sub->add_option("--scenario", flags.scenario, "Scenario file")->required();
    sub->add_option("--out", flags.out, "Output directory");
    sub->add_option("--seed", flags.seed, "Override the scenario seed");
    sub->add_flag("--force", flags.force, "Iterate the torus even when the conditions fail");
    sub->callback([&forced_task, task = task] { forced_task = task; });
  }

  std::string scenarios_dir = KURAMOTO_SCENARIO_DIR;
  std::string only, out_root = "out";
  auto* all = app.add_subcommand("reproduce-all", "Run every bundled scenario and print a summary");
  all->add_option("--scenarios", scenarios_dir, "Directory of scenario files");
  all->add_option("--only", only, "Run a single scenario by name");
  all->add_option("--out", out_root, "Root output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (all->parsed()) {
    return reproduce_all(scenarios_dir, only.empty() ? std::nullopt : std::optional<std::string>(only), out_root,
                         std::cout);
  }

  RunOptions opts;
  opts.task = forced_task;
  if (!flags.out.empty()) opts.out = flags.out;
  opts.seed = flags.seed;
  opts.force = flags.force;
  const auto result = run_scenario_file(flags.scenario, opts);
  print_result(result);
  return result.exit_code;
}
