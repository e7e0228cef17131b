#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "kuramoto/conditions.hpp"
#include "kuramoto/topology.hpp"

using namespace kuramoto;

using fixtures::brute_force_min_edits;

TEST_CASE("target counts drive minimal flips") {
  const auto net = fixtures::seven_node();
  const auto part = fixtures::seven_node_partition();
  const auto p = min_edits_for_targets(net, part, {{0, 1}, {1, 0}});
  REQUIRE(p.edit_count() == 1);
  CHECK(p.at(6, 0) == -1);

  const auto fixed = fixtures::seven_node_fixed();
  CHECK(min_edits_for_targets(fixed, part, {{0, 1}, {1, 0}}).edit_count() == 0);

  const auto five = fixtures::five_node();
  const auto five_part = fixtures::five_node_partition();
  const auto cut = min_edits_for_targets(five, five_part, {{0, 0}, {3, 0}});
  CHECK(cut.edit_count() == 6);
  for (const auto& entry : cut.nonzero()) {
    CHECK(entry.value == -1);
    CHECK(five_part.cluster_of(entry.edge.receiver) == 0);
    CHECK(five_part.cluster_of(entry.edge.source) == 1);
  }
  CHECK_THROWS_AS(min_edits_for_targets(five, five_part, {{0, 3}, {3, 0}}), InvalidInput);
}

TEST_CASE("seven-node design removes one incoming link of node 7") {
  const auto result =
      design_topology(fixtures::seven_node(), fixtures::seven_node_partition(), fixtures::seven_node_plasticity());
  REQUIRE(result.feasible);
  CHECK(result.edits == 1);
  const auto nz = result.perturbation.nonzero();
  REQUIRE(nz.size() == 1);
  CHECK(nz[0].edge.receiver == 6);
  CHECK(nz[0].value == -1);
  CHECK(result.report.overall);
  CHECK(std::abs(result.report.ratio_a3 - 0.9615) < 5e-4);
  CHECK(result.report.c_tilde_out == -1);
}

TEST_CASE("design keeps a network that already qualifies") {
  const auto result =
      design_topology(fixtures::five_node(), fixtures::five_node_partition(), fixtures::five_node_plasticity());
  CHECK(result.feasible);
  CHECK(result.edits == 0);
}

TEST_CASE("design needs equal frequencies within clusters") {
  const OscillatorNetwork net({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}, {1.0, 2.0, 1.0});
  CHECK_THROWS_AS(design_topology(net, ClusterPartition(3, {{0, 1}, {2}}), PlasticityParams::make(1.0, 0.01)),
                  InvalidInput);
}

TEST_CASE("stronger plasticity is infeasible at small budgets") {
  const auto pp = PlasticityParams::make(0.2, 0.01);
  const auto result = design_topology(fixtures::seven_node(), fixtures::seven_node_partition(), pp);
  CHECK_FALSE(result.feasible);
  CHECK_FALSE(brute_force_min_edits(fixtures::seven_node(), fixtures::seven_node_partition(), pp, 3).has_value());
}

TEST_CASE("design agrees with brute force on small random instances") {
  std::mt19937_64 rng(21);
  const auto pp = PlasticityParams::make(1.0, 0.004);
  int feasible = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + rng() % 3;
    const auto inst = fixtures::random_instance(rng, n, 2, 0.35);
    DesignOptions opts;
    opts.max_edits = 2;
    const auto result = design_topology(inst.net, inst.part, pp, opts);
    const auto brute = brute_force_min_edits(inst.net, inst.part, pp, 2);
    CHECK(result.feasible == brute.has_value());
    if (brute) {
      ++feasible;
      CHECK(result.edits == *brute);
    }
    for (const auto& entry : result.perturbation.nonzero())
      CHECK_FALSE(inst.part.same_cluster(entry.edge.receiver, entry.edge.source));
    if (result.feasible) {
      CHECK(result.report.overall);
      const auto plain = check_theorem1(apply_perturbation(inst.net, result.perturbation), inst.part, pp);
      CHECK(plain.overall);
    }
  }
  CHECK(feasible > 5);
}
