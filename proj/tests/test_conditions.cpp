#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "kuramoto/conditions.hpp"

using namespace kuramoto;
using doctest::Approx;

TEST_CASE("learning rules and their C1 bound") {
  const auto h = LearningRule::hebbian();
  CHECK(h.value(0.3) == doctest::Approx(std::cos(0.3)));
  CHECK(h.derivative(0.3) == doctest::Approx(-std::sin(0.3)));
  CHECK(h.c1_norm() == 1.0);
  const auto s = LearningRule::shifted_cosine(0.4);
  CHECK(s.value(1.0) == Approx(std::cos(1.4)));
  CHECK(s.value(1.0, std::sin(1.0), std::cos(1.0)) == Approx(std::cos(1.4)).epsilon(1e-14));

  std::vector<double> samples(64);
  for (std::size_t k = 0; k < samples.size(); ++k) samples[k] = 0.5 * std::sin(2.0 * std::numbers::pi * k / 64.0);
  const auto t = LearningRule::tabulated(samples);
  for (double x : {0.1, 1.3, 2.9, 5.5}) {
    CHECK(t.value(x) == Approx(0.5 * std::sin(x)).epsilon(1e-3));
    CHECK(t.value(x + 2 * std::numbers::pi) == Approx(t.value(x)).epsilon(1e-12));
  }
  CHECK(t.c1_norm() == Approx(0.5).epsilon(1e-3));
  CHECK_THROWS_AS(LearningRule::tabulated({1, 2, 3}), InvalidInput);

  CHECK(PlasticityParams::make(1.0, 0.01).delta == 1.0);
  CHECK(PlasticityParams::make(2.0, 0.01, t).delta == Approx(0.5).epsilon(1e-3));
  CHECK_THROWS_AS(PlasticityParams::make(0.0, 0.01), InvalidInput);
  CHECK_THROWS_AS(PlasticityParams::make(1.0, -0.01), InvalidInput);
}

TEST_CASE("five-node conditions follow the formula exactly") {
  const auto rep = check_theorem1(fixtures::five_node(), fixtures::five_node_partition(), fixtures::five_node_plasticity());
  const double w = std::sqrt(2.0) / 3.0;
  const double lhs = w - 0.03;
  CHECK(rep.lhs_a3 == Approx(lhs).epsilon(1e-15));
  CHECK(rep.lhs_a3 == Approx(0.441405).epsilon(1e-6));
  const double ratio = 4 * 0.01 * std::sqrt(12.0) * 5 * (0.5 + 0.03) / lhs;
  CHECK(rep.ratio_a3 == Approx(ratio).epsilon(1e-14));
  CHECK(rep.ratio_a3 == Approx(0.8319).epsilon(1e-3));
  CHECK(rep.w_min == Approx(w));
  CHECK(rep.w_max == 0.5);
  CHECK(rep.a1_holds);
  CHECK(rep.a2_holds);
  CHECK(rep.a3_holds);
  CHECK(rep.overall);
}

TEST_CASE("fixed seven-node conditions") {
  const auto rep =
      check_theorem1(fixtures::seven_node_fixed(), fixtures::seven_node_partition(), fixtures::seven_node_plasticity());
  CHECK(rep.lhs_a3 == Approx(0.495).epsilon(1e-15));
  CHECK(std::abs(rep.ratio_a3 - 0.9615) < 5e-4);
  CHECK(rep.overall);
  CHECK(contraction_ratio(fixtures::seven_node_fixed(), fixtures::seven_node_partition(),
                          fixtures::seven_node_plasticity()) == rep.ratio_a3);
}

TEST_CASE("original seven-node network: A2 fails and A3 is only diagnostic") {
  const auto rep = check_theorem1(fixtures::seven_node(), fixtures::seven_node_partition(), fixtures::seven_node_plasticity());
  CHECK_FALSE(rep.a2_holds);
  CHECK_FALSE(rep.a3_applicable);
  CHECK_FALSE(rep.a3_holds);
  CHECK_FALSE(rep.overall);
  CHECK(rep.cardinalities.c_sr[1][0] == 2);
  CHECK_THROWS(contraction_ratio(fixtures::seven_node(), fixtures::seven_node_partition(), fixtures::seven_node_plasticity()));
}

TEST_CASE("zero plasticity collapses the third condition") {
  const auto pp = PlasticityParams::make(1.0, 0.0);
  const auto rep = check_theorem1(fixtures::five_node(), fixtures::five_node_partition(), pp);
  CHECK(rep.lhs_a3 == rep.w_min);
  CHECK(rep.ratio_a3 == 0.0);
  CHECK(contraction_ratio(fixtures::five_node(), fixtures::five_node_partition(), pp) == 0.0);
}

TEST_CASE("non-positive left-hand side gives an infinite ratio") {
  const auto pp = PlasticityParams::make(0.01, 0.01);
  const auto rep = check_theorem1(fixtures::five_node(), fixtures::five_node_partition(), pp);
  CHECK(rep.lhs_a3 <= 0);
  CHECK(std::isinf(rep.ratio_a3));
  CHECK_FALSE(rep.a3_holds);
  CHECK_THROWS(contraction_ratio(fixtures::five_node(), fixtures::five_node_partition(), pp));
}

TEST_CASE("singleton clusters without edges reduce to a positive frequency") {
  const OscillatorNetwork net({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}, {1.0, -2.0, 0.5});
  const auto rep = check_theorem1(net, ClusterPartition(3, {{0}, {1}, {2}}), PlasticityParams::make(1.0, 0.3));
  CHECK(rep.cardinalities.c_out == 0);
  CHECK(rep.ratio_a3 == 0.0);
  CHECK(rep.lhs_a3 == 0.5);
  CHECK(rep.overall);
  const OscillatorNetwork zero({{0, 0}, {0, 0}}, {0.0, 1.0});
  CHECK_FALSE(check_theorem1(zero, ClusterPartition(2, {{0}, {1}}), PlasticityParams::make(1.0, 0.3)).a3_holds);
}

TEST_CASE("ratio grows with mu and delta and shrinks with gamma") {
  const auto net = fixtures::five_node();
  const auto part = fixtures::five_node_partition();
  const auto card = compute_cardinalities(net, part);
  auto ratio = [&](double gamma, double mu, double delta) {
    PlasticityParams pp = PlasticityParams::make(gamma, mu);
    pp.delta = delta;
    return evaluate_a3(0.5, std::sqrt(2.0) / 3.0, pp, card.c_max, card.c_out, card.sum_c_sr);
  };
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const double gamma = 0.5 + 2 * u(rng), mu = 0.001 + 0.02 * u(rng), delta = 0.5 + u(rng);
    const auto base = ratio(gamma, mu, delta);
    if (base.lhs <= 0) continue;
    const double f = 1.0 + 0.5 * u(rng);
    const auto more_mu = ratio(gamma, mu * f, delta);
    const auto more_delta = ratio(gamma, mu, delta * f);
    const auto more_gamma = ratio(gamma * f, mu, delta);
    if (more_mu.lhs > 0) CHECK(more_mu.ratio > base.ratio);
    if (more_delta.lhs > 0) CHECK(more_delta.ratio > base.ratio);
    CHECK(more_gamma.ratio < base.ratio);
  }
}

TEST_CASE("perturbed-network check equals the plain check on A + perturbation") {
  std::mt19937_64 rng(5);
  const auto pp = PlasticityParams::make(1.0, 0.002);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng() % 6;
    const auto inst = fixtures::random_instance(rng, n, 2 + rng() % 2, 0.4);
    PerturbationMatrix p(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && rng() % 4 == 0) p.set(i, j, inst.net.has_edge(i, j) ? -1 : +1);
    const auto cor = check_corollary(inst.net, p, inst.part, pp);
    const auto plain = check_theorem1(apply_perturbation(inst.net, p), inst.part, pp);
    CHECK(cor.overall == plain.overall);
    CHECK(cor.a2_holds == plain.a2_holds);
    CHECK(cor.a3_holds == plain.a3_holds);
    CHECK(cor.lhs_a3 == plain.lhs_a3);
    if (std::isfinite(plain.ratio_a3)) {
      CHECK(cor.ratio_a3 == Approx(plain.ratio_a3).epsilon(1e-14));
    } else {
      CHECK(std::isinf(cor.ratio_a3));
    }
    CHECK(cor.c_out_effective == plain.cardinalities.c_out);
    CHECK(static_cast<long>(compute_cardinalities(inst.net, inst.part).c_out) + cor.c_tilde_out ==
          static_cast<long>(plain.cardinalities.c_out));
  }
}

TEST_CASE("signed inter-cluster sum of a perturbation") {
  const auto net = fixtures::seven_node();
  const auto part = fixtures::seven_node_partition();
  PerturbationMatrix p(7);
  CHECK(c_tilde_out(net, part, p) == 0);
  p.set(6, 0, -1);
  CHECK(c_tilde_out(net, part, p) == -1);
  const auto rep = check_corollary(net, p, part, fixtures::seven_node_plasticity());
  CHECK(rep.overall);
  CHECK(rep.c_out_effective == 7);
  CHECK(std::abs(rep.ratio_a3 - 0.9615) < 5e-4);

  PerturbationMatrix mixed(7);
  mixed.set(0, 3, +1);  // add 4 -> 1
  mixed.set(3, 0, +1);  // add 1 -> 4
  mixed.set(6, 2, -1);  // remove 3 -> 7
  mixed.set(0, 2, +1);  // intra, ignored
  CHECK(c_tilde_out(net, part, mixed) == 1);
  CHECK_FALSE(check_corollary(net, PerturbationMatrix(7), part, fixtures::seven_node_plasticity()).a2_holds);
}
