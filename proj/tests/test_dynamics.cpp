#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "kuramoto/dynamics.hpp"
#include "kuramoto/rk4.hpp"

using namespace kuramoto;
using doctest::Approx;

namespace {

NetworkState random_state(const OscillatorNetwork& net, std::mt19937_64& rng, double k_range) {
  std::uniform_real_distribution<double> phase(0.0, two_pi), k(-k_range, k_range);
  NetworkState s(net.size());
  for (auto& p : s.phases) p = phase(rng);
  for (const Edge& e : net.edges()) s.k(e.receiver, e.source) = k(rng);
  return s;
}

double state_distance(const NetworkState& a, const NetworkState& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.phases.size(); ++i) d = std::max(d, std::abs(wrap_error(a.phases[i] - b.phases[i])));
  for (std::size_t i = 0; i < a.couplings.size(); ++i) d = std::max(d, std::abs(a.couplings[i] - b.couplings[i]));
  return d;
}

}  // namespace

TEST_CASE("phase wrapping conventions") {
  CHECK(wrap_phase(-0.1) == Approx(two_pi - 0.1));
  CHECK(wrap_phase(two_pi) == 0.0);
  CHECK(wrap_phase(7.0) == Approx(7.0 - two_pi));
  CHECK(wrap_error(std::numbers::pi) == std::numbers::pi);
  CHECK(wrap_error(-std::numbers::pi) == std::numbers::pi);
  CHECK(wrap_error(3 * std::numbers::pi / 2) == Approx(-std::numbers::pi / 2));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> x(-100, 100);
  for (int k = 0; k < 1000; ++k) {
    const double v = x(rng);
    const double p = wrap_phase(v), e = wrap_error(v);
    CHECK(p >= 0.0);
    CHECK(p < two_pi);
    CHECK(e > -std::numbers::pi);
    CHECK(e <= std::numbers::pi);
    CHECK(std::abs(std::sin(p) - std::sin(v)) < 1e-12);
    CHECK(std::abs(std::cos(e) - std::cos(v)) < 1e-12);
  }
}

TEST_CASE("right-hand side of the adaptive network") {
  const OscillatorNetwork two({{0, 1}, {1, 0}}, {1.0, 1.0});
  const auto pp = PlasticityParams::make(1.0, 0.01);
  NetworkState s(2);
  auto d = rhs_full(two, pp, s);
  CHECK(d.phases == std::vector<double>{1.0, 1.0});
  CHECK(d.k(0, 1) == Approx(0.01));
  CHECK(d.k(1, 0) == Approx(0.01));
  CHECK(d.k(0, 0) == 0.0);

  s.phases = {0.0, std::numbers::pi};
  s.k(0, 1) = s.k(1, 0) = 0.01;
  d = rhs_full(two, pp, s);
  CHECK(d.k(0, 1) == Approx(-0.02));
  CHECK(d.k(1, 0) == Approx(-0.02));

  const OscillatorNetwork one({{0}}, {0.7});
  CHECK(rhs_full(one, pp, NetworkState(1)).phases[0] == 0.7);
}

TEST_CASE("non-edge couplings are ignored") {
  const auto net = fixtures::seven_node();
  std::mt19937_64 rng(2);
  auto s = random_state(net, rng, 0.5);
  const auto d1 = rhs_full(net, PlasticityParams::make(0.2, 0.001), s);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j)
      if (!net.has_edge(i, j)) s.k(i, j) = 123.0;
  const auto d2 = rhs_full(net, PlasticityParams::make(0.2, 0.001), s);
  CHECK(d1.phases == d2.phases);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j)
      if (net.has_edge(i, j)) CHECK(d1.k(i, j) == d2.k(i, j));
}

TEST_CASE("RK4 converges at fourth order") {
  const auto net = fixtures::five_node();
  const auto pp = PlasticityParams::make(1.0, 0.5);
  std::mt19937_64 rng(4);
  const auto s0 = random_state(net, rng, 1.0);
  auto run = [&](double h) {
    return simulate(net, pp, s0, {2.0, h, 1}, std::nullopt).states.back();
  };
  const auto reference = run(0.0025 / 4);
  const double e1 = state_distance(run(0.1), reference);
  const double e2 = state_distance(run(0.05), reference);
  const double order_ratio = e1 / e2;
  CHECK(order_ratio > 8.0);
  CHECK(order_ratio < 32.0);

  // Scalar check on y' = y over a negative step as used by the torus integration.
  Rk4Workspace ws(1);
  std::vector<double> y{1.0};
  for (int k = 0; k < 10; ++k) ws.step(y, -0.1 * k, -0.1, [](double, std::span<const double> v, std::span<double> dv) { dv[0] = v[0]; });
  CHECK(y[0] == Approx(std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("simulation records uniform samples with wrapped phases and errors") {
  const auto net = fixtures::five_node();
  std::mt19937_64 rng(6);
  const auto traj = simulate(net, fixtures::five_node_plasticity(), random_state(net, rng, 0.015), {10.0, 0.01, 10},
                             fixtures::five_node_partition());
  REQUIRE(traj.times.size() == 101);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    CHECK(traj.times[k] == Approx(0.1 * static_cast<double>(k)));
    for (double p : traj.states[k].phases) CHECK((p >= 0.0 && p < two_pi));
    REQUIRE(traj.errors[k].size() == 3);
    for (double e : traj.errors[k]) CHECK((e > -std::numbers::pi && e <= std::numbers::pi));
  }
  CHECK(traj.error_nodes == std::vector<std::size_t>{1, 2, 4});
  CHECK_THROWS_AS(simulate(net, fixtures::five_node_plasticity(), NetworkState(5), {1.0, -0.1, 1}), InvalidInput);
}

TEST_CASE("common phase shift commutes with the flow") {
  const auto net = fixtures::seven_node_fixed();
  const auto pp = fixtures::seven_node_plasticity();
  std::mt19937_64 rng(8);
  auto s = random_state(net, rng, 0.015);
  const auto part = fixtures::seven_node_partition();
  const SimulationOptions opts{50.0, 0.01, 100};
  const auto a = simulate(net, pp, s, opts, part);
  const double shift = 1.234;
  for (auto& p : s.phases) p = wrap_phase(p + shift);
  const auto b = simulate(net, pp, s, opts, part);
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    for (std::size_t i = 0; i < 7; ++i)
      CHECK(std::abs(wrap_error(b.states[k].phases[i] - a.states[k].phases[i] - shift)) < 1e-9);
    for (std::size_t e = 0; e < a.errors[k].size(); ++e) CHECK(b.errors[k][e] == Approx(a.errors[k][e]).epsilon(1e-9));
    for (std::size_t c = 0; c < a.states[k].couplings.size(); ++c)
      CHECK(std::abs(b.states[k].couplings[c] - a.states[k].couplings[c]) < 1e-10);
  }
}

TEST_CASE("couplings stay inside the plasticity envelope") {
  const auto net = fixtures::five_node();
  const auto pp = PlasticityParams::make(0.5, 0.05);
  std::mt19937_64 rng(10);
  const auto s = random_state(net, rng, 0.3);
  const auto traj = simulate(net, pp, s, {100.0, 0.01, 10});
  for (const auto& st : traj.states)
    for (const Edge& e : net.edges())
      CHECK(std::abs(st.k(e.receiver, e.source)) <= pp.mu * pp.delta / pp.gamma + std::abs(s.k(e.receiver, e.source)) + 1e-12);
}

TEST_CASE("the synchronous cluster state is invariant") {
  const OscillatorNetwork net({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, {1.0, 1.0, 1.0});
  const auto pp = PlasticityParams::make(1.0, 0.01);
  NetworkState s(3);
  s.phases = {0.4, 0.4, 0.4};
  for (const Edge& e : net.edges()) s.k(e.receiver, e.source) = 0.01;
  const auto traj = simulate(net, pp, s, {100.0, 0.01, 100}, ClusterPartition(3, {{0, 1}, {2}}));
  for (std::size_t k = 0; k < traj.times.size(); ++k) CHECK(traj.max_abs_error(k) == 0.0);
}

TEST_CASE("switching to the same network reproduces a plain run") {
  const auto net = fixtures::seven_node();
  const auto pp = fixtures::seven_node_plasticity();
  const auto part = fixtures::seven_node_partition();
  std::mt19937_64 rng(12);
  const auto s = random_state(net, rng, 0.015);
  const SimulationOptions opts{20.0, 0.01, 10};
  const auto plain = simulate(net, pp, s, opts, part);
  const auto same = switch_topology_scenario(net, net, pp, s, 10.0, opts, part);
  const auto late = switch_topology_scenario(net, fixtures::seven_node_fixed(), pp, s, 30.0, opts, part);
  for (std::size_t k = 0; k < plain.times.size(); ++k) {
    CHECK(plain.states[k].phases == same.states[k].phases);
    CHECK(plain.states[k].couplings == same.states[k].couplings);
    CHECK(plain.states[k].phases == late.states[k].phases);
  }
}

TEST_CASE("switching drops removed edges and starts added edges from zero") {
  const OscillatorNetwork before({{0, 1}, {0, 0}}, {1.0, 1.2});
  const OscillatorNetwork after({{0, 0}, {1, 0}}, {1.0, 1.2});
  NetworkState s(2);
  s.k(0, 1) = 0.5;
  const auto traj = switch_topology_scenario(before, after, PlasticityParams::make(1.0, 0.0), s, 1.0, {2.0, 0.01, 1});
  const auto& at_switch = traj.states[100];
  CHECK(at_switch.k(1, 0) == 0.0);
  CHECK(traj.states.back().k(0, 1) == at_switch.k(0, 1));
  // After the switch node 1 runs freely at its natural frequency.
  const double advance = wrap_error(traj.states.back().phases[0] - at_switch.phases[0]);
  CHECK(advance == Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(switch_topology_scenario(before, OscillatorNetwork({{0}}, {1.0}), PlasticityParams::make(1.0, 0.0), s,
                                           1.0, {2.0, 0.01, 1}),
                  InvalidInput);
}

TEST_CASE("error metrics") {
  Trajectory empty;
  CHECK_THROWS_AS(error_metrics(empty), InvalidInput);
  const auto net = fixtures::five_node();
  std::mt19937_64 rng(14);
  const auto no_part = simulate(net, fixtures::five_node_plasticity(), random_state(net, rng, 0.01), {1.0, 0.01, 10});
  CHECK_THROWS_AS(error_metrics(no_part), InvalidInput);
}

TEST_CASE("reduced system bounds on the five-node example") {
  const auto net = fixtures::five_node();
  const auto part = fixtures::five_node_partition();
  const ReducedModel model(net, part, fixtures::five_node_plasticity());
  REQUIRE(model.inter_edge_count() == 12);
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> phase(0.0, two_pi);
  for (int k = 0; k < 500; ++k) {
    const std::vector<double> phi{phase(rng), phase(rng)};
    const auto b = model.b_matrix(phi);
    double entry_sum = 0.0, frob = 0.0;
    for (double v : b) {
      entry_sum += std::abs(v);
      frob += v * v;
    }
    CHECK(entry_sum <= 5.0 + 1e-12);
    CHECK(std::sqrt(frob) <= 5.0);
    double g = 0.0;
    for (double v : model.g_vector(phi)) g += v * v;
    CHECK(std::sqrt(g) <= std::sqrt(12.0) + 1e-12);
  }
  const auto g = model.g_vector({0.0, std::numbers::pi});
  for (double v : g) CHECK(v == Approx(-1.0));
  CHECK_THROWS_AS(ReducedModel(fixtures::seven_node(), fixtures::seven_node_partition(), fixtures::seven_node_plasticity()),
                  InvalidInput);
}

TEST_CASE("reduced dynamics match the full network on the cluster manifold") {
  const auto net = fixtures::five_node();
  const auto part = fixtures::five_node_partition();
  const auto pp = fixtures::five_node_plasticity();
  const ReducedModel model(net, part, pp);
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u(-0.02, 0.02);
  ReducedState rs{{0.7, 2.9}, std::vector<double>(model.inter_edge_count())};
  for (auto& k : rs.k_inter) k = u(rng);
  NetworkState s(5);
  for (std::size_t i = 0; i < 5; ++i) s.phases[i] = rs.phi[part.cluster_of(i)];
  for (std::size_t e = 0; e < model.inter_edge_count(); ++e) s.k(model.edges()[e].receiver, model.edges()[e].source) = rs.k_inter[e];
  const auto full = rhs_full(net, pp, s);
  const auto red = rhs_reduced(net, part, pp, rs);
  for (std::size_t c = 0; c < 2; ++c) CHECK(red.phi[c] == Approx(full.phases[part.representative(c)]).epsilon(1e-14));
  for (std::size_t e = 0; e < model.inter_edge_count(); ++e)
    CHECK(red.k_inter[e] == Approx(full.k(model.edges()[e].receiver, model.edges()[e].source)).epsilon(1e-14));
}

TEST_CASE("anti-phase constant torus for equal representative frequencies") {
  const double w = 0.8;
  std::vector<std::vector<int>> a(5, std::vector<int>(5, 1));
  for (int i = 0; i < 5; ++i) a[i][i] = 0;
  const OscillatorNetwork net(a, std::vector<double>(5, w));
  const auto part = fixtures::five_node_partition();
  const auto pp = PlasticityParams::make(1.0, 0.01);
  for (double phi1 : {0.0, 1.1, 4.0}) {
    NetworkState s(5);
    for (std::size_t i = 0; i < 5; ++i) s.phases[i] = wrap_phase(phi1 + (part.cluster_of(i) == 0 ? 0.0 : std::numbers::pi));
    for (const Edge& e : net.edges()) s.k(e.receiver, e.source) = part.same_cluster(e.receiver, e.source) ? 0.01 : -0.01;
    const auto d = rhs_full(net, pp, s);
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(d.phases[i] - d.phases[part.representative(part.cluster_of(i))]) <= 1e-14);
    CHECK(std::abs(d.phases[3] - d.phases[0]) <= 1e-14);
    for (const Edge& e : net.edges()) CHECK(std::abs(d.k(e.receiver, e.source)) <= 1e-14);
  }
}

TEST_CASE("two statically coupled oscillators") {
  const auto same = two_oscillator_static_analysis(1.3, 1.3, 0.4);
  CHECK(same.d == 0.0);
  CHECK(same.mean_freq == 1.3);
  CHECK(same.synchronizable);
  const auto a = two_oscillator_static_analysis(0.9, 1.1, 1.0);
  CHECK(a.d == Approx(0.100167421).epsilon(1e-9));
  CHECK(a.mean_freq == Approx(1.0));
  CHECK_FALSE(two_oscillator_static_analysis(0.0, 3.0, 1.0).synchronizable);
  CHECK(std::isnan(two_oscillator_static_analysis(0.0, 3.0, 1.0).d));
  CHECK_THROWS_AS(two_oscillator_static_analysis(1.0, 1.0, 0.0), InvalidInput);

  const auto run = simulate_two_oscillator_static(0.9, 1.1, 1.0, 0.0, 2.0, 200.0, 0.01);
  CHECK(std::abs(run.final_phase_difference - a.d) < 1e-4);
  CHECK(std::abs(run.measured_frequency - a.mean_freq) < 1e-5);
}
