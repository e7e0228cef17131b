#include "kuramoto/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kuramoto {

A3Values evaluate_a3(double w_min, double w_max, const PlasticityParams& pp, std::size_t c_max,
                     std::size_t c_out, std::size_t sum_c_sr) {
  A3Values v;
  v.shift = pp.mu * pp.delta * static_cast<double>(c_max) / pp.gamma;
  v.lhs = w_min - v.shift;
  const double prefactor =
      4.0 * pp.mu * pp.delta * std::sqrt(static_cast<double>(c_out)) * static_cast<double>(sum_c_sr) /
      (pp.gamma * pp.gamma);
  if (prefactor == 0.0) {
    v.ratio = 0.0;
  } else if (v.lhs <= 0.0) {
    v.ratio = std::numeric_limits<double>::infinity();
  } else {
    v.ratio = prefactor * (w_max + v.shift) / v.lhs;
  }
  return v;
}

namespace {

ConditionReport assemble(const OscillatorNetwork& net, const ClusterPartition& part, const PlasticityParams& pp,
                         CardinalityReport card, std::size_t c_out_effective, double a1_tolerance) {
  ConditionReport rep;
  rep.a1 = check_a1(net, part, a1_tolerance);
  rep.a1_holds = rep.a1.holds;
  rep.a2_holds = card.a2_holds;
  rep.a3_applicable = card.a2_holds;

  rep.w_min = std::numeric_limits<double>::infinity();
  rep.w_max = 0.0;
  for (double w : net.frequencies()) {
    rep.w_min = std::min(rep.w_min, std::abs(w));
    rep.w_max = std::max(rep.w_max, std::abs(w));
  }

  const A3Values a3 = evaluate_a3(rep.w_min, rep.w_max, pp, card.c_max, c_out_effective, card.sum_c_sr);
  rep.plasticity_shift = a3.shift;
  rep.lhs_a3 = a3.lhs;
  rep.ratio_a3 = a3.ratio;
  rep.a3_holds = rep.lhs_a3 > 0.0 && rep.ratio_a3 < 1.0;
  rep.c_out_effective = c_out_effective;
  rep.overall = rep.a1_holds && rep.a2_holds && rep.a3_holds;
  rep.cardinalities = std::move(card);
  return rep;
}

}  // namespace

ConditionReport check_theorem1(const OscillatorNetwork& net, const ClusterPartition& part,
                               const PlasticityParams& pp, double a1_tolerance) {
  auto card = compute_cardinalities(net, part);
  const std::size_t c_out = card.c_out;
  return assemble(net, part, pp, std::move(card), c_out, a1_tolerance);
}

long c_tilde_out(const OscillatorNetwork& net, const ClusterPartition& part, const PerturbationMatrix& tilde_a) {
  validate_perturbation(net, tilde_a);
  check_partition_matches(net, part);
  long sum = 0;
  for (std::size_t i = 0; i < net.size(); ++i)
    for (std::size_t j = 0; j < net.size(); ++j)
      if (!part.same_cluster(i, j)) sum += tilde_a.at(i, j);
  return sum;
}

ConditionReport check_corollary(const OscillatorNetwork& net, const PerturbationMatrix& tilde_a,
                                const ClusterPartition& part, const PlasticityParams& pp, double a1_tolerance) {
  const long tilde_out = c_tilde_out(net, part, tilde_a);
  const std::size_t base_out = compute_cardinalities(net, part).c_out;
  const auto perturbed = apply_perturbation(net, tilde_a);
  const long effective = static_cast<long>(base_out) + tilde_out;
  // A + Ã is a 0/1 matrix, so removals never exceed the existing inter-cluster edges.
  auto rep = assemble(perturbed, part, pp, compute_cardinalities(perturbed, part),
                      static_cast<std::size_t>(effective), a1_tolerance);
  rep.c_tilde_out = tilde_out;
  return rep;
}

double contraction_ratio(const OscillatorNetwork& net, const ClusterPartition& part, const PlasticityParams& pp) {
  const auto rep = check_theorem1(net, part, pp);
  if (!rep.a2_holds) throw InvalidInput("contraction ratio is undefined: incoming inter-cluster counts are not uniform");
  if (!(rep.lhs_a3 > 0.0))
    throw InvalidInput("contraction ratio is undefined: w_min - mu*delta*c_max/gamma = " + std::to_string(rep.lhs_a3) +
                       " is not positive");
  return rep.ratio_a3;
}

}  // namespace kuramoto
