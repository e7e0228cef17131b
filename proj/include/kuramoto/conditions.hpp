#pragma once

#include <optional>

#include "kuramoto/learning_rule.hpp"
#include "kuramoto/network.hpp"

namespace kuramoto {

/// Everything the sufficient conditions for an m-cluster invariant torus
/// depend on, with intermediate quantities kept for reporting.
///
///   lhs_a3   = w_min - μ δ c_max / γ
///   ratio_a3 = 4 μ δ sqrt(c_out) Σ c_sr (w_max + μ δ c_max / γ) / (γ² lhs_a3)
///
/// ratio_a3 is +inf when lhs_a3 <= 0 (the bound is meaningless there) and 0
/// whenever the prefactor vanishes (μ = 0 or no inter-cluster edges).
struct ConditionReport {
  bool a1_holds = false;
  bool a2_holds = false;
  bool a3_holds = false;
  /// False when A2 fails: c_sr is then a per-pair maximum used only for display.
  bool a3_applicable = false;
  bool overall = false;

  double w_min = 0.0;
  double w_max = 0.0;
  double plasticity_shift = 0.0;  // μ δ c_max / γ
  double lhs_a3 = 0.0;
  double ratio_a3 = 0.0;
  /// The c_out entering the square root (c_out + c̃_out for perturbed networks).
  std::size_t c_out_effective = 0;
  /// Signed inter-cluster sum of the perturbation; 0 for unperturbed checks.
  long c_tilde_out = 0;

  A1Result a1;
  CardinalityReport cardinalities;
};

ConditionReport check_theorem1(const OscillatorNetwork& net, const ClusterPartition& part,
                               const PlasticityParams& pp, double a1_tolerance = 0.0);

/// Evaluates the conditions for the network A + Ã with c_out + c̃_out in the
/// square root. Field-for-field identical to check_theorem1 on the perturbed
/// network except for c_tilde_out.
ConditionReport check_corollary(const OscillatorNetwork& net, const PerturbationMatrix& tilde_a,
                                const ClusterPartition& part, const PlasticityParams& pp,
                                double a1_tolerance = 0.0);

/// Signed sum of Ã over inter-cluster positions.
long c_tilde_out(const OscillatorNetwork& net, const ClusterPartition& part, const PerturbationMatrix& tilde_a);

/// Geometric contraction factor of the successive approximations of the
/// inter-cluster torus. Throws when A2 fails or lhs_a3 <= 0.
double contraction_ratio(const OscillatorNetwork& net, const ClusterPartition& part, const PlasticityParams& pp);

/// The A3 pair (lhs, ratio) from raw counts; shared by every caller.
struct A3Values {
  double shift = 0.0;
  double lhs = 0.0;
  double ratio = 0.0;
};
A3Values evaluate_a3(double w_min, double w_max, const PlasticityParams& pp, std::size_t c_max,
                     std::size_t c_out, std::size_t sum_c_sr);

}  // namespace kuramoto
