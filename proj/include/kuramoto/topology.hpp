#pragma once

#include <vector>

#include "kuramoto/conditions.hpp"
#include "kuramoto/network.hpp"

namespace kuramoto {

using TargetMatrix = std::vector<std::vector<std::size_t>>;

/// Fewest flips making every node of P_s receive exactly targets[s][r] edges
/// from P_r (s != r). Surplus edges are removed and missing ones added in
/// ascending source index; intra-cluster edges are never touched.
PerturbationMatrix min_edits_for_targets(const OscillatorNetwork& net, const ClusterPartition& part,
                                         const TargetMatrix& targets);

/// Σ_{i in P_s} |count_i(r) − target| for one ordered cluster pair.
std::size_t pair_edit_cost(const CardinalityReport& card, const ClusterPartition& part, std::size_t s, std::size_t r,
                           std::size_t target);

struct DesignResult {
  PerturbationMatrix perturbation;
  std::size_t edits = 0;
  TargetMatrix targets;
  ConditionReport report;
  bool feasible = false;
  std::size_t candidates_checked = 0;
};

struct DesignOptions {
  std::size_t max_edits = 3;
  /// Upper bound on enumerated target matrices before giving up.
  std::size_t max_candidates = 1'000'000;
};

class SearchSpaceExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Enumerates target matrices with entries in [0, min(|P_r|, current max + 1)]
/// ordered by total edit cost, then c̃_max, then Σ c̃_sr, and returns the first
/// one whose perturbation passes the perturbed-network conditions within the
/// edit budget. If none does, the result is infeasible and carries the
/// in-budget candidate with the smallest ratio_a3 (or the unperturbed report).
DesignResult design_topology(const OscillatorNetwork& net, const ClusterPartition& part, const PlasticityParams& pp,
                             const DesignOptions& opts = {});

}  // namespace kuramoto
