#include "kuramoto/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace kuramoto {

PerturbationMatrix min_edits_for_targets(const OscillatorNetwork& net, const ClusterPartition& part,
                                         const TargetMatrix& targets) {
  check_partition_matches(net, part);
  const std::size_t m = part.cluster_count();
  if (targets.size() != m) throw InvalidInput("target matrix must be m x m");
  for (std::size_t s = 0; s < m; ++s) {
    if (targets[s].size() != m) throw InvalidInput("target matrix must be m x m");
    for (std::size_t r = 0; r < m; ++r) {
      if (r != s && targets[s][r] > part.cluster(r).size()) {
        throw InvalidInput("target " + std::to_string(targets[s][r]) + " for clusters (" + std::to_string(s + 1) +
                           "," + std::to_string(r + 1) + ") exceeds the size of the source cluster");
      }
    }
  }

  PerturbationMatrix tilde_a(net.size());
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t r = 0; r < m; ++r) {
      if (r == s) continue;
      const auto& sources = part.cluster(r);  // sorted ascending
      for (std::size_t i : part.cluster(s)) {
        std::size_t count = 0;
        for (std::size_t j : sources) count += net.a(i, j);
        const std::size_t target = targets[s][r];
        for (std::size_t j : sources) {
          if (count == target) break;
          if (count > target && net.has_edge(i, j)) {
            tilde_a.set(i, j, -1);
            --count;
          } else if (count < target && !net.has_edge(i, j)) {
            tilde_a.set(i, j, +1);
            ++count;
          }
        }
      }
    }
  }
  return tilde_a;
}

std::size_t pair_edit_cost(const CardinalityReport& card, const ClusterPartition& part, std::size_t s, std::size_t r,
                           std::size_t target) {
  std::size_t cost = 0;
  for (std::size_t i : part.cluster(s)) {
    const std::size_t c = card.per_node_incoming[i][r];
    cost += c > target ? c - target : target - c;
  }
  return cost;
}

namespace {

struct Candidate {
  std::size_t cost = 0;
  std::size_t c_max = 0;
  std::size_t sum = 0;
  std::vector<std::size_t> flat;  // off-diagonal targets in row-major pair order
};

}  // namespace

DesignResult design_topology(const OscillatorNetwork& net, const ClusterPartition& part, const PlasticityParams& pp,
                             const DesignOptions& opts) {
  const auto a1 = check_a1(net, part);
  if (!a1.holds) throw InvalidInput("natural frequencies differ within a cluster; topology edits cannot fix that");

  const auto card = compute_cardinalities(net, part);
  const std::size_t m = part.cluster_count();

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> upper;
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t r = 0; r < m; ++r) {
      if (r == s) continue;
      std::size_t current_max = 0;
      for (std::size_t i : part.cluster(s)) current_max = std::max(current_max, card.per_node_incoming[i][r]);
      pairs.emplace_back(s, r);
      upper.push_back(std::min(part.cluster(r).size(), current_max + 1));
    }
  }

  double space = 1.0;
  for (std::size_t u : upper) space *= static_cast<double>(u + 1);
  if (space > static_cast<double>(opts.max_candidates))
    throw SearchSpaceExhausted("topology search space has " + std::to_string(static_cast<long long>(space)) +
                               " target matrices, above the limit of " + std::to_string(opts.max_candidates));

  // Per-pair cost tables so each candidate's cost is a sum of lookups.
  std::vector<std::vector<std::size_t>> cost_table(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p)
    for (std::size_t t = 0; t <= upper[p]; ++t)
      cost_table[p].push_back(pair_edit_cost(card, part, pairs[p].first, pairs[p].second, t));

  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(space));
  std::vector<std::size_t> digits(pairs.size(), 0);
  while (true) {
    Candidate c;
    c.flat = digits;
    std::vector<std::size_t> row_sum(m, 0);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      c.cost += cost_table[p][digits[p]];
      row_sum[pairs[p].first] += digits[p];
      c.sum += digits[p];
    }
    c.c_max = *std::max_element(row_sum.begin(), row_sum.end());
    if (c.cost <= opts.max_edits) candidates.push_back(std::move(c));

    std::size_t p = 0;
    while (p < digits.size() && digits[p] == upper[p]) digits[p++] = 0;
    if (p == digits.size()) break;
    ++digits[p];
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.cost, a.c_max, a.sum, a.flat) < std::tie(b.cost, b.c_max, b.sum, b.flat);
  });

  auto to_matrix = [&](const std::vector<std::size_t>& flat) {
    TargetMatrix t(m, std::vector<std::size_t>(m, 0));
    for (std::size_t p = 0; p < pairs.size(); ++p) t[pairs[p].first][pairs[p].second] = flat[p];
    return t;
  };

  DesignResult best;
  bool have_best = false;
  double best_ratio = std::numeric_limits<double>::infinity();
  std::size_t checked = 0;
  for (const Candidate& c : candidates) {
    ++checked;
    DesignResult r;
    r.targets = to_matrix(c.flat);
    r.perturbation = min_edits_for_targets(net, part, r.targets);
    r.edits = r.perturbation.edit_count();
    r.report = check_corollary(net, r.perturbation, part, pp);
    r.feasible = r.report.overall;
    if (r.feasible) {
      r.candidates_checked = checked;
      return r;
    }
    const double ratio = r.report.lhs_a3 > 0 ? r.report.ratio_a3 : std::numeric_limits<double>::infinity();
    if (!have_best || ratio < best_ratio) {
      best = std::move(r);
      best_ratio = ratio;
      have_best = true;
    }
  }

  if (!have_best) {
    best.perturbation = PerturbationMatrix(net.size());
    best.targets = card.c_sr;
    best.report = check_theorem1(net, part, pp);
  }
  best.feasible = false;
  best.candidates_checked = checked;
  return best;
}

}  // namespace kuramoto
