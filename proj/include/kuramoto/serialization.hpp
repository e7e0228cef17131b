#pragma once

#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "kuramoto/conditions.hpp"
#include "kuramoto/dynamics.hpp"
#include "kuramoto/topology.hpp"
#include "kuramoto/torus.hpp"

namespace kuramoto {

using json = nlohmann::ordered_json;

/// Throws InvalidInput naming the first key of `obj` outside `allowed`.
void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& context);

/// Network file: {"adjacency": rows, "frequencies": [...], "partition": [[1-based nodes]...],
/// "representatives": [...]} where partition and representatives are optional.
struct NetworkSpec {
  OscillatorNetwork network;
  std::optional<ClusterPartition> partition;
};

NetworkSpec network_from_json(const json& j);
json network_to_json(const OscillatorNetwork& net, const std::optional<ClusterPartition>& part = std::nullopt);
NetworkSpec load_network_file(const std::filesystem::path& path);
void save_network_file(const std::filesystem::path& path, const OscillatorNetwork& net,
                       const std::optional<ClusterPartition>& part = std::nullopt);

ClusterPartition partition_from_json(const json& clusters, const json* representatives, std::size_t n_nodes);

/// {"gamma": γ, "mu": μ, "rule": "hebbian" | {"kind": ..., "offset"|"samples": ...}}
PlasticityParams plasticity_from_json(const json& j);
json plasticity_to_json(const PlasticityParams& pp);

/// Sparse list [[i, j, ±1], ...] with 1-based nodes.
PerturbationMatrix perturbation_from_json(const json& j, std::size_t n);
json perturbation_to_json(const PerturbationMatrix& p);

json edge_to_json(const Edge& e);
json cardinalities_to_json(const CardinalityReport& card);
json condition_report_to_json(const ConditionReport& rep);
json design_result_to_json(const DesignResult& result);
json iteration_log_to_json(const IterationLog& log);
json metrics_to_json(const ErrorMetrics& metrics);

/// Metadata plus one row of decimal values per grid node.
json torus_to_json(const TorusFunction& u, const PlasticityParams& pp);
TorusFunction torus_from_json(const json& j);

/// Header: t, theta_1..theta_N, e_<node>..., k_<i>_<j>... (1-based labels).
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_surface_csv(std::ostream& os, const std::vector<SurfacePoint>& rows);

/// Non-finite doubles become null.
json number_or_null(double v);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace kuramoto
