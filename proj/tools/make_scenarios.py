"""Regenerates the bundled scenario files in ../scenarios with full-precision constants."""
import json
import math
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "scenarios"
pi = math.pi


def r17(x):
    return float(f"{x:.17g}")


def all_to_all(n):
    return [[0 if i == j else 1 for j in range(n)] for i in range(n)]


W5 = math.sqrt(2.0) / 3.0
FIVE = {
    "adjacency": all_to_all(5),
    "frequencies": [0.5, 0.5, 0.5, r17(W5), r17(W5)],
    "partition": [[1, 2, 3], [4, 5]],
}
HEBB_5 = {"gamma": 1.0, "mu": 0.01, "rule": "hebbian"}
THETA5 = [r17(x) for x in (pi / 2, pi / 2 + 3 / 20, pi / 2 + 1 / 4, 0.0, -1 / 10)]

A7 = [
    [0, 1, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 0, 1],
    [1, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 1, 0, 0],
    [0, 1, 0, 0, 0, 1, 0],
    [0, 0, 1, 0, 0, 0, 1],
    [1, 0, 1, 1, 0, 0, 0],
]
A7_FIXED = [row[:] for row in A7]
A7_FIXED[6][0] = 0
W7 = r17(math.sqrt(4.0 / 5.0))
SEVEN = {"adjacency": A7, "frequencies": [0.5, 0.5, 0.5, W7, W7, W7, W7], "partition": [[1, 2, 3], [4, 5, 6, 7]]}
SEVEN_FIXED = dict(SEVEN, adjacency=A7_FIXED)
HEBB_7 = {"gamma": 0.2, "mu": 0.001, "rule": "hebbian"}
# Seventh phase continues the pattern pi/3 - k/10 of the other second-cluster nodes.
THETA7 = [r17(x) for x in (pi / 2, pi / 2 + 3 / 20, pi / 2 + 1 / 4, pi / 3 - 0.1, pi / 3 - 0.2, pi / 3 - 0.3, pi / 3 - 0.4)]
THETA7_SYNC = [r17(x) for x in (pi / 2,) * 3 + (pi / 3 - 0.1,) * 4]
REMOVE_71 = [[7, 1, -1]]

scenarios = {
    "five_node": {
        "description": "Five all-to-all nodes, two clusters: sufficient conditions",
        "task": "check",
        "network": FIVE,
        "plasticity": HEBB_5,
        "expect": {
            "lhs_a3": {"value": r17(W5 - 0.03), "tol": 1e-5},
            "ratio_a3": {"value": 0.8319, "tol": 1e-3},
            "c_in": {"value": 8},
            "c_out": {"value": 12},
            "c_1_2": {"value": 2},
            "c_2_1": {"value": 3},
            "c_max": {"value": 3},
            "sum_c_sr": {"value": 5},
            "overall": {"value": 1},
        },
        "reference": {
            "lhs_a3": {"value": 0.4614, "note": "published value; sqrt(2)/3 - 0.03 = 0.441405, so the published figure carries an arithmetic slip"},
            "ratio_a3": {"value": 0.796, "note": "published value; the formula with lhs_a3 = 0.441405 gives 0.8319 (both below 1, same verdict)"},
        },
    },
    "five_node_simulate": {
        "description": "Five-node network from spread phases and random couplings in [-0.015, 0.015]",
        "task": "simulate",
        "network": FIVE,
        "plasticity": HEBB_5,
        "seed": 20201,
        "initial": {"phases": THETA5, "couplings": {"random": [-0.015, 0.015]}},
        "simulation": {"t_end": 2000.0, "step": 0.01, "record_stride": 50},
        "expect": {
            "sup_final_error": {"max": 1e-3},
            "intra_coupling_final_deviation": {"max": 1e-4},
        },
    },
    "five_node_torus": {
        "description": "Successive approximations of the inter-cluster coupling torus",
        "task": "torus",
        "network": FIVE,
        "plasticity": HEBB_5,
        "torus": {
            "resolution": 64,
            "tol": 1e-10,
            "max_iter": 60,
            "step": 0.05,
            "surface_edge": [1, 5],
            "tracking": {"phi": [0.3, 1.7], "t_end": 200.0, "step": 0.01},
        },
        "expect": {
            "converged": {"value": 1},
            "iterations": {"max": 60.5},
            "empirical_over_theoretical": {"max": 1.1},
            "first_iterate_error": {"max": 1e-6},
            "sup_norm": {"max": 0.0346411},
            "invariance_residual": {"max": 1e-3},
            "tracking_over_residual": {"max": 10.0},
            "tracking_error_max": {"max": 1e-6},
            "intra_value": {"value": 0.01, "tol": 1e-15},
        },
    },
    "seven_node_original": {
        "description": "Seven-node network whose node 7 has two incoming inter-cluster links",
        "task": "check",
        "network": SEVEN,
        "plasticity": HEBB_7,
        "expect_exit": 2,
        "expect": {"a1_holds": {"value": 1}, "a2_holds": {"value": 0}, "overall": {"value": 0}},
    },
    "seven_node_original_simulate": {
        "description": "Seven-node original network from zero intra-cluster errors",
        "task": "simulate",
        "network": SEVEN,
        "plasticity": HEBB_7,
        "initial": {"phases": THETA7_SYNC, "couplings": {"intra": 1.0, "inter": 0.0}},
        "simulation": {"t_end": 1000.0, "step": 0.01, "record_stride": 50},
        "expect": {"max_error": {"min": 0.05}},
    },
    "seven_node_fixed": {
        "description": "Seven-node network after removing the edge 1 -> 7",
        "task": "check",
        "network": SEVEN_FIXED,
        "plasticity": HEBB_7,
        "expect": {
            "lhs_a3": {"value": 0.495, "tol": 1e-12},
            "ratio_a3": {"value": 0.9615, "tol": 5e-4},
            "c_out": {"value": 7},
            "c_1_2": {"value": 1},
            "c_2_1": {"value": 1},
            "c_max": {"value": 1},
            "overall": {"value": 1},
        },
    },
    "seven_node_corollary": {
        "description": "Original seven-node network checked under the perturbation removing 1 -> 7",
        "task": "check",
        "network": SEVEN,
        "plasticity": HEBB_7,
        "perturbation": REMOVE_71,
        "expect": {
            "c_tilde_out": {"value": -1},
            "c_out_effective": {"value": 7},
            "ratio_a3": {"value": 0.9615, "tol": 5e-4},
            "overall": {"value": 1},
        },
    },
    "seven_node_fixed_simulate": {
        "description": "Fixed seven-node network from spread phases and random couplings",
        "task": "simulate",
        "network": SEVEN_FIXED,
        "plasticity": HEBB_7,
        "seed": 20202,
        "initial": {"phases": THETA7, "couplings": {"random": [-0.015, 0.015]}},
        "simulation": {"t_end": 2000.0, "step": 0.01, "record_stride": 50},
        "expect": {"sup_final_error": {"max": 1e-3}, "intra_coupling_final_deviation": {"max": 1e-4}},
    },
    "seven_node_fixed_torus": {
        "description": "Inter-cluster coupling torus of the fixed seven-node network",
        "task": "torus",
        "network": SEVEN_FIXED,
        "plasticity": HEBB_7,
        "torus": {
            "resolution": 32,
            "tol": 1e-10,
            "max_iter": 100,
            "step": 0.05,
            "burn_in": 0,
            "surface_edge": [7, 3],
        },
        "expect": {
            "converged": {"value": 1},
            "empirical_over_theoretical": {"max": 1.1},
            "first_iterate_error": {"max": 1e-6},
            "intra_value": {"value": 0.005, "tol": 1e-15},
        },
    },
    "seven_node_switch": {
        "description": "Seven-node network switched from the original to the fixed topology at t = 500",
        "task": "switch",
        "network": SEVEN,
        "plasticity": HEBB_7,
        "seed": 20203,
        "initial": {"phases": THETA7, "couplings": {"random": [-0.015, 0.015]}},
        "simulation": {"t_end": 1500.0, "step": 0.01, "record_stride": 50},
        "switch": {"t_switch": 500.0, "perturbation": REMOVE_71},
        "expect": {"sup_final_error": {"max": 1e-3}, "max_error_before_switch": {"min": 0.05}},
    },
    "seven_node_design": {
        "description": "Minimal topology edit giving the seven-node network its two-cluster torus",
        "task": "design",
        "network": SEVEN,
        "plasticity": HEBB_7,
        "design": {"max_edits": 3},
        "expect": {
            "feasible": {"value": 1},
            "edits": {"value": 1},
            "c_tilde_out": {"value": -1},
            "ratio_a3": {"value": 0.9615, "tol": 5e-4},
        },
    },
    "two_osc": {
        "description": "Two statically coupled oscillators with different frequencies",
        "task": "two-osc",
        "two_osc": {"w1": 0.9, "w2": 1.1, "k": 1.0, "theta1": 0.0, "theta2": 1.0, "t_end": 200.0, "step": 0.01},
        "expect": {
            "synchronizable": {"value": 1},
            "d_analytic": {"value": r17(math.asin(0.1)), "tol": 1e-12},
            "d_error": {"max": 1e-4},
            "freq_error": {"max": 1e-5},
        },
    },
    "two_osc_identical": {
        "description": "Identical oscillators relax to phase synchrony",
        "task": "two-osc",
        "two_osc": {"w1": 1.0, "w2": 1.0, "k": 1.0, "theta1": 0.0, "theta2": 0.05, "t_end": 100.0, "step": 0.01},
        "expect": {"d_simulated": {"value": 0.0, "tol": 1e-10}, "freq_error": {"max": 1e-5}},
    },
    "two_osc_drift": {
        "description": "Frequency mismatch beyond twice the coupling: no locked state",
        "task": "two-osc",
        "two_osc": {"w1": 0.0, "w2": 3.0, "k": 1.0, "t_end": 50.0, "step": 0.01},
        "expect": {"synchronizable": {"value": 0}},
    },
}

OUT.mkdir(exist_ok=True)
for name, body in scenarios.items():
    doc = {"name": name, **body}
    (OUT / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")
print(f"wrote {len(scenarios)} scenarios to {OUT}")
