"""Entanglement topography of large-scale quantum networks."""
from .analytics import Mode, TaskThresholds, mvr_radius, radii_report, scaling_targets, tvr_radius
from .network import ParamDistribution, QuantumNetwork, Topology, assign_edge_states
from .paths import edge_disjoint_paths, pareto_paths, shortest_graph_path
from .photonic import InternetModel, qkd_min_probability, viability_verdict
from .quantum_core import BellDiagonalState, IsotropicState, deutsch_purify, pump_sequence, swap
from .simulation import SimConfig, run_campaign

__version__ = "0.1.0"
