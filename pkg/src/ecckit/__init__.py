"""Exact edge clique cover by combining ECC and VCC data reduction."""

from .graph import Graph, build_graph, degeneracy_order, is_clique
from .pipeline import EccResult, PipelineConfig, brute_force_ecc, solve_ecc, verify_ecc
from .vcc_solve import SolveBudget

__all__ = [
    "Graph", "build_graph", "degeneracy_order", "is_clique",
    "EccResult", "PipelineConfig", "brute_force_ecc", "solve_ecc", "verify_ecc",
    "SolveBudget",
]
