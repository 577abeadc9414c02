"""Degree reduction of factoring Hamiltonians by deductions, without auxiliary qubits."""

from .deduction import Deduction, make_deduction, simple_judgments, zero_product
from .encoder import BinaryEquation, FactorizationInstance, balanced_splits, encode
from .pbf import Polynomial, degree_profile, spectrum
from .reduc import ReductionConfig, apply_deductions, deduc_reduc, reduce_pipeline
from .search import bfs_plausible, extract_patterns
from .verify import compare_ground_states, compare_reduced, decode_factors, naive_substitute

__all__ = [
    "BinaryEquation", "Deduction", "FactorizationInstance", "Polynomial", "ReductionConfig",
    "apply_deductions", "balanced_splits", "bfs_plausible", "compare_ground_states",
    "compare_reduced", "decode_factors", "deduc_reduc", "degree_profile", "encode",
    "extract_patterns", "make_deduction", "naive_substitute", "reduce_pipeline",
    "simple_judgments", "spectrum", "zero_product",
]
