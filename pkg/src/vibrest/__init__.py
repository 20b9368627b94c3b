"""Trotter/QPE resource estimation for vibrational Hamiltonians."""

__version__ = "0.1.0"

from .commutator import ScalingResult, alpha_bounds, alpha_exact, crude_bound
from .costing import GateCounts, QpeConfig, ResourceReport, qpe_budget, trotter_steps
from .encoding import EncodingSpec, encode, locality_stats
from .errors import (
    DegenerateInputError,
    DimensionError,
    ResourceLimitError,
    ValidationError,
    VibrestError,
)
from .hamiltonian import (
    PesTerm,
    SecondQuantizedHamiltonian,
    SqTerm,
    VibProblem,
    build_second_quantized,
    count_terms,
)
from .layering import LayeringStats, depth_ratio, greedy_layers
from .pauli import PauliString, WeightedPauli, WeightedPauliHamiltonian, nested_commutator

__all__ = [
    "PauliString",
    "WeightedPauli",
    "WeightedPauliHamiltonian",
    "nested_commutator",
    "VibProblem",
    "PesTerm",
    "SqTerm",
    "SecondQuantizedHamiltonian",
    "build_second_quantized",
    "count_terms",
    "EncodingSpec",
    "encode",
    "locality_stats",
    "ScalingResult",
    "alpha_exact",
    "alpha_bounds",
    "crude_bound",
    "QpeConfig",
    "GateCounts",
    "ResourceReport",
    "qpe_budget",
    "trotter_steps",
    "LayeringStats",
    "depth_ratio",
    "greedy_layers",
    "VibrestError",
    "DimensionError",
    "ValidationError",
    "ResourceLimitError",
    "DegenerateInputError",
]
