"""Almost resolvable cycle systems of tensor products of complete graphs.

Build explicit decompositions of (K_u x K_g)(lambda) into partial
C_k-factors, or verify a claimed one independently of how it was built.
"""

from .arcs import (ArcsUnavailable, Feasibility, Params, PrimeSplit,
                   build_arcs, check_feasibility, expected_counts)
from .graphs import (ConstructionBugError, Cycle, Decomposition,
                     DegenerateCycleError, Edge, ExceptionalCase, MultiGraph,
                     ParameterError, PartialFactor, UnsupportedBlockError,
                     Vertex, tensor_complete)
from .verify import BruteForceOutcome, Result, brute_force_arcs, verify_arcs

__all__ = [
    "ArcsUnavailable", "BruteForceOutcome", "ConstructionBugError", "Cycle",
    "Decomposition", "DegenerateCycleError", "Edge", "ExceptionalCase",
    "Feasibility", "MultiGraph", "ParameterError", "Params", "PartialFactor",
    "PrimeSplit", "Result", "UnsupportedBlockError", "Vertex", "build_arcs",
    "brute_force_arcs", "check_feasibility", "expected_counts",
    "tensor_complete", "verify_arcs",
]

__version__ = "0.1.0"
