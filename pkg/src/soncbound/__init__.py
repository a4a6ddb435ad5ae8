"""Certified lower bounds for box-constrained polynomial optimization.

The relaxation decomposes the problem Lagrangian into nonnegative
circuits over even exponents; constraints derived from the variable
bounds supply the cover vertices that make the decomposition exist for
arbitrary supports.
"""

from .barrier import SolveResult, SolverOptions, solve_relaxation
from .bnb import BnbResult, solve_bnb
from .certify import (
    Certificate,
    RepairFailure,
    repair_and_certify,
    sample_soundness_check,
    strict_gamma,
    strict_gamma_float,
)
from .covers import BoundConstraint, make_bound_constraints, select_bound_exponents
from .generator import generate_instance
from .geometry import (
    CandidateSet,
    Cover,
    CoverUnavailable,
    barycentric_coordinates,
    is_monomial_square,
    polytope_vertices,
)
from .pipeline import PipelineOptions, PipelineResult, solve_instance
from .poly import (
    InstanceFormatError,
    Polynomial,
    PopInstance,
    evaluate,
    parse_instance,
    scale_add,
    serialize_instance,
    total_degree,
)
from .relaxation import RelaxationModel, assemble_lagrangian, build_model

__version__ = "0.1.0"

__all__ = [
    "BnbResult",
    "BoundConstraint",
    "CandidateSet",
    "Certificate",
    "Cover",
    "CoverUnavailable",
    "InstanceFormatError",
    "PipelineOptions",
    "PipelineResult",
    "Polynomial",
    "PopInstance",
    "RelaxationModel",
    "RepairFailure",
    "SolveResult",
    "SolverOptions",
    "assemble_lagrangian",
    "barycentric_coordinates",
    "build_model",
    "evaluate",
    "generate_instance",
    "is_monomial_square",
    "make_bound_constraints",
    "parse_instance",
    "polytope_vertices",
    "repair_and_certify",
    "sample_soundness_check",
    "scale_add",
    "select_bound_exponents",
    "serialize_instance",
    "solve_bnb",
    "solve_instance",
    "solve_relaxation",
    "strict_gamma",
    "strict_gamma_float",
    "total_degree",
]
