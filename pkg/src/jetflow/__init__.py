"""Symbolic verification of approximate symmetries, conservation laws and
bi-Hamiltonian structures of perturbed evolution equations."""

from .errors import (ClosureError, Diverged, JetflowError, ModelError,
                     NotExact, NotInImage, NotVariational, OrderMismatch,
                     ParseError, ResourceLimit, UnknownName, Unsupported)
from .ring import EpsPoly
from .jets import (Context, DiffPoly, EvolutionSystem, Functional, JetVar,
                   Monomial, diff_partial, dt_total, dx_total, dx_total_n,
                   euler, euler1, integrate_x, prolong_apply)
from .operators import (PseudoDiffOp, adjoint, apply_op, commutator, compose,
                        frechet, helmholtz_selfadjoint, op_time_derivative,
                        reconstruct_density)
from .hamiltonian import (MultiVector, flow_derivative_identity,
                          ham_vector_field, in_involution, is_distinguished,
                          is_skew_adjoint, pair_check, poisson_bracket)
from .engine import (CheckReport, HierarchyResult, check_conservation,
                     check_recursion_operator, check_symmetry,
                     generate_hierarchy, noether_inverse,
                     solve_operator_equation)
from .dsl import ModelIR, parse_model, print_model
from .fixtures import fixture_names, load_fixture
from .numeric import (GridSpec, Trajectory, integrate_pde, max_drift,
                      monitor_functional, sech_squared_profile)
from .printing import format_eps_poly, format_operator, format_poly, format_value

__version__ = "0.1.0"

__all__ = [
    "ClosureError", "Diverged", "JetflowError", "ModelError", "NotExact",
    "NotInImage", "NotVariational", "OrderMismatch", "ParseError",
    "ResourceLimit", "UnknownName", "Unsupported",
    "EpsPoly",
    "Context", "DiffPoly", "EvolutionSystem", "Functional", "JetVar",
    "Monomial", "diff_partial", "dt_total", "dx_total", "dx_total_n",
    "euler", "euler1", "integrate_x", "prolong_apply",
    "PseudoDiffOp", "adjoint", "apply_op", "commutator", "compose", "frechet",
    "helmholtz_selfadjoint", "op_time_derivative", "reconstruct_density",
    "MultiVector", "flow_derivative_identity", "ham_vector_field",
    "in_involution", "is_distinguished", "is_skew_adjoint", "pair_check",
    "poisson_bracket",
    "CheckReport", "HierarchyResult", "check_conservation",
    "check_recursion_operator", "check_symmetry", "generate_hierarchy",
    "noether_inverse", "solve_operator_equation",
    "ModelIR", "parse_model", "print_model",
    "fixture_names", "load_fixture",
    "GridSpec", "Trajectory", "integrate_pde", "max_drift",
    "monitor_functional", "sech_squared_profile",
    "format_eps_poly", "format_operator", "format_poly", "format_value",
    "__version__",
]
