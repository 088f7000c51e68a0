"""Maximal lower bounds and minimal upper bounds in the Loewner order."""

from .errors import (
    DomainError,
    Infeasible,
    InputError,
    LoewnerError,
    NotContractive,
    NotMaximal,
    NotPositiveSemidefinite,
    NumericalError,
    ToleranceInconsistency,
)
from .mlbparam import Verdict, build_S, check_maximal, mlb, mub, opq_polar, phi, psi, recover_param
from .psdshort import (
    bridge_param,
    generalized_short,
    gudder_unique,
    psd_mlb,
    psd_reduce,
    rank_bound,
    verify_psd_mlb,
)
from .quadrics import Quadric, figure_data, includes, sample_boundary, tangency_points
from .symcore import (
    DEFAULT_TOL,
    CongruenceReduction,
    Inertia,
    Subspace,
    congruence_reduce,
    definite_on,
    inertia,
    kernel_basis,
    loewner_leq,
    psd_sqrt,
    span,
)
from .tangency import (
    TangencyProblem,
    contraction_for_subspace,
    feasibility,
    solution_at,
    solve_constrained,
    solve_single,
)

__version__ = "0.1.0"

__all__ = [
    "bridge_param",
    "build_S",
    "check_maximal",
    "congruence_reduce",
    "CongruenceReduction",
    "contraction_for_subspace",
    "DEFAULT_TOL",
    "definite_on",
    "DomainError",
    "feasibility",
    "figure_data",
    "generalized_short",
    "gudder_unique",
    "includes",
    "Inertia",
    "inertia",
    "Infeasible",
    "InputError",
    "kernel_basis",
    "loewner_leq",
    "LoewnerError",
    "mlb",
    "mub",
    "NotContractive",
    "NotMaximal",
    "NotPositiveSemidefinite",
    "NumericalError",
    "opq_polar",
    "phi",
    "psd_mlb",
    "psd_reduce",
    "psd_sqrt",
    "psi",
    "Quadric",
    "rank_bound",
    "recover_param",
    "sample_boundary",
    "solution_at",
    "solve_constrained",
    "solve_single",
    "span",
    "Subspace",
    "tangency_points",
    "TangencyProblem",
    "ToleranceInconsistency",
    "Verdict",
    "verify_psd_mlb",
]
