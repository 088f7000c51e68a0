"""Parametrization of maximal lower bounds and minimal upper bounds.

Given a congruence frame ``A - B = P J_{p,q,r} P^T``, the maximal lower
bounds of ``A`` and ``B`` are exactly the matrices

    C = A - P S(M) (I_p (+) 0_q (+) 0_r) S(M) P^T,

one for each ``p x q`` matrix ``M``, where ``S(M)`` is the symmetric
positive definite element of the indefinite orthogonal group ``O(p, q)``
with off-diagonal block ``M``.
"""

from __future__ import annotations

import enum
from typing import NamedTuple

import numpy as np

from .errors import (
    InputError,
    NotContractive,
    NotInGroup,
    NotMaximal,
    ToleranceInconsistency,
)
from .symcore import (
    DEFAULT_TOL,
    CongruenceReduction,
    _sym,
    canonical_J,
    congruence_reduce,
    inertia,
    inv_sqrt_pd,
    kernel_basis,
    loewner_leq,
    psd_sqrt,
    spectral_norm,
    subspace_sum,
    symmat,
)

CONTRACTION_MARGIN = 1e-12

__all__ = [
    "Verdict",
    "PolarFactors",
    "phi",
    "psi",
    "build_S",
    "in_opq",
    "opq_polar",
    "mlb",
    "mub",
    "recover_param",
    "check_maximal",
]


class Verdict(enum.Enum):
    NOT_LOWER_BOUND = "NotLowerBound"
    LOWER_BOUND_NOT_MAXIMAL = "LowerBoundNotMaximal"
    MAXIMAL = "Maximal"

    def __str__(self):
        return self.value


class PolarFactors(NamedTuple):
    M: np.ndarray
    U: np.ndarray
    V: np.ndarray


def _as_block(X, name="X") -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise InputError(f"{name}: expected a 2-d array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InputError(f"{name}: entries must be finite")
    return X


def phi(X) -> np.ndarray:
    """Map ``M_{p,q}`` onto the open unit ball: ``(I_p + X X^T)^{-1/2} X``."""
    X = _as_block(X)
    p = X.shape[0]
    if X.size == 0:
        return X.copy()
    return inv_sqrt_pd(np.eye(p) + X @ X.T) @ X


def psi(Y) -> np.ndarray:
    """Inverse of :func:`phi`: ``(I_p - Y Y^T)^{-1/2} Y`` for ``||Y|| < 1``."""
    Y = _as_block(Y, "Y")
    if Y.size == 0:
        return Y.copy()
    nrm = spectral_norm(Y)
    if nrm >= 1.0 - CONTRACTION_MARGIN:
        raise NotContractive(f"spectral norm {nrm:.17g} is not below 1")
    return inv_sqrt_pd(np.eye(Y.shape[0]) - Y @ Y.T) @ Y


def build_S(M, r: int = 0) -> np.ndarray:
    """The ``O(p, q)`` element with off-diagonal block ``M``, padded by ``0_r``."""
    M = _as_block(M, "M")
    p, q = M.shape
    n = p + q + r
    S = np.zeros((n, n))
    S[:p, :p] = psd_sqrt(np.eye(p) + M @ M.T)
    S[p : p + q, p : p + q] = psd_sqrt(np.eye(q) + M.T @ M)
    S[:p, p : p + q] = M
    S[p : p + q, :p] = M.T
    return S


def in_opq(sigma, p: int, q: int, tol: float = 1e-9) -> bool:
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (p + q, p + q):
        return False
    J = canonical_J(p, q)
    return bool(spectral_norm(sigma @ J @ sigma.T - J) <= tol * max(1.0, spectral_norm(sigma) ** 2))


def opq_polar(sigma, p: int, q: int, tol: float = 1e-9) -> PolarFactors:
    """Factor ``sigma in O(p, q)`` as ``S(M) (U (+) V)`` with ``U, V`` orthogonal."""
    sigma = np.asarray(sigma, dtype=float)
    if not in_opq(sigma, p, q, tol):
        raise NotInGroup(f"matrix is not in O({p},{q}) at tolerance {tol:g}")
    S = psd_sqrt(sigma @ sigma.T)
    M = S[:p, p:].copy()
    # S(M) is in O(p,q) and symmetric, so S^{-1} = J S J.
    J = canonical_J(p, q)
    W = J @ S @ J @ sigma
    return PolarFactors(M, W[:p, :p].copy(), W[p:, p:].copy())


def _check_param(red: CongruenceReduction, M) -> np.ndarray:
    p, q, _ = red.inertia
    M = np.asarray(M, dtype=float)
    if M.size == 0 and p * q == 0:
        return np.zeros((p, q))
    M = _as_block(M, "M")
    if M.shape != (p, q):
        raise InputError(f"parameter has shape {M.shape}, inertia requires ({p}, {q})")
    return M


def _prepare(A, B, red):
    A = symmat(A, name="A")
    B = symmat(B, name="B")
    if A.shape != B.shape:
        raise InputError(f"order mismatch: {A.shape} vs {B.shape}")
    if red is None:
        red = congruence_reduce(A, B)
    elif red.n != A.shape[0]:
        raise InputError(f"reduction has order {red.n}, matrices have {A.shape[0]}")
    return A, B, red


def mlb(A, B, red: CongruenceReduction | None = None, M=None, *, form: str = "A") -> np.ndarray:
    """Maximal lower bound of ``A`` and ``B`` with parameter ``M``.

    ``form="B"`` evaluates the equivalent expression
    ``B - P S (0_p (+) I_q (+) 0_r) S P^T`` instead.
    """
    A, B, red = _prepare(A, B, red)
    p, q, r = red.inertia
    M = np.zeros((p, q)) if M is None else _check_param(red, M)
    PS = red.P @ build_S(M, r)
    if form == "A":
        G = PS[:, :p]
        return _sym(A - G @ G.T)
    if form == "B":
        G = PS[:, p : p + q]
        return _sym(B - G @ G.T)
    raise InputError(f"form must be 'A' or 'B', got {form!r}")


def mub(A, B, red: CongruenceReduction | None = None, M=None, *, form: str = "A") -> np.ndarray:
    """Minimal upper bound of ``A`` and ``B`` with parameter ``M``."""
    A, B, red = _prepare(A, B, red)
    p, q, r = red.inertia
    M = np.zeros((p, q)) if M is None else _check_param(red, M)
    PS = red.P @ build_S(M, r)
    if form == "A":
        G = PS[:, p : p + q]
        return _sym(A + G @ G.T)
    if form == "B":
        G = PS[:, :p]
        return _sym(B + G @ G.T)
    raise InputError(f"form must be 'A' or 'B', got {form!r}")


def check_maximal(A, B, C, tol: float = DEFAULT_TOL) -> Verdict:
    """Classify ``C`` against the pair ``(A, B)``.

    Maximality is decided twice: by the kernel-sum criterion
    ``Ker(A-C) + Ker(B-C) = R^n`` and by the rank criterion
    ``rk(A-C) = p, rk(B-C) = q``.  Disagreement raises
    :class:`ToleranceInconsistency`.
    """
    A = symmat(A, name="A")
    B = symmat(B, name="B")
    C = symmat(C, name="C")
    if not (A.shape == B.shape == C.shape):
        raise InputError("A, B, C must have the same order")
    if not (loewner_leq(C, A, tol) and loewner_leq(C, B, tol)):
        return Verdict.NOT_LOWER_BOUND
    n = A.shape[0]
    KA = kernel_basis(A - C, tol)
    KB = kernel_basis(B - C, tol)
    by_kernels = subspace_sum(KA, KB, tol=tol).dim == n
    p, q, _ = inertia(A - B, tol)
    by_ranks = (n - KA.dim == p) and (n - KB.dim == q)
    if by_kernels != by_ranks:
        raise ToleranceInconsistency(
            f"kernel-sum test says {by_kernels}, rank test says {by_ranks} "
            f"(rk(A-C)={n - KA.dim}, rk(B-C)={n - KB.dim}, p={p}, q={q})"
        )
    return Verdict.MAXIMAL if by_kernels else Verdict.LOWER_BOUND_NOT_MAXIMAL


def recover_param(A, B, red: CongruenceReduction | None, C, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Parameter ``M`` with ``mlb(A, B, red, M) == C``."""
    A, B, red = _prepare(A, B, red)
    C = symmat(C, name="C")
    verdict = check_maximal(A, B, C, tol)
    if verdict is not Verdict.MAXIMAL:
        raise NotMaximal(f"C is not a maximal lower bound ({verdict})")
    p, q, _ = red.inertia
    D = _sym(red.Pinv @ (A - C) @ red.Pinv.T)
    if p == 0 or q == 0:
        return np.zeros((p, q))
    return inv_sqrt_pd(D[:p, :p]) @ D[:p, p : p + q]
