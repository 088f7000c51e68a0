"""Maximal lower bounds with prescribed tangency subspaces.

The problem: given ``A, B`` and subspaces ``U, V``, find maximal lower
bounds ``C`` with ``C u = B u`` on ``U`` and ``C v = A v`` on ``V``.

Everything is computed in the canonical congruence frame of ``A - B``,
where a vector ``x`` becomes ``y = P^T x`` and the indefinite form becomes
``J_{p,q}``.  Coordinates of ``y`` along ``Ker(A - B)`` never enter the
constraints, so they are dropped (deflation).  In that frame the solutions
are ``C = mlb(A, B, psi(R))`` for ``R`` in the open unit ball intersected
with the affine space

    R^T y_p(u) + y_q(u) = 0   (u in U),      R y_q(v) + y_p(v) = 0   (v in V).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, Infeasible, NotContractive, NotNegativeDefinite, NumericalError
from .mlbparam import mlb, psi
from .symcore import (
    DEFAULT_TOL,
    CongruenceReduction,
    Subspace,
    _normalize_signs,
    _sym,
    canonical_J,
    compressed_eigenvalues,
    congruence_reduce,
    definite_on,
    orthogonal_complement,
    span,
    spectral_norm,
    symmat,
)

BALL_MARGIN = 1e-9

__all__ = [
    "TangencyProblem",
    "FeasibilityReport",
    "SolutionFamily",
    "reduced_subspaces",
    "feasibility",
    "contraction_for_subspace",
    "solve_constrained",
    "solve_single",
    "solution_at",
]


@dataclass(frozen=True)
class TangencyProblem:
    A: np.ndarray
    B: np.ndarray
    U: Subspace
    V: Subspace

    @classmethod
    def from_vectors(cls, A, B, u_vectors=(), v_vectors=(), tol=DEFAULT_TOL):
        """Build a problem from lists of spanning vectors (orthonormalized here)."""
        A = symmat(A, name="A")
        B = symmat(B, name="B")
        if A.shape != B.shape:
            raise InputError(f"order mismatch: {A.shape} vs {B.shape}")
        n = A.shape[0]
        return cls(A, B, span(u_vectors, n=n, tol=tol), span(v_vectors, n=n, tol=tol))


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    pos_def_on_U: bool
    neg_def_on_V: bool
    cross_orthogonal: bool
    borderline: bool = False
    cross_defect: float = 0.0

    def reasons(self) -> list[str]:
        out = []
        if not self.pos_def_on_U:
            out.append("A-B is not positive definite on U")
        if not self.neg_def_on_V:
            out.append("A-B is not negative definite on V")
        if not self.cross_orthogonal:
            out.append(f"U and V are not (A-B)-orthogonal (defect {self.cross_defect:.3g})")
        if self.borderline:
            out.append("a definiteness margin is within tolerance of zero")
        return out


@dataclass(frozen=True)
class SolutionFamily:
    """Affine family ``R0 + sum_i c_i D_i`` intersected with the unit ball.

    ``directions`` has shape ``(dim, p, q)``; its slices are orthonormal for
    the trace inner product.  ``U_red`` and ``V_red`` are the deflated
    constraint subspaces in the reduced frame (``(p+q) x k`` bases).
    """

    R0: np.ndarray
    directions: np.ndarray
    reduction: CongruenceReduction
    U_red: np.ndarray
    V_red: np.ndarray

    @property
    def dim(self) -> int:
        return self.directions.shape[0]

    @property
    def p(self) -> int:
        return self.R0.shape[0]

    @property
    def q(self) -> int:
        return self.R0.shape[1]

    def member(self, coeffs) -> np.ndarray:
        c = np.atleast_1d(np.asarray(coeffs, dtype=float))
        if c.shape != (self.dim,):
            raise InputError(f"expected {self.dim} coefficients, got {c.size}")
        if self.dim == 0:
            return self.R0.copy()
        return self.R0 + np.tensordot(c, self.directions, axes=1)

    def residual(self, R) -> float:
        """Largest violation of the affine constraints at ``R``."""
        p = self.p
        res = 0.0
        if self.U_red.shape[1]:
            res = max(res, np.max(np.abs(R.T @ self.U_red[:p] + self.U_red[p:]), initial=0.0))
        if self.V_red.shape[1]:
            res = max(res, np.max(np.abs(R @ self.V_red[p:] + self.V_red[:p]), initial=0.0))
        return float(res)


def _deflate(S: Subspace, red: CongruenceReduction, tol: float) -> np.ndarray:
    """Orthonormal basis of the image of ``S`` in the nondegenerate reduced coordinates."""
    p, q, _ = red.inertia
    m = p + q
    if S.dim == 0 or m == 0:
        return np.zeros((m, 0))
    Y = red.P.T @ S.basis
    scale = max(1.0, spectral_norm(Y))
    Ypq = Y[:m]
    U, s, _ = np.linalg.svd(Ypq, full_matrices=False)
    keep = s > tol * max(Ypq.shape) * scale
    return _normalize_signs(U[:, keep])


def reduced_subspaces(prob: TangencyProblem, red: CongruenceReduction | None = None,
                      tol: float = DEFAULT_TOL):
    """Return ``(red, U_red, V_red)``: the frame and deflated constraint bases."""
    if prob.U.n != prob.A.shape[0] or prob.V.n != prob.A.shape[0]:
        raise InputError("subspaces and matrices live in different dimensions")
    if red is None:
        red = congruence_reduce(prob.A, prob.B, tol)
    return red, _deflate(prob.U, red, tol), _deflate(prob.V, red, tol)


def _report(Ur: np.ndarray, Vr: np.ndarray, p: int, q: int, tol: float) -> FeasibilityReport:
    J = canonical_J(p, q)
    m = p + q
    Us, Vs = Subspace(Ur), Subspace(Vr)
    pos = definite_on(J, Us, "positive", tol) if m else True
    neg = definite_on(J, Vs, "negative", tol) if m else True
    borderline = False
    if Ur.shape[1]:
        borderline |= abs(compressed_eigenvalues(J, Us)[0]) <= tol
    if Vr.shape[1]:
        borderline |= abs(compressed_eigenvalues(J, Vs)[-1]) <= tol
    defect = float(np.max(np.abs(Ur.T @ J @ Vr))) if Ur.shape[1] and Vr.shape[1] else 0.0
    cross = defect <= tol * max(1, m)
    return FeasibilityReport(pos and neg and cross, pos, neg, cross, bool(borderline), defect)


def feasibility(prob: TangencyProblem, red: CongruenceReduction | None = None,
                tol: float = DEFAULT_TOL) -> FeasibilityReport:
    """Check the three solvability conditions in the reduced frame."""
    red, Ur, Vr = reduced_subspaces(prob, red, tol)
    p, q, _ = red.inertia
    return _report(Ur, Vr, p, q, tol)


def contraction_for_subspace(Vsub: Subspace, p: int, q: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Contraction ``R`` (``p x q``) with ``x_p = R x_q`` for every ``x`` in ``Vsub``.

    ``J_{p,q}`` must be negative definite on ``Vsub``.  ``R`` vanishes on the
    orthogonal complement of the ``q``-projection of ``Vsub``.
    """
    if Vsub.n != p + q:
        raise InputError(f"subspace lives in R^{Vsub.n}, expected R^{p + q}")
    if Vsub.dim == 0:
        return np.zeros((p, q))
    if not definite_on(canonical_J(p, q), Vsub, "negative", tol):
        raise NotNegativeDefinite("J_{p,q} is not negative definite on the subspace")
    Vp = Vsub.basis[:p]
    Vq = Vsub.basis[p:]
    return Vp @ np.linalg.pinv(Vq)


def _complete(Ur: np.ndarray, Vr: np.ndarray, p: int, q: int):
    """Extend ``(Ur, Vr)`` to J-orthogonal subspaces of dimensions ``(p, q)``.

    The extra directions are eigenvectors of ``J`` compressed to the
    J-orthogonal complement of ``Ur + Vr``; distinct eigenvectors there are
    automatically J-orthogonal to each other.
    """
    J = canonical_J(p, q)
    taken = np.hstack([Ur, Vr])
    if taken.shape[1]:
        Z = orthogonal_complement(span((J @ taken).T, n=p + q)).basis
    else:
        Z = np.eye(p + q)
    if Z.shape[1] == 0:
        return Ur, Vr
    w, W = np.linalg.eigh(_sym(Z.T @ J @ Z))
    U0 = Z @ W[:, w > 0]
    V0 = Z @ W[:, w < 0]
    Uf = np.hstack([Ur, U0])
    Vf = np.hstack([Vr, V0])
    if Uf.shape[1] != p or Vf.shape[1] != q:
        raise NumericalError(
            f"completion produced dimensions ({Uf.shape[1]}, {Vf.shape[1]}), expected ({p}, {q})"
        )
    return Uf, Vf


def _direction_basis(Ur: np.ndarray, Vr: np.ndarray, p: int, q: int) -> np.ndarray:
    a = orthogonal_complement(span(Ur[:p].T, n=p)).basis if p else np.zeros((0, 0))
    b = orthogonal_complement(span(Vr[p:].T, n=q)).basis if q else np.zeros((0, 0))
    dirs = [np.outer(a[:, i], b[:, j]) for i in range(a.shape[1]) for j in range(b.shape[1])]
    if not dirs:
        return np.zeros((0, p, q))
    return np.array(dirs)


def solve_constrained(prob: TangencyProblem, red: CongruenceReduction | None = None,
                      tol: float = DEFAULT_TOL) -> SolutionFamily:
    """Parametrize all solutions of a tangency-constrained problem.

    Raises :class:`Infeasible` (carrying the report) when a condition fails.
    """
    red, Ur, Vr = reduced_subspaces(prob, red, tol)
    p, q, _ = red.inertia
    report = _report(Ur, Vr, p, q, tol)
    if not report.feasible:
        raise Infeasible("infeasible: " + "; ".join(report.reasons()), report)
    Uf, Vf = _complete(Ur, Vr, p, q)
    # The lemma gives x_p = R x_q on V; the constraint wants x_p = -R x_q.
    R0 = -contraction_for_subspace(Subspace(Vf), p, q, tol=0.0)
    family = SolutionFamily(R0, _direction_basis(Ur, Vr, p, q), red, Ur, Vr)
    if family.residual(R0) > 1e-9 or spectral_norm(R0) > 1.0 - BALL_MARGIN:
        raise NumericalError(
            f"base point failed its checks (residual {family.residual(R0):.3g}, "
            f"norm {spectral_norm(R0):.17g})"
        )
    return family


def _side(side: str) -> str:
    s = side.lower()
    if s in ("a", "agreewitha"):
        return "A"
    if s in ("b", "agreewithb"):
        return "B"
    raise InputError(f"side must be 'A' or 'B', got {side!r}")


def solve_single(A, B, x, side: str = "A", red: CongruenceReduction | None = None,
                 tol: float = DEFAULT_TOL) -> SolutionFamily:
    """Maximal lower bounds that agree with ``A`` (or ``B``) along one vector.

    With ``side="A"`` the condition ``C x = A x`` is solvable iff
    ``x^T A x < x^T B x`` or ``A x = B x``; ``side="B"`` mirrors it.
    """
    A = symmat(A, name="A")
    B = symmat(B, name="B")
    x = np.asarray(x, dtype=float).ravel()
    if x.shape != (A.shape[0],):
        raise InputError(f"vector has length {x.size}, expected {A.shape[0]}")
    if not np.any(x):
        raise InputError("vector must be nonzero")
    s = _side(side)
    n = A.shape[0]
    sub = span([x], n=n)
    zero = Subspace.zero(n)
    prob = TangencyProblem(A, B, zero, sub) if s == "A" else TangencyProblem(A, B, sub, zero)
    try:
        return solve_constrained(prob, red, tol)
    except Infeasible as exc:
        value = float(x @ (A - B) @ x)
        want = "< 0" if s == "A" else "> 0"
        raise Infeasible(
            f"infeasible: C x = {s} x requires x^T(A-B)x {want} or (A-B)x = 0; "
            f"got x^T(A-B)x = {value:.17g}",
            exc.report,
        ) from None


def solution_at(family: SolutionFamily, coeffs, A, B,
                red: CongruenceReduction | None = None) -> np.ndarray:
    """The maximal lower bound at family coordinates ``coeffs``."""
    R = family.member(coeffs)
    nrm = spectral_norm(R)
    if nrm > 1.0 - BALL_MARGIN:
        raise NotContractive(f"family member has spectral norm {nrm:.17g}, outside the open unit ball")
    return mlb(A, B, red if red is not None else family.reduction, psi(R))
