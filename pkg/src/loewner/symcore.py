"""Symmetric matrices, inertia, congruence frames and the Loewner order.

Every rank, inertia or definiteness decision in the package goes through
the helpers here and uses one rule: a quantity is treated as zero when its
magnitude is at most ``tol * max(1, scale)``, where ``scale`` is the
spectral norm of the matrix being classified.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, InputError, NotPositiveSemidefinite

DEFAULT_TOL = 1e-10
SYMMETRY_RTOL = 1e-12

__all__ = [
    "DEFAULT_TOL",
    "Inertia",
    "Subspace",
    "CongruenceReduction",
    "symmat",
    "canonical_J",
    "inertia",
    "congruence_reduce",
    "identity_reduction",
    "psd_sqrt",
    "inv_sqrt_pd",
    "kernel_basis",
    "span",
    "subspace_sum",
    "intersection",
    "orthogonal_complement",
    "loewner_leq",
    "definite_on",
    "spectral_norm",
]


class Inertia(NamedTuple):
    """Counts of positive, negative and zero eigenvalues."""

    p: int
    q: int
    r: int

    @property
    def n(self) -> int:
        return self.p + self.q + self.r


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of R^n stored as an orthonormal column basis."""

    basis: np.ndarray

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(np.zeros((n, 0)))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(np.eye(n))

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def contains(self, x, tol: float = 1e-8) -> bool:
        x = np.asarray(x, dtype=float)
        resid = x - self.basis @ (self.basis.T @ x)
        return bool(np.linalg.norm(resid) <= tol * max(1.0, np.linalg.norm(x)))


@dataclass(frozen=True)
class CongruenceReduction:
    """Frame ``P`` with ``A - B = P J_{p,q,r} P^T``.

    ``Pinv`` is kept alongside so that callers never invert ``P`` twice.
    """

    P: np.ndarray
    Pinv: np.ndarray
    inertia: Inertia

    @property
    def n(self) -> int:
        return self.P.shape[0]


def spectral_norm(X) -> float:
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        return 0.0
    return float(np.linalg.norm(X, 2))


def _sym(X: np.ndarray) -> np.ndarray:
    return 0.5 * (X + X.T)


def symmat(X, *, name: str = "matrix") -> np.ndarray:
    """Validate and symmetrize a square real matrix.

    Raises :class:`InputError` for non-square or non-finite input, or when
    the asymmetry exceeds ``1e-12`` relative to the largest absolute entry.
    """
    try:
        X = np.array(X, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name}: not a numeric array ({exc})") from None
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise InputError(f"{name}: expected a square matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InputError(f"{name}: entries must be finite")
    if X.size:
        biggest = np.max(np.abs(X))
        defect = np.max(np.abs(X - X.T))
        if defect > SYMMETRY_RTOL * biggest:
            raise InputError(
                f"{name}: asymmetry {defect:.3g} exceeds {SYMMETRY_RTOL:g} "
                f"relative to largest entry {biggest:.3g}"
            )
    return _sym(X)


def _check_same_order(*mats) -> int:
    n = mats[0].shape[0]
    for m in mats[1:]:
        if m.shape != (n, n):
            raise InputError(f"order mismatch: {mats[0].shape} vs {m.shape}")
    return n


def canonical_J(p: int, q: int, r: int = 0) -> np.ndarray:
    """Diagonal matrix ``I_p (+) -I_q (+) 0_r``."""
    return np.diag(np.concatenate([np.ones(p), -np.ones(q), np.zeros(r)]))


def _eigh(M: np.ndarray):
    try:
        return np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigendecomposition failed: {exc}") from None


def _normalize_signs(V: np.ndarray) -> np.ndarray:
    """Flip columns so that each one's first largest-magnitude entry is positive."""
    V = np.array(V, dtype=float)
    if V.size == 0:
        return V
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def _canonical_eigenspace(V: np.ndarray) -> np.ndarray:
    """Basis-independent orthonormal basis of ``span(V)``.

    Pivoted QR of the orthogonal projector; for coordinate subspaces this
    returns the coordinate vectors in index order.
    """
    k = V.shape[1]
    if k <= 1:
        return V
    Q, _, _ = scipy.linalg.qr(V @ V.T, pivoting=True)
    return Q[:, :k]


def _canonicalize_clusters(w: np.ndarray, V: np.ndarray, rel: float = 1e-12) -> np.ndarray:
    """Replace eigenvectors of (numerically) repeated eigenvalues by a canonical basis.

    ``w`` must be sorted within each class the way the caller wants.
    """
    V = V.copy()
    gap = rel * max(1.0, float(np.max(np.abs(w)))) if w.size else 0.0
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or abs(w[i] - w[i - 1]) > gap:
            if i - start > 1:
                V[:, start:i] = _canonical_eigenspace(V[:, start:i])
            start = i
    return V


def _threshold(values: np.ndarray, tol: float) -> float:
    scale = np.max(np.abs(values)) if values.size else 0.0
    return tol * max(1.0, float(scale))


def inertia(A, tol: float = DEFAULT_TOL) -> Inertia:
    """Inertia ``(p, q, r)`` of a symmetric matrix.

    Eigenvalues within ``tol * max(1, max|eig|)`` of zero count towards ``r``.

    >>> inertia(np.diag([4.0, -9.0, 0.0]))
    Inertia(p=1, q=1, r=1)
    """
    A = symmat(A)
    w = _eigh(A)[0]
    thr = _threshold(w, tol)
    p = int(np.sum(w > thr))
    q = int(np.sum(w < -thr))
    return Inertia(p, q, A.shape[0] - p - q)


def congruence_reduce(A, B, tol: float = DEFAULT_TOL) -> CongruenceReduction:
    """Canonical frame revealing the inertia of ``A - B``.

    Eigenpairs of ``A - B`` are ordered positive (descending), negative
    (descending magnitude), then null.  Column ``i`` of ``P`` is the
    sign-normalized eigenvector scaled by ``sqrt|lambda_i|`` (unscaled for
    the null class), so that ``A - B = P J P^T`` up to the classification
    threshold.
    """
    A = symmat(A, name="A")
    B = symmat(B, name="B")
    _check_same_order(A, B)
    w, V = _eigh(_sym(A - B))
    thr = _threshold(w, tol)
    pos = np.flatnonzero(w > thr)
    neg = np.flatnonzero(w < -thr)
    nul = np.flatnonzero(np.abs(w) <= thr)
    pos = pos[np.argsort(-w[pos], kind="stable")]
    neg = neg[np.argsort(w[neg], kind="stable")]
    order = np.concatenate([pos, neg, nul]).astype(int)
    V = V[:, order]
    k = len(pos)
    V[:, :k] = _canonicalize_clusters(w[order[:k]], V[:, :k])
    V[:, k : k + len(neg)] = _canonicalize_clusters(w[order[k : k + len(neg)]], V[:, k : k + len(neg)])
    if len(nul) > 1:
        V[:, k + len(neg) :] = _canonical_eigenspace(V[:, k + len(neg) :])
    V = _normalize_signs(V)
    scale = np.ones(len(order))
    k = len(pos) + len(neg)
    scale[:k] = np.sqrt(np.abs(w[order[:k]]))
    P = V * scale
    Pinv = (V / scale).T
    return CongruenceReduction(P, Pinv, Inertia(len(pos), len(neg), len(nul)))


def identity_reduction(p: int, q: int, r: int = 0) -> CongruenceReduction:
    """The trivial frame, for pairs already satisfying ``A - B = J_{p,q,r}``."""
    n = p + q + r
    return CongruenceReduction(np.eye(n), np.eye(n), Inertia(p, q, r))


def psd_sqrt(M, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Positive semidefinite square root.

    Eigenvalues in ``[-tol * scale, 0)`` are clamped to zero; anything more
    negative raises :class:`NotPositiveSemidefinite`.
    """
    M = symmat(M)
    if M.size == 0:
        return M.copy()
    w, V = _eigh(M)
    thr = _threshold(w, tol)
    if w[0] < -thr:
        raise NotPositiveSemidefinite(f"smallest eigenvalue {w[0]:.6g} < -{thr:.3g}")
    w = np.clip(w, 0.0, None)
    return _sym((V * np.sqrt(w)) @ V.T)


def inv_sqrt_pd(M) -> np.ndarray:
    """Inverse square root of a positive definite matrix (no tolerance games)."""
    M = _sym(np.asarray(M, dtype=float))
    if M.size == 0:
        return M.copy()
    w, V = _eigh(M)
    if w[0] <= 0:
        raise NotPositiveSemidefinite(f"matrix is not positive definite (min eig {w[0]:.3g})")
    return _sym((V / np.sqrt(w)) @ V.T)


def _right_singular_split(X: np.ndarray, tol: float):
    """Split right singular vectors of X into (range of X^T, null space)."""
    m, n = X.shape
    if n == 0:
        return np.zeros((0, 0)), np.zeros((0, 0))
    if m == 0:
        return np.zeros((n, 0)), np.eye(n)
    try:
        _, s, Vt = np.linalg.svd(X, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD failed: {exc}") from None
    smax = s[0] if s.size else 0.0
    thr = tol * max(m, n) * max(1.0, smax)
    rank = int(np.sum(s > thr))
    V = Vt.T
    return _normalize_signs(V[:, :rank]), _normalize_signs(V[:, rank:])


def kernel_basis(M, tol: float = DEFAULT_TOL) -> Subspace:
    """Canonical orthonormal basis of the numerical null space of ``M``.

    Singular values at most ``tol * n * max(1, sigma_max)`` count as zero.
    ``M`` need not be square.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    return Subspace(_right_singular_split(M, tol)[1])


def span(vectors, n: int | None = None, tol: float = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the span of the given vectors (one per row)."""
    X = np.asarray(vectors, dtype=float)
    if X.size == 0:
        if n is None:
            raise InputError("cannot infer ambient dimension of an empty span")
        return Subspace.zero(n)
    X = np.atleast_2d(X)
    if n is not None and X.shape[1] != n:
        raise InputError(f"vectors have length {X.shape[1]}, expected {n}")
    return Subspace(_right_singular_split(X, tol)[0])


def subspace_sum(*subs: Subspace, tol: float = DEFAULT_TOL) -> Subspace:
    n = subs[0].n
    cols = np.hstack([s.basis for s in subs])
    if cols.shape[1] == 0:
        return Subspace.zero(n)
    return span(cols.T, n=n, tol=tol)


def intersection(S1: Subspace, S2: Subspace, tol: float = DEFAULT_TOL) -> Subspace:
    """Intersection via the null space of ``[S1, -S2]``."""
    n = S1.n
    if S1.dim == 0 or S2.dim == 0:
        return Subspace.zero(n)
    null = kernel_basis(np.hstack([S1.basis, -S2.basis]), tol).basis
    if null.shape[1] == 0:
        return Subspace.zero(n)
    return span((S1.basis @ null[: S1.dim]).T, n=n, tol=tol)


def orthogonal_complement(S: Subspace, tol: float = DEFAULT_TOL) -> Subspace:
    if S.dim == 0:
        return Subspace.full(S.n)
    return kernel_basis(S.basis.T, tol)


def loewner_leq(A, B, tol: float = DEFAULT_TOL) -> bool:
    """``A <= B`` in the Loewner order: ``B - A`` has no eigenvalue below
    ``-tol * max(1, ||B - A||)``."""
    A = symmat(A, name="A")
    B = symmat(B, name="B")
    _check_same_order(A, B)
    if A.size == 0:
        return True
    w = _eigh(_sym(B - A))[0]
    return bool(w[0] >= -_threshold(w, tol))


def compressed_eigenvalues(M, S: Subspace) -> np.ndarray:
    """Eigenvalues of ``basis^T M basis``."""
    M = np.asarray(M, dtype=float)
    if S.dim == 0:
        return np.zeros(0)
    return _eigh(_sym(S.basis.T @ M @ S.basis))[0]


def definite_on(M, S: Subspace, sign: str = "positive", tol: float = DEFAULT_TOL) -> bool:
    """Whether the quadratic form ``M`` is strictly definite on ``S``.

    Vacuously true for the zero subspace.
    """
    if sign not in ("positive", "negative"):
        raise InputError(f"sign must be 'positive' or 'negative', got {sign!r}")
    M = symmat(M)
    if S.n != M.shape[0]:
        raise InputError(f"subspace lives in R^{S.n}, matrix has order {M.shape[0]}")
    if S.dim == 0:
        return True
    w = compressed_eigenvalues(M, S)
    thr = tol * max(1.0, spectral_norm(M))
    if sign == "positive":
        return bool(w[0] > thr)
    return bool(w[-1] < -thr)
