"""Generalized shorts and positive semidefinite maximal lower bounds.

The reduction works in three stages:

1. split off ``K = Ker(A - B)`` with a shear so that both forms become
   block diagonal ``(hat A (+) A_KK, hat B (+) A_KK)``;
2. decompose the remaining space as ``Ker hat B (+) (Im hat A cap Im hat B)
   (+) Ker hat A`` and shear away the couplings to the middle block;
3. normalize the outer blocks to identities and the middle difference to
   ``J_{p',q'}``.

The composed change of coordinates ``T`` satisfies
``T^T A T = I_a (+) S_A (+) 0_b (+) A_KK`` and
``T^T B T = 0_a (+) S_B (+) I_b (+) A_KK``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateIntersection, NotPsdResult, NotPositiveSemidefinite, ToleranceInconsistency
from .mlbparam import Verdict, check_maximal, mlb, mub, recover_param
from .symcore import (
    DEFAULT_TOL,
    Inertia,
    Subspace,
    _sym,
    congruence_reduce,
    identity_reduction,
    inertia,
    intersection,
    inv_sqrt_pd,
    kernel_basis,
    loewner_leq,
    orthogonal_complement,
    symmat,
)

__all__ = [
    "PsdReduction",
    "generalized_short",
    "psd_reduce",
    "rank_bound",
    "psd_mlb",
    "gudder_unique",
    "verify_psd_mlb",
    "bridge_param",
]


@dataclass(frozen=True)
class PsdReduction:
    T: np.ndarray
    a: int
    b: int
    S_A: np.ndarray
    S_B: np.ndarray
    inertia_mid: Inertia
    kernel_block: np.ndarray

    @property
    def n(self) -> int:
        return self.T.shape[0]

    @property
    def c(self) -> int:
        return self.S_A.shape[0]

    @property
    def r(self) -> int:
        return self.kernel_block.shape[0]

    def middle(self) -> slice:
        return slice(self.a, self.a + self.c)

    def frame_of_A(self) -> np.ndarray:
        return _blockdiag(np.eye(self.a), self.S_A, np.zeros((self.b, self.b)), self.kernel_block)

    def frame_of_B(self) -> np.ndarray:
        return _blockdiag(np.zeros((self.a, self.a)), self.S_B, np.eye(self.b), self.kernel_block)


def _blockdiag(*blocks) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n))
    i = 0
    for blk in blocks:
        k = blk.shape[0]
        out[i : i + k, i : i + k] = blk
        i += k
    return out


def _require_psd(X, name, tol):
    X = symmat(X, name=name)
    if not loewner_leq(np.zeros_like(X), X, tol):
        raise NotPositiveSemidefinite(f"{name} is not positive semidefinite")
    return X


def _range_basis(X, tol) -> Subspace:
    return orthogonal_complement(kernel_basis(X, tol), tol)


def _pinv_psd(X, tol) -> np.ndarray:
    if X.size == 0:
        return X.copy()
    w, V = np.linalg.eigh(_sym(X))
    thr = tol * max(1.0, float(np.max(np.abs(w))))
    inv = np.zeros_like(w)
    keep = w > thr
    inv[keep] = 1.0 / w[keep]
    return _sym((V * inv) @ V.T)


def generalized_short(X, Y, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Short ``[Y]X`` of ``X`` to the range of ``Y``.

    The largest ``Z`` with ``0 <= Z <= X`` and ``Im Z`` inside ``Im Y``,
    computed as the Schur complement ``X11 - X12 X22^+ X21`` in an
    orthonormal frame ``Im Y (+) Ker Y``.
    """
    X = _require_psd(X, "X", tol)
    Y = _require_psd(Y, "Y", tol)
    Q1 = _range_basis(Y, tol).basis
    Q2 = kernel_basis(Y, tol).basis
    if Q1.shape[1] == 0:
        return np.zeros_like(X)
    X11 = Q1.T @ X @ Q1
    if Q2.shape[1] == 0:
        return X.copy()
    X12 = Q1.T @ X @ Q2
    X22 = Q2.T @ X @ Q2
    S = X11 - X12 @ _pinv_psd(X22, tol) @ X12.T
    return _sym(Q1 @ S @ Q1.T)


def psd_reduce(A, B, tol: float = DEFAULT_TOL) -> PsdReduction:
    """Simultaneous block reduction of two positive semidefinite matrices."""
    A = _require_psd(A, "A", tol)
    B = _require_psd(B, "B", tol)
    n = A.shape[0]

    # Stage 1: deflate Ker(A - B).
    K = kernel_basis(A - B, tol).basis
    N = orthogonal_complement(Subspace(K), tol).basis
    m, r = N.shape[1], K.shape[1]
    A_KK = _sym(K.T @ A @ K)
    A_KN = K.T @ A @ N
    D = np.eye(n)
    D[m:, :m] = -_pinv_psd(A_KK, tol) @ A_KN
    O = np.hstack([N, K])
    T1 = O @ D
    Ah = _sym((T1.T @ A @ T1)[:m, :m])
    Bh = _sym((T1.T @ B @ T1)[:m, :m])

    # Stage 2: Ker Bh (+) (Im Ah cap Im Bh) (+) Ker Ah.
    KB = kernel_basis(Bh, tol)
    KA = kernel_basis(Ah, tol)
    if intersection(KA, KB, tol).dim:
        raise DegenerateIntersection("Ker A and Ker B intersect after deflation")
    RAB = intersection(_range_basis(Ah, tol), _range_basis(Bh, tol), tol)
    a, c, b = KB.dim, RAB.dim, KA.dim
    if a + b + c != m:
        raise DegenerateIntersection(
            f"block dimensions {a}+{c}+{b} do not add up to {m}"
        )
    F = np.hstack([KB.basis, RAB.basis, KA.basis])
    AF = _sym(F.T @ Ah @ F)
    BF = _sym(F.T @ Bh @ F)
    i1, i2, i3 = slice(0, a), slice(a, a + c), slice(a + c, m)
    G = np.eye(m)
    A11 = AF[i1, i1]
    B33 = BF[i3, i3]
    if a:
        G[i1, i2] = -np.linalg.solve(A11, AF[i1, i2])
    if b:
        G[i3, i2] = -np.linalg.solve(B33, BF[i2, i3].T)
    SA0 = _sym((G.T @ AF @ G)[i2, i2])
    SB0 = _sym((G.T @ BF @ G)[i2, i2])

    # Stage 3: normalize blocks.
    mid = congruence_reduce(SA0, SB0, tol)
    if mid.inertia.r:
        raise DegenerateIntersection("middle blocks have a degenerate difference")
    V = _blockdiag(inv_sqrt_pd(A11), mid.Pinv.T, inv_sqrt_pd(B33))
    T = T1 @ _blockdiag(F @ G @ V, np.eye(r))
    S_A = _sym(mid.Pinv @ SA0 @ mid.Pinv.T)
    S_B = _sym(mid.Pinv @ SB0 @ mid.Pinv.T)
    return PsdReduction(T, a, b, S_A, S_B, mid.inertia, A_KK)


def rank_bound(A, B, tol: float = DEFAULT_TOL) -> int:
    """``p' + q' + dim Ker(A - B)``: the largest possible rank of a PSD
    maximal lower bound."""
    red = psd_reduce(A, B, tol)
    return red.inertia_mid.p + red.inertia_mid.q + red.r


def _lift(red: PsdReduction, S_C: np.ndarray) -> np.ndarray:
    inner = _blockdiag(np.zeros((red.a, red.a)), S_C, np.zeros((red.b, red.b)), red.kernel_block)
    Tinv = np.linalg.inv(red.T)
    return _sym(Tinv.T @ inner @ Tinv)


def psd_mlb(A, B, Z=None, tol: float = DEFAULT_TOL, red: PsdReduction | None = None) -> np.ndarray:
    """Positive semidefinite maximal lower bound with middle parameter ``Z``.

    Raises :class:`NotPsdResult` when ``Z`` makes the middle block indefinite.
    """
    if red is None:
        red = psd_reduce(A, B, tol)
    p, q, _ = red.inertia_mid
    Z = np.zeros((p, q)) if Z is None else np.asarray(Z, dtype=float).reshape(p, q)
    S_C = mlb(red.S_A, red.S_B, identity_reduction(p, q), Z)
    if S_C.size:
        w = np.linalg.eigvalsh(S_C)
        if w[0] < -tol * max(1.0, float(np.max(np.abs(w)))):
            raise NotPsdResult(f"middle block has eigenvalue {w[0]:.6g}; Z is not admissible")
    return _lift(red, S_C)


def gudder_unique(A, B, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``A, B`` have a unique PSD maximal lower bound.

    Decided both by comparability of ``[B]A`` and ``[A]B`` and by
    ``p' q' = 0``; the two must agree.
    """
    A = _require_psd(A, "A", tol)
    B = _require_psd(B, "B", tol)
    short_BA = generalized_short(A, B, tol)
    short_AB = generalized_short(B, A, tol)
    comparable = loewner_leq(short_BA, short_AB, tol) or loewner_leq(short_AB, short_BA, tol)
    p, q, _ = psd_reduce(A, B, tol).inertia_mid
    if comparable != (p * q == 0):
        raise ToleranceInconsistency(
            f"shorts comparable={comparable} but p'q'={p * q}"
        )
    return comparable


def verify_psd_mlb(A, B, C, tol: float = DEFAULT_TOL) -> bool:
    """Check that ``C`` is a PSD maximal lower bound of maximal rank."""
    try:
        A = _require_psd(A, "A", tol)
        B = _require_psd(B, "B", tol)
        C = symmat(C, name="C")
    except NotPositiveSemidefinite:
        return False
    if not (loewner_leq(np.zeros_like(C), C, tol) and loewner_leq(C, A, tol) and loewner_leq(C, B, tol)):
        return False
    red = psd_reduce(A, B, tol)
    if inertia(C, tol).p != red.inertia_mid.p + red.inertia_mid.q + red.r:
        return False
    mid = red.middle()
    S_C = _sym((red.T.T @ C @ red.T)[mid, mid])
    try:
        return check_maximal(red.S_A, red.S_B, S_C, tol) is Verdict.MAXIMAL
    except ToleranceInconsistency:
        return False


def bridge_param(red: PsdReduction, M=None, tol: float = DEFAULT_TOL) -> np.ndarray:
    """An admissible middle parameter ``Z`` obtained through inversion.

    ``X -> X^{-1}`` maps minimal upper bounds of ``S_A^{-1}, S_B^{-1}``
    (parameter ``M``, ``q' x p'``, default zero) onto positive definite
    maximal lower bounds of ``S_A, S_B``; the matching ``Z`` is read off
    from the latter.
    """
    p, q, _ = red.inertia_mid
    if p * q == 0:
        return np.zeros((p, q))
    SAi = np.linalg.inv(red.S_A)
    SBi = np.linalg.inv(red.S_B)
    inv_red = congruence_reduce(SAi, SBi, tol)
    upper = mub(SAi, SBi, inv_red, M)
    lower = _sym(np.linalg.inv(upper))
    return recover_param(red.S_A, red.S_B, identity_reduction(p, q), lower, tol)
