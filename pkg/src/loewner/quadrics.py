"""Quadrics, ellipsoids, tangency points and boundary samples.

``Q_A = {x : x^T A x <= 1}``.  When ``A`` is positive semidefinite the set is
convex (an ellipsoid ``E_A``), and ``E_A`` lies inside ``Q_B`` exactly when
``B <= A``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import EmptyBoundary, NotAnEllipsoid, UnsupportedDimension
from .mlbparam import mlb
from .symcore import (
    DEFAULT_TOL,
    _normalize_signs,
    congruence_reduce,
    kernel_basis,
    loewner_leq,
    spectral_norm,
    symmat,
)

DEFAULT_WINDOW = 3.0

__all__ = [
    "Quadric",
    "TangencyReport",
    "includes",
    "tangency_points",
    "sample_boundary",
    "figure_data",
    "write_points_csv",
]


@dataclass(frozen=True)
class Quadric:
    form: np.ndarray
    convex: bool

    @classmethod
    def of(cls, form, tol: float = DEFAULT_TOL) -> "Quadric":
        form = symmat(form, name="form")
        return cls(form, loewner_leq(np.zeros_like(form), form, tol))

    @property
    def n(self) -> int:
        return self.form.shape[0]


@dataclass
class TangencyReport:
    """Tangency of ``Q_C`` with ``Q_A`` along ``Ker(A - C)``.

    Each finite entry is a pair ``(x, -x)`` of boundary points; directions
    with ``x^T C x <= 0`` touch at infinity.
    """

    finite_points: list = field(default_factory=list)
    infinite_directions: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "finite_points": [[pt.tolist() for pt in pair] for pair in self.finite_points],
            "infinite_directions": [d.tolist() for d in self.infinite_directions],
        }

    def directions(self) -> np.ndarray:
        """All tangency directions as rows (finite ones first)."""
        rows = [pair[0] for pair in self.finite_points] + list(self.infinite_directions)
        if not rows:
            return np.zeros((0, 0))
        return np.array(rows)


def includes(inner: Quadric, outer: Quadric, tol: float = DEFAULT_TOL) -> bool:
    """Whether the ellipsoid ``inner`` is contained in the quadric ``outer``."""
    if not inner.convex:
        raise NotAnEllipsoid("inclusion test needs a convex inner quadric")
    return loewner_leq(outer.form, inner.form, tol)


def tangency_points(A, C, tol: float = DEFAULT_TOL) -> TangencyReport:
    A = symmat(A, name="A")
    C = symmat(C, name="C")
    thr = tol * max(1.0, spectral_norm(C))
    report = TangencyReport()
    for x in kernel_basis(A - C, tol).basis.T:
        c = float(x @ C @ x)
        if c > thr:
            pt = x / np.sqrt(c)
            report.finite_points.append((pt, -pt))
        else:
            report.infinite_directions.append(x.copy())
    return report


def _core_points(lam: np.ndarray, mu: np.ndarray, res: int, window: float) -> np.ndarray:
    """Points with ``sum lam_i a_i^2 - sum mu_j b_j^2 = 1``, coordinates (a, b)."""
    kp, kn = len(lam), len(mu)
    ra, rb = 1.0 / np.sqrt(lam), 1.0 / np.sqrt(mu)
    t = 2.0 * np.pi * np.arange(res) / res
    s = np.linspace(-window, window, res)
    if (kp, kn) == (1, 0):
        return np.array([[ra[0]], [-ra[0]]])
    if (kp, kn) == (2, 0):
        return np.column_stack([ra[0] * np.cos(t), ra[1] * np.sin(t)])
    if (kp, kn) == (3, 0):
        ph = np.linspace(0.0, np.pi, res)
        P, T = np.meshgrid(ph, t, indexing="ij")
        P, T = P.ravel(), T.ravel()
        return np.column_stack([ra[0] * np.sin(P) * np.cos(T), ra[1] * np.sin(P) * np.sin(T),
                                ra[2] * np.cos(P)])
    if (kp, kn) == (1, 1):
        branch = np.column_stack([ra[0] * np.cosh(s), rb[0] * np.sinh(s)])
        return np.vstack([branch, -branch])
    if (kp, kn) == (2, 1):
        S, T = (g.ravel() for g in np.meshgrid(s, t, indexing="ij"))
        return np.column_stack([ra[0] * np.cosh(S) * np.cos(T), ra[1] * np.cosh(S) * np.sin(T),
                                rb[0] * np.sinh(S)])
    if (kp, kn) == (1, 2):
        S, T = (g.ravel() for g in np.meshgrid(s, t, indexing="ij"))
        sheet = np.column_stack([ra[0] * np.cosh(S), rb[0] * np.sinh(S) * np.cos(T),
                                 rb[1] * np.sinh(S) * np.sin(T)])
        flip = sheet.copy()
        flip[:, 0] *= -1
        return np.vstack([sheet, flip])
    raise UnsupportedDimension(f"no sampler for signature ({kp}, {kn})")


def sample_boundary(Q: Quadric, resolution: int = 64, window: float = DEFAULT_WINDOW,
                    tol: float = DEFAULT_TOL) -> np.ndarray:
    """Points on ``{x : x^T Q x = 1}``, one per row.

    Bounded directions are sampled by angle; hyperbolic ones by ``cosh/sinh``
    of a parameter in ``[-window, window]``; null directions of the form
    (cylinders, line pairs) on a uniform grid over the same window.
    """
    n = Q.n
    if n not in (2, 3):
        raise UnsupportedDimension(f"boundary sampling supports n = 2 or 3, got {n}")
    if resolution < 1:
        raise UnsupportedDimension("resolution must be positive")
    w, V = np.linalg.eigh(Q.form)
    V = _normalize_signs(V)
    thr = tol * max(1.0, float(np.max(np.abs(w))))
    pos = np.flatnonzero(w > thr)
    neg = np.flatnonzero(w < -thr)
    nul = np.flatnonzero(np.abs(w) <= thr)
    if pos.size == 0:
        raise EmptyBoundary("the form has no positive direction, the level set is empty")
    core = _core_points(w[pos], -w[neg], resolution, window)
    axes = np.concatenate([pos, neg])
    pts = core @ V[:, axes].T
    if nul.size:
        grid = np.linspace(-window, window, resolution)
        offsets = np.array(list(itertools.product(grid, repeat=nul.size))) @ V[:, nul].T
        pts = (pts[:, None, :] + offsets[None, :, :]).reshape(-1, n)
    return pts


def write_points_csv(path, points: np.ndarray, n: int) -> None:
    header = "x,y" if n == 2 else "x,y,z"
    lines = [header] + [",".join(format(float(v), ".17g") for v in row) for row in points]
    Path(path).write_text("\n".join(lines) + "\n")


def _boundary_or_empty(form, resolution, tol):
    try:
        return sample_boundary(Quadric.of(form, tol), resolution, tol=tol)
    except EmptyBoundary:
        return np.zeros((0, form.shape[0]))


def figure_data(A, B, params, out_dir, resolution: int | None = None,
                red=None, tol: float = DEFAULT_TOL) -> list[Path]:
    """Write boundary samples of ``E_A``, ``E_B`` and each ``Q_C``.

    Files are ``EA_0.csv``, ``EB_0.csv``, then ``QC_<i>.csv`` and
    ``tangency_<i>.json`` for the ``i``-th parameter.  Returns the paths
    written, in that order.
    """
    A = symmat(A, name="A")
    B = symmat(B, name="B")
    n = A.shape[0]
    if n not in (2, 3):
        raise UnsupportedDimension(f"figure data supports n = 2 or 3, got {n}")
    if resolution is None:
        resolution = 64 if n == 2 else 24
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for label, form in (("EA", A), ("EB", B)):
        if not Quadric.of(form, tol).convex:
            raise NotAnEllipsoid(f"{label[1]} must be positive semidefinite")
        path = out / f"{label}_0.csv"
        write_points_csv(path, _boundary_or_empty(form, resolution, tol), n)
        written.append(path)
    if red is None:
        red = congruence_reduce(A, B, tol)
    for i, M in enumerate(params):
        C = mlb(A, B, red, M)
        path = out / f"QC_{i}.csv"
        write_points_csv(path, _boundary_or_empty(C, resolution, tol), n)
        written.append(path)
        doc = {
            "index": i,
            "C": C.tolist(),
            "against_A": tangency_points(A, C, tol).to_dict(),
            "against_B": tangency_points(B, C, tol).to_dict(),
        }
        jpath = out / f"tangency_{i}.json"
        jpath.write_text(json.dumps(doc, indent=1) + "\n")
        written.append(jpath)
    return written
