"""Text formats for matrices, parameters, subspaces and solution families.

Matrices are ``{"n": n, "data": [[...], ...]}``; parameters are
``{"p": p, "q": q, "data": [[...], ...]}``.  Numbers are written with 17
significant digits so that a write/read cycle is exact.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import InputError
from .symcore import symmat


def fmt(x) -> str:
    return format(float(x), ".17g")


def _rows(X: np.ndarray) -> str:
    if X.shape[0] == 0:
        return "[]"
    rows = ["[" + ", ".join(fmt(v) for v in row) + "]" for row in X]
    return "[" + ", ".join(rows) + "]"


def matrix_text(X) -> str:
    X = np.asarray(X, dtype=float)
    return '{"n": %d, "data": %s}' % (X.shape[0], _rows(X))


def param_text(M) -> str:
    M = np.asarray(M, dtype=float)
    p, q = M.shape
    return '{"p": %d, "q": %d, "data": %s}' % (p, q, _rows(M))


def _load(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc.msg}, line {exc.lineno})") from None


def _numeric(data, shape, where) -> np.ndarray:
    try:
        X = np.array(data, dtype=float)
    except (TypeError, ValueError):
        raise InputError(f"{where}: data must be numbers") from None
    if X.size == 0 and 0 in shape:
        return np.zeros(shape)
    if X.shape != shape:
        raise InputError(f"{where}: expected shape {shape}, got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InputError(f"{where}: entries must be finite")
    return X


def parse_matrix(doc, where="matrix", symmetric=True) -> np.ndarray:
    if not isinstance(doc, dict) or "n" not in doc or "data" not in doc:
        raise InputError(f'{where}: expected an object with "n" and "data"')
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InputError(f"{where}: n must be a non-negative integer")
    X = _numeric(doc["data"], (n, n), where)
    return symmat(X, name=where) if symmetric else X


def read_matrix(path, symmetric=True) -> np.ndarray:
    return parse_matrix(_load(path), str(path), symmetric)


def parse_param(doc, where="parameter") -> np.ndarray:
    if not isinstance(doc, dict) or not {"p", "q", "data"} <= set(doc):
        raise InputError(f'{where}: expected an object with "p", "q" and "data"')
    p, q = doc["p"], doc["q"]
    if not all(isinstance(v, int) and not isinstance(v, bool) and v >= 0 for v in (p, q)):
        raise InputError(f"{where}: p and q must be non-negative integers")
    return _numeric(doc["data"], (p, q), where)


def read_param(path) -> np.ndarray:
    return parse_param(_load(path), str(path))


def parse_vectors(doc, where="subspace") -> np.ndarray:
    """Spanning vectors, as ``{"n": n, "vectors": [[...], ...]}`` or a bare list."""
    if isinstance(doc, dict):
        if "vectors" not in doc:
            raise InputError(f'{where}: expected a "vectors" list')
        vecs = doc["vectors"]
        n = doc.get("n")
    else:
        vecs, n = doc, None
    if not isinstance(vecs, list):
        raise InputError(f"{where}: vectors must be a list")
    if not vecs:
        if n is None:
            raise InputError(f'{where}: an empty vector list needs "n"')
        return np.zeros((0, n))
    try:
        X = np.array(vecs, dtype=float)
    except (TypeError, ValueError):
        raise InputError(f"{where}: vectors must be lists of numbers") from None
    if X.ndim != 2 or (n is not None and X.shape[1] != n):
        raise InputError(f"{where}: vectors have inconsistent lengths")
    if not np.all(np.isfinite(X)):
        raise InputError(f"{where}: entries must be finite")
    return X


def read_vectors(path) -> np.ndarray:
    return parse_vectors(_load(path), str(path))


def parse_vector_arg(text: str) -> np.ndarray:
    """Comma-separated decimals, e.g. ``"2,0,1"``."""
    try:
        vals = [float(tok) for tok in text.split(",")]
    except ValueError:
        raise InputError(f"cannot parse vector {text!r}") from None
    x = np.array(vals)
    if not np.all(np.isfinite(x)):
        raise InputError(f"vector {text!r} has non-finite entries")
    return x


def family_text(family) -> str:
    dirs = ", ".join(_rows(D) for D in family.directions)
    return '{"p": %d, "q": %d, "dim": %d, "R0": %s, "directions": [%s]}' % (
        family.p, family.q, family.dim, _rows(family.R0), dirs)
