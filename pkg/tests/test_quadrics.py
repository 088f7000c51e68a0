import csv
import json

import numpy as np
import pytest

from loewner.errors import EmptyBoundary, NotAnEllipsoid, UnsupportedDimension
from loewner.mlbparam import mlb
from loewner.quadrics import Quadric, figure_data, includes, sample_boundary, tangency_points
from loewner.symcore import loewner_leq, span, subspace_sum

import gen

A2, B2 = np.diag([2.0, 1.0]), np.diag([1.0, 2.0])
A3, B3 = np.diag([2.0, 2.0, 1.0]), np.diag([1.0, 1.0, 2.0])


def c_theta(t):
    return mlb(A2, B2, None, [[-np.sinh(t)]])


def level(P, Q):
    return np.einsum("ij,jk,ik->i", P, Q, P)


def test_quadric_convex_flag():
    assert Quadric.of(np.eye(2)).convex
    assert Quadric.of(np.diag([1.0, 0.0])).convex
    assert not Quadric.of(np.diag([2.0, -2.0])).convex


def test_includes_examples():
    assert includes(Quadric.of(np.eye(2)), Quadric.of(np.eye(2) / 4))
    assert includes(Quadric.of(A2), Quadric.of(c_theta(0.0)))
    assert not includes(Quadric.of(np.eye(2)), Quadric.of(A2))
    with pytest.raises(NotAnEllipsoid):
        includes(Quadric.of(np.diag([2.0, -2.0])), Quadric.of(np.eye(2)))


def test_inclusion_matches_rejection_sampling():
    rng = np.random.default_rng(50)
    disagreements = 0
    for k in range(50):
        n = int(rng.integers(2, 5))
        A = gen.pd(rng, n)
        B = A - gen.psd(rng, n, int(rng.integers(1, n + 1))) if k % 2 else gen.pd(rng, n)
        U = rng.normal(size=(1000, n))
        X = U / np.sqrt(level(U, A))[:, None]
        violated = bool(np.any(level(X, B) > 1 + 1e-7))
        disagreements += includes(Quadric.of(A), Quadric.of(B)) == violated
        assert includes(Quadric.of(A), Quadric.of(B)) == loewner_leq(B, A)
    assert disagreements == 0


def test_tangency_points_examples():
    rep = tangency_points(A2, c_theta(0.0))
    assert len(rep.finite_points) == 1 and not rep.infinite_directions
    np.testing.assert_allclose(np.abs(rep.finite_points[0][0]), [0.0, 1.0], atol=1e-15)
    # along the 2D family the kernel value is 3 ch^2 - 2 > 0, so every tangency is finite
    t = 1.0
    rep = tangency_points(A2, c_theta(t))
    x = rep.finite_points[0][0]
    assert not rep.infinite_directions
    ch2 = np.cosh(t) ** 2
    np.testing.assert_allclose(x @ x, (2 * ch2 - 1) / (3 * ch2 - 2), rtol=1e-12)
    rep = tangency_points(np.diag([1.0, -1.0]), np.diag([0.0, -1.0]))
    assert not rep.finite_points and len(rep.infinite_directions) == 1
    np.testing.assert_allclose(rep.infinite_directions[0], [0.0, 1.0])
    rep = tangency_points(A2, A2)
    assert len(rep.finite_points) + len(rep.infinite_directions) == 2
    d = json.loads(json.dumps(rep.to_dict()))
    assert set(d) == {"finite_points", "infinite_directions"}


def test_tangency_points_geometry_on_random_bounds():
    rng = np.random.default_rng(51)
    for _ in range(50):
        p, q, r = gen.random_inertia(rng, n_max=4, allow_null=False)
        A, B = gen.pair(rng, p, q, r)
        shift = (abs(min(0.0, np.linalg.eigvalsh(B)[0], np.linalg.eigvalsh(A)[0])) + 1.0) * np.eye(len(A))
        A, B = A + shift, B + shift
        C = mlb(A, B, None, gen.param(rng, p, q, 2.0))
        dirs = []
        for F in (A, B):
            rep = tangency_points(F, C)
            for pt, neg in rep.finite_points:
                np.testing.assert_allclose(neg, -pt)
                assert abs(pt @ F @ pt - 1) <= 1e-7 and abs(pt @ C @ pt - 1) <= 1e-7
                g, h = F @ pt, C @ pt
                lam = (g @ h) / (h @ h)
                assert np.linalg.norm(g - lam * h) <= 1e-6
            if len(rep.directions()):
                dirs.append(rep.directions())
        assert subspace_sum(*[span(D) for D in dirs]).dim == len(A)


def test_sample_boundary_examples():
    P = sample_boundary(Quadric.of(np.eye(2)), resolution=4)
    np.testing.assert_allclose(P, [[1, 0], [0, 1], [-1, 0], [0, -1]], atol=1e-15)
    P = sample_boundary(Quadric.of(A2), resolution=64)
    assert np.max(np.abs(level(P, A2) - 1)) <= 1e-9
    np.testing.assert_allclose(np.max(np.abs(P), axis=0), [1 / np.sqrt(2), 1.0], atol=1e-12)


def test_sample_boundary_hyperbola_branches():
    C = c_theta(-1.0)
    P = sample_boundary(Quadric.of(C), resolution=50)
    assert np.max(np.abs(level(P, C) - 1)) <= 1e-9
    w, V = np.linalg.eigh(C)
    s = np.sign(P @ V[:, 1])
    assert np.sum(s > 0) == np.sum(s < 0) == 50


@pytest.mark.parametrize("form", [np.diag([1.0, 2.0, 3.0]), np.diag([1.0, 1.0, -1.0]),
                                  np.diag([1.0, -1.0, -2.0]), np.diag([1.0, 0.0, 0.0]),
                                  np.diag([2.0, 1.0, 0.0]), np.diag([1.0, -1.0, 0.0])])
def test_sample_boundary_three_dimensional(form):
    Q = gen.orthogonal(np.random.default_rng(0), 3)
    F = Q @ form @ Q.T
    P = sample_boundary(Quadric.of(F), resolution=12)
    assert len(P) and np.max(np.abs(level(P, F) - 1)) <= 1e-9


def test_sample_boundary_errors():
    with pytest.raises(EmptyBoundary):
        sample_boundary(Quadric.of(-np.eye(2)))
    with pytest.raises(UnsupportedDimension):
        sample_boundary(Quadric.of(np.eye(4)))


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def test_figure_data_two_dimensional(tmp_path):
    thetas = [0.0, -0.25, -0.549, -1.0]
    paths = figure_data(A2, B2, [[[-np.sinh(t)]] for t in thetas], tmp_path)
    names = [p.name for p in paths]
    assert names[:2] == ["EA_0.csv", "EB_0.csv"]
    assert names[2:] == [f"{kind}_{i}.{ext}" for i in range(4) for kind, ext in (("QC", "csv"), ("tangency", "json"))]
    for i, t in enumerate(thetas):
        header, P = read_csv(tmp_path / f"QC_{i}.csv")
        assert header == ["x", "y"]
        C = c_theta(t)
        assert np.max(np.abs(level(P, C) - 1)) <= 1e-9
        doc = json.loads((tmp_path / f"tangency_{i}.json").read_text())
        np.testing.assert_allclose(doc["C"], C, atol=1e-15)
    _, circle = read_csv(tmp_path / "QC_0.csv")
    for pt in ([1, 0], [0, 1], [-1, 0], [0, -1]):
        assert np.min(np.linalg.norm(circle - pt, axis=1)) <= 1e-12


def test_figure_data_three_dimensional(tmp_path):
    ws = [(0.0, 0.0), (0.0, 0.25), (0.0, 0.549), (0.0, 1.0)]
    figure_data(A3, B3, [np.array(w).reshape(2, 1) for w in ws], tmp_path)
    for i, w in enumerate(ws):
        header, P = read_csv(tmp_path / f"QC_{i}.csv")
        assert header == ["x", "y", "z"]
        C = mlb(A3, B3, None, np.array(w).reshape(2, 1))
        assert np.max(np.abs(level(P, C) - 1)) <= 1e-9
        doc = json.loads((tmp_path / f"tangency_{i}.json").read_text())
        against_b = doc["against_B"]
        assert len(against_b["finite_points"]) + len(against_b["infinite_directions"]) == 2


def test_figure_data_without_parameters(tmp_path):
    paths = figure_data(A2, B2, [], tmp_path)
    assert [p.name for p in paths] == ["EA_0.csv", "EB_0.csv"]
    for name, F in (("EA_0.csv", A2), ("EB_0.csv", B2)):
        _, P = read_csv(tmp_path / name)
        assert np.max(np.abs(level(P, F) - 1)) <= 1e-9


def test_figure_data_rejects_indefinite_pair(tmp_path):
    with pytest.raises(NotAnEllipsoid):
        figure_data(np.diag([1.0, -1.0]), B2, [], tmp_path)
    with pytest.raises(UnsupportedDimension):
        figure_data(np.eye(4), np.eye(4), [], tmp_path)
