import numpy as np
import pytest

from loewner.errors import NotPositiveSemidefinite, NotPsdResult
from loewner.mlbparam import mlb, mub
from loewner.psdshort import (
    bridge_param,
    generalized_short,
    gudder_unique,
    psd_mlb,
    psd_reduce,
    rank_bound,
    verify_psd_mlb,
)
from loewner.symcore import congruence_reduce, inertia, kernel_basis, loewner_leq, spectral_norm

import gen


def parallel_sum_short(X, Y, t=1e8):
    """``lim X : tY`` via ``X - X (X + tY)^{-1} X``, an independent route to ``[Y]X``."""
    return X - X @ np.linalg.solve(X + t * Y, X)


# ---------------------------------------------------------------- shorts

def test_short_examples():
    X = np.array([[2.0, 1.0], [1.0, 1.0]])
    np.testing.assert_allclose(generalized_short(X, np.diag([1.0, 0.0])), np.diag([1.0, 0.0]), atol=1e-15)
    np.testing.assert_allclose(generalized_short(X, np.eye(2)), X)
    np.testing.assert_array_equal(generalized_short(X, np.zeros((2, 2))), np.zeros((2, 2)))
    with pytest.raises(NotPositiveSemidefinite):
        generalized_short(np.diag([1.0, -1.0]), np.eye(2))


def test_short_properties_and_parallel_sum_oracle():
    rng = np.random.default_rng(10)
    for _ in range(100):
        n = int(rng.integers(1, 7))
        X = gen.psd(rng, n, n) + 0.05 * np.eye(n)
        k = int(rng.integers(0, n + 1))
        Y = gen.with_inertia(rng, k, 0, n - k)
        S = generalized_short(X, Y)
        assert loewner_leq(np.zeros((n, n)), S) and loewner_leq(S, X)
        ker_y = kernel_basis(Y).basis
        assert spectral_norm(S @ ker_y) <= 1e-7 * max(1.0, spectral_norm(X))
        oracle = parallel_sum_short(X, Y)
        assert spectral_norm(S - oracle) <= 1e-5 * max(1.0, spectral_norm(X))


def test_short_grid_maximality_2x2():
    rng = np.random.default_rng(12)
    for _ in range(100):
        X = gen.psd(rng, 2, int(rng.integers(1, 3)))
        y = gen.unit(rng, 2)
        S = generalized_short(X, np.outer(y, y))
        s = float(y @ S @ y)
        for z in np.arange(0.0, s + 2.0, 1e-2):
            if z >= s + 1e-3:
                assert not loewner_leq(z * np.outer(y, y), X)


# ---------------------------------------------------------------- reduction

def test_psd_reduce_examples():
    red = psd_reduce(np.diag([2.0, 1.0]), np.diag([1.0, 2.0]))
    assert (red.a, red.b, red.inertia_mid) == (0, 0, (1, 1, 0))
    red = psd_reduce(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    assert (red.a, red.b, red.c) == (1, 1, 0)
    assert red.inertia_mid[:2] == (0, 0)
    rng = np.random.default_rng(0)
    A, B = gen.pd(rng, 4), gen.pd(rng, 4)
    red = psd_reduce(A, B)
    assert red.a == red.b == 0 and red.c + red.r == 4


def test_psd_reduce_frame_residuals():
    rng = np.random.default_rng(13)
    for _ in range(100):
        A, B = gen.psd_pair(rng)
        red = psd_reduce(A, B)
        scale = max(1.0, spectral_norm(A), spectral_norm(B))
        TA, TB = red.T.T @ A @ red.T, red.T.T @ B @ red.T
        assert spectral_norm(TA - red.frame_of_A()) <= 1e-8 * scale * max(1.0, spectral_norm(red.T)) ** 2
        assert spectral_norm(TB - red.frame_of_B()) <= 1e-8 * scale * max(1.0, spectral_norm(red.T)) ** 2
        if red.c:
            assert np.linalg.eigvalsh(red.S_A)[0] > 0 and np.linalg.eigvalsh(red.S_B)[0] > 0


def test_rank_bound_examples():
    rng = np.random.default_rng(1)
    assert rank_bound(gen.pd(rng, 4), gen.pd(rng, 4)) == 4
    assert rank_bound(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == 0
    P = gen.psd(rng, 5, 2)
    assert rank_bound(P, P) == 5


# ---------------------------------------------------------------- psd_mlb

def test_psd_mlb_examples():
    A, B = np.diag([2.0, 1.0]), np.diag([1.0, 2.0])
    np.testing.assert_allclose(psd_mlb(A, B, [[0.0]]), np.eye(2), atol=1e-14)
    np.testing.assert_allclose(psd_mlb(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])), np.zeros((2, 2)), atol=1e-15)
    rng = np.random.default_rng(2)
    P = gen.psd(rng, 3, 2)
    np.testing.assert_allclose(psd_mlb(P, P), P, atol=1e-12)


def test_psd_mlb_rejects_inadmissible_parameter():
    A, B = np.diag([2.0, 1.0]), np.diag([1.0, 2.0])
    with pytest.raises(NotPsdResult):
        psd_mlb(A, B, [[3.0]])


def test_psd_mlb_comparable_pair_is_smaller():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(1, 6))
        A = gen.psd(rng, n, int(rng.integers(0, n + 1)))
        B = A + gen.psd(rng, n, int(rng.integers(0, n + 1)))
        np.testing.assert_allclose(psd_mlb(A, B), A, atol=1e-8 * max(1.0, spectral_norm(B)))
        assert gudder_unique(A, B)


def test_rank_bound_attained_with_admissible_parameters():
    rng = np.random.default_rng(14)
    for _ in range(100):
        A, B = gen.psd_pair(rng)
        red = psd_reduce(A, B)
        p, q, _ = red.inertia_mid
        for M in (None, gen.param(rng, q, p, 2.0)):
            C = psd_mlb(A, B, bridge_param(red, M), red=red)
            assert inertia(C).p == rank_bound(A, B)
            assert verify_psd_mlb(A, B, C)


def test_shared_kernel_leaves_the_bound_unattained():
    A, B = np.diag([2.0, 1.0, 0.0]), np.diag([1.0, 2.0, 0.0])
    assert rank_bound(A, B) == 3
    C = psd_mlb(A, B)
    assert inertia(C).p == 2
    assert not verify_psd_mlb(A, B, C)


def test_verify_examples():
    rng = np.random.default_rng(6)
    A, B = gen.pd(rng, 3), gen.pd(rng, 3)
    assert not verify_psd_mlb(A, B, np.zeros((3, 3)))
    A2, B2 = np.diag([2.0, 1.0]), np.diag([1.0, 2.0])
    indefinite = mlb(A2, B2, None, [[-np.sinh(-1.0)]])
    assert inertia(indefinite).q >= 1
    assert not verify_psd_mlb(A2, B2, indefinite)
    assert verify_psd_mlb(A2, B2, np.eye(2))


# ---------------------------------------------------------------- uniqueness

def test_gudder_examples():
    assert gudder_unique(np.eye(2), 2 * np.eye(2))
    assert not gudder_unique(np.diag([2.0, 1.0]), np.diag([1.0, 2.0]))
    assert gudder_unique(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))


def test_gudder_agrees_with_parameter_sampling():
    rng = np.random.default_rng(15)
    for _ in range(50):
        A, B = gen.psd_pair(rng, n_max=5)
        red = psd_reduce(A, B)
        p, q, _ = red.inertia_mid
        Cs = [psd_mlb(A, B, bridge_param(red, gen.param(rng, q, p, 3.0)), red=red) for _ in range(4)]
        spread = max(spectral_norm(C - Cs[0]) for C in Cs)
        if gudder_unique(A, B):
            assert spread <= 1e-8 * max(1.0, spectral_norm(A), spectral_norm(B))
        else:
            assert spread > 1e-6


def test_inverse_bridge_on_definite_pairs():
    rng = np.random.default_rng(16)
    for _ in range(50):
        n = int(rng.integers(1, 6))
        A, B = gen.pd(rng, n), gen.pd(rng, n)
        Ai, Bi = np.linalg.inv(A), np.linalg.inv(B)
        red = congruence_reduce(Ai, Bi)
        p, q, _ = red.inertia
        C = np.linalg.inv(mub(Ai, Bi, red, gen.param(rng, p, q, 3.0)))
        assert verify_psd_mlb(A, B, C)
