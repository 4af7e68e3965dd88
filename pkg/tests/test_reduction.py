"""Lattice reduction and enumeration, cross-checked against dense scans."""

import math

import numpy as np
import pytest

import oracles
from latflow.errors import BudgetError, InputError
from latflow.lab.reduction import (
    enumerate_ball,
    lll_reduce,
    lll_with_transform,
    reduce_embedded,
    shortest_vector,
    siegel_count,
    sup_first_minimum,
)


def test_lll_identity_fixed():
    assert np.allclose(lll_reduce(np.eye(3)), np.eye(3))


def test_lll_shears_away_huge_entry():
    basis = np.array([[1.0, 0.0], [1e6, 1.0]])
    red = lll_reduce(basis)
    norms = sorted(np.linalg.norm(red, axis=0))
    assert norms[0] == pytest.approx(1.0)
    assert norms[1] == pytest.approx(1.0)


def test_lll_preserves_determinant():
    rng = np.random.default_rng(70)
    kept = 0
    for _ in range(100):
        n = int(rng.integers(2, 6))
        basis = rng.uniform(-3, 3, size=(n, n))
        if abs(np.linalg.det(basis)) < 1e-3:
            continue
        red, transform = lll_with_transform(basis)
        # transform[i] holds the integer coordinates of reduced vector i
        tr = np.asarray(transform, dtype=float).T
        assert abs(abs(np.linalg.det(tr)) - 1.0) < 1e-9
        assert np.allclose(basis @ tr, red, atol=1e-9)
        # covolume is preserved; orientation may flip
        assert abs(abs(np.linalg.det(red)) - abs(np.linalg.det(basis))) < 1e-6 * abs(
            np.linalg.det(basis)
        )
        kept += 1
    assert kept > 80


def test_shortest_vector_on_z_n():
    for n in range(2, 6):
        v, norm = shortest_vector(np.eye(n))
        assert norm == pytest.approx(1.0)
        assert np.allclose(v, np.eye(n)[:, 0])  # ties resolved to +e_1


def test_shortest_vector_prefers_short_axis():
    v, norm = shortest_vector(np.diag([2.0, 1.0]))
    assert norm == pytest.approx(1.0)
    assert np.allclose(v, [0.0, 1.0])


def test_shortest_vector_hexagonal():
    basis = np.array([[1.0, 0.5], [0.0, math.sqrt(3) / 2]])
    _, norm = shortest_vector(basis)
    assert norm == pytest.approx(1.0, abs=1e-12)


def test_shortest_vector_matches_naive():
    rng = np.random.default_rng(71)
    kept = 0
    for _ in range(40):
        n = int(rng.integers(2, 4))
        basis = rng.uniform(-2, 2, size=(n, n))
        if abs(np.linalg.det(basis)) < 0.3:
            continue
        _, norm = shortest_vector(basis)
        assert norm == pytest.approx(oracles.shortest_vector_naive(basis), abs=1e-9)
        kept += 1
    assert kept > 25


def test_shortest_vector_guards():
    with pytest.raises(InputError):
        shortest_vector(np.ones((2, 3)))
    with pytest.raises(InputError):
        shortest_vector(np.eye(9))


def test_siegel_count_squares():
    # Z^2: the sup ball of radius 1 holds the 8 neighbours of the origin
    assert siegel_count(np.eye(2), 1.0) == 8
    assert siegel_count(np.eye(2), 0.5) == 0
    assert siegel_count(np.eye(2), 2.0) == 24


def test_siegel_count_flowed_basis():
    # g_1 applied to Z^3 rescales the axes; count follows the box geometry:
    # the head needs a = 0, the tail allows |b|, |c| <= floor(R e)
    basis = np.diag([math.e**2, 1 / math.e, 1 / math.e])
    assert siegel_count(basis, 1.0) == 24  # b, c in {-2..2}
    assert siegel_count(basis, 0.4) == 8  # b, c in {-1..1}
    assert siegel_count(basis, 0.3) == 0  # below e^{-1}


def test_siegel_count_matches_naive():
    rng = np.random.default_rng(72)
    kept = 0
    for _ in range(40):
        n = int(rng.integers(2, 4))
        basis = rng.uniform(-2, 2, size=(n, n))
        if abs(np.linalg.det(basis)) < 0.3:
            continue
        radius = float(rng.uniform(0.4, 1.6))
        assert siegel_count(basis, radius) == oracles.box_count_naive(basis, radius)
        kept += 1
    assert kept > 25


def test_enumerate_ball_sign_convention():
    pts = enumerate_ball(np.eye(2), 1.0)
    assert sorted(tuple(int(c) for c in z) for z in pts) == [(0, 1), (1, 0)]
    for z in enumerate_ball(np.eye(3), 1.5):
        nonzero = [int(c) for c in z if c]
        assert nonzero[-1] > 0


def test_enumerate_ball_budget():
    with pytest.raises(BudgetError):
        enumerate_ball(np.eye(4), 40.0, budget=50)


def test_embedded_reduction_round_trip():
    """reduce_embedded on a plain matrix embedding must agree with the
    direct LLL path: same lattice, same shortest vector."""
    rng = np.random.default_rng(73)
    for _ in range(20):
        n = int(rng.integers(2, 5))
        basis = rng.uniform(-2, 2, size=(n, n))
        if abs(np.linalg.det(basis)) < 0.3:
            continue

        def embed(zcol, basis=basis):
            return basis @ np.asarray(zcol, dtype=float)

        z, b = reduce_embedded(embed, n)
        # column i of b is the embedding of the coordinate row z[i]
        for i in range(n):
            assert np.allclose(b[:, i], embed(z[i]))
        sup_of = lambda m, basis=basis: float(
            np.max(np.abs(basis @ np.asarray(m, dtype=float)))
        )
        _, val = sup_first_minimum(z, b, sup_of)
        # dense-scan reference for the sup-norm minimum
        best = math.inf
        bound = 4
        for zv in np.ndindex(*(2 * bound + 1,) * n):
            zz = np.asarray(zv) - bound
            if not zz.any():
                continue
            best = min(best, float(np.max(np.abs(basis @ zz.astype(float)))))
        assert val <= best + 1e-9
