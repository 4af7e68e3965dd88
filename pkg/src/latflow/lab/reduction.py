"""LLL reduction and ball enumeration for small lattices.

Bases are given by their columns.  The reduction keeps two synchronized
pictures of the lattice: an integer coordinate matrix (the unimodular
transform applied so far) and a float embedding of each column.  The float
picture drives all pivoting decisions; the integer picture is exact.  When
the embedding is a plain matrix-vector product the float picture is the
usual one, but callers whose basis has a huge dynamic range (diagonal flows
at large t) can pass a refresh callback that recomputes a column's floats
from its integer coordinates with exact arithmetic, so rounding never
accumulates across column operations.
"""

from __future__ import annotations

import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import BudgetError, InputError, InvariantError

DEFAULT_NODE_BUDGET = 5_000_000
_LLL_MAX_SWEEPS = 100_000


def gram_schmidt(b: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Column Gram-Schmidt: returns (bstar, mu, norms2) with b*_i the
    orthogonalized columns and mu[i, j] = <b_i, b*_j>/<b*_j, b*_j>."""
    b = np.asarray(b, dtype=float)
    n, m = b.shape
    bstar = np.zeros((n, m))
    mu = np.zeros((m, m))
    norms2 = np.zeros(m)
    for i in range(m):
        v = b[:, i].copy()
        for j in range(i):
            mu[i, j] = np.dot(b[:, i], bstar[:, j]) / norms2[j]
            v -= mu[i, j] * bstar[:, j]
        bstar[:, i] = v
        norms2[i] = np.dot(v, v)
        if not norms2[i] > 0 or not math.isfinite(norms2[i]):
            raise InputError("basis columns are dependent or singular")
    return bstar, mu, norms2


def _lll_core(
    ncols: int,
    embed: Callable[[List[int]], np.ndarray],
    delta: float,
) -> Tuple[List[List[int]], np.ndarray]:
    """Run LLL on the lattice spanned by embed(e_0), ..., embed(e_{ncols-1}).

    Returns (z, b): z[i] is the integer coordinate vector of reduced column i
    in terms of the original columns, b the float matrix of embedded reduced
    columns.  delta is the Lovasz constant.
    """
    z: List[List[int]] = [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    cols = [embed(c) for c in z]
    b = np.stack(cols, axis=1)

    k = 1
    sweeps = 0
    while k < ncols:
        sweeps += 1
        if sweeps > _LLL_MAX_SWEEPS:
            raise InvariantError("LLL did not terminate within the sweep cap")
        _, mu, norms2 = gram_schmidt(b)
        # size-reduce column k against k-1 .. 0, updating mu rows locally
        for j in range(k - 1, -1, -1):
            r = mu[k, j]
            if not math.isfinite(r):
                raise InvariantError("non-finite projection during reduction")
            ri = int(round(r))
            if ri:
                z[k] = [zk - ri * zj for zk, zj in zip(z[k], z[j])]
                b[:, k] = embed(z[k])
                for i in range(j):
                    mu[k, i] -= ri * mu[j, i]
                mu[k, j] -= ri
        if norms2[k] >= (delta - mu[k, k - 1] ** 2) * norms2[k - 1]:
            k += 1
        else:
            z[k], z[k - 1] = z[k - 1], z[k]
            b[:, [k - 1, k]] = b[:, [k, k - 1]]
            k = max(k - 1, 1)
    return z, b


def _matrix_embed(basis: np.ndarray) -> Callable[[List[int]], np.ndarray]:
    def embed(zcol: List[int]) -> np.ndarray:
        return basis @ np.array(zcol, dtype=float)

    return embed


def lll_with_transform(
    basis: np.ndarray,
    delta: float = 0.99,
) -> Tuple[np.ndarray, List[List[int]]]:
    """LLL-reduce the columns; returns (reduced, z) with z the list of
    integer coordinate vectors of the reduced columns."""
    basis = np.asarray(basis, dtype=float)
    if basis.ndim != 2:
        raise InputError("basis must be a matrix")
    n, m = basis.shape
    if m < 1 or m > n:
        raise InputError(f"need 1 <= #columns <= dim, got {m} columns in R^{n}")
    if not 0.25 < delta <= 0.999999:
        raise InputError(f"delta out of range: {delta}")
    if m == 1:
        if not np.any(basis[:, 0]):
            raise InputError("basis columns are dependent or singular")
        return basis.copy(), [[1]]
    z, b = _lll_core(m, _matrix_embed(basis), delta)
    return b, z


def lll_reduce(basis: np.ndarray, delta: float = 0.99) -> np.ndarray:
    """Reduced column basis of the same lattice (unimodular transform)."""
    reduced, _ = lll_with_transform(basis, delta)
    return reduced


def enumerate_ball(
    basis: np.ndarray,
    radius: float,
    budget: int = DEFAULT_NODE_BUDGET,
) -> List[np.ndarray]:
    """Integer coefficient vectors z != 0 with ||basis @ z|| <= radius,
    one representative per +/- pair (the highest-index nonzero entry of z
    is positive).

    The basis should already be reduced or the search tree explodes; the
    node budget turns that into a BudgetError instead of a hang.
    """
    basis = np.asarray(basis, dtype=float)
    if radius < 0:
        raise InputError("radius must be nonnegative")
    _, mu, norms2 = gram_schmidt(basis)
    m = basis.shape[1]
    r2 = radius * radius
    out: List[np.ndarray] = []
    zvec = [0] * m
    nodes = 0

    def descend(level: int, remaining: float, nonzero_above: bool) -> None:
        nonlocal nodes
        if level < 0:
            if nonzero_above:
                out.append(np.array(zvec, dtype=np.int64))
            return
        center = -sum(mu[j, level] * zvec[j] for j in range(level + 1, m))
        span = math.sqrt(max(remaining, 0.0) / norms2[level])
        lo = math.ceil(center - span - 1e-12)
        hi = math.floor(center + span + 1e-12)
        if not nonzero_above and lo < 0:
            lo = 0
        for zi in range(lo, hi + 1):
            nodes += 1
            if nodes > budget:
                raise BudgetError(
                    f"enumeration exceeded the node budget ({budget})"
                )
            offset = zi - center
            used = offset * offset * norms2[level]
            if used > remaining + 1e-9 * (1.0 + remaining):
                continue
            zvec[level] = zi
            descend(level - 1, remaining - used, nonzero_above or zi != 0)
        zvec[level] = 0

    descend(m - 1, r2, False)
    return out


def shortest_vector(basis: np.ndarray) -> Tuple[np.ndarray, float]:
    """Shortest nonzero vector in the Euclidean norm and its length.

    Dimension is capped at 8.  Among equal-length minimizers (both signs
    considered) the lexicographically largest coordinate tuple is returned,
    so Z^n yields e_1 rather than -e_1 or e_2.
    """
    basis = np.asarray(basis, dtype=float)
    if basis.ndim != 2 or basis.shape[0] != basis.shape[1]:
        raise InputError("shortest_vector expects a square basis matrix")
    if basis.shape[0] > 8:
        raise InputError("shortest_vector is capped at dimension 8")
    reduced, _ = lll_with_transform(basis)
    bound = float(min(np.linalg.norm(reduced, axis=0)))
    cands = enumerate_ball(reduced, bound * (1.0 + 1e-9))
    if not cands:
        raise InvariantError("enumeration missed the reduced basis vectors")
    best_v: Optional[np.ndarray] = None
    best_n2 = math.inf
    for z in cands:
        v = reduced @ z.astype(float)
        n2 = float(np.dot(v, v))
        for w in (v, -v):
            if n2 < best_n2 * (1.0 - 1e-12):
                best_v, best_n2 = w.copy(), n2
            elif n2 <= best_n2 * (1.0 + 1e-12) and tuple(w) > tuple(best_v):
                best_v, best_n2 = w.copy(), min(best_n2, n2)
    return best_v, math.sqrt(best_n2)


def siegel_count(
    basis: np.ndarray,
    box_radius: float,
    budget: int = DEFAULT_NODE_BUDGET,
) -> int:
    """Number of nonzero lattice vectors v with sup_norm(v) <= box_radius.

    Always even, since v and -v land in the box together.
    """
    if not box_radius > 0:
        raise InputError("box radius must be positive")
    basis = np.asarray(basis, dtype=float)
    reduced, _ = lll_with_transform(basis)
    n = basis.shape[0]
    ball = box_radius * math.sqrt(n) * (1.0 + 1e-9)
    half = 0
    for z in enumerate_ball(reduced, ball, budget):
        v = reduced @ z.astype(float)
        if float(np.max(np.abs(v))) <= box_radius + 1e-9:
            half += 1
    return 2 * half


def reduce_embedded(
    embed: Callable[[List[int]], np.ndarray],
    ncols: int,
    delta: float = 0.99,
) -> Tuple[List[List[int]], np.ndarray]:
    """LLL on the lattice spanned by embed(e_i); see _lll_core.

    The callback is re-applied to the integer coordinates after every
    column operation, so a basis with a huge dynamic range stays accurate
    as long as the callback itself evaluates exactly.
    """
    return _lll_core(ncols, embed, delta)


def _coords(z: List[List[int]], zc: np.ndarray) -> List[int]:
    ncols = len(z)
    return [int(sum(z[i][r] * int(zc[i]) for i in range(ncols))) for r in range(ncols)]


def sup_first_minimum(
    z: List[List[int]],
    b: np.ndarray,
    sup_of: Callable[[List[int]], float],
    budget: int = DEFAULT_NODE_BUDGET,
) -> Tuple[List[int], float]:
    """First minimum of the sup norm for a reduced embedded lattice.

    (z, b) comes from reduce_embedded; sup_of evaluates the sup norm of an
    integer coordinate vector, exactly where it matters (the flow
    experiments recompute the expanding coordinate without cancellation).
    Returns (coordinates, value).
    """
    best_m = min(z, key=sup_of)
    best = sup_of(best_m)
    ball = best * math.sqrt(b.shape[0]) * (1.0 + 1e-9)
    for zc in enumerate_ball(b, ball, budget):
        m = _coords(z, zc)
        s = sup_of(m)
        if s < best:
            best, best_m = s, m
    return list(best_m), best


def box_count_embedded(
    z: List[List[int]],
    b: np.ndarray,
    sup_of: Callable[[List[int]], float],
    box_radius: float,
    budget: int = DEFAULT_NODE_BUDGET,
) -> int:
    """siegel_count for a reduced embedded lattice (see sup_first_minimum)."""
    if not box_radius > 0:
        raise InputError("box radius must be positive")
    ball = box_radius * math.sqrt(b.shape[0]) * (1.0 + 1e-9)
    half = 0
    for zc in enumerate_ball(b, ball, budget):
        if sup_of(_coords(z, zc)) <= box_radius + 1e-9:
            half += 1
    return 2 * half
