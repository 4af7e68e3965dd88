"""Instability machinery for the diagonal torus of SL_n.

A nonzero vector v in a representation has a weight support; the destabilizing
one-parameter subgroups are read off the convex hull of the sum-zero
projections of those weights. Everything here runs in exact rational
arithmetic: the hull's nearest point to the origin is found by Wolfe's
min-norm-point algorithm, which terminates after finitely many corral updates
when the pivots are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InputError, InvariantError
from .exact import ExactMatrix, ExactScalar
from .wedge import WedgeIndex

Weight = Tuple[int, ...]
Point = Tuple[Fraction, ...]


def weight_support(v: Sequence, rep, n: int) -> frozenset:
    """Set of torus weights carrying a nonzero coordinate of v.

    rep is 'standard' (v: n coordinates), ('wedge', k) (v: C(n,k) coordinates
    in lex order), or 'adjoint' (v: n x n matrix entries, row-major or nested;
    off-diagonal (i,j) has weight e_i - e_j, the diagonal weight is 0).
    """
    if rep == "standard":
        coords = _coerce_vec(v)
        if len(coords) != n:
            raise InputError(f"standard rep of SL_{n} needs {n} coordinates")
        out = set()
        for i, c in enumerate(coords):
            if c:
                w = [0] * n
                w[i] = 1
                out.add(tuple(w))
        return frozenset(out)
    if isinstance(rep, tuple) and len(rep) == 2 and rep[0] == "wedge":
        k = rep[1]
        idx = WedgeIndex(n, k)
        coords = _coerce_vec(v)
        if len(coords) != idx.dim:
            raise InputError(f"wedge({k}) of SL_{n} needs {idx.dim} coordinates")
        out = set()
        for pos, c in enumerate(coords):
            if c:
                combo = idx.unrank(pos)
                w = [0] * n
                for i in combo:
                    w[i] = 1
                out.add(tuple(w))
        return frozenset(out)
    if rep == "adjoint":
        if isinstance(v, ExactMatrix):
            rows = [list(r) for r in v.rows]
        else:
            rows = [_coerce_vec(row) for row in v]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise InputError(f"adjoint rep of SL_{n} needs an {n}x{n} matrix")
        out = set()
        for i in range(n):
            for j in range(n):
                if not rows[i][j]:
                    continue
                if i == j:
                    out.add((0,) * n)
                else:
                    w = [0] * n
                    w[i] = 1
                    w[j] = -1
                    out.add(tuple(w))
        return frozenset(out)
    raise InputError(f"unsupported representation {rep!r}")


def _coerce_vec(v) -> List[ExactScalar]:
    if isinstance(v, ExactMatrix):
        if v.nrows == 1:
            return v.row(0)
        if v.ncols == 1:
            return v.col(0)
        raise InputError("expected a vector")
    return [ExactScalar.coerce(x) for x in v]


def m_value(v: Sequence, lam: Sequence[int], rep, n: int) -> int:
    """min over the weight support of the pairing <chi, lam>."""
    support = weight_support(v, rep, n)
    if not support:
        raise InputError("m_value of the zero vector")
    return min(sum(c * l for c, l in zip(chi, lam)) for chi in support)


# -- exact min-norm point -----------------------------------------------------


def _dot(p: Point, q: Point) -> Fraction:
    return sum((a * b for a, b in zip(p, q)), Fraction(0))


def _affine_minimizer(points: List[Point]) -> List[Fraction]:
    """Coefficients alpha (summing to 1) of the min-norm point of the affine
    hull of `points`, from the KKT system [[Gram, 1], [1^T, 0]]."""
    k = len(points)
    size = k + 1
    aug: List[List[Fraction]] = []
    for i in range(k):
        row = [_dot(points[i], points[j]) for j in range(k)] + [Fraction(1)]
        aug.append(row + [Fraction(0)])
    aug.append([Fraction(1)] * k + [Fraction(0), Fraction(1)])
    # Gaussian elimination with partial (first nonzero) pivoting
    for col in range(size):
        piv = next((r for r in range(col, size) if aug[r][col] != 0), None)
        if piv is None:
            raise InvariantError("affinely dependent corral in min-norm point")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [aug[r][j] - f * aug[col][j] for j in range(size + 1)]
    return [aug[i][size] for i in range(k)]


def min_norm_point(points: Sequence[Sequence]) -> Tuple[Point, Dict[int, Fraction]]:
    """Nearest point to the origin in the convex hull of a finite rational set.

    Wolfe's algorithm with exact pivots. Returns the point and a sparse convex
    combination {input index: coefficient} realizing it.
    """
    pts: List[Point] = [tuple(Fraction(c) for c in p) for p in points]
    if not pts:
        raise InputError("min_norm_point of an empty set")
    dims = {len(p) for p in pts}
    if len(dims) != 1:
        raise InputError("points of mixed dimension")
    start = min(range(len(pts)), key=lambda i: (_dot(pts[i], pts[i]), i))
    corral = [start]
    coeffs = [Fraction(1)]
    x = pts[start]
    for _ in range(40 * len(pts) + 100):
        xx = _dot(x, x)
        cand = min(range(len(pts)), key=lambda i: (_dot(x, pts[i]), i))
        if _dot(x, pts[cand]) >= xx or cand in corral:
            return x, dict(zip(corral, coeffs))
        corral.append(cand)
        coeffs = coeffs + [Fraction(0)]
        while True:
            alpha = _affine_minimizer([pts[i] for i in corral])
            if all(a > 0 for a in alpha):
                coeffs = alpha
                break
            theta = min(
                b / (b - a)
                for a, b in zip(alpha, coeffs)
                if a <= 0 and b > a
            )
            merged = [b + theta * (a - b) for a, b in zip(alpha, coeffs)]
            keep = [i for i, c in enumerate(merged) if c > 0]
            if not keep:
                raise InvariantError("empty corral after line search")
            corral = [corral[i] for i in keep]
            coeffs = [merged[i] for i in keep]
        x = tuple(
            sum((coeffs[j] * pts[corral[j]][d] for j in range(len(corral))),
                Fraction(0))
            for d in range(len(pts[0]))
        )
    raise InvariantError("min-norm point did not converge")


def zero_in_hull(points: Sequence[Sequence]) -> bool:
    """Exact feasibility of 0 = sum alpha_i p_i, alpha >= 0, sum alpha_i = 1,
    by phase-one simplex with Bland's rule."""
    pts = [tuple(Fraction(c) for c in p) for p in points]
    if not pts:
        return False
    dim = len(pts[0])
    m = dim + 1
    nvar = len(pts)
    # rows: dim equality constraints + the convexity row; rhs last
    table: List[List[Fraction]] = []
    for d in range(dim):
        row = [pts[j][d] for j in range(nvar)]
        rhs = Fraction(0)
        table.append(row + [rhs])
    table.append([Fraction(1)] * nvar + [Fraction(1)])
    # flip rows to make rhs nonnegative (only the sign of the equality matters)
    for row in table:
        if row[-1] < 0:
            for j in range(len(row)):
                row[j] = -row[j]
    # append artificial columns
    for i, row in enumerate(table):
        rhs = row.pop()
        row.extend(Fraction(1) if k == i else Fraction(0) for k in range(m))
        row.append(rhs)
    basis = list(range(nvar, nvar + m))
    total = nvar + m
    cost = [Fraction(0)] * nvar + [Fraction(1)] * m
    # reduced costs c_j - z_j for the all-artificial starting basis
    red = [cost[j] - sum(table[i][j] for i in range(m)) for j in range(total)]
    while True:
        # Bland: smallest improving index enters, smallest-index tie leaves
        enter = next((j for j in range(total) if red[j] < 0), None)
        if enter is None:
            break
        ratios = [
            (table[i][total] / table[i][enter], basis[i], i)
            for i in range(m)
            if table[i][enter] > 0
        ]
        if not ratios:
            raise InvariantError("unbounded phase-one simplex")
        _, _, leave = min(ratios)
        _pivot(table, red, leave, enter, total)
        basis[leave] = enter
    value = sum(table[i][total] * cost[basis[i]] for i in range(m))
    return value == 0


def _pivot(table, red, leave, enter, total):
    inv = 1 / table[leave][enter]
    table[leave] = [x * inv for x in table[leave]]
    for i in range(len(table)):
        if i != leave and table[i][enter] != 0:
            f = table[i][enter]
            table[i] = [table[i][j] - f * table[leave][j] for j in range(total + 1)]
    f = red[enter]
    if f != 0:
        for j in range(total):
            red[j] -= f * table[leave][j]


# -- Kempf optimum ------------------------------------------------------------


@dataclass(frozen=True)
class KempfResult:
    unstable: bool
    b2: Fraction
    lam_star: Optional[Tuple[int, ...]]
    m_star: Optional[Fraction]
    hull_point: Optional[Point]

    @property
    def b(self) -> float:
        return math.sqrt(float(self.b2))

    def to_json(self) -> dict:
        blocks = None
        mask = None
        if self.lam_star is not None:
            mask, blocks = parabolic_of(self.lam_star)
        return {
            "unstable": self.unstable,
            "b_squared": [self.b2.numerator, self.b2.denominator],
            "b": self.b,
            "lambda_star": list(self.lam_star) if self.lam_star else None,
            "m_star": (
                [self.m_star.numerator, self.m_star.denominator]
                if self.m_star is not None else None
            ),
            "blocks": blocks,
        }


def project_sum_zero(chi: Sequence) -> Point:
    fr = [Fraction(c) for c in chi]
    n = len(fr)
    mean = sum(fr, Fraction(0)) / n
    return tuple(c - mean for c in fr)


def kempf_optimum(v: Sequence, rep, n: int) -> KempfResult:
    """Best destabilizing diagonal cocharacter for v.

    The optimum of m(v, lam)/||lam|| over sum-zero integer lam equals the
    Euclidean distance from the origin to the hull of the projected weight
    support; the maximizer lies on the ray through the nearest hull point.
    lam_star is that ray's primitive integer vector, or None when 0 is
    already inside the hull (semistable).
    """
    support = sorted(weight_support(v, rep, n))
    if not support:
        raise InputError("kempf_optimum of the zero vector")
    projected = [project_sum_zero(chi) for chi in support]
    h, _ = min_norm_point(projected)
    b2 = _dot(h, h)
    if b2 == 0:
        return KempfResult(unstable=False, b2=Fraction(0), lam_star=None,
                           m_star=None, hull_point=None)
    scale_lcm = 1
    for c in h:
        scale_lcm = scale_lcm * c.denominator // math.gcd(scale_lcm, c.denominator)
    ints = [int(c * scale_lcm) for c in h]
    g = 0
    for c in ints:
        g = math.gcd(g, abs(c))
    lam = tuple(c // g for c in ints)
    m_star = Fraction(m_value(v, lam, rep, n))
    # the optimum is rational in the squares: m(v, lam*)^2 == B^2 * ||lam*||^2
    lam2 = sum(Fraction(c * c) for c in lam)
    if m_star * m_star != b2 * lam2 or m_star <= 0:
        raise InvariantError("destabilizing cocharacter failed the ratio check")
    return KempfResult(unstable=True, b2=b2, lam_star=lam, m_star=m_star,
                       hull_point=h)


def parabolic_of(lam: Sequence[int]):
    """Mask and block partition of the subgroup whose conjugates by the
    one-parameter subgroup of lam stay bounded: entry (i, j) allowed iff
    lam_i >= lam_j; blocks are the level sets in order of appearance."""
    lam = list(lam)
    n = len(lam)
    mask = [[lam[i] >= lam[j] for j in range(n)] for i in range(n)]
    blocks: List[List[int]] = []
    seen: Dict[int, int] = {}
    for i, value in enumerate(lam):
        if value in seen:
            blocks[seen[value]].append(i)
        else:
            seen[value] = len(blocks)
            blocks.append([i])
    return mask, blocks
