"""Independent reference implementations used to freeze expected values.

Everything here is deliberately naive: permutation sums, exhaustive
enumeration, dense integer grids, subset solves in exact arithmetic.  Slow
but obviously correct, which is the point; the library under test must
agree with these, never the other way around.
"""

import math
from fractions import Fraction
from itertools import combinations, product

import numpy as np


def det_by_permutations(rows):
    """Exact determinant as the signed permutation sum.  Fine up to 6x6."""
    n = len(rows)
    rows = [[Fraction(x) for x in r] for r in rows]
    total = Fraction(0)
    for perm, sign in _signed_permutations(n):
        term = Fraction(1)
        for i in range(n):
            term *= rows[i][perm[i]]
        total += sign * term
    return total


def _signed_permutations(n):
    def rec(remaining, acc, sign):
        if not remaining:
            yield acc, sign
            return
        for pos, x in enumerate(remaining):
            yield from rec(remaining[:pos] + remaining[pos + 1:],
                           acc + [x], sign * (-1) ** pos)
    yield from rec(list(range(n)), [], 1)


def pfaffian_by_matchings(rows):
    """Pfaffian of an antisymmetric matrix as the signed sum over perfect
    matchings.  The sign of a matching is the parity of the permutation
    (i1 j1 i2 j2 ...) written with i < j inside pairs and i1 < i2 < ..."""
    n = len(rows)
    if n % 2:
        return Fraction(0)
    rows = [[Fraction(x) for x in r] for r in rows]

    def rec(indices):
        if not indices:
            return Fraction(1)
        i0 = indices[0]
        total = Fraction(0)
        for pos in range(1, len(indices)):
            j = indices[pos]
            rest = indices[1:pos] + indices[pos + 1:]
            total += (-1) ** (pos - 1) * rows[i0][j] * rec(rest)
        return total

    return rec(list(range(n)))


def minors_matrix(rows, k):
    """Matrix of k x k minors, rows and columns indexed by k-subsets in lex
    order: the action of the matrix on the k-th exterior power."""
    n = len(rows)
    subsets = list(combinations(range(n), k))
    out = []
    for rowset in subsets:
        out_row = []
        for colset in subsets:
            sub = [[rows[i][j] for j in colset] for i in rowset]
            out_row.append(det_by_permutations(sub))
        out.append(out_row)
    return out


# -- lattice enumeration -------------------------------------------------------


def _coeff_bound(basis, radius):
    inv = np.linalg.inv(np.asarray(basis, dtype=float))
    return int(math.ceil(radius * np.abs(inv).sum(axis=1).max())) + 1


def shortest_vector_naive(basis):
    """Euclidean first minimum by dense coefficient enumeration."""
    basis = np.asarray(basis, dtype=float)
    n = basis.shape[1]
    start = float(np.linalg.norm(basis, axis=0).min())
    bound = _coeff_bound(basis, start)
    best = math.inf
    for z in product(range(-bound, bound + 1), repeat=n):
        if not any(z):
            continue
        v = basis @ np.asarray(z, dtype=float)
        best = min(best, float(np.linalg.norm(v)))
    return best


def box_count_naive(basis, radius):
    """Nonzero lattice points with sup-norm <= radius, dense enumeration."""
    basis = np.asarray(basis, dtype=float)
    n = basis.shape[1]
    bound = _coeff_bound(basis, radius * math.sqrt(n))
    count = 0
    for z in product(range(-bound, bound + 1), repeat=n):
        if not any(z):
            continue
        v = basis @ np.asarray(z, dtype=float)
        if float(np.max(np.abs(v))) <= radius + 1e-9:
            count += 1
    return count


def lambda1_sup_naive_n3(t, v1, v2):
    """Sup-norm first minimum of g_t u(v) Z^3 by direct (b, c) scanning.

    Only the integers a nearest to -(v1 b + v2 c) can matter for each tail,
    and tails with e^{-t} max(|b|,|c|) > 1 cannot beat the vector e_2."""
    e2t, emt = math.exp(2 * t), math.exp(-t)
    kmax = int(math.floor(math.exp(t))) + 1
    best = math.inf
    for b in range(-kmax, kmax + 1):
        for c in range(-kmax, kmax + 1):
            y = v1 * b + v2 * c
            for a in (math.floor(-y), math.ceil(-y)):
                if a == 0 and b == 0 and c == 0:
                    continue
                sup = max(e2t * abs(a + y), emt * abs(b), emt * abs(c))
                best = min(best, sup)
    # pure head vectors (b = c = 0)
    best = min(best, e2t)
    return best


# -- instability ---------------------------------------------------------------


def kempf_brute(weights, radius, n):
    """Best destabilizing ratio max min_chi <chi, lam> / ||lam||_2 over
    nonzero sum-zero integer lam with ||lam||_2 <= radius.  Vectorized grid
    scan; n <= 4 keeps the grid tractable at radius 50."""
    w = np.asarray([[float(c) for c in chi] for chi in weights])
    r = int(radius)
    if n == 2:
        lams = np.array([[a, -a] for a in range(-r, r + 1) if a])
    else:
        axes = [np.arange(-r, r + 1)] * (n - 1)
        grid = np.meshgrid(*axes, indexing="ij")
        flat = np.stack([g.ravel() for g in grid], axis=1)
        last = -flat.sum(axis=1, keepdims=True)
        lams = np.concatenate([flat, last], axis=1)
        keep = np.any(lams != 0, axis=1)
        lams = lams[keep]
    norms = np.sqrt((lams.astype(float) ** 2).sum(axis=1))
    inside = norms <= radius + 1e-12
    lams, norms = lams[inside], norms[inside]
    vals = w @ lams.T.astype(float)
    mins = vals.min(axis=0)
    return float((mins / norms).max())


def _solve_fraction(a, b):
    """Gaussian elimination over Fraction; returns None when singular."""
    n = len(a)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = Fraction(1) / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def min_norm_point_subsets(points):
    """Exact squared distance from the origin to the convex hull, by
    minimizing over every affinely independent subset of the points."""
    pts = [tuple(Fraction(c) for c in p) for p in points]
    best = None
    for size in range(1, len(pts) + 1):
        for subset in combinations(range(len(pts)), size):
            base = pts[subset[0]]
            diffs = [tuple(c - b for c, b in zip(pts[i], base))
                     for i in subset[1:]]
            if diffs:
                gram = [[sum(x * y for x, y in zip(d1, d2)) for d2 in diffs]
                        for d1 in diffs]
                rhs = [-sum(x * b for x, b in zip(d, base)) for d in diffs]
                coeffs = _solve_fraction(gram, rhs)
                if coeffs is None or any(c < 0 for c in coeffs):
                    continue
                if sum(coeffs, Fraction(0)) > 1:
                    continue
                point = list(base)
                for c, d in zip(coeffs, diffs):
                    for j in range(len(point)):
                        point[j] += c * d[j]
            else:
                point = list(base)
            norm2 = sum(c * c for c in point)
            if best is None or norm2 < best:
                best = norm2
    return best


# -- diophantine ---------------------------------------------------------------


def dirichlet_vect_naive(x, delta, big_t):
    """(q, p) with 1 <= q <= T^n and ||q x + p|| <= delta/T, or None."""
    x = np.asarray(x, dtype=float)
    n = x.size
    qmax = int(math.floor(big_t ** n * (1 + 1e-12)))
    for q in range(1, qmax + 1):
        vals = q * x
        res = float(np.max(np.abs(vals - np.round(vals))))
        if res <= delta / big_t + 1e-12:
            return q
    return None


def dirichlet_lf_naive(x, delta, big_t):
    """Integer q != 0 with ||q|| <= T and |x . q + p| <= delta T^-n."""
    x = np.asarray(x, dtype=float)
    n = x.size
    qb = int(math.floor(big_t * (1 + 1e-12)))
    thr = delta * big_t ** (-n) + 1e-12
    for q in product(range(-qb, qb + 1), repeat=n):
        if not any(q):
            continue
        val = float(np.dot(x, q))
        if abs(val - round(val)) <= thr:
            return q
    return None


# -- descent -------------------------------------------------------------------


def wedge_norm_content(w):
    """(sum of squares, integer content) of an integer vector; the covolume
    of the saturated span lattice of a decomposable w is sqrt(norm2)/content."""
    ints = [int(x) for x in w]
    norm2 = sum(x * x for x in ints)
    content = 0
    for x in ints:
        content = math.gcd(content, abs(x))
    return norm2, content
