"""Diophantine approximation probes.

Membership in the approximation sets W_r / W'_r (inhomogeneous form
||A q + p|| <= C ||q||^(-r), sup norms) can only be certified exactly for
rational targets; everything else is graded evidence from finite searches.
Float scans rank candidates; exact arithmetic confirms certificates. The two
routes are kept separate on purpose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import BudgetError, InputError
from .exact import ExactMatrix, ExactScalar

DEFAULT_ENUM_BUDGET = 4_000_000


@dataclass(frozen=True)
class ApproxRecord:
    """One best-approximation witness: p is the nearest-integer vector, so the
    residual is at most 1/2 in every coordinate."""

    qnorm: int
    q: Tuple[int, ...]
    p: Tuple[int, ...]
    residual: float
    exact_zero: bool = False

    def quality(self, r: float) -> float:
        return self.residual * self.qnorm**r


def _as_float_matrix(a) -> np.ndarray:
    if isinstance(a, ExactMatrix):
        return a.to_float()
    arr = np.asarray(
        [[float(ExactScalar.coerce(x)) if not isinstance(x, float) else x for x in row]
         for row in a],
        dtype=float,
    )
    if arr.ndim != 2:
        raise InputError("target must be a matrix (m rows, l columns)")
    return arr


def _as_exact_matrix(a) -> Optional[ExactMatrix]:
    try:
        if isinstance(a, ExactMatrix):
            m = a
        else:
            m = ExactMatrix([[x for x in row] for row in a])
    except (InputError, TypeError):
        return None
    if all(x.is_rational() for row in m.rows for x in row):
        return m
    return None


def best_approximations(
    a,
    qmax: int,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> List[ApproxRecord]:
    """Successive minima of q -> min_p ||A q + p|| over sup-norm shells of q.

    Shells are walked in increasing sup norm, points inside a shell in lex
    order with the sign normalized (first nonzero coordinate positive; -q
    duplicates q). A record is kept when its residual strictly beats every
    smaller shell. For exact rational input the denominator-clearing zero
    certificate is spliced in at its own shell, so the list always ends with
    an exact zero when one is in range.
    """
    af = _as_float_matrix(a)
    m, ell = af.shape
    if qmax < 1:
        raise InputError("qmax must be >= 1")
    exact = _as_exact_matrix(a)
    cert = rational_certificate(a) if exact is not None else None
    walk_to = qmax
    if cert is not None:
        cert_shell = max(abs(c) for c in cert[0])
        if cert_shell <= qmax:
            walk_to = cert_shell - 1
    if ell == 1:
        records = _best_approx_1d(af, exact, walk_to, budget)
    else:
        records = _shell_walk(af, exact, walk_to, budget)
    if cert is not None and cert_shell <= qmax and not any(
        r.residual == 0.0 for r in records
    ):
        records.append(ApproxRecord(
            qnorm=cert_shell, q=cert[0], p=cert[1], residual=0.0, exact_zero=True,
        ))
    return records


def _shell_walk(af, exact, qmax, budget) -> List[ApproxRecord]:
    ell = af.shape[1]
    total = (2 * qmax + 1) ** ell
    if total > budget:
        raise BudgetError(
            f"shell enumeration needs {total} points for qmax={qmax}, budget={budget}"
        )
    records: List[ApproxRecord] = []
    best = math.inf
    for h in range(1, qmax + 1):
        shell_best = None
        for q in product(range(-h, h + 1), repeat=ell):
            if max(abs(c) for c in q) != h:
                continue
            first = next(c for c in q if c)
            if first < 0:
                continue
            vals = af @ np.asarray(q, dtype=float)
            p = -np.round(vals)
            res = float(np.max(np.abs(vals + p)))
            if shell_best is None or res < shell_best[0]:
                shell_best = (res, q, tuple(int(x) for x in p))
        if shell_best is not None and shell_best[0] < best:
            best = shell_best[0]
            records.append(_finalize_record(af, h, shell_best[1], shell_best[2], exact))
            if records[-1].exact_zero:
                break
    return records


def _best_approx_1d(af, exact, qmax, budget) -> List[ApproxRecord]:
    if qmax > budget:
        raise BudgetError(f"qmax={qmax} exceeds enumeration budget {budget}")
    col = af[:, 0]
    records: List[ApproxRecord] = []
    best = math.inf
    chunk = 1 << 20
    for lo in range(1, qmax + 1, chunk):
        qs = np.arange(lo, min(lo + chunk, qmax + 1), dtype=float)
        vals = col[:, None] * qs[None, :]
        ps = -np.round(vals)
        res = np.max(np.abs(vals + ps), axis=0)
        run = np.minimum.accumulate(res)
        prev = np.concatenate(([best], run[:-1]))
        hits = np.nonzero(res < prev)[0]
        for i in hits:
            if res[i] < best:
                best = float(res[i])
                q = int(qs[i])
                p = tuple(int(x) for x in ps[:, i])
                records.append(_finalize_record(af, q, (q,), p, exact))
                if records[-1].exact_zero:
                    return records
    return records


def _finalize_record(af, h, q, p, exact) -> ApproxRecord:
    """Attach an exact-zero flag when the rational arithmetic confirms the
    residual vanishes; the float residual is kept for reporting either way."""
    qt, pt = tuple(int(c) for c in q), tuple(int(c) for c in p)
    if exact is not None:
        vals = exact.apply([ExactScalar(c) for c in qt])
        exact_res = [v + ExactScalar(c) for v, c in zip(vals, pt)]
        if all(v.sign() == 0 for v in exact_res):
            return ApproxRecord(qnorm=h, q=qt, p=pt, residual=0.0, exact_zero=True)
        res = max(abs(float(v)) for v in exact_res)
        return ApproxRecord(qnorm=h, q=qt, p=pt, residual=res)
    vals = af @ np.asarray(qt, dtype=float)
    res = float(np.max(np.abs(vals + np.asarray(pt, dtype=float))))
    return ApproxRecord(qnorm=h, q=qt, p=pt, residual=res)


def records_to_rows(records: Sequence[ApproxRecord], r: float) -> List[dict]:
    return [
        {
            "qnorm": rec.qnorm,
            "q": ";".join(str(c) for c in rec.q),
            "p": ";".join(str(c) for c in rec.p),
            "residual": rec.residual,
            "quality": rec.quality(r),
        }
        for rec in records
    ]


def exponent_fit(records: Sequence[ApproxRecord]):
    """Slope of -log(residual) against log ||q|| over the successive minima.

    Returns (omega_hat, infinite_flag): an exact zero residual means the
    exponent is infinite, and the zero is excluded from the fit.
    """
    infinite = any(rec.exact_zero or rec.residual == 0.0 for rec in records)
    pts = [
        (math.log(rec.qnorm), -math.log(rec.residual))
        for rec in records
        if rec.residual > 0.0 and rec.qnorm >= 1
    ]
    if len(pts) < 2:
        return None, infinite
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    if float(np.ptp(xs)) == 0.0:
        return None, infinite
    slope = float(np.polyfit(xs, ys, 1)[0])
    return slope, infinite


def exponent_estimate(a, qmax: int, budget: int = DEFAULT_ENUM_BUDGET):
    """Approximation-exponent estimate for a target matrix: run the
    successive-minima search and fit. qmax below 10 gives too little range."""
    if qmax < 10:
        raise InputError("qmax must be >= 10 for an exponent fit")
    return exponent_fit(best_approximations(a, qmax, budget=budget))


def rational_certificate(a) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """For rational A: integer (q, p) with A q + p = 0 by clearing denominators
    of the first column. Returns None when A has an irrational entry."""
    exact = _as_exact_matrix(a)
    if exact is None:
        return None
    m, ell = exact.nrows, exact.ncols
    denoms = [exact.rows[i][0].as_fraction().denominator for i in range(m)]
    lcm = 1
    for d in denoms:
        lcm = lcm * d // math.gcd(lcm, d)
    q = [lcm] + [0] * (ell - 1)
    p = [-(exact.rows[i][0].as_fraction() * lcm) for i in range(m)]
    assert all(x.denominator == 1 for x in p)
    return tuple(q), tuple(int(x) for x in p)


def a_ext(a: ExactMatrix) -> ExactMatrix:
    """Extended matrix of a 2 x (n-2) block: stacked (X; Y; Z) with columns
    indexed by pairs i < j of the n-2 original columns (lex order).

    X[k,(i,j)] = -a_j if k == i, a_i if k == j, else 0; Y likewise with the
    second row; Z[(i,j)] = a_j b_i - a_i b_j. Shape (2n-3) x C(n-2, 2).
    """
    if a.nrows != 2:
        raise InputError("a_ext expects a 2-row matrix")
    w = a.ncols
    if w < 2:
        raise InputError("a_ext needs at least two columns")
    pairs = [(i, j) for i in range(w) for j in range(i + 1, w)]
    arow, brow = a.rows[0], a.rows[1]
    zero = ExactScalar(0)
    xs = [[zero] * len(pairs) for _ in range(w)]
    ys = [[zero] * len(pairs) for _ in range(w)]
    zs = [zero] * len(pairs)
    for col, (i, j) in enumerate(pairs):
        xs[i][col] = -arow[j]
        xs[j][col] = arow[i]
        ys[i][col] = -brow[j]
        ys[j][col] = brow[i]
        zs[col] = arow[j] * brow[i] - arow[i] * brow[j]
    return ExactMatrix(xs + ys + [zs])


CERTIFIED_MEMBER = "certified-member"
EVIDENCE_MEMBER = "evidence-member"
EVIDENCE_NONMEMBER = "evidence-nonmember"
INCONCLUSIVE = "inconclusive"


@dataclass
class DiophVerdict:
    kind: str
    target: str
    r: float
    qmax: int
    witnesses: List[ApproxRecord] = field(default_factory=list)
    notes: str = ""

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "target": self.target,
            "r": self.r,
            "qmax": self.qmax,
            "witnesses": [
                {
                    "qnorm": w.qnorm,
                    "q": list(w.q),
                    "p": list(w.p),
                    "residual": w.residual,
                    "quality": w.quality(self.r),
                    "exact_zero": w.exact_zero,
                }
                for w in self.witnesses
            ],
            "notes": self.notes,
        }


def w_probe(
    a,
    r: float,
    qmax: int,
    target: str = "W",
    c: float = 1.0,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> DiophVerdict:
    """Graded membership probe for W_r (target 'W') or W'_r (target 'Wprime').

    Exact rational targets are certified members outright (a zero residual
    solves the inequality for every constant, with all multiples as further
    solutions). Otherwise: W_r evidence-member needs at least 3 successive
    minima with quality below c; W'_r evidence-member needs the tail qualities
    to collapse relative to the head. Nonmember evidence is the mirrored
    failure; anything else is inconclusive.
    """
    if target not in ("W", "Wprime"):
        raise InputError(f"unknown probe target {target!r}")
    if r <= 0:
        raise InputError("r must be positive")
    tname = "W_r" if target == "W" else "W'_r"
    cert = rational_certificate(a)
    if cert is not None:
        q, p = cert
        rec = ApproxRecord(
            qnorm=max(abs(x) for x in q),
            q=q,
            p=p,
            residual=0.0,
            exact_zero=True,
        )
        return DiophVerdict(
            kind=CERTIFIED_MEMBER,
            target=tname,
            r=r,
            qmax=qmax,
            witnesses=[rec],
            notes="rational target: exact zero-residual certificate",
        )
    records = best_approximations(a, qmax, budget=budget)
    if any(rec.exact_zero for rec in records):
        zero = next(rec for rec in records if rec.exact_zero)
        return DiophVerdict(
            kind=CERTIFIED_MEMBER,
            target=tname,
            r=r,
            qmax=qmax,
            witnesses=[zero],
            notes="exact zero residual found during enumeration",
        )
    if not records:
        return DiophVerdict(INCONCLUSIVE, tname, r, qmax, [], "no records")
    split = math.sqrt(qmax)
    head = [rec for rec in records if rec.qnorm <= split]
    tail = [rec for rec in records if rec.qnorm > split]
    if target == "W":
        good = [rec for rec in records if rec.quality(r) < c]
        if len(good) >= 3:
            return DiophVerdict(
                EVIDENCE_MEMBER, tname, r, qmax, good,
                f"{len(good)} successive minima with quality < {c}",
            )
        if tail and not any(rec.quality(r) < c for rec in tail):
            return DiophVerdict(
                EVIDENCE_NONMEMBER, tname, r, qmax, records[-3:],
                f"no tail record beats quality {c}",
            )
        return DiophVerdict(INCONCLUSIVE, tname, r, qmax, records[-3:], "")
    # target W': quality must tend to 0 over the searched range
    if not head or not tail:
        return DiophVerdict(INCONCLUSIVE, tname, r, qmax, records[-3:],
                            "not enough range to split head/tail")
    qmin_head = min(rec.quality(r) for rec in head)
    qmin_tail = min(rec.quality(r) for rec in tail)
    if qmin_tail <= 0.1 * qmin_head:
        return DiophVerdict(
            EVIDENCE_MEMBER, tname, r, qmax, tail[-3:],
            f"tail quality {qmin_tail:.3g} collapsed below head {qmin_head:.3g}",
        )
    if qmin_tail >= 0.5 * qmin_head:
        return DiophVerdict(
            EVIDENCE_NONMEMBER, tname, r, qmax, records[-3:],
            f"tail quality {qmin_tail:.3g} stays comparable to head {qmin_head:.3g}",
        )
    return DiophVerdict(INCONCLUSIVE, tname, r, qmax, records[-3:], "")


# -- Dirichlet-type systems ---------------------------------------------------


@dataclass(frozen=True)
class DirichletQuery:
    """One improvability probe: x in R^n, a delta in (0,1], and a grid of
    thresholds T. form 'vect' is the simultaneous system (scalar q, vector p);
    'lf' is the dual linear-form system (vector q, scalar p)."""

    x: Tuple[float, ...]
    form: str
    delta: float
    t_grid: Tuple[float, ...]
    budget: int = DEFAULT_ENUM_BUDGET

    def __post_init__(self):
        if self.form not in ("vect", "lf"):
            raise InputError(f"unknown Dirichlet form {self.form!r}")
        if not 0 < self.delta <= 1:
            raise InputError("delta must lie in (0, 1]")
        if not self.t_grid:
            raise InputError("empty T grid")
        if any(b <= a for a, b in zip(self.t_grid, self.t_grid[1:])):
            raise InputError("T grid must be strictly increasing")


@dataclass
class DirichletRow:
    t: float
    solvable: bool
    q: Optional[Tuple[int, ...]]
    p: Optional[Tuple[int, ...]]
    residual: Optional[float]


@dataclass
class DirichletReport:
    query: DirichletQuery
    rows: List[DirichletRow]
    tail_solvable: bool

    @property
    def verdict(self) -> str:
        return "improvable-evidence" if self.tail_solvable else "not-improvable-evidence"

    def to_json(self) -> dict:
        return {
            "x": list(self.query.x),
            "form": self.query.form,
            "delta": self.query.delta,
            "rows": [
                {
                    "T": row.t,
                    "solvable": row.solvable,
                    "q": list(row.q) if row.q else None,
                    "p": list(row.p) if row.p else None,
                    "residual": row.residual,
                }
                for row in self.rows
            ],
            "verdict": self.verdict,
        }


def dirichlet_solve(query: DirichletQuery) -> DirichletReport:
    """Exhaustively test solvability at each T. The tail (upper half of the
    grid by index) stands in for 'all sufficiently large T'."""
    x = np.asarray(query.x, dtype=float)
    n = x.size
    rows: List[DirichletRow] = []
    for t in query.t_grid:
        if t <= 1:
            raise InputError("T values must be > 1")
        if query.form == "vect":
            rows.append(_dirichlet_vect(x, n, query.delta, t, query.budget))
        else:
            rows.append(_dirichlet_lf(x, n, query.delta, t, query.budget))
    half = len(rows) // 2
    tail = rows[half:]
    return DirichletReport(query=query, rows=rows, tail_solvable=all(r.solvable for r in tail))


def _dirichlet_vect(x, n, delta, t, budget) -> DirichletRow:
    qmax = int(math.floor(t**n))
    if qmax > budget:
        raise BudgetError(f"vect search needs {qmax} values of q, budget {budget}")
    thr = delta / t
    qs = np.arange(1, qmax + 1, dtype=float)
    vals = x[:, None] * qs[None, :]
    ps = -np.round(vals)
    res = np.max(np.abs(vals + ps), axis=0)
    hits = np.nonzero(res <= thr + 1e-15)[0]
    if hits.size == 0:
        return DirichletRow(t=t, solvable=False, q=None, p=None, residual=None)
    i = int(hits[0])
    return DirichletRow(
        t=t,
        solvable=True,
        q=(int(qs[i]),),
        p=tuple(int(v) for v in ps[:, i]),
        residual=float(res[i]),
    )


def _dirichlet_lf(x, n, delta, t, budget) -> DirichletRow:
    qbound = int(math.floor(t))
    total = (2 * qbound + 1) ** n
    if total > budget:
        raise BudgetError(f"lf search needs {total} grid points, budget {budget}")
    thr = delta * t**-n
    axes = [np.arange(-qbound, qbound + 1)] * n
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    nz = np.any(grid != 0, axis=1)
    grid = grid[nz]
    vals = grid.astype(float) @ x
    ps = -np.round(vals)
    res = np.abs(vals + ps)
    hits = np.nonzero(res <= thr + 1e-15)[0]
    if hits.size == 0:
        return DirichletRow(t=t, solvable=False, q=None, p=None, residual=None)
    # deterministic witness: smallest sup norm, then lex
    cand = sorted(
        (int(np.max(np.abs(grid[i]))), tuple(int(v) for v in grid[i]), i) for i in hits
    )
    _, qtup, i = cand[0]
    return DirichletRow(
        t=t, solvable=True, q=qtup, p=(int(ps[i]),), residual=float(res[i])
    )


def probe_singular(x, form: str, deltas: Sequence[float], t_grid: Sequence[float],
                   budget: int = DEFAULT_ENUM_BUDGET):
    """Run one query per delta; singular evidence = improvable at every delta."""
    reports = [
        dirichlet_solve(DirichletQuery(
            x=tuple(float(v) for v in x), form=form, delta=float(d),
            t_grid=tuple(float(t) for t in t_grid), budget=budget,
        ))
        for d in deltas
    ]
    singular = all(rep.tail_solvable for rep in reports)
    return reports, singular
