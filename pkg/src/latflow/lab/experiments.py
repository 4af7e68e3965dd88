"""Translate a curve along the diagonal flow and record lattice statistics.

For each sampled parameter s and each time t the lattice g_t u(phi(s)) Z^n
is built and three numbers are recorded: the sup-norm first minimum, the
count of nonzero lattice points in the sup ball of the box radius, and the
flag lambda_1 < eps.  n = 3 runs on the shared fractional-part grid; other
n (and out-of-budget t) go through reduction plus enumeration, with the
expanding coordinate recomputed exactly per candidate so that the huge
e^{(n-1)t} scale never meets float cancellation.

Sampling is reproducible across platforms: one Philox substream per sample
index, seeded as (seed, index), so reports are bit-identical for a fixed
config and seed regardless of evaluation order.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import BudgetError, InputError
from ..exact import ExactScalar
from ..flows import Curve, curve_eval
from . import reduction
from .grids import Grid3

_SQRT_BITS = 80
_sqrt_cache: Dict[int, Fraction] = {}


def _sqrt_fraction(d: int) -> Fraction:
    """sqrt(d) as a Fraction, accurate to 2^-80; used to evaluate the
    expanding coordinate without catastrophic cancellation."""
    if d not in _sqrt_cache:
        _sqrt_cache[d] = Fraction(math.isqrt(d << (2 * _SQRT_BITS)), 1 << _SQRT_BITS)
    return _sqrt_cache[d]


def sample_ball(curve: Curve, samples: int, seed: int) -> List[Tuple[float, ...]]:
    """Deterministic uniform samples from the curve's parameter ball."""
    pts = []
    k = curve.k
    for idx in range(samples):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, idx])))
        if k == 1:
            x = [2.0 * rng.random() - 1.0]
        else:
            while True:
                x = (2.0 * rng.random(k) - 1.0).tolist()
                if sum(v * v for v in x) <= 1.0:
                    break
        pts.append(tuple(curve.center[i] + curve.radius * x[i] for i in range(k)))
    return pts


def _flow_stats(
    phi: Sequence[ExactScalar],
    n: int,
    t: float,
    box_radius: float,
    budget: int,
) -> Tuple[float, int]:
    """(sup-norm first minimum, box count) of g_t u(phi) Z^n by reduction."""
    ds = {p.D for p in phi if p.b != 0}
    if len(ds) > 1:
        raise InputError("mixed radicals in one curve are not supported here")
    sq = _sqrt_fraction(ds.pop()) if ds else None
    e_head = math.exp((n - 1) * t)
    e_tail = math.exp(-t)
    ra = [Fraction(p.a) for p in phi]
    rb = [Fraction(p.b) for p in phi]

    def head_val(z: List[int]) -> float:
        acc = Fraction(z[0])
        rad = Fraction(0)
        for j in range(n - 1):
            zj = z[j + 1]
            if zj:
                acc += ra[j] * zj
                rad += rb[j] * zj
        if rad:
            acc += rad * sq
        return float(acc)

    def embed(z: List[int]) -> np.ndarray:
        v = [e_head * head_val(z)]
        v.extend(e_tail * float(zz) for zz in z[1:])
        return np.array(v, dtype=float)

    def sup_of(z: List[int]) -> float:
        tail = max(abs(zz) for zz in z[1:]) if n > 1 else 0
        return max(abs(e_head * head_val(z)), e_tail * tail)

    z, b = reduction.reduce_embedded(embed, n)
    _, lam1 = reduction.sup_first_minimum(z, b, sup_of, budget)
    count = reduction.box_count_embedded(z, b, sup_of, box_radius, budget)
    return lam1, count


@dataclass(frozen=True)
class ExperimentRow:
    sample_index: int
    s: Tuple[float, ...]
    t: float
    lambda1: float
    siegel_count: int
    below_eps: bool


def compute_aggregates(
    rows: Sequence[ExperimentRow],
    n: int,
    box_radius: float,
    eps: float,
    t_grid: Sequence[float],
) -> List[dict]:
    """Per-t summary block; recomputable from the rows alone."""
    haar = (2.0 * box_radius) ** n
    out = []
    for t in t_grid:
        sub = [r for r in rows if r.t == t]
        if not sub:
            raise InputError(f"no rows at t={t}")
        mean = sum(r.siegel_count for r in sub) / len(sub)
        out.append(
            {
                "t": t,
                "mean_siegel": mean,
                "haar_ref": haar,
                "rel_dev": abs(mean - haar) / haar,
                "frac_below_eps": sum(1 for r in sub if r.below_eps) / len(sub),
                "min_lambda1": min(r.lambda1 for r in sub),
                "max_lambda1": max(r.lambda1 for r in sub),
            }
        )
    return out


@dataclass
class ExperimentReport:
    n: int
    t_grid: List[float]
    samples: int
    eps: float
    box_radius: float
    seed: int
    rows: List[ExperimentRow]
    aggregates: List[dict]

    def csv_text(self) -> str:
        lines = ["sample_index,s,t,lambda1,siegel_count,below_eps"]
        for r in self.rows:
            s = ";".join(repr(x) for x in r.s)
            lines.append(
                f"{r.sample_index},{s},{r.t!r},{r.lambda1!r},{r.siegel_count},{int(r.below_eps)}"
            )
        return "\n".join(lines) + "\n"

    def aggregates_payload(self) -> dict:
        return {
            "config": {
                "n": self.n,
                "t_grid": self.t_grid,
                "samples": self.samples,
                "eps": self.eps,
                "radius": self.box_radius,
                "seed": self.seed,
            },
            "aggregates": self.aggregates,
        }

    def write_csv(self, path: str) -> None:
        atomic_write_text(path, self.csv_text())

    def write_aggregates(self, path: str) -> None:
        text = json.dumps(self.aggregates_payload(), indent=2, sort_keys=True)
        atomic_write_text(path, text + "\n")


def atomic_write_text(path: str, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a
    half-written artifact."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    handle = tempfile.NamedTemporaryFile(
        mode="w", dir=directory, prefix=".partial-", delete=False
    )
    try:
        with handle as fh:
            fh.write(text)
        os.replace(handle.name, path)
    except BaseException:
        try:
            os.unlink(handle.name)
        except OSError:
            pass
        raise


def translate_experiment(
    curve: Curve,
    t_grid: Sequence[float],
    samples: int,
    eps: float,
    box_radius: float,
    seed: Optional[int],
    node_budget: int = reduction.DEFAULT_NODE_BUDGET,
) -> ExperimentReport:
    """Row per (sample, t) in sample-major order, plus per-t aggregates."""
    if not isinstance(curve, Curve):
        raise InputError("curve must be a Curve")
    if samples < 1:
        raise InputError("need at least one sample")
    if not eps > 0:
        raise InputError("eps must be positive")
    if not box_radius > 0:
        raise InputError("box radius must be positive")
    if seed is None:
        raise InputError("a seed is required for sampling")
    t_list = [float(t) for t in t_grid]
    if not t_list:
        raise InputError("empty t grid")

    pts = sample_ball(curve, samples, int(seed))
    n = curve.n
    grids: Dict[float, Optional[Grid3]] = {}
    if n == 3:
        for t in t_list:
            if t in grids:
                continue
            try:
                grids[t] = Grid3(t, box_radius)
            except BudgetError:
                grids[t] = None  # fall back to the reduction path at this t

    rows: List[ExperimentRow] = []
    for idx, pt in enumerate(pts):
        phi = curve_eval(curve, [Fraction(x) for x in pt])
        for t in t_list:
            grid = grids.get(t)
            if grid is not None:
                lam1, count = grid.stats(float(phi[0]), float(phi[1]))
            else:
                lam1, count = _flow_stats(phi, n, t, box_radius, node_budget)
            rows.append(
                ExperimentRow(
                    sample_index=idx,
                    s=pt,
                    t=t,
                    lambda1=lam1,
                    siegel_count=count,
                    below_eps=lam1 < eps,
                )
            )
    aggregates = compute_aggregates(rows, n, box_radius, eps, t_list)
    return ExperimentReport(
        n=n,
        t_grid=t_list,
        samples=samples,
        eps=eps,
        box_radius=box_radius,
        seed=int(seed),
        rows=rows,
        aggregates=aggregates,
    )
