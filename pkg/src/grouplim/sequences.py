"""Empirical convergence experiments: pairwise distance tables, Cauchy
detection, value histograms, and density-continuity scatter data.

Everything here reports rather than proves: the underlying compactness and
continuity statements have no effective rates, so this module produces the
tables one actually inspects."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetError, ValidationError
from .functions import DenseFn
from .linconfig import ConfigSystem, cs_complexity_at_most_1, density_brute
from .metric import DEFAULT_NODE_BUDGET, DEFAULT_WEIGHT_CAP, DistBracket, d_metric, dhat, dprime


def pairwise_table(
    fs: Sequence[DenseFn],
    metric: str = "d",
    weight_cap: int = DEFAULT_WEIGHT_CAP,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> list[list[Optional[DistBracket]]]:
    """Symmetric table of distance brackets; the diagonal is exact zero.
    Cells whose metric call exceeds its budget hold None."""
    if metric not in ("d", "dprime"):
        raise ValidationError("metric must be 'd' or 'dprime'")
    fn = d_metric if metric == "d" else dprime
    n = len(fs)
    table: list[list[Optional[DistBracket]]] = [[None] * n for _ in range(n)]
    for i in range(n):
        table[i][i] = DistBracket(0.0, 0.0, exact=True)
    for i in range(n):
        for j in range(i + 1, n):
            try:
                b = fn(fs[i], fs[j], weight_cap=weight_cap, node_budget=node_budget)
            except BudgetError:
                b = None
            table[i][j] = b
            table[j][i] = b
    return table


def cauchy_detect(table: Sequence[Sequence[Optional[DistBracket]]], tol: float) -> tuple[bool, Optional[int]]:
    """True iff some tail of the sequence has all pairwise upper bounds at
    most tol; returns the least such tail index."""
    n = len(table)
    # a tail needs at least two terms; a singleton passes vacuously
    for start in range(n - 1):
        ok = True
        for i in range(start, n):
            for j in range(start, n):
                if i == j:
                    continue
                cell = table[i][j]
                if cell is None or cell.hi > tol:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True, start
    return False, None


@dataclass
class Histogram:
    """Empirical value distribution over a fixed bin grid.  Real data uses
    an interval grid; genuinely complex data a rectangular grid over the
    bounding box (masses stored flattened, row-major in the real part)."""

    edges_re: np.ndarray
    edges_im: Optional[np.ndarray]
    masses: np.ndarray

    def __post_init__(self):
        total = float(np.sum(self.masses))
        if np.any(self.masses < -1e-15) or abs(total - 1.0) > 1e-12:
            raise ValidationError("histogram masses must be nonnegative and sum to 1")

    def same_grid(self, other: "Histogram") -> bool:
        if (self.edges_im is None) != (other.edges_im is None):
            return False
        if not np.array_equal(self.edges_re, other.edges_re):
            return False
        if self.edges_im is not None and not np.array_equal(self.edges_im, other.edges_im):
            return False
        return True


def value_histogram(
    f: DenseFn,
    bins: int = 20,
    range_re: Optional[tuple[float, float]] = None,
    range_im: Optional[tuple[float, float]] = None,
) -> Histogram:
    """Distribution of the value table under the uniform measure."""
    if bins < 1:
        raise ValidationError("need at least one bin")
    vals = f.values
    real = bool(np.max(np.abs(vals.imag), initial=0.0) <= 1e-12)
    if real:
        x = vals.real
        lo, hi = range_re if range_re else (float(x.min()), float(x.max()))
        if hi <= lo:
            hi = lo + 1.0
        counts, edges = np.histogram(np.clip(x, lo, hi), bins=bins, range=(lo, hi))
        return Histogram(edges, None, counts / counts.sum())
    re, im = vals.real, vals.imag
    lo_r, hi_r = range_re if range_re else (float(re.min()), float(re.max()))
    lo_i, hi_i = range_im if range_im else (float(im.min()), float(im.max()))
    if hi_r <= lo_r:
        hi_r = lo_r + 1.0
    if hi_i <= lo_i:
        hi_i = lo_i + 1.0
    counts, edges_re, edges_im = np.histogram2d(
        np.clip(re, lo_r, hi_r),
        np.clip(im, lo_i, hi_i),
        bins=bins,
        range=((lo_r, hi_r), (lo_i, hi_i)),
    )
    return Histogram(edges_re, edges_im, counts.reshape(-1) / counts.sum())


def histogram_distance(h1: Histogram, h2: Histogram) -> float:
    """L1 distance between masses on a shared bin grid."""
    if not h1.same_grid(h2):
        raise ValidationError("histograms must share the same bin grid")
    return float(np.sum(np.abs(h1.masses - h2.masses)))


def norm_drift(fs: Sequence[DenseFn], tol: float = 1e-6) -> bool:
    """True when the L2 norms of the tail keep moving: a d-convergent
    sequence with drifting norms is not tightly convergent and its value
    distributions need not settle."""
    norms = [f.l2_norm() for f in fs]
    if len(norms) < 2:
        return False
    tail = norms[len(norms) // 2 :]
    return max(tail) - min(tail) > tol


def continuity_probe(
    config: ConfigSystem,
    pairs: Sequence[tuple[DenseFn, DenseFn]],
    weight_cap: int = DEFAULT_WEIGHT_CAP,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> tuple[list[tuple[float, float]], bool]:
    """Scatter of (distance upper bound, |density difference|) for
    empirical modulus-of-continuity inspection.  Returns the rows and a
    flag telling whether the configuration passed the complexity-1
    sufficient check (when it did not, continuity is not promised and the
    caller should treat the scatter accordingly)."""
    cs1, _ = cs_complexity_at_most_1(config)
    rows = []
    for f1, f2 in pairs:
        bracket = d_metric(f1, f2, weight_cap=weight_cap, node_budget=node_budget)
        t1 = density_brute(config, f1)
        t2 = density_brute(config, f2)
        rows.append((bracket.hi, abs(t1 - t2)))
    return rows, cs1
