"""Numerical minimization of configuration densities at fixed mean over
Z_p: projected gradient descent on {f : Z_p -> [0,1], E(f) = delta}.

The reported values are upper bounds on the minimal density for that p;
the limit over growing primes is what the extremal problem is about, and
no rate is available, so results are labeled per-p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from sympy import isprime

from .errors import ValidationError
from .functions import DenseFn
from .groups import GroupSpec, make_group
from .linconfig import ConfigSystem, DensityEvaluator

ARMIJO_C = 1e-4
ARMIJO_SHRINK = 0.5
ARMIJO_INIT_STEP = 1.0
SPECTRAL_STEP_MIN = 1e-10
SPECTRAL_STEP_MAX = 1e8
NONMONOTONE_WINDOW = 10
DEFAULT_RESTARTS = 16
DEFAULT_MAX_ITER = 3000
DEFAULT_GRAD_TOL = 1e-8


@dataclass
class OptResult:
    f_star: DenseFn
    value: float
    grad_norm: float
    restarts_used: int
    trace: list[tuple[int, float]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "grad_norm": self.grad_norm,
            "restarts_used": self.restarts_used,
            "f_star": self.f_star.to_json(),
            "trace": [[i, v] for i, v in self.trace],
            "bound_kind": "upper bound",
        }


def density_gradient(config: ConfigSystem, f: DenseFn, budget: int = 10**8) -> np.ndarray:
    """Exact gradient of t(config, f) with respect to the value table of a
    real-valued f."""
    if not f.is_real(1e-9):
        raise ValidationError("density gradient is defined for real-valued functions")
    ev = DensityEvaluator(config, f.group, budget=budget)
    return ev.gradient_single(f.values.real)


def project_box_mean(v: np.ndarray, delta: float, tol: float = 1e-12) -> np.ndarray:
    """Euclidean projection onto {u in [0,1]^N : mean(u) = delta} by
    monotone bisection on the shift parameter of clip(v - tau)."""
    if not 0.0 <= delta <= 1.0:
        raise ValidationError("delta must lie in [0, 1]")
    v = np.asarray(v, dtype=np.float64)
    lo = float(v.min()) - 1.0
    hi = float(v.max())

    def mean_at(tau: float) -> float:
        return float(np.mean(np.clip(v - tau, 0.0, 1.0)))

    # mean_at is nonincreasing in tau; bracket the root
    while mean_at(lo) < delta:
        lo -= 1.0
    while mean_at(hi) > delta:
        hi += 1.0
    # relative tolerance keeps the loop finite when v has huge magnitude,
    # where float spacing can exceed an absolute tol
    width = tol * max(1.0, abs(lo), abs(hi))
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if mean_at(mid) > delta:
            lo = mid
        else:
            hi = mid
    tau = 0.5 * (lo + hi)
    u = np.clip(v - tau, 0.0, 1.0)
    # exact mean repair within the free (strictly interior) coordinates
    free = (u > 0.0) & (u < 1.0)
    gap = delta - float(np.mean(u))
    if np.any(free):
        u[free] += gap * u.size / int(free.sum())
        u = np.clip(u, 0.0, 1.0)
    return u


def _pgd(
    ev: DensityEvaluator,
    start: np.ndarray,
    delta: float,
    max_iter: int,
    grad_tol: float,
) -> tuple[np.ndarray, float, float, list[tuple[int, float]]]:
    f = project_box_mean(start, delta)
    val = ev.value_single(f).real
    trace = [(0, val)]
    grad = ev.gradient_single(f)
    # spectral (Barzilai-Borwein) initial step with a nonmonotone Armijo
    # safeguard; a fixed unit step crawls through the flat valleys of this
    # multilinear objective
    init_step = ARMIJO_INIT_STEP
    recent = [val]
    for it in range(1, max_iter + 1):
        pg = f - project_box_mean(f - grad, delta)
        if float(np.linalg.norm(pg)) <= grad_tol:
            break
        reference = max(recent[-NONMONOTONE_WINDOW:])
        step = init_step
        accepted = False
        while step > 1e-16:
            cand = project_box_mean(f - step * grad, delta)
            cval = ev.value_single(cand).real
            if cval <= reference + ARMIJO_C * float(np.dot(grad, cand - f)):
                accepted = True
                break
            step *= ARMIJO_SHRINK
        if not accepted:
            break
        new_grad = ev.gradient_single(cand)
        s = cand - f
        sy = float(np.dot(s, new_grad - grad))
        if sy > 0.0:
            init_step = min(max(float(np.dot(s, s)) / sy, SPECTRAL_STEP_MIN),
                            SPECTRAL_STEP_MAX)
        else:
            # negative curvature along s: take the longest allowed step
            init_step = SPECTRAL_STEP_MAX
        f, val, grad = cand, cval, new_grad
        recent.append(val)
        trace.append((it, val))
    pg = f - project_box_mean(f - grad, delta)
    return f, val, float(np.linalg.norm(pg)), trace


def minimize_density(
    config: ConfigSystem,
    p: int,
    delta: float,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    max_iter: int = DEFAULT_MAX_ITER,
    grad_tol: float = DEFAULT_GRAD_TOL,
    unsafe_group: bool = False,
    group: GroupSpec | None = None,
) -> OptResult:
    """Minimize t(config, f) over f: Z_p -> [0,1] with mean delta.

    p must be prime (the extremal family runs over prime-order groups);
    pass unsafe_group=True to allow composite orders, or supply an explicit
    group.  Deterministic given seed; restart r uses an RNG stream keyed by
    (seed, r), the constant function f = delta is always tried, and the
    best final value wins (ties broken by restart index)."""
    if group is None:
        if not unsafe_group and not isprime(p):
            raise ValidationError(
                f"p={p} is not prime; the extremal family uses prime-order groups "
                "(pass unsafe_group to override)"
            )
        group = make_group([p])
    if not 0.0 <= delta <= 1.0:
        raise ValidationError("delta must lie in [0, 1]")
    ev = DensityEvaluator(config, group)
    n = group.order

    starts = [np.full(n, delta)]
    for r in range(restarts):
        rng = np.random.Generator(np.random.Philox(key=(seed << 20) + r))
        starts.append(rng.random(n))

    best = None
    for r, start in enumerate(starts):
        f, val, gnorm, trace = _pgd(ev, start, delta, max_iter, grad_tol)
        if best is None or val < best[1] - 0.0:
            best = (f, val, gnorm, trace)
    f, val, gnorm, trace = best
    return OptResult(
        f_star=DenseFn(group, f.astype(np.complex128)),
        value=val,
        grad_norm=gnorm,
        restarts_used=len(starts),
        trace=trace,
    )


def rho_curve(
    config: ConfigSystem,
    p: int,
    deltas,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    max_iter: int = DEFAULT_MAX_ITER,
    grad_tol: float = DEFAULT_GRAD_TOL,
    unsafe_group: bool = False,
) -> list[dict]:
    """Run minimize_density across a delta grid.  Rows carry a monotone
    flag: the true curve is nondecreasing in delta, so a decrease marks a
    restart that missed the basin."""
    rows = []
    for d in deltas:
        if d <= 0.0:
            group = make_group([p])
            f = DenseFn(group, np.zeros(group.order, dtype=np.complex128))
            rows.append({"delta": 0.0, "value": 0.0, "grad_norm": 0.0, "f_star": f})
            continue
        if d >= 1.0:
            group = make_group([p])
            f = DenseFn(group, np.ones(group.order, dtype=np.complex128))
            rows.append({"delta": 1.0, "value": 1.0, "grad_norm": 0.0, "f_star": f})
            continue
        res = minimize_density(
            config,
            p,
            d,
            restarts=restarts,
            seed=seed,
            max_iter=max_iter,
            grad_tol=grad_tol,
            unsafe_group=unsafe_group,
        )
        rows.append(
            {
                "delta": float(d),
                "value": res.value,
                "grad_norm": res.grad_norm,
                "f_star": res.f_star,
            }
        )
    best_so_far = -math.inf
    for row in rows:
        row["monotone_ok"] = row["value"] >= best_so_far - 1e-9
        best_so_far = max(best_so_far, row["value"])
    return rows
