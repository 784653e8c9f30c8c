"""Linear configurations and their densities in function systems.

A configuration is a list of integer-coefficient linear forms in n
variables; its density in a function system is the average over all
uniform variable assignments of the product of the functions evaluated at
the forms.  Two evaluation routes are provided: direct summation and a
character-orthogonality sum over the dual constraint lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from sympy import Matrix, Rational

from .errors import BudgetError, ValidationError
from .functions import DenseFn
from .groups import GroupSpec
from .intlattice import kernel_mod_m
from .spectral import spectrum_array

DENSITY_BUDGET = 10**8
CHUNK = 1 << 16


@dataclass(frozen=True)
class LinearForm:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not any(self.coeffs):
            raise ValidationError("a linear form needs at least one nonzero coefficient")

    @property
    def arity(self) -> int:
        return len(self.coeffs)


@dataclass(frozen=True)
class ConfigSystem:
    forms: tuple[LinearForm, ...]
    name: Optional[str] = None

    def __post_init__(self):
        if not self.forms:
            raise ValidationError("configuration needs at least one form")
        arities = {f.arity for f in self.forms}
        if len(arities) != 1:
            raise ValidationError(f"forms have mixed arities: {arities}")

    @property
    def arity(self) -> int:
        return self.forms[0].arity

    @property
    def size(self) -> int:
        return len(self.forms)

    def matrix(self) -> list[list[int]]:
        """k x n coefficient matrix, one row per form."""
        return [list(f.coeffs) for f in self.forms]

    def to_json(self) -> dict:
        return {"forms": [list(f.coeffs) for f in self.forms]}

    @classmethod
    def from_json(cls, obj: dict) -> "ConfigSystem":
        try:
            forms = tuple(
                LinearForm(tuple(int(c) for c in row)) for row in obj["forms"]
            )
        except (KeyError, TypeError, ValueError):
            raise ValidationError("config JSON needs 'forms': [[c1, ..., cn], ...]")
        return cls(forms)


def config_from_forms(rows: Sequence[Sequence[int]], name: Optional[str] = None) -> ConfigSystem:
    return ConfigSystem(tuple(LinearForm(tuple(int(c) for c in r)) for r in rows), name)


def graph_config(edges: Sequence[tuple[int, int]], nvars: Optional[int] = None) -> ConfigSystem:
    """The system {x_i + x_j : (i,j) an edge} attached to a graph."""
    if not edges:
        raise ValidationError("graph configuration needs at least one edge")
    n = nvars if nvars is not None else max(max(e) for e in edges) + 1
    rows = []
    for i, j in edges:
        if i == j or not (0 <= i < n and 0 <= j < n):
            raise ValidationError(f"bad edge ({i},{j})")
        row = [0] * n
        row[i] += 1
        row[j] += 1
        rows.append(row)
    return config_from_forms(rows, name="graph")


def builtin_config(name: str) -> ConfigSystem:
    """Named configurations: ap3, parallelogram, or graph:<edge list> with
    edges like graph:0-1,1-2,2-0."""
    if name == "ap3":
        return config_from_forms([[1, 0], [1, 1], [1, 2]], name="ap3")
    if name == "parallelogram":
        return config_from_forms(
            [[1, 0, 0], [1, 1, 0], [1, 0, 1], [1, 1, 1]], name="parallelogram"
        )
    if name.startswith("graph:"):
        spec = name[len("graph:"):]
        edges = []
        for part in spec.split(","):
            part = part.strip()
            if not part:
                continue
            try:
                i, j = part.split("-")
                edges.append((int(i), int(j)))
            except ValueError:
                raise ValidationError(f"cannot parse graph edge '{part}'")
        return graph_config(edges)
    raise ValidationError(f"unknown configuration name '{name}'")


def _as_system(F, k: int) -> list[DenseFn]:
    if isinstance(F, DenseFn):
        return [F] * k
    F = list(F)
    if len(F) != k:
        raise ValidationError(f"function system has {len(F)} entries, need {k}")
    return F


class DensityEvaluator:
    """Precomputed index tables for repeated density/gradient evaluation of
    one configuration on one finite group.  Used by the optimizer, where
    the same objective is evaluated thousands of times."""

    def __init__(self, config: ConfigSystem, group: GroupSpec, budget: int = DENSITY_BUDGET):
        if not group.is_finite:
            raise ValidationError("density evaluation needs a finite group")
        self.config = config
        self.group = group
        n = config.arity
        N = group.order
        total = N**n
        if total > budget:
            raise BudgetError(
                f"|A|^n = {total} exceeds evaluation budget {budget}; "
                "use the fourier or monte-carlo route"
            )
        self.total = total
        moduli = np.array(group.moduli, dtype=np.int64)
        coords = np.array(list(group.elements()), dtype=np.int64)  # (N, s)
        radix = np.ones(len(moduli), dtype=np.int64)
        for j in range(len(moduli) - 2, -1, -1):
            radix[j] = radix[j + 1] * moduli[j + 1]
        # variable assignment indices for every tuple, shape (total, n)
        flat = np.arange(total, dtype=np.int64)
        var_idx = np.empty((total, n), dtype=np.int64)
        rem = flat
        for v in range(n - 1, -1, -1):
            rem, var_idx[:, v] = np.divmod(rem, N)
        # per-form element indices, shape (total, k)
        k = config.size
        form_idx = np.empty((total, k), dtype=np.int64)
        lam = np.array(config.matrix(), dtype=np.int64)  # (k, n)
        for fi in range(k):
            acc = np.zeros((total, len(moduli)), dtype=np.int64)
            for v in range(n):
                c = lam[fi, v]
                if c:
                    acc += c * coords[var_idx[:, v]]
            form_idx[:, fi] = (acc % moduli) @ radix
        self.form_idx = form_idx

    def value(self, values_list: Sequence[np.ndarray]) -> complex:
        prod = values_list[0][self.form_idx[:, 0]].copy()
        for fi in range(1, self.config.size):
            prod *= values_list[fi][self.form_idx[:, fi]]
        return complex(np.sum(prod) / self.total)

    def value_single(self, values: np.ndarray) -> complex:
        return self.value([values] * self.config.size)

    def gradient_single(self, values: np.ndarray) -> np.ndarray:
        """Exact partial derivatives of t(L, f) with respect to each table
        entry of a single real-valued f."""
        k = self.config.size
        N = self.group.order
        cols = [values[self.form_idx[:, fi]] for fi in range(k)]
        grad = np.zeros(N, dtype=np.float64)
        for fi in range(k):
            loo = np.ones(self.total, dtype=np.float64)
            for fj in range(k):
                if fj != fi:
                    loo *= cols[fj]
            grad += np.bincount(self.form_idx[:, fi], weights=loo, minlength=N)
        return grad / self.total


def density_brute(
    config: ConfigSystem,
    F,
    group: Optional[GroupSpec] = None,
    budget: int = DENSITY_BUDGET,
) -> complex:
    """Exact configuration density by direct summation over all variable
    assignments, chunked so memory stays bounded."""
    Fs = _as_system(F, config.size)
    if group is None:
        group = Fs[0].group
    for f in Fs:
        if f.group != group:
            raise ValidationError("all functions must live on the same group")
    n = config.arity
    N = group.order
    total = N**n
    if total > budget:
        raise BudgetError(
            f"|A|^n = {total} exceeds evaluation budget {budget}; "
            "use density_fourier or monte-carlo sampling"
        )
    moduli = np.array(group.moduli, dtype=np.int64)
    coords = np.array(list(group.elements()), dtype=np.int64)
    radix = np.ones(len(moduli), dtype=np.int64)
    for j in range(len(moduli) - 2, -1, -1):
        radix[j] = radix[j + 1] * moduli[j + 1]
    lam = np.array(config.matrix(), dtype=np.int64)
    acc_sum = 0.0 + 0.0j
    for start in range(0, total, CHUNK):
        flat = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        var_idx = np.empty((len(flat), n), dtype=np.int64)
        rem = flat
        for v in range(n - 1, -1, -1):
            rem, var_idx[:, v] = np.divmod(rem, N)
        prod = np.ones(len(flat), dtype=np.complex128)
        for fi in range(config.size):
            acc = np.zeros((len(flat), len(moduli)), dtype=np.int64)
            for v in range(n):
                c = lam[fi, v]
                if c:
                    acc += c * coords[var_idx[:, v]]
            idx = (acc % moduli) @ radix
            prod *= Fs[fi].values[idx]
        acc_sum += np.sum(prod)
    return complex(acc_sum / total)


def dual_constraint_solutions(
    config: ConfigSystem, group: GroupSpec, budget: int = DENSITY_BUDGET
) -> list[tuple[int, ...]]:
    """All dual assignments (r_1..r_k), as flat dual-element indices, that
    satisfy sum_j lambda_{j,m} r_j = 0 in the dual for every variable m.

    The congruences decouple across the coordinate factors of the dual, so
    each factor's solution group is enumerated separately (via the integer
    kernel of the lifted system) and the results are combined."""
    k = config.size
    lam_t = [[config.matrix()[j][m] for j in range(k)] for m in range(config.arity)]
    per_coord: list[list[tuple[int, ...]]] = []
    total = 1
    for m in group.moduli:
        sols = kernel_mod_m(lam_t, k, m)
        per_coord.append(sols)
        total *= len(sols)
        if total > budget:
            raise BudgetError(
                f"dual constraint lattice has {total}+ points, over budget {budget}"
            )
    radix = [1] * len(group.moduli)
    for j in range(len(group.moduli) - 2, -1, -1):
        radix[j] = radix[j + 1] * group.moduli[j + 1]

    out: list[tuple[int, ...]] = []

    def rec(c: int, partial: tuple[int, ...]):
        if c == len(per_coord):
            out.append(partial)
            return
        for sol in per_coord[c]:
            rec(c + 1, tuple(p + radix[c] * s for p, s in zip(partial, sol)))

    rec(0, (0,) * k)
    return out


def density_fourier(
    config: ConfigSystem,
    F,
    group: Optional[GroupSpec] = None,
    budget: int = DENSITY_BUDGET,
) -> complex:
    """Configuration density by character orthogonality: the sum over the
    dual constraint lattice of the product of spectrum values."""
    Fs = _as_system(F, config.size)
    if group is None:
        group = Fs[0].group
    specs = [spectrum_array(f) for f in Fs]
    sols = dual_constraint_solutions(config, group, budget=budget)
    acc = 0.0 + 0.0j
    for assignment in sols:
        term = 1.0 + 0.0j
        for j, r in enumerate(assignment):
            term *= specs[j][r]
        acc += term
    return complex(acc)


def density_monte_carlo(
    config: ConfigSystem,
    F,
    samples: int,
    seed: int = 0,
    group: Optional[GroupSpec] = None,
) -> tuple[complex, float]:
    """Unbiased sampled estimate of the density with its standard error."""
    Fs = _as_system(F, config.size)
    if group is None:
        group = Fs[0].group
    n = config.arity
    N = group.order
    rng = np.random.Generator(np.random.Philox(key=seed))
    moduli = np.array(group.moduli, dtype=np.int64)
    coords = np.array(list(group.elements()), dtype=np.int64)
    radix = np.ones(len(moduli), dtype=np.int64)
    for j in range(len(moduli) - 2, -1, -1):
        radix[j] = radix[j + 1] * moduli[j + 1]
    lam = np.array(config.matrix(), dtype=np.int64)
    var_idx = rng.integers(0, N, size=(samples, n))
    prod = np.ones(samples, dtype=np.complex128)
    for fi in range(config.size):
        acc = np.zeros((samples, len(moduli)), dtype=np.int64)
        for v in range(n):
            c = lam[fi, v]
            if c:
                acc += c * coords[var_idx[:, v]]
        idx = (acc % moduli) @ radix
        prod *= Fs[fi].values[idx]
    est = complex(np.mean(prod))
    se = float(np.std(prod) / math.sqrt(samples))
    return est, se


def cs_complexity_at_most_1(config: ConfigSystem) -> tuple[bool, list[bool]]:
    """Sufficient check that the configuration has complexity at most 1:
    for every form, the remaining forms admit a bipartition with neither
    class's rational span containing the excluded form.  Exact rational
    rank computations, exhaustive over all bipartitions."""
    k = config.size
    if k > 16:
        raise BudgetError("cs complexity check limited to at most 16 forms")
    if k < 2:
        raise ValidationError("cs complexity check needs at least 2 forms")
    rows = [[Rational(c) for c in f.coeffs] for f in config.forms]
    per_form: list[bool] = []
    for i in range(k):
        others = [rows[j] for j in range(k) if j != i]
        target = rows[i]
        ok = False
        for mask in range(2 ** len(others)):
            cls1 = [others[j] for j in range(len(others)) if mask >> j & 1]
            cls2 = [others[j] for j in range(len(others)) if not mask >> j & 1]
            if all(not _in_span(target, cls) for cls in (cls1, cls2)):
                ok = True
                break
        per_form.append(ok)
    return all(per_form), per_form


def _in_span(vec, vecs) -> bool:
    if not vecs:
        return all(c == 0 for c in vec)
    m = Matrix(vecs)
    m2 = Matrix(vecs + [vec])
    return m.rank() == m2.rank()
