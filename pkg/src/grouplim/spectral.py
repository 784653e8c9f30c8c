"""Fourier transform on finite abelian groups and the Gowers U2 norm.

Convention: fhat(r) = E_x f(x) * conj(chi_r(x)) with chi_r(x) =
exp(2*pi*i * sum_j r_j x_j / m_j), i.e. average on the group side and plain
sum on the dual side.  All downstream formulas (Parseval, U2, density
evaluation) assume this normalization.
"""

from __future__ import annotations

import numpy as np

from .errors import BudgetError, UnsupportedError
from .functions import DenseFn, SparseFn
from .groups import GroupSpec

TRUNCATION = 1e-14

U2_DIRECT_MAX_ORDER = 4096


def spectrum_array(f: DenseFn) -> np.ndarray:
    """Full (untruncated) spectrum as a flat array in dual enumeration
    order.  The dual of a finite group shares its moduli, so indexing
    matches GroupSpec.elements()."""
    shape = f.group.moduli
    grid = f.values.reshape(shape)
    return (np.fft.fftn(grid) / f.group.order).reshape(-1)


def dft(f: DenseFn) -> SparseFn:
    """Fourier transform; entries below 1e-14 in magnitude are dropped and
    the full l2 mass is preserved in declared_l2 for Parseval accounting."""
    spec = spectrum_array(f)
    dual = f.group.dual()
    entries = {}
    for idx in np.nonzero(np.abs(spec) > TRUNCATION)[0]:
        entries[dual.elem_at(int(idx))] = complex(spec[idx])
    return SparseFn(dual, entries, declared_l2=f.l2_norm(), truncation=TRUNCATION)


def dft_naive(f: DenseFn) -> np.ndarray:
    """Plain character-sum transform, kept as an independent cross-check
    for the FFT path."""
    G = f.group
    n = G.order
    elems = list(G.elements())
    out = np.zeros(n, dtype=np.complex128)
    for ri, r in enumerate(elems):
        acc = 0.0 + 0.0j
        for xi, x in enumerate(elems):
            phase = sum(rj * xj / m for rj, xj, m in zip(r, x, G.moduli))
            acc += f.values[xi] * np.exp(-2j * np.pi * phase)
        out[ri] = acc / n
    return out


def idft(fhat: SparseFn) -> DenseFn:
    """Inverse transform f(x) = sum_r fhat(r) chi_r(x) on a finite dual."""
    G = fhat.group
    if not G.is_finite:
        raise UnsupportedError("idft requires a finite dual group")
    n = G.order
    spec = np.zeros(n, dtype=np.complex128)
    for r, v in fhat.entries.items():
        spec[G.index_of(r)] = v
    grid = np.fft.ifftn(spec.reshape(G.moduli)) * n
    return DenseFn(G, grid.reshape(-1))


def u2_fourier(f: DenseFn) -> float:
    """U2 norm via the spectral formula: the l4 norm of the spectrum."""
    spec = spectrum_array(f)
    return float(np.sum(np.abs(spec) ** 4) ** 0.25)


def u2_direct(f: DenseFn, max_order: int = U2_DIRECT_MAX_ORDER) -> float:
    """U2 norm from its defining triple average
    E_{x,a,b} f(x) f(x+a)* f(x+b)* f(x+a+b), evaluated without any Fourier
    machinery.  The triple sum is regrouped exactly as
    E_a |E_x f(x) f(x+a)*|^2, which is the same finite sum with the x and b
    averages factored out; cost O(|A|^2)."""
    G = f.group
    n = G.order
    if n > max_order:
        raise BudgetError(
            f"group order {n} exceeds u2_direct guard {max_order}; use u2_fourier"
        )
    moduli = np.array(G.moduli, dtype=np.int64)
    coords = np.array(list(G.elements()), dtype=np.int64)
    radix = np.ones(len(moduli), dtype=np.int64)
    for j in range(len(moduli) - 2, -1, -1):
        radix[j] = radix[j + 1] * moduli[j + 1]
    vals = f.values
    acc = 0.0
    for a in range(n):
        shifted = ((coords + coords[a]) % moduli) @ radix
        c_a = np.mean(vals * np.conj(vals[shifted]))
        acc += abs(c_a) ** 2
    total = acc / n
    return float(total**0.25)
