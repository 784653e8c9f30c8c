"""Shared helpers for the test suite."""
import numpy as np
import pytest

from grouplim import DenseFn, SparseFn, make_group


def random_dense(group, seed, real=False, box=False):
    """Deterministic random function on a finite group."""
    rng = np.random.default_rng(seed)
    n = group.order
    if box:
        vals = rng.random(n).astype(np.complex128)
    elif real:
        vals = rng.standard_normal(n).astype(np.complex128)
    else:
        vals = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return DenseFn(group, vals)


def random_sparse(group, seed, size, lo=0.1, hi=1.0):
    """Random finitely supported function with values bounded away from 0."""
    rng = np.random.default_rng(seed)
    elems = list(group.elements())
    idx = rng.choice(len(elems), size=min(size, len(elems)), replace=False)
    entries = {elems[i]: complex(rng.uniform(lo, hi)) for i in idx}
    return SparseFn(group, entries)


@pytest.fixture
def z8():
    return make_group([8])


@pytest.fixture
def z12():
    return make_group([12])


@pytest.fixture
def z2z3():
    return make_group([2, 3])
