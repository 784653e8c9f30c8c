"""Convergence diagnostics for function sequences."""
import numpy as np
import pytest

from grouplim import DenseFn, constant_fn, make_group
from grouplim.errors import ValidationError
from grouplim.linconfig import builtin_config
from grouplim.sequences import (
    cauchy_detect,
    continuity_probe,
    histogram_distance,
    norm_drift,
    pairwise_table,
    value_histogram,
)
from conftest import random_dense


def pullback_sequence():
    """A function on Z_2 pulled back along Z_{2^k} -> Z_2: d-distance 0
    between any two terms, the discrete model of a convergent sequence."""
    base = np.array([0.2, 0.9])
    fs = []
    for k in range(1, 4):
        n = 2**k
        G = make_group([n])
        fs.append(DenseFn(G, base[np.arange(n) % 2].astype(np.complex128)))
    return fs


def test_pairwise_table_shape_and_diagonal():
    fs = pullback_sequence()
    table = pairwise_table(fs)
    assert len(table) == 3
    for i in range(3):
        assert (table[i][i].lo, table[i][i].hi, table[i][i].exact) == (0.0, 0.0, True)
        for j in range(3):
            assert table[i][j] is table[j][i] or (
                table[i][j].lo == table[j][i].lo and table[i][j].hi == table[j][i].hi)


def test_pairwise_table_rejects_unknown_metric():
    with pytest.raises(ValidationError):
        pairwise_table(pullback_sequence(), metric="L1")


def test_pullback_sequence_is_cauchy():
    fs = pullback_sequence()
    table = pairwise_table(fs)
    ok, tail = cauchy_detect(table, tol=1e-9)
    assert ok
    assert tail == 0


def test_divergent_sequence_is_not_cauchy():
    G = make_group([8])
    fs = [constant_fn(G, 0.1), constant_fn(G, 0.9), constant_fn(G, 0.1)]
    ok, _ = cauchy_detect(pairwise_table(fs, metric="dprime"), tol=0.05)
    assert not ok


def test_norm_drift_flags_changing_l2():
    G = make_group([6])
    steady = [constant_fn(G, 0.5) for _ in range(4)]
    assert not norm_drift(steady)
    drifting = [constant_fn(G, 0.3 + 0.1 * k) for k in range(4)]
    assert norm_drift(drifting)


def test_value_histogram_masses():
    G = make_group([16])
    f = random_dense(G, seed=6, box=True)
    h = value_histogram(f, bins=8)
    assert h.masses.sum() == pytest.approx(1.0, abs=1e-12)
    assert histogram_distance(h, h) == 0.0


def test_value_histogram_complex_uses_joint_bins():
    G = make_group([9])
    f = random_dense(G, seed=7)
    h = value_histogram(f, bins=4)
    assert h.masses.size == 16
    assert h.masses.sum() == pytest.approx(1.0, abs=1e-12)


def test_histogram_distance_requires_shared_grid():
    G = make_group([16])
    f = random_dense(G, seed=8, box=True)
    h1 = value_histogram(f, bins=8, range_re=(0, 1))
    h2 = value_histogram(f, bins=8, range_re=(0, 2))
    with pytest.raises(ValidationError):
        histogram_distance(h1, h2)
    g = random_dense(G, seed=9, box=True)
    h3 = value_histogram(g, bins=8, range_re=(0, 1))
    assert 0.0 <= histogram_distance(h1, h3) <= 2.0 + 1e-12


def test_continuity_probe_reports_complexity_flag():
    G = make_group([7])
    pairs = [(random_dense(G, seed=2 * k, box=True),
              random_dense(G, seed=2 * k + 1, box=True)) for k in range(3)]
    rows, cs1 = continuity_probe(builtin_config("ap3"), pairs)
    assert cs1
    assert len(rows) == 3
    for d_hi, dt in rows:
        assert d_hi >= 0 and dt >= 0
