"""End-to-end CLI behavior: exit codes, JSON shape, determinism."""
import json

import numpy as np
import pytest

from grouplim import DenseFn, make_group
from grouplim.cli import main
from grouplim.graphon import Graph


@pytest.fixture
def dense_file(tmp_path):
    G = make_group([8])
    rng = np.random.default_rng(12)
    f = DenseFn(G, rng.random(8).astype(np.complex128))
    path = tmp_path / "f.json"
    path.write_text(json.dumps(f.to_json()))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def parse(out):
    payload = json.loads(out)
    meta = payload.pop("meta")
    return payload, meta


def test_dft_roundtrips_json(capsys, dense_file):
    code, out = run(capsys, ["dft", "--fn", dense_file])
    assert code == 0
    payload, meta = parse(out)
    assert "entries" in payload["spectrum"]
    assert meta["version"]


def test_u2_methods_agree(capsys, dense_file):
    code_f, out_f = run(capsys, ["u2", "--fn", dense_file])
    code_d, out_d = run(capsys, ["u2", "--fn", dense_file, "--method", "direct"])
    assert code_f == code_d == 0
    uf, _ = parse(out_f)
    ud, _ = parse(out_d)
    assert abs(uf["u2"] - ud["u2"]) <= 1e-10


def test_dist_self_is_exact_zero(capsys, dense_file):
    code, out = run(capsys, ["dist", "--lhs", dense_file, "--rhs", dense_file])
    assert code == 0
    payload, _ = parse(out)
    assert payload["lo"] == 0 and payload["hi"] == 0 and payload["exact"]


def test_density_of_constant(capsys, tmp_path):
    G = make_group([10])
    f = DenseFn(G, np.full(10, 0.3, dtype=np.complex128))
    path = tmp_path / "c.json"
    path.write_text(json.dumps(f.to_json()))
    code, out = run(capsys, ["density", "--config", "ap3", "--fn", str(path)])
    assert code == 0
    payload, _ = parse(out)
    assert payload["density"]["re"] == pytest.approx(0.027, abs=1e-12)


def test_density_methods_agree(capsys, dense_file):
    outs = {}
    for method in ("brute", "fourier"):
        code, out = run(capsys, ["density", "--config", "ap3", "--fn", dense_file,
                                 "--method", method])
        assert code == 0
        outs[method], _ = parse(out)
    assert outs["brute"]["density"]["re"] == pytest.approx(
        outs["fourier"]["density"]["re"], abs=1e-9)


def test_cs1_verdicts(capsys):
    code, out = run(capsys, ["cs1", "--config", "ap3"])
    assert code == 0
    payload, _ = parse(out)
    assert payload["cs1"] == "yes"


def test_round_is_seed_reproducible(capsys, dense_file):
    argv = ["round", "--fn", dense_file, "--seed", "3"]
    code1, out1 = run(capsys, argv)
    code2, out2 = run(capsys, argv)
    assert code1 == code2 == 0
    p1, m1 = parse(out1)
    p2, m2 = parse(out2)
    assert p1 == p2
    assert m1["seed"] == 3


def test_minimize_reports_upper_bound(capsys):
    code, out = run(capsys, ["minimize", "--config", "parallelogram", "--p", "5",
                             "--delta", "0.5", "--restarts", "2"])
    assert code == 0
    payload, meta = parse(out)
    assert payload["bound_kind"] == "upper bound"
    assert payload["value"] == pytest.approx(1 / 16, abs=1e-4)
    assert meta["step_rule"]["armijo_c"] == 1e-4


def test_rho_curve_writes_csv(capsys, tmp_path):
    out_csv = tmp_path / "curve.csv"
    code, out = run(capsys, ["rho-curve", "--config", "ap3", "--p", "5",
                             "--deltas", "0.2:0.8:0.3", "--restarts", "2",
                             "--out", str(out_csv)])
    assert code == 0
    lines = out_csv.read_text().strip().splitlines()
    assert lines[0] == "delta,value,grad_norm,monotone_ok"
    assert len(lines) == 4


def test_hom_verify_bridge(capsys, dense_file, tmp_path):
    gpath = tmp_path / "triangle.json"
    gpath.write_text(json.dumps(Graph(3, ((0, 1), (1, 2), (0, 2))).to_json()))
    code, out = run(capsys, ["hom", "--graph", str(gpath), "--fn", dense_file,
                             "--verify-bridge"])
    assert code == 0
    payload, _ = parse(out)
    assert payload["ok"]


def test_converge_detects_cauchy_pullbacks(capsys, tmp_path):
    base = np.array([0.2, 0.9])
    paths = []
    for k in (2, 4, 8):
        G = make_group([k])
        f = DenseFn(G, base[np.arange(k) % 2].astype(np.complex128))
        p = tmp_path / f"seq{k}.json"
        p.write_text(json.dumps(f.to_json()))
        paths.append(str(p))
    code, out = run(capsys, ["converge", "--fns", ",".join(paths), "--tol", "0.01"])
    assert code == 0
    payload, _ = parse(out)
    assert payload["cauchy"] and payload["tail_index"] == 0


def test_config_file_supplies_defaults(capsys, tmp_path, dense_file):
    cfg = tmp_path / "batch.cfg"
    cfg.write_text("method = direct\n")
    code, out = run(capsys, ["--config-file", str(cfg), "u2", "--fn", dense_file])
    assert code == 0
    payload, _ = parse(out)
    assert payload["method"] == "direct"


def test_exit_code_validation(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["dft", "--fn", str(bad)]) == 1
    capsys.readouterr()
    assert main(["density", "--config", "mystery", "--fn", str(bad)]) == 1
    capsys.readouterr()
    assert main(["no-such-command"]) == 1
    capsys.readouterr()


def test_exit_code_budget(capsys, tmp_path):
    rng = np.random.default_rng(0)
    paths = []
    for i in range(2):
        G = make_group([12])
        f = DenseFn(G, (rng.random(12) + 1j * rng.random(12)))
        p = tmp_path / f"b{i}.json"
        p.write_text(json.dumps(f.to_json()))
        paths.append(str(p))
    code = main(["dist", "--lhs", paths[0], "--rhs", paths[1], "--budget", "1"])
    capsys.readouterr()
    assert code == 2
