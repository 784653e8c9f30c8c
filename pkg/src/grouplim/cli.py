"""Command line interface: one binary, JSON/CSV in and out, full
reproducibility metadata on every run.

Exit codes: 0 success, 1 validation error (including usage), 2 budget
exceeded, 3 internal error.
"""

from __future__ import annotations

import csv
import glob as globmod
import io
import json
import os
import sys
import time

import click
import numpy as np

from . import __version__
from .errors import BudgetError, GrouplimError, ValidationError
from .extremal import (
    ARMIJO_C,
    ARMIJO_SHRINK,
    DEFAULT_MAX_ITER,
    DEFAULT_RESTARTS,
    minimize_density,
    rho_curve,
)
from .functions import DenseFn, SparseFn
from .graphon import Graph, cayley_kernel, hom_density, verify_bridge
from .linconfig import (
    ConfigSystem,
    builtin_config,
    cs_complexity_at_most_1,
    density_brute,
    density_fourier,
    density_monte_carlo,
)
from .metric import DEFAULT_NODE_BUDGET, DEFAULT_WEIGHT_CAP, d_metric, dhat, dprime
from .rounding import adjust_density, randomized_round, round_best_of
from .sequences import cauchy_detect, pairwise_table
from .spectral import dft, u2_direct, u2_fourier


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"file not found: {path}")
    except json.JSONDecodeError as e:
        raise ValidationError(f"invalid JSON in {path}: {e}")


def _load_dense(path: str) -> DenseFn:
    return DenseFn.from_json(_load_json(path))


def _load_sparse(path: str) -> SparseFn:
    return SparseFn.from_json(_load_json(path))


def _load_config(spec: str) -> ConfigSystem:
    if spec in ("ap3", "parallelogram") or spec.startswith("graph:"):
        return builtin_config(spec)
    if os.path.exists(spec):
        return ConfigSystem.from_json(_load_json(spec))
    raise ValidationError(f"unknown config '{spec}' (not a builtin name or file)")


def _emit(payload: dict, started: float, **meta):
    payload = dict(payload)
    payload["meta"] = {
        "version": __version__,
        "timing_s": time.monotonic() - started,
        "threads": int(os.environ.get("GROUPLIM_THREADS", "1")),
        **meta,
    }
    click.echo(json.dumps(payload, sort_keys=True))


def _complex_json(z: complex):
    return {"re": z.real, "im": z.imag}


def _read_config_file(path: str) -> dict:
    """TOML-style key=value lines used as argument defaults for batch runs."""
    defaults = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValidationError(f"bad line in config file: '{line}'")
            key, val = line.split("=", 1)
            defaults[key.strip().replace("_", "-")] = val.strip().strip("\"'")
    return defaults


@click.group(name="grouplim")
@click.option("--config-file", type=click.Path(exists=True), default=None,
              help="key=value file supplying option defaults for batch runs")
@click.option("--threads", type=int, default=None,
              help="thread count (results are deterministic regardless)")
@click.pass_context
def cli(ctx, config_file, threads):
    """Limit-theory toolkit for functions on finite abelian groups."""
    if threads is not None:
        os.environ["GROUPLIM_THREADS"] = str(threads)
    if config_file:
        defaults = _read_config_file(config_file)
        ctx.default_map = {
            cmd: {k.replace("-", "_"): v for k, v in defaults.items()}
            for cmd in cli.commands
        }


@cli.command("dft")
@click.option("--fn", "fn_path", required=True, type=click.Path())
def cmd_dft(fn_path):
    """Fourier transform of a dense function, as sparse-spectrum JSON."""
    started = time.monotonic()
    f = _load_dense(fn_path)
    _emit({"spectrum": dft(f).to_json()}, started)


@cli.command("u2")
@click.option("--fn", "fn_path", required=True, type=click.Path())
@click.option("--method", type=click.Choice(["fourier", "direct"]), default="fourier")
def cmd_u2(fn_path, method):
    """Gowers U2 norm."""
    started = time.monotonic()
    f = _load_dense(fn_path)
    value = u2_fourier(f) if method == "fourier" else u2_direct(f)
    _emit({"u2": value, "method": method}, started)


@cli.command("dist")
@click.option("--lhs", required=True, type=click.Path())
@click.option("--rhs", required=True, type=click.Path())
@click.option("--raw-spectra", is_flag=True,
              help="inputs are sparse spectra; compare with dhat directly")
@click.option("--tight", is_flag=True, help="use the tight metric (adds the L2 norm gap)")
@click.option("--weight-cap", type=int, default=DEFAULT_WEIGHT_CAP, show_default=True)
@click.option("--budget", type=int, default=DEFAULT_NODE_BUDGET, show_default=True)
def cmd_dist(lhs, rhs, raw_spectra, tight, weight_cap, budget):
    """Distance bracket between two functions (or two raw spectra)."""
    started = time.monotonic()
    if raw_spectra:
        if tight:
            raise ValidationError("--tight applies to dense functions, not raw spectra")
        bracket = dhat(_load_sparse(lhs), _load_sparse(rhs),
                       weight_cap=weight_cap, node_budget=budget)
    else:
        f = dprime if tight else d_metric
        bracket = f(_load_dense(lhs), _load_dense(rhs),
                    weight_cap=weight_cap, node_budget=budget)
    _emit(bracket.to_json(), started, weight_cap=weight_cap, budget=budget)


@cli.command("density")
@click.option("--config", "config_spec", required=True)
@click.option("--fn", "fn_path", required=True, type=click.Path())
@click.option("--method", type=click.Choice(["brute", "fourier", "mc"]), default="brute")
@click.option("--monte-carlo", "mc_samples", type=int, default=100000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def cmd_density(config_spec, fn_path, method, mc_samples, seed):
    """Configuration density of a function."""
    started = time.monotonic()
    config = _load_config(config_spec)
    f = _load_dense(fn_path)
    if method == "brute":
        t = density_brute(config, f)
        out = {"density": _complex_json(t), "method": "brute"}
    elif method == "fourier":
        t = density_fourier(config, f)
        out = {"density": _complex_json(t), "method": "fourier"}
    else:
        t, se = density_monte_carlo(config, f, samples=mc_samples, seed=seed)
        out = {
            "density": _complex_json(t),
            "method": "mc",
            "estimate": True,
            "standard_error": se,
            "samples": mc_samples,
        }
    _emit(out, started, seed=seed)


@cli.command("cs1")
@click.option("--config", "config_spec", required=True)
def cmd_cs1(config_spec):
    """Cauchy-Schwarz complexity-1 sufficient check (reported as cs1, it is
    not the true analytic complexity)."""
    started = time.monotonic()
    config = _load_config(config_spec)
    overall, per_form = cs_complexity_at_most_1(config)
    _emit({"cs1": "yes" if overall else "no", "per_form": per_form}, started)


@cli.command("round")
@click.option("--fn", "fn_path", required=True, type=click.Path())
@click.option("--seed", type=int, required=True)
@click.option("--best-of", type=int, default=8, show_default=True)
@click.option("--target-density", type=float, default=None)
def cmd_round(fn_path, seed, best_of, target_density):
    """Randomized rounding to a set indicator, reporting the achieved U2
    deviation."""
    started = time.monotonic()
    f = _load_dense(fn_path)
    h, dev, win_seed = round_best_of(f, seed, tries=best_of)
    if target_density is not None:
        h = adjust_density(h, target_density, seed)
        dev = u2_fourier(DenseFn(f.group, h.values - f.values))
    _emit(
        {
            "rounded": h.to_json(),
            "u2_deviation": dev,
            "winning_seed": win_seed,
            "mean": h.mean().real,
        },
        started,
        seed=seed,
        best_of=best_of,
    )


@cli.command("minimize")
@click.option("--config", "config_spec", required=True)
@click.option("--p", type=int, required=True)
@click.option("--delta", type=float, required=True)
@click.option("--restarts", type=int, default=DEFAULT_RESTARTS, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-iter", type=int, default=DEFAULT_MAX_ITER, show_default=True)
@click.option("--unsafe-group", is_flag=True,
              help="allow composite group orders (outside the extremal family)")
def cmd_minimize(config_spec, p, delta, restarts, seed, max_iter, unsafe_group):
    """Minimize the configuration density at fixed mean over Z_p (reported
    value is an upper bound for that p)."""
    started = time.monotonic()
    config = _load_config(config_spec)
    res = minimize_density(
        config, p, delta, restarts=restarts, seed=seed,
        max_iter=max_iter, unsafe_group=unsafe_group,
    )
    _emit(res.to_json(), started, seed=seed, restarts=restarts,
          step_rule={"armijo_c": ARMIJO_C, "shrink": ARMIJO_SHRINK,
                     "init": "spectral"})


@cli.command("rho-curve")
@click.option("--config", "config_spec", required=True)
@click.option("--p", type=int, required=True)
@click.option("--deltas", default="0.1:0.9:0.1", show_default=True,
              help="grid as start:stop:step (inclusive)")
@click.option("--restarts", type=int, default=DEFAULT_RESTARTS, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="write CSV here instead of stdout")
def cmd_rho_curve(config_spec, p, deltas, restarts, seed, out_path):
    """Minimal-density curve over a delta grid, as CSV."""
    started = time.monotonic()
    config = _load_config(config_spec)
    try:
        start, stop, step = (float(x) for x in deltas.split(":"))
    except ValueError:
        raise ValidationError("--deltas must look like 0.1:0.9:0.1")
    grid = list(np.arange(start, stop + step / 2, step))
    rows = rho_curve(config, p, grid, restarts=restarts, seed=seed)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["delta", "value", "grad_norm", "monotone_ok"])
    for row in rows:
        writer.writerow([row["delta"], row["value"], row["grad_norm"], row["monotone_ok"]])
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(buf.getvalue())
        _emit({"rows": len(rows), "out": out_path}, started, seed=seed)
    else:
        click.echo(buf.getvalue(), nl=False)


@cli.command("hom")
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--fn", "fn_path", required=True, type=click.Path())
@click.option("--verify-bridge", "do_verify", is_flag=True)
def cmd_hom(graph_path, fn_path, do_verify):
    """Homomorphism density of a graph in the Cayley kernel of a function."""
    started = time.monotonic()
    H = Graph.from_json(_load_json(graph_path))
    f = _load_dense(fn_path)
    if do_verify:
        report = verify_bridge(H, f)
        _emit(
            {
                "hom_density": _complex_json(report["hom_density"]),
                "config_density": _complex_json(report["config_density"]),
                "abs_diff": report["abs_diff"],
                "ok": report["ok"],
            },
            started,
        )
    else:
        t = hom_density(H, cayley_kernel(f))
        _emit({"hom_density": _complex_json(t)}, started)


@cli.command("converge")
@click.option("--fns", "fn_glob", required=True,
              help="glob (or comma list) of dense-function JSON files, in sequence order")
@click.option("--metric", type=click.Choice(["d", "dprime"]), default="d", show_default=True)
@click.option("--tol", type=float, default=0.1, show_default=True)
@click.option("--weight-cap", type=int, default=DEFAULT_WEIGHT_CAP, show_default=True)
@click.option("--budget", type=int, default=DEFAULT_NODE_BUDGET, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
def cmd_converge(fn_glob, metric, tol, weight_cap, budget, out_path):
    """Pairwise distance table for a function sequence plus Cauchy check."""
    started = time.monotonic()
    if "," in fn_glob:
        paths = [p for p in fn_glob.split(",") if p]
    else:
        paths = sorted(globmod.glob(fn_glob))
    if not paths:
        raise ValidationError(f"no files match '{fn_glob}'")
    fs = [_load_dense(p) for p in paths]
    table = pairwise_table(fs, metric=metric, weight_cap=weight_cap, node_budget=budget)
    is_cauchy, tail = cauchy_detect(table, tol)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["i", "j", "lo", "hi", "exact", "weight_capped"])
    for i in range(len(fs)):
        for j in range(len(fs)):
            cell = table[i][j]
            if cell is None:
                writer.writerow([i, j, "", "", "", ""])
            else:
                writer.writerow([i, j, cell.lo, cell.hi, cell.exact, cell.weight_capped])
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(buf.getvalue())
    payload = {"cauchy": is_cauchy, "tail_index": tail, "files": paths}
    if not out_path:
        payload["table_csv"] = buf.getvalue()
    else:
        payload["out"] = out_path
    _emit(payload, started, tol=tol, weight_cap=weight_cap, budget=budget)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Abort:
        return 1
    except click.exceptions.ClickException as e:
        e.show(file=sys.stderr)
        return 1
    except ValidationError as e:
        click.echo(f"error: {e}", err=True)
        return 1
    except BudgetError as e:
        click.echo(f"budget exceeded: {e}", err=True)
        return 2
    except GrouplimError as e:
        click.echo(f"internal error: {e}", err=True)
        return 3
    except Exception as e:  # anything unexpected is an internal error
        click.echo(f"internal error: {type(e).__name__}: {e}", err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
