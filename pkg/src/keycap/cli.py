"""Command-line driver: sweeps over the amplitude grid, scheme and bound
comparison tables, and KKT profile dumps, written as CSV or JSON.

Exit codes: 0 full success, 2 if any grid point failed to converge
(the row is kept with status=no_convergence), 1 on fatal errors.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import asdict
from pathlib import Path

import click

from .bounds import (
    high_a_limit,
    lower_bound_1,
    lower_bound_3,
    maximize_lower_bound_2,
    upper_bound,
)
from .channel import ChannelParams
from .errors import KeycapError, NoConvergence
from .schemes import (
    best_maxentropic,
    optimize_truncated_gaussian,
    truncated_gaussian_rate,
    uniform_scheme_rate,
)
from .solver import SolverConfig, secret_key_capacity

LN2 = math.log(2.0)

_RATE_COLUMNS = {
    "C_k", "C_k_UB", "LB1", "LB2_star", "LB3", "high_A_limit",
    "maxentropic_rate", "uniform_rate",
    "trunc_gauss_rate", "trunc_gauss_heuristic_rate",
}


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "%.12g" % value
    return str(value)


def _parse_grid(text: str) -> list[float]:
    try:
        grid = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise click.BadParameter(f"bad grid: {exc}") from None
    if not grid or any(g <= 0 for g in grid):
        raise click.BadParameter("grid must be positive values")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise click.BadParameter("grid must be strictly increasing")
    return grid


def _column_name(base: str, units: str) -> str:
    if base in _RATE_COLUMNS:
        return f"{base}_{units}"
    return base


def _evaluate_row(a2, var_d, var_e, outputs, cfg, k_max):
    params = ChannelParams(math.sqrt(a2), var_d, var_e)
    row = {"A_squared": a2, "status": "ok"}
    meta = {"A_squared": a2, "status": "ok"}
    try:
        if "capacity" in outputs or "kkt" in outputs:
            rep = secret_key_capacity(params, cfg)
            row["C_k"] = rep.rate_nats
            row["K"] = rep.num_points_K
            row["kkt_violation"] = rep.kkt_max_violation
            meta.update(K=rep.num_points_K,
                        kkt_violation=rep.kkt_max_violation)
            if "kkt" in outputs:
                meta["kkt_profile"] = [[x, s] for x, s in rep.kkt_grid]
        if "bounds" in outputs:
            beta_star, lb2 = maximize_lower_bound_2(params)
            row["C_k_UB"] = upper_bound(params)
            row["LB1"] = lower_bound_1(params, cfg)
            row["LB2_star"] = lb2
            row["beta_star"] = beta_star
            row["LB3"] = lower_bound_3(params)
            row["high_A_limit"] = high_a_limit(params)
        if "schemes" in outputs:
            k, r_me = best_maxentropic(params, k_max)
            row["maxentropic_K"] = k
            row["maxentropic_rate"] = r_me.nats
            row["uniform_rate"] = uniform_scheme_rate(params).nats
            sx, r_tg = optimize_truncated_gaussian(params)
            row["trunc_gauss_sigma_x"] = sx
            row["trunc_gauss_rate"] = r_tg.nats
            row["trunc_gauss_heuristic_rate"] = truncated_gaussian_rate(
                params, params.amplitude).nats
    except NoConvergence as exc:
        row["status"] = "no_convergence"
        meta["status"] = "no_convergence"
        meta["error"] = str(exc)
    return row, meta


def _write_output(rows, columns, units, fmt, out_path):
    named = []
    for row in rows:
        out_row = {}
        for col in columns:
            val = row.get(col)
            if col in _RATE_COLUMNS and units == "bits" and val is not None:
                val = val / LN2
            out_row[_column_name(col, units)] = val
        named.append(out_row)
    header = [_column_name(c, units) for c in columns]
    out = Path(out_path)
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(_fmt(r[h]) for h in header) for r in named]
        out.write_text("\n".join(lines) + "\n")
    else:
        out.write_text(json.dumps(named, sort_keys=True, indent=2,
                                  default=_fmt) + "\n")


def _write_meta(metas, cfg, units, seed, out_path):
    from .numerics import DEFAULT_QUAD

    payload = {
        "solver_config": asdict(cfg),
        "quadrature": asdict(DEFAULT_QUAD),
        "units": units,
        "seed": seed,
        "rows": metas,
    }
    Path(str(out_path) + ".meta.json").write_text(
        json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _common_options(fn):
    for opt in reversed([
        click.option("--var-d", type=float, required=True,
                     help="legitimate-receiver noise variance"),
        click.option("--var-e", type=float, required=True,
                     help="eavesdropper noise variance"),
        click.option("--a2-grid", required=True,
                     help="comma-separated strictly increasing squared amplitudes"),
        click.option("--units", type=click.Choice(["nats", "bits"]),
                     default="nats", show_default=True),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                     default="csv", show_default=True),
        click.option("--out", type=click.Path(dir_okay=False), required=True),
        click.option("--seed", type=int, default=0, show_default=True),
        click.option("--max-k", type=int, default=64, show_default=True,
                     help="mass-point budget for the solver"),
        click.option("--restarts", type=int, default=8, show_default=True),
    ]):
        fn = opt(fn)
    return fn


def _run_sweep(var_d, var_e, a2_grid, units, fmt, out, seed, max_k,
               restarts, outputs, k_max_schemes=32):
    grid = _parse_grid(a2_grid)
    cfg = SolverConfig(max_K=max_k, restarts=restarts, seed=seed)
    columns = ["A_squared"]
    if "capacity" in outputs or "kkt" in outputs:
        columns += ["C_k", "K", "kkt_violation"]
    if "bounds" in outputs:
        columns += ["C_k_UB", "LB1", "LB2_star", "beta_star", "LB3",
                    "high_A_limit"]
    if "schemes" in outputs:
        columns += ["maxentropic_K", "maxentropic_rate", "uniform_rate",
                    "trunc_gauss_sigma_x", "trunc_gauss_rate",
                    "trunc_gauss_heuristic_rate"]
    columns.append("status")
    rows, metas = [], []
    failed = False
    for a2 in grid:
        row, meta = _evaluate_row(a2, var_d, var_e, outputs, cfg,
                                  k_max_schemes)
        failed = failed or row["status"] != "ok"
        rows.append(row)
        metas.append(meta)
    try:
        _write_output(rows, columns, units, fmt, out)
        _write_meta(metas, cfg, units, seed, out)
    except OSError as exc:
        raise click.ClickException(f"cannot write output: {exc}")
    sys.exit(2 if failed else 0)


@click.group()
def main():
    """Secret-key capacity toolbox for amplitude-constrained Gaussian
    key agreement."""


@main.command()
@_common_options
def capacity(var_d, var_e, a2_grid, units, fmt, out, seed, max_k, restarts):
    """Secret-key capacity over the amplitude grid."""
    _run_sweep(var_d, var_e, a2_grid, units, fmt, out, seed, max_k,
               restarts, {"capacity"})


@main.command()
@_common_options
def bounds(var_d, var_e, a2_grid, units, fmt, out, seed, max_k, restarts):
    """Closed-form bounds (plus the solver-backed bound) over the grid."""
    _run_sweep(var_d, var_e, a2_grid, units, fmt, out, seed, max_k,
               restarts, {"bounds"})


@main.command()
@_common_options
@click.option("--k-max", type=int, default=32, show_default=True,
              help="largest point count tried by the equally-spaced scheme")
def schemes(var_d, var_e, a2_grid, units, fmt, out, seed, max_k, restarts,
            k_max):
    """Suboptimal scheme rates over the grid."""
    _run_sweep(var_d, var_e, a2_grid, units, fmt, out, seed, max_k,
               restarts, {"schemes"}, k_max_schemes=k_max)


@main.command()
@_common_options
@click.option("--outputs", default="capacity,bounds",
              show_default=True,
              help="comma-set drawn from capacity,schemes,bounds,kkt")
def sweep(var_d, var_e, a2_grid, units, fmt, out, seed, max_k, restarts,
          outputs):
    """Combined sweep with selectable output families."""
    chosen = {tok.strip() for tok in outputs.split(",") if tok.strip()}
    bad = chosen - {"capacity", "schemes", "bounds", "kkt"}
    if bad:
        raise click.BadParameter(f"unknown outputs: {sorted(bad)}")
    _run_sweep(var_d, var_e, a2_grid, units, fmt, out, seed, max_k,
               restarts, chosen)


@main.command("kkt-profile")
@click.option("--var-d", type=float, required=True)
@click.option("--var-e", type=float, required=True)
@click.option("--a2", type=float, required=True)
@click.option("--units", type=click.Choice(["nats", "bits"]),
              default="nats", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-k", type=int, default=64, show_default=True)
@click.option("--restarts", type=int, default=8, show_default=True)
def kkt_profile(var_d, var_e, a2, units, fmt, out, seed, max_k, restarts):
    """Dump the optimality-profile s(x; F) of the capacity solution."""
    cfg = SolverConfig(max_K=max_k, restarts=restarts, seed=seed)
    try:
        rep = secret_key_capacity(ChannelParams(math.sqrt(a2), var_d, var_e),
                                  cfg)
    except KeycapError as exc:
        raise click.ClickException(str(exc))
    scale = 1.0 / LN2 if units == "bits" else 1.0
    rows = [{"x": x, f"s_{units}": s * scale} for x, s in rep.kkt_grid]
    header = ["x", f"s_{units}"]
    try:
        if fmt == "csv":
            lines = [",".join(header)]
            lines += [",".join(_fmt(r[h]) for h in header) for r in rows]
            Path(out).write_text("\n".join(lines) + "\n")
        else:
            Path(out).write_text(
                json.dumps(rows, sort_keys=True, indent=2) + "\n")
        _write_meta([{
            "A_squared": a2, "status": "ok", "K": rep.num_points_K,
            "kkt_violation": rep.kkt_max_violation,
            "rate": rep.rate_nats * scale,
            "points": list(rep.distribution.points),
            "probs": list(rep.distribution.probs),
        }], cfg, units, seed, out)
    except OSError as exc:
        raise click.ClickException(f"cannot write output: {exc}")


if __name__ == "__main__":
    main()
