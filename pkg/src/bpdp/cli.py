"""Command-line front end.

Every subcommand prints one self-describing JSON record (or CSV where a
table is the natural shape).  Numbers are serialized with 17 significant
digits so binary64 values round-trip.  Configuration precedence is flags,
then BPDP_-prefixed environment variables, then defaults.

Exit status: 0 success, 1 usage error, 2 verification failure,
3 resource cap exceeded.
"""

from __future__ import annotations

import json
import math
import os
import sys
import time
from typing import Optional

import click
import numpy as np

from . import __version__
from .chain import ChainParams, ResourceCapError, compute_pi
from .fitting import (PiDataset, fit_first_order, fit_first_order_fixed_alpha,
                      fit_four_param, fit_second_order,
                      fit_second_order_fixed_beta, fit_third_order)
from .lattice_sim import (Rectangle, event_holds, mc_estimate)
from .special_functions import (ModelParams, alpha, constants, f, g, h, h2,
                                h_mod)
from .verify import run_suite

CONTEXT_SETTINGS = {"auto_envvar_prefix": "BPDP"}


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _jsonify(obj):
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    return obj


def _emit_record(command: str, parameters: dict, outputs: dict,
                 wall_time_seconds: float, seed: Optional[int] = None):
    record = {
        "command": command,
        "parameters": _jsonify(parameters),
        "outputs": _jsonify(outputs),
        "wall_time_seconds": wall_time_seconds,
        "tool_version": __version__,
    }
    if seed is not None:
        record["seed"] = seed
    click.echo(json.dumps(record, sort_keys=True))


@click.group(context_settings=CONTEXT_SETTINGS)
@click.version_option(__version__)
def cli():
    """Exact growth-scale computations for local Frobose bootstrap
    percolation (chain DP, lattice simulation, fits, matrix checks)."""


def _resolve_p(p: Optional[float], log2_inv_p: Optional[int]) -> float:
    if (p is None) == (log2_inv_p is None):
        raise click.UsageError("give exactly one of --p / --log2-inv-p")
    if p is None:
        p = 2.0 ** -log2_inv_p
    if not 0.0 < p < 1.0:
        raise click.UsageError("p must lie in (0,1)")
    return p


@cli.command("pi")
@click.option("--p", type=float, default=None, help="Infection probability.")
@click.option("--log2-inv-p", type=int, default=None,
              help="Exponent k for p = 2^-k.")
@click.option("--threshold", type=int, default=None,
              help="Target semi-perimeter L (default ceil(2 log(1/p)/p)).")
@click.option("--convention", type=click.Choice(["exact", "at-least"]),
              default="exact", show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--prune-threshold", type=float, default=None,
              help="Drop states with log probability below this (default off).")
@click.option("--memory-cap-bytes", type=int, default=8 << 30,
              show_default=True, help="Abort before starting if the level "
              "storage estimate exceeds this.")
@click.option("--csv", "csv_path", type=click.Path(), default=None,
              help="Append a CSV row (log2_inv_p or p, log_pi) to this file.")
def cmd_pi(p, log2_inv_p, threshold, convention, threads, prune_threshold,
           memory_cap_bytes, csv_path):
    """Compute log Pi(p) exactly via the level-order dynamic program."""
    pv = _resolve_p(p, log2_inv_p)
    params = ChainParams.from_p(pv, threshold=threshold, convention=convention)
    result = compute_pi(params, threads=threads, prune_threshold=prune_threshold,
                        memory_cap_bytes=memory_cap_bytes)
    outputs = {
        "p": result.p, "q": result.q, "L": result.threshold,
        "convention": result.convention,
        "log_hit_prob": result.log_hit_prob, "log_pi": result.log_pi,
    }
    _emit_record("pi", {
        "p": pv, "log2_inv_p": log2_inv_p, "threshold": params.threshold,
        "convention": convention, "threads": threads,
        "prune_threshold": prune_threshold,
    }, outputs, result.wall_time_seconds)
    if csv_path:
        new = not os.path.exists(csv_path)
        with open(csv_path, "a", encoding="utf-8") as fh:
            if new:
                fh.write("log2_inv_p,p,log_pi\n")
            k = "" if log2_inv_p is None else str(log2_inv_p)
            fh.write(f"{k},{_fmt(pv)},{_fmt(result.log_pi)}\n")


def _parse_range(text: str):
    try:
        a, b = text.split("..")
        return int(a), int(b)
    except ValueError:
        raise click.UsageError(f"range must look like 2..8, got {text!r}")


@cli.command("scan")
@click.option("--log2-inv-p-range", "krange", required=True,
              help="Inclusive range a..b of exponents k, p = 2^-k.")
@click.option("--convention", type=click.Choice(["exact", "at-least"]),
              default="exact", show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--output", type=click.Path(), default=None,
              help="CSV file (default stdout); enables --resume.")
@click.option("--resume", is_flag=True,
              help="Skip exponents already present in the output file.")
def cmd_scan(krange, convention, threads, output, resume):
    """Stream a CSV table of (log2_inv_p, log_pi), one row per p."""
    k0, k1 = _parse_range(krange)
    done = set()
    header_needed = True
    if output and os.path.exists(output):
        if resume:
            with open(output, encoding="utf-8") as fh:
                for line in fh:
                    head = line.split(",", 1)[0]
                    if head.isdigit():
                        done.add(int(head))
            header_needed = False
        else:
            os.remove(output)
    sink = open(output, "a", encoding="utf-8") if output else sys.stdout
    try:
        if header_needed:
            sink.write("log2_inv_p,log_pi\n")
            sink.flush()
        for k in range(k0, k1 + 1):
            if k in done:
                continue
            try:
                params = ChainParams.from_p(2.0 ** -k, convention=convention)
                result = compute_pi(params, threads=threads)
            except Exception as exc:  # per-row failures recorded, scan continues
                click.echo(f"# k={k} failed: {exc}", err=True)
                continue
            sink.write(f"{k},{_fmt(result.log_pi)}\n")
            sink.flush()
    finally:
        if output:
            sink.close()


@cli.command("verify")
@click.option("--suite", type=click.Choice(
    ["stochasticity", "oracle", "lattice", "matrix", "variational", "all"]),
    default="all", show_default=True)
def cmd_verify(suite):
    """Run the module property suites; nonzero exit on any failure."""
    checks = run_suite(suite)
    failed = False
    for name, passed, details in checks:
        status = "pass" if passed else "FAIL"
        click.echo(f"[{status}] {name}" + (f"  ({details})" if details else ""))
        failed = failed or not passed
    if failed:
        raise VerificationFailure()


class VerificationFailure(click.ClickException):
    exit_code = 2

    def __init__(self):
        super().__init__("verification failed")


@cli.command("constants")
def cmd_constants():
    """First- and second-order constants (closed forms and quadrature)."""
    t0 = time.perf_counter()
    out = constants()
    _emit_record("constants", {}, out, time.perf_counter() - t0)


@cli.command("functions")
@click.option("--grid", default="1e-6..60", show_default=True,
              help="Log-spaced grid lo..hi for the abscissa z.")
@click.option("--points", type=int, default=200, show_default=True)
def cmd_functions(grid, points):
    """CSV table of (z, f, g, h, h2, h2_mod, alpha) on a log-spaced grid."""
    try:
        lo_s, hi_s = grid.split("..")
        lo, hi = float(lo_s), float(hi_s)
    except ValueError:
        raise click.UsageError(f"grid must look like 1e-6..60, got {grid!r}")
    if not (0.0 < lo < hi):
        raise click.UsageError("need 0 < lo < hi")
    zs = np.exp(np.linspace(math.log(lo), math.log(hi), points))
    click.echo("z,f,g,h,h2,h2_mod,alpha")
    for z in zs:
        row = [z, float(f(z)), float(g(z)), float(h(z)), float(h2(z)),
               float(h_mod(z)), float(alpha(z))]
        click.echo(",".join(_fmt(v) for v in row))


@cli.command("fit")
@click.option("--input", "input_path", type=click.Path(exists=True),
              required=True, help="CSV of (log2_inv_p, log_pi).")
def cmd_fit(input_path):
    """All asymptotic fits of a growth-scale table, as one JSON record."""
    t0 = time.perf_counter()
    rows = []
    with open(input_path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            head = line.split(",")[0]
            if not head.lstrip("-").isdigit():
                continue  # header
            k_s, v_s = line.split(",")[:2]
            rows.append((int(k_s), float(v_s)))
    if len(rows) < 4:
        raise click.UsageError("need at least four data rows")
    data = PiDataset(tuple(rows))
    from .fitting import FitError

    def attempt(fn):
        try:
            return fn(data)
        except FitError as exc:
            return {"error": str(exc)}

    outputs = {
        "first_order": attempt(fit_first_order),
        "first_order_fixed_alpha": attempt(fit_first_order_fixed_alpha),
        "second_order": attempt(fit_second_order),
        "second_order_fixed_beta": attempt(fit_second_order_fixed_beta),
        "third_order": attempt(fit_third_order),
        "four_param": attempt(fit_four_param),
        "coordinates": _figure_coordinates(data),
    }
    _emit_record("fit", {"input": os.path.basename(input_path)}, outputs,
                 time.perf_counter() - t0)


def _figure_coordinates(data: PiDataset) -> dict:
    """Plot-ready transformed coordinates for the standard figures."""
    import numpy as _np
    from .fitting import LAMBDA1_F, LAMBDA2_F
    x = data.log_inv_p
    p = data.p
    y = data.log_pi
    res1 = LAMBDA1_F / p - y
    res2 = y - LAMBDA1_F / p + LAMBDA2_F / _np.sqrt(p)
    return {
        "leading": {"x_log_inv_p": list(x), "y_p_log_pi": list(p * y)},
        "loglog": {"x_log_inv_p": list(x), "y_log_log_pi": list(_np.log(y))},
        "second_order": {"x_log_inv_p": list(x),
                         "y_log_residual": list(_np.log(res1))},
        "second_order_sqrt": {"x_inv_sqrt_p": list(1.0 / _np.sqrt(p)),
                              "y_residual": list(res1)},
        "third_order": {"x_log_inv_p": list(x),
                        "y_log_residual": list(_np.log(res2))},
    }


@cli.command("simulate")
@click.option("--event", "event_id", required=True,
              help="Event id: I, IF, I_loc, IF_loc, O, G-, G|, T_east, ...")
@click.option("--width", type=int, required=True)
@click.option("--height", type=int, required=True)
@click.option("--p", type=float, required=True)
@click.option("--n", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def cmd_simulate(event_id, width, height, p, n, seed):
    """Monte Carlo estimate of a rectangle event on a Bernoulli field."""
    t0 = time.perf_counter()
    params = ModelParams(p)
    rect = Rectangle(0, 0, width, height)
    est = mc_estimate(lambda A: event_holds(event_id, rect, A),
                      rect.cells(), params, n, seed)
    expected = _expected_event_prob(event_id, rect, params)
    outputs = {
        "event": event_id, "region": f"{width}x{height}", "p": p,
        "n": n, "seed": seed, "p_hat": est["p_hat"],
        "std_err": est["std_err"], "algorithm": est["algorithm"],
    }
    if expected is not None:
        outputs["expected"] = expected
    _emit_record("simulate", {"event": event_id, "width": width,
                              "height": height, "p": p, "n": n},
                 outputs, time.perf_counter() - t0, seed=seed)


def _expected_event_prob(event_id, rect, params):
    m = rect.width * rect.height
    q = params.q
    if event_id == "O":
        return -math.expm1(-m * q)
    if event_id == "G-":
        return math.exp(-rect.height * float(f(rect.width * q)))
    if event_id == "G|":
        return math.exp(-rect.width * float(f(rect.height * q)))
    return None


@cli.command("matrix")
def cmd_matrix():
    """Cycle-matrix checks as a pass/fail report."""
    checks = run_suite("matrix")
    failed = False
    for name, passed, details in checks:
        status = "pass" if passed else "FAIL"
        click.echo(f"[{status}] {name}" + (f"  ({details})" if details else ""))
        failed = failed or not passed
    if failed:
        raise VerificationFailure()


def main():
    try:
        cli(standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.UsageError as exc:
        exc.show()
        sys.exit(1)
    except VerificationFailure as exc:
        exc.show()
        sys.exit(2)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except ResourceCapError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)
    except click.Abort:
        sys.exit(1)
    sys.exit(0)


if __name__ == "__main__":
    main()
