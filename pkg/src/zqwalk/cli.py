"""Command-line frontend.

Thin client over the service handlers: by default calls them in-process;
with --server URL the same requests go over HTTP to a running service.

Exit codes: 0 success, 2 validation error, 3 size guard, 4 numerical
inconsistency.
"""

from __future__ import annotations

import csv
import io
import json
import sys

import click

from .errors import (
    NumericalInconsistencyError,
    SizeGuardError,
    ValidationError,
    ZqwalkError,
)
from .service import handle_chisq, handle_eigs, handle_simulate, handle_torus

EXIT_VALIDATION = 2
EXIT_SIZE = 3
EXIT_NUMERICAL = 4

_HTTP_EXIT = {422: EXIT_VALIDATION, 413: EXIT_SIZE, 409: EXIT_NUMERICAL}


def _load_spec(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read walk spec: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"walk spec is not valid JSON: {exc}") from exc


def _call(server: str | None, endpoint: str, handler, doc: dict, **params) -> dict:
    if server is None:
        return handler(doc, **params)
    import httpx

    resp = httpx.post(
        server.rstrip("/") + "/" + endpoint,
        json={"spec": doc, **params},
        timeout=600.0,
    )
    if resp.status_code != 200:
        detail = resp.json().get("detail", resp.text)
        code = _HTTP_EXIT.get(resp.status_code, EXIT_VALIDATION)
        click.echo(f"error: {detail}", err=True)
        sys.exit(code)
    return resp.json()


def _emit(result: dict, out: str, fmt: str):
    if fmt == "json":
        text = json.dumps(result, indent=2)
    else:
        buf = io.StringIO()
        buf.write(f"# spec: {result.get('spec', '')}\n")
        writer = csv.writer(buf)
        writer.writerow(result["columns"])
        writer.writerows(result["rows"])
        if "comparison" in result:
            cmp_ = result["comparison"]
            buf.write(
                f"# comparison max_abs_dev={cmp_['max_abs_dev']:.6g} "
                f"max_z={cmp_['max_z']:.6g} n_cells={cmp_['n_cells']}\n"
            )
        text = buf.getvalue()
    if out == "-":
        click.echo(text, nl=False)
        if not text.endswith("\n"):
            click.echo()
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _run(fn):
    try:
        fn()
    except ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    except SizeGuardError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_SIZE)
    except NumericalInconsistencyError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    except ZqwalkError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)


def _parse_trange(t: int | None, t_range: str | None) -> tuple[int, int]:
    if t_range is not None:
        try:
            lo, hi = t_range.split(":")
            return int(lo), int(hi)
        except ValueError as exc:
            raise ValidationError(f"bad --t-range {t_range!r}, expected A:B") from exc
    if t is not None:
        return t, t
    return 0, 10


spec_opt = click.option("--spec", "spec_path", required=True, help="walk-spec JSON file")
out_opt = click.option("--out", default="-", help="output file (default stdout)")
fmt_opt = click.option(
    "--format", "fmt", type=click.Choice(["csv", "json"]), default="csv"
)
server_opt = click.option("--server", default=None, help="service URL (HTTP mode)")


@click.group()
def main():
    """Spectral analysis of long-range random walks on Z_q^d."""


@main.command()
@spec_opt
@out_opt
@fmt_opt
@server_opt
def eigs(spec_path, out, fmt, server):
    """Eigenvalue table of the walk as (index, re, im, modulus)."""

    def run():
        doc = _load_spec(spec_path)
        _emit(_call(server, "eigs", handle_eigs, doc), out, fmt)

    _run(run)


@main.command()
@spec_opt
@out_opt
@fmt_opt
@server_opt
@click.option("--t", type=int, default=None, help="single time step")
@click.option("--t-range", default=None, help="time range A:B")
@click.option("--eps", type=float, default=0.0, help="mixing threshold offset")
def chisq(spec_path, out, fmt, server, t, t_range, eps):
    """Chi-squared distance to stationarity as (t, chisq, lower, upper)."""

    def run():
        doc = _load_spec(spec_path)
        t_min, t_max = _parse_trange(t, t_range)
        result = _call(
            server, "chisq", handle_chisq, doc, t_min=t_min, t_max=t_max, eps=eps
        )
        _emit(result, out, fmt)

    _run(run)


@main.command()
@spec_opt
@out_opt
@fmt_opt
@server_opt
@click.option("--t", type=int, default=1, help="number of steps")
@click.option("--paths", type=int, default=10000, help="number of paths")
@click.option("--seed", type=int, default=0, help="base RNG seed")
def simulate(spec_path, out, fmt, server, t, paths, seed):
    """Simulate paths; compare to the spectral prediction when feasible."""

    def run():
        doc = _load_spec(spec_path)
        result = _call(
            server, "simulate", handle_simulate, doc, t=t, paths=paths, seed=seed
        )
        _emit(result, out, fmt)

    _run(run)


@main.command()
@spec_opt
@out_opt
@fmt_opt
@server_opt
@click.option("--t", type=int, default=1, help="number of steps")
@click.option("--a", type=float, default=0.0, help="starting point in [0,1)")
@click.option("--grid", type=int, default=256, help="number of grid points")
@click.option("--eps", type=float, default=1e-6, help="series truncation error")
def torus(spec_path, out, fmt, server, t, a, grid, eps):
    """Transition density grid (b, f_t(b|a)) for a torus model."""

    def run():
        doc = _load_spec(spec_path)
        result = _call(
            server, "torus", handle_torus, doc, t=t, a=a, grid=grid, eps=eps
        )
        _emit(result, out, fmt)

    _run(run)


if __name__ == "__main__":
    main()
