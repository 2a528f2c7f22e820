"""HTTP service exposing the library, plus the plain handler functions.

The handlers take a walk-spec document (a parsed JSON dict) and parameters
and return JSON-serializable dicts; the FastAPI routes and the CLI are both
thin clients of these functions.  Library errors map to HTTP status codes:
validation -> 422, size guard -> 413, numerical inconsistency -> 409.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .core import enumerate_count_vectors, stationary_pmf
from .errors import (
    NumericalInconsistencyError,
    SizeGuardError,
    ValidationError,
    ZqwalkError,
)
from .grouped import GroupedChain, chi_squared, chi_squared_bounds, grouped_from_increment
from .krawtchouk import mvk_eval
from .oracle import compare, simulate_paths
from .product import rho_array
from .torus import density_series
from .walkspec import WalkSpec, parse_walkspec

EIG_TABLE_GUARD = 2**12
TORUS_EIG_ROWS = 32


def _fmt_index(idx) -> str:
    return ",".join(str(int(x)) for x in idx)


def handle_eigs(doc: dict) -> dict:
    """Eigenvalue table for the walk: 1-D, product, grouped, or torus."""
    spec = parse_walkspec(doc)
    rows = []
    if spec.torus is not None:
        for r in range(TORUS_EIG_ROWS):
            g = complex(spec.torus.ghat(r))
            rows.append([str(r), g.real, g.imag, abs(g)])
        kind = "torus"
    elif spec.grouped is not None:
        for l, k in spec.grouped.kappa.items():
            k = complex(k)
            rows.append([_fmt_index(l), k.real, k.imag, abs(k)])
        kind = "grouped"
    elif spec.d == 1 and spec.law1d is not None:
        from .circulant import eigenvalues_1d

        for r, e in enumerate(eigenvalues_1d(spec.law1d).eta):
            e = complex(e)
            rows.append([str(r), e.real, e.imag, abs(e)])
        kind = "circulant"
    else:
        if spec.q**spec.d > EIG_TABLE_GUARD:
            raise SizeGuardError(
                f"eigenvalue table has q^d = {spec.q**spec.d} rows; "
                f"guard is {EIG_TABLE_GUARD}"
            )
        grid = rho_array(spec.increment)
        for r in np.ndindex(*grid.shape):
            v = complex(grid[r])
            rows.append([_fmt_index(r), v.real, v.imag, abs(v)])
        kind = "product"
    return {
        "spec": spec.header(),
        "kind": kind,
        "columns": ["index", "re", "im", "modulus"],
        "rows": rows,
    }


def _grouped_chain(spec: WalkSpec) -> GroupedChain:
    if spec.grouped is not None:
        return spec.grouped
    if spec.increment is not None and spec.increment.is_exchangeable():
        return grouped_from_increment(spec.increment)
    raise ValidationError(
        "chi-squared analysis needs an exchangeable (grouped) walk"
    )


def handle_chisq(doc: dict, t_min: int, t_max: int, eps: float = 0.0) -> dict:
    """Chi-squared distance from the all-zero start over a range of times.

    For the subset-toggle model the closed-form envelope (lower and upper
    bounds with per-coordinate rate A/d) is included.
    """
    if t_min < 0 or t_max < t_min:
        raise ValidationError(f"bad time range {t_min}:{t_max}")
    spec = parse_walkspec(doc)
    chain = _grouped_chain(spec)
    m0 = (chain.d,) + (0,) * (chain.q - 1)
    bounds = None
    if spec.model_name == "subset-toggle":
        bounds = int(spec.model_params["A"]) / chain.d
    rows = []
    for t in range(t_min, t_max + 1):
        chi = chi_squared(chain, m0, t)
        if bounds is not None and t >= 1:
            lo, up = chi_squared_bounds(chain.d, chain.q, bounds, t)
            rows.append([t, chi, lo, up])
        else:
            rows.append([t, chi, "", ""])
    return {
        "spec": spec.header(),
        "columns": ["t", "chisq", "lower_bound", "upper_bound"],
        "rows": rows,
    }


def handle_simulate(doc: dict, t: int, paths: int, seed: int) -> dict:
    """Simulate paths from the all-zero state and, where feasible, compare
    against the spectral t-step prediction."""
    spec = parse_walkspec(doc)
    if spec.increment is None:
        raise ValidationError("simulation needs a discrete walk (not a torus law)")
    incr = spec.increment
    q, d = incr.q, incr.d
    x0 = (0,) * d

    if q**d <= EIG_TABLE_GUARD:
        emp = simulate_paths(incr, x0, t, paths, seed, grouped=False)
        kernel_t = np.fft.ifftn(rho_array(incr) ** t)
        expected = {}
        for y in np.ndindex(*(q,) * d):
            delta = tuple((-yc) % q for yc in y)  # x0 = 0, so x - y = -y
            expected[tuple(y)] = float(max(0.0, kernel_t[delta].real))
        keyfmt = "state"
    elif incr.is_exchangeable():
        emp = simulate_paths(incr, x0, t, paths, seed, grouped=True)
        chain = grouped_from_increment(incr)
        expected = {}
        for n in enumerate_count_vectors(d, q):
            # From m_0, h_l Q_l(m_0) = 1, so the series needs only conj(Q_l(n)).
            series = 1.0
            for l, k in chain.kappa.items():
                if sum(l) == 0 or k == 0:
                    continue
                series += (k**t * np.conj(mvk_eval(l, n, q))).real
            expected[n] = float(max(0.0, stationary_pmf(n, q) * series))
        keyfmt = "counts"
    else:
        emp = simulate_paths(incr, x0, t, paths, seed, grouped=False)
        expected = None
        keyfmt = "state"

    rows = [
        [_fmt_index(k), c, c / emp.total] for k, c in sorted(emp.counts.items())
    ]
    out = {
        "spec": spec.header(),
        "key": keyfmt,
        "columns": ["outcome", "count", "frequency"],
        "rows": rows,
        "paths": paths,
        "seed": seed,
        "t": t,
    }
    if expected is not None:
        report = compare(expected, emp)
        out["comparison"] = {
            "max_abs_dev": report.max_abs_dev,
            "max_z": report.max_z,
            "n_cells": report.n_cells,
        }
    return out


def handle_torus(doc: dict, t: int, a: float, grid: int, eps: float) -> dict:
    """Transition density f_t(b | a) on a uniform grid of b values."""
    spec = parse_walkspec(doc)
    if spec.torus is None:
        raise ValidationError("density grids need a torus model (e.g. von-mises)")
    if grid < 2:
        raise ValidationError("grid must have at least 2 points")
    rows = []
    for i in range(grid):
        b = i / grid
        rows.append([b, density_series(spec.torus, t, a, b, eps)])
    return {
        "spec": spec.header(),
        "columns": ["b", "density"],
        "rows": rows,
        "t": t,
        "a": a,
    }


# ---------------------------------------------------------------------------
# FastAPI layer


class SpecRequest(BaseModel):
    spec: dict


class ChisqRequest(SpecRequest):
    t_min: int = 0
    t_max: int = 10
    eps: float = 0.0


class SimulateRequest(SpecRequest):
    t: int = 1
    paths: int = Field(default=10000, ge=1)
    seed: int = 0


class TorusRequest(SpecRequest):
    t: int = 1
    a: float = 0.0
    grid: int = 256
    eps: float = 1e-6


app = FastAPI(title="zqwalk", version="0.1.0")


def _guarded(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ValidationError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except SizeGuardError as exc:
        raise HTTPException(status_code=413, detail=str(exc))
    except NumericalInconsistencyError as exc:
        raise HTTPException(status_code=409, detail=str(exc))
    except ZqwalkError as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/eigs")
def eigs(req: SpecRequest):
    return _guarded(handle_eigs, req.spec)


@app.post("/chisq")
def chisq(req: ChisqRequest):
    return _guarded(handle_chisq, req.spec, req.t_min, req.t_max, req.eps)


@app.post("/simulate")
def simulate(req: SimulateRequest):
    return _guarded(handle_simulate, req.spec, req.t, req.paths, req.seed)


@app.post("/torus")
def torus(req: TorusRequest):
    return _guarded(handle_torus, req.spec, req.t, req.a, req.grid, req.eps)
