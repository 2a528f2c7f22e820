"""The versioned JSON walk-spec document ("zqwalk-spec/1").

A document selects exactly one of:

* ``"model"`` — a named shortcut with parameters::

      {"schema": "zqwalk-spec/1", "q": 5, "d": 1,
       "model": {"name": "lazy", "gamma": 0.5}}

  Names: shift, lazy(gamma), uniform, mixture(beta, gamma), symmetric(v),
  subset-toggle(A), neighbor, left-shift, hamming(qh), von-mises(k).

* ``"increment"`` — an explicit increment descriptor::

      {"variant": "explicit",     "support": [[[0, 1], 0.5], ...]}
      {"variant": "iid",          "marginals": [[0.5, 0.5, 0], ...]}
      {"variant": "exchangeable", "counts": [[[2, 1, 0], 0.25], ...]}
      {"variant": "mixture",      "components": [[0.5, {...}], ...]}

The 1-D shortcuts (shift, lazy, uniform, mixture, symmetric) lift to d
coordinates as an i.i.d. product when d > 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .circulant import (
    IncrementLaw1D,
    lazy_law,
    mixture_law,
    shift_law,
    symmetric_law,
    uniform_law,
)
from .errors import ValidationError
from .grouped import (
    GroupedChain,
    hamming_chain,
    left_shift_chain,
    neighbor_chain,
    subset_toggle_chain,
)
from .product import (
    ExchangeableCountsIncrement,
    ExplicitIncrement,
    IIDProductIncrement,
    IncrementDist,
    MixtureIncrement,
    iid_increment,
)
from .torus import TorusLaw, von_mises_law

SCHEMA = "zqwalk-spec/1"

ONE_D_MODELS = ("shift", "lazy", "uniform", "mixture", "symmetric")
GROUPED_MODELS = ("subset-toggle", "neighbor", "left-shift", "hamming")
TORUS_MODELS = ("von-mises",)


@dataclass
class WalkSpec:
    """A fully resolved walk description."""

    raw: dict
    q: Optional[int] = None
    d: Optional[int] = None
    law1d: Optional[IncrementLaw1D] = None
    increment: Optional[IncrementDist] = None
    grouped: Optional[GroupedChain] = None
    torus: Optional[TorusLaw] = None
    model_name: Optional[str] = None
    model_params: Optional[dict] = None

    def header(self) -> str:
        return json.dumps(self.raw, sort_keys=True, separators=(",", ":"))


def _require(cond: bool, msg: str):
    if not cond:
        raise ValidationError(msg)


def _build_increment(desc: dict, q: int, d: int) -> IncrementDist:
    _require(isinstance(desc, dict) and "variant" in desc, "increment needs a variant")
    variant = desc["variant"]
    if variant == "explicit":
        support = [
            (tuple(int(c) for c in point), float(w))
            for point, w in desc.get("support", [])
        ]
        return ExplicitIncrement(support, q, d)
    if variant == "iid":
        marginals = [
            IncrementLaw1D(tuple(float(x) for x in v)) for v in desc.get("marginals", [])
        ]
        _require(len(marginals) == d, "iid variant needs d marginals")
        return IIDProductIncrement(marginals)
    if variant == "exchangeable":
        counts = {
            tuple(int(c) for c in cv): float(w) for cv, w in desc.get("counts", [])
        }
        return ExchangeableCountsIncrement(counts, q, d)
    if variant == "mixture":
        comps = [
            (float(w), _build_increment(sub, q, d))
            for w, sub in desc.get("components", [])
        ]
        return MixtureIncrement(comps)
    raise ValidationError(f"unknown increment variant {variant!r}")


def _one_d_law(name: str, params: dict, q: int) -> IncrementLaw1D:
    if name == "shift":
        return shift_law(q)
    if name == "lazy":
        return lazy_law(q, float(params["gamma"]))
    if name == "uniform":
        return uniform_law(q)
    if name == "mixture":
        return mixture_law(q, float(params["beta"]), float(params["gamma"]))
    if name == "symmetric":
        return symmetric_law(params["v"])
    raise ValidationError(f"unknown 1-D model {name!r}")


def parse_walkspec(doc: dict) -> WalkSpec:
    """Validate and resolve a walk-spec document."""
    _require(isinstance(doc, dict), "walk spec must be a JSON object")
    _require(doc.get("schema") == SCHEMA, f"schema must be {SCHEMA!r}")
    has_model = "model" in doc
    has_incr = "increment" in doc
    _require(
        has_model != has_incr,
        "exactly one of 'model' or 'increment' must be present",
    )
    spec = WalkSpec(raw=doc)

    if has_incr:
        _require("q" in doc and "d" in doc, "'q' and 'd' are required")
        q, d = int(doc["q"]), int(doc["d"])
        _require(q >= 2 and d >= 1, "need q >= 2 and d >= 1")
        spec.q, spec.d = q, d
        spec.increment = _build_increment(doc["increment"], q, d)
        return spec

    model = doc["model"]
    _require(isinstance(model, dict) and "name" in model, "model needs a name")
    name = model["name"]
    params = {k: v for k, v in model.items() if k != "name"}
    spec.model_name, spec.model_params = name, params

    if name in TORUS_MODELS:
        spec.torus = von_mises_law(float(params["k"]))
        return spec

    _require("q" in doc, "'q' is required")
    q = int(doc["q"])
    d = int(doc.get("d", 1))
    _require(q >= 2 and d >= 1, "need q >= 2 and d >= 1")
    spec.q, spec.d = q, d

    if name in ONE_D_MODELS:
        law = _one_d_law(name, params, q)
        spec.law1d = law
        spec.increment = iid_increment(law, d)
        return spec

    if name == "subset-toggle":
        spec.grouped = subset_toggle_chain(q, d, int(params["A"]))
    elif name == "neighbor":
        spec.grouped = neighbor_chain(q, d)
    elif name == "left-shift":
        spec.grouped = left_shift_chain(q, d)
    elif name == "hamming":
        spec.grouped = hamming_chain(q, d, params["qh"])
    else:
        raise ValidationError(f"unknown model {name!r}")
    spec.increment = spec.grouped.source
    return spec


def load_walkspec(path: str) -> WalkSpec:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"walk spec is not valid JSON: {exc}") from exc
    return parse_walkspec(doc)
