"""JSON form for structures, step functions, and spectra.

The on-disk shape is ``{"structure": {"m": [...]}, "kind": "values" |
"coeffs", "data": [[re, im], ...]}``; ``data`` holds one pair per cell or
coefficient in canonical order.  Floats round-trip exactly through
``json`` (repr-based), so save/load is lossless.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import numpy as np

from .structure import VilenkinStructure
from .transform import Spectrum, StepFunction

FunctionLike = Union[StepFunction, Spectrum]


def structure_to_dict(vs: VilenkinStructure) -> dict:
    return {"m": list(vs.m)}


def structure_from_dict(d: dict) -> VilenkinStructure:
    return VilenkinStructure.from_m(d["m"])


def function_to_dict(obj: FunctionLike) -> dict:
    if isinstance(obj, StepFunction):
        kind, data = "values", obj.values
    elif isinstance(obj, Spectrum):
        kind, data = "coeffs", obj.coeffs
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return {
        "structure": structure_to_dict(obj.vs),
        "kind": kind,
        "data": [[float(z.real), float(z.imag)] for z in data],
    }


def function_from_dict(d: dict) -> FunctionLike:
    vs = structure_from_dict(d["structure"])
    pairs = np.asarray(d["data"], dtype=np.float64)
    if pairs.shape != (vs.size, 2):
        raise ValueError(f"expected {vs.size} [re, im] pairs, got {pairs.shape}")
    data = pairs[:, 0] + 1j * pairs[:, 1]
    if d["kind"] == "values":
        return StepFunction(vs, data)
    if d["kind"] == "coeffs":
        return Spectrum(vs, data)
    raise ValueError(f"unknown kind {d['kind']!r}")


def save_function(obj: FunctionLike, path: str | Path) -> None:
    Path(path).write_text(json.dumps(function_to_dict(obj)), encoding="utf-8")


def load_function(path: str | Path) -> FunctionLike:
    return function_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
