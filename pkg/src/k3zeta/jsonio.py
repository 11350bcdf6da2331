"""Canonical JSON encoding of the package's objects.

Serialization is deterministic down to the byte: keys sorted, floats
rendered with '%.17g' (which round-trips doubles exactly), no incidental
whitespace. Non-finite floats are rejected, with one deliberate exception:
a complete spectrum has no cutoff, and its encoding simply omits the key.

Wire shapes:

  lattice     {"gram": [[int]]}
  isometry    {"matrix": [[int]]}          (lattice supplied by context)
  sublattice  {"ambient": lattice, "basis": [[int]]}
  frame       {"form": [[num]], "gammas": [[num]] (3 rows)}
  period      {"re": [num], "im": [num]}
  pair        {"plus": period, "minus": period}
  spectrum    {"entries": [[lam, m_plus, m_minus]], "kernel": [k+, k-],
               "tail": {"dim": n, "straight": [num],
                        "twisted": "free" | [num]},
               "cutoff": num (omitted when complete)}
  curve       {"volume": num, "spectrum": scalar spectrum with
               [[lam, m]] entries and integer kernel}
"""

from __future__ import annotations

import json
import math

from . import frames as frames_mod
from . import lattices
from .errors import InputError
from .spectral import (
    CurveComponent,
    EquivariantSpectrum,
    HeatTail,
    ScalarSpectrum,
)


def _emit(x, out: list) -> None:
    if isinstance(x, bool):
        out.append("true" if x else "false")
    elif isinstance(x, int):
        out.append(str(x))
    elif isinstance(x, float):
        if not math.isfinite(x):
            raise InputError("non-finite numbers cannot be serialized")
        out.append("%.17g" % x)
    elif isinstance(x, str):
        out.append(json.dumps(x, ensure_ascii=True))
    elif isinstance(x, (list, tuple)):
        out.append("[")
        for i, item in enumerate(x):
            if i:
                out.append(",")
            _emit(item, out)
        out.append("]")
    elif isinstance(x, dict):
        out.append("{")
        for i, key in enumerate(sorted(x)):
            if not isinstance(key, str):
                raise InputError("object keys must be strings")
            if i:
                out.append(",")
            out.append(json.dumps(key, ensure_ascii=True))
            out.append(":")
            _emit(x[key], out)
        out.append("}")
    else:
        raise InputError("cannot serialize %r" % type(x).__name__)


def canonical_dumps(obj) -> str:
    out: list = []
    _emit(obj, out)
    return "".join(out)


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("invalid JSON: %s" % exc) from None


def load_path(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc)) from None


def _require(obj, key, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError("expected an object with a %r field" % key)
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise InputError("field %r has the wrong type" % key)
    return val


# -- lattices ---------------------------------------------------------------


def encode_lattice(lat: lattices.Lattice) -> dict:
    return {"gram": [list(r) for r in lat.gram]}


def decode_lattice(obj) -> lattices.Lattice:
    return lattices.Lattice(_require(obj, "gram", list))


def encode_isometry(iso: lattices.LatticeIsometry) -> dict:
    return {"matrix": [list(r) for r in iso.matrix]}


def decode_isometry(obj, lattice: lattices.Lattice) -> lattices.LatticeIsometry:
    return lattices.LatticeIsometry(lattice, _require(obj, "matrix", list))


def encode_sublattice(sub: lattices.SublatticeBasis) -> dict:
    return {
        "ambient": encode_lattice(sub.ambient),
        "basis": [list(v) for v in sub.vectors],
    }


def decode_sublattice(obj) -> lattices.SublatticeBasis:
    ambient = decode_lattice(_require(obj, "ambient", dict))
    return lattices.SublatticeBasis(ambient, _require(obj, "basis", list))


# -- frames and periods -----------------------------------------------------


def encode_frame(frame: frames_mod.HKFrame) -> dict:
    return {
        "form": [[float(x) for x in row] for row in frame.form],
        "gammas": [[float(x) for x in row] for row in frame.gammas],
    }


def decode_frame(obj) -> frames_mod.HKFrame:
    return frames_mod.HKFrame(
        _require(obj, "form", list), _require(obj, "gammas", list)
    )


def encode_period_point(p) -> dict:
    import numpy as np

    return {
        "re": [float(x) for x in np.real(p.coords)],
        "im": [float(x) for x in np.imag(p.coords)],
    }


def encode_period_pair(pair) -> dict:
    return {
        "plus": encode_period_point(pair.plus),
        "minus": encode_period_point(pair.minus),
    }


# -- spectra ----------------------------------------------------------------


def _encode_tail(tail: HeatTail) -> dict:
    return {
        "dim": tail.dim,
        "straight": [float(c) for c in tail.straight],
        "twisted": "free" if tail.twisted is None else [float(c) for c in tail.twisted],
    }


def _decode_tail(obj) -> HeatTail:
    dim = _require(obj, "dim", int)
    straight = _require(obj, "straight", list)
    twisted = _require(obj, "twisted")
    if twisted == "free":
        twisted = None
    elif not isinstance(twisted, list):
        raise InputError('tail "twisted" must be "free" or a coefficient list')
    return HeatTail(dim, straight, twisted)


def encode_spectrum(spec: EquivariantSpectrum) -> dict:
    out = {
        "entries": [[lam, mp, mm] for lam, mp, mm in spec.entries],
        "kernel": list(spec.kernel),
        "tail": _encode_tail(spec.tail),
    }
    if math.isfinite(spec.cutoff):
        out["cutoff"] = float(spec.cutoff)
    return out


def decode_spectrum(obj) -> EquivariantSpectrum:
    return EquivariantSpectrum(
        _require(obj, "entries", list),
        _require(obj, "kernel", list),
        _decode_tail(_require(obj, "tail", dict)),
        float(obj.get("cutoff", math.inf)) if isinstance(obj, dict) else math.inf,
    )


def encode_curve(curve: CurveComponent) -> dict:
    spec = curve.spectrum
    out = {
        "entries": [[lam, m] for lam, m in spec.entries],
        "kernel": spec.kernel,
        "tail": {
            "dim": spec.tail.dim,
            "straight": [float(c) for c in spec.tail.straight],
        },
    }
    if math.isfinite(spec.cutoff):
        out["cutoff"] = float(spec.cutoff)
    return {"volume": curve.volume, "spectrum": out}


def decode_curve(obj) -> CurveComponent:
    spec_obj = _require(obj, "spectrum", dict)
    tail_obj = _require(spec_obj, "tail", dict)
    tail = HeatTail(
        _require(tail_obj, "dim", int), _require(tail_obj, "straight", list), None
    )
    scalar = ScalarSpectrum(
        _require(spec_obj, "entries", list),
        _require(spec_obj, "kernel", int),
        tail,
        float(spec_obj.get("cutoff", math.inf)),
    )
    return CurveComponent(_require(obj, "volume", (int, float)), scalar)
