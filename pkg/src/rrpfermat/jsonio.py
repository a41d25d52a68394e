"""Tagged JSON codec for the package's frozen dataclasses.

Dataclasses encode as objects with a ``$type`` key, Fractions as
``{"$q": "p/q"}``, infinite valuations as ``{"$inf": 1}`` and tuples as
lists. ``decode(encode(x)) == x`` for every registered type.
"""

from __future__ import annotations

import dataclasses
import json
import math
from fractions import Fraction
from typing import Any

SCHEMA_VERSION = 1

_REGISTRY: dict[str, type] = {}


def register(*classes: type) -> None:
    for cls in classes:
        _REGISTRY[cls.__name__] = cls


def _register_defaults() -> None:
    from . import criteria, frey, numfield, search, sunit

    register(
        numfield.NumberFieldDesc, numfield.FieldElement, numfield.PrimeData, numfield.ResidueRing,
        frey.FreyCurveRRP, frey.FreyCurve55P, frey.ReductionVerdict, frey.JValuationCheck,
        frey.CoprimalityReport, frey.PairCheck, frey.LegendreCheck, frey.MuCase,
        frey.WeierstrassInvariants,
        sunit.SUnitConfig, sunit.SUnitSolution, sunit.SquareSumSolution, sunit.DescentGrowth,
        criteria.CriteriaReport, criteria.ConditionResult, criteria.NormFilterResult,
        search.SearchBox, search.SolutionRecord, search.VacuityReport,
    )


def encode(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        if math.isinf(obj):
            return {"$inf": 1 if obj > 0 else -1}
        return obj
    if isinstance(obj, Fraction):
        return {"$q": f"{obj.numerator}/{obj.denominator}"}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {"$type": type(obj).__name__}
        for f in dataclasses.fields(obj):
            out[f.name] = encode(getattr(obj, f.name))
        return out
    if isinstance(obj, (list, tuple)):
        return [encode(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    raise TypeError(f"cannot encode {type(obj).__name__}")


def decode(data: Any) -> Any:
    if not _REGISTRY:
        _register_defaults()
    if isinstance(data, list):
        return tuple(decode(x) for x in data)
    if isinstance(data, dict):
        if "$q" in data:
            return Fraction(data["$q"])
        if "$inf" in data:
            return math.inf if data["$inf"] > 0 else -math.inf
        if "$type" in data:
            cls = _REGISTRY[data["$type"]]
            kwargs = {k: decode(v) for k, v in data.items() if k != "$type"}
            obj = object.__new__(cls)
            for k, v in kwargs.items():
                object.__setattr__(obj, k, v)
            return obj
        return {k: decode(v) for k, v in data.items()}
    return data


def dumps(obj: Any, **kw) -> str:
    return json.dumps(encode(obj), sort_keys=True, **kw)


def loads(text: str) -> Any:
    return decode(json.loads(text))


def envelope(kind: str, payload: Any) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "result": encode(payload)}
