"""Shared domain-description file format.

A JSON document with a ``type`` discriminator; rationals are "p/q" strings
and multiplicities decimal strings (they exceed 64 bits for quasi-flat
instances).
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .geometry import Ellipsoid, MomentProfile
from .quasiflat import ParameterVector
from .scalars import format_rational, parse_rational
from .weights import WeightMultiset


def to_document(obj) -> dict:
    if isinstance(obj, Ellipsoid):
        if obj.a == obj.b:
            return {"type": "ball", "a": format_rational(obj.a)}
        return obj.to_dict()
    if isinstance(obj, MomentProfile):
        return obj.to_dict()
    if isinstance(obj, WeightMultiset):
        return obj.to_dict()
    if isinstance(obj, ParameterVector):
        return {"type": "quasiflat", "B": [format_rational(b) for b in obj.B]}
    raise TypeError(f"cannot serialize {type(obj)!r}")


def from_document(doc: dict):
    kind = doc.get("type")
    if kind == "ball":
        return Ellipsoid.ball(parse_rational(doc["a"]))
    if kind == "ellipsoid":
        return Ellipsoid(parse_rational(doc["a"]), parse_rational(doc["b"]))
    if kind == "profile":
        return MomentProfile.from_dict(doc)
    if kind == "weights":
        return WeightMultiset.from_dict(doc)
    if kind == "quasiflat":
        return ParameterVector([parse_rational(b) for b in doc["B"]])
    raise ValueError(f"unknown domain type {kind!r}")


def save_domain(obj, path) -> None:
    Path(path).write_text(
        json.dumps(to_document(obj), indent=2, sort_keys=True) + "\n"
    )


def load_domain(path):
    return from_document(json.loads(Path(path).read_text()))
