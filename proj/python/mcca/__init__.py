"""Exact arithmetic for 1-connected minimal Sullivan algebras over Q.

Rationals cross the boundary as strings; the helpers here turn them into
``fractions.Fraction``.
"""

from fractions import Fraction

from ._core import (
    Error,
    Model,
    NotDiagonal,
    ParseError,
    builtin_labels,
    class_of,
    cohomology,
    iso_exists,
    load,
    parse,
    release_cache,
    run,
    validate,
    wes_exact,
)
from ._core import coherent as _coherent
from ._core import solve as _solve

__all__ = [
    "Error",
    "Model",
    "NotDiagonal",
    "ParseError",
    "builtin_labels",
    "class_of",
    "cohomology",
    "coherent",
    "iso_exists",
    "load",
    "parse",
    "release_cache",
    "run",
    "solve",
    "validate",
    "wes_exact",
]


def _fractions(rows):
    return [tuple(Fraction(x) for x in row) for row in rows]


def solve(model):
    """Solve the diagonal constraint system of ``model``."""
    out = _solve(model)
    for key in ("morphisms", "automorphisms"):
        if key in out:
            out[key] = _fractions(out[key])
    return out


def coherent(model, diagonal):
    """Lift the diagonal map ``{degree: value}``; values may be int, str or Fraction."""
    out = _coherent(model, {int(d): str(Fraction(v)) for d, v in diagonal.items()})
    if "class" in out:
        out["class"] = [Fraction(x) for x in out["class"]]
    return out
