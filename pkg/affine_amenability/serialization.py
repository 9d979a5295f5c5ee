"""JSON serialization of reports and certificates.

Rationals are always written as ``"p/q"`` strings, subspaces as lists of element
strings on the canonical basis and words as ``*``-joined generator names.
"""

import json
from dataclasses import asdict, is_dataclass
from enum import Enum
from fractions import Fraction
from typing import Any

from .algebra import (
    AlgebraPresentation,
    CoordinateWindow,
    enumerate_basis,
    format_element,
    format_word,
    parse_element,
    parse_word,
    presentation_hash,
)
from .errors import InputError
from .exactlin import RowSpace
from .folner import FolnerCertificate, SearchStrategy
from .paradox import ParadoxCertificate, ParadoxPart, basis_slice
from .version import VERSION


def format_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


class CustomJSONEncoder(json.JSONEncoder):
    """JSON encoder for exact rationals, enums, sets and plain dataclasses."""

    def default(self, obj: Any) -> Any:
        if isinstance(obj, Fraction):
            return format_fraction(obj)
        if isinstance(obj, Enum):
            return obj.value
        if is_dataclass(obj) and not isinstance(obj, type):
            return asdict(obj)
        if isinstance(obj, (set, frozenset)):
            return sorted(obj)
        return super().default(obj)


def _stringify_keys(obj: Any) -> Any:
    """Recursively convert all dict keys to strings for JSON serialization."""
    if isinstance(obj, dict):
        return {str(k): _stringify_keys(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify_keys(i) for i in obj]
    return obj


def serialize_report(data: Any) -> str:
    """Deterministic JSON: sorted keys, two-space indent."""
    return json.dumps(_stringify_keys(data), indent=2, sort_keys=True, cls=CustomJSONEncoder)


def report_metadata(pres: AlgebraPresentation, degree_bound: int | None) -> dict[str, Any]:
    return {
        "algebra": pres.name,
        "algebra_hash": presentation_hash(pres),
        "degree_bound": degree_bound,
        "tool_version": VERSION,
    }


# ----------------------------------------------------------------------
# Subspaces
# ----------------------------------------------------------------------


def subspace_to_json(space: RowSpace, window: CoordinateWindow) -> list[str]:
    return [format_element(window.element(row), window.presentation) for row in space.rows]


def subspace_from_json(items: list[str], window: CoordinateWindow) -> RowSpace:
    return window.span_elements(parse_element(item, window.presentation) for item in items)


def _window_for(data: dict[str, Any], pres: AlgebraPresentation) -> CoordinateWindow:
    if data.get("algebra_hash") not in (None, presentation_hash(pres)):
        raise InputError("certificate was produced for a different presentation")
    bound = data.get("degree_bound")
    if not isinstance(bound, int) or bound < 0:
        raise InputError("certificate needs an integer 'degree_bound'")
    return enumerate_basis(pres, bound)


# ----------------------------------------------------------------------
# Certificates
# ----------------------------------------------------------------------


def folner_certificate_to_json(c: FolnerCertificate) -> dict[str, Any]:
    pres = c.window.presentation
    return {
        "kind": "folner",
        "basis": "canonical deglex normal words",
        "subspace": subspace_to_json(c.subspace, c.window),
        "dim": c.subspace.dim,
        "test_set": [format_element(r, pres) for r in c.test_set],
        "epsilon": c.epsilon,
        "ratios": list(c.ratios),
        "max_ratio": c.max_ratio,
        "level": c.level,
        "strategy": c.strategy,
        **report_metadata(pres, c.window.degree_bound),
    }


def folner_certificate_from_json(data: dict[str, Any], pres: AlgebraPresentation) -> FolnerCertificate:
    if data.get("kind") != "folner":
        raise InputError("not a Følner certificate")
    window = _window_for(data, pres)
    try:
        return FolnerCertificate(
            subspace=subspace_from_json(data["subspace"], window),
            window=window,
            test_set=tuple(parse_element(r, pres) for r in data["test_set"]),
            epsilon=Fraction(data["epsilon"]),
            ratios=tuple(Fraction(r) for r in data.get("ratios", [])),
            level=data.get("level"),
            strategy=SearchStrategy(data.get("strategy", SearchStrategy.EXHAUSTION.value)),
        )
    except (KeyError, ValueError, TypeError) as e:
        raise InputError(f"malformed Følner certificate: {e}") from e


def paradox_certificate_to_json(c: ParadoxCertificate) -> dict[str, Any]:
    pres = c.window.presentation
    return {
        "kind": "paradox",
        "basis": "canonical deglex normal words",
        "truncated": True,
        "degree": c.degree,
        "basis_size": len(c.basis),
        "parts": [
            {
                "words": [format_word(w, pres) for w in part.words],
                "translators": [format_element(part.left, pres), format_element(part.right, pres)],
            }
            for part in c.parts
        ],
        **report_metadata(pres, c.window.degree_bound),
    }


def paradox_certificate_from_json(data: dict[str, Any], pres: AlgebraPresentation) -> ParadoxCertificate:
    if data.get("kind") != "paradox":
        raise InputError("not a paradox certificate")
    window = _window_for(data, pres)
    try:
        degree = int(data["degree"])
        parts = []
        for raw in data["parts"]:
            left, right = raw["translators"]
            parts.append(
                ParadoxPart(
                    tuple(parse_word(w, pres) for w in raw["words"]),
                    parse_element(left, pres),
                    parse_element(right, pres),
                )
            )
    except (KeyError, ValueError, TypeError) as e:
        raise InputError(f"malformed paradox certificate: {e}") from e
    return ParadoxCertificate(basis_slice(window, degree), tuple(parts), window, degree)
