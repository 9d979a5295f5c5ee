"""Loading and parsing of command inputs: presentations, exhaustions, modules, values."""

import json
from collections.abc import Mapping, Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any

from .algebra import AlgebraPresentation, Element, parse_element, parse_word, presentation_from_dict
from .errors import ExhaustionError, InputError
from .folner import ExhaustionSpec, ExponentBound, MonomialPattern, PatternFactor
from .measure import RegularPart, RegularSet
from .modrank import ModulePresentation

BUNDLED_DIR = Path(__file__).parent / "bundled"


def bundled_names() -> list[str]:
    return sorted(p.stem for p in BUNDLED_DIR.glob("*.json"))


def resolve_input(ref: str | Path) -> Path:
    """A filesystem path, or the name of a bundled example (``free2``, ``ex33_wn``, ...)."""
    path = Path(ref)
    if path.is_file():
        return path
    name = path.name if path.suffix == ".json" else f"{path.name}.json"
    bundled = BUNDLED_DIR / name
    if str(ref) and path.parent == Path(".") and bundled.is_file():
        return bundled
    raise FileNotFoundError(f"No such input file or bundled example: {ref}")


def load_json(ref: str | Path) -> tuple[Any, str]:
    """Parsed JSON document and its stem (used as the default name)."""
    path = resolve_input(ref)
    with path.open(encoding="utf-8") as f:
        return json.load(f), path.stem


def load_presentation(ref: str | Path) -> AlgebraPresentation:
    data, stem = load_json(ref)
    return presentation_from_dict(data, name=stem)


# ----------------------------------------------------------------------
# Values
# ----------------------------------------------------------------------


def parse_rational(text: str | int | Fraction) -> Fraction:
    """``"1/10"``, ``"0.1"`` or an integer."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"Not a rational number: {text!r}") from e


def parse_element_list(text: str | Sequence[str], pres: AlgebraPresentation) -> list[Element]:
    """Comma-separated elements, e.g. ``"x,y"`` or ``"x, x*x + 1"``."""
    items = text.split(",") if isinstance(text, str) else list(text)
    items = [item.strip() for item in items if item.strip()]
    if not items:
        raise InputError("Expected at least one element")
    return [parse_element(item, pres) for item in items]


# ----------------------------------------------------------------------
# Exhaustions
# ----------------------------------------------------------------------


def _pattern_factor(raw: Any, pres: AlgebraPresentation) -> PatternFactor:
    if not isinstance(raw, list) or len(raw) not in (2, 3) or not isinstance(raw[0], str):
        raise ExhaustionError(f"Pattern factor must be [generator, bound] or [generator, low, high]: {raw!r}")
    pres.generator_index(raw[0])
    if len(raw) == 2:
        return PatternFactor(raw[0], ExponentBound.parse(str(raw[1])))
    return PatternFactor(raw[0], ExponentBound.parse(str(raw[2])), ExponentBound.parse(str(raw[1])))


def exhaustion_from_dict(data: Mapping[str, Any], pres: AlgebraPresentation, label: str = "") -> ExhaustionSpec:
    """``{"patterns": [[["y", "n"]], [["y", "n^2"], ["x", "1"]]]}`` or ``{"ball": "x,y"}``."""
    if not isinstance(data, Mapping):
        raise ExhaustionError("Exhaustion must be a JSON object")
    if "ball" in data:
        return ExhaustionSpec.balls(parse_element_list(data["ball"], pres), label=label or "ball")
    patterns = data.get("patterns")
    if not isinstance(patterns, list) or not patterns:
        raise ExhaustionError("Exhaustion needs a nonempty 'patterns' list or a 'ball' generating set")
    parsed = []
    for raw in patterns:
        if not isinstance(raw, list):
            raise ExhaustionError(f"Pattern must be a list of factors: {raw!r}")
        parsed.append(MonomialPattern(tuple(_pattern_factor(f, pres) for f in raw)))
    return ExhaustionSpec.from_patterns(parsed, label=label or "patterns")


def load_exhaustion(ref: str | Path, pres: AlgebraPresentation) -> ExhaustionSpec:
    data, stem = load_json(ref)
    return exhaustion_from_dict(data, pres, label=stem)


# ----------------------------------------------------------------------
# Modules and regular sets
# ----------------------------------------------------------------------


def _module_vectors(raw: Any, pres: AlgebraPresentation, key: str) -> tuple[tuple[Element, ...], ...]:
    if not isinstance(raw, list) or not all(isinstance(v, list) for v in raw):
        raise InputError(f"'{key}' must be a list of element-string lists")
    return tuple(tuple(parse_element(str(e), pres) for e in vec) for vec in raw)


def module_from_dict(data: Mapping[str, Any], pres: AlgebraPresentation, name: str = "") -> ModulePresentation:
    """``{"ambient_rank": 1, "generators": [["x"], ["y"]], "sub_generators": [...]}``."""
    if not isinstance(data, Mapping):
        raise InputError("Module must be a JSON object")
    unknown = set(data) - {"ambient_rank", "generators", "sub_generators", "name"}
    if unknown:
        raise InputError(f"Unknown module keys: {', '.join(sorted(unknown))}")
    ambient = data.get("ambient_rank")
    if not isinstance(ambient, int):
        raise InputError("'ambient_rank' must be an integer")
    return ModulePresentation(
        ambient,
        _module_vectors(data.get("generators", []), pres, "generators"),
        _module_vectors(data.get("sub_generators", []), pres, "sub_generators"),
        str(data.get("name", name)),
    )


def load_module(ref: str | Path, pres: AlgebraPresentation) -> ModulePresentation:
    data, stem = load_json(ref)
    return module_from_dict(data, pres, name=stem)


def regular_set_from_dict(data: Mapping[str, Any], pres: AlgebraPresentation) -> RegularSet:
    """``{"parts": [{"translator": "x", "words": ["1", "x*y"]}, {"translator": "1"}]}``.

    A part without ``words`` ranges over the whole basis.
    """
    parts = data.get("parts") if isinstance(data, Mapping) else None
    if not isinstance(parts, list):
        raise InputError("Regular set needs a 'parts' list")
    out = []
    for raw in parts:
        if not isinstance(raw, Mapping) or "translator" not in raw:
            raise InputError(f"Regular set part needs a 'translator': {raw!r}")
        words = raw.get("words")
        out.append(
            RegularPart(
                parse_element(str(raw["translator"]), pres),
                None if words is None else tuple(parse_word(str(w), pres) for w in words),
            )
        )
    return RegularSet(tuple(out))
