"""Command dispatch: one subcommand per operation, reports as JSON or CSV.

:func:`execute` raises on bad input; :func:`run` maps errors to exit statuses
(0 computed result, 2 input error, 3 truncation overflow).
"""

import csv
import io
import json
import logging
import random
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

from .algebra import (
    AlgebraPresentation,
    CoordinateWindow,
    Element,
    enumerate_basis,
    find_zero_divisors,
    format_element,
    format_word,
    parse_element,
)
from .errors import InputError, TruncationOverflow
from .folner import (
    ExhaustionSpec,
    SearchStrategy,
    doubling_probe,
    folner_search,
    goldie_witness,
    verify_certificate,
)
from .growth import classify, growth_sequence, iter_balls
from .measure import DensityReport, IntersectionMode, RegularSet, fk_bk_densities, invariance_defect
from .modrank import ModulePresentation, RankReport, exact_sequence_check, rank, relative_rank
from .paradox import DeficiencyWitness, build_paradox, mass_doubling_check, verify_paradox
from .params import (
    load_exhaustion,
    load_json,
    load_module,
    load_presentation,
    parse_element_list,
    parse_rational,
    regular_set_from_dict,
)
from .serialization import (
    folner_certificate_from_json,
    folner_certificate_to_json,
    format_fraction,
    paradox_certificate_from_json,
    paradox_certificate_to_json,
    report_metadata,
    serialize_report,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_TRUNCATION = 3

TRUNCATED_LABEL = "truncated certificate on the canonical deglex normal-word basis"

ACTIONS: dict[str, tuple[str, ...]] = {
    "nf": (),
    "basis": (),
    "growth": (),
    "folner": ("search", "check"),
    "doubling": (),
    "paradox": ("find", "check"),
    "measure": ("densities", "defect"),
    "rank": (),
    "relrank": (),
    "exactseq": (),
    "goldie": (),
    "zerodiv": (),
}


class OutputFormat(str, Enum):
    TABLE = "table"
    JSON = "json"


# Commands whose reports are CSV tables unless a format is given
TABLE_COMMANDS = frozenset({"growth", "measure"})


@dataclass(frozen=True)
class RunConfig:
    command: str
    algebra: str | None
    action: str | None = None
    options: Mapping[str, Any] = field(default_factory=dict)
    output_format: OutputFormat | None = None
    degree_bound: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.command not in ACTIONS:
            raise InputError(f"Unknown command {self.command!r}. Supported: {', '.join(ACTIONS)}")
        actions = ACTIONS[self.command]
        if actions and self.action not in actions:
            raise InputError(f"{self.command} needs one of: {', '.join(actions)}")
        if not actions and self.action is not None:
            raise InputError(f"{self.command} takes no action")
        if not self.algebra:
            raise InputError("--algebra is required (or set AFFINE_AMENABILITY_ALGEBRA)")
        if self.degree_bound is not None and self.degree_bound < 1:
            raise InputError(f"degree bound must be at least 1, got {self.degree_bound}")
        if self.output_format is None:
            default = OutputFormat.TABLE if self.command in TABLE_COMMANDS else OutputFormat.JSON
            object.__setattr__(self, "output_format", default)
        try:
            object.__setattr__(self, "output_format", OutputFormat(self.output_format))
        except ValueError:
            raise InputError(f"Unsupported format {self.output_format!r}: use table or json") from None

    def option(self, name: str, default: Any = None) -> Any:
        value = self.options.get(name)
        return default if value is None else value

    def required(self, name: str) -> Any:
        value = self.options.get(name)
        if value is None:
            raise InputError(f"--{name.replace('_', '-')} is required for {self.command}")
        return value

    def int_option(self, name: str, default: int) -> int:
        value = self.option(name, default)
        try:
            result = int(value)
        except (TypeError, ValueError):
            raise InputError(f"--{name.replace('_', '-')} must be an integer, got {value!r}") from None
        if result < 0:
            raise InputError(f"--{name.replace('_', '-')} must be nonnegative")
        return result


@dataclass
class Outcome:
    payload: dict[str, Any]
    header: tuple[str, ...] = ()
    rows: list[Sequence[Any]] = field(default_factory=list)


# ----------------------------------------------------------------------
# Shared helpers
# ----------------------------------------------------------------------


def _window(pres: AlgebraPresentation, config: RunConfig, derived: int) -> CoordinateWindow:
    bound = config.degree_bound if config.degree_bound is not None else max(derived, 1)
    logger.info("coordinate window of degree %d (%s)", bound, "explicit" if config.degree_bound else "derived")
    return enumerate_basis(pres, bound)


def _generators(pres: AlgebraPresentation) -> list[Element]:
    return [Element.from_word((i,)) for i in range(len(pres.generators))]


def _elements(config: RunConfig, name: str, pres: AlgebraPresentation) -> list[Element]:
    text = config.option(name)
    return parse_element_list(text, pres) if text else _generators(pres)


def _step(elements: Sequence[Element]) -> int:
    return max((e.degree for e in elements), default=0)


def _exhaustion(config: RunConfig, pres: AlgebraPresentation, S: Sequence[Element]) -> ExhaustionSpec:
    ref = config.option("exhaustion")
    return load_exhaustion(ref, pres) if ref else ExhaustionSpec.balls(S)


def _fmt(elements: Sequence[Element], pres: AlgebraPresentation) -> list[str]:
    return [format_element(e, pres) for e in elements]


def _density_payload(report: DensityReport) -> dict[str, Any]:
    s = report.summary
    return {
        "label": report.label,
        "entries": [{"k": k, "value": v} for k, v in report.entries],
        "liminf": s.liminf,
        "limsup": s.limsup,
        "converged": s.converged,
        "tail_start": s.tail_start,
        "tolerance": report.tolerance,
        "intersection_mode": report.mode,
    }


def _rank_payload(report: RankReport) -> dict[str, Any]:
    s = report.summary
    return {
        "label": report.label,
        "exhaustion": report.exhaustion,
        "generators": report.generators,
        "entries": [{"n": n, "value": v} for n, v in report.entries],
        "liminf": s.liminf,
        "limsup": s.limsup,
        "converged": s.converged,
        "note": report.note,
    }


# ----------------------------------------------------------------------
# Handlers
# ----------------------------------------------------------------------


def _nf(pres: AlgebraPresentation, config: RunConfig) -> Outcome:
    text = config.required("element")
    nf = parse_element(text, pres)
    return Outcome(
        {"input": text, "normal_form": format_element(nf, pres), "degree": nf.degree, **report_metadata(pres, None)},
        ("input", "normal_form"),
        [(text, format_element(nf, pres))],
    )


def _basis(pres: AlgebraPresentation, config: RunConfig) -> Outcome:
    degree = config.int_option("degree", 3)
    window = enumerate_basis(pres, degree)
    words = [format_word(w, pres) for w in window.words]
    return Outcome(
        {"degree": degree, "size": window.size, "words": words, **report_metadata(pres, degree)},
        ("index", "word"),
        list(enumerate(words)),
    )


def _growth(pres: AlgebraPresentation, config: RunConfig) -> Outcome:
    S = _elements(config, "generators", pres)
    m_max = config.int_option("m_max", 5)
    window = _window(pres, config, m_max * _step(S))
    g = growth_sequence(pres, S, m_max, window)
    epsilon = parse_rational(config.option("epsilon", "1/10"))
    return Outcome(
        {
            "generators": _fmt(S, pres),
            "m_max": m_max,
            "d": list(g.d),
            "classification": classify(g, epsilon),
            **report_metadata(pres, window.degree_bound),
        },
        ("m", "d_m"),
        list(enumerate(g.d)),
    )


def _folner_search(pres: AlgebraPresentation, config: RunConfig) -> Outcome:
    S = _elements(config, "test_set", pres)
    epsilon = parse_rational(config.option("epsilon", "1/10"))
    n_max = config.int_option("n_max", 20)
    exhaustion = _exhaustion(config, pres, S)
    try:
        strategy = SearchStrategy(config.option("strategy", SearchStrategy.EXHAUSTION.value))
    except ValueError:
        raise InputError(f"Unknown strategy {config.option('strategy')!r}") from None
    window = _window(pres, config, exhaustion.degree_at(n_max) + _step(S))
    cert = folner_search(pres, S, epsilon, exhaustion, n_max, window, strategy)
    if cert is None:
        return Outcome(
            {"verdict": "inconclusive", "n_max": n_max, "epsilon": epsilon, **report_metadata(pres, window.degree_bound)}
        )
    payload = folner_certificate_to_json(cert)
    payload.update(verdict="certificate", verified=verify_certificate(cert), label=TRUNCATED_LABEL)
    return Outcome(
        payload,
        ("test_element", "ratio"),
        [(t, format_fraction(r)) for t, r in zip(payload["test_set"], cert.ratios)],
    )


def _folner_check(pres: AlgebraPresentation, config: RunConfig) -> Outcome:
    data, _ = load_json(config.required("certificate"))
    cert = folner_certificate_from_json(data, pres)
    valid = verify_certificate(cert)
    return Outcome({"valid": valid, "dim": cert.subspace.dim, **report_metadata(pres, cert.window.degree_bound)})


def _doubling(pres: AlgebraPresentation, config: RunConfig) -> Outcome:
    Z = _elements(config, "z", pres)
    count = config.int_option("random_sets", 0)
    if count:
        set_degree = config.int_option("set_degree", 6)
        set_size = config.int_option("set_size", 8)
        window = _window(pres, config, set_degree + _step(Z))
        rng = random.Random(config.seed)
        columns = list(window.columns_up_to(set_degree))
        family = []
        for _ in range(count):
            picked = sorted(rng.sample(columns, min(set_size, len(columns))))
            family.append(window.span_words(window.words[c] for c in picked))
        source = f"{count} random word sets (degree <= {set_degree}, seed {config.seed})"
    else:
        m_max = config.int_option("m_max", 4)
        gens = _generators(pres)
        window = _window(pres, config, m_max * _step(gens) + _step(Z))
        family = list(iter_balls(pres, gens, m_max, window))[1:]
        source = f"balls of radius 1..{m_max}"
    report = doubling_probe(pres, Z, family, window)
    samples = [
        {"dim": s.dim, "sum_ratio": s.sum_ratio, "product_ratio": s.product_ratio} for s in report.samples
    ]
    return Outcome(
        {
            "z": _fmt(Z, pres),
            "family": source,
            "samples": samples,
            "min_sum_ratio": report.min_sum_ratio,
            "min_product_ratio": report.min_product_ratio,
            **report_metadata(pres, window.degree_bound),
        },
        ("index", "dim", "sum_ratio", "product_ratio"),
        [
            (i, s.dim, format_fraction(s.sum_ratio), format_fraction(s.product_ratio))
            for i, s in enumerate(report.samples)
        ],
    )


def _paradox_find(pres: AlgebraPresentation, config: RunConfig) -> Outcome:
    S = parse_element_list(config.required("translators"), pres)
    degree = config.int_option("degree", 3)
    window = _window(pres, config, degree + _step(S))
    payload: dict[str, Any] = {}
    zero = find_zero_divisors(pres, min(degree, 3))
    if zero is not None:
        a, b = _fmt(zero, pres)
        logger.warning("presentation has zero divisors (%s)·(%s) = 0; paradoxicality assumes a domain", a, b)
        payload["warning"] = f"zero divisors found: ({a})*({b}) = 0"
    result = build_paradox(pres, S, degree, window)
    if isinstance(result, DeficiencyWitness):
        words = [format_word(w, pres) for w in result.words]
        payload.update(
            verdict="deficiency",
            words=words,
            spanned_dim=result.spanned_dim,
            required_dim=result.required_dim,
            **report_metadata(pres, window.degree_bound),
        )
        return Outcome(payload, ("word",), [(w,) for w in words])
    payload.update(paradox_certificate_to_json(result))
    payload.update(verdict="certificate", verified=verify_paradox(result), label=TRUNCATED_LABEL)
    return Outcome(
        payload,
        ("part", "left", "right", "size"),
        [(i, p["translators"][0], p["translators"][1], len(p["words"])) for i, p in enumerate(payload["parts"])],
    )


def _paradox_check(pres: AlgebraPresentation, config: RunConfig) -> Outcome:
    data, _ = load_json(config.required("certificate"))
    cert = paradox_certificate_from_json(data, pres)
    payload: dict[str, Any] = {"valid": verify_paradox(cert), **report_metadata(pres, cert.window.degree_bound)}
    mass_degree = config.option("mass_degree")
    if mass_degree is not None:
        window = cert.window
        V = window.span_words(window.words[c] for c in window.columns_up_to(int(mass_degree)))
        payload["mass_density"] = mass_doubling_check(cert, V)
    return Outcome(payload)


def _measure_densities(pres: AlgebraPresentation, config: RunConfig) -> Outcome:
    s = parse_element(config.required("element"), pres)
    k_max = config.int_option("k_max", 10)
    exhaustion = _exhaustion(config, pres, _generators(pres))
    window = _window(pres, config, exhaustion.degree_at(k_max) + s.degree)
    result = fk_bk_densities(pres, s, exhaustion, range(1, k_max + 1), window)
    f, b = result.f_density, result.b_density
    return Outcome(
        {
            "element": format_element(s, pres),
            "exhaustion": exhaustion.label,
            "f_density": _density_payload(f),
            "b_density": _density_payload(b),
            "b_scope": f"basis words of degree <= {result.window_bound}",
            **report_metadata(pres, window.degree_bound),
        },
        ("k", "F", "B"),
        [(k, format_fraction(fv), format_fraction(bv)) for (k, fv), (_, bv) in zip(f.entries, b.entries)],
    )


def _measure_defect(pres: AlgebraPresentation, config: RunConfig) -> Outcome:
    r = parse_element(config.required("element"), pres)
    k_max = config.int_option("k_max", 10)
    exhaustion = _exhaustion(config, pres, _generators(pres))
    regular = config.option("regular")
    L = regular_set_from_dict(load_json(regular)[0], pres) if regular else RegularSet.full_basis(pres)
    try:
        mode = IntersectionMode(config.option("mode", IntersectionMode.COUNT.value))
    except ValueError:
        raise InputError(f"Unknown intersection mode {config.option('mode')!r}") from None
    extra = max((p.translator.degree for p in L.parts), default=0)
    window = _window(pres, config, exhaustion.degree_at(k_max) + r.degree + extra)
    report = invariance_defect(L, r, exhaustion, range(1, k_max + 1), window, mode)
    return Outcome(
        {
            "element": format_element(r, pres),
            "exhaustion": exhaustion.label,
            "defect": _density_payload(report),
            **report_metadata(pres, window.degree_bound),
        },
        ("k", "defect"),
        [(k, format_fraction(v)) for k, v in report.entries],
    )


def _module_window(
    pres: AlgebraPresentation, config: RunConfig, modules: Sequence[ModulePresentation]
) -> tuple[ExhaustionSpec, int, CoordinateWindow]:
    n_max = config.int_option("n_max", 10)
    exhaustion = _exhaustion(config, pres, _generators(pres))
    degree = max(m.degree for m in modules)
    return exhaustion, n_max, _window(pres, config, exhaustion.degree_at(n_max) + degree)


def _rank(pres: AlgebraPresentation, config: RunConfig) -> Outcome:
    M = load_module(config.required("module"), pres)
    exhaustion, n_max, window = _module_window(pres, config, [M])
    report = rank(pres, M, exhaustion, range(1, n_max + 1), window)
    return Outcome(
        {"rank": _rank_payload(report), **report_metadata(pres, window.degree_bound)},
        ("n", "entry"),
        [(n, format_fraction(v)) for n, v in report.entries],
    )


def _relrank(pres: AlgebraPresentation, config: RunConfig) -> Outcome:
    N = load_module(config.required("module"), pres)
    M = load_module(config.required("submodule"), pres)
    exhaustion, n_max, window = _module_window(pres, config, [N, M])
    report = relative_rank(pres, N, M, exhaustion, range(1, n_max + 1), window)
    return Outcome(
        {"relative_rank": _rank_payload(report), **report_metadata(pres, window.degree_bound)},
        ("n", "entry"),
        [(n, format_fraction(v)) for n, v in report.entries],
    )


def _exactseq(pres: AlgebraPresentation, config: RunConfig) -> Outcome:
    N = load_module(config.required("module"), pres)
    M = load_module(config.required("submodule"), pres)
    exhaustion, n_max, window = _module_window(pres, config, [N, M])
    report = exact_sequence_check(pres, N, M, exhaustion, range(1, n_max + 1), window)
    return Outcome(
        {
            "levels": [
                {"n": lv.n, "total": lv.total, "quotient": lv.quotient, "relative": lv.relative, "residual": lv.residual}
                for lv in report.levels
            ],
            "max_residual": max((r for _, r in report.residuals), default=0),
            "rank": _rank_payload(report.rank_n),
            "quotient_rank": _rank_payload(report.rank_quotient),
            "relative_rank": _rank_payload(report.rank_relative),
            **report_metadata(pres, window.degree_bound),
        },
        ("n", "total", "quotient", "relative", "residual"),
        [(lv.n, lv.total, lv.quotient, lv.relative, lv.residual) for lv in report.levels],
    )


def _goldie(pres: AlgebraPresentation, config: RunConfig) -> Outcome:
    a = parse_element(config.required("a"), pres)
    b = parse_element(config.required("b"), pres)
    n_max = config.int_option("n_max", 10)
    exhaustion = _exhaustion(config, pres, _generators(pres))
    window = _window(pres, config, exhaustion.degree_at(n_max) + max(a.degree, b.degree))
    witness = goldie_witness(pres, a, b, exhaustion, window, n_max)
    payload: dict[str, Any] = {"a": format_element(a, pres), "b": format_element(b, pres), "found": witness is not None}
    if witness is not None:
        payload.update(n=witness.n, intersection_dim=witness.intersection_dim, level_dim=witness.level_dim)
    payload.update(report_metadata(pres, window.degree_bound))
    return Outcome(payload)


def _zerodiv(pres: AlgebraPresentation, config: RunConfig) -> Outcome:
    degree = config.int_option("degree", 3)
    pair = find_zero_divisors(pres, degree)
    payload: dict[str, Any] = {"found": pair is not None, "searched_degree": degree}
    if pair is not None:
        payload["a"], payload["b"] = _fmt(pair, pres)
    payload.update(report_metadata(pres, degree))
    return Outcome(payload)


_HANDLERS: dict[tuple[str, str | None], Callable[[AlgebraPresentation, RunConfig], Outcome]] = {
    ("nf", None): _nf,
    ("basis", None): _basis,
    ("growth", None): _growth,
    ("folner", "search"): _folner_search,
    ("folner", "check"): _folner_check,
    ("doubling", None): _doubling,
    ("paradox", "find"): _paradox_find,
    ("paradox", "check"): _paradox_check,
    ("measure", "densities"): _measure_densities,
    ("measure", "defect"): _measure_defect,
    ("rank", None): _rank,
    ("relrank", None): _relrank,
    ("exactseq", None): _exactseq,
    ("goldie", None): _goldie,
    ("zerodiv", None): _zerodiv,
}


# ----------------------------------------------------------------------
# Entry points
# ----------------------------------------------------------------------


def execute(config: RunConfig) -> Outcome:
    assert config.algebra is not None
    pres = load_presentation(config.algebra)
    outcome = _HANDLERS[(config.command, config.action)](pres, config)
    outcome.payload.setdefault("command", " ".join(filter(None, [config.command, config.action])))
    return outcome


def render(outcome: Outcome, output_format: OutputFormat) -> str:
    if output_format is OutputFormat.JSON:
        return serialize_report(outcome.payload)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if outcome.header:
        writer.writerow(outcome.header)
        writer.writerows(outcome.rows)
    else:
        writer.writerow(("key", "value"))
        for key in sorted(outcome.payload):
            value = outcome.payload[key]
            if isinstance(value, Fraction):
                value = format_fraction(value)
            elif isinstance(value, Enum):
                value = value.value
            if not isinstance(value, (list, dict)):
                writer.writerow((key, value))
    return buffer.getvalue().rstrip("\n")


def run(config: RunConfig) -> tuple[int, str]:
    """Exit status and output text (the error message on failure)."""
    try:
        return EXIT_OK, render(execute(config), config.output_format or OutputFormat.JSON)
    except TruncationOverflow as e:
        logger.error("truncation overflow: %s", e)
        return EXIT_TRUNCATION, f"Error: {e}"
    except (InputError, OSError, json.JSONDecodeError) as e:
        return EXIT_INPUT, f"Error: {e}"
