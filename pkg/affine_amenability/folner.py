"""Følner ratios, certificates and exhaustion probes.

An exhaustion is a family n -> W_n of finite-dimensional subspaces, given either as
balls of a test set or as monomial patterns with polynomial exponent bounds. All ratios
are exact :class:`fractions.Fraction` values; a failed search is inconclusive, never a
proof of non-amenability.
"""

import logging
import re
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product

from sympy import Poly, Symbol
from sympy.parsing.sympy_parser import parse_expr

from .algebra import (
    AlgebraPresentation,
    CoordinateWindow,
    Element,
    Word,
    normal_form,
    right_multiply_subspace,
)
from .errors import ExhaustionError, InputError, TruncationOverflow
from .exactlin import Echelon, RowSpace, intersection_dim, is_subspace, sum_spaces
from .growth import iter_balls

logger = logging.getLogger(__name__)

_N = Symbol("n")
_BOUND_RE = re.compile(r"^[0-9n^*+\s]+$")


# ----------------------------------------------------------------------
# Exhaustions
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentBound:
    """A polynomial in n with nonnegative integer coefficients, e.g. ``n^2 + 1``."""

    text: str
    coefficients: tuple[int, ...]  # constant term first

    @classmethod
    def parse(cls, text: str) -> "ExponentBound":
        text = str(text)
        if not text.strip() or not _BOUND_RE.match(text):
            raise ExhaustionError(f"Exponent bound must use digits, n, ^, *, + only: {text!r}")
        try:
            expr = parse_expr(text.replace("^", "**"), local_dict={"n": _N}, evaluate=True)
            poly = Poly(expr, _N)
        except Exception as e:
            raise ExhaustionError(f"Cannot parse exponent bound {text!r}: {e}") from e
        coeffs = tuple(int(c) for c in reversed(poly.all_coeffs()))
        return cls(text.strip(), coeffs)

    @property
    def mentions_n(self) -> bool:
        return any(self.coefficients[1:])

    def __call__(self, n: int) -> int:
        return sum(c * n**i for i, c in enumerate(self.coefficients))


@dataclass(frozen=True)
class PatternFactor:
    """g^a with a in [lower(n), upper(n)].

    Without an explicit lower bound the range is 0..upper(n) when upper depends on n,
    and exactly upper(n) when it is a constant.
    """

    generator: str
    upper: ExponentBound
    lower: ExponentBound | None = None

    def exponents(self, n: int) -> range:
        if self.lower is not None:
            return range(self.lower(n), self.upper(n) + 1)
        if self.upper.mentions_n:
            return range(0, self.upper(n) + 1)
        return range(self.upper(n), self.upper(n) + 1)


@dataclass(frozen=True)
class MonomialPattern:
    factors: tuple[PatternFactor, ...]

    def words(self, n: int, pres: AlgebraPresentation) -> Iterator[Word]:
        indices = [pres.generator_index(f.generator) for f in self.factors]
        for exponents in product(*(f.exponents(n) for f in self.factors)):
            word: Word = ()
            for g, a in zip(indices, exponents):
                word += (g,) * a
            yield word

    def degree(self, n: int) -> int:
        return sum(max(f.exponents(n), default=0) for f in self.factors)


class ExhaustionKind(str, Enum):
    BALL = "ball"
    PATTERNS = "patterns"


@dataclass(frozen=True)
class ExhaustionSpec:
    kind: ExhaustionKind
    test_set: tuple[Element, ...] = ()
    patterns: tuple[MonomialPattern, ...] = ()
    label: str = ""

    @classmethod
    def balls(cls, S: Sequence[Element], label: str = "ball") -> "ExhaustionSpec":
        if not S:
            raise ExhaustionError("Ball exhaustion needs a nonempty generating set")
        return cls(ExhaustionKind.BALL, test_set=tuple(S), label=label)

    @classmethod
    def from_patterns(cls, patterns: Sequence[MonomialPattern], label: str = "patterns") -> "ExhaustionSpec":
        if not patterns:
            raise ExhaustionError("Pattern exhaustion needs at least one pattern")
        return cls(ExhaustionKind.PATTERNS, patterns=tuple(patterns), label=label)

    def degree_at(self, n: int) -> int:
        """Upper bound on the degree of W_n."""
        if self.kind is ExhaustionKind.BALL:
            return n * max(e.degree for e in self.test_set)
        return max(p.degree(n) for p in self.patterns)


def iter_levels(
    spec: ExhaustionSpec, pres: AlgebraPresentation, window: CoordinateWindow, ns: Iterable[int]
) -> Iterator[tuple[int, RowSpace]]:
    """Yield (n, W_n) for increasing n, checking W_n != 0 and W_n ⊆ W_{n'} for consecutive yields."""
    wanted = sorted(set(ns))
    if not wanted:
        return
    if wanted[0] < 1:
        raise ExhaustionError("Exhaustion levels start at n=1")
    previous: RowSpace | None = None
    for n, space in _raw_levels(spec, pres, window, wanted):
        if space.dim == 0:
            raise ExhaustionError(f"Exhaustion level n={n} is the zero space")
        if previous is not None and not is_subspace(previous, space):
            raise ExhaustionError(f"Exhaustion is not nested at level n={n}")
        previous = space
        yield n, space


def _raw_levels(
    spec: ExhaustionSpec, pres: AlgebraPresentation, window: CoordinateWindow, wanted: list[int]
) -> Iterator[tuple[int, RowSpace]]:
    if spec.kind is ExhaustionKind.BALL:
        targets = set(wanted)
        for m, space in enumerate(iter_balls(pres, spec.test_set, wanted[-1], window)):
            if m in targets:
                yield m, space
        return
    for n in wanted:
        required = spec.degree_at(n)
        if required > window.degree_bound:
            raise TruncationOverflow(required, window.degree_bound, level=n, what="exhaustion level")
        words = (w for pattern in spec.patterns for w in pattern.words(n, pres))
        yield n, window.span_word_images(words)


def level(spec: ExhaustionSpec, pres: AlgebraPresentation, window: CoordinateWindow, n: int) -> RowSpace:
    for _, space in iter_levels(spec, pres, window, [n]):
        return space
    raise ExhaustionError(f"No level n={n}")


class _LevelCache:
    """Lazily evaluated W_1, W_2, ... shared by constructions that revisit levels."""

    def __init__(self, spec: ExhaustionSpec, pres: AlgebraPresentation, window: CoordinateWindow) -> None:
        self._spec, self._pres, self._window = spec, pres, window
        self._levels: dict[int, RowSpace] = {}
        self._balls: Iterator[RowSpace] | None = None

    def __call__(self, n: int) -> RowSpace:
        if n in self._levels:
            return self._levels[n]
        if self._spec.kind is not ExhaustionKind.BALL:
            self._levels[n] = level(self._spec, self._pres, self._window, n)
            return self._levels[n]
        if self._balls is None:
            step = max(e.degree for e in self._spec.test_set)
            limit = self._window.degree_bound // step + 1 if step else n
            self._balls = iter_balls(self._pres, self._spec.test_set, max(limit, n), self._window)
            next(self._balls)  # ball(0) is not a level
        while n not in self._levels:
            space = next(self._balls)
            self._levels[len(self._levels) + 1] = space
        return self._levels[n]


def multiply_spaces(w: RowSpace, Z: Sequence[Element], window: CoordinateWindow, include_w: bool = False) -> RowSpace:
    """W·Z = span{w·z} (plus W itself when include_w)."""
    ech = Echelon.from_space(w) if include_w else Echelon(window.field, window.size)
    for z in Z:
        for row in right_multiply_subspace(w, z, window).rows:
            ech.insert(row)
    return ech.freeze()


# ----------------------------------------------------------------------
# Ratios and certificates
# ----------------------------------------------------------------------


def folner_ratio(w: RowSpace, r: Element, window: CoordinateWindow) -> Fraction:
    """dim(W·r + W) / dim(W)."""
    if w.dim == 0:
        raise InputError("Følner ratio of the zero subspace is undefined")
    return Fraction(sum_spaces(right_multiply_subspace(w, r, window), w).dim, w.dim)


class SearchStrategy(str, Enum):
    EXHAUSTION = "exhaustion"
    GREEDY_MONOMIAL = "greedy-monomial"


@dataclass(frozen=True)
class FolnerCertificate:
    subspace: RowSpace
    window: CoordinateWindow
    test_set: tuple[Element, ...]
    epsilon: Fraction
    ratios: tuple[Fraction, ...]
    level: int | None = None
    strategy: SearchStrategy = SearchStrategy.EXHAUSTION

    @property
    def max_ratio(self) -> Fraction:
        return max(self.ratios)


def _ratios(w: RowSpace, S: Sequence[Element], window: CoordinateWindow) -> tuple[Fraction, ...]:
    return tuple(folner_ratio(w, r, window) for r in S)


def folner_search(
    pres: AlgebraPresentation,
    S: Sequence[Element],
    epsilon: Fraction,
    exhaustion: ExhaustionSpec,
    n_max: int,
    window: CoordinateWindow,
    strategy: SearchStrategy = SearchStrategy.EXHAUSTION,
) -> FolnerCertificate | None:
    """Smallest level whose ratios are all <= 1 + epsilon, or None (inconclusive)."""
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    if not S:
        raise InputError("Følner search needs a nonempty test set")
    S = tuple(normal_form(r, pres) for r in S)
    if strategy is SearchStrategy.GREEDY_MONOMIAL:
        return _greedy_monomial_search(pres, S, epsilon, n_max, window)
    bound = 1 + epsilon
    for n, w in iter_levels(exhaustion, pres, window, range(1, n_max + 1)):
        try:
            ratios = _ratios(w, S, window)
        except TruncationOverflow as e:
            raise e.at_level(n) from None
        logger.debug("level n=%d dim=%d ratios=%s", n, w.dim, [str(r) for r in ratios])
        if max(ratios) <= bound:
            logger.info("Følner certificate at n=%d (dim %d, max ratio %s)", n, w.dim, max(ratios))
            return FolnerCertificate(w, window, S, epsilon, ratios, n, strategy)
    logger.warning("Følner search inconclusive up to n=%d", n_max)
    return None


def _greedy_monomial_search(
    pres: AlgebraPresentation,
    S: tuple[Element, ...],
    epsilon: Fraction,
    n_max: int,
    window: CoordinateWindow,
) -> FolnerCertificate | None:
    """Start from ball(1), add the normal word minimizing the worst ratio (ties: deglex first)."""
    start = next(space for m, space in enumerate(iter_balls(pres, S, 1, window)) if m == 1)
    if not start.is_monomial():
        raise ExhaustionError("greedy-monomial search needs a ball spanned by normal words")
    chosen = set(start.pivots)
    step = max(r.degree for r in S)
    candidates = [c for c in window.columns_up_to(window.degree_bound - step) if c not in chosen]
    bound = 1 + epsilon
    for n in range(0, n_max + 1):
        w = window.span_words(window.words[c] for c in sorted(chosen))
        ratios = _ratios(w, S, window)
        if max(ratios) <= bound:
            logger.info("greedy Følner certificate after %d additions (dim %d)", n, w.dim)
            return FolnerCertificate(w, window, S, epsilon, ratios, n, SearchStrategy.GREEDY_MONOMIAL)
        if n == n_max or not candidates:
            break
        best: tuple[Fraction, int] | None = None
        for col in candidates:
            trial = window.span_words(window.words[c] for c in sorted(chosen | {col}))
            worst = max(_ratios(trial, S, window))
            if best is None or worst < best[0]:
                best = (worst, col)
        assert best is not None
        chosen.add(best[1])
        candidates.remove(best[1])
    logger.warning("greedy Følner search inconclusive after %d additions", n_max)
    return None


def verify_certificate(c: FolnerCertificate) -> bool:
    """Recompute every ratio from the stored subspace; True iff all are <= 1 + epsilon."""
    if c.subspace.dim == 0 or not c.test_set:
        return False
    ratios = _ratios(c.subspace, c.test_set, c.window)
    if ratios != c.ratios:
        logger.warning("recorded ratios differ from recomputation: %s vs %s", c.ratios, ratios)
    return all(r <= 1 + c.epsilon for r in ratios)


def exhaustion_coverage(
    pres: AlgebraPresentation,
    exhaustion: ExhaustionSpec,
    S: Sequence[Element],
    schedule: ExponentBound,
    n_range: Iterable[int],
    window: CoordinateWindow,
) -> list[tuple[int, bool]]:
    """Per level, whether W_n contains ball_S(schedule(n))."""
    out = []
    for n, w in iter_levels(exhaustion, pres, window, n_range):
        radius = schedule(n)
        ball_space = None
        for ball_space in iter_balls(pres, S, radius, window):
            pass
        assert ball_space is not None
        out.append((n, is_subspace(ball_space, w)))
    return out


# ----------------------------------------------------------------------
# Doubling evidence
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class DoublingSample:
    dim: int
    sum_ratio: Fraction  # dim(VZ + V) / dim V
    product_ratio: Fraction  # dim(VZ) / dim V


@dataclass(frozen=True)
class DoublingReport:
    samples: tuple[DoublingSample, ...]

    @property
    def min_sum_ratio(self) -> Fraction | None:
        return min((s.sum_ratio for s in self.samples), default=None)

    @property
    def min_product_ratio(self) -> Fraction | None:
        return min((s.product_ratio for s in self.samples), default=None)


def doubling_probe(
    pres: AlgebraPresentation, Z: Sequence[Element], family: Sequence[RowSpace], window: CoordinateWindow
) -> DoublingReport:
    """Exact ratios dim(VZ+V)/dim V and dim(VZ)/dim V for every V in the family.

    The minimum over a finite family is evidence for, not a proof of, a doubling bound.
    """
    Z = [normal_form(z, pres) for z in Z]
    samples = []
    for v in family:
        if v.dim == 0:
            raise InputError("doubling probe needs nonzero subspaces")
        vz = multiply_spaces(v, Z, window)
        samples.append(
            DoublingSample(v.dim, Fraction(sum_spaces(vz, v).dim, v.dim), Fraction(vz.dim, v.dim))
        )
    return DoublingReport(tuple(samples))


# ----------------------------------------------------------------------
# Nested exhaustion
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class NestedLevel:
    n: int
    cover: int  # first base level containing the previous outer space
    chosen: int  # base level used as the inner space
    inner: RowSpace  # the smaller space of the pair
    outer: RowSpace  # inner·Z_n + inner
    test_ratio: Fraction  # dim(outer·Z_n + outer) / dim(inner)
    contains: bool  # outer_{n-1} ⊆ inner_n, True at n=1

    @property
    def inner_ratio(self) -> Fraction:
        return Fraction(self.inner.dim, self.outer.dim)


@dataclass(frozen=True)
class NestedExhaustion:
    levels: tuple[NestedLevel, ...]
    failure: str | None = None

    @property
    def is_chain(self) -> bool:
        """inner_n ⊆ outer_n ⊆ inner_{n+1} along the recorded levels."""
        spaces = [s for lv in self.levels for s in (lv.inner, lv.outer)]
        return all(is_subspace(a, b) for a, b in zip(spaces, spaces[1:]))


def nested_exhaustion(
    pres: AlgebraPresentation,
    base: ExhaustionSpec,
    z_schedule: Sequence[Sequence[Element]] | Callable[[int], Sequence[Element]],
    n_max: int,
    window: CoordinateWindow,
    l_max: int | None = None,
) -> NestedExhaustion:
    """Pairs inner_n ⊆ outer_n ⊆ inner_{n+1} built greedily from a base exhaustion.

    At level n: k is the first base level containing outer_{n-1}; l > k is the first
    level with dim(outer·Z_n + outer) <= (1 + 2^-n)·dim(W_l), where outer = W_l·Z_n + W_l.
    Running out of window or of ``l_max`` ends the construction with a recorded failure.
    """
    levels_of = _LevelCache(base, pres, window)

    def z_at(n: int) -> list[Element]:
        if callable(z_schedule):
            zs = z_schedule(n)
        else:
            zs = z_schedule[min(n, len(z_schedule)) - 1]
        return [normal_form(z, pres) for z in zs]

    built: list[NestedLevel] = []
    previous: RowSpace | None = None
    for n in range(1, n_max + 1):
        Z = z_at(n)
        threshold = 1 + Fraction(1, 2**n)
        try:
            k = 1
            while previous is not None and not is_subspace(previous, levels_of(k)):
                k += 1
                if l_max is not None and k >= l_max:
                    return NestedExhaustion(tuple(built), f"level n={n}: no base level up to {l_max} contains V_{n-1}")
            chosen = k + 1
            while True:
                if l_max is not None and chosen > l_max:
                    return NestedExhaustion(
                        tuple(built), f"level n={n}: threshold {threshold} not met for l in {k + 1}..{l_max}"
                    )
                inner = levels_of(chosen)
                outer = multiply_spaces(inner, Z, window, include_w=True)
                test = multiply_spaces(outer, Z, window, include_w=True)
                ratio = Fraction(test.dim, inner.dim)
                logger.debug("nested level n=%d k=%d l=%d ratio=%s", n, k, chosen, ratio)
                if ratio <= threshold:
                    break
                chosen += 1
        except TruncationOverflow as e:
            logger.warning("nested exhaustion stops at level n=%d: %s", n, e)
            return NestedExhaustion(tuple(built), f"level n={n}: no suitable l within the window ({e})")
        contains = previous is None or is_subspace(previous, inner)
        built.append(NestedLevel(n, k, chosen, inner, outer, ratio, contains))
        logger.info("nested level n=%d: l=%d dims %d/%d", n, chosen, inner.dim, outer.dim)
        previous = outer
    return NestedExhaustion(tuple(built))


# ----------------------------------------------------------------------
# Goldie dimension
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class GoldieWitness:
    n: int
    intersection_dim: int  # dim(W_n·a ∩ W_n·b)
    level_dim: int


def goldie_witness(
    pres: AlgebraPresentation,
    a: Element,
    b: Element,
    exhaustion: ExhaustionSpec,
    window: CoordinateWindow,
    n_max: int = 10,
) -> GoldieWitness | None:
    """First level where the translates W_n·a and W_n·b meet nontrivially."""
    a, b = normal_form(a, pres), normal_form(b, pres)
    if a.is_zero or b.is_zero:
        raise InputError("goldie witness needs nonzero elements")
    for n, w in iter_levels(exhaustion, pres, window, range(1, n_max + 1)):
        common = intersection_dim(right_multiply_subspace(w, a, window), right_multiply_subspace(w, b, window))
        if common > 0:
            return GoldieWitness(n, common, w.dim)
    return None
