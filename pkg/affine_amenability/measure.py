"""Finite-horizon densities for regular sets on the canonical basis.

An invariant dimension-measure is a limit along an ultrafilter, which no program can
evaluate. Every measure-flavoured quantity is therefore reported as a sequence over a
finite range of exhaustion levels together with the interval it occupies on the tail
of that range.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .algebra import AlgebraPresentation, CoordinateWindow, Element, Word, format_element, multiply, normal_form
from .errors import ExhaustionError, InputError, TruncationOverflow
from .exactlin import Echelon, RowSpace, SparseVec, intersection_dim, membership, span
from .folner import ExhaustionSpec, iter_levels

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = Fraction(1, 100)


class IntersectionMode(str, Enum):
    COUNT = "count"  # |L ∩ V|: denoted vectors individually inside V
    SPAN = "span"  # dim(span L ∩ V)


# ----------------------------------------------------------------------
# Tail summaries
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class TailSummary:
    liminf: Fraction
    limsup: Fraction
    converged: bool
    tail_start: int


def summarize_tail(entries: Sequence[tuple[int, Fraction]], tolerance: Fraction = DEFAULT_TOLERANCE) -> TailSummary:
    """min/max over the last third of the computed range; converged iff max - min < tolerance."""
    if not entries:
        raise InputError("cannot summarize an empty sequence")
    size = -(-len(entries) // 3)
    tail = [v for _, v in entries[-size:]]
    low, high = min(tail), max(tail)
    return TailSummary(low, high, high - low < tolerance, entries[-size][0])


@dataclass(frozen=True)
class DensityReport:
    label: str
    entries: tuple[tuple[int, Fraction], ...]
    tolerance: Fraction = DEFAULT_TOLERANCE
    mode: IntersectionMode = IntersectionMode.COUNT

    def __post_init__(self) -> None:
        for k, value in self.entries:
            if not 0 <= value <= 2:
                raise ValueError(f"density {value} at k={k} outside [0, 2]")

    @property
    def values(self) -> list[Fraction]:
        return [v for _, v in self.entries]

    @property
    def summary(self) -> TailSummary:
        return summarize_tail(self.entries, self.tolerance)


# ----------------------------------------------------------------------
# Regular sets
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class RegularPart:
    """A·r for a set A of basis words; ``words=None`` means every basis word of the window."""

    translator: Element
    words: tuple[Word, ...] | None = None

    def index_words(self, window: CoordinateWindow, extra_degree: int = 0) -> Iterable[Word]:
        """Words of A whose translate (times something of ``extra_degree``) stays in the window."""
        limit = window.degree_bound - self.translator.degree - extra_degree
        if self.words is None:
            return (window.words[c] for c in window.columns_up_to(limit))
        for w in self.words:
            if w not in window.index:
                raise InputError(f"{w!r} is not a normal word of the window")
        return (w for w in self.words if len(w) <= limit)


@dataclass(frozen=True)
class RegularSet:
    parts: tuple[RegularPart, ...]

    @classmethod
    def full_basis(cls, pres: AlgebraPresentation) -> "RegularSet":
        return cls((RegularPart(pres.one()),))

    def vectors(self, window: CoordinateWindow, r: Element | None = None) -> list[SparseVec]:
        """The denoted vectors e·r_i (or e·r_i·r), in part order."""
        pres = window.presentation
        out = []
        extra = r.degree if r is not None else 0
        for part in self.parts:
            translator = part.translator if r is None else multiply(part.translator, r, pres)
            for word in part.index_words(window, extra):
                out.append(window.vector(multiply(Element.from_word(word), translator, pres)))
        return out

    def check(self, window: CoordinateWindow) -> list[SparseVec]:
        """Denoted vectors, after checking they are distinct and independent."""
        if any(part.translator.is_zero for part in self.parts):
            raise InputError("regular set translators must be nonzero")
        vectors = self.vectors(window)
        ech = Echelon(window.field, window.size)
        for vec in vectors:
            if not ech.insert(vec):
                raise InputError("regular set vectors are not distinct and independent in the window")
        return vectors


def _inside_count(vectors: Sequence[SparseVec], v: RowSpace, mode: IntersectionMode) -> int:
    if mode is IntersectionMode.SPAN:
        return intersection_dim(span(v.field, v.ambient_dim, vectors), v)
    inside = membership(v)
    return sum(1 for vec in vectors if inside(vec))


def regular_density(
    L: RegularSet, V_k: RowSpace, window: CoordinateWindow, mode: IntersectionMode = IntersectionMode.COUNT
) -> Fraction:
    """|L ∩ V_k| / dim V_k."""
    if V_k.dim == 0:
        raise InputError("density relative to the zero space is undefined")
    return Fraction(_inside_count(L.check(window), V_k, mode), V_k.dim)


def invariance_defect(
    L: RegularSet,
    r: Element,
    exhaustion: ExhaustionSpec,
    k_range: Iterable[int],
    window: CoordinateWindow,
    mode: IntersectionMode = IntersectionMode.COUNT,
) -> DensityReport:
    """|dim(span(L·r) ∩ V_k) - |L ∩ V_k|| / dim V_k per level."""
    pres = window.presentation
    r = normal_form(r, pres)
    if r.is_zero:
        raise InputError("invariance defect needs a nonzero element")
    own = L.check(window)
    shifted = span(window.field, window.size, L.vectors(window, r))
    entries = []
    for k, v in iter_levels(exhaustion, pres, window, k_range):
        required = window.degree(v) + r.degree + max((p.translator.degree for p in L.parts), default=0)
        if required > window.degree_bound:
            raise TruncationOverflow(required, window.degree_bound, level=k, what="invariance defect")
        moved = intersection_dim(shifted, v)
        entries.append((k, Fraction(abs(moved - _inside_count(own, v, mode)), v.dim)))
        logger.debug("defect k=%d: %s", k, entries[-1][1])
    return DensityReport(f"defect r={format_element(r, pres)}", tuple(entries), mode=mode)


# ----------------------------------------------------------------------
# Boundary densities
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryLevel:
    k: int
    dim: int
    leaving: tuple[Word, ...]  # F_k(s): e in V_k with e·s outside V_k
    entering: tuple[Word, ...]  # B_k(s): e outside V_k with 0 != e·s in V_k


@dataclass(frozen=True)
class BoundaryDensities:
    levels: tuple[BoundaryLevel, ...]
    window_bound: int

    @property
    def f_density(self) -> DensityReport:
        return DensityReport("F", tuple((b.k, Fraction(len(b.leaving), b.dim)) for b in self.levels))

    @property
    def b_density(self) -> DensityReport:
        return DensityReport("B", tuple((b.k, Fraction(len(b.entering), b.dim)) for b in self.levels))


def fk_bk_densities(
    pres: AlgebraPresentation, s: Element, exhaustion: ExhaustionSpec, k_range: Iterable[int], window: CoordinateWindow
) -> BoundaryDensities:
    """Words leaving V_k under right multiplication by s, and words entering it.

    Levels must be spanned by basis words. Entering words range over the window only, so
    they undercount whatever lies beyond the degree bound.
    """
    s = normal_form(s, pres)
    if s.is_zero:
        raise InputError("boundary densities need a nonzero element")
    products: dict[Word, SparseVec | None] = {}

    def translate(word: Word) -> SparseVec | None:
        if word not in products:
            if len(word) + s.degree > window.degree_bound:
                products[word] = None
            else:
                products[word] = window.vector(multiply(Element.from_word(word), s, pres))
        return products[word]

    levels = []
    for k, v in iter_levels(exhaustion, pres, window, k_range):
        if not v.is_monomial():
            raise ExhaustionError(f"level k={k} is not spanned by basis words")
        required = window.degree(v) + s.degree
        if required > window.degree_bound:
            raise TruncationOverflow(required, window.degree_bound, level=k, what="F_k(s)")
        inside = membership(v)
        leaving, entering = [], []
        for col, word in enumerate(window.words):
            image = translate(word)
            if col in v.pivot_set:
                assert image is not None
                if not inside(image):
                    leaving.append(word)
            elif image and inside(image):
                entering.append(word)
        levels.append(BoundaryLevel(k, v.dim, tuple(leaving), tuple(entering)))
        logger.debug("k=%d: |F|=%d |B|=%d dim=%d", k, len(leaving), len(entering), v.dim)
    return BoundaryDensities(tuple(levels), window.degree_bound)
