"""Rank and relative rank of finitely generated modules over unital presentations.

A module M ⊆ R^t is given by generator vectors x_1..x_r. Inside the coordinate window
of degree D, R^t has coordinates ``component * N + word index`` where N is the window
size. The rank along an exhaustion W_n is read off the ratios dim(∑ W_n x_i)/dim W_n.
Quotients N/M use the truncation M_D = span{w·y_j : deg w <= D - deg y_j}.
"""

import logging
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraPresentation, CoordinateWindow, Element, normal_form, right_multiply_vector
from .errors import AmbientMismatch, InputError, TruncationOverflow
from .exactlin import Echelon, FieldSpec, RowSpace, SparseVec, intersection_dim, sum_spaces
from .folner import ExhaustionSpec, iter_levels
from .measure import DEFAULT_TOLERANCE, TailSummary, summarize_tail

logger = logging.getLogger(__name__)

ModuleVector = tuple[Element, ...]


@dataclass(frozen=True)
class ModulePresentation:
    ambient_rank: int
    generators: tuple[ModuleVector, ...]
    sub_generators: tuple[ModuleVector, ...] = ()
    name: str = ""

    def __post_init__(self) -> None:
        if self.ambient_rank < 1:
            raise InputError("module ambient rank must be at least 1")
        for vec in self.generators + self.sub_generators:
            if len(vec) != self.ambient_rank:
                raise AmbientMismatch(f"module vector of length {len(vec)} in R^{self.ambient_rank}")
        if any(all(e.is_zero for e in vec) for vec in self.generators):
            raise InputError("module generators must be nonzero")

    @property
    def is_quotient(self) -> bool:
        return bool(self.sub_generators)

    @property
    def degree(self) -> int:
        """Largest degree of a generator component."""
        return max((e.degree for vec in self.generators for e in vec), default=0)

    @classmethod
    def free(cls, rank: int, pres: AlgebraPresentation) -> "ModulePresentation":
        """R^rank with its standard generators."""
        zero = Element()
        gens = tuple(tuple(pres.one() if i == j else zero for j in range(rank)) for i in range(rank))
        return cls(rank, gens, name=f"R^{rank}")

    def normalized(self, pres: AlgebraPresentation) -> "ModulePresentation":
        def norm(vectors: Sequence[ModuleVector]) -> tuple[ModuleVector, ...]:
            return tuple(tuple(normal_form(e, pres) for e in vec) for vec in vectors)

        return ModulePresentation(self.ambient_rank, norm(self.generators), norm(self.sub_generators), self.name)

    def quotient(self, sub: "ModulePresentation") -> "ModulePresentation":
        """self / sub, for sub ⊆ self."""
        if sub.ambient_rank != self.ambient_rank:
            raise AmbientMismatch("submodule lives in a different free module")
        return ModulePresentation(self.ambient_rank, self.generators, sub.generators, f"{self.name}/{sub.name}")


@dataclass(frozen=True)
class RankReport:
    label: str
    exhaustion: str
    generators: int
    entries: tuple[tuple[int, Fraction], ...]
    tolerance: Fraction = DEFAULT_TOLERANCE

    def __post_init__(self) -> None:
        for n, value in self.entries:
            if not 0 <= value <= self.generators:
                raise ValueError(f"rank entry {value} at n={n} outside [0, {self.generators}]")

    @property
    def summary(self) -> TailSummary:
        return summarize_tail(self.entries, self.tolerance)

    @property
    def note(self) -> str:
        s = self.summary
        if s.converged:
            return f"converged to within {self.tolerance}"
        return f"exhaustion-dependent, interval [{s.liminf}, {s.limsup}]"


# ----------------------------------------------------------------------
# Module coordinates
# ----------------------------------------------------------------------


class _ModuleWindow:
    def __init__(self, window: CoordinateWindow, ambient_rank: int) -> None:
        self.window = window
        self.ambient_rank = ambient_rank
        self.size = window.size * ambient_rank

    @property
    def field(self) -> FieldSpec:
        return self.window.field

    def translates(self, w: RowSpace, vec: ModuleVector) -> Iterator[SparseVec]:
        """Rows spanning W·x for a module vector x."""
        required = self.window.degree(w) + max(e.degree for e in vec)
        if w.dim and required > self.window.degree_bound:
            raise TruncationOverflow(required, self.window.degree_bound, what="W·x")
        for row in w.rows:
            out: SparseVec = {}
            for component, e in enumerate(vec):
                if e.is_zero:
                    continue
                offset = component * self.window.size
                for col, value in right_multiply_vector(row, e, self.window).items():
                    out[offset + col] = value
            if out:
                yield out

    def span_translates(self, w: RowSpace, vectors: Iterable[ModuleVector]) -> RowSpace:
        ech = Echelon(self.field, self.size)
        for vec in vectors:
            for row in self.translates(w, vec):
                ech.insert(row)
        return ech.freeze()

    def truncation(self, vectors: Sequence[ModuleVector]) -> RowSpace:
        """M_D: span of w·y for normal words w with deg w + deg y <= D."""
        ech = Echelon(self.field, self.size)
        for vec in vectors:
            degree = max(e.degree for e in vec)
            limit = self.window.degree_bound - degree
            if limit < 0:
                continue
            words = self.window.span_words(self.window.words[c] for c in self.window.columns_up_to(limit))
            for row in self.translates(words, vec):
                ech.insert(row)
        return ech.freeze()


# ----------------------------------------------------------------------
# Rank reports
# ----------------------------------------------------------------------


def _require_unital(pres: AlgebraPresentation) -> None:
    if not pres.unital:
        raise InputError(
            f"module rank needs a unital algebra (ranks are defined over unital amenable algebras); "
            f"presentation {pres.name or '<unnamed>'} is not unital"
        )


@dataclass
class _Prepared:
    module: ModulePresentation
    coords: _ModuleWindow
    sub: RowSpace | None

    def span(self, w: RowSpace) -> RowSpace:
        return self.coords.span_translates(w, self.module.generators)

    def numerator(self, w: RowSpace) -> int:
        spanned = self.span(w)
        if self.sub is None:
            return spanned.dim
        return sum_spaces(spanned, self.sub).dim - self.sub.dim


def _prepare(pres: AlgebraPresentation, module: ModulePresentation, window: CoordinateWindow) -> _Prepared:
    module = module.normalized(pres)
    coords = _ModuleWindow(window, module.ambient_rank)
    sub = coords.truncation(module.sub_generators) if module.is_quotient else None
    return _Prepared(module, coords, sub)


def _levels(
    pres: AlgebraPresentation,
    modules: Sequence[ModulePresentation],
    exhaustion: ExhaustionSpec,
    n_range: Iterable[int],
    window: CoordinateWindow,
) -> Iterator[tuple[int, RowSpace]]:
    """Exhaustion levels, with the window checked against the largest generator degree."""
    _require_unital(pres)
    degree = max((m.degree for m in modules), default=0)
    for n, w in iter_levels(exhaustion, pres, window, n_range):
        required = window.degree(w) + degree
        if required > window.degree_bound:
            raise TruncationOverflow(required, window.degree_bound, level=n, what="module level")
        yield n, w


def rank(
    pres: AlgebraPresentation,
    M: ModulePresentation,
    exhaustion: ExhaustionSpec,
    n_range: Iterable[int],
    window: CoordinateWindow,
) -> RankReport:
    """Per-level ratios dim(∑ W_n x_i) / dim W_n (quotients: modulo M_D)."""
    prepared = _prepare(pres, M, window)
    entries = []
    for n, w in _levels(pres, [M], exhaustion, n_range, window):
        entries.append((n, Fraction(prepared.numerator(w), w.dim)))
        logger.debug("rank %s n=%d: %s", M.name, n, entries[-1][1])
    report = RankReport(M.name or "M", exhaustion.label, len(M.generators), tuple(entries))
    if not report.summary.converged:
        logger.warning("rank of %s is %s", report.label, report.note)
    return report


def _check_submodule(N: ModulePresentation, M: ModulePresentation, pres: AlgebraPresentation) -> None:
    if N.ambient_rank != M.ambient_rank:
        raise AmbientMismatch(f"submodule lives in R^{M.ambient_rank}, module in R^{N.ambient_rank}")
    own = set(N.normalized(pres).generators)
    missing = [vec for vec in M.normalized(pres).generators if vec not in own]
    if missing:
        raise InputError(f"{len(missing)} generator(s) of the submodule are not among the module's generators")


def relative_rank(
    pres: AlgebraPresentation,
    N: ModulePresentation,
    M: ModulePresentation,
    exhaustion: ExhaustionSpec,
    n_range: Iterable[int],
    window: CoordinateWindow,
) -> RankReport:
    """Per-level ratios dim(M_D ∩ ∑ W_n x_i) / dim W_n, x_i the generators of N."""
    _check_submodule(N, M, pres)
    ambient = _prepare(pres, N, window)
    sub = ambient.coords.truncation(M.normalized(pres).generators)
    entries = []
    for n, w in _levels(pres, [N, M], exhaustion, n_range, window):
        entries.append((n, Fraction(intersection_dim(sub, ambient.span(w)), w.dim)))
    return RankReport(f"rank_X({M.name or 'M'})", exhaustion.label, len(N.generators), tuple(entries))


@dataclass(frozen=True)
class SequenceLevel:
    n: int
    total: int  # dim ∑ W_n x_i
    quotient: int  # dim ∑ W_n [x_i] in N/M
    relative: int  # dim(M ∩ ∑ W_n x_i)

    @property
    def residual(self) -> int:
        return abs(self.total - self.quotient - self.relative)


@dataclass(frozen=True)
class ExactSequenceReport:
    levels: tuple[SequenceLevel, ...]
    rank_n: RankReport
    rank_quotient: RankReport
    rank_relative: RankReport

    @property
    def residuals(self) -> list[tuple[int, int]]:
        return [(lv.n, lv.residual) for lv in self.levels]


def exact_sequence_check(
    pres: AlgebraPresentation,
    N: ModulePresentation,
    M: ModulePresentation,
    exhaustion: ExhaustionSpec,
    n_range: Iterable[int],
    window: CoordinateWindow,
) -> ExactSequenceReport:
    """dim ∑ W_n x_i = dim ∑ W_n [x_i] + dim(M ∩ ∑ W_n x_i) at every level, with the three rank reports."""
    _check_submodule(N, M, pres)
    ambient = _prepare(pres, N, window)
    sub = ambient.coords.truncation(M.normalized(pres).generators)
    levels, dims = [], []
    for n, w in _levels(pres, [N, M], exhaustion, n_range, window):
        spanned = ambient.span(w)
        quotient = sum_spaces(spanned, sub).dim - sub.dim
        levels.append(SequenceLevel(n, spanned.dim, quotient, intersection_dim(sub, spanned)))
        dims.append(w.dim)
        if levels[-1].residual:
            logger.warning("exact sequence residual %d at n=%d", levels[-1].residual, n)
    r = len(N.generators)
    label = exhaustion.label

    def report(name: str, values: Sequence[int]) -> RankReport:
        return RankReport(name, label, r, tuple((lv.n, Fraction(v, d)) for lv, v, d in zip(levels, values, dims)))

    return ExactSequenceReport(
        tuple(levels),
        report(N.name or "N", [lv.total for lv in levels]),
        report(f"{N.name or 'N'}/{M.name or 'M'}", [lv.quotient for lv in levels]),
        report(f"rank_X({M.name or 'M'})", [lv.relative for lv in levels]),
    )


def direct_sum(M: ModulePresentation, N: ModulePresentation) -> ModulePresentation:
    """M ⊕ N inside R^(t + t')."""
    left = tuple(Element() for _ in range(N.ambient_rank))
    right = tuple(Element() for _ in range(M.ambient_rank))
    return ModulePresentation(
        M.ambient_rank + N.ambient_rank,
        tuple(vec + left for vec in M.generators) + tuple(right + vec for vec in N.generators),
        tuple(vec + left for vec in M.sub_generators) + tuple(right + vec for vec in N.sub_generators),
        f"{M.name or 'M'}+{N.name or 'N'}",
    )


@dataclass(frozen=True)
class DirectSumReport:
    rank: RankReport
    residuals: tuple[tuple[int, int], ...]


def direct_sum_check(
    pres: AlgebraPresentation,
    M: ModulePresentation,
    N: ModulePresentation,
    exhaustion: ExhaustionSpec,
    n_range: Iterable[int],
    window: CoordinateWindow,
) -> DirectSumReport:
    """Per-level additivity of dim ∑ W_n x_i over M ⊕ N."""
    both = direct_sum(M, N)
    parts = [_prepare(pres, m, window) for m in (M, N, both)]
    entries, residuals = [], []
    for n, w in _levels(pres, [M, N], exhaustion, n_range, window):
        dm, dn, ds = (p.numerator(w) for p in parts)
        entries.append((n, Fraction(ds, w.dim)))
        residuals.append((n, abs(ds - dm - dn)))
    report = RankReport(both.name, exhaustion.label, len(both.generators), tuple(entries))
    return DirectSumReport(report, tuple(residuals))
