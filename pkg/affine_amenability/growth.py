"""Ball dimensions and growth of affine algebras.

The m-ball is the span of all products of at most m elements of a generating set S.
For unital presentations the empty product (the unit) is included, so ball(0) = K·1 and
d[m] is one more than dim of the sum of S^j for j = 1..m.
"""

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraPresentation, CoordinateWindow, Element, normal_form, right_multiply_subspace
from .errors import InputError, TruncationOverflow
from .exactlin import Echelon, RowSpace

logger = logging.getLogger(__name__)

SUBEXPONENTIAL = "subexponential at tested scale"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class GrowthSeries:
    """d[m] = dim ball(m) for m = 0..len(d)-1."""

    presentation_id: str
    generators: tuple[Element, ...]
    d: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(a > b for a, b in zip(self.d, self.d[1:])):
            raise ValueError(f"growth series must be nondecreasing: {self.d}")

    @property
    def m_max(self) -> int:
        return len(self.d) - 1


def _max_degree(elements: Sequence[Element]) -> int:
    return max((e.degree for e in elements), default=0)


def iter_balls(
    pres: AlgebraPresentation, S: Sequence[Element], m_max: int, window: CoordinateWindow
) -> Iterator[RowSpace]:
    """Yield ball(0), ball(1), ..., ball(m_max)."""
    if m_max < 0:
        raise InputError("ball radius must be nonnegative")
    generators = [normal_form(s, pres) for s in S]
    step = _max_degree(generators)
    total = Echelon(window.field, window.size)
    if pres.unital:
        total.insert(window.vector(pres.one()))
    yield total.freeze()
    layer: RowSpace | None = None
    for m in range(1, m_max + 1):
        if m * step > window.degree_bound:
            raise TruncationOverflow(m * step, window.degree_bound, level=m, what="ball")
        if layer is None:
            layer = window.span_elements(generators)
        else:
            ech = Echelon(window.field, window.size)
            for s in generators:
                for row in right_multiply_subspace(layer, s, window).rows:
                    ech.insert(row)
            layer = ech.freeze()
        for row in layer.rows:
            total.insert(row)
        yield total.freeze()


def ball(pres: AlgebraPresentation, S: Sequence[Element], m: int, window: CoordinateWindow) -> RowSpace:
    """Span of all products of at most m factors from S (plus the unit if unital)."""
    step = _max_degree(S)
    if m * step > window.degree_bound:
        raise TruncationOverflow(m * step, window.degree_bound, level=m, what="ball")
    result = None
    for result in iter_balls(pres, S, m, window):
        pass
    assert result is not None
    return result


def growth_sequence(
    pres: AlgebraPresentation, S: Sequence[Element], m_max: int, window: CoordinateWindow, presentation_id: str = ""
) -> GrowthSeries:
    d = tuple(b.dim for b in iter_balls(pres, S, m_max, window))
    logger.info("growth of %s up to m=%d: %s", presentation_id or pres.name, m_max, d)
    return GrowthSeries(presentation_id or pres.name, tuple(S), d)


def subexp_probe(g: GrowthSeries, epsilon: Fraction, t: int) -> int | None:
    """Smallest m >= 1 with d[m+t] <= d[m]·(1+epsilon), or None within the computed range."""
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    if t < 1:
        raise InputError("gap t must be at least 1")
    for m in range(1, len(g.d) - t):
        if g.d[m + t] <= g.d[m] * (1 + epsilon):
            return m
    return None


def subexponential_schedule(g: GrowthSeries, n_max: int) -> list[tuple[int, int]]:
    """Radii m_1 <= m_2 <= ... with d[m_n + n] <= d[m_n]·(1 + 2^-n).

    The balls R_{m_n} are then a Følner exhaustion. Stops early when the series is
    too short to certify the next level.
    """
    schedule: list[tuple[int, int]] = []
    m = 1
    for n in range(1, n_max + 1):
        bound = 1 + Fraction(1, 2**n)
        while m + n < len(g.d) and g.d[m + n] > g.d[m] * bound:
            m += 1
        if m + n >= len(g.d):
            logger.info("subexponential schedule stops at n=%d: series too short", n)
            break
        schedule.append((n, m))
    return schedule


def classify(g: GrowthSeries, epsilon: Fraction, t: int = 1) -> str:
    """Evidence label only: growth type is not decidable from finitely many d[m]."""
    return SUBEXPONENTIAL if subexp_probe(g, epsilon, t) is not None else INCONCLUSIVE
