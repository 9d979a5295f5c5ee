"""Finitely presented associative algebras over GF(p) with terminating rewriting systems.

Words are tuples of generator indices; the empty tuple is the unit. Rewrite rules
``lhs -> rhs`` must strictly decrease the degree-lexicographic order (generator order is
the listing order), which makes reduction terminate. A presentation whose overlaps all
resolve has the normal words as a basis (diamond lemma); :func:`enumerate_basis` refuses
to build a coordinate window for a presentation that fails :func:`confluence_check`.

Group algebras are written with explicit inverse generators, see :func:`group_algebra`.
"""

import hashlib
import json
import logging
import re
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Any

from .errors import ElementSyntaxError, NonConfluentError, PresentationError, TruncationOverflow
from .exactlin import DEFAULT_CHARACTERISTIC, FieldSpec, RowSpace, SparseVec, span

logger = logging.getLogger(__name__)

Word = tuple[int, ...]

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_POWER_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\^([0-9]+)$")
_TERMS_RE = re.compile(r"[+-]?[^+-]+")

# Cached letter products per presentation
LETTER_CACHE_SIZE = 1 << 16


def deglex_key(word: Word) -> tuple[int, Word]:
    return len(word), word


class Element:
    """A finite GF(p)-linear combination of words. Immutable; coefficients are nonzero residues.

    Arithmetic needs the field and the rewriting rules, so it lives in the module-level
    functions (:func:`multiply`, :func:`normal_form`, :func:`add`).
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Word, int] | Iterable[tuple[Word, int]] = ()) -> None:
        items = terms.items() if isinstance(terms, Mapping) else terms
        self._terms: dict[Word, int] = {tuple(w): c for w, c in items if c}
        self._hash: int | None = None

    @classmethod
    def from_word(cls, word: Sequence[int], coefficient: int = 1) -> "Element":
        return cls({tuple(word): coefficient})

    @property
    def terms(self) -> Mapping[Word, int]:
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[tuple[Word, int]]:
        return iter(sorted(self._terms.items(), key=lambda t: deglex_key(t[0])))

    def words(self) -> list[Word]:
        return sorted(self._terms, key=deglex_key)

    def coefficient(self, word: Word) -> int:
        return self._terms.get(word, 0)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Maximal word length; 0 for the zero element."""
        return max((len(w) for w in self._terms), default=0)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Element({dict(self.items())!r})"


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: Element


@dataclass(frozen=True)
class Ambiguity:
    """An overlap or inclusion word whose two one-step reducts have different normal forms."""

    word: Word
    left: Element
    right: Element


@dataclass(frozen=True)
class AlgebraPresentation:
    """K<generators> / (rules) over K = GF(p), optionally unital."""

    field: FieldSpec
    generators: tuple[str, ...]
    rules: tuple[Rule, ...] = ()
    unital: bool = True
    name: str = ""
    _letter_cache: Callable[[Word, int], dict[Word, int]] = field(init=False, repr=False, compare=False, hash=False)
    _windows: dict[int, "CoordinateWindow"] = field(
        default_factory=dict, init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self) -> None:
        if not self.generators:
            raise PresentationError("A presentation needs at least one generator")
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError(f"Generator names must be distinct: {list(self.generators)}")
        for name in self.generators:
            if not _NAME_RE.match(name):
                raise PresentationError(f"Invalid generator name: {name!r}")
        n = len(self.generators)
        for rule in self.rules:
            if not rule.lhs:
                raise PresentationError("Rule left-hand sides must be nonempty words")
            for word in (rule.lhs, *rule.rhs.terms):
                if any(not 0 <= g < n for g in word):
                    raise PresentationError(f"Rule refers to unknown generator index in {word}")
            for word in rule.rhs.terms:
                if deglex_key(word) >= deglex_key(rule.lhs):
                    raise PresentationError(
                        f"Rule {format_word(rule.lhs, self)} -> {format_element(rule.rhs, self)} does not "
                        "decrease the deglex order"
                    )
                if not word and not self.unital:
                    raise PresentationError("Unit used in a rule of a non-unital algebra")
        object.__setattr__(self, "_letter_cache", lru_cache(maxsize=LETTER_CACHE_SIZE)(self._reduce_letter))

    @property
    def p(self) -> int:
        return self.field.characteristic

    @property
    def max_rule_degree(self) -> int:
        return max((len(r.lhs) for r in self.rules), default=0)

    def generator_index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise ElementSyntaxError(f"Unknown generator {name!r}; known: {', '.join(self.generators)}") from None

    def one(self) -> Element:
        if not self.unital:
            raise ElementSyntaxError("Unit used in a non-unital algebra")
        return Element.from_word(())

    # ------------------------------------------------------------------
    # Reduction
    # ------------------------------------------------------------------

    def _suffix_rule(self, word: Word) -> Rule | None:
        for rule in self.rules:
            size = len(rule.lhs)
            if size <= len(word) and word[len(word) - size:] == rule.lhs:
                return rule
        return None

    def _mul_letter(self, u: Word, g: int) -> dict[Word, int]:
        return self._letter_cache(u, g)

    def _reduce_letter(self, u: Word, g: int) -> dict[Word, int]:
        """Normal form of u·g for a normal word u. Any rule occurrence must be a suffix."""
        word = u + (g,)
        rule = self._suffix_rule(word)
        if rule is None:
            result = {word: 1}
        else:
            prefix = word[: len(word) - len(rule.lhs)]
            result = {}
            p = self.p
            for m, c in rule.rhs.terms.items():
                for w, c2 in self._mul_word(prefix, m).items():
                    value = (result.get(w, 0) + c * c2) % p
                    if value:
                        result[w] = value
                    else:
                        result.pop(w, None)
        return result

    def _mul_word(self, u: Word, m: Word) -> dict[Word, int]:
        """Normal form of u·m for a normal word u and an arbitrary word m."""
        current: dict[Word, int] = {u: 1}
        p = self.p
        for g in m:
            nxt: dict[Word, int] = {}
            for v, c in current.items():
                for w, c2 in self._mul_letter(v, g).items():
                    value = (nxt.get(w, 0) + c * c2) % p
                    if value:
                        nxt[w] = value
                    else:
                        nxt.pop(w, None)
            current = nxt
            if not current:
                break
        return current

    def _combine(self, terms: Iterable[tuple[Word, Word, int]]) -> Element:
        """Sum of c·nf(u·m) over (u, m, c) with u normal."""
        out: dict[Word, int] = {}
        p = self.p
        for u, m, c in terms:
            for w, c2 in self._mul_word(u, m).items():
                value = (out.get(w, 0) + c * c2) % p
                if value:
                    out[w] = value
                else:
                    out.pop(w, None)
        return Element(out)

    def is_normal_word(self, word: Word) -> bool:
        for rule in self.rules:
            size = len(rule.lhs)
            for start in range(len(word) - size + 1):
                if word[start:start + size] == rule.lhs:
                    return False
        return True


# ----------------------------------------------------------------------
# Loading, parsing, formatting
# ----------------------------------------------------------------------


def presentation_from_dict(data: Mapping[str, Any], name: str = "") -> AlgebraPresentation:
    """Build a presentation from the JSON document format.

    ``{"char": 32003, "unital": true, "generators": ["x", "y"],
    "rules": [{"lhs": "x*x", "rhs": "0"}]}``
    """
    if not isinstance(data, Mapping):
        raise PresentationError("Presentation must be a JSON object")
    unknown = set(data) - {"char", "unital", "generators", "rules", "name"}
    if unknown:
        raise PresentationError(f"Unknown presentation keys: {', '.join(sorted(unknown))}")
    generators = data.get("generators")
    if not isinstance(generators, list) or not all(isinstance(g, str) for g in generators):
        raise PresentationError("'generators' must be a list of names")
    base = AlgebraPresentation(
        field=FieldSpec(data.get("char", DEFAULT_CHARACTERISTIC)),
        generators=tuple(generators),
        unital=bool(data.get("unital", True)),
        name=str(data.get("name", name)),
    )
    raw_rules = data.get("rules", [])
    if not isinstance(raw_rules, list):
        raise PresentationError("'rules' must be a list of rule objects")
    rules = []
    for raw in raw_rules:
        if not isinstance(raw, Mapping) or set(raw) != {"lhs", "rhs"}:
            raise PresentationError(f"Rule must be an object with 'lhs' and 'rhs': {raw!r}")
        rules.append(Rule(parse_word(str(raw["lhs"]), base), _parse_terms(str(raw["rhs"]), base)))
    return AlgebraPresentation(base.field, base.generators, tuple(rules), base.unital, base.name)


def presentation_to_dict(pres: AlgebraPresentation) -> dict[str, Any]:
    return {
        "char": pres.p,
        "unital": pres.unital,
        "generators": list(pres.generators),
        "rules": [{"lhs": format_word(r.lhs, pres), "rhs": format_element(r.rhs, pres)} for r in pres.rules],
    }


def presentation_hash(pres: AlgebraPresentation) -> str:
    canonical = json.dumps(presentation_to_dict(pres), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def group_algebra(
    generators: Sequence[str],
    char: int = DEFAULT_CHARACTERISTIC,
    relations: Sequence[tuple[str, str]] = (),
    name: str = "",
) -> AlgebraPresentation:
    """Group algebra presentation with inverse generators.

    Each generator ``g`` gets an inverse named ``g.swapcase()`` listed right after it,
    together with the rules gG -> 1 and Gg -> 1. ``relations`` are extra (lhs, rhs)
    rules in element syntax, e.g. ``("y*x", "x*y")`` for commuting generators.
    """
    names: list[str] = []
    for g in generators:
        inverse = g.swapcase()
        if inverse == g:
            raise PresentationError(f"Generator {g!r} has no case-swapped inverse name")
        names.extend([g, inverse])
    data = {
        "char": char,
        "unital": True,
        "generators": names,
        "rules": [
            {"lhs": f"{a}*{b}", "rhs": "1"}
            for g in generators
            for a, b in ((g, g.swapcase()), (g.swapcase(), g))
        ]
        + [{"lhs": lhs, "rhs": rhs} for lhs, rhs in relations],
    }
    return presentation_from_dict(data, name=name)


def _parse_factor(factor: str, pres: AlgebraPresentation) -> tuple[int, Word]:
    """One ``*``-separated factor: an integer, ``1``, a generator name or ``name^k``."""
    if factor.isascii() and factor.isdigit():
        return int(factor), ()
    match = _POWER_RE.match(factor)
    if match:
        return 1, (pres.generator_index(match.group(1)),) * int(match.group(2))
    if not _NAME_RE.match(factor):
        raise ElementSyntaxError(f"Invalid factor {factor!r}")
    return 1, (pres.generator_index(factor),)


def parse_word(text: str, pres: AlgebraPresentation) -> Word:
    """A word: generator names joined by ``*``; ``1`` is the empty word."""
    body = "".join(text.split())
    if body == "1":
        if not pres.unital:
            raise ElementSyntaxError("Unit used in a non-unital algebra")
        return ()
    if not body:
        raise ElementSyntaxError("Empty word")
    word: Word = ()
    for factor in body.split("*"):
        _, part = _parse_factor(factor, pres)
        if not part:
            raise ElementSyntaxError(f"Coefficient not allowed inside a word: {text!r}")
        word += part
    return word


def _parse_terms(text: str, pres: AlgebraPresentation) -> Element:
    """Parse without normalizing (used for rule right-hand sides)."""
    body = "".join(text.split())
    if not body:
        raise ElementSyntaxError("Empty element")
    terms = _TERMS_RE.findall(body)
    if "".join(terms) != body:
        raise ElementSyntaxError(f"Syntax error in element {text!r}")
    p = pres.p
    out: dict[Word, int] = {}
    for term in terms:
        sign = -1 if term.startswith("-") else 1
        core = term.lstrip("+-")
        if not core:
            raise ElementSyntaxError(f"Syntax error in element {text!r}")
        coef = sign
        word: Word = ()
        for factor in core.split("*"):
            if not factor:
                raise ElementSyntaxError(f"Syntax error in element {text!r}")
            c, part = _parse_factor(factor, pres)
            coef *= c
            word += part
        coef %= p
        if coef == 0:
            continue
        if not word and not pres.unital:
            raise ElementSyntaxError("Unit used in a non-unital algebra")
        value = (out.get(word, 0) + coef) % p
        if value:
            out[word] = value
        else:
            out.pop(word, None)
    return Element(out)


def parse_element(text: str, pres: AlgebraPresentation) -> Element:
    """Parse ``±[coeff*]word`` terms into a canonical (normal-form) element."""
    return normal_form(_parse_terms(text, pres), pres)


def format_word(word: Word, pres: AlgebraPresentation) -> str:
    return "*".join(pres.generators[g] for g in word) if word else "1"


def format_element(e: Element, pres: AlgebraPresentation) -> str:
    if e.is_zero:
        return "0"
    p = pres.p
    parts = []
    for word, c in e.items():
        negative = c > p // 2
        size = p - c if negative else c
        if word and size == 1:
            body = format_word(word, pres)
        elif word:
            body = f"{size}*{format_word(word, pres)}"
        else:
            body = str(size)
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(parts)


# ----------------------------------------------------------------------
# Arithmetic
# ----------------------------------------------------------------------


def normal_form(e: Element, pres: AlgebraPresentation) -> Element:
    return pres._combine(((), word, c) for word, c in e.terms.items())


def add(a: Element, b: Element, pres: AlgebraPresentation, scale: int = 1) -> Element:
    """a + scale·b, computed on the given terms (no reduction)."""
    p = pres.p
    out = dict(a.terms)
    for word, c in b.terms.items():
        value = (out.get(word, 0) + scale * c) % p
        if value:
            out[word] = value
        else:
            out.pop(word, None)
    return Element(out)


def multiply(a: Element, b: Element, pres: AlgebraPresentation) -> Element:
    """Canonical product a·b."""
    left = a if all(pres.is_normal_word(w) for w in a.terms) else normal_form(a, pres)
    p = pres.p
    return pres._combine((u, m, ca * cb % p) for u, ca in left.terms.items() for m, cb in b.terms.items())


def confluence_check(pres: AlgebraPresentation, degree_bound: int) -> list[Ambiguity]:
    """Unresolved overlap and inclusion ambiguities among rule left-hand sides of length <= degree_bound."""
    unresolved = []
    rules = pres.rules
    for i, first in enumerate(rules):
        a = first.lhs
        for j, second in enumerate(rules):
            b = second.lhs
            # overlaps: a = u·s, b = s·v with s a proper nonempty common part
            for k in range(1, min(len(a), len(b))):
                if a[len(a) - k:] != b[:k]:
                    continue
                word = a + b[k:]
                if len(word) > degree_bound:
                    continue
                left = pres._combine((u, b[k:], c) for u, c in normal_form(first.rhs, pres).terms.items())
                right = _reduct(pres, a[: len(a) - k], second.rhs, ())
                if left != right:
                    unresolved.append(Ambiguity(word, left, right))
            # inclusions: b is a factor of a
            if i == j or len(b) > len(a) or len(a) > degree_bound:
                continue
            if len(b) == len(a) and j < i:
                continue
            for start in range(len(a) - len(b) + 1):
                if a[start:start + len(b)] != b:
                    continue
                left = normal_form(first.rhs, pres)
                right = _reduct(pres, a[:start], second.rhs, a[start + len(b):])
                if left != right:
                    unresolved.append(Ambiguity(a, left, right))
    unresolved.sort(key=lambda amb: deglex_key(amb.word))
    if unresolved:
        logger.debug("%d unresolved ambiguities up to degree %d", len(unresolved), degree_bound)
    return unresolved


def _reduct(pres: AlgebraPresentation, prefix: Word, middle: Element, suffix: Word) -> Element:
    """Normal form of prefix·middle·suffix."""
    head = normal_form(Element.from_word(prefix), pres)
    p = pres.p
    return pres._combine(
        (w, m + suffix, c * cm % p) for w, c in head.terms.items() for m, cm in middle.terms.items()
    )


# ----------------------------------------------------------------------
# Coordinate windows
# ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CoordinateWindow:
    """Normal words of degree <= degree_bound in deglex order, indexed 0..size-1."""

    presentation: AlgebraPresentation
    degree_bound: int
    words: tuple[Word, ...]
    index: Mapping[Word, int] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.words)

    @property
    def field(self) -> FieldSpec:
        return self.presentation.field

    def column_degree(self, col: int) -> int:
        return len(self.words[col])

    def vector(self, e: Element) -> SparseVec:
        out = {}
        for word, c in e.terms.items():
            col = self.index.get(word)
            if col is None:
                if len(word) > self.degree_bound:
                    raise TruncationOverflow(len(word), self.degree_bound, what="element")
                raise ValueError(f"Word {format_word(word, self.presentation)} is not a normal word")
            out[col] = c
        return out

    def element(self, vec: Mapping[int, int]) -> Element:
        return Element({self.words[col]: c for col, c in vec.items()})

    def word_vector(self, word: Word) -> SparseVec:
        """Coordinates of nf(word); normal words are read off the index without rewriting."""
        col = self.index.get(word)
        if col is not None:
            return {col: 1}
        return self.vector(normal_form(Element.from_word(word), self.presentation))

    def degree(self, space: RowSpace) -> int:
        """Largest degree of a column used by ``space`` (0 for the zero space)."""
        return max((len(self.words[col]) for col in space.support()), default=0)

    def columns_up_to(self, degree: int) -> range:
        """Columns of words of degree <= degree (a prefix, by deglex order)."""
        end = self.size
        for col, word in enumerate(self.words):
            if len(word) > degree:
                end = col
                break
        return range(end)

    def span_words(self, words: Iterable[Word]) -> RowSpace:
        return span(self.field, self.size, ({self.index[w]: 1} for w in words))

    def span_word_images(self, words: Iterable[Word]) -> RowSpace:
        """Span of nf(w) over arbitrary words w."""
        return span(self.field, self.size, (self.word_vector(w) for w in words))

    def span_elements(self, elements: Iterable[Element]) -> RowSpace:
        return span(self.field, self.size, (self.vector(e) for e in elements))


def _normal_words(pres: AlgebraPresentation, degree_bound: int) -> list[Word]:
    """Normal words up to degree_bound in deglex order (no confluence gate)."""
    by_length: dict[int, set[Word]] = {}
    for rule in pres.rules:
        by_length.setdefault(len(rule.lhs), set()).add(rule.lhs)
    words: list[Word] = [()] if pres.unital else []
    level: list[Word] = [()]
    for _ in range(degree_bound):
        nxt = []
        for w in level:
            for g in range(len(pres.generators)):
                candidate = w + (g,)
                if any(size <= len(candidate) and candidate[-size:] in lhs for size, lhs in by_length.items()):
                    continue
                nxt.append(candidate)
        words.extend(nxt)
        level = nxt
        if not level:
            break
    return words


def enumerate_basis(pres: AlgebraPresentation, degree_bound: int) -> CoordinateWindow:
    """The canonical basis window of normal words of degree <= degree_bound."""
    if degree_bound < 0:
        raise ValueError("degree bound must be nonnegative")
    cached = pres._windows.get(degree_bound)
    if cached is not None:
        return cached
    ambiguities = confluence_check(pres, 2 * degree_bound)
    if ambiguities:
        shown = ", ".join(format_word(a.word, pres) for a in ambiguities[:5])
        raise NonConfluentError(f"Presentation is not confluent: unresolved overlaps {shown}", ambiguities)
    words = tuple(_normal_words(pres, degree_bound))
    window = CoordinateWindow(pres, degree_bound, words, MappingProxyType({w: i for i, w in enumerate(words)}))
    logger.debug("window of degree %d has %d normal words", degree_bound, len(words))
    pres._windows[degree_bound] = window
    return window


def right_multiply_vector(vec: Mapping[int, int], r: Element, window: CoordinateWindow) -> SparseVec:
    """Coordinates of v·r for a window vector v."""
    pres = window.presentation
    p = pres.p
    r_terms = list(r.terms.items())
    product = pres._combine((window.words[col], m, c * cr % p) for col, c in vec.items() for m, cr in r_terms)
    return window.vector(product)


def right_multiply_subspace(w: RowSpace, r: Element, window: CoordinateWindow) -> RowSpace:
    """The row space of {v·r : v a basis row of w}, in the same window."""
    if w.dim and not r.is_zero:
        required = window.degree(w) + r.degree
        if required > window.degree_bound:
            raise TruncationOverflow(required, window.degree_bound, what="W·r")
    return span(window.field, window.size, (right_multiply_vector(row, r, window) for row in w.rows))


def find_zero_divisors(pres: AlgebraPresentation, degree_bound: int) -> tuple[Element, Element] | None:
    """A pair of normal words (a, b) with a·b = 0, searched up to degree_bound.

    Only words are tried, so ``None`` is no proof that the algebra is a domain.
    """
    words = [w for w in _normal_words(pres, degree_bound) if w]
    for a in words:
        for b in words:
            if not pres._mul_word(a, b):
                return Element.from_word(a), Element.from_word(b)
    return None
