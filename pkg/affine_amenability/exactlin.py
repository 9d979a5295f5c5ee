"""Exact linear algebra over prime fields GF(p).

Vectors are sparse ``dict[int, int]`` maps from column to a nonzero residue. Every
finite-dimensional subspace used elsewhere in the package is a :class:`RowSpace`: a
fully reduced row-echelon basis over a fixed number of columns.
"""

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Union

from sympy import isprime

from .errors import AmbientMismatch, InputError

SparseVec = dict[int, int]
VectorLike = Union[Mapping[int, int], Sequence[int]]

DEFAULT_CHARACTERISTIC = 32003


@dataclass(frozen=True)
class FieldSpec:
    """The prime field GF(p)."""

    characteristic: int = DEFAULT_CHARACTERISTIC

    def __post_init__(self) -> None:
        if not isinstance(self.characteristic, int) or self.characteristic < 2 or not isprime(self.characteristic):
            raise InputError(f"Field characteristic must be a prime >= 2, got {self.characteristic!r}")

    @property
    def p(self) -> int:
        return self.characteristic

    def reduce(self, value: int) -> int:
        return value % self.characteristic

    def inverse(self, value: int) -> int:
        value %= self.characteristic
        if value == 0:
            raise ZeroDivisionError("0 has no inverse in GF(p)")
        return pow(value, -1, self.characteristic)


@dataclass(frozen=True)
class Mat:
    """A matrix over GF(p), stored sparse by row."""

    field: FieldSpec
    cols: int
    rows: tuple[SparseVec, ...]

    @classmethod
    def from_rows(cls, fld: FieldSpec, cols: int, rows: Iterable[VectorLike]) -> "Mat":
        return cls(fld, cols, tuple(as_sparse(r, cols, fld) for r in rows))

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def dense(self) -> list[list[int]]:
        return [[r.get(c, 0) for c in range(self.cols)] for r in self.rows]


def as_sparse(vector: VectorLike, ambient_dim: int, fld: FieldSpec) -> SparseVec:
    """Convert a dense sequence or a column mapping to a reduced sparse vector."""
    p = fld.characteristic
    if isinstance(vector, Mapping):
        out = {}
        for col, value in vector.items():
            if not 0 <= col < ambient_dim:
                raise AmbientMismatch(f"Column {col} outside ambient dimension {ambient_dim}")
            value %= p
            if value:
                out[col] = value
        return out
    if len(vector) != ambient_dim:
        raise AmbientMismatch(f"Vector length {len(vector)} != ambient dimension {ambient_dim}")
    return {col: value % p for col, value in enumerate(vector) if value % p}


def _axpy(target: SparseVec, coef: int, src: Mapping[int, int], p: int) -> None:
    """target += coef * src, in place."""
    for col, value in src.items():
        new = (target.get(col, 0) + coef * value) % p
        if new:
            target[col] = new
        else:
            target.pop(col, None)


class Echelon:
    """Mutable fully reduced echelon basis, grown one vector at a time.

    Pivot of a row is its first nonzero column; pivots are normalized to 1 and
    every pivot column is zero in all other rows.
    """

    def __init__(self, fld: FieldSpec, ambient_dim: int) -> None:
        self.field = fld
        self.ambient_dim = ambient_dim
        self._rows: dict[int, SparseVec] = {}
        # non-pivot column -> pivots of the rows that have an entry there
        self._support: dict[int, set[int]] = {}

    @classmethod
    def from_space(cls, space: "RowSpace") -> "Echelon":
        ech = cls(space.field, space.ambient_dim)
        for pivot, row in zip(space.pivots, space.rows):
            ech._rows[pivot] = dict(row)
            for col in row:
                if col != pivot:
                    ech._support.setdefault(col, set()).add(pivot)
        return ech

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, vec: Mapping[int, int]) -> SparseVec:
        """Residual of ``vec`` modulo the current span."""
        p = self.field.characteristic
        out = dict(vec)
        for col in [c for c in vec if c in self._rows]:
            coef = vec[col]
            _axpy(out, p - coef, self._rows[col], p)
        return out

    def insert(self, vec: Mapping[int, int]) -> bool:
        """Add ``vec`` to the span. Returns False if it was already contained."""
        residual = self.reduce(vec)
        if not residual:
            return False
        p = self.field.characteristic
        pivot = min(residual)
        inv = pow(residual[pivot], -1, p)
        if inv != 1:
            residual = {c: v * inv % p for c, v in residual.items()}
        for other in sorted(self._support.pop(pivot, ())):
            row = self._rows[other]
            coef = row[pivot]
            before = set(row)
            _axpy(row, p - coef, residual, p)
            after = set(row)
            for col in before - after:
                if col != other:
                    self._drop_support(col, other)
            for col in after - before:
                self._support.setdefault(col, set()).add(other)
        self._rows[pivot] = residual
        for col in residual:
            if col != pivot:
                self._support.setdefault(col, set()).add(pivot)
        return True

    def _drop_support(self, col: int, pivot: int) -> None:
        rows = self._support.get(col)
        if rows is not None:
            rows.discard(pivot)
            if not rows:
                del self._support[col]

    def contains(self, vec: Mapping[int, int]) -> bool:
        return not self.reduce(vec)

    def freeze(self) -> "RowSpace":
        pivots = tuple(sorted(self._rows))
        return RowSpace(self.field, self.ambient_dim, tuple(dict(self._rows[c]) for c in pivots))


@dataclass(frozen=True, eq=False)
class RowSpace:
    """A subspace of GF(p)^ambient_dim given by its reduced row-echelon basis.

    Build instances with :func:`rref` or :func:`span`; the constructor trusts its input.
    """

    field: FieldSpec
    ambient_dim: int
    rows: tuple[SparseVec, ...]
    pivots: tuple[int, ...] = field(init=False)
    pivot_set: frozenset[int] = field(init=False, repr=False)
    monomial: bool = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "pivots", tuple(min(r) for r in self.rows))
        object.__setattr__(self, "pivot_set", frozenset(self.pivots))
        object.__setattr__(self, "monomial", all(len(r) == 1 for r in self.rows))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> Mat:
        return Mat(self.field, self.ambient_dim, self.rows)

    def is_monomial(self) -> bool:
        """True if the space is spanned by coordinate vectors (every row has one entry)."""
        return self.monomial

    def support(self) -> frozenset[int]:
        cols: set[int] = set()
        for r in self.rows:
            cols.update(r)
        return frozenset(cols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RowSpace):
            return NotImplemented
        return (self.field, self.ambient_dim, self.rows) == (other.field, other.ambient_dim, other.rows)

    def __hash__(self) -> int:
        return hash((self.field, self.ambient_dim, tuple(tuple(sorted(r.items())) for r in self.rows)))

    def __repr__(self) -> str:
        return f"RowSpace(dim={self.dim}, ambient_dim={self.ambient_dim}, p={self.field.p})"


def zero_space(fld: FieldSpec, ambient_dim: int) -> RowSpace:
    return RowSpace(fld, ambient_dim, ())


def span(fld: FieldSpec, ambient_dim: int, vectors: Iterable[Mapping[int, int]]) -> RowSpace:
    """Row space of already-sparse vectors (no length checks)."""
    ech = Echelon(fld, ambient_dim)
    for vec in vectors:
        ech.insert(vec)
    return ech.freeze()


def rref(m: Mat) -> tuple[RowSpace, int]:
    """Reduced row-echelon form of ``m``'s row space and its rank."""
    space = span(m.field, m.cols, m.rows)
    return space, space.dim


def rank(fld: FieldSpec, ambient_dim: int, vectors: Iterable[Mapping[int, int]]) -> int:
    ech = Echelon(fld, ambient_dim)
    for vec in vectors:
        ech.insert(vec)
    return ech.rank


def _check_ambient(u: RowSpace, v: RowSpace) -> None:
    if u.ambient_dim != v.ambient_dim or u.field != v.field:
        raise AmbientMismatch(
            f"Ambient mismatch: dim {u.ambient_dim} over GF({u.field.p}) vs dim {v.ambient_dim} over GF({v.field.p})"
        )


def sum_spaces(u: RowSpace, v: RowSpace) -> RowSpace:
    """U + V."""
    _check_ambient(u, v)
    if v.dim > u.dim:
        u, v = v, u
    ech = Echelon.from_space(u)
    for row in v.rows:
        ech.insert(row)
    return ech.freeze()


def intersection_dim(u: RowSpace, v: RowSpace) -> int:
    """dim(U ∩ V) = dim U + dim V - dim(U + V)."""
    return u.dim + v.dim - sum_spaces(u, v).dim


def contains(u: RowSpace, vector: VectorLike) -> bool:
    vec = as_sparse(vector, u.ambient_dim, u.field)
    return is_member(u, vec)


def is_member(u: RowSpace, vec: Mapping[int, int]) -> bool:
    """Membership for a vector already known to be sparse and in range."""
    if not vec:
        return True
    if u.is_monomial():
        return all(col in u.pivot_set for col in vec)
    return Echelon.from_space(u).contains(vec)


def is_subspace(u: RowSpace, v: RowSpace) -> bool:
    """U ⊆ V."""
    _check_ambient(u, v)
    if u.dim > v.dim:
        return False
    ech = Echelon.from_space(v)
    return all(ech.contains(row) for row in u.rows)


def membership(u: RowSpace) -> Callable[[Mapping[int, int]], bool]:
    """A reusable membership test for repeated queries against the same space."""
    if u.is_monomial():
        pivots = u.pivot_set
        return lambda vec: all(col in pivots for col in vec)
    return Echelon.from_space(u).contains
