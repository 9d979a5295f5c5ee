"""Linear Hall transversals and truncated paradoxical decompositions.

A transversal instance has m slots, each with a list of candidate vectors in a common
space. A transversal picks one candidate per slot so that the picked vectors are
linearly independent; it exists iff every slot subset I has candidates spanning at
least |I| dimensions. The search is matroid intersection (one candidate per slot
against linear independence) with breadth-first augmenting paths, so a failure comes
with the slot set that violates the bound.

Slots and candidate indices are 0-based. Paradox certificates live on the canonical
deglex normal-word basis and are truncated: independence is asserted inside the
coordinate window only.
"""

import logging
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraPresentation, CoordinateWindow, Element, Word, multiply, normal_form
from .errors import InputError, TruncationOverflow
from .exactlin import Echelon, FieldSpec, RowSpace, SparseVec, VectorLike, _axpy, as_sparse, membership, rank

logger = logging.getLogger(__name__)

Slot = int
Choice = tuple[int, int]  # (slot, candidate index)


# ----------------------------------------------------------------------
# Transversal instances
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class TransversalInstance:
    field: FieldSpec
    ambient_dim: int
    candidates: tuple[tuple[SparseVec, ...], ...]

    @classmethod
    def from_vectors(
        cls, fld: FieldSpec, ambient_dim: int, candidates: Iterable[Iterable[VectorLike]]
    ) -> "TransversalInstance":
        return cls(fld, ambient_dim, tuple(tuple(as_sparse(v, ambient_dim, fld) for v in slot) for slot in candidates))

    @property
    def m(self) -> int:
        return len(self.candidates)

    def vector(self, choice: Choice) -> SparseVec:
        return self.candidates[choice[0]][choice[1]]

    def spanned_dim(self, slots: Iterable[Slot]) -> int:
        return rank(self.field, self.ambient_dim, (v for i in slots for v in self.candidates[i]))

    def doubled(self) -> "TransversalInstance":
        """Each slot listed twice: slot i becomes slots 2i and 2i+1."""
        return TransversalInstance(
            self.field, self.ambient_dim, tuple(c for slot in self.candidates for c in (slot, slot))
        )


@dataclass(frozen=True)
class Transversal:
    phi: tuple[int, ...]


@dataclass(frozen=True)
class DoubleTransversal:
    phi: tuple[int, ...]
    psi: tuple[int, ...]


@dataclass(frozen=True)
class DeficiencyWitness:
    """Slots whose candidates span fewer than |slots| (or 2|slots| when doubled) dimensions."""

    slots: tuple[Slot, ...]
    spanned_dim: int
    doubled: bool = False
    words: tuple[Word, ...] = ()

    @property
    def required_dim(self) -> int:
        return len(self.slots) * (2 if self.doubled else 1)


def selected_rank(inst: TransversalInstance, phi: Sequence[int]) -> int:
    return rank(inst.field, inst.ambient_dim, (inst.candidates[i][j] for i, j in enumerate(phi)))


def is_transversal(inst: TransversalInstance, phi: Sequence[int]) -> bool:
    if len(phi) != inst.m or any(not 0 <= j < len(inst.candidates[i]) for i, j in enumerate(phi)):
        return False
    return selected_rank(inst, phi) == inst.m


def is_double_transversal(inst: TransversalInstance, phi: Sequence[int], psi: Sequence[int]) -> bool:
    if len(phi) != inst.m or len(psi) != inst.m:
        return False
    picks = [(i, j) for i, j in enumerate(phi)] + [(i, j) for i, j in enumerate(psi)]
    if any(not 0 <= j < len(inst.candidates[i]) for i, j in picks):
        return False
    return rank(inst.field, inst.ambient_dim, (inst.vector(c) for c in picks)) == 2 * inst.m


def witness_holds(inst: TransversalInstance, witness: DeficiencyWitness) -> bool:
    """Recompute the span of the witness slots; True iff it is below the Hall bound."""
    if not witness.slots:
        return False
    spanned = inst.spanned_dim(witness.slots)
    return spanned == witness.spanned_dim and spanned < witness.required_dim


# ----------------------------------------------------------------------
# Augmenting-path search
# ----------------------------------------------------------------------


class _TrackedBasis:
    """Echelon basis of the selected vectors that remembers how each row combines them."""

    def __init__(self, fld: FieldSpec, selected: Mapping[Choice, SparseVec]) -> None:
        self._p = fld.characteristic
        self._rows: dict[int, tuple[SparseVec, dict[Choice, int]]] = {}
        for choice in sorted(selected):
            residual, combo = self.express(selected[choice])
            if not residual:
                raise AssertionError(f"selected vectors are dependent at {choice}")
            combo = {c: (-v) % self._p for c, v in combo.items()}
            combo[choice] = 1
            pivot = min(residual)
            inv = pow(residual[pivot], -1, self._p)
            self._rows[pivot] = (
                {c: v * inv % self._p for c, v in residual.items()},
                {c: v * inv % self._p for c, v in combo.items()},
            )

    def express(self, vec: Mapping[int, int]) -> tuple[SparseVec, dict[Choice, int]]:
        """(residual, combo) with vec = sum(combo[c]·selected[c]) + residual."""
        p = self._p
        residual = dict(vec)
        combo: dict[Choice, int] = {}
        while True:
            pivots = [c for c in residual if c in self._rows]
            if not pivots:
                return residual, combo
            col = min(pivots)
            coef = residual[col]
            row, row_combo = self._rows[col]
            _axpy(residual, p - coef, row, p)
            _axpy(combo, coef, row_combo, p)  # type: ignore[arg-type]

    def circuit(self, vec: Mapping[int, int]) -> list[Choice] | None:
        """Selected vectors needed to express vec, or None if vec is independent of them."""
        residual, combo = self.express(vec)
        if residual:
            return None
        return sorted(combo)


def _augment(inst: TransversalInstance, selected: dict[Slot, int], slot: Slot) -> list[Slot] | None:
    """Extend ``selected`` to cover ``slot`` along a shortest exchange path.

    Returns None on success, otherwise the slots reached by the search, whose candidates
    all lie in the span of the reached selected vectors.
    """
    basis = _TrackedBasis(inst.field, {(i, j): inst.candidates[i][j] for i, j in selected.items()})
    parent: dict[Choice, Choice | None] = {}
    queue: deque[Choice] = deque()
    for j in range(len(inst.candidates[slot])):
        parent[(slot, j)] = None
        queue.append((slot, j))
    reached = [slot]
    seen_slots = {slot}
    while queue:
        y = queue.popleft()
        circuit = basis.circuit(inst.vector(y))
        if circuit is None:
            # y frees up the slot of its predecessor, back to the new slot
            node: Choice | None = y
            while node is not None:
                selected[node[0]] = node[1]
                node = parent[node]
            return None
        for x in circuit:
            if x[0] in seen_slots:
                continue
            seen_slots.add(x[0])
            reached.append(x[0])
            for j in range(len(inst.candidates[x[0]])):
                candidate = (x[0], j)
                if j != x[1] and candidate not in parent:
                    parent[candidate] = y
                    queue.append(candidate)
    return sorted(reached)


def hall_transversal(inst: TransversalInstance) -> Transversal | DeficiencyWitness:
    """One independent candidate per slot, or a slot set violating the Hall bound."""
    selected: dict[Slot, int] = {}
    for slot in range(inst.m):
        stuck = _augment(inst, selected, slot)
        if stuck is not None:
            witness = DeficiencyWitness(tuple(stuck), inst.spanned_dim(stuck))
            logger.debug("no transversal: slots %s span %d dims", witness.slots, witness.spanned_dim)
            return witness
    logger.debug("transversal found for %d slots", inst.m)
    return Transversal(tuple(selected[i] for i in range(inst.m)))


def _quotient_instance(inst: TransversalInstance, phi: Sequence[int]) -> TransversalInstance:
    ech = Echelon(inst.field, inst.ambient_dim)
    for i, j in enumerate(phi):
        ech.insert(inst.candidates[i][j])
    return TransversalInstance(
        inst.field, inst.ambient_dim, tuple(tuple(ech.reduce(v) for v in slot) for slot in inst.candidates)
    )


def double_transversal(inst: TransversalInstance) -> DoubleTransversal | DeficiencyWitness:
    """Two picks per slot with all 2m picked vectors independent, or a witness with d < 2|I|.

    First a transversal, then a second one of the candidates reduced modulo the first
    selection. That can fail even when a solution exists, so the exact answer comes from a
    transversal of the instance with every slot doubled.
    """
    first = hall_transversal(inst)
    if isinstance(first, Transversal):
        second = hall_transversal(_quotient_instance(inst, first.phi))
        if isinstance(second, Transversal):
            return DoubleTransversal(first.phi, second.phi)
        logger.debug("quotient transversal failed on slots %s, trying the doubled instance", second.slots)
    doubled = hall_transversal(inst.doubled())
    if isinstance(doubled, Transversal):
        return DoubleTransversal(doubled.phi[0::2], doubled.phi[1::2])
    slots = tuple(sorted({s // 2 for s in doubled.slots}))
    return DeficiencyWitness(slots, inst.spanned_dim(slots), doubled=True)


# ----------------------------------------------------------------------
# Paradoxical decompositions
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ParadoxPart:
    words: tuple[Word, ...]
    left: Element
    right: Element


@dataclass(frozen=True)
class ParadoxCertificate:
    """Parts A_t of the basis slice E with translator pairs (g_t, h_t).

    Valid when the parts partition E and the 2|E| vectors e·g_t, e·h_t are independent.
    """

    basis: tuple[Word, ...]
    parts: tuple[ParadoxPart, ...]
    window: CoordinateWindow
    degree: int

    @property
    def translators(self) -> list[tuple[Element, Element]]:
        return [(part.left, part.right) for part in self.parts]


def basis_slice(window: CoordinateWindow, degree: int) -> tuple[Word, ...]:
    return tuple(window.words[c] for c in window.columns_up_to(degree))


def _translate(word: Word, r: Element, window: CoordinateWindow) -> SparseVec:
    required = len(word) + r.degree
    if required > window.degree_bound:
        raise TruncationOverflow(required, window.degree_bound, what="translate e·r")
    return window.vector(multiply(Element.from_word(word), r, window.presentation))


def _translates(c: ParadoxCertificate) -> Iterable[SparseVec]:
    for part in c.parts:
        for word in part.words:
            yield _translate(word, part.left, c.window)
            yield _translate(word, part.right, c.window)


def build_paradox(
    pres: AlgebraPresentation, S: Sequence[Element], degree: int, window: CoordinateWindow
) -> ParadoxCertificate | DeficiencyWitness:
    """Partition the words of degree <= ``degree`` into parts translated by pairs from S.

    Parts are indexed by the pair of translators picked for their words, so there are at
    most |S|^2 of them. A witness lists words whose S-translates span fewer than twice as
    many dimensions.
    """
    S = [normal_form(r, pres) for r in S]
    if not S or any(r.is_zero for r in S):
        raise InputError("paradox translators must be nonzero elements")
    required = degree + max(r.degree for r in S)
    if required > window.degree_bound:
        raise TruncationOverflow(required, window.degree_bound, what="paradox translates")
    basis = basis_slice(window, degree)
    inst = TransversalInstance(
        window.field, window.size, tuple(tuple(_translate(e, r, window) for r in S) for e in basis)
    )
    logger.info("paradox search over %d basis words with %d translators", len(basis), len(S))
    found = double_transversal(inst)
    if isinstance(found, DeficiencyWitness):
        words = tuple(basis[i] for i in found.slots)
        logger.info("no paradox certificate: %d words span %d < %d", len(words), found.spanned_dim, 2 * len(words))
        return DeficiencyWitness(found.slots, found.spanned_dim, True, words)
    groups: dict[tuple[int, int], list[Word]] = {}
    for e, a, b in zip(basis, found.phi, found.psi):
        groups.setdefault((a, b), []).append(e)
    parts = tuple(ParadoxPart(tuple(words), S[a], S[b]) for (a, b), words in sorted(groups.items()))
    logger.info("paradox certificate with %d parts", len(parts))
    return ParadoxCertificate(basis, parts, window, degree)


def single_part_certificate(
    pres: AlgebraPresentation, degree: int, g: Element, h: Element, window: CoordinateWindow
) -> ParadoxCertificate:
    """The whole basis slice as one part translated by (g, h). Not verified."""
    basis = basis_slice(window, degree)
    return ParadoxCertificate(basis, (ParadoxPart(basis, normal_form(g, pres), normal_form(h, pres)),), window, degree)


def verify_paradox(c: ParadoxCertificate) -> bool:
    """Parts partition the basis slice and all 2|E| translates are independent."""
    words = [w for part in c.parts for w in part.words]
    if len(words) != len(set(words)) or set(words) != set(c.basis):
        return False
    if any(part.left.is_zero or part.right.is_zero for part in c.parts):
        return False
    ech = Echelon(c.window.field, c.window.size)
    for vec in _translates(c):
        if not ech.insert(vec):
            return False
    return ech.rank == 2 * len(c.basis)


def mass_doubling_check(c: ParadoxCertificate, V: RowSpace) -> Fraction:
    """Share of the 2|E| translates lying in V, relative to dim V.

    The translates form a regular independent set of twice the mass of E, so values near
    2 on large V show why no invariant dimension-measure can exist.
    """
    if V.dim == 0:
        raise InputError("mass doubling check needs a nonzero subspace")
    inside = membership(V)
    return Fraction(sum(1 for vec in _translates(c) if inside(vec)), V.dim)
