"""Two-universe data model: information systems, descriptors, granules and the
binary relation joining the universes.

Objects are addressed by dense 0-based indices; original ids are kept on the
:class:`InformationSystem`. Extensions are sorted tuples of indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .exceptions import StructuralError, ValidationError

__all__ = [
    "InformationSystem",
    "Descriptor",
    "Granule",
    "BinaryRelation",
    "Mmer",
    "Violation",
    "extension",
    "make_granule",
    "neighborhood",
    "inverse_neighborhood",
    "validate_mmer",
    "check_mmer",
]


def _is_null(value):
    return value is None or value == "" or (isinstance(value, float) and value != value)


@dataclass(frozen=True)
class InformationSystem:
    """One universe: objects described by symbolic attributes.

    ``inert_values`` maps an attribute (name or index) to tokens that never form
    descriptor terms. Boolean columns produced by multi-valued attribute
    scaling mark ``"0"`` inert so that "genre absent" is not mined as a value.
    """

    universe_id: str
    objects: tuple
    attributes: tuple
    values: tuple
    inert_values: tuple = ()
    _value_rank: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "objects", tuple(self.objects))
        set_(self, "attributes", tuple(self.attributes))
        set_(
            self,
            "values",
            tuple(
                tuple(None if _is_null(v) else str(v) for v in row)
                for row in self.values
            ),
        )
        inert = [frozenset() for _ in self.attributes]
        raw = self.inert_values
        if isinstance(raw, Mapping):
            for key, tokens in raw.items():
                a = key if isinstance(key, int) else self._attr_index_or_raise(key)
                inert[a] = frozenset(str(t) for t in tokens)
        elif raw:
            inert = [frozenset(str(t) for t in tokens) for tokens in raw]
        set_(self, "inert_values", tuple(inert))

        ranks = []
        for a in range(len(self.attributes)):
            seen = {}
            for row in self.values:
                if a < len(row) and row[a] is not None and row[a] not in seen:
                    seen[row[a]] = len(seen)
            ranks.append(seen)
        set_(self, "_value_rank", tuple(ranks))

    def _attr_index_or_raise(self, name):
        try:
            return self.attributes.index(name)
        except ValueError:
            raise StructuralError(
                f"unknown attribute {name!r} in universe {self.universe_id!r}"
            ) from None

    @property
    def n_objects(self):
        return len(self.objects)

    @property
    def n_attributes(self):
        return len(self.attributes)

    def attribute_index(self, name):
        return self._attr_index_or_raise(name)

    def object_index(self, object_id):
        try:
            return self.objects.index(object_id)
        except ValueError:
            raise StructuralError(
                f"unknown object {object_id!r} in universe {self.universe_id!r}"
            ) from None

    def column(self, a):
        return tuple(row[a] for row in self.values)

    def value_order(self, a):
        """Distinct values of attribute ``a`` in first-appearance order."""
        return tuple(self._value_rank[a])

    def descriptor(self, terms):
        """Build a :class:`Descriptor` from ``{attribute name: value}``."""
        if isinstance(terms, Mapping):
            terms = terms.items()
        return Descriptor(
            (self._attr_index_or_raise(name), str(value)) for name, value in terms
        )

    def sort_key(self, d):
        """Canonical ordering key: length, then (attribute, value rank) pairs.

        Unknown values sort after all observed ones, by token.
        """
        key = []
        for a, v in d.terms:
            rank = self._value_rank[a].get(v)
            key.append((a, 0, rank, "") if rank is not None else (a, 1, 0, v))
        return (len(d.terms), tuple(key))

    def render(self, d):
        return " ∧ ".join(f"⟨{self.attributes[a]}: {v}⟩" for a, v in d.terms)


class Descriptor:
    """Conjunction of attribute-value terms, one per attribute at most.

    Terms are kept sorted by attribute index, so equality and hashing are
    structural.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable[tuple[int, str]] = ()):
        terms = tuple(sorted((int(a), str(v)) for a, v in terms))
        for (a1, _), (a2, _) in zip(terms, terms[1:]):
            if a1 == a2:
                raise StructuralError(f"two terms on attribute index {a1}")
        self.terms = terms
        self._hash = hash(terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __eq__(self, other):
        return isinstance(other, Descriptor) and self.terms == other.terms

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Descriptor({list(self.terms)!r})"

    @property
    def attributes(self):
        return tuple(a for a, _ in self.terms)

    def issubset(self, other):
        return set(self.terms) <= set(other.terms)

    def union(self, other):
        """Conjunction of both descriptors; raises if they clash on an attribute."""
        merged = dict(self.terms)
        for a, v in other.terms:
            if a in merged and merged[a] != v:
                raise StructuralError(
                    f"descriptors disagree on attribute index {a}: {merged[a]!r} vs {v!r}"
                )
            merged[a] = v
        return Descriptor(merged.items())

    def parents(self):
        """All descriptors obtained by dropping exactly one term."""
        t = self.terms
        return [Descriptor(t[:i] + t[i + 1 :]) for i in range(len(t))]


def extension(ins: InformationSystem, d: Descriptor) -> tuple[int, ...]:
    """Indices of the objects matching every term of ``d``, sorted."""
    m = ins.n_attributes
    for a, _ in d.terms:
        if not 0 <= a < m:
            raise StructuralError(
                f"attribute index {a} out of range for {ins.universe_id!r} ({m} attributes)"
            )
    if not d.terms:
        return tuple(range(ins.n_objects))
    return tuple(
        i
        for i, row in enumerate(ins.values)
        if all(row[a] == v for a, v in d.terms)
    )


class Granule:
    """A descriptor together with its extension and coverage.

    Two granules are equal when their descriptors are equal, even if another
    descriptor happens to share the same extension.
    """

    __slots__ = ("descriptor", "extension", "members", "coverage")

    def __init__(self, descriptor: Descriptor, extension: Sequence[int], universe_size: int):
        self.descriptor = descriptor
        self.extension = tuple(extension)
        self.members = frozenset(self.extension)
        self.coverage = Fraction(len(self.extension), universe_size)

    def __len__(self):
        return len(self.extension)

    def __eq__(self, other):
        return isinstance(other, Granule) and self.descriptor == other.descriptor

    def __hash__(self):
        return hash(self.descriptor)

    def __repr__(self):
        return (
            f"Granule({list(self.descriptor.terms)!r}, |e|={len(self.extension)}, "
            f"cov={self.coverage})"
        )


def make_granule(ins: InformationSystem, d: Descriptor | Mapping[str, str]) -> Granule:
    if not isinstance(d, Descriptor):
        d = ins.descriptor(d)
    return Granule(d, extension(ins, d), ins.n_objects)


class BinaryRelation:
    """A relation from ``range(n_rows)`` to ``range(n_cols)``.

    Held three ways at once: a boolean matrix, per-row sorted column sets and
    per-column sorted row sets. ``row_members``/``col_members`` are frozenset
    views of the same data for O(1) membership.
    """

    def __init__(self, n_rows: int, n_cols: int, pairs: Iterable[tuple[int, int]] = ()):
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        bits = np.zeros((self.n_rows, self.n_cols), dtype=bool)
        for x, y in pairs:
            if not (0 <= x < self.n_rows and 0 <= y < self.n_cols):
                raise StructuralError(
                    f"pair ({x}, {y}) outside a {self.n_rows}x{self.n_cols} relation"
                )
            bits[x, y] = True
        self._build(bits)

    @classmethod
    def from_matrix(cls, matrix) -> "BinaryRelation":
        bits = np.asarray(matrix, dtype=bool)
        if bits.ndim != 2:
            raise StructuralError("relation matrix must be two-dimensional")
        rel = cls.__new__(cls)
        rel.n_rows, rel.n_cols = bits.shape
        rel._build(bits.copy())
        return rel

    def _build(self, bits):
        bits.setflags(write=False)
        self.bits = bits
        self.row_sets = tuple(tuple(np.flatnonzero(r).tolist()) for r in bits)
        self.col_sets = tuple(tuple(np.flatnonzero(c).tolist()) for c in bits.T)
        self.row_members = tuple(frozenset(s) for s in self.row_sets)
        self.col_members = tuple(frozenset(s) for s in self.col_sets)

    @property
    def n_pairs(self):
        return int(self.bits.sum())

    def pairs(self):
        for x, ys in enumerate(self.row_sets):
            for y in ys:
                yield x, y

    def __contains__(self, pair):
        x, y = pair
        return bool(self.bits[x, y])

    def __repr__(self):
        return f"BinaryRelation({self.n_rows}x{self.n_cols}, {self.n_pairs} pairs)"


def neighborhood(rel: BinaryRelation, x: int) -> tuple[int, ...]:
    """Columns related to row ``x``."""
    if not 0 <= x < rel.n_rows:
        raise StructuralError(f"row index {x} out of range [0, {rel.n_rows})")
    return rel.row_sets[x]


def inverse_neighborhood(rel: BinaryRelation, y: int) -> tuple[int, ...]:
    """Rows related to column ``y``."""
    if not 0 <= y < rel.n_cols:
        raise StructuralError(f"column index {y} out of range [0, {rel.n_cols})")
    return rel.col_sets[y]


@dataclass(frozen=True)
class Mmer:
    """Two information systems and the relation from the first to the second."""

    source: InformationSystem
    target: InformationSystem
    relation: BinaryRelation


class Violation(NamedTuple):
    kind: str
    location: str
    message: str

    def __str__(self):
        return f"[{self.kind}] {self.location}: {self.message}"


def _validate_ins(ins, role):
    out = []
    where = f"{role} {ins.universe_id!r}"
    if ins.n_objects < 1:
        out.append(Violation("empty", where, "universe has no objects"))
    if ins.n_attributes < 1:
        out.append(Violation("empty", where, "no attributes"))
    seen = {}
    for i, obj in enumerate(ins.objects):
        if obj in seen:
            out.append(
                Violation("duplicate-id", f"{where} row {i}",
                          f"object id {obj!r} already used at row {seen[obj]}")
            )
        else:
            seen[obj] = i
    names = {}
    for j, name in enumerate(ins.attributes):
        if name in names:
            out.append(
                Violation("duplicate-attribute", f"{where} column {j}",
                          f"attribute {name!r} already used at column {names[name]}")
            )
        else:
            names[name] = j
    if len(ins.values) != ins.n_objects:
        out.append(
            Violation("dimension", where,
                      f"{len(ins.values)} value rows for {ins.n_objects} objects")
        )
    for i, row in enumerate(ins.values):
        if len(row) != ins.n_attributes:
            out.append(
                Violation("dimension", f"{where} row {i}",
                          f"{len(row)} cells for {ins.n_attributes} attributes")
            )
        for j, v in enumerate(row):
            if v is None:
                attr = ins.attributes[j] if j < ins.n_attributes else j
                out.append(Violation("null-cell", f"{where} row {i}, column {attr}",
                                     "missing value"))
    return out


def validate_mmer(m: Mmer) -> list[Violation]:
    """Every invariant violation in ``m``; an empty list means valid."""
    out = _validate_ins(m.source, "source") + _validate_ins(m.target, "target")
    rel = m.relation
    if rel.n_rows != m.source.n_objects:
        out.append(Violation("dimension", "relation",
                             f"{rel.n_rows} rows but {m.source.n_objects} source objects"))
    if rel.n_cols != m.target.n_objects:
        out.append(Violation("dimension", "relation",
                             f"{rel.n_cols} columns but {m.target.n_objects} target objects"))
    if rel.bits.shape != (rel.n_rows, rel.n_cols):
        out.append(Violation("dimension", "relation", "bit matrix shape mismatch"))
    else:
        for x in range(rel.n_rows):
            if tuple(np.flatnonzero(rel.bits[x]).tolist()) != tuple(rel.row_sets[x]):
                out.append(Violation("inconsistent", f"relation row {x}",
                                     "row set disagrees with bit matrix"))
        for y in range(rel.n_cols):
            if tuple(np.flatnonzero(rel.bits[:, y]).tolist()) != tuple(rel.col_sets[y]):
                out.append(Violation("inconsistent", f"relation column {y}",
                                     "column set disagrees with bit matrix"))
    return out


def check_mmer(m: Mmer) -> Mmer:
    """Return ``m`` unchanged, or raise :class:`ValidationError` listing all problems."""
    if not isinstance(m, Mmer):
        raise TypeError(f"expected an Mmer, got {type(m).__name__}")
    problems = validate_mmer(m)
    if problems:
        raise ValidationError(problems)
    return m
