"""Level-wise (Apriori) enumeration of the granules of one information system
whose coverage reaches a threshold."""
from __future__ import annotations

from collections import defaultdict

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import ParameterError, StructuralError
from .model import Descriptor, Granule, InformationSystem, extension
from .validation import ceil_times, check_max_length, check_threshold

__all__ = ["GranuleSet", "enumerate_granules", "join_candidates", "GranuleEnumerator"]


class GranuleSet:
    """Frequent granules of one universe, in canonical order.

    Canonical order is by descriptor length, then by (attribute index, value
    rank) term by term, where value rank is first-appearance order in the
    table.
    """

    def __init__(self, granules, ins: InformationSystem, min_coverage, max_length=None):
        self.granules = tuple(granules)
        self.universe_id = ins.universe_id
        self.universe_size = ins.n_objects
        self.min_coverage = min_coverage
        self.max_length = max_length
        self.index = {g.descriptor: i for i, g in enumerate(self.granules)}

    def __len__(self):
        return len(self.granules)

    def __iter__(self):
        return iter(self.granules)

    def __getitem__(self, i):
        return self.granules[i]

    def __contains__(self, item):
        d = item.descriptor if isinstance(item, Granule) else item
        return d in self.index

    def get(self, descriptor, default=None):
        i = self.index.get(descriptor)
        return default if i is None else self.granules[i]

    def level(self, length):
        return [g for g in self.granules if len(g.descriptor) == length]

    @property
    def levels(self):
        out = defaultdict(list)
        for g in self.granules:
            out[len(g.descriptor)].append(g)
        return dict(out)

    def __repr__(self):
        return (
            f"GranuleSet({self.universe_id!r}, {len(self)} granules, "
            f"min_coverage={self.min_coverage})"
        )


def _join(level):
    """Apriori join of equal-length granules sharing all but the last term.

    Yields ``(candidate, left_parent, right_parent)``; no subset pruning here.
    """
    groups = defaultdict(list)
    for g in level:
        groups[g.descriptor.terms[:-1]].append(g)
    for members in groups.values():
        for i, gi in enumerate(members):
            ai = gi.descriptor.terms[-1][0]
            for gj in members[i + 1 :]:
                aj = gj.descriptor.terms[-1][0]
                if ai == aj:
                    continue
                if ai < aj:
                    yield Descriptor(gi.descriptor.terms + gj.descriptor.terms[-1:]), gi, gj
                else:
                    yield Descriptor(gj.descriptor.terms + gi.descriptor.terms[-1:]), gj, gi


def _all_parents_present(d, present):
    return all(p in present for p in d.parents())


def join_candidates(level) -> list[Descriptor]:
    """Length-(L+1) candidates from a level of length-L granules.

    A candidate is kept only if each of its length-L sub-descriptors is in
    ``level``.
    """
    level = list(level)
    if not level:
        return []
    lengths = {len(g.descriptor) for g in level}
    if len(lengths) > 1:
        raise StructuralError(f"mixed descriptor lengths in one level: {sorted(lengths)}")
    if lengths == {0}:
        raise StructuralError("cannot join the empty descriptor")
    present = {g.descriptor for g in level}
    return [d for d, _, _ in _join(level) if _all_parents_present(d, present)]


def _intersect(a: Granule, b: Granule):
    if len(a.extension) > len(b.extension):
        a, b = b, a
    bm = b.members
    return tuple(x for x in a.extension if x in bm)


def enumerate_granules(
    ins: InformationSystem,
    min_coverage,
    max_length=None,
    include_empty=False,
) -> GranuleSet:
    """All granules of ``ins`` with coverage >= ``min_coverage``.

    Level 1 is counted directly from the table; level L+1 joins level L,
    drops candidates with an infrequent sub-descriptor, and takes the
    extension as the intersection of the two joined parents. ``max_length``
    caps the descriptor length. With ``include_empty`` the length-0
    descriptor (the whole universe) is emitted first.
    """
    mc = check_threshold(min_coverage, "min_coverage")
    max_length = check_max_length(max_length)
    n = ins.n_objects
    if n == 0:
        raise ParameterError(f"universe {ins.universe_id!r} is empty")
    need = ceil_times(mc, n)
    limit = ins.n_attributes if max_length is None else min(max_length, ins.n_attributes)

    out = []
    if include_empty:
        out.append(Granule(Descriptor(), range(n), n))

    level = []
    if limit >= 1:
        for a in range(ins.n_attributes):
            blocks = defaultdict(list)
            for i, row in enumerate(ins.values):
                blocks[row[a]].append(i)
            inert = ins.inert_values[a]
            for v in ins.value_order(a):
                if v in inert:
                    continue
                ext = blocks[v]
                if len(ext) >= need:
                    level.append(Granule(Descriptor([(a, v)]), ext, n))

    length = 1
    while level:
        out.extend(level)
        if length >= limit:
            break
        present = {g.descriptor for g in level}
        nxt = []
        for d, gi, gj in _join(level):
            if not _all_parents_present(d, present):
                continue
            ext = _intersect(gi, gj)
            if len(ext) >= need:
                nxt.append(Granule(d, ext, n))
        nxt.sort(key=lambda g: ins.sort_key(g.descriptor))
        level = nxt
        length += 1

    return GranuleSet(out, ins, mc, max_length)


class GranuleEnumerator(TransformerMixin, BaseEstimator):
    """Estimator wrapper around :func:`enumerate_granules`.

    ``fit`` mines the frequent granules of an information system;
    ``transform`` returns the boolean object-by-granule membership matrix of
    another table over the same attributes.
    """

    def __init__(self, min_coverage=0.1, max_length=None, include_empty=False):
        self.min_coverage = min_coverage
        self.max_length = max_length
        self.include_empty = include_empty

    def fit(self, X: InformationSystem, y=None):
        if not isinstance(X, InformationSystem):
            raise TypeError(f"expected an InformationSystem, got {type(X).__name__}")
        self.granules_ = enumerate_granules(
            X, self.min_coverage, self.max_length, self.include_empty
        )
        self.attributes_ = X.attributes
        self.n_granules_ = len(self.granules_)
        return self

    def transform(self, X: InformationSystem):
        check_is_fitted(self, "granules_")
        if X.attributes != self.attributes_:
            raise StructuralError("attributes differ from the table seen in fit")
        out = np.zeros((X.n_objects, self.n_granules_), dtype=bool)
        for j, g in enumerate(self.granules_):
            out[list(extension(X, g.descriptor)), j] = True
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "granules_")
        names = self.attributes_
        return np.array(
            [
                " & ".join(f"{names[a]}={v}" for a, v in g.descriptor.terms) or "*"
                for g in self.granules_
            ],
            dtype=object,
        )
