"""Rule measures: coverage, confidence, support and the complete / partial match
predicates.

Every measure is an exact :class:`~fractions.Fraction`. Thresholds are compared
inclusively.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .exceptions import ParameterError, StructuralError
from .model import Granule, Mmer
from .validation import ceil_times, check_threshold

__all__ = [
    "Subtype",
    "select_checker",
    "GranularRule",
    "MeasureSet",
    "link_counts",
    "source_coverage",
    "target_coverage",
    "source_confidence",
    "target_confidence",
    "is_complete_match",
    "left_partial_confidence",
    "right_partial_confidence",
    "support",
    "measure_set",
]


class Subtype(str, Enum):
    COMPLETE = "complete"
    LEFT_PARTIAL = "left-partial"
    RIGHT_PARTIAL = "right-partial"
    PARTIAL = "partial"

    def __str__(self):
        return self.value


def select_checker(sc, tc) -> Subtype:
    """Rule subtype implied by the confidence thresholds."""
    sc = check_threshold(sc, "sc")
    tc = check_threshold(tc, "tc")
    if sc == 1 and tc == 1:
        return Subtype.COMPLETE
    if tc == 1:
        return Subtype.LEFT_PARTIAL
    if sc == 1:
        return Subtype.RIGHT_PARTIAL
    return Subtype.PARTIAL


@dataclass(frozen=True)
class GranularRule:
    """``lhs`` (a source granule) implies ``rhs`` (a target granule)."""

    lhs: Granule
    rhs: Granule

    @property
    def key(self):
        return (self.lhs.descriptor, self.rhs.descriptor)


@dataclass(frozen=True)
class MeasureSet:
    scov: Fraction
    tcov: Fraction
    sconf: Fraction
    tconf: Fraction
    supp: Fraction
    subtype: Subtype

    def as_dict(self):
        return {
            "scov": self.scov,
            "tcov": self.tcov,
            "sconf": self.sconf,
            "tconf": self.tconf,
            "supp": self.supp,
        }


def _check_rule(r: GranularRule, m: Mmer):
    lh, rh = r.lhs.extension, r.rhs.extension
    if not lh or not rh:
        raise StructuralError("rule sides must have non-empty extensions")
    if lh[-1] >= m.source.n_objects or lh[0] < 0:
        raise StructuralError("left-hand extension outside the source universe")
    if rh[-1] >= m.target.n_objects or rh[0] < 0:
        raise StructuralError("right-hand extension outside the target universe")


def link_counts(r: GranularRule, m: Mmer) -> list[int]:
    """``|R(x) ∩ RH|`` for each ``x`` of the left-hand extension, in index order."""
    _check_rule(r, m)
    rows = m.relation.row_members
    rh = r.rhs.members
    return [len(rows[x] & rh) for x in r.lhs.extension]


def source_coverage(r: GranularRule, m: Mmer) -> Fraction:
    _check_rule(r, m)
    return Fraction(len(r.lhs.extension), m.source.n_objects)


def target_coverage(r: GranularRule, m: Mmer) -> Fraction:
    _check_rule(r, m)
    return Fraction(len(r.rhs.extension), m.target.n_objects)


def _count_reaching(r, m, tc):
    need = ceil_times(tc, len(r.rhs.extension))
    return sum(1 for c in link_counts(r, m) if c >= need)


def source_confidence(r: GranularRule, m: Mmer, tc) -> Fraction:
    """Fraction of left-hand objects linked to at least ``tc`` of the right-hand side."""
    tc = check_threshold(tc, "tc")
    return Fraction(_count_reaching(r, m, tc), len(r.lhs.extension))


def target_confidence(r: GranularRule, m: Mmer, sc) -> Fraction:
    """K / |RH|, K being the k-th largest link count with k = floor(sc * |LH|).

    k is raised to 1 when the product is below one.
    """
    sc = check_threshold(sc, "sc")
    counts = sorted(link_counts(r, m), reverse=True)
    k = max(1, (sc.numerator * len(counts)) // sc.denominator)
    return Fraction(counts[k - 1], len(r.rhs.extension))


def is_complete_match(r: GranularRule, m: Mmer) -> bool:
    _check_rule(r, m)
    bits = m.relation.bits
    for x in r.lhs.extension:
        row = bits[x]
        for y in r.rhs.extension:
            if not row[y]:
                return False
    return True


def _covering(r, m):
    rows = m.relation.row_members
    rh = r.rhs.members
    return sum(1 for x in r.lhs.extension if rh <= rows[x])


def left_partial_confidence(r: GranularRule, m: Mmer) -> Fraction:
    """Fraction of left-hand objects whose neighborhood contains the whole right-hand side."""
    _check_rule(r, m)
    return Fraction(_covering(r, m), len(r.lhs.extension))


def right_partial_confidence(r: GranularRule, m: Mmer) -> Fraction:
    return Fraction(min(link_counts(r, m)), len(r.rhs.extension))


def support(r: GranularRule, m: Mmer, subtype, tc=None) -> Fraction:
    """Share of the source universe backing the rule under ``subtype``."""
    subtype = Subtype(subtype)
    n_u = m.source.n_objects
    if subtype in (Subtype.COMPLETE, Subtype.RIGHT_PARTIAL):
        return source_coverage(r, m)
    if subtype is Subtype.LEFT_PARTIAL:
        _check_rule(r, m)
        return Fraction(_covering(r, m), n_u)
    if tc is None:
        raise ParameterError("support of a partial match rule needs tc")
    tc = check_threshold(tc, "tc")
    return Fraction(_count_reaching(r, m, tc), n_u)


def measure_set(r: GranularRule, m: Mmer, sc, tc, subtype=None) -> MeasureSet:
    """All measures of ``r`` under thresholds ``sc``/``tc``.

    ``sconf`` is the source confidence at ``tc`` and ``tconf`` the target
    confidence at ``sc``; at ``tc = 1`` and ``sc = 1`` these reduce to the
    left- and right-partial forms.
    """
    sc = check_threshold(sc, "sc")
    tc = check_threshold(tc, "tc")
    subtype = select_checker(sc, tc) if subtype is None else Subtype(subtype)
    return MeasureSet(
        scov=source_coverage(r, m),
        tcov=target_coverage(r, m),
        sconf=source_confidence(r, m, tc),
        tconf=target_confidence(r, m, sc),
        supp=support(r, m, subtype, tc),
        subtype=subtype,
    )
