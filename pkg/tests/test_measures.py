from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mmers, thresholds
from granular_rules import (
    GranularRule,
    ParameterError,
    StructuralError,
    Subtype,
    enumerate_granules,
    is_complete_match,
    left_partial_confidence,
    make_granule,
    measure_set,
    right_partial_confidence,
    select_checker,
    source_confidence,
    source_coverage,
    support,
    target_confidence,
    target_coverage,
)
from granular_rules.measures import link_counts
from oracle import brute_measures


@pytest.fixture
def men_alcohol(men, alcohol):
    return GranularRule(men, alcohol)


class TestWorkedExample:
    def test_coverages(self, mmer, men_alcohol):
        assert source_coverage(men_alcohol, mmer) == Fraction(3, 5)
        assert target_coverage(men_alcohol, mmer) == Fraction(1, 3)

    def test_link_counts(self, mmer, men_alcohol):
        assert link_counts(men_alcohol, mmer) == [1, 2, 2]

    def test_source_confidence(self, mmer, men_alcohol):
        assert source_confidence(men_alcohol, mmer, 0.5) == 1
        assert source_confidence(men_alcohol, mmer, 1) == Fraction(2, 3)
        assert source_confidence(men_alcohol, mmer, Fraction(1, 10**9)) == 1

    def test_target_confidence(self, mmer, men_alcohol):
        assert target_confidence(men_alcohol, mmer, 1) == Fraction(1, 2)
        assert target_confidence(men_alcohol, mmer, 0.6) == 1

    def test_partial_forms(self, mmer, men_alcohol):
        assert left_partial_confidence(men_alcohol, mmer) == Fraction(2, 3)
        assert right_partial_confidence(men_alcohol, mmer) == Fraction(1, 2)
        assert not is_complete_match(men_alcohol, mmer)

    def test_support(self, mmer, men_alcohol):
        assert support(men_alcohol, mmer, "left-partial") == Fraction(2, 5)
        assert support(men_alcohol, mmer, "right-partial") == Fraction(3, 5)
        assert support(men_alcohol, mmer, "complete") == Fraction(3, 5)
        assert support(men_alcohol, mmer, "partial", tc=0.5) == Fraction(3, 5)
        with pytest.raises(ParameterError):
            support(men_alcohol, mmer, "partial")

    def test_complete_match(self, mmer):
        r = GranularRule(make_granule(mmer.source, {"Country": "Japan"}),
                         make_granule(mmer.target, {"Name": "Beef"}))
        assert is_complete_match(r, mmer)
        assert left_partial_confidence(r, mmer) == 1
        assert right_partial_confidence(r, mmer) == 1

    def test_coverage_of_smaller_granules(self, mmer):
        r = GranularRule(make_granule(mmer.source, {"Country": "Japan"}),
                         make_granule(mmer.target, {"Price": "1..9"}))
        assert source_coverage(r, mmer) == Fraction(1, 5)
        assert target_coverage(r, mmer) == Fraction(1, 2)

    def test_whole_universe_sides(self, mmer):
        sg = enumerate_granules(mmer.source, 1, include_empty=True)
        tg = enumerate_granules(mmer.target, 1, include_empty=True)
        r = GranularRule(sg[0], tg[0])
        assert source_coverage(r, mmer) == 1
        assert target_coverage(r, mmer) == 1

    def test_no_links(self, mmer):
        # nobody bought pork
        r = GranularRule(make_granule(mmer.source, {"Gender": "Female"}),
                         make_granule(mmer.target, {"Name": "Pork"}))
        for sc in (Fraction(1, 100), Fraction(1, 2), 1):
            assert target_confidence(r, mmer, sc) == 0
        assert right_partial_confidence(r, mmer) == 0
        assert left_partial_confidence(r, mmer) == 0
        assert source_confidence(r, mmer, Fraction(1, 10**6)) == 0

    def test_measure_set(self, mmer, men_alcohol):
        ms = measure_set(men_alcohol, mmer, 1, 0.5)
        assert ms.subtype is Subtype.RIGHT_PARTIAL
        assert ms.as_dict() == {
            "scov": Fraction(3, 5), "tcov": Fraction(1, 3), "sconf": 1,
            "tconf": Fraction(1, 2), "supp": Fraction(3, 5),
        }

    @pytest.mark.parametrize("bad", [0, -1, 1.01])
    def test_bad_thresholds(self, mmer, men_alcohol, bad):
        with pytest.raises(ParameterError):
            source_confidence(men_alcohol, mmer, bad)
        with pytest.raises(ParameterError):
            target_confidence(men_alcohol, mmer, bad)

    def test_granules_from_wrong_universe(self, mmer, alcohol):
        # six products, five customers: p6 is not a valid source index
        with pytest.raises(StructuralError):
            source_coverage(GranularRule(make_granule(mmer.target, {"Name": "Wine"}), alcohol), mmer)


@pytest.mark.parametrize("sc,tc,expected", [
    (1, 1, "complete"),
    (0.001, 1, "left-partial"),
    (1, 0.001, "right-partial"),
    (0.95, 0.95, "partial"),
    ("1.0", "1", "complete"),
])
def test_select_checker(sc, tc, expected):
    assert select_checker(sc, tc) == Subtype(expected)


def test_select_checker_rejects_zero():
    with pytest.raises(ParameterError):
        select_checker(0, 1)


# --- random rules ----------------------------------------------------------


@st.composite
def rules(draw):
    m = draw(mmers(max_objects=10, max_attrs=3))
    sg = enumerate_granules(m.source, Fraction(1, 100))
    tg = enumerate_granules(m.target, Fraction(1, 100))
    g = draw(st.sampled_from(sg.granules))
    g2 = draw(st.sampled_from(tg.granules))
    return m, GranularRule(g, g2)


@settings(max_examples=200, deadline=None)
@given(rules(), thresholds, thresholds)
def test_matches_brute_force(mr, sc, tc):
    m, r = mr
    bits = m.relation.bits.tolist()
    ref = brute_measures(bits, r.lhs.extension, r.rhs.extension,
                         m.source.n_objects, m.target.n_objects, sc, tc)
    got = measure_set(r, m, sc, tc)
    assert {**got.as_dict(), "subtype": str(got.subtype)} == ref


@settings(max_examples=200, deadline=None)
@given(rules(), thresholds)
def test_support_is_coverage_times_confidence(mr, t):
    m, r = mr
    scov = source_coverage(r, m)
    assert support(r, m, "complete") == scov * 1
    assert support(r, m, "right-partial") == scov * 1
    assert support(r, m, "left-partial") == scov * left_partial_confidence(r, m)
    assert support(r, m, "partial", tc=t) == scov * source_confidence(r, m, t)


@settings(max_examples=150, deadline=None)
@given(rules())
def test_confidences_non_increasing(mr):
    m, r = mr
    grid = [Fraction(k, 10) for k in range(1, 11)]
    s = [source_confidence(r, m, t) for t in grid]
    t = [target_confidence(r, m, v) for v in grid]
    assert all(a >= b for a, b in zip(s, s[1:]))
    assert all(a >= b for a, b in zip(t, t[1:]))


@settings(max_examples=200, deadline=None)
@given(rules())
def test_complete_match_equivalences(mr):
    m, r = mr
    complete = is_complete_match(r, m)
    assert complete == (left_partial_confidence(r, m) == 1)
    assert complete == (right_partial_confidence(r, m) == 1)
    assert complete == (source_confidence(r, m, 1) == 1)
    assert left_partial_confidence(r, m) == source_confidence(r, m, 1)
    assert right_partial_confidence(r, m) == target_confidence(r, m, 1)


@settings(max_examples=200, deadline=None)
@given(rules(), thresholds)
def test_k_boundary(mr, sc):
    m, r = mr
    counts = link_counts(r, m)
    n = len(counts)
    K = target_confidence(r, m, sc) * len(r.rhs.extension)
    assert K.denominator == 1
    k = max(1, int(sc * n))
    # K is reached by at least k objects and K + 1 by fewer than k
    assert sum(c >= K for c in counts) >= k
    assert sum(c >= K + 1 for c in counts) < k
    if (sc * n).denominator == 1:
        # no rounding involved: the boundary holds against sc * |LH| itself
        assert sum(c >= K for c in counts) >= sc * n
        assert sum(c >= K + 1 for c in counts) < sc * n


@settings(max_examples=200, deadline=None)
@given(rules(), thresholds, thresholds)
def test_passing_source_test_implies_target_test(mr, sc, tc):
    m, r = mr
    if source_confidence(r, m, tc) >= sc:
        assert target_confidence(r, m, sc) >= tc


def _refinements(m, sg, g):
    return [h for h in sg if g.descriptor.issubset(h.descriptor) and h != g]


@settings(max_examples=100, deadline=None)
@given(mmers(max_objects=8, max_attrs=3), st.data())
def test_refining_lhs_keeps_right_partial_confidence(m, data):
    sg = enumerate_granules(m.source, Fraction(1, 100))
    tg = enumerate_granules(m.target, Fraction(1, 100))
    g = data.draw(st.sampled_from(sg.granules))
    g2 = data.draw(st.sampled_from(tg.granules))
    base = right_partial_confidence(GranularRule(g, g2), m)
    for h in _refinements(m, sg, g):
        assert right_partial_confidence(GranularRule(h, g2), m) >= base


@settings(max_examples=100, deadline=None)
@given(mmers(max_objects=8, max_attrs=3))
def test_complete_match_inherited_by_finer_rules(m):
    sg = enumerate_granules(m.source, Fraction(1, 100))
    tg = enumerate_granules(m.target, Fraction(1, 100))
    for g in sg:
        for g2 in tg:
            if not is_complete_match(GranularRule(g, g2), m):
                continue
            for h in [g, *_refinements(m, sg, g)]:
                for h2 in [g2, *_refinements(m, tg, g2)]:
                    assert is_complete_match(GranularRule(h, h2), m)


def test_k_uses_floor_below_one(mmer, men_alcohol):
    # 0.2 * 3 men rounds down to zero and is raised to the single best man
    assert target_confidence(men_alcohol, mmer, 0.2) == 1
