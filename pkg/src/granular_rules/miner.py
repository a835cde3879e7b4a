"""Granular association rule mining.

Three algorithms are provided. ``sandwich`` enumerates frequent granules on
both sides and checks every pair with a checker chosen from the confidence
thresholds. ``forward`` and ``backward`` handle complete match rules only,
through the two-universe lower approximation.

Basic operations are counted with a fixed cost model so runs are comparable:

* a membership probe of one element into a set costs 1;
* a subset test ``A ⊆ B`` costs the number of elements of ``A`` probed up to
  and including the first miss (``|A|`` when it succeeds);
* an intersection size ``|A ∩ B|`` costs ``min(|A|, |B|)``;
* every threshold comparison costs 1.

Only rule checking (and the lower approximations it depends on) is counted.
Granule enumeration and the measures of emitted rules are not.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from joblib import Parallel, delayed, effective_n_jobs
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .exceptions import ParameterError
from .granules import GranuleSet, enumerate_granules
from .measures import GranularRule, MeasureSet, Subtype, measure_set, select_checker
from .model import BinaryRelation, Descriptor, Granule, Mmer, check_mmer
from .validation import ceil_times, check_max_length, check_threshold

__all__ = [
    "ALGORITHMS",
    "MiningConfig",
    "OpCounter",
    "RuleSet",
    "FailureCache",
    "select_checker",
    "check_pair",
    "lower_approximation",
    "inverse_lower_approximation",
    "prune_complete",
    "mine",
    "mine_sandwich",
    "mine_forward",
    "mine_backward",
    "GranularRuleMiner",
]

ALGORITHMS = ("sandwich", "forward", "backward")


@dataclass(frozen=True)
class MiningConfig:
    ms: Fraction
    mt: Fraction
    sc: Fraction = Fraction(1)
    tc: Fraction = Fraction(1)
    algorithm: str = "sandwich"
    pruning: bool = False
    max_lhs_length: int | None = None
    max_rhs_length: int | None = None
    include_empty: bool = False

    def __post_init__(self):
        for name in ("ms", "mt", "sc", "tc"):
            object.__setattr__(self, name, check_threshold(getattr(self, name), name))
        if self.algorithm not in ALGORITHMS:
            raise ParameterError(
                f"algorithm must be one of {', '.join(ALGORITHMS)}, got {self.algorithm!r}"
            )
        if self.algorithm != "sandwich" and (self.sc != 1 or self.tc != 1):
            raise ParameterError(
                f"the {self.algorithm} algorithm mines complete match rules only; "
                "it requires sc = tc = 1"
            )
        object.__setattr__(
            self, "max_lhs_length", check_max_length(self.max_lhs_length, "max_lhs_length")
        )
        object.__setattr__(
            self, "max_rhs_length", check_max_length(self.max_rhs_length, "max_rhs_length")
        )

    @property
    def subtype(self) -> Subtype:
        return select_checker(self.sc, self.tc)


@dataclass
class OpCounter:
    basic_ops: int = 0
    rules_checked: int = 0
    rules_pruned: int = 0
    rules_emitted: int = 0
    wall_time: float = 0.0

    def merge(self, other: "OpCounter") -> "OpCounter":
        self.basic_ops += other.basic_ops
        self.rules_checked += other.rules_checked
        self.rules_pruned += other.rules_pruned
        self.rules_emitted += other.rules_emitted
        return self


@dataclass
class RuleSet:
    """Mined rules with their measures, sorted by lhs then rhs descriptor."""

    rules: tuple
    mmer: Mmer = field(repr=False)
    config: MiningConfig
    counter: OpCounter = field(default_factory=OpCounter)
    source_granules: GranuleSet | None = field(default=None, repr=False)
    target_granules: GranuleSet | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __getitem__(self, i):
        return self.rules[i]

    def keys(self):
        return [r.key for r, _ in self.rules]

    def find(self, lhs, rhs):
        """Measures of the rule ``lhs => rhs``, or None if it was not mined.

        Each side is a :class:`Descriptor` or an attribute-name to value mapping.
        """
        if not isinstance(lhs, Descriptor):
            lhs = self.mmer.source.descriptor(lhs)
        if not isinstance(rhs, Descriptor):
            rhs = self.mmer.target.descriptor(rhs)
        for rule, ms in self.rules:
            if rule.key == (lhs, rhs):
                return ms
        return None

    def signature(self):
        """Hashable content of the rule list; two runs agree iff signatures match."""
        return tuple(
            (r.lhs.descriptor.terms, r.rhs.descriptor.terms, ms) for r, ms in self.rules
        )

    def __eq__(self, other):
        if not isinstance(other, RuleSet):
            return NotImplemented
        return self.signature() == other.signature()


def _sorted_entries(entries, m: Mmer):
    src, tgt = m.source, m.target
    return tuple(
        sorted(
            entries,
            key=lambda e: (src.sort_key(e[0].lhs.descriptor), tgt.sort_key(e[0].rhs.descriptor)),
        )
    )


# --- checkers -------------------------------------------------------------


def _subset_probe(seq, seq_set, target):
    """Is ``seq`` contained in ``target``? Returns ``(result, probes)``."""
    if seq_set <= target:
        return True, len(seq)
    for i, y in enumerate(seq):
        if y not in target:
            return False, i + 1
    raise AssertionError("unreachable")


def _check_complete(lh, rh, rows, sc, tc):
    ops = 0
    seq, seq_set = rh.extension, rh.members
    for x in lh.extension:
        ok, k = _subset_probe(seq, seq_set, rows[x])
        ops += k
        if not ok:
            return False, ops
    return True, ops


def _check_left_partial(lh, rh, rows, sc, tc):
    need = ceil_times(sc, len(lh.extension))
    seq, seq_set = rh.extension, rh.members
    hits, remaining, ops = 0, len(lh.extension), 0
    for x in lh.extension:
        ok, k = _subset_probe(seq, seq_set, rows[x])
        ops += k + 1
        remaining -= 1
        if ok:
            hits += 1
            if hits >= need:
                return True, ops
        elif hits + remaining < need:
            return False, ops
    return hits >= need, ops


def _check_right_partial(lh, rh, rows, sc, tc):
    n_rh = len(rh.extension)
    need = ceil_times(tc, n_rh)
    rh_set = rh.members
    ops = 0
    for x in lh.extension:
        row = rows[x]
        if len(row) < need:
            return False, ops + 1
        ops += min(len(row), n_rh) + 1
        if len(row & rh_set) < need:
            return False, ops
    return True, ops


def _check_partial(lh, rh, rows, sc, tc):
    n_rh = len(rh.extension)
    need_t = ceil_times(tc, n_rh)
    need_s = ceil_times(sc, len(lh.extension))
    rh_set = rh.members
    hits, ops = 0, 0
    for x in lh.extension:
        row = rows[x]
        ops += min(len(row), n_rh) + 1
        if len(row & rh_set) >= need_t:
            hits += 1
    return hits >= need_s, ops + 1


_CHECKERS = {
    Subtype.COMPLETE: _check_complete,
    Subtype.LEFT_PARTIAL: _check_left_partial,
    Subtype.RIGHT_PARTIAL: _check_right_partial,
    Subtype.PARTIAL: _check_partial,
}


def check_pair(g: Granule, g2: Granule, m: Mmer, checker, sc, tc, counter=None):
    """Run one checker on the rule ``g => g2``.

    Returns ``(accepted, measures)``; ``measures`` is None when rejected.
    """
    sc = check_threshold(sc, "sc")
    tc = check_threshold(tc, "tc")
    checker = Subtype(checker)
    ok, ops = _CHECKERS[checker](g, g2, m.relation.row_members, sc, tc)
    if counter is not None:
        counter.basic_ops += ops
        counter.rules_checked += 1
    if not ok:
        return False, None
    rule = GranularRule(g, g2)
    measures = measure_set(rule, m, sc, tc, checker)
    # sconf >= sc already forces tconf >= tc; kept to state both conditions
    if measures.sconf < sc or measures.tconf < tc:
        return False, None
    return True, measures


# --- lower approximations -------------------------------------------------


def _intersect_all(index_sets, members, counter):
    """Intersection of ``members[i]`` over ``i`` in ``index_sets``."""
    it = iter(index_sets)
    acc = set(members[next(it)])
    ops = 0
    for i in it:
        if not acc:
            break
        other = members[i]
        ops += min(len(acc), len(other))
        acc &= other
    if counter is not None:
        counter.basic_ops += ops
    return acc


def lower_approximation(rel: BinaryRelation, X, counter=None) -> tuple[int, ...]:
    """Columns related to every row of ``X``."""
    X = tuple(X)
    if not X:
        raise ParameterError("lower approximation of an empty row set is not defined here")
    return tuple(sorted(_intersect_all(X, rel.row_members, counter)))


def inverse_lower_approximation(rel: BinaryRelation, Y, counter=None) -> tuple[int, ...]:
    """Rows related to every column of ``Y``."""
    Y = tuple(Y)
    if not Y:
        raise ParameterError("lower approximation of an empty column set is not defined here")
    return tuple(sorted(_intersect_all(Y, rel.col_members, counter)))


# --- pruning --------------------------------------------------------------


class FailureCache:
    """Pairs of descriptors known to fail the complete (or right-partial) check.

    A failed complete match also fails for every pair that is coarser on
    either side, so a failure is pushed to all one-term-shorter parents.
    For right-partial checks only the left-hand side may be coarsened.
    """

    def __init__(self, both_sides=True):
        self.both_sides = both_sides
        self._failed = set()

    def __contains__(self, pair):
        return pair in self._failed

    def __len__(self):
        return len(self._failed)

    def record(self, lhs, rhs):
        add = self._failed.add
        for p in lhs.parents():
            add((p, rhs))
        if self.both_sides:
            for p in rhs.parents():
                add((lhs, p))


def prune_complete(pairs, failure_cache: FailureCache):
    """Yield the ``(g, g2)`` pairs not already known to fail.

    Pairs must arrive finest-first so that a pair's refinements are checked
    before it. Known failures are recorded again so they keep propagating.
    """
    for g, g2 in pairs:
        key = (g.descriptor, g2.descriptor)
        if key in failure_cache:
            failure_cache.record(*key)
            continue
        yield g, g2


# --- algorithms -----------------------------------------------------------


def _granule_sets(m, cfg):
    sg = enumerate_granules(m.source, cfg.ms, cfg.max_lhs_length, cfg.include_empty)
    tg = enumerate_granules(m.target, cfg.mt, cfg.max_rhs_length, cfg.include_empty)
    return sg, tg


def _sandwich_chunk(lhs_granules, tg, m, subtype, sc, tc):
    counter = OpCounter()
    checker = _CHECKERS[subtype]
    rows = m.relation.row_members
    out = []
    for g in lhs_granules:
        for g2 in tg:
            ok, ops = checker(g, g2, rows, sc, tc)
            counter.basic_ops += ops
            counter.rules_checked += 1
            if ok:
                rule = GranularRule(g, g2)
                out.append((rule, measure_set(rule, m, sc, tc, subtype)))
    return out, counter


def _sandwich_pruned(sg, tg, m, subtype, sc, tc):
    counter = OpCounter()
    checker = _CHECKERS[subtype]
    rows = m.relation.row_members
    cache = FailureCache(both_sides=subtype is Subtype.COMPLETE)
    lhs_order = sorted(sg, key=lambda g: -len(g.descriptor))
    rhs_order = sorted(tg, key=lambda g: -len(g.descriptor))
    pairs = ((g, g2) for g in lhs_order for g2 in rhs_order)
    out = []
    n_pairs = len(sg) * len(tg)
    for g, g2 in prune_complete(pairs, cache):
        ok, ops = checker(g, g2, rows, sc, tc)
        counter.basic_ops += ops
        counter.rules_checked += 1
        if ok:
            rule = GranularRule(g, g2)
            out.append((rule, measure_set(rule, m, sc, tc, subtype)))
        else:
            cache.record(g.descriptor, g2.descriptor)
    counter.rules_pruned = n_pairs - counter.rules_checked
    return out, counter


def mine_sandwich(m: Mmer, cfg: MiningConfig, n_jobs=None) -> RuleSet:
    """Check every (source granule, target granule) pair.

    Pairs are visited source-major. With ``cfg.pruning`` and a complete or
    right-partial checker, failures are propagated to coarser pairs and those
    are skipped; other checkers ignore the flag. ``n_jobs`` splits the source
    granules across workers when pruning is off; results are merged and sorted
    so the output does not depend on it.
    """
    start = time.perf_counter()
    sg, tg = _granule_sets(m, cfg)
    subtype = cfg.subtype
    sc, tc = cfg.sc, cfg.tc
    prunable = subtype in (Subtype.COMPLETE, Subtype.RIGHT_PARTIAL)
    if cfg.pruning and prunable:
        entries, counter = _sandwich_pruned(sg, tg, m, subtype, sc, tc)
    elif n_jobs in (None, 1) or len(sg) < 2:
        entries, counter = _sandwich_chunk(sg.granules, tg, m, subtype, sc, tc)
    else:
        n_chunks = min(len(sg), 4 * effective_n_jobs(n_jobs))
        chunks = [sg.granules[i::n_chunks] for i in range(n_chunks)]
        results = Parallel(n_jobs=n_jobs)(
            delayed(_sandwich_chunk)(c, tg, m, subtype, sc, tc) for c in chunks
        )
        entries, counter = [], OpCounter()
        for part, c in results:
            entries.extend(part)
            counter.merge(c)
    counter.rules_emitted = len(entries)
    counter.wall_time = time.perf_counter() - start
    return RuleSet(_sorted_entries(entries, m), m, cfg, counter, sg, tg)


def _complete_cfg(ms, mt, algorithm, max_lhs_length, max_rhs_length, include_empty):
    return MiningConfig(
        ms, mt, 1, 1, algorithm,
        max_lhs_length=max_lhs_length,
        max_rhs_length=max_rhs_length,
        include_empty=include_empty,
    )


def _complete_measures(rule, m):
    return measure_set(rule, m, 1, 1, Subtype.COMPLETE)


def mine_forward(m: Mmer, ms, mt, max_lhs_length=None, max_rhs_length=None,
                 include_empty=False) -> RuleSet:
    """Complete match rules, source side first.

    For each source granule the targets related to all of its objects are
    computed once; a target granule forms a rule iff its extension lies inside.
    """
    cfg = _complete_cfg(ms, mt, "forward", max_lhs_length, max_rhs_length, include_empty)
    return _mine_complete(m, cfg, forward=True)


def mine_backward(m: Mmer, ms, mt, max_lhs_length=None, max_rhs_length=None,
                  include_empty=False) -> RuleSet:
    """Complete match rules, target side first (dual of :func:`mine_forward`)."""
    cfg = _complete_cfg(ms, mt, "backward", max_lhs_length, max_rhs_length, include_empty)
    return _mine_complete(m, cfg, forward=False)


def _mine_complete(m, cfg, forward):
    start = time.perf_counter()
    sg, tg = _granule_sets(m, cfg)
    counter = OpCounter()
    rel = m.relation
    outer, inner = (sg, tg) if forward else (tg, sg)
    approx = lower_approximation if forward else inverse_lower_approximation
    entries = []
    for g in outer:
        allowed = frozenset(approx(rel, g.extension, counter))
        for h in inner:
            counter.rules_checked += 1
            if len(h.extension) > len(allowed):
                counter.basic_ops += 1
                continue
            ok, k = _subset_probe(h.extension, h.members, allowed)
            counter.basic_ops += k
            if ok:
                rule = GranularRule(g, h) if forward else GranularRule(h, g)
                entries.append((rule, _complete_measures(rule, m)))
    counter.rules_emitted = len(entries)
    counter.wall_time = time.perf_counter() - start
    return RuleSet(_sorted_entries(entries, m), m, cfg, counter, sg, tg)


def mine(m: Mmer, cfg: MiningConfig, n_jobs=None) -> RuleSet:
    """Dispatch on ``cfg.algorithm``."""
    if cfg.algorithm == "sandwich":
        return mine_sandwich(m, cfg, n_jobs=n_jobs)
    if cfg.algorithm == "forward":
        return _mine_complete(m, cfg, forward=True)
    return _mine_complete(m, cfg, forward=False)


class GranularRuleMiner(BaseEstimator):
    """Estimator front end for the miners.

    ``fit`` takes an :class:`~granular_rules.model.Mmer` and stores the mined
    :class:`RuleSet` in ``rules_`` and its operation counts in ``op_counter_``.

    Examples
    --------
    >>> miner = GranularRuleMiner(ms=0.3, mt=0.3, sc=1.0, tc=0.5)  # doctest: +SKIP
    >>> miner.fit(mmer).rules_                                      # doctest: +SKIP
    """

    def __init__(self, ms=0.1, mt=0.1, sc=1.0, tc=1.0, algorithm="sandwich",
                 pruning=False, max_lhs_length=None, max_rhs_length=None,
                 include_empty=False, n_jobs=None):
        self.ms = ms
        self.mt = mt
        self.sc = sc
        self.tc = tc
        self.algorithm = algorithm
        self.pruning = pruning
        self.max_lhs_length = max_lhs_length
        self.max_rhs_length = max_rhs_length
        self.include_empty = include_empty
        self.n_jobs = n_jobs

    def _config(self):
        return MiningConfig(
            self.ms, self.mt, self.sc, self.tc, self.algorithm, bool(self.pruning),
            self.max_lhs_length, self.max_rhs_length, bool(self.include_empty),
        )

    def fit(self, X: Mmer, y=None):
        cfg = self._config()
        check_mmer(X)
        rs = mine(X, cfg, n_jobs=self.n_jobs)
        self.config_ = cfg
        self.subtype_ = cfg.subtype
        self.rules_ = rs
        self.op_counter_ = rs.counter
        self.source_granules_ = rs.source_granules
        self.target_granules_ = rs.target_granules
        self.n_rules_ = len(rs)
        return self

    def measures(self, lhs, rhs) -> MeasureSet | None:
        """Measures of the mined rule ``lhs => rhs`` (descriptors), if present."""
        check_is_fitted(self, "rules_")
        return self.rules_.find(lhs, rhs)
