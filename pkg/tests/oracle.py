"""Brute-force reference implementations.

Nothing here imports the package's enumeration, measure or mining code; only
the plain data containers are read. Granules come from grouping objects on
every attribute subset, measures from the definitions applied to the raw
relation matrix.
"""
from fractions import Fraction
from itertools import combinations


def brute_granules(ins, min_coverage, max_length=None):
    """{terms tuple: frozenset extension} for every descriptor reaching min_coverage."""
    n = len(ins.objects)
    m = len(ins.attributes)
    limit = m if max_length is None else min(m, max_length)
    out = {}
    for size in range(1, limit + 1):
        for attrs in combinations(range(m), size):
            blocks = {}
            for i, row in enumerate(ins.values):
                key = tuple(row[a] for a in attrs)
                blocks.setdefault(key, set()).add(i)
            for key, members in blocks.items():
                if any(v in ins.inert_values[a] for a, v in zip(attrs, key)):
                    continue
                if Fraction(len(members), n) >= Fraction(min_coverage):
                    out[tuple(zip(attrs, key))] = frozenset(members)
    return out


def _counts(bits, lh, rh):
    return [sum(1 for y in rh if bits[x][y]) for x in lh]


def brute_tconf_K(counts, sc):
    """Largest K reached by at least max(1, floor(sc*|LH|)) objects, found by scanning K."""
    need = max(1, int(Fraction(sc) * len(counts)))  # int() floors a positive Fraction
    best = 0
    for K in range(0, max(counts) + 1):
        if sum(1 for c in counts if c >= K) >= need:
            best = K
    return best


def brute_subtype(sc, tc):
    sc, tc = Fraction(sc), Fraction(tc)
    if sc == 1 and tc == 1:
        return "complete"
    if tc == 1:
        return "left-partial"
    if sc == 1:
        return "right-partial"
    return "partial"


def brute_measures(bits, lh, rh, n_u, n_v, sc, tc):
    sc, tc = Fraction(sc), Fraction(tc)
    lh, rh = sorted(lh), sorted(rh)
    counts = _counts(bits, lh, rh)
    reach = sum(1 for c in counts if Fraction(c, len(rh)) >= tc)
    full = sum(1 for c in counts if c == len(rh))
    subtype = brute_subtype(sc, tc)
    scov = Fraction(len(lh), n_u)
    if subtype in ("complete", "right-partial"):
        supp = scov
    elif subtype == "left-partial":
        supp = Fraction(full, n_u)
    else:
        supp = Fraction(reach, n_u)
    return {
        "scov": scov,
        "tcov": Fraction(len(rh), n_v),
        "sconf": Fraction(reach, len(lh)),
        "tconf": Fraction(brute_tconf_K(counts, sc), len(rh)),
        "supp": supp,
        "subtype": subtype,
    }


def brute_rules(mmer, ms, mt, sc, tc, max_lhs_length=None, max_rhs_length=None):
    """{(lhs terms, rhs terms): measures dict} for every rule meeting all four thresholds."""
    bits = mmer.relation.bits.tolist()
    n_u, n_v = len(mmer.source.objects), len(mmer.target.objects)
    sg = brute_granules(mmer.source, ms, max_lhs_length)
    tg = brute_granules(mmer.target, mt, max_rhs_length)
    out = {}
    for ld, lh in sg.items():
        for rd, rh in tg.items():
            meas = brute_measures(bits, lh, rh, n_u, n_v, sc, tc)
            if meas["sconf"] >= Fraction(sc) and meas["tconf"] >= Fraction(tc):
                out[(ld, rd)] = meas
    return out


def ruleset_as_dict(rs):
    """Same shape as :func:`brute_rules` output, from a mined RuleSet."""
    out = {}
    for rule, ms in rs:
        out[(rule.lhs.descriptor.terms, rule.rhs.descriptor.terms)] = {
            "scov": ms.scov,
            "tcov": ms.tcov,
            "sconf": ms.sconf,
            "tconf": ms.tconf,
            "supp": ms.supp,
            "subtype": str(ms.subtype),
        }
    return out


def brute_lower_approximation(bits, X):
    n_cols = len(bits[0]) if bits else 0
    return tuple(y for y in range(n_cols) if all(bits[x][y] for x in X))


def brute_inverse_lower_approximation(bits, Y):
    return tuple(x for x in range(len(bits)) if all(bits[x][y] for y in Y))
