"""Rendering and reading rule sets, and confidence tradeoff curves."""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .exceptions import DataError
from .measures import (
    GranularRule,
    MeasureSet,
    Subtype,
    source_confidence,
    target_confidence,
)
from .miner import RuleSet
from .model import Descriptor, Granule, Mmer, extension
from .validation import check_threshold

__all__ = [
    "MEASURES",
    "format_decimal",
    "rule_records",
    "emit_rules",
    "load_rules",
    "parse_descriptor",
    "tradeoff_curve",
    "target_tradeoff_curve",
    "write_curve_csv",
]

MEASURES = ("scov", "tcov", "sconf", "tconf", "supp")
PRECISION = 4


def format_decimal(value: Fraction, places=PRECISION) -> str:
    """Round half up to a fixed number of places without going through float."""
    scale = 10**places
    q = Fraction(value) * scale
    n = (q.numerator * 2 + q.denominator) // (2 * q.denominator)
    sign = "-" if n < 0 else ""
    n = abs(n)
    return f"{sign}{n // scale}.{n % scale:0{places}d}"


def _terms(ins, d):
    return [{"attribute": ins.attributes[a], "value": v} for a, v in d.terms]


def rule_records(rs: RuleSet) -> list[dict]:
    """Plain-dict records, one per rule, in rule-set order."""
    m = rs.mmer
    out = []
    for rule, ms in rs:
        rec = {
            "lhs": _terms(m.source, rule.lhs.descriptor),
            "rhs": _terms(m.target, rule.rhs.descriptor),
        }
        for name in MEASURES:
            v = getattr(ms, name)
            rec[name] = {
                "decimal": format_decimal(v),
                "numerator": v.numerator,
                "denominator": v.denominator,
            }
        rec["subtype"] = str(ms.subtype)
        out.append(rec)
    return out


def _text_line(rs, rule, ms):
    m = rs.mmer
    lhs = m.source.render(rule.lhs.descriptor) or "⊤"
    rhs = m.target.render(rule.rhs.descriptor) or "⊤"
    vals = ", ".join(f"{k} = {format_decimal(getattr(ms, k))}" for k in MEASURES)
    return f"{lhs} ⇒ {rhs} [{vals}] ({ms.subtype})"


def _plain(ins, d):
    return " & ".join(f"{ins.attributes[a]}={v}" for a, v in d.terms)


def emit_rules(rs: RuleSet, fmt="text", sink=None) -> str:
    """Serialize ``rs`` as ``text``, ``json`` or ``csv``.

    The result is returned and, if ``sink`` is given, also written to it.
    JSON carries each measure as a 4-place decimal plus its exact numerator
    and denominator, so :func:`load_rules` can restore it losslessly.
    """
    if fmt == "json":
        body = json.dumps(rule_records(rs), indent=2, ensure_ascii=False) + "\n"
    elif fmt == "text":
        body = "".join(_text_line(rs, r, ms) + "\n" for r, ms in rs)
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        w.writerow(["lhs", "rhs", *MEASURES, "subtype", *(f"{k}_exact" for k in MEASURES)])
        m = rs.mmer
        for r, ms in rs:
            vals = [getattr(ms, k) for k in MEASURES]
            w.writerow(
                [_plain(m.source, r.lhs.descriptor), _plain(m.target, r.rhs.descriptor)]
                + [format_decimal(v) for v in vals]
                + [str(ms.subtype)]
                + [f"{v.numerator}/{v.denominator}" for v in vals]
            )
        body = buf.getvalue()
    else:
        raise ValueError(f"unknown format {fmt!r}; use text, json or csv")
    if sink is not None:
        try:
            sink.write(body)
        except OSError as exc:
            raise DataError(f"cannot write rules: {exc}") from exc
    return body


def _descriptor_from_terms(ins, terms):
    try:
        return Descriptor((ins.attribute_index(t["attribute"]), t["value"]) for t in terms)
    except (KeyError, TypeError):
        raise DataError("malformed term list in rule record") from None


def load_rules(source, mmer: Mmer, config=None) -> RuleSet:
    """Rebuild a :class:`RuleSet` from :func:`emit_rules` JSON output.

    Extensions are recomputed from ``mmer``; measures come from the exact
    fields of each record.
    """
    if hasattr(source, "read"):
        source = source.read()
    try:
        records = json.loads(source)
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid rule JSON: {exc}") from None
    if not isinstance(records, list):
        raise DataError("rule JSON must be an array")
    entries = []
    for i, rec in enumerate(records):
        try:
            ld = _descriptor_from_terms(mmer.source, rec["lhs"])
            rd = _descriptor_from_terms(mmer.target, rec["rhs"])
            values = {
                k: Fraction(rec[k]["numerator"], rec[k]["denominator"]) for k in MEASURES
            }
            subtype = Subtype(rec["subtype"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"bad rule record: {exc}", f"record {i}") from None
        lhs = Granule(ld, extension(mmer.source, ld), mmer.source.n_objects)
        rhs = Granule(rd, extension(mmer.target, rd), mmer.target.n_objects)
        entries.append((GranularRule(lhs, rhs), MeasureSet(subtype=subtype, **values)))
    return RuleSet(tuple(entries), mmer, config)


def parse_descriptor(ins, text) -> Descriptor:
    """``"gender=M, age=18..24"`` to a descriptor over ``ins``."""
    terms = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise DataError(f"expected attribute=value, got {part!r}")
        name, value = (s.strip() for s in part.split("=", 1))
        if name not in ins.attributes:
            raise DataError(f"unknown attribute {name!r} in {ins.universe_id!r}")
        terms.append((name, value))
    return ins.descriptor(terms)


def tradeoff_curve(m: Mmer, rule: GranularRule, grid) -> list[tuple[Fraction, Fraction]]:
    """``(tc, source confidence at tc)`` for each ``tc`` in ``grid``."""
    grid = [check_threshold(t, "tc") for t in grid]
    return [(t, source_confidence(rule, m, t)) for t in grid]


def target_tradeoff_curve(m: Mmer, rule: GranularRule, grid) -> list[tuple[Fraction, Fraction]]:
    """``(sc, target confidence at sc)`` for each ``sc`` in ``grid``."""
    grid = [check_threshold(s, "sc") for s in grid]
    return [(s, target_confidence(rule, m, s)) for s in grid]


def write_curve_csv(points, sink, header=("tc", "sconf")):
    w = csv.writer(sink, lineterminator="\n")
    w.writerow(header)
    for x, y in points:
        w.writerow([format_decimal(x, 6), format_decimal(y, 6)])
