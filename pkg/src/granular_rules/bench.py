"""Threshold sweeps comparing checkers and algorithms by basic-operation count."""
from __future__ import annotations

import csv
from fractions import Fraction

from .measures import select_checker
from .miner import MiningConfig, mine
from .model import Mmer
from .validation import check_threshold

__all__ = ["BENCH_COLUMNS", "checker_settings", "run_bench", "write_bench_csv"]

BENCH_COLUMNS = (
    "ms", "mt", "sc", "tc", "subtype", "basic_ops", "rules_emitted", "wall_ms",
    "algorithm", "source_granules", "target_granules",
)


def checker_settings(relaxed=Fraction(95, 100)):
    """The four (sc, tc) cells that select each checker once.

    ``relaxed`` stands in for "below 1" so that a dedicated checker and the
    general one can be timed on comparable inputs.
    """
    r = check_threshold(relaxed, "relaxed")
    one = Fraction(1)
    return [(one, one), (r, one), (one, r), (r, r)]


def _row(cfg, rs):
    c = rs.counter
    return {
        "ms": cfg.ms,
        "mt": cfg.mt,
        "sc": cfg.sc,
        "tc": cfg.tc,
        "subtype": str(select_checker(cfg.sc, cfg.tc)),
        "basic_ops": c.basic_ops,
        "rules_emitted": c.rules_emitted,
        "wall_ms": round(c.wall_time * 1000, 3),
        "algorithm": cfg.algorithm,
        "source_granules": len(rs.source_granules),
        "target_granules": len(rs.target_granules),
    }


def run_bench(m: Mmer, ms_grid, mt_grid=None, relaxed=Fraction(95, 100),
              compare_algorithms=False, max_lhs_length=None, max_rhs_length=None):
    """One row per (ms, mt) cell and checker setting, sandwich algorithm.

    ``mt_grid`` defaults to ``ms_grid`` (paired element-wise). With
    ``compare_algorithms`` each cell also gets forward and backward rows for
    the complete match setting.
    """
    ms_grid = [check_threshold(v, "ms") for v in ms_grid]
    mt_grid = ms_grid if mt_grid is None else [check_threshold(v, "mt") for v in mt_grid]
    if len(mt_grid) != len(ms_grid):
        raise ValueError("ms and mt grids must have the same length")
    rows = []
    for ms, mt in zip(ms_grid, mt_grid):
        for sc, tc in checker_settings(relaxed):
            cfg = MiningConfig(ms, mt, sc, tc, "sandwich",
                               max_lhs_length=max_lhs_length, max_rhs_length=max_rhs_length)
            rows.append(_row(cfg, mine(m, cfg)))
        if compare_algorithms:
            for algorithm in ("forward", "backward"):
                cfg = MiningConfig(ms, mt, 1, 1, algorithm,
                                   max_lhs_length=max_lhs_length, max_rhs_length=max_rhs_length)
                rows.append(_row(cfg, mine(m, cfg)))
    return rows


def _cell(v):
    if isinstance(v, Fraction):
        return str(float(v)) if v.denominator != 1 else str(v.numerator)
    return v


def write_bench_csv(rows, sink):
    w = csv.DictWriter(sink, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _cell(r[k]) for k in BENCH_COLUMNS})
