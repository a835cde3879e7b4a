import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from granular_rules.datasets import shop_example
from granular_rules.model import BinaryRelation, InformationSystem, Mmer, make_granule

FIXTURES = Path(__file__).parent / "fixtures"
SHOP_DIR = FIXTURES / "shop"
ML100K_DIR = Path(os.environ.get("ML100K_DIR", "/root/data/ml-100k"))

# object indices in the customer / product example
C1, C2, C3, C4, C5 = range(5)
P1, P2, P3, P4, P5, P6 = range(6)


@pytest.fixture
def mmer():
    return shop_example()


@pytest.fixture
def men(mmer):
    return make_granule(mmer.source, {"Gender": "Male"})


@pytest.fixture
def alcohol(mmer):
    return make_granule(mmer.target, {"Category": "Alcohol"})


@pytest.fixture(scope="session")
def movielens():
    if not (ML100K_DIR / "u.data").exists():
        pytest.skip(f"ml-100k not found at {ML100K_DIR} (set ML100K_DIR)")
    from granular_rules.datasets import load_movielens

    return load_movielens(ML100K_DIR)


def small_mmer(rng, max_objects=12, max_attrs=4, max_values=3, density=None):
    """Random MMER within the oracle-friendly size limits."""

    def table(uid, prefix):
        n = int(rng.integers(1, max_objects + 1))
        m = int(rng.integers(1, max_attrs + 1))
        cards = rng.integers(1, max_values + 1, size=m)
        rows = [[f"v{int(rng.integers(0, k))}" for k in cards] for _ in range(n)]
        return InformationSystem(uid, [f"{prefix}{i}" for i in range(n)],
                                 [f"{prefix}a{j}" for j in range(m)], rows)

    source, target = table("U", "u"), table("V", "v")
    p = rng.uniform(0.1, 0.9) if density is None else density
    bits = rng.random((source.n_objects, target.n_objects)) < p
    return Mmer(source, target, BinaryRelation.from_matrix(bits))


def random_threshold(rng, low=0.05):
    """A threshold in (0, 1], sometimes exactly 1, as an exact decimal."""
    if rng.random() < 0.25:
        return Fraction(1)
    return Fraction(int(rng.integers(int(low * 100), 101)), 100)


@st.composite
def mmers(draw, max_objects=8, max_attrs=3, max_values=3):
    seed = draw(st.integers(0, 2**32 - 1))
    return small_mmer(np.random.default_rng(seed), max_objects, max_attrs, max_values)


thresholds = st.integers(1, 100).map(lambda k: Fraction(k, 100))


# --- acceptance report ------------------------------------------------------

_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one pass/fail line for the end-of-run acceptance summary."""

    def record(name, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
