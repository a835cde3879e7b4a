"""Building an Mmer from files: generic CSV tables described by a YAML
manifest, the MovieLens 100k layout, the customer/product example, and a
random generator for tests and benchmarks."""
from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .exceptions import DataError
from .model import BinaryRelation, InformationSystem, Mmer, check_mmer

__all__ = [
    "Binning",
    "RECIPES",
    "TableSpec",
    "DatasetManifest",
    "load_mmer",
    "load_movielens",
    "shop_example",
    "random_mmer",
    "ML100K_AGE_BANDS",
    "ML100K_GENRES",
]


class Binning:
    """Maps numbers to labels through ``(low, high, label)`` ranges.

    ``None`` for a bound means unbounded. Ranges are inclusive at both ends
    unless ``closed="left"``, which makes ``high`` exclusive. A value no range
    covers raises :class:`DataError`.
    """

    def __init__(self, bins, closed="both"):
        if closed not in ("both", "left"):
            raise ValueError(f"closed must be 'both' or 'left', got {closed!r}")
        self.bins = [(lo, hi, str(label)) for lo, hi, label in bins]
        self.closed = closed

    @classmethod
    def from_cuts(cls, cuts, labels=None):
        """Bins ``(-inf, c1), [c1, c2), ..., [ck, inf)``."""
        cuts = sorted(cuts)
        edges = [None] + list(cuts) + [None]
        if labels is None:
            labels = []
            for lo, hi in zip(edges, edges[1:]):
                if lo is None:
                    labels.append(f"<{hi:g}")
                elif hi is None:
                    labels.append(f"{lo:g}+")
                else:
                    labels.append(f"{lo:g}..{hi:g}")
        if len(labels) != len(edges) - 1:
            raise DataError(f"{len(labels)} labels for {len(edges) - 1} bins")
        return cls(zip(edges, edges[1:], labels), closed="left")

    def __call__(self, value, location=None):
        try:
            v = float(value)
        except (TypeError, ValueError):
            raise DataError(f"non-numeric value {value!r} in a binned column", location) from None
        for lo, hi, label in self.bins:
            if lo is not None and v < lo:
                continue
            if hi is not None and (v > hi or (self.closed == "left" and v == hi)):
                continue
            return label
        raise DataError(f"value {value!r} falls in no bin", location)


ML100K_AGE_BANDS = [
    (None, 17, "<18"),
    (18, 24, "18..24"),
    (25, 34, "25..34"),
    (35, 44, "35..44"),
    (45, 49, "45..49"),
    (50, 55, "50..55"),
    (56, 60, "56..60"),
    (61, 65, "61..65"),
    (66, None, "66+"),
]

RELEASE_YEAR_BANDS = [
    (None, 1969, "before-1970s"),
    (1970, 1989, "1970s-1980s"),
    (1990, None, "1990s"),
]

RECIPES = {
    "ml100k-age": ML100K_AGE_BANDS,
    "release-year": RELEASE_YEAR_BANDS,
}

ML100K_GENRES = (
    "action", "adventure", "animation", "children", "comedy", "crime",
    "documentary", "drama", "fantasy", "FilmNoir", "horror", "musical",
    "mystery", "romance", "scientific-fiction", "thriller", "war", "western",
)


def _binning_from_spec(spec, where):
    if isinstance(spec, str):
        spec = {"recipe": spec}
    if "recipe" in spec:
        try:
            return Binning(RECIPES[spec["recipe"]])
        except KeyError:
            raise DataError(
                f"unknown binning recipe {spec['recipe']!r}; known: {', '.join(RECIPES)}", where
            ) from None
    if "cuts" in spec:
        return Binning.from_cuts(spec["cuts"], spec.get("labels"))
    if "bins" in spec:
        return Binning([tuple(b) for b in spec["bins"]])
    raise DataError("binning needs one of: recipe, cuts, bins", where)


@dataclass
class TableSpec:
    path: Path
    id_column: str
    universe_id: str | None = None
    exclude: tuple = ()
    discretize: dict = field(default_factory=dict)
    multivalue: dict = field(default_factory=dict)


@dataclass
class DatasetManifest:
    """Where the two tables and the relation live and how to clean them.

    ``relation_format`` is ``"pairs"`` (two id columns, one row per pair) or
    ``"matrix"`` (first column source id, one 0/1 column per target id).
    """

    source: TableSpec
    target: TableSpec
    relation_path: Path
    relation_format: str = "pairs"
    relation_columns: tuple | None = None

    @classmethod
    def from_dict(cls, data, base_dir="."):
        base = Path(base_dir)

        def table(key):
            try:
                t = data[key]
                path, id_column = t["path"], t["id_column"]
            except (KeyError, TypeError):
                raise DataError(f"manifest needs {key}.path and {key}.id_column") from None
            return TableSpec(
                path=base / path,
                id_column=id_column,
                universe_id=t.get("universe_id", key),
                exclude=tuple(t.get("exclude", ())),
                discretize=dict(t.get("discretize", {})),
                multivalue=dict(t.get("multivalue", {})),
            )

        rel = data.get("relation") or {}
        if "path" not in rel:
            raise DataError("manifest needs relation.path")
        fmt = rel.get("format", "pairs")
        if fmt not in ("pairs", "matrix"):
            raise DataError(f"relation.format must be pairs or matrix, got {fmt!r}")
        cols = rel.get("columns")
        return cls(
            source=table("source"),
            target=table("target"),
            relation_path=base / rel["path"],
            relation_format=fmt,
            relation_columns=tuple(cols) if cols else None,
        )

    @classmethod
    def from_file(cls, path):
        path = Path(path)
        try:
            with open(path, encoding="utf-8") as fh:
                data = yaml.safe_load(fh)
        except FileNotFoundError:
            raise DataError("manifest not found", str(path)) from None
        except yaml.YAMLError as exc:
            raise DataError(f"cannot parse manifest: {exc}", str(path)) from None
        if not isinstance(data, dict):
            raise DataError("manifest must be a mapping", str(path))
        return cls.from_dict(data, base_dir=path.parent)


def _read_csv(path):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except FileNotFoundError:
        raise DataError("file not found", str(path)) from None
    except UnicodeDecodeError as exc:
        raise DataError(f"not valid UTF-8: {exc}", str(path)) from None
    return rows


def _load_table(spec: TableSpec) -> InformationSystem:
    rows = _read_csv(spec.path)
    name = spec.path.name
    if not rows:
        raise DataError("empty table (no header)", name)
    header, body = rows[0], rows[1:]
    if spec.id_column not in header:
        raise DataError(f"id column {spec.id_column!r} not in header", name)
    for col in list(spec.exclude) + list(spec.discretize) + list(spec.multivalue):
        if col not in header:
            raise DataError(f"column {col!r} not in header", name)
    id_pos = header.index(spec.id_column)
    keep = [
        j for j, col in enumerate(header)
        if j != id_pos and col not in spec.exclude and col not in spec.multivalue
    ]
    binnings = {col: _binning_from_spec(s, f"{name}: {col}") for col, s in spec.discretize.items()}

    objects, values = [], []
    multi_raw = {col: [] for col in spec.multivalue}
    seen = {}
    for lineno, row in enumerate(body, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise DataError(f"{len(row)} fields, header has {len(header)}", f"{name}:{lineno}")
        oid = row[id_pos].strip()
        if not oid:
            raise DataError("empty id", f"{name}:{lineno}")
        if oid in seen:
            raise DataError(f"duplicate id {oid!r} (first at line {seen[oid]})", f"{name}:{lineno}")
        seen[oid] = lineno
        cells = []
        for j in keep:
            col, v = header[j], row[j].strip()
            where = f"{name}:{lineno}, column {col}"
            if v == "":
                raise DataError("missing value", where)
            if col in binnings:
                v = binnings[col](v, where)
            cells.append(v)
        for col in spec.multivalue:
            multi_raw[col].append(row[header.index(col)])
        objects.append(oid)
        values.append(cells)

    attributes = [header[j] for j in keep]
    inert = {}
    for col, sep in spec.multivalue.items():
        sep = sep or "|"
        token_lists = [[t.strip() for t in raw.split(sep) if t.strip()] for raw in multi_raw[col]]
        tokens = list(dict.fromkeys(t for ts in token_lists for t in ts))
        for tok in tokens:
            attributes.append(tok)
            inert[tok] = {"0"}
            for cells, ts in zip(values, token_lists):
                cells.append("1" if tok in ts else "0")
    return InformationSystem(
        spec.universe_id or spec.path.stem, objects, attributes, values, inert_values=inert
    )


def _load_relation(manifest, source, target):
    rows = _read_csv(manifest.relation_path)
    name = manifest.relation_path.name
    src_index = {o: i for i, o in enumerate(source.objects)}
    tgt_index = {o: i for i, o in enumerate(target.objects)}
    pairs = set()
    if not rows:
        return BinaryRelation(source.n_objects, target.n_objects)
    header, body = rows[0], rows[1:]

    def resolve(index, oid, where, role):
        try:
            return index[oid]
        except KeyError:
            raise DataError(f"unresolved {role} id {oid!r}", where) from None

    if manifest.relation_format == "pairs":
        if manifest.relation_columns:
            try:
                a, b = (header.index(c) for c in manifest.relation_columns)
            except ValueError:
                raise DataError(f"relation columns {manifest.relation_columns} not in header", name) from None
        else:
            if len(header) < 2:
                raise DataError("relation needs two id columns", name)
            a, b = 0, 1
        for lineno, row in enumerate(body, start=2):
            if not row:
                continue
            where = f"{name}:{lineno}"
            if len(row) <= max(a, b):
                raise DataError("short row", where)
            x = resolve(src_index, row[a].strip(), where, "source")
            y = resolve(tgt_index, row[b].strip(), where, "target")
            pairs.add((x, y))
    else:
        cols = [resolve(tgt_index, c.strip(), f"{name}: header", "target") for c in header[1:]]
        for lineno, row in enumerate(body, start=2):
            if not row:
                continue
            where = f"{name}:{lineno}"
            if len(row) != len(header):
                raise DataError(f"{len(row)} fields, header has {len(header)}", where)
            x = resolve(src_index, row[0].strip(), where, "source")
            for y, cell in zip(cols, row[1:]):
                cell = cell.strip()
                if cell not in ("0", "1"):
                    raise DataError(f"matrix cell must be 0 or 1, got {cell!r}", where)
                if cell == "1":
                    pairs.add((x, y))
    return BinaryRelation(source.n_objects, target.n_objects, sorted(pairs))


def load_mmer(manifest) -> Mmer:
    """Read both tables and the relation named by ``manifest``.

    ``manifest`` is a :class:`DatasetManifest` or a path to its YAML file.
    Duplicate relation pairs are merged.
    """
    if not isinstance(manifest, DatasetManifest):
        manifest = DatasetManifest.from_file(manifest)
    source = _load_table(manifest.source)
    target = _load_table(manifest.target)
    relation = _load_relation(manifest, source, target)
    return check_mmer(Mmer(source, target, relation))


def _read_lines(path, encoding="latin-1"):
    try:
        with open(path, encoding=encoding) as fh:
            return fh.read().splitlines()
    except FileNotFoundError:
        raise DataError("file not found", str(path)) from None


def _release_year(date, where):
    date = date.strip()
    if not date:
        return "unknown"
    try:
        year = int(date[-4:])
    except ValueError:
        raise DataError(f"unparseable release date {date!r}", where) from None
    return Binning(RELEASE_YEAR_BANDS)(year, where)


def load_movielens(directory, age_bins=None) -> Mmer:
    """Users x movies from an ml-100k directory (``u.user``, ``u.item``, ``u.data``).

    Users get ``age`` (banded), ``gender`` and ``occupation``. Movies get
    ``year`` (before-1970s / 1970s-1980s / 1990s, ``unknown`` when the date is
    blank) and one 0/1 attribute per genre, where ``0`` is inert. The
    ``unknown`` genre flag is dropped. A user and a movie are related when
    the user rated the movie, whatever the score.
    """
    d = Path(directory)
    binning = Binning(age_bins or ML100K_AGE_BANDS)

    user_ids, user_rows = [], []
    for lineno, line in enumerate(_read_lines(d / "u.user"), start=1):
        if not line.strip():
            continue
        where = f"u.user:{lineno}"
        parts = line.split("|")
        if len(parts) != 5:
            raise DataError(f"expected 5 fields, got {len(parts)}", where)
        uid, age, gender, occupation, _zip = (p.strip() for p in parts)
        if not uid or not gender or not occupation:
            raise DataError("missing field", where)
        user_ids.append(uid)
        user_rows.append((binning(age, where), gender, occupation))

    movie_ids, movie_rows = [], []
    for lineno, line in enumerate(_read_lines(d / "u.item"), start=1):
        if not line.strip():
            continue
        where = f"u.item:{lineno}"
        parts = line.split("|")
        if len(parts) != 24:
            raise DataError(f"expected 24 fields, got {len(parts)}", where)
        flags = [p.strip() for p in parts[6:]]
        if any(f not in ("0", "1") for f in flags):
            raise DataError("genre flags must be 0 or 1", where)
        movie_ids.append(parts[0].strip())
        movie_rows.append((_release_year(parts[2], where), *flags))

    users = InformationSystem("users", user_ids, ("age", "gender", "occupation"), user_rows)
    movies = InformationSystem(
        "movies", movie_ids, ("year",) + ML100K_GENRES, movie_rows,
        inert_values={g: {"0"} for g in ML100K_GENRES},
    )
    u_index = {u: i for i, u in enumerate(user_ids)}
    m_index = {m: i for i, m in enumerate(movie_ids)}
    bits = np.zeros((len(user_ids), len(movie_ids)), dtype=bool)
    for lineno, line in enumerate(_read_lines(d / "u.data"), start=1):
        if not line.strip():
            continue
        where = f"u.data:{lineno}"
        parts = line.split("\t")
        if len(parts) != 4:
            raise DataError(f"expected 4 tab-separated fields, got {len(parts)}", where)
        try:
            x, y = u_index[parts[0].strip()], m_index[parts[1].strip()]
        except KeyError as exc:
            raise DataError(f"unresolved id {exc.args[0]!r}", where) from None
        bits[x, y] = True
    return check_mmer(Mmer(users, movies, BinaryRelation.from_matrix(bits)))


def default_movielens_dir():
    return os.environ.get("ML100K_DIR")


def shop_example() -> Mmer:
    """Five customers, six products and who bought what."""
    customers = InformationSystem(
        "customers",
        ["c1", "c2", "c3", "c4", "c5"],
        ["Age", "Gender", "Married", "Country", "Income", "NumCars"],
        [
            ["20..29", "Male", "No", "USA", "60k..69k", "0..1"],
            ["20..29", "Female", "Yes", "USA", "80k..89k", "0..1"],
            ["20..29", "Male", "No", "China", "40k..49k", "0..1"],
            ["30..39", "Female", "Yes", "Japan", "80k..89k", "2"],
            ["30..39", "Male", "Yes", "China", "90k..99k", "2"],
        ],
    )
    products = InformationSystem(
        "products",
        ["p1", "p2", "p3", "p4", "p5", "p6"],
        ["Name", "Country", "Category", "Color", "Price"],
        [
            ["Bread", "Australia", "Staple", "Black", "1..9"],
            ["Diaper", "China", "Daily", "White", "1..9"],
            ["Pork", "China", "Meat", "Red", "1..9"],
            ["Beef", "Australia", "Meat", "Red", "10..19"],
            ["Beer", "France", "Alcohol", "Black", "10..19"],
            ["Wine", "France", "Alcohol", "White", "10..19"],
        ],
    )
    buys = [
        [1, 1, 0, 1, 1, 0],
        [1, 0, 0, 1, 0, 1],
        [0, 1, 0, 0, 1, 1],
        [0, 1, 0, 1, 1, 0],
        [1, 0, 0, 1, 1, 1],
    ]
    return Mmer(customers, products, BinaryRelation.from_matrix(buys))


def random_mmer(n_source, n_target, n_source_attrs=3, n_target_attrs=3, n_values=3,
                density=0.5, seed=None) -> Mmer:
    """Random categorical tables and a Bernoulli(``density``) relation.

    ``n_values`` may be an int or a ``(low, high)`` inclusive range drawn per
    attribute.
    """
    rng = np.random.default_rng(seed)

    def card():
        if isinstance(n_values, tuple):
            return int(rng.integers(n_values[0], n_values[1] + 1))
        return int(n_values)

    def table(uid, prefix, n, m):
        cards = [card() for _ in range(m)]
        cols = [rng.integers(0, k, size=n) for k in cards]
        rows = [[f"v{cols[j][i]}" for j in range(m)] for i in range(n)]
        return InformationSystem(
            uid, [f"{prefix}{i}" for i in range(n)], [f"{prefix}a{j}" for j in range(m)], rows
        )

    source = table("U", "u", n_source, n_source_attrs)
    target = table("V", "v", n_target, n_target_attrs)
    bits = rng.random((n_source, n_target)) < density
    return Mmer(source, target, BinaryRelation.from_matrix(bits))
