"""Skeletal fusion category data and its JSON loader."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

__all__ = [
    "CategoryError",
    "CategoryParseError",
    "CategorySchemaError",
    "CategorySpec",
    "load_category",
    "bundled_category",
    "BUNDLED",
    "cyclic_group_category",
]

BUNDLED = ("vec", "z2", "z3", "fib", "ising")


class CategoryError(ValueError):
    """Base class for problems with category input."""


class CategoryParseError(CategoryError):
    """The input is not valid JSON."""


class CategorySchemaError(CategoryError):
    """The input parses, but does not describe fusion data."""


@dataclass(eq=False)
class CategorySpec:
    """Skeletal data of a unitary fusion category.

    Labels are stored as integers ``0..rank-1``; :attr:`labels` holds their names.

    Attributes
    ----------
    labels : tuple of str
        Names of the simple objects.
    unit : int
        Index of the tensor unit.
    dual : ndarray of int
        ``dual[a]`` is the index of the conjugate label.
    fusion : ndarray of int, shape (rank, rank, rank)
        ``fusion[a, b, c] = dim C(c, a⊗b)``.
    dims : ndarray of float
        Quantum dimensions.
    F : dict
        ``F[a, b, c, d]`` is the recoupling matrix with rows ``(e, alpha, beta)`` and
        columns ``(f, mu, nu)``, see :meth:`f_rows` and :meth:`f_cols`.
    fs_indicator : ndarray of int
        Frobenius-Schur indicators (``+1`` for labels that are not self-dual).
    name : str
        Free-form name, used in reports only.
    """

    labels: tuple[str, ...]
    unit: int
    dual: np.ndarray
    fusion: np.ndarray
    dims: np.ndarray
    F: dict[tuple[int, int, int, int], np.ndarray]
    fs_indicator: np.ndarray
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label: str | int) -> int:
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.rank:
                raise KeyError(label)
            return int(label)
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown label {label!r}") from None

    def channels(self, a: int, b: int) -> list[int]:
        """Labels ``c`` with ``N[a][b][c] > 0``."""
        key = ("channels", a, b)
        if key not in self._cache:
            self._cache[key] = [int(c) for c in np.nonzero(self.fusion[a, b])[0]]
        return self._cache[key]

    def f_rows(self, a: int, b: int, c: int, d: int) -> list[tuple[int, int, int]]:
        key = ("rows", a, b, c, d)
        if key not in self._cache:
            N = self.fusion
            self._cache[key] = [(e, al, be) for e in range(self.rank)
                                for al in range(N[a, b, e]) for be in range(N[e, c, d])]
        return self._cache[key]

    def f_cols(self, a: int, b: int, c: int, d: int) -> list[tuple[int, int, int]]:
        key = ("cols", a, b, c, d)
        if key not in self._cache:
            N = self.fusion
            self._cache[key] = [(f, mu, nu) for f in range(self.rank)
                                for mu in range(N[b, c, f]) for nu in range(N[a, f, d])]
        return self._cache[key]

    def f_col_index(self, a: int, b: int, c: int, d: int) -> dict[tuple[int, int, int], int]:
        key = ("colidx", a, b, c, d)
        if key not in self._cache:
            self._cache[key] = {t: k for k, t in enumerate(self.f_cols(a, b, c, d))}
        return self._cache[key]

    def fmatrix(self, a: int, b: int, c: int, d: int) -> np.ndarray:
        """The F-matrix of ``(a, b, c; d)``; zero if the input file omitted it."""
        m = self.F.get((a, b, c, d))
        if m is None:
            m = np.zeros((len(self.f_rows(a, b, c, d)), len(self.f_cols(a, b, c, d))),
                         dtype=complex)
        return m

    def admissible(self) -> list[tuple[int, int, int, int]]:
        """All ``(a, b, c, d)`` with ``d`` appearing in ``a⊗b⊗c``."""
        out = []
        r = range(self.rank)
        for a in r:
            for b in r:
                for c in r:
                    for d in r:
                        if self.f_rows(a, b, c, d):
                            out.append((a, b, c, d))
        return out

    def is_multiplicity_free(self) -> bool:
        return bool(self.fusion.max(initial=0) <= 1)

    def with_F_entry(self, key: tuple, row: int, col: int, value: complex) -> CategorySpec:
        """Copy of this spec with one F entry replaced (used to build broken fixtures)."""
        F = {k: v.copy() for k, v in self.F.items()}
        F[key][row, col] = value
        return CategorySpec(self.labels, self.unit, self.dual.copy(), self.fusion.copy(),
                            self.dims.copy(), F, self.fs_indicator.copy(), self.name)


def _perron_frobenius_dims(fusion: np.ndarray, dual: np.ndarray) -> np.ndarray:
    # d_a^2 = sum_c N[a][ā][c] d_c; the square-root map is a contraction in Thompson's metric,
    # so plain iteration converges to the positive solution (and lands exactly on 1 for
    # invertible labels)
    T = np.array([fusion[a, dual[a]] for a in range(fusion.shape[0])], dtype=float)
    d = np.ones(fusion.shape[0])
    for _ in range(500):
        new = np.sqrt(T @ d)
        if np.array_equal(new, d):
            break
        d = new
    return d


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise CategorySchemaError(msg)


def category_from_dict(data: dict, name: str = "") -> CategorySpec:
    """Build a :class:`CategorySpec` from the parsed JSON document."""
    _require(isinstance(data, dict), "top level must be an object")
    for key in ("labels", "unit", "dual", "fusion", "F"):
        _require(key in data, f"missing key {key!r}")
    labels = data["labels"]
    _require(isinstance(labels, list) and labels and all(isinstance(s, str) for s in labels),
             "labels must be a non-empty array of strings")
    _require(len(set(labels)) == len(labels), "labels must be distinct")
    idx = {s: k for k, s in enumerate(labels)}

    def lab(s, what):
        _require(s in idx, f"{what}: unknown label {s!r}")
        return idx[s]

    n = len(labels)
    unit = lab(data["unit"], "unit")
    dual_map = data["dual"]
    _require(isinstance(dual_map, dict), "dual must be an object")
    for s in labels:
        _require(s in dual_map, f"dual map is missing label {s!r}")
    dual = np.array([lab(dual_map[s], "dual") for s in labels], dtype=int)

    fusion = np.zeros((n, n, n), dtype=int)
    for rec in data["fusion"]:
        _require(isinstance(rec, list) and len(rec) == 4, f"bad fusion record {rec!r}")
        a, b, c = (lab(s, "fusion") for s in rec[:3])
        _require(isinstance(rec[3], int) and rec[3] >= 0,
                 f"fusion multiplicity must be a non-negative integer, got {rec[3]!r}")
        fusion[a, b, c] = rec[3]

    if "dims" in data and data["dims"] is not None:
        dims = np.array([float(data["dims"][s]) for s in labels])
    else:
        dims = _perron_frobenius_dims(fusion, dual)

    kappa = np.ones(n, dtype=int)
    for s, v in (data.get("fs_indicator") or {}).items():
        _require(v in (1, -1), "fs_indicator values must be +1 or -1")
        kappa[lab(s, "fs_indicator")] = v

    spec = CategorySpec(tuple(labels), unit, dual, fusion, dims, {}, kappa, name)
    F: dict[tuple[int, int, int, int], np.ndarray] = {}
    for rec in data["F"]:
        _require(isinstance(rec, dict), "F records must be objects")
        a, b, c, d, e, f = (lab(rec.get(k), f"F.{k}") for k in "abcdef")
        row = (e, int(rec.get("alpha", 0)), int(rec.get("beta", 0)))
        col = (f, int(rec.get("mu", 0)), int(rec.get("nu", 0)))
        rows, cols = spec.f_rows(a, b, c, d), spec.f_cols(a, b, c, d)
        _require(row in rows and col in cols,
                 f"F entry {rec!r} is outside the admissible fusion channels")
        key = (a, b, c, d)
        if key not in F:
            F[key] = np.zeros((len(rows), len(cols)), dtype=complex)
        F[key][rows.index(row), cols.index(col)] = complex(rec.get("re", 0.0), rec.get("im", 0.0))
    spec.F = F
    return spec


def cyclic_group_category(n: int) -> CategorySpec:
    """``Vec(Z/n)`` with trivial associator; labels ``"0" .. "n-1"``."""
    labels = [str(k) for k in range(n)]
    data = {
        "labels": labels,
        "unit": "0",
        "dual": {str(k): str((-k) % n) for k in range(n)},
        "fusion": [[str(a), str(b), str((a + b) % n), 1] for a in range(n) for b in range(n)],
        "F": [{"a": str(a), "b": str(b), "c": str(c), "d": str((a + b + c) % n),
               "e": str((a + b) % n), "f": str((b + c) % n), "re": 1.0}
              for a in range(n) for b in range(n) for c in range(n)],
    }
    return category_from_dict(data, name=f"Z{n}")


def load_category(path: str | Path) -> CategorySpec:
    """Read a category file.

    Only the schema is checked here; use :func:`qkit.core.validate.validate_category` for the
    coherence equations. A bare bundled name such as ``"fib"`` is also accepted.
    """
    p = Path(path)
    if not p.exists() and str(path) in BUNDLED:
        return bundled_category(str(path))
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise CategoryParseError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CategoryParseError(f"{path}: {exc}") from exc
    return category_from_dict(data, name=p.stem)


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("qkit") / "data" / f"{name}.json"))


def bundled_category(name: str) -> CategorySpec:
    """One of the shipped categories: ``vec``, ``z2``, ``z3``, ``fib``, ``ising``."""
    key = ("bundled", name)
    if key not in _BUNDLED_CACHE:
        if name not in BUNDLED:
            raise KeyError(f"no bundled category {name!r}")
        _BUNDLED_CACHE[key] = load_category(bundled_path(name))
    return _BUNDLED_CACHE[key]


_BUNDLED_CACHE: dict = {}
