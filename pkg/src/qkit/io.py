"""JSON reading and writing for algebra objects and algebra morphisms.

An algebra file stores the object as ``{label: multiplicity}`` (a single letter) and ``m``, ``i``
as sparse block entries ``{sector, row, col, re, im}`` in the canonical tree bases. A morphism
file names its source and target algebra files and stores ``theta`` the same way.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .core import CategorySpec, Morphism, letter, load_category, unit_object
from .core.category import BUNDLED, CategoryParseError, CategorySchemaError
from .frobenius import AlgebraMorphism, AlgebraObject, flatten

__all__ = [
    "algebra_to_dict",
    "algebra_from_dict",
    "load_algebra",
    "save_algebra",
    "morphism_to_dict",
    "load_morphism",
    "resolve_category",
    "bundled_algebra_path",
]


def _entries(f: Morphism, tol: float = 0.0) -> list[dict]:
    out = []
    for c in sorted(f.blocks):
        B = f.blocks[c]
        for r, k in zip(*np.nonzero(np.abs(B) > tol)):
            z = complex(B[r, k])
            out.append({"sector": f.spec.labels[c], "row": int(r), "col": int(k),
                        "re": z.real, "im": z.imag})
    return out


def _blocks(spec: CategorySpec, entries, src, tgt, what: str) -> Morphism:
    if not isinstance(entries, list):
        raise CategorySchemaError(f"{what}: expected a list of entries")
    blocks: dict[int, np.ndarray] = {}
    ms, mt = src.mult, tgt.mult
    for e in entries:
        try:
            c = spec.index(e["sector"])
            r, k = int(e["row"]), int(e["col"])
            z = complex(float(e.get("re", 0.0)), float(e.get("im", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise CategorySchemaError(f"{what}: bad entry {e!r}") from exc
        if not (0 <= r < mt[c] and 0 <= k < ms[c]):
            raise CategorySchemaError(f"{what}: entry {e!r} out of range")
        B = blocks.setdefault(c, np.zeros((mt[c], ms[c]), dtype=complex))
        B[r, k] += z
    return Morphism(src, tgt, blocks)


def algebra_to_dict(alg: AlgebraObject, category: str) -> dict:
    alg = flatten(alg)
    spec = alg.spec
    obj = {spec.labels[a]: int(n) for a, n in enumerate(alg.A.mult) if n}
    return {"category": category, "name": alg.name, "object": obj,
            "m": _entries(alg.m), "i": _entries(alg.i)}


def resolve_category(ref: str, base: Path | None = None) -> CategorySpec:
    """A category reference: a path (relative to ``base`` if given) or a bundled name."""
    if base is not None:
        p = base / ref
        if p.exists():
            return load_category(p)
    stem = Path(ref).stem
    if not Path(ref).exists() and stem in BUNDLED:
        return load_category(stem)
    return load_category(ref)


def algebra_from_dict(data: dict, spec: CategorySpec | None = None, base: Path | None = None) -> AlgebraObject:
    if not isinstance(data, dict):
        raise CategorySchemaError("algebra file must be a JSON object")
    if spec is None:
        if "category" not in data:
            raise CategorySchemaError("algebra file has no 'category'")
        spec = resolve_category(str(data["category"]), base)
    for key in ("object", "m", "i"):
        if key not in data:
            raise CategorySchemaError(f"algebra file has no {key!r}")
    try:
        mult = {spec.index(k): int(v) for k, v in data["object"].items()}
    except (AttributeError, KeyError, TypeError, ValueError) as exc:
        raise CategorySchemaError(f"bad object {data['object']!r}") from exc
    A = letter(spec, mult)
    m = _blocks(spec, data["m"], A.tensor(A), A, "m")
    i = _blocks(spec, data["i"], unit_object(spec), A, "i")
    return AlgebraObject(A, m, i, name=str(data.get("name", "")))


def _read_json(path: str | Path):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise CategoryParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CategoryParseError(f"{path}: {exc}") from exc


def load_algebra(path: str | Path, spec: CategorySpec | None = None) -> AlgebraObject:
    """Read an algebra file; ``spec`` overrides the file's own category reference."""
    p = Path(path)
    if not p.exists() and not p.suffix:
        p = bundled_algebra_path(str(path))
    return algebra_from_dict(_read_json(p), spec, base=p.parent)


def save_algebra(alg: AlgebraObject, path: str | Path, category: str) -> None:
    Path(path).write_text(json.dumps(algebra_to_dict(alg, category), indent=1) + "\n", encoding="utf-8")


def morphism_to_dict(theta: AlgebraMorphism, source: str, target: str) -> dict:
    return {"source": source, "target": target, "theta": _entries(theta.theta)}


def load_morphism(path: str | Path, spec: CategorySpec | None = None) -> AlgebraMorphism:
    """Read a morphism file; source and target algebra paths resolve relative to it."""
    p = Path(path)
    data = _read_json(p)
    if not isinstance(data, dict) or not {"source", "target", "theta"} <= set(data):
        raise CategorySchemaError("morphism file needs 'source', 'target' and 'theta'")

    def alg(ref):
        q = p.parent / ref
        return load_algebra(q if q.exists() else ref, spec)

    src, tgt = alg(data["source"]), alg(data["target"])
    if tgt.spec is not src.spec:
        tgt = load_algebra(p.parent / data["target"] if (p.parent / data["target"]).exists()
                           else data["target"], src.spec)
    theta = _blocks(src.spec, data["theta"], src.A, tgt.A, "theta")
    return AlgebraMorphism(theta, src, tgt)


def bundled_algebra_path(name: str) -> Path:
    return Path(str(resources.files("qkit") / "data" / "algebras" / f"{name}.json"))
