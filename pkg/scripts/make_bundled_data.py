"""Regenerate the bundled category files in src/qkit/data.

Every admissible 1x1 F-block defaults to 1; the few non-trivial blocks are listed explicitly.
"""

from __future__ import annotations

import itertools
import json
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "src" / "qkit" / "data"


def build(labels, unit, dual, fuse, special=None, fs=None):
    n = len(labels)
    N = np.zeros((n, n, n), dtype=int)
    for a, b in itertools.product(range(n), repeat=2):
        for c in fuse(a, b):
            N[a, b, c] += 1
    special = special or {}
    F = []
    for a, b, c, d in itertools.product(range(n), repeat=4):
        rows = [e for e in range(n) if N[a, b, e] and N[e, c, d]]
        cols = [f for f in range(n) if N[b, c, f] and N[a, f, d]]
        if not rows:
            continue
        block = special.get((a, b, c, d))
        if block is None:
            assert len(rows) == 1, (a, b, c, d)
            block = np.eye(1)
        for i, e in enumerate(rows):
            for j, f in enumerate(cols):
                v = complex(block[i][j])
                if v != 0:
                    F.append({"a": labels[a], "b": labels[b], "c": labels[c], "d": labels[d],
                              "e": labels[e], "f": labels[f], "re": v.real, "im": v.imag})
    doc = {
        "labels": labels,
        "unit": labels[unit],
        "dual": {labels[a]: labels[dual[a]] for a in range(n)},
        "fusion": [[labels[a], labels[b], labels[c], int(N[a, b, c])]
                   for a, b, c in itertools.product(range(n), repeat=3) if N[a, b, c]],
        "F": F,
    }
    if fs:
        doc["fs_indicator"] = fs
    return doc


def cyclic(k):
    labels = ["1"] + (["g"] if k == 2 else ["g", "g2"])
    return build(labels, 0, [(-a) % k for a in range(k)], lambda a, b: [(a + b) % k])


def fib():
    phi = (1 + 5 ** 0.5) / 2

    def fuse(a, b):
        return [b] if a == 0 else [a] if b == 0 else [0, 1]

    special = {(1, 1, 1, 1): [[1 / phi, phi ** -0.5], [phi ** -0.5, -1 / phi]]}
    return build(["1", "tau"], 0, [0, 1], fuse, special)


def ising():
    # 0 = 1, 1 = sigma, 2 = psi
    table = {(1, 1): [0, 2], (1, 2): [1], (2, 1): [1], (2, 2): [0]}

    def fuse(a, b):
        return [b] if a == 0 else [a] if b == 0 else table[a, b]

    s = 2 ** -0.5
    special = {
        (1, 1, 1, 1): [[s, s], [s, -s]],
        (1, 2, 1, 2): [[-1]],
        (2, 1, 2, 1): [[-1]],
    }
    return build(["1", "sigma", "psi"], 0, [0, 1, 2], fuse, special)


def dump(doc):
    """One JSON record per line, so diffs of the data stay readable."""
    parts = []
    for key, value in doc.items():
        if isinstance(value, list) and value and isinstance(value[0], (list, dict)):
            body = ",\n".join("  " + json.dumps(v) for v in value)
            parts.append(f" {json.dumps(key)}: [\n{body}\n ]")
        else:
            parts.append(f" {json.dumps(key)}: {json.dumps(value)}")
    return "{\n" + ",\n".join(parts) + "\n}\n"


def main():
    docs = {
        "vec": build(["1"], 0, [0], lambda a, b: [0]),
        "z2": cyclic(2),
        "z3": cyclic(3),
        "fib": fib(),
        "ising": ising(),
    }
    for name, doc in docs.items():
        (OUT / f"{name}.json").write_text(dump(doc), encoding="utf-8")


if __name__ == "__main__":
    main()
