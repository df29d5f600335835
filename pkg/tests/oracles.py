"""Independent reference computations used to freeze expected values.

Nothing here touches fusion trees or F-moves from the package: the pentagon oracle reads the
raw JSON tables into a dense array, and the cyclic-group oracle works with graded vector spaces
as plain numpy arrays.
"""

from __future__ import annotations

import json
from itertools import product
from pathlib import Path

import numpy as np


def dense_F(path) -> tuple[list[str], np.ndarray, np.ndarray]:
    """``F[a,b,c,d,e,f]`` from a multiplicity-free category file, plus its fusion tensor."""
    doc = json.loads(Path(path).read_text())
    labels = doc["labels"]
    ix = {l: k for k, l in enumerate(labels)}
    r = len(labels)
    N = np.zeros((r, r, r), dtype=int)
    for a, b, c, n in doc["fusion"]:
        N[ix[a], ix[b], ix[c]] = n
    F = np.zeros((r,) * 6, dtype=complex)
    for e in doc["F"]:
        key = tuple(ix[e[k]] for k in "abcdef")
        F[key] = complex(e.get("re", 0.0), e.get("im", 0.0))
    return labels, N, F


def pentagon_residual(path) -> float:
    """Max residual of the multiplicity-free pentagon written directly on the dense table.

    Rows of ``F[a,b,c,d]`` are the ``(ab)`` channel ``e``, columns the ``(bc)`` channel ``f``.
    """
    _, N, F = dense_F(path)
    r = N.shape[0]
    ok = lambda a, b, c: N[a, b, c] > 0  # noqa: E731
    worst = 0.0
    for a, b, c, d, e in product(range(r), repeat=5):
        for f, g, h, k in product(range(r), repeat=4):
            # ((ab)_f c)_g d -> e  versus  a (b (cd)_h)_k -> e
            if not (ok(a, b, f) and ok(f, c, g) and ok(g, d, e) and ok(c, d, h)
                    and ok(b, h, k) and ok(a, k, e)):
                continue
            lhs = F[f, c, d, e, g, h] * F[a, b, h, e, f, k] if ok(f, h, e) else 0.0
            rhs = sum(F[a, b, c, g, f, l] * F[a, l, d, e, g, k] * F[b, c, d, k, l, h]
                      for l in range(r) if ok(b, c, l) and ok(a, l, g) and ok(l, d, k))
            worst = max(worst, abs(lhs - rhs))
    return float(worst)


class CyclicGroupOracle:
    """The group algebra of ``Z/n`` in ``Vec(Z/n)`` with plain matrices.

    ``A = C^n`` with basis ``e_x`` of degree ``x``; ``H = A`` and ``H̄`` has the dual basis.
    All quantum dimensions are 1 and the cups are the standard pairings, so every diagram is a
    tensor contraction.
    """

    def __init__(self, n: int):
        self.n = n
        e = np.eye(n)
        self.e = e
        # m(e_x ⊗ e_y) = e_{x+y}
        self.m = np.zeros((n, n * n))
        for x in range(n):
            for y in range(n):
                self.m[(x + y) % n, x * n + y] = 1.0
        self.i = e[0]

    def lam(self, a: int) -> np.ndarray:
        """Left multiplication by ``e_a``."""
        return self.m @ np.kron(self.e[a][:, None], np.eye(self.n))

    def pi(self, a: int) -> np.ndarray:
        """``d_H^{-1/2} (lambda_a ⊗ id)(coev)`` as a vector in ``H ⊗ H̄``."""
        coev = np.eye(self.n).reshape(-1)
        return np.kron(self.lam(a), np.eye(self.n)) @ coev / np.sqrt(self.n)

    def projector(self) -> np.ndarray:
        return sum(np.outer(self.pi(a), self.pi(a).conj()) for a in range(self.n))

    def delta(self, a: int, b: int, c: int) -> complex:
        """Contract the middle ``H̄ ⊗ H`` of ``pi_a ⊗ pi_b`` and pair with ``pi_c``."""
        if (a + b) % self.n != c:
            return 0.0
        n = self.n
        al = self.pi(a).reshape(n, n)
        be = self.pi(b).reshape(n, n)
        glued = al @ be  # sum over the contracted index
        return complex(np.vdot(self.pi(c).reshape(n, n), glued))

    def sector_block(self, g: int, M: np.ndarray) -> np.ndarray:
        """Restrict an operator on ``H ⊗ H̄`` to the degree-``g`` part, basis ``e_x ⊗ e_y^*``
        with ``x - y = g``, ordered by ``x``."""
        n = self.n
        idx = [x * n + ((x - g) % n) for x in range(n)]
        return M[np.ix_(idx, idx)]
