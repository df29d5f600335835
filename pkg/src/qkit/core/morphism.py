"""Objects as tensor words and morphisms stored blockwise in fusion-tree bases.

An object is a word of *letters*; a letter is a semisimple object given by its multiplicity
vector. The basis of ``C(c, X1⊗...⊗Xn)`` is the set of left-nested fusion trees: pick a simple
component of every letter, fuse the first two, fuse the result with the third, and so on.
Every trivalent vertex is an isometry, so the adjoint of a morphism is the blockwise conjugate
transpose and basis trees are orthonormal for the composition pairing.

Tensoring morphisms needs the unitary that re-brackets a product of two trees into a single
left-nested tree; it is built from F-moves by :func:`split_matrices`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Number

import numpy as np

from .category import CategorySpec

__all__ = [
    "Letter",
    "ObjectHandle",
    "Morphism",
    "letter",
    "simple",
    "unit_object",
    "word",
    "basis",
    "hom_dim",
    "identity",
    "zero",
    "compose",
    "tensor",
    "adjoint",
    "inverse",
    "defect",
    "random_morphism",
    "canonical_iso",
    "tree_vector",
]

Tree = tuple  # (components, intermediate labels, vertex indices)


@dataclass(frozen=True)
class Letter:
    """A semisimple object, ``⊕_a mult[a]·a``."""

    mult: tuple[int, ...]

    def components(self) -> list[tuple[int, int]]:
        return [(a, i) for a, n in enumerate(self.mult) for i in range(n)]

    def conj(self, spec: CategorySpec) -> Letter:
        out = [0] * len(self.mult)
        for a, n in enumerate(self.mult):
            out[spec.dual[a]] = n
        return Letter(tuple(out))


@dataclass(frozen=True)
class ObjectHandle:
    """An object of the category, presented as a tensor word of letters.

    The empty word is the unit object. Two handles compare equal when their words agree;
    the category is checked separately by the morphism operations.
    """

    spec: CategorySpec = field(compare=False, repr=False)
    word: tuple[Letter, ...]

    def __repr__(self) -> str:
        if not self.word:
            return "ObjectHandle(1)"
        labels = self.spec.labels
        parts = []
        for L in self.word:
            terms = [(f"{n}*{labels[a]}" if n > 1 else labels[a]) for a, n in enumerate(L.mult) if n]
            parts.append("+".join(terms) if terms else "0")
        return "ObjectHandle(" + " ⊗ ".join(f"({p})" for p in parts) + ")"

    @property
    def mult(self) -> np.ndarray:
        """Number of basis trees in every sector."""
        b = basis(self.spec, self.word)
        return np.array([len(b.get(c, ())) for c in range(self.spec.rank)], dtype=int)

    @property
    def dim(self) -> float:
        """Quantum dimension."""
        return float(self.mult @ self.spec.dims)

    def conj(self) -> ObjectHandle:
        return ObjectHandle(self.spec, tuple(L.conj(self.spec) for L in reversed(self.word)))

    def tensor(self, other: ObjectHandle) -> ObjectHandle:
        _same_spec(self.spec, other.spec)
        return ObjectHandle(self.spec, self.word + other.word)

    def __len__(self) -> int:
        return len(self.word)

    def __getitem__(self, k) -> ObjectHandle:
        w = self.word[k]
        return ObjectHandle(self.spec, w if isinstance(k, slice) else (w,))

    def flat(self) -> ObjectHandle:
        """The one-letter object with the same multiplicities."""
        return ObjectHandle(self.spec, (Letter(tuple(int(n) for n in self.mult)),))


def letter(spec: CategorySpec, mult: dict | list | tuple) -> ObjectHandle:
    """One-letter object from ``{label: multiplicity}`` or a full multiplicity vector."""
    vec = [0] * spec.rank
    if isinstance(mult, dict):
        for lab, n in mult.items():
            vec[spec.index(lab)] += int(n)
    else:
        if len(mult) != spec.rank:
            raise ValueError("multiplicity vector has the wrong length")
        vec = [int(n) for n in mult]
    if min(vec) < 0:
        raise ValueError("negative multiplicity")
    return ObjectHandle(spec, (Letter(tuple(vec)),))


def simple(spec: CategorySpec, a) -> ObjectHandle:
    return letter(spec, {spec.index(a): 1})


def unit_object(spec: CategorySpec) -> ObjectHandle:
    return ObjectHandle(spec, ())


def word(spec: CategorySpec, *labels) -> ObjectHandle:
    """The tensor word ``a1 ⊗ a2 ⊗ ...`` of simple objects."""
    out = unit_object(spec)
    for a in labels:
        out = out.tensor(simple(spec, a))
    return out


def _same_spec(s1: CategorySpec, s2: CategorySpec) -> None:
    if s1 is not s2:
        raise ValueError("objects live over different categories")


# ----------------------------------------------------------------------------------------------
# fusion-tree bases


def basis(spec: CategorySpec, w: tuple[Letter, ...]) -> dict[int, list[Tree]]:
    """Left-nested fusion trees of the word ``w``, grouped by total sector.

    The order is lexicographic in (component, intermediate label, vertex index) letter by
    letter; components of a letter are ordered by label, then copy.
    """
    key = ("basis", w)
    cache = spec._cache
    if key in cache:
        return cache[key]
    if not w:
        out = {spec.unit: [((), (), ())]}
    else:
        partial = [(((a, i),), (a,), ()) for (a, i) in w[0].components()]
        N = spec.fusion
        for L in w[1:]:
            comps = L.components()
            nxt = []
            for comps_t, inner, verts in partial:
                e = inner[-1]
                for comp in comps:
                    b = comp[0]
                    for c in spec.channels(e, b):
                        for mu in range(N[e, b, c]):
                            nxt.append((comps_t + (comp,), inner + (c,), verts + (mu,)))
            partial = nxt
        out = {}
        for t in partial:
            out.setdefault(t[1][-1], []).append(t)
    cache[key] = out
    return out


def basis_index(spec: CategorySpec, w: tuple[Letter, ...]) -> dict[int, dict[Tree, int]]:
    key = ("basis_index", w)
    if key not in spec._cache:
        spec._cache[key] = {c: {t: k for k, t in enumerate(ts)} for c, ts in basis(spec, w).items()}
    return spec._cache[key]


def product_basis(spec: CategorySpec, w1, w2):
    """Basis of ``C(c, W1⊗W2)`` made of pairs of trees joined by one more vertex.

    Returns ``(items, segments)``: ``items[c]`` lists ``(e, f, mu, t1, t2)``; ``segments[c]``
    maps ``(e, f, mu)`` to ``(start, n1, n2)`` where the block for that channel is ``t1``-major.
    """
    key = ("product", w1, w2)
    if key in spec._cache:
        return spec._cache[key]
    b1, b2 = basis(spec, w1), basis(spec, w2)
    N = spec.fusion
    items: dict[int, list] = {}
    segments: dict[int, dict] = {}
    for e in sorted(b1):
        for f in sorted(b2):
            for c in spec.channels(e, f):
                for mu in range(N[e, f, c]):
                    lst = items.setdefault(c, [])
                    segments.setdefault(c, {})[(e, f, mu)] = (len(lst), len(b1[e]), len(b2[f]))
                    lst.extend((e, f, mu, t1, t2) for t1 in b1[e] for t2 in b2[f])
    spec._cache[key] = (items, segments)
    return items, segments


def split_matrices(spec: CategorySpec, w1, w2) -> dict[int, np.ndarray]:
    """Unitary change of basis from the product basis of ``(w1, w2)`` to nested trees of ``w1+w2``.

    Column ``k`` holds the nested-tree coordinates of the ``k``-th product basis vector.
    """
    key = ("split", w1, w2)
    cache = spec._cache
    if key in cache:
        return cache[key]
    items, _ = product_basis(spec, w1, w2)
    full = w1 + w2
    nidx = basis_index(spec, full)
    out = {}
    if not w1 or len(w2) <= 1:
        for c, cols in items.items():
            M = np.zeros((len(nidx[c]), len(cols)), dtype=complex)
            for k, (e, f, mu, t1, t2) in enumerate(cols):
                if not w1:
                    n = t2
                elif not w2:
                    n = t1
                else:
                    n = (t1[0] + t2[0], t1[1] + (c,), t1[2] + (mu,))
                M[nidx[c][n], k] = 1.0
            out[c] = M
        cache[key] = out
        return out

    # peel the last letter x off w2: (e (g x)_f)_c  ->  ((e g)_h x)_c via the inverse F-move
    w2p = w2[:-1]
    inner = split_matrices(spec, w1, w2p)
    _, inner_segments = product_basis(spec, w1, w2p)
    b1, b2p = basis_index(spec, w1), basis_index(spec, w2p)
    inner_nested = basis(spec, w1 + w2p)
    for c, cols in items.items():
        M = np.zeros((len(nidx[c]), len(cols)), dtype=complex)
        for k, (e, f, mu, t1, t2) in enumerate(cols):
            comps2, inner2, verts2 = t2
            g, nu, xcomp = inner2[-2], verts2[-1], comps2[-1]
            a = xcomp[0]
            t2p = (comps2[:-1], inner2[:-1], verts2[:-1])
            Fm = spec.fmatrix(e, g, a, c)
            col = spec.f_col_index(e, g, a, c)[(f, nu, mu)]
            for r, (h, rho, sigma) in enumerate(spec.f_rows(e, g, a, c)):
                coef = np.conj(Fm[r, col])
                if coef == 0:
                    continue
                start, n1, n2 = inner_segments[h][(e, g, rho)]
                pk = start + b1[e][t1] * n2 + b2p[g][t2p]
                vec = inner[h][:, pk]
                for nrow in np.nonzero(vec)[0]:
                    nt = inner_nested[h][nrow]
                    tree = (nt[0] + (xcomp,), nt[1] + (c,), nt[2] + (sigma,))
                    M[nidx[c][tree], k] += coef * vec[nrow]
        out[c] = M
    cache[key] = out
    return out


# ----------------------------------------------------------------------------------------------
# morphisms


class Morphism:
    """A morphism ``src -> tgt`` with one complex matrix per simple sector.

    ``blocks[c]`` has shape ``(tgt.mult[c], src.mult[c])`` in the fusion-tree bases; sectors that
    are missing count as zero. Instances are treated as immutable.
    """

    __slots__ = ("src", "tgt", "blocks")

    def __init__(self, src: ObjectHandle, tgt: ObjectHandle, blocks: dict | None = None):
        _same_spec(src.spec, tgt.spec)
        self.src = src
        self.tgt = tgt
        ms, mt = src.mult, tgt.mult
        clean = {}
        for c, B in (blocks or {}).items():
            B = np.asarray(B, dtype=complex)
            if B.shape != (mt[c], ms[c]):
                raise ValueError(f"block {c} has shape {B.shape}, expected {(mt[c], ms[c])}")
            if B.size:
                clean[int(c)] = B
        self.blocks = clean

    @property
    def spec(self) -> CategorySpec:
        return self.src.spec

    def block(self, c: int) -> np.ndarray:
        B = self.blocks.get(c)
        if B is None:
            return np.zeros((self.tgt.mult[c], self.src.mult[c]), dtype=complex)
        return B

    def __repr__(self) -> str:
        return f"Morphism({self.src!r} -> {self.tgt!r}, sectors={sorted(self.blocks)})"

    @property
    def dag(self) -> Morphism:
        return adjoint(self)

    def vector(self) -> np.ndarray:
        """All block entries, sector by sector, as one flat array."""
        r = range(self.spec.rank)
        return np.concatenate([self.block(c).ravel() for c in r]) if len(r) else np.zeros(0)

    def norm(self) -> float:
        """Largest absolute entry over all blocks."""
        return max((float(np.abs(B).max()) for B in self.blocks.values()), default=0.0)

    def scalar(self) -> complex:
        """Value of an endomorphism of the unit object."""
        if self.src.mult[self.spec.unit] != 1 or self.tgt.mult[self.spec.unit] != 1:
            raise ValueError("not an endomorphism of the unit object")
        return complex(self.block(self.spec.unit)[0, 0])

    def _binary(self, other: Morphism, op) -> Morphism:
        if self.src != other.src or self.tgt != other.tgt:
            raise ValueError("morphisms have different source or target")
        keys = set(self.blocks) | set(other.blocks)
        return Morphism(self.src, self.tgt, {c: op(self.block(c), other.block(c)) for c in keys})

    def __add__(self, other: Morphism) -> Morphism:
        return self._binary(other, np.add)

    def __sub__(self, other: Morphism) -> Morphism:
        return self._binary(other, np.subtract)

    def __neg__(self) -> Morphism:
        return -1 * self

    def __mul__(self, z) -> Morphism:
        if not isinstance(z, Number):
            return NotImplemented
        return Morphism(self.src, self.tgt, {c: z * B for c, B in self.blocks.items()})

    __rmul__ = __mul__

    def __truediv__(self, z) -> Morphism:
        return self * (1 / z)

    def __matmul__(self, other: Morphism) -> Morphism:
        return compose(self, other)


def with_source(f: Morphism, X: ObjectHandle) -> Morphism:
    """``f`` re-read with source ``X``, which must have the same trees as ``f.src``.

    Used to identify the empty word with the one-letter unit object.
    """
    if basis(X.spec, X.word) != basis(f.src.spec, f.src.word) and not (
            len(X) + len(f.src) == 1 and np.array_equal(X.mult, f.src.mult)):
        raise ValueError("sources are not canonically identified")
    return Morphism(X, f.tgt, f.blocks)


def hom_dim(X: ObjectHandle, Y: ObjectHandle) -> int:
    _same_spec(X.spec, Y.spec)
    return int(X.mult @ Y.mult)


def identity(X: ObjectHandle) -> Morphism:
    return Morphism(X, X, {c: np.eye(n) for c, n in enumerate(X.mult) if n})


def zero(X: ObjectHandle, Y: ObjectHandle) -> Morphism:
    return Morphism(X, Y, {})


def compose(g: Morphism, f: Morphism) -> Morphism:
    """``g ∘ f``."""
    if f.tgt != g.src:
        raise ValueError(f"cannot compose: {f.tgt!r} != {g.src!r}")
    blocks = {c: g.blocks[c] @ f.blocks[c] for c in f.blocks if c in g.blocks}
    return Morphism(f.src, g.tgt, blocks)


def adjoint(f: Morphism) -> Morphism:
    return Morphism(f.tgt, f.src, {c: B.conj().T for c, B in f.blocks.items()})


def inverse(f: Morphism) -> Morphism:
    """Blockwise inverse; raises if some block is singular or not square."""
    if not np.array_equal(f.src.mult, f.tgt.mult):
        raise ValueError("not invertible: multiplicities differ")
    blocks = {}
    for c, n in enumerate(f.src.mult):
        if n:
            blocks[c] = np.linalg.inv(f.block(c))
    return Morphism(f.tgt, f.src, blocks)


def tensor(f: Morphism, g: Morphism) -> Morphism:
    """``f ⊗ g`` between the concatenated words."""
    spec = f.spec
    _same_spec(spec, g.spec)
    ws1, ws2, wt1, wt2 = f.src.word, g.src.word, f.tgt.word, g.tgt.word
    items_s, segs_s = product_basis(spec, ws1, ws2)
    items_t, segs_t = product_basis(spec, wt1, wt2)
    Ps, Pt = split_matrices(spec, ws1, ws2), split_matrices(spec, wt1, wt2)
    blocks = {}
    for c, ss in segs_s.items():
        st = segs_t.get(c)
        if not st:
            continue
        K = np.zeros((len(items_t[c]), len(items_s[c])), dtype=complex)
        nonzero = False
        for chan, (s0, n1s, n2s) in ss.items():
            if chan not in st:
                continue
            e, fl, _ = chan
            fb, gb = f.blocks.get(e), g.blocks.get(fl)
            if fb is None or gb is None:
                continue
            t0, n1t, n2t = st[chan]
            K[t0:t0 + n1t * n2t, s0:s0 + n1s * n2s] = np.kron(fb, gb)
            nonzero = True
        if nonzero:
            blocks[c] = Pt[c] @ K @ Ps[c].conj().T
    return Morphism(f.src.tensor(g.src), f.tgt.tensor(g.tgt), blocks)


def defect(f: Morphism, g: Morphism) -> float:
    """Max-abs difference of two parallel morphisms."""
    return (f - g).norm()


def random_morphism(X: ObjectHandle, Y: ObjectHandle, rng: np.random.Generator) -> Morphism:
    mx, my = X.mult, Y.mult
    blocks = {}
    for c in range(X.spec.rank):
        if mx[c] and my[c]:
            shape = (my[c], mx[c])
            blocks[c] = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return Morphism(X, Y, blocks)


def canonical_iso(X: ObjectHandle) -> Morphism:
    """Unitary from the flattened object ``X.flat()`` onto the word ``X``.

    The k-th copy of ``c`` in the flat object goes to the k-th basis tree of ``X`` in sector c.
    """
    return Morphism(X.flat(), X, {c: np.eye(n) for c, n in enumerate(X.mult) if n})


def tree_vector(X: ObjectHandle, c: int, k: int) -> Morphism:
    """The k-th basis isometry ``c -> X``."""
    v = np.zeros((X.mult[c], 1), dtype=complex)
    v[k, 0] = 1.0
    return Morphism(simple(X.spec, c), X, {c: v})
