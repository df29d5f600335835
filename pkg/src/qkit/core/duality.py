"""Cups, caps and everything built from them: bending, traces and hom-space inner products.

For a simple ``a`` let ``v_a`` be the basis vertex ``1 -> a⊗ā`` and ``w_a`` the basis vertex
``1 -> ā⊗a``. The standard solutions are

    S_a = sqrt(d_a) v_a,        R_a = r_a w_a,

where ``r_a = kappa_a sqrt(d_a)`` for self-dual ``a`` (the Frobenius-Schur sign sits on ``R``)
and ``r_a = 1 / (sqrt(d_a) conj(F^{a ā a}_a[1, 1]))`` otherwise, which is what the first zig-zag
identity forces. Cups of letters and words are assembled from these.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .category import CategorySpec
from .morphism import (
    Letter,
    Morphism,
    ObjectHandle,
    adjoint,
    basis,
    identity,
    simple,
    tensor,
    unit_object,
)

__all__ = [
    "DualityPack",
    "duality_pack",
    "cup_R",
    "cup_S",
    "ev",
    "coev",
    "dual",
    "conjugate",
    "dual_and_conjugate",
    "fourier",
    "partial_trace",
    "closure",
    "inner_product",
    "onb_and_isom",
]


def _unit_entry(spec: CategorySpec, a: int) -> complex:
    """``F^{a ā a}_a`` at the row and column whose intermediate label is the unit."""
    ab = spec.dual[a]
    rows, cols = spec.f_rows(a, ab, a, a), spec.f_cols(a, ab, a, a)
    u = spec.unit
    return spec.fmatrix(a, ab, a, a)[rows.index((u, 0, 0)), cols.index((u, 0, 0))]


def s_coefficient(spec: CategorySpec, a: int) -> float:
    return float(np.sqrt(spec.dims[a]))


def r_coefficient(spec: CategorySpec, a: int) -> complex:
    d = spec.dims[a]
    if spec.dual[a] == a:
        return complex(spec.fs_indicator[a] * np.sqrt(d))
    x = _unit_entry(spec, a)
    if x == 0:
        return complex(np.sqrt(d))
    return 1 / (np.sqrt(d) * np.conj(x))


@dataclass(frozen=True)
class DualityPack:
    """Standard solutions of the conjugate equations for every simple label.

    ``R[a]`` lies in ``C(1, ā⊗a)`` and ``S[a]`` in ``C(1, a⊗ā)``; ``r`` and ``s`` are the scalars
    multiplying the basis vertices.
    """

    R: dict[int, Morphism]
    S: dict[int, Morphism]
    r: np.ndarray
    s: np.ndarray


def duality_pack(spec: CategorySpec) -> DualityPack:
    key = ("duality_pack",)
    if key not in spec._cache:
        R, S = {}, {}
        for a in range(spec.rank):
            X = simple(spec, a)
            R[a], S[a] = cup_R(X), cup_S(X)
        r = np.array([r_coefficient(spec, a) for a in range(spec.rank)])
        s = np.array([s_coefficient(spec, a) for a in range(spec.rank)])
        spec._cache[key] = DualityPack(R, S, r, s)
    return spec._cache[key]


def _letter_cup(spec: CategorySpec, L: Letter, right: bool) -> Morphism:
    Lb = L.conj(spec)
    w = (L, Lb) if right else (Lb, L)
    trees = basis(spec, w).get(spec.unit, [])
    vec = np.zeros((len(trees), 1), dtype=complex)
    for k, (comps, _, _) in enumerate(trees):
        if right:
            (a, i), (b, j) = comps
            if b == spec.dual[a] and i == j:
                vec[k, 0] = s_coefficient(spec, a)
        else:
            (b, i), (a, j) = comps
            if b == spec.dual[a] and i == j:
                vec[k, 0] = r_coefficient(spec, a)
    blocks = {spec.unit: vec} if len(trees) else {}
    return Morphism(unit_object(spec), ObjectHandle(spec, w), blocks)


def cup_S(X: ObjectHandle) -> Morphism:
    """``S_X = coev_X : 1 -> X⊗X̄``, nested from the cups of the letters."""
    spec = X.spec
    key = ("cup_S", X.word)
    if key in spec._cache:
        return spec._cache[key]
    if len(X) == 0:
        out = identity(X)
    elif len(X) == 1:
        out = _letter_cup(spec, X.word[0], right=True)
    else:
        head, last = X[:-1], X[-1:]
        mid = tensor(tensor(identity(head), cup_S(last)), identity(head.conj()))
        out = mid @ cup_S(head)
    spec._cache[key] = out
    return out


def cup_R(X: ObjectHandle) -> Morphism:
    """``R_X = ev_X^* : 1 -> X̄⊗X``."""
    spec = X.spec
    key = ("cup_R", X.word)
    if key in spec._cache:
        return spec._cache[key]
    if len(X) == 0:
        out = identity(X)
    elif len(X) == 1:
        out = _letter_cup(spec, X.word[0], right=False)
    else:
        first, rest = X[:1], X[1:]
        mid = tensor(tensor(identity(rest.conj()), cup_R(first)), identity(rest))
        out = mid @ cup_R(rest)
    spec._cache[key] = out
    return out


def coev(X: ObjectHandle) -> Morphism:
    return cup_S(X)


def ev(X: ObjectHandle) -> Morphism:
    """``ev_X = R_X^* : X̄⊗X -> 1``."""
    return adjoint(cup_R(X))


def dual(f: Morphism) -> Morphism:
    """``f^∨ : Ȳ -> X̄`` for ``f : X -> Y``, bending both ends of the strand."""
    X, Y = f.src, f.tgt
    Xb, Yb = X.conj(), Y.conj()
    step1 = tensor(identity(Yb), cup_S(X))
    step2 = tensor(tensor(identity(Yb), f), identity(Xb))
    step3 = tensor(ev(Y), identity(Xb))
    return step3 @ step2 @ step1


def conjugate(f: Morphism) -> Morphism:
    """``f̄ = (f^∨)^* : X̄ -> Ȳ``."""
    return adjoint(dual(f))


def dual_and_conjugate(f: Morphism) -> tuple[Morphism, Morphism]:
    fv = dual(f)
    return fv, adjoint(fv)


def fourier(f: Morphism, split: int | None = None) -> Morphism:
    """One-click rotation ``C(c, a⊗b) -> C(b̄, c̄⊗a)``.

    The target word of ``f`` is cut into ``a = tgt[:split]`` and ``b = tgt[split:]``; by default
    ``b`` is the last letter.
    """
    C, T = f.src, f.tgt
    if split is None:
        split = len(T) - 1
    if not 0 <= split <= len(T):
        raise ValueError("split point outside the target word")
    A, B = T[:split], T[split:]
    Cb, Bb = C.conj(), B.conj()
    step1 = tensor(cup_R(C), identity(Bb))
    step2 = tensor(tensor(identity(Cb), f), identity(Bb))
    step3 = tensor(identity(Cb.tensor(A)), adjoint(cup_S(B)))
    return step3 @ step2 @ step1


def partial_trace(f: Morphism, side: str = "right") -> Morphism:
    """Close the outermost strand of ``f : W⊗X -> W'⊗X`` (or ``X⊗W -> X⊗W'``)."""
    src, tgt = f.src, f.tgt
    if len(src) == 0 or len(tgt) == 0:
        raise ValueError("nothing to trace")
    if side == "right":
        X = src[-1:]
        if tgt[-1:] != X:
            raise ValueError("outer letters of source and target differ")
        W, Wp = src[:-1], tgt[:-1]
        Xb = X.conj()
        return (tensor(identity(Wp), adjoint(cup_S(X)))
                @ tensor(f, identity(Xb))
                @ tensor(identity(W), cup_S(X)))
    if side == "left":
        X = src[:1]
        if tgt[:1] != X:
            raise ValueError("outer letters of source and target differ")
        W, Wp = src[1:], tgt[1:]
        Xb = X.conj()
        return (tensor(ev(X), identity(Wp))
                @ tensor(identity(Xb), f)
                @ tensor(cup_R(X), identity(W)))
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


def closure(f: Morphism) -> complex:
    """Categorical trace of an endomorphism, by closing strands from the right."""
    while len(f.src):
        f = partial_trace(f, "right")
    return f.scalar() if f.blocks else 0.0


def inner_product(f: Morphism, g: Morphism) -> complex:
    """``<f|g> = tr(f^* g)``, evaluated as ``sum_c d_c tr(f_c^† g_c)``."""
    if f.src != g.src or f.tgt != g.tgt:
        raise ValueError("inner product of morphisms with different source or target")
    dims = f.spec.dims
    return complex(sum(dims[c] * np.vdot(f.block(c), g.block(c)) for c in f.blocks if c in g.blocks))


def onb_and_isom(c, X: ObjectHandle) -> tuple[list[Morphism], list[Morphism]]:
    """Orthonormal basis of ``C(c, X)`` and the matching isometries ``sqrt(d_c)`` times it."""
    spec = X.spec
    c = spec.index(c)
    n = X.mult[c]
    src = simple(spec, c)
    isom = []
    for k in range(n):
        v = np.zeros((n, 1), dtype=complex)
        v[k, 0] = 1.0
        isom.append(Morphism(src, X, {c: v}))
    scale = 1 / np.sqrt(spec.dims[c])
    return [scale * v for v in isom], isom
