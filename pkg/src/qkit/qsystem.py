"""From a W*-algebra object back to a Q-system: the projector ``p``, tetrahedral constants and Q(θ).

With ``H = A`` the L² object and ``B_a`` the orthonormal families of
:func:`qkit.wstar.sector_bases`, the projector is ``p = sum_a sum_{alpha in B_a} alpha alpha^*`` on
``H ⊗ H̄``. Its image carries the Q-system with multiplication ``d_H^{1/2} p (id ⊗ ev_H ⊗ id)
(p ⊗ p)`` and unit ``d_H^{-1/2} p coev_H``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import (
    Morphism,
    ObjectHandle,
    adjoint,
    closure,
    coev,
    conjugate,
    cup_S,
    defect,
    ev,
    fourier,
    identity,
    letter,
    onb_and_isom,
    partial_trace,
    simple,
    tensor,
    with_source,
    word,
)
from .frobenius import AlgebraMorphism, AlgebraObject, check_involutive
from .report import Check, check
from .wstar import WStarData, WStarError, _combine, induced_pi, l2_inner, sector_bases

__all__ = [
    "ProjectorP",
    "TetraTable",
    "SubobjectEmbedding",
    "QMorphism",
    "build_p",
    "check_p",
    "tetra_delta",
    "delta_value",
    "check_delta_identities",
    "check_p_lemmas",
    "build_Q",
    "check_p_absorbs_pi",
    "q_morphism",
    "check_q_morphism",
    "middle_cap",
]


def _simple_sourced(w: WStarData, B: dict) -> dict:
    return {a: [with_source(x, simple(w.spec, a)) for x in xs] for a, xs in B.items()}


def middle_cap(H: ObjectHandle) -> Morphism:
    """``id_H ⊗ ev_H ⊗ id_H̄ : H ⊗ H̄ ⊗ H ⊗ H̄ -> H ⊗ H̄``."""
    Hb = H.conj()
    return tensor(tensor(identity(H), ev(H)), identity(Hb))


@dataclass
class ProjectorP:
    p: Morphism
    ranks: dict
    B: dict

    @property
    def HH(self) -> ObjectHandle:
        return self.p.src


def build_p(w: WStarData, B: dict | None = None) -> ProjectorP:
    """Assemble ``p`` block by block from the families ``B_a`` (default: ``w.B``)."""
    B = _simple_sourced(w, w.B if B is None else B)
    HH = w.H.tensor(w.H.conj())
    blocks = {}
    for a, xs in B.items():
        for x in xs:
            v = x.block(a)
            blocks[a] = blocks.get(a, 0) + v @ v.conj().T
    p = Morphism(HH, HH, blocks)
    ranks = {c: int(np.linalg.matrix_rank(blk, tol=1e-8)) for c, blk in p.blocks.items()}
    return ProjectorP(p, ranks, B)


def check_p(pp: ProjectorP, w: WStarData, tol: float | None = None, seed: int = 0) -> list[Check]:
    tol = w.tol if tol is None else tol
    p = pp.p
    X = pp.HH
    idX = identity(X)
    cx = coev(X)
    sym = defect(tensor(p, identity(X.conj())) @ cx, tensor(identity(X), p) @ cx)
    rank_ok = all(pp.ranks.get(c, 0) == w.dim(c) for c in range(w.spec.rank))
    rng = np.random.default_rng(seed)
    remix = max(defect(build_p(w, sector_bases(w, rng)).p, p) for _ in range(2))
    return [
        check("p_idempotent", "p^2 = p", defect(p @ p, p), tol),
        check("p_selfadjoint", "p^* = p", defect(adjoint(p), p), tol),
        check("p_symmetric_self_dual", "(p ⊗ id) coev = (id ⊗ p) coev", sym, tol),
        check("p_rank", "rank of p in sector c equals dim A(c)", 0.0 if rank_ok else 1.0, tol),
        check("p_basis_independent", "p does not depend on the orthonormal bases", remix, tol),
    ]


# ----------------------------------------------------------------------------------------------
# tetrahedral structure constants


def _glue(alpha: Morphism, beta: Morphism, H: ObjectHandle) -> Morphism:
    """``(id_H ⊗ ev_H ⊗ id_H̄)(alpha ⊗ beta) : a ⊗ b -> H ⊗ H̄``."""
    return middle_cap(H) @ tensor(alpha, beta)


def delta_value(alpha: Morphism, beta: Morphism, gamma: Morphism, delta: Morphism, H: ObjectHandle
                ) -> complex:
    """The closed diagram: ``gamma^* (id ⊗ ev_H ⊗ id)(alpha ⊗ beta) delta`` with the c strand closed."""
    return closure(adjoint(gamma) @ _glue(alpha, beta, H) @ delta)


@dataclass
class TetraTable:
    """``entries[(a, b, c, i, j, k, l)] = Delta`` for ``alpha = B_a[i]``, ``beta = B_b[j]``,
    ``gamma = B_c[k]`` and ``delta`` the ``l``-th tree vector of ``C(c, a ⊗ b)``."""

    entries: dict
    B: dict
    H: ObjectHandle

    def isoms(self, a: int, b: int, c: int) -> list[Morphism]:
        spec = self.H.spec
        return onb_and_isom(c, word(spec, a, b))[1]


def tetra_delta(w: WStarData, onb: dict | None = None) -> TetraTable:
    """All Delta values over nonzero channels ``c ⊂ a ⊗ b``.

    The diagrams are evaluated on the unnormalized ``(lambda(f) ⊗ id)(id ⊗ coev_H)`` and the
    factor ``(d_a d_b d_c / d_H^3)^{1/2}`` is applied once at the end, so that normalization
    costs a single rounding.
    """
    onb = w.onb if onb is None else onb
    spec, H = w.spec, w.H
    dims, dH = spec.dims, H.dim
    raw = _simple_sourced(w, {a: [induced_pi(w.alg, f, normalized=False) for f in onb[a]]
                              for a in w.sectors})
    entries = {}
    for a in w.sectors:
        for b in w.sectors:
            for c in spec.channels(a, b):
                if c not in raw:
                    continue
                scale = np.sqrt(dims[a] * dims[b] * dims[c] / dH ** 3)
                deltas = onb_and_isom(c, word(spec, a, b))[1]
                for i, al in enumerate(raw[a]):
                    for j, be in enumerate(raw[b]):
                        glued = _glue(al, be, H)
                        for k, ga in enumerate(raw[c]):
                            top = adjoint(ga) @ glued
                            for l, de in enumerate(deltas):
                                entries[(a, b, c, i, j, k, l)] = scale * closure(top @ de)
    B = _simple_sourced(w, sector_bases(w, onb=onb))
    return TetraTable(entries, B, H)


def check_delta_identities(w: WStarData, table: TetraTable | None = None, tol: float | None = None
                           ) -> list[Check]:
    """Both expansions in terms of Delta, and the cyclic symmetry evaluated directly."""
    tol = w.tol if tol is None else tol
    table = table or tetra_delta(w)
    spec, H, B, T = w.spec, w.H, table.B, table.entries
    dims = spec.dims
    abd = abc = z3 = 0.0
    for a in w.sectors:
        for b in w.sectors:
            for c in spec.channels(a, b):
                deltas = table.isoms(a, b, c)
                for i, al in enumerate(B[a]):
                    for j, be in enumerate(B[b]):
                        glued = _glue(al, be, H)
                        # expansion over B_c
                        for l, de in enumerate(deltas):
                            lhs = glued @ de
                            rhs = None
                            for k, ga in enumerate(B.get(c, [])):
                                term = (T[(a, b, c, i, j, k, l)] / dims[c]) * ga
                                rhs = term if rhs is None else rhs + term
                            abd = max(abd, lhs.norm() if rhs is None else defect(lhs, rhs))
                        # expansion over Isom(c, a⊗b)
                        for k, ga in enumerate(B.get(c, [])):
                            lhs = adjoint(ga) @ glued
                            rhs = None
                            for l, de in enumerate(deltas):
                                term = (T[(a, b, c, i, j, k, l)] / dims[c]) * adjoint(de)
                                rhs = term if rhs is None else rhs + term
                            abc = max(abc, defect(lhs, rhs))
                            # cyclic symmetry, each side evaluated as its own closed diagram
                            for l, de in enumerate(deltas):
                                v0 = T[(a, b, c, i, j, k, l)]
                                v1 = delta_value(conjugate(ga), al, conjugate(be), fourier(de), H)
                                v2 = delta_value(be, conjugate(ga), conjugate(al),
                                                 fourier(fourier(de)), H)
                                z3 = max(z3, abs(v0 - v1), abs(v0 - v2))
    return [
        check("replace_abd", "(id⊗ev⊗id)(alpha⊗beta) delta = d_c^{-1} sum_gamma Delta gamma", abd, tol),
        check("replace_abc", "gamma^*(id⊗ev⊗id)(alpha⊗beta) = d_c^{-1} sum_delta Delta delta^*", abc, tol),
        check("delta_z3_symmetry", "Delta is invariant under the cyclic rotation of its legs", z3, tol),
    ]


# ----------------------------------------------------------------------------------------------
# projector lemmas


def _pants(pp: ProjectorP, H: ObjectHandle) -> Morphism:
    return middle_cap(H) @ tensor(pp.p, pp.p)


def check_p_lemmas(pp: ProjectorP, w: WStarData, tol: float | None = None) -> list[Check]:
    tol = w.tol if tol is None else tol
    H, p = w.H, pp.p
    idX = identity(pp.HH)
    mc = middle_cap(H)
    two = _pants(pp, H)
    three = p @ two
    top = defect(two, three)
    any_p = max(defect(three, two),
                defect(three, p @ mc @ tensor(idX, p)),
                defect(three, p @ mc @ tensor(p, idX)))
    capped = p
    for _ in range(len(H)):
        capped = partial_trace(capped, "right")
    cap = defect(capped, identity(H))
    T = adjoint(three)
    rot = defect(fourier(T, split=len(pp.HH)), T)
    return [
        check("remove_top_p", "the top p can be removed from the p-dressed multiplication", top, tol),
        check("remove_any_p", "any single p can be removed from the p-dressed multiplication",
              any_p, tol),
        check("cap_off_p", "capping off p gives id_H", cap, tol),
        check("multiplication_rotation", "the p-dressed multiplication is invariant under rotation",
              rot, tol),
    ]


def check_p_absorbs_pi(pp: ProjectorP, w: WStarData, tol: float | None = None) -> list[Check]:
    tol = w.tol if tol is None else tol
    worst = 0.0
    for a in w.sectors:
        for f in w.sector_basis[a] + w.onb[a]:
            x = induced_pi(w.alg, f)
            worst = max(worst, defect(pp.p @ x, x))
    c = coev(w.H)
    unit = defect(pp.p @ c, c)
    return [
        check("p_absorbs_pi", "p pi_a(g) = pi_a(g)", worst, tol),
        check("p_absorbs_coev", "p coev_H = coev_H", unit, tol),
    ]


# ----------------------------------------------------------------------------------------------
# the Q-system on im(p)


@dataclass
class SubobjectEmbedding:
    """Isometry ``u : Q -> H ⊗ H̄`` with ``u u^* = p``."""

    Q: ObjectHandle
    u: Morphism


def _range_isometry(P: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    # orthonormal basis of the column space from a column-pivoted QR
    Qm, R, _ = scipy.linalg.qr(P, pivoting=True)
    diag = np.abs(np.diag(R)) if R.size else np.zeros(0)
    r = int(np.sum(diag > tol))
    return Qm[:, :r]


def build_Q(w: WStarData, pp: ProjectorP | None = None) -> tuple[AlgebraObject, SubobjectEmbedding]:
    pp = pp or build_p(w)
    spec, H = w.spec, w.H
    us = {c: _range_isometry(blk) for c, blk in pp.p.blocks.items()}
    mult = {spec.labels[c]: u.shape[1] for c, u in us.items() if u.shape[1]}
    Qobj = letter(spec, mult)
    u = Morphism(Qobj, pp.HH, {c: v for c, v in us.items() if v.shape[1]})
    dH = H.dim
    m = np.sqrt(dH) * (adjoint(u) @ middle_cap(H) @ tensor(u, u))
    i = (adjoint(u) @ coev(H)) / np.sqrt(dH)
    return AlgebraObject(Qobj, m, i, name=f"Q({w.alg.name})"), SubobjectEmbedding(Qobj, u)


# ----------------------------------------------------------------------------------------------
# Q on morphisms


@dataclass
class QMorphism:
    """``Q(theta) = sum theta(alpha) alpha^*`` and ``theta(p_A) = sum theta(alpha) theta(alpha)^*``."""

    Qtheta: Morphism
    theta_p: Morphism
    theta_B: dict
    images: dict
    completion: dict


def _theta_onb(theta: AlgebraMorphism, wA: WStarData, wB: WStarData, tol: float) -> tuple[dict, dict]:
    """``theta(ONB(A(a)))`` and a Gram-Schmidt completion of it to ``ONB(B(a))``."""
    images, completion = {}, {}
    for a in wA.sectors:
        imgs = [theta.theta @ f for f in wA.onb[a]]
        G = np.array([[l2_inner(wB, f, g) for g in imgs] for f in imgs])
        if np.abs(G - np.eye(len(imgs))).max() > max(tol, 1e-8):
            raise WStarError(f"theta is not isometric on sector {wA.spec.labels[a]}")
        images[a] = imgs
    for a in wB.sectors:
        basis = list(images.get(a, []))
        for v in wB.sector_basis[a]:
            r = v
            for e in basis:
                r = r - l2_inner(wB, e, r) * e
            nrm = np.sqrt(max(l2_inner(wB, r, r).real, 0.0))
            if nrm > 1e-8:
                basis.append(r / nrm)
        completion[a] = basis[len(images.get(a, [])):]
    return images, completion


def q_morphism(theta: AlgebraMorphism, wA: WStarData, wB: WStarData) -> QMorphism:
    images, completion = _theta_onb(theta, wA, wB, wA.tol)
    spec = wA.spec
    src = wA.H.tensor(wA.H.conj())
    tgt = wB.H.tensor(wB.H.conj())
    Qt = Morphism(src, tgt)
    tp = Morphism(tgt, tgt)
    theta_B = {}
    for a in wA.sectors:
        da = spec.dims[a]
        theta_B[a] = []
        for f, tf in zip(wA.onb[a], images[a]):
            al = np.sqrt(da) * induced_pi(wA.alg, f)
            tal = np.sqrt(da) * induced_pi(wB.alg, tf)
            theta_B[a].append(tal)
            Qt = Qt + tal @ adjoint(al)
            tp = tp + tal @ adjoint(tal)
    return QMorphism(Qt, tp, theta_B, images, completion)


def check_q_morphism(theta: AlgebraMorphism, wA: WStarData, wB: WStarData,
                     QA: tuple | None = None, QB: tuple | None = None, tol: float | None = None
                     ) -> list[Check]:
    tol = wA.tol if tol is None else tol
    spec = wA.spec
    qm = q_morphism(theta, wA, wB)
    ppA, ppB = build_p(wA), build_p(wB)
    Qt, tp = qm.Qtheta, qm.theta_p

    # the completed basis reproduces p_B, and theta(p_A) <= p_B
    full = {a: [np.sqrt(spec.dims[a]) * induced_pi(wB.alg, f)
                for f in qm.images.get(a, []) + qm.completion[a]]
            for a in wB.sectors}
    ext = defect(build_p(wB, full).p, ppB.p)
    below = max(defect(tp @ tp, tp), defect(adjoint(tp), tp), defect(ppB.p @ tp, tp))
    piso = max(defect(Qt @ adjoint(Qt), tp), defect(adjoint(Qt) @ Qt, ppA.p))

    remove = 0.0
    for a in wA.sectors:
        for f in wA.sector_basis[a] + wA.onb[a]:
            remove = max(remove, defect(induced_pi(wB.alg, theta.theta @ f),
                                        Qt @ induced_pi(wA.alg, f)))

    # theta-version of the gamma^*-capped expansion
    HA, HB = wA.H, wB.H
    BA = _simple_sourced(wA, wA.B)
    TB = _simple_sourced(wA, qm.theta_B)
    scale = np.sqrt(HA.dim / HB.dim)
    tabc = 0.0
    for a in wA.sectors:
        for b in wA.sectors:
            for c in spec.channels(a, b):
                if c not in BA:
                    continue
                deltas = onb_and_isom(c, word(spec, a, b))[1]
                for i in range(len(BA[a])):
                    for j in range(len(BA[b])):
                        for k in range(len(BA[c])):
                            lhs = adjoint(TB[c][k]) @ _glue(TB[a][i], TB[b][j], HB)
                            direct = scale * (adjoint(BA[c][k]) @ _glue(BA[a][i], BA[b][j], HA))
                            via = None
                            for de in deltas:
                                d = delta_value(BA[a][i], BA[b][j], BA[c][k], de, HA)
                                term = (scale * d / spec.dims[c]) * adjoint(de)
                                via = term if via is None else via + term
                            tabc = max(tabc, defect(lhs, direct), defect(lhs, via))

    if QA is None:
        QA = build_Q(wA, ppA)
    if QB is None:
        QB = build_Q(wB, ppB)
    (algQA, embA), (algQB, embB) = QA, QB
    comp = AlgebraMorphism(adjoint(embB.u) @ Qt @ embA.u, algQA, algQB)
    inv = check_involutive(comp, tol)
    return [
        check("theta_onb_extension", "ONB(B(a)) can be chosen to contain theta(ONB(A(a)))", ext, tol),
        check("theta_p_projection", "theta(p_A) is a projection below p_B", below, tol),
        check("q_partial_isometry", "Q(theta)Q(theta)^* = theta(p_A), Q(theta)^*Q(theta) = p_A",
              piso, tol),
        check("remove_theta", "pi^B_a(theta f) = Q(theta) pi^A_a(f)", remove, tol),
        check("replace_theta_abc", "theta-dressed capped pair expands through Delta", tabc, tol),
    ] + inv.checks("q_theta")
