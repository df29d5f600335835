"""The W*-algebra object of a normalized irreducible Q-system.

For a Q-system ``(A, m, i)`` the sector spaces are ``A(a) = C(a, A)`` for simple ``a``. They carry
the *-structure ``j_a(f) = sigma_A^{-1} conj(f)``, the L² inner product, the left regular
representation ``lambda_a(f) = m (f ⊗ id_A)`` and its matrix-coefficient form
``pi_a(f) = d_H^{-1/2} (lambda_a(f) ⊗ id) (id ⊗ coev_H)`` with ``H = A``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    Morphism,
    ObjectHandle,
    adjoint,
    conjugate,
    coev,
    cup_R,
    cup_S,
    defect,
    identity,
    inner_product,
    inverse,
    onb_and_isom,
    random_morphism,
    simple,
    tensor,
    unit_object,
    with_source,
)
from .frobenius import AlgebraMorphism, AlgebraObject, qsystem_check, sigma_maps
from .report import Check, check

__all__ = [
    "WStarError",
    "WStarData",
    "wstar_object",
    "j_map",
    "l2_inner",
    "l2_inner_both",
    "gns_lambda",
    "induced_pi",
    "sector_bases",
    "remixed_onb",
    "check_star_axioms",
    "check_wstar_identities",
    "wstar_on_morphism",
    "coefficients",
]


class WStarError(ValueError):
    """Input is not a normalized irreducible Q-system."""


@dataclass
class WStarData:
    """Sector data of the W*-algebra object built from ``alg``.

    Attributes
    ----------
    alg : AlgebraObject
        The underlying Q-system.
    sectors : list of int
        Simple labels ``a`` with ``C(a, A) != 0``.
    sector_basis : dict
        ``a -> [tree vectors of C(a, A)]``.
    gram : dict
        ``a -> `` Gram matrix of ``sector_basis[a]`` under the L² inner product.
    onb : dict
        ``a -> `` L²-orthonormal basis of ``C(a, A)``; at the unit this is ``[i]``. All
        sector vectors have the one-letter simple object as source.
    j_matrices : dict
        ``a -> J`` with ``j_a(sum_k c_k v_k) = sum_l (J conj(c))_l v'_l``, ``v`` and ``v'`` the
        sector bases of ``a`` and ``ā``.
    H : ObjectHandle
        The L² object; equal to ``A``.
    lam, pi, B : dict
        ``a -> `` lists of ``lambda_a(f)``, ``pi_a(f)`` and ``sqrt(d_a) pi_a(f)`` over ``onb[a]``.
    """

    alg: AlgebraObject
    sectors: list
    sector_basis: dict
    gram: dict
    onb: dict
    j_matrices: dict
    H: ObjectHandle
    lam: dict
    pi: dict
    B: dict
    sigma: Morphism
    sigma_inv: Morphism
    tol: float = 1e-9

    @property
    def spec(self):
        return self.alg.spec

    @property
    def d_H(self) -> float:
        return self.H.dim

    def dim(self, a) -> int:
        return len(self.sector_basis.get(self.spec.index(a), []))


def j_map(w: WStarData | AlgebraObject, f: Morphism) -> Morphism:
    """``j(f) = sigma_A^{-1} ∘ conj(f)`` for ``f : X -> A``; antilinear in ``f``."""
    if isinstance(w, WStarData):
        sinv = w.sigma_inv
    else:
        sinv = inverse(sigma_maps(w)[0])
    return sinv @ conjugate(f)


def l2_inner_both(alg: AlgebraObject, f: Morphism, g: Morphism, sigma_inv: Morphism | None = None
                  ) -> tuple[complex, complex]:
    """Left and right (tracially flipped) closed diagrams for ``<f|g>`` with ``f, g in C(a, A)``.

    left  = i^* m (j(f) ⊗ g) R_a
    right = i^* m (g ⊗ j(f)) S_a
    """
    a = f.src
    if sigma_inv is None:
        sigma_inv = inverse(sigma_maps(alg)[0])
    jf = sigma_inv @ conjugate(f)
    top = adjoint(alg.i) @ alg.m
    left = (top @ tensor(jf, g) @ cup_R(a)).scalar()
    right = (top @ tensor(g, jf) @ cup_S(a)).scalar()
    return left, right


def l2_inner(w: WStarData, f: Morphism, g: Morphism) -> complex:
    """L² inner product, antilinear in ``f``."""
    return l2_inner_both(w.alg, f, g, w.sigma_inv)[0]


def gns_lambda(alg: AlgebraObject | WStarData, f: Morphism) -> Morphism:
    """``lambda(f) = m ∘ (f ⊗ id_A) : X ⊗ A -> A``."""
    if isinstance(alg, WStarData):
        alg = alg.alg
    return alg.m @ tensor(f, identity(alg.A))


def induced_pi(alg: AlgebraObject | WStarData, f: Morphism, normalized: bool = True) -> Morphism:
    """``pi(f) = d_H^{-1/2} (lambda(f) ⊗ id_H̄) ∘ (id_X ⊗ coev_H) : X -> H ⊗ H̄``.

    ``normalized=False`` drops the ``d_H^{-1/2}``.
    """
    if isinstance(alg, WStarData):
        alg = alg.alg
    H = alg.A
    lam = gns_lambda(alg, f)
    out = tensor(lam, identity(H.conj())) @ tensor(identity(f.src), coev(H))
    return out / np.sqrt(H.dim) if normalized else out


def _orthonormalize(G: np.ndarray, tol: float) -> np.ndarray:
    """Coefficient matrix ``C`` with ``C^† G C = 1``: modified Gram-Schmidt with pivoting.

    Column ``k`` of ``C`` expresses the ``k``-th orthonormal vector in the original basis; the
    pivot is always the remaining vector with the largest residual norm (first one on ties).
    """
    n = G.shape[0]
    V = np.eye(n, dtype=complex)
    out = []
    remaining = list(range(n))
    while remaining:
        norms = [np.vdot(V[:, k], G @ V[:, k]).real for k in remaining]
        k = remaining[int(np.argmax(norms))]
        nk = max(norms)
        if nk <= tol:
            raise WStarError("L² Gram matrix is not positive definite")
        q = V[:, k] / np.sqrt(nk)
        out.append(q)
        remaining.remove(k)
        for l in remaining:
            V[:, l] = V[:, l] - q * np.vdot(q, G @ V[:, l])
    return np.array(out).T


def _combine(basis: list[Morphism], coeffs: np.ndarray) -> Morphism:
    out = coeffs[0] * basis[0]
    for c, v in zip(coeffs[1:], basis[1:]):
        out = out + c * v
    return out


def coefficients(basis: list[Morphism], f: Morphism) -> np.ndarray:
    """Coordinates of ``f`` in a list of tree vectors (entries of the single nonzero block)."""
    c = basis[0].src.spec.index(next(iter(basis[0].blocks)))
    M = np.hstack([b.block(c) for b in basis])
    return np.linalg.lstsq(M, f.block(c), rcond=None)[0][:, 0]


def remixed_onb(w: WStarData, rng: np.random.Generator) -> dict:
    """Every ONB except the unit one rotated by a random unitary."""
    out = {}
    for a in w.sectors:
        onb = w.onb[a]
        if a != w.spec.unit:
            n = len(onb)
            Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            U, _ = np.linalg.qr(Z)
            onb = [_combine(onb, U[:, k]) for k in range(n)]
        out[a] = onb
    return out


def sector_bases(w: WStarData, rng: np.random.Generator | None = None, onb: dict | None = None
                 ) -> dict:
    """``B_a = {sqrt(d_a) pi_a(f) : f in ONB(A(a))}``.

    With ``rng`` the ONBs are first remixed by :func:`remixed_onb`, which is how basis
    independence of downstream quantities gets tested.
    """
    if onb is None:
        onb = w.onb if rng is None else remixed_onb(w, rng)
    return {a: [np.sqrt(w.spec.dims[a]) * induced_pi(w.alg, f) for f in onb[a]] for a in w.sectors}


def wstar_object(alg: AlgebraObject, tol: float = 1e-9, seed: int = 0) -> WStarData:
    """Build the W*-algebra object; refuses anything but a normalized irreducible Q-system."""
    rep = qsystem_check(alg, tol, seed)
    if not rep.is_qsystem:
        raise WStarError("not a Q-system")
    if not rep.normalized:
        raise WStarError(f"Q-system is not normalized (i^*i = {rep.lambda_prime:.6g})")
    if not rep.irreducible:
        raise WStarError("Q-system is not irreducible")
    spec, A = alg.spec, alg.A
    sigma = sigma_maps(alg)[0]
    sigma_inv = adjoint(sigma)
    sectors = [c for c in range(spec.rank) if A.mult[c]]
    basis, gram, onb, lam, pi, B = {}, {}, {}, {}, {}, {}
    for a in sectors:
        _, isom = onb_and_isom(a, A)
        basis[a] = isom
        G = np.array([[l2_inner_both(alg, f, g, sigma_inv)[0] for g in isom] for f in isom])
        gram[a] = G
        if a == spec.unit:
            onb[a] = [with_source(alg.i, simple(spec, a))]
        else:
            C = _orthonormalize(G, tol)
            onb[a] = [_combine(isom, C[:, k]) for k in range(C.shape[1])]
        lam[a] = [gns_lambda(alg, f) for f in onb[a]]
        pi[a] = [induced_pi(alg, f) for f in onb[a]]
        B[a] = [np.sqrt(spec.dims[a]) * x for x in pi[a]]
    J = {}
    for a in sectors:
        ab = int(spec.dual[a])
        J[a] = np.array([coefficients(basis[ab], sigma_inv @ conjugate(v)) for v in basis[a]]).T
    return WStarData(alg, sectors, basis, gram, onb, J, A, lam, pi, B, sigma, sigma_inv, tol)


def _rand_sector(w: WStarData, a: int, rng) -> Morphism:
    z = rng.normal(size=w.dim(a)) + 1j * rng.normal(size=w.dim(a))
    return _combine(w.sector_basis[a], z)


def check_star_axioms(w: WStarData, tol: float | None = None, seed: int = 0, n_random: int = 3
                      ) -> list[Check]:
    """Conjugate naturality, involutivity, unitality and monoidality of ``j``, plus positivity."""
    tol = w.tol if tol is None else tol
    rng = np.random.default_rng(seed)
    spec, alg = w.spec, w.alg
    A = alg.A

    # naturality on a composite source: j(f ∘ h) = j(f) ∘ conj(h)
    nat = 0.0
    for a in w.sectors:
        Y = simple(spec, a)
        X = Y.tensor(unit_object(spec))
        for _ in range(n_random):
            f = _rand_sector(w, a, rng)
            h = random_morphism(X, Y, rng)
            nat = max(nat, defect(j_map(w, f @ h), j_map(w, f) @ conjugate(h)))
        # and along a direct-sum object, where hom spaces are not one-dimensional
    Xs = ObjectHandle(spec, (A.word[0],)) if len(A) else A
    for _ in range(n_random):
        f = random_morphism(Xs, A, rng)
        h = random_morphism(Xs, Xs, rng)
        nat = max(nat, defect(j_map(w, f @ h), j_map(w, f) @ conjugate(h)))

    inv = 0.0
    for a in w.sectors:
        for f in w.sector_basis[a] + [_rand_sector(w, a, rng)]:
            inv = max(inv, defect(j_map(w, j_map(w, f)), f))
    unit = defect(j_map(w, alg.i), alg.i)

    mon = 0.0
    for a in w.sectors:
        for b in w.sectors:
            f, g = _rand_sector(w, a, rng), _rand_sector(w, b, rng)
            lhs = j_map(w, alg.m @ tensor(f, g))
            rhs = alg.m @ tensor(j_map(w, g), j_map(w, f))
            mon = max(mon, defect(lhs, rhs))

    pos = 0.0
    for a in w.sectors:
        fam = [_rand_sector(w, a, rng) for _ in range(w.dim(a) + 2)]
        G = np.array([[l2_inner(w, f, g) for g in fam] for f in fam])
        herm = float(np.abs(G - G.conj().T).max())
        ev = np.linalg.eigvalsh((G + G.conj().T) / 2)
        pos = max(pos, herm, max(0.0, -float(ev.min())) / max(1.0, float(ev.max())))

    # j and the dagger: the mate of lambda(f)^* is lambda(j(f))
    dag = 0.0
    for a in w.sectors:
        for f in w.onb[a]:
            X = f.src
            lhs = tensor(adjoint(cup_R(X)), identity(A)) @ tensor(identity(X.conj()), adjoint(gns_lambda(alg, f)))
            dag = max(dag, defect(lhs, gns_lambda(alg, j_map(w, f))))

    return [
        check("j_natural", "j(f ∘ h) = j(f) ∘ conj(h)", nat, tol),
        check("j_involutive", "j_ā ∘ j_a = id", inv, tol),
        check("j_unital", "j_1(i) = i", unit, tol),
        check("j_monoidal", "j(m(f⊗g)) = m(j(g)⊗j(f))", mon, tol),
        check("wstar_positivity", "Gram matrices of the L² inner product are positive", pos, tol),
        check("j_dagger", "(ev_a ⊗ id)(id ⊗ lambda_a(f)^*) = lambda_ā(j_a(f))", dag, tol),
    ]


def check_wstar_identities(w: WStarData, tol: float | None = None, seed: int = 0) -> list[Check]:
    """Traciality, H = A, the connected-case operator identity, pi identities and the ONB."""
    tol = w.tol if tol is None else tol
    spec, alg = w.spec, w.alg
    A, d_H = w.H, w.d_H
    idA = identity(A)
    trac = h_eq_a = ip_hilb = open_ip = pi_ids = faith = lam_comp = 0.0
    for a in w.sectors:
        da = spec.dims[a]
        vs = w.sector_basis[a]
        for f in vs:
            for g in vs:
                left, right = l2_inner_both(alg, f, g, w.sigma_inv)
                trac = max(trac, abs(left - right))
                h_eq_a = max(h_eq_a, abs(left - inner_product(f, g)))
                lhs = gns_lambda(alg, g) @ adjoint(gns_lambda(alg, f))
                ip_hilb = max(ip_hilb, defect(lhs, left * idA))
                pf, pg = induced_pi(alg, f), induced_pi(alg, g)
                pi_ids = max(pi_ids, defect(adjoint(pf) @ pg, (left / da) * identity(f.src)))
        for k, al in enumerate(w.B[a]):
            for l, be in enumerate(w.B[a]):
                target = float(k == l) * identity(al.src)
                open_ip = max(open_ip, defect(adjoint(al) @ be, target))
        lam = np.array([gns_lambda(alg, f).vector() for f in vs]).T
        if np.linalg.matrix_rank(lam) != len(vs):
            faith = 1.0
    # unit conventions
    unit_pi = defect(induced_pi(alg, alg.i), coev(A) / np.sqrt(d_H))
    unit_lam = defect(gns_lambda(alg, alg.i), tensor(identity(unit_object(spec)), idA))
    # lambda is multiplicative
    for a in w.sectors:
        for b in w.sectors:
            f, g = w.onb[a][0], w.onb[b][0]
            lhs = gns_lambda(alg, alg.m @ tensor(f, g))
            rhs = gns_lambda(alg, f) @ tensor(identity(f.src), gns_lambda(alg, g))
            lam_comp = max(lam_comp, defect(lhs, rhs))
    count = abs(sum(w.dim(a) * spec.dims[a] for a in w.sectors) - d_H)
    return [
        check("l2_traciality", "left and right closed diagrams for <f|g>_a agree", trac, tol),
        check("l2_equals_categorical", "H is canonically unitarily isomorphic to A", h_eq_a, tol),
        check("l2_connected_identity", "lambda_a(g) lambda_a(f)^* = <f|g>_a id", ip_hilb, tol),
        check("pi_inner_product", "pi_a(f)^* pi_a(f') = d_a^{-1} <f|f'>_a id_a", pi_ids, tol),
        check("open_inner_product", "alpha^* alpha' = delta id_a on B_a", open_ip, tol),
        check("pi_unit", "pi_1(i) = d_H^{-1/2} coev_H", unit_pi, tol),
        check("lambda_unit", "lambda_1(i) = id_A", unit_lam, tol),
        check("lambda_multiplicative", "lambda(m(f⊗g)) = lambda(f)(id⊗lambda(g))", lam_comp, tol),
        check("lambda_faithful", "lambda_a is injective", faith, tol),
        check("counting_identity", "sum_a dim A(a) d_a = d_H", count, tol),
    ]


def wstar_on_morphism(theta: AlgebraMorphism, wA: WStarData, wB: WStarData) -> dict:
    """Matrices of ``f -> theta ∘ f`` from ``ONB(A(a))`` to ``ONB(B(a))`` for each sector of ``A``."""
    out = {}
    for a in wA.sectors:
        cols = []
        for f in wA.onb[a]:
            tf = theta.theta @ f
            cols.append([l2_inner(wB, e, tf) for e in wB.onb.get(a, [])])
        out[a] = np.array(cols, dtype=complex).T.reshape(len(wB.onb.get(a, [])), len(cols))
    return out
