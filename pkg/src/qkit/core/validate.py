"""Coherence checks for input category data."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..report import Check, check
from .category import CategorySpec
from .duality import cup_R, cup_S
from .morphism import Letter, ObjectHandle, adjoint, defect, identity, random_morphism, simple, tensor

__all__ = ["ValidationReport", "validate_category", "pentagon_defect", "unitarity_defect"]


@dataclass
class ValidationReport:
    """Max-abs defects of every coherence condition; passes iff all are ``<= tol``."""

    defects: dict[str, float]
    tol: float
    per_label: dict[str, dict[str, float]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v <= self.tol for v in self.defects.values())

    def checks(self) -> list[Check]:
        return [check(name, _ANCHORS[name], v, self.tol) for name, v in self.defects.items()]


_ANCHORS = {
    "pentagon": "pentagon equation",
    "f_unitarity": "F-matrices are unitary",
    "unit_triviality": "F-moves with a unit leg are trivial",
    "duality_fusion": "N[a][b][c] = N[b̄][ā][c̄], N[a][ā][1] = 1",
    "dimension_homomorphism": "d_a d_b = sum_c N[a][b][c] d_c",
    "dimension_duality": "d_a = d_ā > 0, d_1 = 1",
    "fs_indicator": "Frobenius-Schur indicator matches F^{aaa}_a",
    "zigzag": "zig-zag identities for R_a, S_a",
    "standardness": "R_a^* R_a = S_a^* S_a = d_a",
    "balancing": "balancing of the standard solutions on direct sums",
}


def _entry(spec: CategorySpec, a, b, c, d, row, col) -> complex:
    rows = spec.f_rows(a, b, c, d)
    cidx = spec.f_col_index(a, b, c, d)
    if row not in rows or col not in cidx:
        return 0.0
    return spec.fmatrix(a, b, c, d)[rows.index(row), cidx[col]]


def pentagon_defect(spec: CategorySpec) -> float:
    """Max residual of the pentagon over all label tuples.

    Starting from ``(((a b)_f c)_g d)_e`` the two routes to ``(a (b (c d)_h)_k)_e`` are
    (two moves)  F^{fcd}_e then F^{abh}_e, and
    (three moves) F^{abc}_g, then F^{ald}_e, then F^{bcd}_k.
    """
    N = spec.fusion
    r = range(spec.rank)
    worst = 0.0
    for a in r:
        for b in r:
            for c in r:
                for d in r:
                    for e in r:
                        left = [(f, al, g, be, ga) for f in r for al in range(N[a, b, f])
                                for g in r for be in range(N[f, c, g]) for ga in range(N[g, d, e])]
                        if not left:
                            continue
                        right = [(h, mu, k, rho, si) for h in r for mu in range(N[c, d, h])
                                 for k in r for rho in range(N[b, h, k]) for si in range(N[a, k, e])]
                        for f, al, g, be, ga in left:
                            for h, mu, k, rho, si in right:
                                v1 = sum(_entry(spec, f, c, d, e, (g, be, ga), (h, mu, nu))
                                         * _entry(spec, a, b, h, e, (f, al, nu), (k, rho, si))
                                         for nu in range(N[f, h, e]))
                                v2 = 0.0
                                for l in r:
                                    for x in range(N[b, c, l]):
                                        for y in range(N[a, l, g]):
                                            for z in range(N[l, d, k]):
                                                v2 += (_entry(spec, a, b, c, g, (f, al, be), (l, x, y))
                                                       * _entry(spec, a, l, d, e, (g, y, ga), (k, z, si))
                                                       * _entry(spec, b, c, d, k, (l, x, z), (h, mu, rho)))
                                worst = max(worst, abs(v1 - v2))
    return float(worst)


def unitarity_defect(spec: CategorySpec) -> float:
    worst = 0.0
    for key in spec.admissible():
        M = spec.fmatrix(*key)
        if M.shape[0] != M.shape[1]:
            return float("inf")
        worst = max(worst, np.abs(M @ M.conj().T - np.eye(M.shape[0])).max())
    return float(worst)


def _unit_triviality_defect(spec: CategorySpec) -> float:
    u = spec.unit
    worst = 0.0
    for a, b, c, d in spec.admissible():
        if u not in (a, b, c):
            continue
        rows, cols = spec.f_rows(a, b, c, d), spec.f_cols(a, b, c, d)
        target = np.zeros((len(rows), len(cols)))
        for i, (e, al, be) in enumerate(rows):
            if b == u:
                col = (c, 0, be)
            elif a == u:
                col = (d, be, 0)
            else:
                col = (b, 0, al)
            if col in cols:
                target[i, cols.index(col)] = 1.0
        worst = max(worst, np.abs(spec.fmatrix(a, b, c, d) - target).max())
    return float(worst)


def _fusion_duality_defect(spec: CategorySpec) -> float:
    N, du, u = spec.fusion, spec.dual, spec.unit
    bad = 0
    if du[u] != u or np.any(du[du] != np.arange(spec.rank)):
        bad += 1
    for a in range(spec.rank):
        if N[a, du[a], u] != 1:
            bad += 1
        for b in range(spec.rank):
            for c in range(spec.rank):
                if N[a, b, c] != N[du[b], du[a], du[c]]:
                    bad += 1
    return float(bad)


def validate_category(spec: CategorySpec, tol: float = 1e-9, seed: int = 0) -> ValidationReport:
    """Evaluate all coherence conditions; failures are reported, never raised."""
    N, dims, du = spec.fusion, spec.dims, spec.dual
    defects: dict[str, float] = {}
    defects["pentagon"] = pentagon_defect(spec)
    defects["f_unitarity"] = unitarity_defect(spec)
    defects["unit_triviality"] = _unit_triviality_defect(spec)
    defects["duality_fusion"] = _fusion_duality_defect(spec)
    lhs = np.outer(dims, dims)
    rhs = np.einsum("abc,c->ab", N, dims)
    defects["dimension_homomorphism"] = float(np.abs(lhs - rhs).max())
    dd = max(float(np.abs(dims - dims[du]).max()), abs(dims[spec.unit] - 1.0))
    defects["dimension_duality"] = dd if dims.min() > 0 else float("inf")

    per_label: dict[str, dict[str, float]] = {}
    fs = zig = std = 0.0
    for a in range(spec.rank):
        X = simple(spec, a)
        Xb = X.conj()
        R, S = cup_R(X), cup_S(X)
        z1 = defect(tensor(adjoint(S), identity(X)) @ tensor(identity(X), R), identity(X))
        z2 = defect(tensor(adjoint(R), identity(Xb)) @ tensor(identity(Xb), S), identity(Xb))
        rr = abs((adjoint(R) @ R).scalar() - dims[a])
        ss = abs((adjoint(S) @ S).scalar() - dims[a])
        f_sign = 0.0
        if du[a] == a:
            # in a unitary gauge F^{aaa}_a[1,1] = kappa_a / d_a
            rows = spec.f_rows(a, a, a, a)
            cols = spec.f_cols(a, a, a, a)
            u = spec.unit
            x = spec.fmatrix(a, a, a, a)[rows.index((u, 0, 0)), cols.index((u, 0, 0))]
            f_sign = abs(spec.fs_indicator[a] - dims[a] * x)
        per_label[spec.labels[a]] = {"zigzag": max(z1, z2), "standardness": max(rr, ss),
                                     "fs_indicator": f_sign}
        fs, zig, std = max(fs, f_sign), max(zig, z1, z2), max(std, rr, ss)
    defects["fs_indicator"] = float(fs)
    defects["zigzag"] = float(zig)
    defects["standardness"] = float(std)

    rng = np.random.default_rng(seed)
    X = ObjectHandle(spec, (Letter(tuple([2] * spec.rank)),))
    R, S = cup_R(X), cup_S(X)
    bal = 0.0
    for _ in range(3):
        f = random_morphism(X, X, rng)
        lhs = (adjoint(R) @ tensor(identity(X.conj()), f) @ R).scalar()
        rhs = (adjoint(S) @ tensor(f, identity(X.conj())) @ S).scalar()
        bal = max(bal, abs(lhs - rhs) / max(1.0, abs(lhs)))
    defects["balancing"] = float(bal)
    return ValidationReport(defects, tol, per_label)
