"""Round trips between Q-systems and W*-algebra objects, and naturality of the comparison maps."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Morphism, adjoint, defect, identity, tensor
from .frobenius import AlgebraMorphism, AlgebraObject, check_involutive, qsystem_check
from .qsystem import (
    SubobjectEmbedding,
    build_p,
    build_Q,
    check_delta_identities,
    check_p,
    check_p_absorbs_pi,
    check_p_lemmas,
    check_q_morphism,
    q_morphism,
)
from .report import Check, check
from .wstar import (
    WStarData,
    check_star_axioms,
    check_wstar_identities,
    coefficients,
    induced_pi,
    j_map,
    l2_inner,
    wstar_object,
    wstar_on_morphism,
)

__all__ = [
    "RoundTripReport",
    "Pipeline",
    "run_pipeline",
    "eta",
    "check_eta",
    "zeta",
    "check_zeta",
    "compressed_q",
    "check_naturality",
    "check_functoriality",
    "roundtrip_report",
]


@dataclass
class Pipeline:
    """Everything built on the way ``A -> W*(A) -> Q(W*(A))``."""

    w: WStarData
    Q: AlgebraObject
    emb: SubobjectEmbedding

    @property
    def u(self) -> Morphism:
        return self.emb.u


def run_pipeline(alg: AlgebraObject, tol: float = 1e-9, seed: int = 0) -> Pipeline:
    w = wstar_object(alg, tol, seed)
    Q, emb = build_Q(w)
    return Pipeline(w, Q, emb)


def eta(pl: Pipeline, f: Morphism) -> Morphism:
    """``eta(f) = u^* pi(f)``: from ``C(X, A)`` into ``C(X, Q)``."""
    return adjoint(pl.u) @ induced_pi(pl.w.alg, f)


def check_eta(pl: Pipeline, tol: float | None = None, wQ: WStarData | None = None) -> list[Check]:
    """Units, multiplications and *-structures are intertwined; each sector map is bijective."""
    w = pl.w
    tol = w.tol if tol is None else tol
    alg, Q = w.alg, pl.Q
    wQ = wQ or wstar_object(Q, tol)
    unit = defect(eta(pl, alg.i), Q.i)
    mult = star = 0.0
    for a in w.sectors:
        for b in w.sectors:
            for f in w.onb[a]:
                for g in w.onb[b]:
                    lhs = eta(pl, alg.m @ tensor(f, g))
                    rhs = Q.m @ tensor(eta(pl, f), eta(pl, g))
                    mult = max(mult, defect(lhs, rhs))
        for f in w.sector_basis[a] + w.onb[a]:
            star = max(star, defect(eta(pl, j_map(w, f)), j_map(wQ, eta(pl, f))))
    bij = iso = 0.0
    for a in w.sectors:
        if wQ.dim(a) != w.dim(a):
            bij = 1.0
            continue
        imgs = [eta(pl, f) for f in w.onb[a]]
        M = np.array([coefficients(wQ.sector_basis[a], x) for x in imgs]).T
        if np.linalg.matrix_rank(M, tol=1e-8) != w.dim(a):
            bij = 1.0
        G = np.array([[l2_inner(wQ, x, y) for y in imgs] for x in imgs])
        iso = max(iso, float(np.abs(G - np.eye(len(imgs))).max()))
    if any(wQ.dim(a) != w.dim(a) for a in wQ.sectors):
        bij = 1.0
    return [
        check("eta_unit", "eta_1(i_A) = i_Q", unit, tol),
        check("eta_multiplicative", "eta(m(f⊗g)) = m_Q(eta(f)⊗eta(g))", mult, tol),
        check("eta_star", "eta(j(f)) = j_Q(eta(f))", star, tol),
        check("eta_bijective", "eta_a is a bijection C(a, A) -> C(a, Q)", bij, tol),
        check("eta_isometric", "eta_a preserves the L² inner products", iso, tol),
    ]


def zeta(pl: Pipeline) -> Morphism:
    """``zeta = u^* pi_A(id_A) = d_A^{-1/2} u^* (m ⊗ id)(id ⊗ coev_A) : A -> Q``."""
    A = pl.w.alg.A
    return adjoint(pl.u) @ induced_pi(pl.w.alg, identity(A))


def check_zeta(pl: Pipeline, tol: float | None = None) -> list[Check]:
    tol = pl.w.tol if tol is None else tol
    alg, Q = pl.w.alg, pl.Q
    z = zeta(pl)
    unitary = max(defect(adjoint(z) @ z, identity(alg.A)), defect(z @ adjoint(z), identity(Q.A)))
    rep = check_involutive(AlgebraMorphism(z, alg, Q), tol)
    mult_ok = all(int(Q.A.mult[c]) == int(alg.A.mult[c]) for c in range(alg.spec.rank))
    return [
        check("zeta_unitary", "zeta^* zeta = id_A, zeta zeta^* = id_Q", unitary, tol),
        *rep.checks("zeta"),
        check("roundtrip_multiplicities", "Q(W*(A)) has the multiplicities of A",
              0.0 if mult_ok else 1.0, tol),
    ]


def compressed_q(theta: AlgebraMorphism, plA: Pipeline, plB: Pipeline) -> Morphism:
    """``u_B^* Q(theta) u_A : Q(A) -> Q(B)``."""
    return adjoint(plB.u) @ q_morphism(theta, plA.w, plB.w).Qtheta @ plA.u


def check_naturality(theta: AlgebraMorphism, plA: Pipeline, plB: Pipeline, tol: float | None = None
                     ) -> list[Check]:
    """``Q(theta) eta^A = eta^B theta`` on every sector and ``Q(theta) zeta_A = zeta_B theta``."""
    tol = plA.w.tol if tol is None else tol
    qt = compressed_q(theta, plA, plB)
    sq1 = 0.0
    for a in plA.w.sectors:
        for f in plA.w.sector_basis[a] + plA.w.onb[a]:
            sq1 = max(sq1, defect(qt @ eta(plA, f), eta(plB, theta.theta @ f)))
    sq2 = defect(qt @ zeta(plA), zeta(plB) @ theta.theta)
    return [
        check("eta_natural", "W*Q(theta) eta^A = eta^B theta", sq1, tol),
        check("zeta_natural", "QW*(theta) zeta_A = zeta_B theta", sq2, tol),
    ]


def check_functoriality(t1: AlgebraMorphism, t2: AlgebraMorphism, pls: tuple, tol: float = 1e-9
                        ) -> list[Check]:
    """Identities and composites for W* and Q, and pasting of the naturality squares.

    ``t1 : A -> B``, ``t2 : B -> C`` and ``pls = (plA, plB, plC)``.
    """
    plA, plB, plC = pls
    t21 = t1.then(t2)
    qid = defect(q_morphism(AlgebraMorphism(identity(plA.w.alg.A), t1.source, t1.source),
                            plA.w, plA.w).Qtheta, build_p(plA.w).p)
    q1 = q_morphism(t1, plA.w, plB.w).Qtheta
    q2 = q_morphism(t2, plB.w, plC.w).Qtheta
    q21 = q_morphism(t21, plA.w, plC.w).Qtheta
    qcomp = defect(q21, q2 @ q1)

    wid = wstar_on_morphism(AlgebraMorphism(identity(plA.w.alg.A), t1.source, t1.source),
                            plA.w, plA.w)
    wid_d = max(float(np.abs(M - np.eye(M.shape[0])).max()) for M in wid.values())
    w1 = wstar_on_morphism(t1, plA.w, plB.w)
    w2 = wstar_on_morphism(t2, plB.w, plC.w)
    w21 = wstar_on_morphism(t21, plA.w, plC.w)
    wcomp = max(float(np.abs(w21[a] - w2[a] @ w1[a]).max()) if w21[a].size else 0.0 for a in w21)
    iso = max(float(np.abs(M.conj().T @ M - np.eye(M.shape[1])).max()) for M in w21.values())

    # the square for the composite is the pasting of the two squares
    c1, c2 = compressed_q(t1, plA, plB), compressed_q(t2, plB, plC)
    c21 = compressed_q(t21, plA, plC)
    paste = max(defect(c21, c2 @ c1),
                defect(c21 @ zeta(plA), zeta(plC) @ t21.theta))
    return [
        check("q_identity", "Q(id) = p", qid, tol),
        check("q_composite", "Q(theta2 theta1) = Q(theta2) Q(theta1)", qcomp, tol),
        check("wstar_identity", "W*(id) = id", wid_d, tol),
        check("wstar_composite", "W*(theta2 theta1) = W*(theta2) W*(theta1)", wcomp, tol),
        check("wstar_isometry", "theta induces an isometry of L² sector spaces", iso, tol),
        check("naturality_pasting", "the composite square is the pasting of the two squares",
              paste, tol),
    ]


@dataclass
class RoundTripReport:
    """Aggregated checks of one round trip.

    ``failing_stage`` names the first stage that failed (or raised), ``None`` on success.
    """

    direction: str
    tol: float
    stages: list = field(default_factory=list)
    failing_stage: str | None = None
    error: str | None = None

    @property
    def checks(self) -> list[Check]:
        return [c for _, cs in self.stages for c in cs]

    def _max(self, prefixes) -> float:
        vals = [c.defect for c in self.checks if c.name.startswith(prefixes)]
        return max(vals, default=0.0)

    @property
    def iso_defect(self) -> float:
        return self._max(("zeta_unitary", "eta_bijective", "eta_isometric"))

    @property
    def algebra_defect(self) -> float:
        return self._max(("eta_unit", "eta_multiplicative", "zeta_multiplicative", "zeta_unital"))

    @property
    def star_or_involutive_defect(self) -> float:
        return self._max(("eta_star", "zeta_involutive"))

    @property
    def naturality_defect(self) -> float:
        return self._max(("eta_natural", "zeta_natural"))

    @property
    def max_defect(self) -> float:
        return max((c.defect for c in self.checks), default=0.0)

    @property
    def passed(self) -> bool:
        return self.failing_stage is None and all(c.passed for c in self.checks)


def _stage(report: RoundTripReport, name: str, fn) -> object:
    if report.failing_stage is not None:
        return None
    try:
        out = fn()
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        report.failing_stage = name
        report.error = str(exc)
        return None
    checks, value = out if isinstance(out, tuple) else (out, None)
    report.stages.append((name, checks))
    if not all(c.passed for c in checks):
        report.failing_stage = name
    return value


def roundtrip_report(obj: AlgebraObject | WStarData, tol: float = 1e-9, seed: int = 0,
                     morphism: AlgebraMorphism | None = None) -> RoundTripReport:
    """Run the whole pipeline with every lemma check; stop at the first failing stage.

    For a Q-system input the direction is ``Q -> W* -> Q`` and ``zeta`` is certified; for a
    W*-object input it is ``W* -> Q -> W*`` and ``eta`` is certified. With ``morphism`` (an
    involutive algebra morphism into or out of the input algebra) the naturality squares are
    added.
    """
    if isinstance(obj, WStarData):
        report = RoundTripReport("W*->Q->W*", tol)
        alg = obj.alg
        w = obj
    else:
        report = RoundTripReport("Q->W*->Q", tol)
        alg = obj
        w = None

    def ladder():
        r = qsystem_check(alg, tol, seed)
        return r.checks(), r
    _stage(report, "qsystem_check", ladder)

    def wstar():
        ww = w or wstar_object(alg, tol, seed)
        return check_star_axioms(ww, tol, seed) + check_wstar_identities(ww, tol, seed), ww
    w = _stage(report, "wstar", wstar)

    def projector():
        pp = build_p(w)
        cs = check_p(pp, w, tol, seed) + check_p_lemmas(pp, w, tol) + check_p_absorbs_pi(pp, w, tol)
        return cs, pp
    pp = _stage(report, "projector", projector)
    _stage(report, "delta", lambda: check_delta_identities(w, tol=tol))

    def qsys():
        Q, emb = build_Q(w, pp)
        r = qsystem_check(Q, tol, seed)
        cs = [Check("Q_" + c.name, c.anchor, c.defect, c.tolerance, c.passed) for c in r.checks()]
        return cs, Pipeline(w, Q, emb)
    pl = _stage(report, "build_Q", qsys)

    def eta_stage():
        return check_eta(pl, tol)
    _stage(report, "eta", eta_stage)

    if report.direction == "Q->W*->Q":
        _stage(report, "zeta", lambda: check_zeta(pl, tol))

    if morphism is not None:
        def natural():
            plA = pl if morphism.source is alg else run_pipeline(morphism.source, tol, seed)
            plB = pl if morphism.target is alg else run_pipeline(morphism.target, tol, seed)
            inv = check_involutive(morphism, tol).checks("theta")
            qm = check_q_morphism(morphism, plA.w, plB.w, (plA.Q, plA.emb), (plB.Q, plB.emb), tol)
            return inv + qm + check_naturality(morphism, plA, plB, tol)
        _stage(report, "naturality", natural)
    return report
