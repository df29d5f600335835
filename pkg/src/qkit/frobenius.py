"""Algebra objects, the Q-system axioms and involutive algebra morphisms."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .core import (
    Morphism,
    ObjectHandle,
    adjoint,
    canonical_iso,
    conjugate,
    coev,
    cup_R,
    cup_S,
    defect,
    ev,
    identity,
    letter,
    random_morphism,
    simple,
    tensor,
    unit_object,
)
from .core.category import CategorySpec
from .report import Check, check

__all__ = [
    "AlgebraObject",
    "AlgebraMorphism",
    "FrobeniusReport",
    "InvolutiveReport",
    "check_algebra",
    "check_frobenius",
    "separability_and_unit_norm",
    "sigma_maps",
    "qsystem_check",
    "normalize_qsystem",
    "check_involutive",
    "check_cstar_iso_condition",
    "trivial_algebra",
    "group_algebra",
    "inner_hom_algebra",
    "inner_hom_qsystem",
    "flatten",
    "conjugate_by",
    "unit_inclusion",
    "group_inclusion",
    "identity_morphism",
]


@dataclass(frozen=True)
class AlgebraObject:
    """An object ``A`` with multiplication ``m : A⊗A -> A`` and unit ``i : 1 -> A``."""

    A: ObjectHandle
    m: Morphism
    i: Morphism
    name: str = ""

    def __post_init__(self):
        AA = self.A.tensor(self.A)
        if self.m.src != AA or self.m.tgt != self.A:
            raise ValueError("multiplication must be a morphism A⊗A -> A")
        if self.i.src != unit_object(self.A.spec) or self.i.tgt != self.A:
            raise ValueError("unit must be a morphism 1 -> A")

    @property
    def spec(self) -> CategorySpec:
        return self.A.spec

    @property
    def dim(self) -> float:
        return self.A.dim

    def scaled(self, m_factor: complex, i_factor: complex) -> AlgebraObject:
        return replace(self, m=m_factor * self.m, i=i_factor * self.i)


@dataclass(frozen=True)
class AlgebraMorphism:
    theta: Morphism
    source: AlgebraObject
    target: AlgebraObject

    def __post_init__(self):
        if self.theta.src != self.source.A or self.theta.tgt != self.target.A:
            raise ValueError("theta must map the source object to the target object")

    def then(self, other: AlgebraMorphism) -> AlgebraMorphism:
        """``other ∘ self``."""
        return AlgebraMorphism(other.theta @ self.theta, self.source, other.target)


@dataclass
class FrobeniusReport:
    """Everything :func:`qsystem_check` measures.

    ``cond1_defect``, ``cond2_defect`` and ``sigma_unitarity_defect`` are the three equivalent
    characterisations of a Q-system among separable C* Frobenius algebras: standardness of
    ``R = S = m^* i``, ``i^* m m^* i = d_A``, and unitarity of ``sigma_L``.
    """

    tol: float
    assoc_defect: float = float("nan")
    unital_defect: float = float("nan")
    frobenius_defect: float = float("nan")
    rotation_defect: float = float("nan")
    lambda_: float = float("nan")
    lambda_residual: float = float("nan")
    lambda_prime: float = float("nan")
    d_A: float = float("nan")
    connected: bool = False
    cond1_defect: float = float("nan")
    cond2_defect: float = float("nan")
    sigma_unitarity_defect: float = float("nan")
    sigma_lr_defect: float = float("nan")
    extra: dict = field(default_factory=dict)

    @property
    def is_frobenius(self) -> bool:
        return (self.assoc_defect <= self.tol and self.unital_defect <= self.tol
                and self.frobenius_defect <= self.tol)

    @property
    def separable(self) -> bool:
        return self.lambda_residual <= self.tol and self.lambda_ > self.tol

    @property
    def conditions(self) -> tuple[bool, bool, bool]:
        t = self.tol
        return (self.cond1_defect <= t, self.cond2_defect <= t, self.sigma_unitarity_defect <= t)

    @property
    def conditions_agree(self) -> bool:
        return len(set(self.conditions)) == 1

    @property
    def is_qsystem(self) -> bool:
        return self.is_frobenius and self.separable and all(self.conditions)

    @property
    def normalized(self) -> bool:
        return abs(self.lambda_prime - 1.0) <= self.tol

    @property
    def irreducible(self) -> bool:
        return self.connected

    def checks(self) -> list[Check]:
        t = self.tol
        out = [
            check("associativity", "m(m⊗id) = m(id⊗m)", self.assoc_defect, t),
            check("unitality", "m(i⊗id) = id = m(id⊗i)", self.unital_defect, t),
            check("frobenius", "m^*m = (id⊗m)(m^*⊗id) = (m⊗id)(id⊗m^*)", self.frobenius_defect, t),
            check("frobenius_rotation", "i^*m and m^*i solve the zig-zag, m^* is rotation invariant",
                  self.rotation_defect, t),
            check("separability", "m m^* = lambda id", self.lambda_residual, t),
            check("cond1_standard", "R = S = m^*i are standard solutions of the conjugate equations",
                  self.cond1_defect, t),
            check("cond2_dimension", "i^* m m^* i = d_A", self.cond2_defect, t),
            check("cond3_sigma_unitary", "sigma_L is unitary", self.sigma_unitarity_defect, t),
            check("sigma_left_right", "sigma_L = sigma_R", self.sigma_lr_defect, t),
            check("conditions_agree", "the three Q-system conditions are equivalent",
                  0.0 if self.conditions_agree else 1.0, t),
            check("normalized", "i^* i = 1", abs(self.lambda_prime - 1.0), t),
            check("irreducible", "dim C(1, A) = 1", 0.0 if self.connected else 1.0, t),
        ]
        return out


def _unit_AA(alg: AlgebraObject):
    A = alg.A
    return A, identity(A)


def check_algebra(alg: AlgebraObject, tol: float = 1e-9, report: FrobeniusReport | None = None
                  ) -> FrobeniusReport:
    """Associativity, both unit laws and connectedness."""
    r = report or FrobeniusReport(tol)
    A, idA = _unit_AA(alg)
    m, i = alg.m, alg.i
    r.assoc_defect = defect(m @ tensor(m, idA), m @ tensor(idA, m))
    r.unital_defect = max(defect(m @ tensor(i, idA), idA), defect(m @ tensor(idA, i), idA))
    r.connected = bool(A.mult[A.spec.unit] == 1)
    return r


def check_frobenius(alg: AlgebraObject, tol: float = 1e-9, report: FrobeniusReport | None = None
                    ) -> FrobeniusReport:
    """The Frobenius condition, and separately the self-duality route.

    The second route checks that ``i^* m`` and ``m^* i`` satisfy both zig-zag identities and that
    ``m^*`` equals both of its rotations. For an algebra the two routes are equivalent; their
    agreement is recorded in ``report.extra['frobenius_routes_agree']``.
    """
    r = report or FrobeniusReport(tol)
    A, idA = _unit_AA(alg)
    m, i = alg.m, alg.i
    ms = adjoint(m)
    lhs = ms @ m
    r.frobenius_defect = max(defect(lhs, tensor(idA, m) @ tensor(ms, idA)),
                             defect(lhs, tensor(m, idA) @ tensor(idA, ms)))
    cap = adjoint(i) @ m
    cup = ms @ i
    z1 = defect(tensor(cap, idA) @ tensor(idA, cup), idA)
    z2 = defect(tensor(idA, cap) @ tensor(cup, idA), idA)
    rot1 = defect(ms, tensor(idA, m) @ tensor(cup, idA))
    rot2 = defect(ms, tensor(m, idA) @ tensor(idA, cup))
    r.rotation_defect = max(z1, z2, rot1, rot2)
    r.extra["frobenius_routes_agree"] = (r.frobenius_defect <= tol) == (r.rotation_defect <= tol)
    return r


def _scalar_fit(f: Morphism) -> tuple[complex, float]:
    """Least-squares ``z`` with ``f ≈ z id`` and the max-abs residual."""
    num = sum(np.trace(B) for B in f.blocks.values())
    den = sum(B.shape[0] for B in f.blocks.values())
    z = num / den if den else 0.0
    res = max((float(np.abs(B - z * np.eye(B.shape[0])).max()) for B in f.blocks.values()), default=0.0)
    return complex(z), res


def separability_and_unit_norm(alg: AlgebraObject, tol: float = 1e-9,
                               report: FrobeniusReport | None = None) -> FrobeniusReport:
    r = report or FrobeniusReport(tol)
    lam, res = _scalar_fit(alg.m @ adjoint(alg.m))
    r.lambda_ = lam.real
    r.lambda_residual = max(res, abs(lam.imag))
    r.lambda_prime = (adjoint(alg.i) @ alg.i).scalar().real
    r.d_A = alg.dim
    return r


def sigma_maps(alg: AlgebraObject) -> tuple[Morphism, Morphism]:
    """``sigma_L = (i^*m ⊗ id_Ā)(id_A ⊗ coev_A)`` and ``sigma_R = (id_Ā ⊗ i^*m)(ev_A^* ⊗ id_A)``."""
    A = alg.A
    Ab = A.conj()
    cap = adjoint(alg.i) @ alg.m
    sL = tensor(cap, identity(Ab)) @ tensor(identity(A), coev(A))
    sR = tensor(identity(Ab), cap) @ tensor(cup_R(A), identity(A))
    return sL, sR


def _unitarity(u: Morphism) -> float:
    return max(defect(adjoint(u) @ u, identity(u.src)), defect(u @ adjoint(u), identity(u.tgt)))


def qsystem_check(alg: AlgebraObject, tol: float = 1e-9, seed: int = 0, n_random: int = 3
                  ) -> FrobeniusReport:
    """Run the whole ladder and evaluate the three Q-system conditions independently."""
    r = FrobeniusReport(tol)
    check_algebra(alg, tol, r)
    check_frobenius(alg, tol, r)
    separability_and_unit_norm(alg, tol, r)
    A, idA = _unit_AA(alg)
    m, i = alg.m, alg.i

    # (1) R = S = m^* i solve the conjugate equations (with Ā = A) and are balanced
    R = adjoint(m) @ i
    zz = max(defect(tensor(adjoint(R), idA) @ tensor(idA, R), idA),
             defect(tensor(idA, adjoint(R)) @ tensor(R, idA), idA))
    rng = np.random.default_rng(seed)
    bal = 0.0
    for _ in range(n_random):
        f = random_morphism(A, A, rng)
        lhs = (adjoint(R) @ tensor(idA, f) @ R).scalar()
        rhs = (adjoint(R) @ tensor(f, idA) @ R).scalar()
        bal = max(bal, abs(lhs - rhs))
    r.cond1_defect = max(zz, bal)

    # (2) R^* R = d_A
    r.cond2_defect = abs((adjoint(R) @ R).scalar() - alg.dim)

    # (3) sigma_L unitary
    sL, sR = sigma_maps(alg)
    r.sigma_unitarity_defect = _unitarity(sL)
    r.sigma_lr_defect = defect(sL, sR)
    r.extra["sigma_R_unitarity_defect"] = _unitarity(sR)
    return r


def normalize_qsystem(alg: AlgebraObject, tol: float = 1e-9) -> AlgebraObject:
    """Rescale to ``(A, lambda'^{1/2} m, lambda'^{-1/2} i)`` so that ``i^* i = 1``."""
    lp = (adjoint(alg.i) @ alg.i).scalar().real
    if lp <= tol:
        raise ValueError(f"cannot normalize: i^* i = {lp:.3e}")
    s = np.sqrt(lp)
    return alg.scaled(s, 1 / s)


@dataclass
class InvolutiveReport:
    tol: float
    multiplicative_defect: float
    unit_defect: float
    involutive_defect: float

    @property
    def passed(self) -> bool:
        return max(self.multiplicative_defect, self.unit_defect, self.involutive_defect) <= self.tol

    def checks(self, prefix: str = "theta") -> list[Check]:
        t = self.tol
        return [
            check(f"{prefix}_multiplicative", "m_B(theta⊗theta) = theta m_A", self.multiplicative_defect, t),
            check(f"{prefix}_unital", "theta i_A = i_B", self.unit_defect, t),
            check(f"{prefix}_involutive", "sigma_B theta = conj(theta) sigma_A", self.involutive_defect, t),
        ]


def check_involutive(theta: AlgebraMorphism, tol: float = 1e-9) -> InvolutiveReport:
    """Algebra-morphism laws and compatibility with the sigma maps.

    The unit law is ``theta ∘ i_A = i_B``.
    """
    t, A, B = theta.theta, theta.source, theta.target
    mult = defect(B.m @ tensor(t, t), t @ A.m)
    unit = defect(t @ A.i, B.i)
    sA, _ = sigma_maps(A)
    sB, _ = sigma_maps(B)
    inv = defect(sB @ t, conjugate(t) @ sA)
    return InvolutiveReport(tol, mult, unit, inv)


def check_cstar_iso_condition(theta: AlgebraMorphism) -> float:
    """Defect of ``m_A(id ⊗ theta^* theta) = theta^* theta m_A``."""
    A = theta.source
    tt = adjoint(theta.theta) @ theta.theta
    return defect(A.m @ tensor(identity(A.A), tt), tt @ A.m)


# ----------------------------------------------------------------------------------------------
# generators


def trivial_algebra(spec: CategorySpec) -> AlgebraObject:
    A = simple(spec, spec.unit)
    u = spec.unit
    m = Morphism(A.tensor(A), A, {u: np.ones((1, 1))})
    i = Morphism(unit_object(spec), A, {u: np.ones((1, 1))})
    return AlgebraObject(A, m, i, name="trivial")


def group_algebra(spec: CategorySpec, elements=None, cocycle=None, name: str = "") -> AlgebraObject:
    """Algebra on ``⊕_{g in G} g`` for a set ``G`` of invertible labels closed under fusion.

    The multiplication sends the vertex ``g⊗h -> gh`` to itself with coefficient
    ``cocycle(g, h)`` (default 1), which is associative when the F-symbols restricted to ``G``
    are trivial.
    """
    if elements is None:
        elements = [a for a in range(spec.rank) if spec.dims[a] == 1]
    G = sorted(spec.index(g) for g in elements)
    for g in G:
        for h in G:
            ch = spec.channels(g, h)
            if len(ch) != 1 or ch[0] not in G:
                raise ValueError("labels are not a group under fusion")
    A = letter(spec, {g: 1 for g in G})
    AA = A.tensor(A)
    from .core.morphism import basis
    blocks = {}
    for c, trees in basis(spec, AA.word).items():
        row = np.zeros((1, len(trees)), dtype=complex)
        for k, (comps, _, _) in enumerate(trees):
            g, h = comps[0][0], comps[1][0]
            row[0, k] = 1.0 if cocycle is None else cocycle(g, h)
        blocks[c] = row
    m = Morphism(AA, A, blocks)
    i = Morphism(unit_object(spec), A, {spec.unit: np.ones((1, 1))})
    return AlgebraObject(A, m, i, name=name or "group")


def inner_hom_algebra(X: ObjectHandle, normalized: bool = True, weights=None) -> AlgebraObject:
    """The algebra ``X⊗X̄`` with ``m = id ⊗ ev_X ⊗ id`` and ``i = coev_X``.

    With ``normalized`` the pair is rescaled by ``d_X^{±1/2}``. ``weights`` (one positive number
    per basis component of a one-letter ``X``) replaces the standard cap and cup by
    ``R' = ⊕ t_a R_a`` and ``S' = ⊕ t_a^{-1} S_a``; these still solve the conjugate equations but
    are not standard unless all weights agree.
    """
    spec = X.spec
    Xb = X.conj()
    A = X.tensor(Xb)
    R, S = cup_R(X), cup_S(X)
    if weights is not None:
        if len(X) != 1:
            raise ValueError("weights need a one-letter object")
        comps = X.word[0].components()
        t = np.asarray(weights, dtype=float)
        if t.shape != (len(comps),):
            raise ValueError("one weight per component")
        D = Morphism(X, X, {c: np.diag([t[k] for k, (a, _) in enumerate(comps) if a == c])
                            for c in range(spec.rank) if X.mult[c]})
        Dinv = Morphism(X, X, {c: np.linalg.inv(B) for c, B in D.blocks.items()})
        R = tensor(identity(Xb), D) @ R
        S = tensor(Dinv, identity(Xb)) @ S
    m = tensor(tensor(identity(X), adjoint(R)), identity(Xb))
    i = S
    alg = AlgebraObject(A, m, i, name="inner_hom")
    if normalized:
        d = X.dim
        alg = alg.scaled(np.sqrt(d), 1 / np.sqrt(d))
    return alg


def inner_hom_qsystem(spec: CategorySpec, c) -> AlgebraObject:
    """Normalized Q-system on ``c⊗c̄``."""
    return inner_hom_algebra(simple(spec, c), normalized=True)


def conjugate_by(alg: AlgebraObject, u: Morphism, name: str = "") -> AlgebraObject:
    """Transport the algebra along an invertible ``u : A -> B`` (``u`` unitary keeps C*-data)."""
    uinv = adjoint(u) if defect(adjoint(u) @ u, identity(u.src)) < 1e-12 else None
    if uinv is None:
        from .core import inverse
        uinv = inverse(u)
    m = u @ alg.m @ tensor(uinv, uinv)
    i = u @ alg.i
    return AlgebraObject(u.tgt, m, i, name=name or alg.name)


def flatten(alg: AlgebraObject) -> AlgebraObject:
    """The same algebra on the one-letter object with ``A``'s multiplicities."""
    if len(alg.A) == 1:
        return alg
    u = adjoint(canonical_iso(alg.A))
    return conjugate_by(alg, u, name=alg.name)


def identity_morphism(alg: AlgebraObject) -> AlgebraMorphism:
    return AlgebraMorphism(identity(alg.A), alg, alg)


def unit_inclusion(alg: AlgebraObject) -> AlgebraMorphism:
    """``i_A`` viewed as an algebra morphism from the trivial Q-system."""
    triv = trivial_algebra(alg.spec)
    u = alg.spec.unit
    return AlgebraMorphism(Morphism(triv.A, alg.A, {u: alg.i.block(u)}), triv, alg)


def group_inclusion(sub: AlgebraObject, full: AlgebraObject) -> AlgebraMorphism:
    """Inclusion of one group algebra into another (both from :func:`group_algebra`)."""
    if len(sub.A) != 1 or len(full.A) != 1:
        raise ValueError("group algebras are one-letter objects")
    blocks = {}
    for c in range(sub.spec.rank):
        if sub.A.mult[c]:
            if full.A.mult[c] != 1 or sub.A.mult[c] != 1:
                raise ValueError("not an inclusion of group algebras")
            blocks[c] = np.ones((1, 1))
    return AlgebraMorphism(Morphism(sub.A, full.A, blocks), sub, full)
