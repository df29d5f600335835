from __future__ import annotations

import numpy as np
import pytest
from conftest import PHI, battery

from qkit.core import (Morphism, adjoint, bundled_category, cyclic_group_category, defect,
                       identity, letter, random_morphism, simple)
from qkit.frobenius import (AlgebraMorphism, check_cstar_iso_condition, check_involutive,
                            conjugate_by, flatten, group_algebra, group_inclusion,
                            identity_morphism, inner_hom_algebra, inner_hom_qsystem,
                            normalize_qsystem, qsystem_check, sigma_maps, trivial_algebra,
                            unit_inclusion)


def random_unitary(X, rng):
    blocks = {}
    for c, n in enumerate(X.mult):
        if n:
            q, r = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
            blocks[c] = q * (np.diag(r) / np.abs(np.diag(r)))
    return Morphism(X, X, blocks)


def test_trivial_algebra_exact():
    r = qsystem_check(trivial_algebra(bundled_category("fib")))
    assert r.assoc_defect == r.unital_defect == r.frobenius_defect == 0.0
    assert r.connected and r.is_qsystem and r.normalized
    assert (r.lambda_, r.lambda_prime, r.d_A) == (1.0, 1.0, 1.0)
    sL, sR = sigma_maps(trivial_algebra(bundled_category("fib")))
    assert defect(sL, identity(sL.src)) == 0.0 and defect(sR, identity(sR.src)) == 0.0


def test_z2_group_algebra():
    alg = group_algebra(bundled_category("z2"))
    r = qsystem_check(alg)
    assert r.assoc_defect == 0.0 and r.unital_defect == 0.0
    assert r.frobenius_defect < 1e-12
    assert (r.lambda_, r.lambda_prime, r.d_A) == (2.0, 1.0, 2.0)
    assert r.is_qsystem and r.normalized and r.irreducible
    assert r.cond2_defect < 1e-12
    sL, sR = sigma_maps(alg)
    assert defect(sL, sR) < 1e-12 and r.sigma_unitarity_defect < 1e-12


def test_flipped_structure_constant_breaks_associativity():
    z3 = bundled_category("z3")
    g, g2 = z3.index("g"), z3.index("g2")
    alg = group_algebra(z3, cocycle=lambda a, b: -1.0 if (a, b) == (g, g2) else 1.0)
    assert qsystem_check(alg).assoc_defect > 0.5


def test_inner_hom_fibonacci():
    fib = bundled_category("fib")
    alg = inner_hom_qsystem(fib, "tau")
    r = qsystem_check(alg)
    assert r.frobenius_defect < 1e-10
    assert r.is_qsystem and r.normalized and r.irreducible
    assert r.lambda_ == pytest.approx(PHI ** 2, abs=1e-10)
    assert r.d_A == pytest.approx(PHI ** 2, abs=1e-10)
    flat = flatten(alg)
    assert flat.A.mult.tolist() == [1, 1]


def test_inner_hom_ising():
    ising = bundled_category("ising")
    alg = flatten(inner_hom_qsystem(ising, "sigma"))
    assert alg.A.mult.tolist() == [1, 0, 1]
    r = qsystem_check(alg)
    assert r.is_qsystem and r.d_A == pytest.approx(2.0, abs=1e-12)
    assert qsystem_check(inner_hom_qsystem(ising, "1")).d_A == 1.0


def test_reducible_inner_hom_not_connected():
    fib = bundled_category("fib")
    alg = inner_hom_algebra(letter(fib, {"1": 1, "tau": 1}))
    r = qsystem_check(alg)
    assert r.is_qsystem and not r.irreducible


def test_normalization():
    fib = bundled_category("fib")
    raw = inner_hom_algebra(simple(fib, "tau"), normalized=False)
    r = qsystem_check(raw)
    assert r.lambda_prime == pytest.approx(PHI, abs=1e-12)
    assert not r.normalized and r.is_qsystem
    fixed = normalize_qsystem(raw)
    ref = inner_hom_qsystem(fib, "tau")
    assert defect(fixed.m, ref.m) < 1e-12 and defect(fixed.i, ref.i) < 1e-12
    z2 = group_algebra(bundled_category("z2"))
    assert normalize_qsystem(z2) == z2 or defect(normalize_qsystem(z2).m, z2.m) == 0.0
    blown = z2.scaled(1 / 3, 3)
    assert qsystem_check(blown).lambda_prime == pytest.approx(9.0)
    assert qsystem_check(normalize_qsystem(blown)).lambda_prime == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        normalize_qsystem(z2.scaled(1.0, 0.0))


def test_rescaling_leaves_sigma_alone():
    # sigma only sees the counit i^*m, which (2m, i/2) does not change
    z2 = group_algebra(bundled_category("z2"))
    r = qsystem_check(z2.scaled(2.0, 0.5))
    assert r.sigma_unitarity_defect < 1e-12 and r.sigma_lr_defect < 1e-12
    assert r.unital_defect < 1e-12 and not r.normalized


def test_weighted_inner_hom_fails_all_three():
    z2 = bundled_category("z2")
    alg = inner_hom_algebra(letter(z2, {"1": 1, "g": 1}), weights=[1.0, 1.7])
    r = qsystem_check(alg)
    assert r.is_frobenius and r.separable
    assert min(r.cond1_defect, r.cond2_defect, r.sigma_unitarity_defect) > 1e-4
    assert r.conditions == (False, False, False) and not r.is_qsystem


@pytest.mark.parametrize("seed", range(6))
def test_conditions_agree_under_perturbation(seed):
    rng = np.random.default_rng(seed)
    fib, z3 = bundled_category("fib"), bundled_category("z3")
    X = letter(fib, {"1": 1, "tau": 1}) if seed % 2 else letter(z3, {"1": 1, "g": 1, "g2": 1})
    w = rng.uniform(0.5, 2.0, size=len(X.word[0].components()))
    bad = qsystem_check(inner_hom_algebra(X, weights=w))
    assert bad.conditions == (False, False, False)
    name = ["z2", "z3", "fib_tau", "ising_sigma"][seed % 4]
    alg = battery()[name][0]
    good = qsystem_check(conjugate_by(alg, random_unitary(alg.A, rng)).scaled(2.0, 0.5))
    assert good.conditions == (True, True, True) and good.is_qsystem


def test_involutive_morphisms():
    z2 = group_algebra(bundled_category("z2"))
    assert check_involutive(identity_morphism(z2)).passed
    assert check_cstar_iso_condition(identity_morphism(z2)) == 0.0
    inc = unit_inclusion(z2)
    rep = check_involutive(inc)
    assert rep.passed and max(rep.multiplicative_defect, rep.involutive_defect) < 1e-12
    assert check_cstar_iso_condition(inc) < 1e-12
    doubled = AlgebraMorphism(identity(z2.A) * 2.0, z2, z2)
    assert check_involutive(doubled).multiplicative_defect > 0.5


def test_group_inclusion_chain():
    z4 = cyclic_group_category(4)
    triv, sub, full = trivial_algebra(z4), group_algebra(z4, ["0", "2"]), group_algebra(z4)
    t1, t2 = group_inclusion(triv, sub), group_inclusion(sub, full)
    for t in (t1, t2, t1.then(t2)):
        assert check_involutive(t).passed
        assert check_cstar_iso_condition(t) < 1e-12
    with pytest.raises(ValueError):
        group_inclusion(full, sub)


def test_involutive_negative_control():
    # a unitary conjugation that is not an algebra map: only the implication is asserted
    rng = np.random.default_rng(11)
    z3 = group_algebra(bundled_category("z3"))
    u = random_unitary(z3.A, rng)
    theta = AlgebraMorphism(u, z3, z3)
    rep = check_involutive(theta)
    if rep.multiplicative_defect <= 1e-9 and rep.unit_defect <= 1e-9 and rep.involutive_defect <= 1e-9:
        assert check_cstar_iso_condition(theta) < 1e-9


def test_type_errors():
    fib = bundled_category("fib")
    alg = inner_hom_qsystem(fib, "tau")
    with pytest.raises(ValueError):
        type(alg)(alg.A, alg.i, alg.i)
    with pytest.raises(ValueError):
        AlgebraMorphism(random_morphism(alg.A, simple(fib, "1"), np.random.default_rng(0)), alg, alg)
    adjoint(alg.m)  # smoke
