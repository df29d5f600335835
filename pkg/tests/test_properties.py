from __future__ import annotations

import numpy as np
import pytest
from conftest import battery, wstar_of
from hypothesis import given, settings
from hypothesis import strategies as st

from qkit.core import (adjoint, bundled_category, defect, inner_product, letter, random_morphism,
                       tensor)
from qkit.frobenius import inner_hom_algebra, normalize_qsystem, qsystem_check
from qkit.qsystem import build_p
from qkit.wstar import sector_bases

FAST = settings(max_examples=15, deadline=None)
cats = st.sampled_from(["z2", "z3", "fib", "ising"])
mults = st.lists(st.integers(0, 2), min_size=3, max_size=3).filter(lambda m: sum(m) > 0)


def _obj(name, m):
    spec = bundled_category(name)
    mm = list(m[: spec.rank])
    if not any(mm):
        mm[0] = 1
    return letter(spec, mm)


@FAST
@given(cats, mults, mults, st.integers(0, 2 ** 32 - 1))
def test_interchange_and_dagger(name, m1, m2, seed):
    rng = np.random.default_rng(seed)
    X, Y = _obj(name, m1), _obj(name, m2)
    f1, g1 = random_morphism(X, Y, rng), random_morphism(Y, X, rng)
    f2, g2 = random_morphism(Y, Y, rng), random_morphism(Y, X, rng)
    assert defect(tensor(g1 @ f1, g2 @ f2), tensor(g1, g2) @ tensor(f1, f2)) < 1e-10
    assert defect(adjoint(adjoint(f1)), f1) == 0.0
    assert inner_product(f1, f1).real >= -1e-12


@FAST
@given(st.sampled_from(["z2", "z3", "fib", "ising"]),
       st.lists(st.floats(0.3, 3.0), min_size=3, max_size=3))
def test_qsystem_conditions_agree(name, weights):
    spec = bundled_category(name)
    X = letter(spec, [1] * spec.rank)
    w = weights[: spec.rank]
    r = qsystem_check(inner_hom_algebra(X, weights=w))
    spread = max(w) / min(w) - 1.0
    # R^*R - d_A is quadratic in the spread, the other two defects linear; agreement at a fixed
    # tolerance is only meaningful outside the band spread ~ sqrt(tol)
    if spread == 0.0 or spread > 1e-3:
        assert r.conditions_agree
        assert all(r.conditions) == (spread == 0.0)


@pytest.mark.parametrize("eps", [1e-2, 1e-3, 1e-4])
def test_condition_defect_scaling(eps):
    X = letter(bundled_category("z2"), [1, 1])
    r = qsystem_check(inner_hom_algebra(X, weights=[1.0, 1.0 + eps]))
    assert 0.5 < r.cond1_defect / eps < 50.0
    assert 0.5 < r.sigma_unitarity_defect / eps < 4.0
    assert 1.0 < r.cond2_defect / eps ** 2 < 8.0


@FAST
@given(st.sampled_from(["z2", "fib_tau", "ising_sigma"]), st.floats(0.1, 10.0))
def test_normalization_undoes_rescaling(name, s):
    alg = battery()[name][0]
    back = normalize_qsystem(alg.scaled(1 / s, s))
    assert defect(back.m, alg.m) < 1e-10 and defect(back.i, alg.i) < 1e-10


@settings(max_examples=8, deadline=None)
@given(st.sampled_from(["z3", "fib_tau", "ising_sigma"]), st.integers(0, 2 ** 32 - 1))
def test_projector_basis_independent(name, seed):
    w = wstar_of(name)
    p = build_p(w).p
    q = build_p(w, sector_bases(w, np.random.default_rng(seed))).p
    assert defect(p, q) < 1e-9
