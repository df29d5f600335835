from __future__ import annotations

import numpy as np
import pytest
from conftest import BATTERY, PHI, battery, wstar_of
from oracles import CyclicGroupOracle

from qkit.core import (adjoint, bundled_category, coev, cyclic_group_category, defect, identity,
                       inner_product, letter, simple, with_source)
from qkit.frobenius import (group_algebra, group_inclusion, identity_morphism, inner_hom_algebra,
                            unit_inclusion)
from qkit.wstar import (WStarError, check_star_axioms, check_wstar_identities, gns_lambda,
                        induced_pi, j_map, l2_inner, l2_inner_both, wstar_object,
                        wstar_on_morphism)


def test_sector_dimensions():
    assert wstar_of("trivial").sectors == [0] and wstar_of("trivial").dim(0) == 1
    z2 = wstar_of("z2")
    assert (z2.dim("1"), z2.dim("g")) == (1, 1)
    fib = wstar_of("fib_tau")
    assert (fib.dim("1"), fib.dim("tau")) == (1, 1)
    dims = fib.spec.dims
    total = sum(fib.dim(a) * dims[a] for a in fib.sectors)
    assert total == pytest.approx(1 + PHI, abs=1e-12)
    assert total == pytest.approx(fib.d_H, abs=1e-12)


def test_refuses_non_qsystems():
    fib = bundled_category("fib")
    with pytest.raises(WStarError):
        wstar_object(inner_hom_algebra(simple(fib, "tau"), normalized=False))
    with pytest.raises(WStarError, match="irreducible"):
        wstar_object(inner_hom_algebra(letter(fib, {"1": 1, "tau": 1})))


@pytest.mark.parametrize("name", BATTERY)
def test_star_axioms(name):
    w = wstar_of(name)
    tol = 1e-12 if name in ("trivial", "z2") else 1e-10
    cs = check_star_axioms(w, tol=tol)
    assert {c.name for c in cs} >= {"j_natural", "j_involutive", "j_unital", "j_monoidal",
                                    "wstar_positivity"}
    assert all(c.passed for c in cs), [c for c in cs if not c.passed]


@pytest.mark.parametrize("name", BATTERY)
def test_wstar_identities(name):
    cs = check_wstar_identities(wstar_of(name), tol=1e-10)
    assert all(c.passed for c in cs), [c for c in cs if not c.passed]


def test_j_examples():
    w = wstar_of("z2")
    i = w.alg.i
    assert defect(j_map(w, i), i) < 1e-15
    spec = w.spec
    g = spec.index("g")
    f = w.onb[g][0]
    jf = j_map(w, f)
    z = jf.block(g)[0, 0] / f.block(g)[0, 0]
    assert abs(abs(z) - 1.0) < 1e-14
    for a in w.sectors:
        for f in w.onb[a]:
            assert defect(j_map(w, j_map(w, f)), f) < 1e-12


def test_l2_inner_product():
    w = wstar_of("z2")
    i = with_source(w.alg.i, simple(w.spec, "1"))
    assert l2_inner(w, i, i) == pytest.approx(1.0, abs=1e-15)
    f = w.sector_basis[w.spec.index("g")][0]
    assert l2_inner(w, f, f) == pytest.approx(1.0, abs=1e-14)
    for name in BATTERY:
        w = wstar_of(name)
        for a in w.sectors:
            for f in w.sector_basis[a]:
                for g in w.sector_basis[a]:
                    left, right = l2_inner_both(w.alg, f, g)
                    assert abs(left - right) < 1e-10
                    assert abs(left - inner_product(f, g)) < 1e-10


def test_lambda_examples():
    w = wstar_of("z2")
    spec = w.spec
    lam1 = gns_lambda(w, with_source(w.alg.i, simple(spec, "1")))
    for c, n in enumerate(w.alg.A.mult):
        assert np.abs(lam1.block(c) - np.eye(n)).max() < 1e-15
    g = spec.index("g")
    lg = gns_lambda(w, w.onb[g][0])
    # regular representation: g⊗1 -> g and g⊗g -> 1, each a unimodular 1x1 block
    assert set(lg.blocks) == {0, 1}
    for B in lg.blocks.values():
        assert B.shape == (1, 1) and abs(abs(B[0, 0]) - 1.0) < 1e-14
    for name in BATTERY:
        w = wstar_of(name)
        for a in w.sectors:
            M = np.column_stack([x.vector() for x in w.lam[a]])
            assert np.linalg.matrix_rank(M) == len(w.onb[a])


def test_pi_against_cyclic_oracle():
    oracle = CyclicGroupOracle(2)
    w = wstar_of("z2")
    spec, H = w.spec, w.H
    pi1 = induced_pi(w, with_source(w.alg.i, simple(spec, "1")))
    assert defect(pi1, with_source(coev(H), simple(spec, "1")) / np.sqrt(2.0)) < 1e-15
    g = spec.index("g")
    pig = w.pi[g][0]
    col = pig.block(g)[:, 0]
    ref = oracle.pi(1)[[1, 2]]  # e_1⊗e_0^*, e_0⊗e_1^* in the oracle basis
    assert np.allclose(np.abs(col), np.abs(ref), atol=1e-15)
    assert abs(col[0] / col[1] - 1.0) < 1e-14  # same phase, as in the oracle
    assert np.allclose(np.abs(col), 2 ** -0.5)
    B = w.B[g][0]
    assert defect(B, pig) < 1e-15  # d_g = 1


def test_wstar_on_morphism():
    w = wstar_of("z2")
    M = wstar_on_morphism(identity_morphism(w.alg), w, w)
    for a, Ma in M.items():
        assert np.allclose(Ma, np.eye(Ma.shape[0]), atol=1e-14)
    inc = unit_inclusion(w.alg)
    wt = wstar_object(inc.source)
    M = wstar_on_morphism(inc, wt, w)
    assert list(M) == [0] and abs(abs(M[0][0, 0]) - 1.0) < 1e-14
    z4 = cyclic_group_category(4)
    sub, full = group_algebra(z4, ["0", "2"]), group_algebra(z4)
    ws, wf = wstar_object(sub), wstar_object(full)
    M = wstar_on_morphism(group_inclusion(sub, full), ws, wf)
    for Ma in M.values():
        assert np.allclose(Ma.conj().T @ Ma, np.eye(Ma.shape[1]), atol=1e-12)


def test_battery_dims_match_H(battery_name):
    w = wstar_of(battery_name)
    dims = w.spec.dims
    assert sum(w.dim(a) * dims[a] for a in w.sectors) == pytest.approx(battery()[battery_name][1],
                                                                         abs=1e-9)
    assert adjoint(w.alg.i) @ w.alg.i is not None
