"""Acceptance gate: one PASS/FAIL line per criterion, at the stated tolerances."""

from __future__ import annotations

import numpy as np
import pytest
from conftest import BATTERY, PHI, battery, pipeline_of, wstar_of
from oracles import CyclicGroupOracle

from qkit.cli import main
from qkit.core import Morphism, bundled_category, cyclic_group_category, letter
from qkit.core.validate import validate_category
from qkit.equivalence import (check_eta, check_functoriality, check_naturality, check_zeta,
                              run_pipeline)
from qkit.frobenius import (conjugate_by, group_algebra, group_inclusion, identity_morphism,
                            inner_hom_algebra, qsystem_check, trivial_algebra, unit_inclusion)
from qkit.qsystem import (build_p, check_delta_identities, check_p, check_p_absorbs_pi,
                          check_p_lemmas, check_q_morphism, tetra_delta)


@pytest.fixture
def report(capsys):
    def emit(n: int, title: str, ok: bool, detail: str = "") -> None:
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'}  {title}  {detail}".rstrip())
        assert ok, f"criterion {n} failed: {detail}"
    return emit


def _random_unitary(X, rng):
    blocks = {}
    for c, n in enumerate(X.mult):
        if n:
            q, r = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
            blocks[c] = q * (np.diag(r) / np.abs(np.diag(r)))
    return Morphism(X, X, blocks)


def _perturbed(alg, rng, eps=1e-3):
    m = alg.m
    noise = {c: eps * rng.normal(size=B.shape) for c, B in m.blocks.items()}
    return type(alg)(alg.A, m + Morphism(m.src, m.tgt, noise), alg.i, name=alg.name + "*")


def test_1_category_validation(report):
    keys = ("pentagon", "f_unitarity", "zigzag", "standardness", "balancing")
    worst = {}
    for name in ("z2", "z3", "fib", "ising"):
        d = validate_category(bundled_category(name), tol=1e-10).defects
        worst[name] = max(d[k] for k in keys)
    ok = max(worst.values()) < 1e-10
    report(1, "category validation", ok, f"max defect {max(worst.values()):.2e}")


def test_2_qsystem_ladder(report):
    bad = []
    for name, (alg, dA) in battery().items():
        r = qsystem_check(alg, tol=1e-9)
        if not (r.is_qsystem and r.normalized and r.irreducible):
            bad.append(name)
        if abs(r.lambda_prime - 1.0) > 1e-9 or abs(r.d_A - dA) > 1e-9:
            bad.append(name + ":scalars")
    assert abs(battery()["fib_tau"][1] - 2.6180339887) < 1e-9
    # negative controls: noisy multiplications and non-standard cups
    rng = np.random.default_rng(2024)
    worst_neg = np.inf
    for k, name in enumerate(BATTERY[1:] * 2):
        r = qsystem_check(_perturbed(battery()[name][0], rng), tol=1e-9)
        worst_neg = min(worst_neg, max(r.assoc_defect, r.frobenius_defect))
        if r.is_qsystem:
            bad.append(f"control {k} passed")
    for k in range(4):
        spec = bundled_category(["z2", "z3", "fib", "ising"][k])
        X = letter(spec, [1] * spec.rank)
        w = 1.0 + rng.uniform(0.2, 1.0, size=spec.rank) * (np.arange(spec.rank) > 0)
        r = qsystem_check(inner_hom_algebra(X, weights=w), tol=1e-9)
        worst_neg = min(worst_neg, max(r.cond1_defect, r.cond2_defect, r.sigma_unitarity_defect))
        if r.is_qsystem:
            bad.append(f"weighted control {k} passed")
    ok = not bad and worst_neg > 1e-4
    report(2, "Q-system ladder", ok, f"issues={bad} smallest control defect {worst_neg:.2e}")


def test_3_condition_equivalence(report):
    rng = np.random.default_rng(7)
    cases = [alg for alg, _ in battery().values()]
    for k in range(12):
        spec = bundled_category(["z2", "z3", "fib", "ising"][k % 4])
        X = letter(spec, [1] * spec.rank)
        cases.append(inner_hom_algebra(X, weights=rng.uniform(0.4, 2.5, size=spec.rank)))
    for k in range(12):
        alg = battery()[BATTERY[1 + k % 4]][0]
        s = rng.uniform(0.3, 3.0)
        cases.append(conjugate_by(alg, _random_unitary(alg.A, rng)).scaled(s, 1 / s))
    results = [qsystem_check(a, tol=1e-9).conditions for a in cases]
    disagreements = sum(len(set(c)) != 1 for c in results)
    n_fail = sum(not any(c) for c in results)
    ok = disagreements == 0 and len(cases) - len(battery()) >= 20 and n_fail >= 12
    report(3, "the three Q-system conditions agree", ok,
           f"{len(cases)} algebras, {n_fail} fail all, {disagreements} disagreements")


def test_4_projector_lemmas(report):
    worst, bad = 0.0, []
    for name in BATTERY:
        w = wstar_of(name)
        pp = build_p(w)
        cs = check_p(pp, w, tol=1e-9, seed=5) + check_p_lemmas(pp, w, 1e-9) + check_p_absorbs_pi(pp, w, 1e-9)
        worst = max(worst, max(c.defect for c in cs))
        bad += [f"{name}:{c.name}" for c in cs if not c.passed]
        if any(pp.ranks.get(a, 0) != w.dim(a) for a in range(w.spec.rank)):
            bad.append(f"{name}:rank")
    report(4, "projector lemmas", not bad and worst < 1e-9, f"max defect {worst:.2e} {bad or ''}")


def test_5_delta_identities(report):
    worst, bad = 0.0, []
    for name in BATTERY:
        w = wstar_of(name)
        cs = check_delta_identities(w, tol=1e-9)
        inc = unit_inclusion(w.alg)
        plt = run_pipeline(inc.source)
        cs += [c for c in check_q_morphism(inc, plt.w, w, tol=1e-9) if c.name == "replace_theta_abc"]
        worst = max(worst, max(c.defect for c in cs))
        bad += [f"{name}:{c.name}" for c in cs if not c.passed]
    val = tetra_delta(wstar_of("z2")).entries[(1, 1, 0, 0, 0, 0, 0)]
    err = abs(val - CyclicGroupOracle(2).delta(1, 1, 0))
    ok = not bad and worst < 1e-9 and err < 1e-12
    report(5, "Delta identities", ok, f"max defect {worst:.2e}, z2 value {float(val.real)!r} oracle gap {err:.1e}")


def test_6_round_trips(report):
    worst, bad = 0.0, []
    for name in BATTERY:
        pl = pipeline_of(name)
        cs = check_zeta(pl, 1e-9) + check_eta(pl, 1e-9)
        inc = unit_inclusion(pl.w.alg)
        cs += check_naturality(inc, run_pipeline(inc.source), pl, 1e-9)
        cs += check_naturality(identity_morphism(pl.w.alg), pl, pl, 1e-9)
        worst = max(worst, max(c.defect for c in cs))
        bad += [f"{name}:{c.name}" for c in cs if not c.passed]
        if pl.Q.A.mult.tolist() != pl.w.alg.A.mult.tolist():
            bad.append(f"{name}:multiplicities")
    z4 = cyclic_group_category(4)
    algs = trivial_algebra(z4), group_algebra(z4, ["0", "2"]), group_algebra(z4)
    pls = tuple(run_pipeline(a) for a in algs)
    t1, t2 = group_inclusion(algs[0], algs[1]), group_inclusion(algs[1], algs[2])
    cs = check_functoriality(t1, t2, pls, 1e-9)
    cs += check_naturality(t2, pls[1], pls[2], 1e-9) + check_naturality(t1.then(t2), pls[0], pls[2], 1e-9)
    pl = pipeline_of("fib_tau")
    inc = unit_inclusion(pl.w.alg)
    cs += check_functoriality(inc, identity_morphism(pl.w.alg), (run_pipeline(inc.source), pl, pl), 1e-9)
    worst = max(worst, max(c.defect for c in cs))
    bad += [c.name for c in cs if not c.passed]
    report(6, "round trips, naturality, functoriality", not bad and worst < 1e-9,
           f"max defect {worst:.2e} {bad or ''}")


def test_7_dimension_bookkeeping(report):
    worst = 0.0
    for name in BATTERY:
        w = wstar_of(name)
        total = sum(w.dim(a) * w.spec.dims[a] for a in w.sectors)
        worst = max(worst, abs(total - w.d_H), abs(total - battery()[name][1]))
    w = wstar_of("fib_tau")
    golden = abs(sum(w.dim(a) * w.spec.dims[a] for a in w.sectors) - (1 + PHI)) + abs(1 + PHI - PHI ** 2)
    report(7, "sum dim A(a) d_a = d_H", worst < 1e-9 and golden < 1e-9,
           f"max gap {worst:.2e}, golden-ratio gap {golden:.1e}")


def test_8_determinism(report, tmp_path):
    args = ["roundtrip", "--category", "fib", "--algebra", "fib_tau", "--format", "json", "--seed", "0"]
    codes = [main(args + ["-o", str(tmp_path / f"r{k}.json")]) for k in (1, 2)]
    same = (tmp_path / "r1.json").read_bytes() == (tmp_path / "r2.json").read_bytes()
    report(8, "byte-identical roundtrip reports", same and codes == [0, 0], f"exit codes {codes}")
