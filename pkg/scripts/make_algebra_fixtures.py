"""Regenerate the shipped algebra and morphism files plus the broken test fixtures."""

from __future__ import annotations

import json
from dataclasses import replace
from pathlib import Path

from qkit.core import bundled_category, simple
from qkit.frobenius import (flatten, group_algebra, inner_hom_algebra, inner_hom_qsystem,
                            trivial_algebra, unit_inclusion)
from qkit.io import algebra_to_dict, morphism_to_dict

ROOT = Path(__file__).resolve().parents[1]
ALG = ROOT / "src" / "qkit" / "data" / "algebras"
TESTS = ROOT / "tests" / "data"


def write(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def main():
    ALG.mkdir(parents=True, exist_ok=True)
    TESTS.mkdir(parents=True, exist_ok=True)
    vec, z2, z3 = bundled_category("vec"), bundled_category("z2"), bundled_category("z3")
    fib, ising = bundled_category("fib"), bundled_category("ising")
    tau = fib.index("tau")
    algs = {
        "trivial": (trivial_algebra(vec), "vec.json"),
        "z2_trivial": (trivial_algebra(z2), "z2.json"),
        "z2_group": (group_algebra(z2, name="z2"), "z2.json"),
        "z3_group": (group_algebra(z3, name="z3"), "z3.json"),
        "fib_trivial": (trivial_algebra(fib), "fib.json"),
        "fib_tau": (flatten(inner_hom_qsystem(fib, "tau")), "fib.json"),
        "fib_tau_unnormalized": (flatten(inner_hom_algebra(
            simple(fib, tau), normalized=False)), "fib.json"),
        "ising_sigma": (flatten(inner_hom_qsystem(ising, "sigma")), "ising.json"),
    }
    for name, (alg, cat) in algs.items():
        alg = flatten(alg)
        alg = replace(alg, name=name)
        write(ALG / f"{name}.json", algebra_to_dict(alg, cat))

    write(ALG / "z2_unit_inclusion.json",
          morphism_to_dict(unit_inclusion(algs["z2_group"][0]), "z2_trivial.json", "z2_group.json"))
    fib_tau = flatten(algs["fib_tau"][0])
    write(ALG / "fib_unit_inclusion.json",
          morphism_to_dict(unit_inclusion(fib_tau), "fib_trivial.json", "fib_tau.json"))

    # fib with one F entry nudged: the pentagon must fail
    cat = json.loads((ROOT / "src" / "qkit" / "data" / "fib.json").read_text())
    for rec in cat["F"]:
        if (rec["a"], rec["b"], rec["c"], rec["d"], rec["e"], rec["f"]) == ("tau",) * 4 + ("1", "1"):
            rec["re"] += 1e-3
    write(TESTS / "broken.json", cat)

    # z2 group algebra with a product entry nudged: associativity and friends must fail
    doc = algebra_to_dict(algs["z2_group"][0], "z2.json")
    doc["m"][-1]["re"] += 1e-3
    doc["name"] = "z2_perturbed"
    write(TESTS / "z2_perturbed.json", doc)
    (TESTS / "not_json.json").write_text("{ this is not json\n", encoding="utf-8")


if __name__ == "__main__":
    main()
