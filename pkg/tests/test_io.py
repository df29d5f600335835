from __future__ import annotations

import json

import pytest
from conftest import battery

from qkit.core import CategorySchemaError, bundled_category, defect
from qkit.frobenius import unit_inclusion
from qkit.io import (algebra_from_dict, algebra_to_dict, bundled_algebra_path, load_algebra,
                     load_morphism, morphism_to_dict, save_algebra)


@pytest.mark.parametrize("name", ["z2", "z3", "fib_tau", "ising_sigma"])
def test_roundtrip_through_json(name, tmp_path):
    alg = battery()[name][0]
    cat = {"z2": "z2.json", "z3": "z3.json", "fib_tau": "fib.json", "ising_sigma": "ising.json"}[name]
    p = tmp_path / "a.json"
    save_algebra(alg, p, cat)
    back = load_algebra(p, alg.spec)
    assert defect(back.m, alg.m) == 0.0 and defect(back.i, alg.i) == 0.0
    # the category reference resolves to the bundled file on its own
    again = load_algebra(p)
    assert again.A.mult.tolist() == alg.A.mult.tolist()


def test_shipped_fixtures_load():
    for name in ["trivial", "z2_group", "z3_group", "fib_tau", "fib_tau_unnormalized", "ising_sigma"]:
        assert bundled_algebra_path(name).exists()
        assert load_algebra(name).name == name


def test_schema_errors():
    spec = bundled_category("z2")
    doc = algebra_to_dict(battery()["z2"][0], "z2.json")
    for broken in ({k: v for k, v in doc.items() if k != "m"},
                   {**doc, "object": {"h": 1}},
                   {**doc, "m": [{"sector": "1", "row": 5, "col": 0, "re": 1.0}]},
                   {**doc, "i": "nope"}):
        with pytest.raises(CategorySchemaError):
            algebra_from_dict(broken, spec)


def test_morphism_file(tmp_path):
    alg = battery()["z2"][0]
    save_algebra(alg, tmp_path / "full.json", "z2.json")
    inc = unit_inclusion(alg)
    save_algebra(inc.source, tmp_path / "triv.json", "z2.json")
    (tmp_path / "inc.json").write_text(json.dumps(morphism_to_dict(inc, "triv.json", "full.json")))
    back = load_morphism(tmp_path / "inc.json", alg.spec)
    assert defect(back.theta, inc.theta) == 0.0
    assert back.source.spec is back.target.spec
