from __future__ import annotations

import functools
import sys
from pathlib import Path

import pytest

from qkit.core import bundled_category
from qkit.frobenius import flatten, group_algebra, inner_hom_qsystem, trivial_algebra

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"
PHI = (1 + 5 ** 0.5) / 2


def battery() -> dict:
    """The five reference Q-systems, keyed by name, with their expected ``d_A``."""
    return _battery()


@functools.lru_cache(maxsize=None)
def _battery():
    fib, ising = bundled_category("fib"), bundled_category("ising")
    return {
        "trivial": (trivial_algebra(bundled_category("vec")), 1.0),
        "z2": (group_algebra(bundled_category("z2"), name="z2"), 2.0),
        "z3": (group_algebra(bundled_category("z3"), name="z3"), 3.0),
        "fib_tau": (flatten(inner_hom_qsystem(fib, "tau")), PHI ** 2),
        "ising_sigma": (flatten(inner_hom_qsystem(ising, "sigma")), 2.0),
    }


@functools.lru_cache(maxsize=None)
def wstar_of(name: str):
    from qkit.wstar import wstar_object
    return wstar_object(battery()[name][0])


@functools.lru_cache(maxsize=None)
def pipeline_of(name: str):
    from qkit.equivalence import run_pipeline
    return run_pipeline(battery()[name][0])


BATTERY = ["trivial", "z2", "z3", "fib_tau", "ising_sigma"]


@pytest.fixture(params=BATTERY)
def battery_name(request):
    return request.param
