"""Command-line front end.

Every command prints a report (text, JSON or CSV) and exits with 0 when all checks pass,
1 when some check fails and 2 when an input file cannot be read or does not match its schema.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import CategorySpec, load_category
from .core.category import CategoryError, bundled_path
from .core.validate import validate_category
from .equivalence import roundtrip_report
from .frobenius import normalize_qsystem, qsystem_check
from .io import bundled_algebra_path, load_algebra, load_morphism
from .qsystem import tetra_delta
from .report import Check, all_pass, check
from .wstar import WStarError, check_star_axioms, check_wstar_identities, wstar_object

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Unreadable or malformed input; maps to exit code 2."""


def _digest(path: str | None) -> str | None:
    if path is None:
        return None
    p = Path(path)
    if not p.is_file():
        # bundled names resolve to shipped files
        for cand in (bundled_path(Path(path).stem), bundled_algebra_path(str(path))):
            if cand.is_file():
                p = cand
                break
        else:
            return None
    return hashlib.sha256(p.read_bytes()).hexdigest()


def _num(x: float):
    x = float(x)
    return 0.0 if x == 0.0 else x  # no "-0.0" in reports


class Report:
    """Machine-readable result of one command; serializes deterministically."""

    def __init__(self, command: str, args, inputs: dict[str, str | None]):
        self.command = command
        self.tol = args.tol
        self.seed = args.seed
        self.inputs = {k: {"path": v, "sha256": _digest(v)} for k, v in inputs.items() if v}
        self.checks: list[Check] = []
        self.values: dict = {}
        self.stage: str | None = None
        self.error: str | None = None
        self.table: list[dict] | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.stage is None and all_pass(self.checks)

    def as_dict(self) -> dict:
        d = {
            "tool": "qkit",
            "version": __version__,
            "command": self.command,
            "inputs": self.inputs,
            "tolerance": self.tol,
            "seed": self.seed,
            "values": self.values,
            "checks": [c.as_dict() for c in self.checks],
        }
        if self.table is not None:
            d["entries"] = self.table
        d["failing_stage"] = self.stage
        d["error"] = self.error
        d["pass"] = self.passed
        return d

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines = [f"qkit {__version__} {self.command}"]
        for k, v in self.inputs.items():
            lines.append(f"  {k}: {v['path']}")
        for k, v in self.values.items():
            lines.append(f"  {k} = {v}")
        for c in self.checks:
            lines.append(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<32} defect={c.defect:.3e} "
                         f"tol={c.tolerance:.1e}  [{c.anchor}]")
        if self.stage:
            lines.append(f"first failing stage: {self.stage}")
        if self.error:
            lines.append(f"error: {self.error}")
        lines.append(f"{'PASS' if self.passed else 'FAIL'} ({len(self.checks)} checks)")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------------------------
# input loading


def _category(args) -> CategorySpec | None:
    if not getattr(args, "category", None):
        return None
    try:
        return load_category(args.category)
    except (CategoryError, OSError) as exc:
        raise InputError(str(exc)) from exc


def _algebra(args, spec):
    try:
        alg = load_algebra(args.algebra, spec)
    except (CategoryError, OSError, KeyError, ValueError) as exc:
        raise InputError(f"{args.algebra}: {exc}") from exc
    if getattr(args, "normalize", False):
        alg = normalize_qsystem(alg, args.tol)
    return alg


# ---------------------------------------------------------------------------------------------
# commands


def cmd_validate_category(args) -> Report:
    rep = Report("validate-category", args, {"category": args.category})
    spec = _category(args)
    vr = validate_category(spec, args.tol, args.seed)
    rep.values = {"labels": list(spec.labels), "dims": [_num(d) for d in spec.dims]}
    rep.checks = vr.checks()
    return rep


def cmd_verify_qsystem(args) -> Report:
    rep = Report("verify-qsystem", args, {"category": args.category, "algebra": args.algebra})
    alg = _algebra(args, _category(args))
    r = qsystem_check(alg, args.tol, args.seed)
    rep.values = {
        "lambda": _num(r.lambda_),
        "lambda_prime": _num(r.lambda_prime),
        "d_A": _num(r.d_A),
        "is_qsystem": r.is_qsystem,
        "normalized": r.normalized,
        "irreducible": r.irreducible,
    }
    rep.checks = r.checks()
    return rep


def cmd_build_wstar(args) -> Report:
    rep = Report("build-wstar", args, {"category": args.category, "algebra": args.algebra})
    alg = _algebra(args, _category(args))
    try:
        w = wstar_object(alg, args.tol, args.seed)
    except WStarError as exc:
        rep.stage, rep.error = "wstar", str(exc)
        return rep
    spec = w.spec
    rep.values = {
        "sector_dims": {spec.labels[a]: w.dim(a) for a in w.sectors},
        "d_H": _num(w.d_H),
    }
    rep.checks = check_star_axioms(w, args.tol, args.seed) + check_wstar_identities(w, args.tol, args.seed)
    return rep


def cmd_roundtrip(args) -> Report:
    rep = Report("roundtrip", args, {"category": args.category, "algebra": args.algebra,
                                     "morphism": args.morphism})
    spec = _category(args)
    alg = _algebra(args, spec)
    morphism = None
    if args.morphism:
        try:
            morphism = load_morphism(args.morphism, alg.spec)
        except (CategoryError, OSError, KeyError, ValueError) as exc:
            raise InputError(f"{args.morphism}: {exc}") from exc
    rr = roundtrip_report(alg, args.tol, args.seed, morphism=morphism)
    rep.values = {"direction": rr.direction, "stages": [name for name, _ in rr.stages],
                  "max_defect": _num(rr.max_defect)}
    rep.checks = rr.checks
    rep.stage, rep.error = rr.failing_stage, rr.error
    return rep


def delta_rows(table, spec) -> list[dict]:
    rows = []
    for (a, b, c, i, j, k, l) in sorted(table.entries):
        z = complex(table.entries[(a, b, c, i, j, k, l)])
        rows.append({"a": spec.labels[a], "b": spec.labels[b], "c": spec.labels[c],
                     "i": i, "j": j, "k": k, "l": l, "re": _num(z.real), "im": _num(z.imag)})
    return rows


def cmd_delta_table(args) -> Report:
    rep = Report("delta-table", args, {"category": args.category, "algebra": args.algebra})
    alg = _algebra(args, _category(args))
    try:
        w = wstar_object(alg, args.tol, args.seed)
    except WStarError as exc:
        rep.stage, rep.error = "wstar", str(exc)
        return rep
    rep.table = delta_rows(tetra_delta(w), w.spec)
    rep.checks = [check("delta_finite", "all entries are finite",
                        0.0 if all(np.isfinite([r["re"], r["im"]]).all() for r in rep.table) else np.inf,
                        args.tol)]
    return rep


def _fmt(x) -> str:
    if isinstance(x, float):
        return "0" if x == 0 else repr(x)
    return str(x)


def render_csv(rep: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if rep.table is not None:
        w.writerow(["a", "b", "c", "i", "j", "k", "l", "re", "im"])
        for r in rep.table:
            w.writerow([_fmt(v) for v in r.values()])
    else:
        w.writerow(["name", "defect", "tolerance", "pass", "anchor"])
        for c in rep.checks:
            w.writerow([c.name, repr(c.defect), repr(c.tolerance), c.passed, c.anchor])
    return buf.getvalue()


def render_text(rep: Report) -> str:
    if rep.table is None:
        return rep.to_text()
    lines = [f"{'a':>6} {'b':>6} {'c':>6}  i j k l  Delta"]
    for r in rep.table:
        z = complex(r["re"], r["im"])
        val = f"{z.real:.12g}" if z.imag == 0 else f"{z:.12g}"
        lines.append(f"{r['a']:>6} {r['b']:>6} {r['c']:>6}  {r['i']} {r['j']} {r['k']} {r['l']}  {val}")
    return "\n".join(lines) + "\n" + rep.to_text()


COMMANDS = {
    "validate-category": cmd_validate_category,
    "verify-qsystem": cmd_verify_qsystem,
    "build-wstar": cmd_build_wstar,
    "roundtrip": cmd_roundtrip,
    "delta-table": cmd_delta_table,
}


def _default_tol() -> float:
    env = os.environ.get("QKIT_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            pass
    return 1e-9


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qkit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"qkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        needs_alg = name != "validate-category"
        sp.add_argument("--category", required=not needs_alg,
                        help="category file or bundled name (vec, z2, z3, fib, ising)")
        if needs_alg:
            sp.add_argument("--algebra", required=True, help="algebra file or shipped fixture name")
            sp.add_argument("--normalize", action="store_true", help="rescale to i*i = 1 first")
        if name == "roundtrip":
            sp.add_argument("--morphism", help="algebra morphism file for the naturality squares")
        sp.add_argument("--tol", type=float, default=_default_tol())
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
        sp.add_argument("--output", "-o", help="write the report here instead of stdout")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        rep = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"qkit: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (WStarError, ValueError, ArithmeticError) as exc:
        # e.g. normalize on a non-separable algebra
        rep = Report(args.command, args, {"category": getattr(args, "category", None),
                                          "algebra": getattr(args, "algebra", None)})
        rep.stage, rep.error = "setup", str(exc)
    if args.format == "json":
        out = rep.to_json()
    elif args.format == "csv":
        out = render_csv(rep)
    else:
        out = render_text(rep)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return EXIT_OK if rep.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
