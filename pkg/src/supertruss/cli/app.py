"""Command dispatch and report emission.

Exit codes: 0 when every verdict passes, 1 on a verification failure (the
report is still written), 2 on an input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import TextIO

from .. import __version__
from ..cotruss import BUILTINS, CotrussPresentation, builtin, check_axioms, check_morphism, reduce
from ..errors import SupertrussError
from ..points import DEFAULT_BUDGET, check_truss_at_points
from ..superalg import Field, GrassmannAlgebra, field_from_spec
from ..ybe import check_braid, check_components, check_nondegenerate, make_map
from .stx import parse_morphism, parse_stx, render_stx

SCHEMA_VERSION = 1
MAP_KINDS = ("flip", "superflip", "left-action", "inverse-map", "odd-scaling", "composed")


class InputError(Exception):
    """Bad invocation or unreadable input (exit code 2)."""


# ---------------------------------------------------------------------------
# inputs


def shipped_file(name: str) -> str:
    """Text of a presentation shipped in ``supertruss/data``."""
    return resources.files("supertruss").joinpath("data", f"{name}.stx").read_text(encoding="utf-8")


def load_source(spec: str, field: Field | None) -> tuple[CotrussPresentation, dict]:
    """``builtin:NAME`` or a path; returns the presentation and an input record for the report."""
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        if name not in BUILTINS:
            raise InputError(f"unknown built-in {name!r}; choose from {', '.join(BUILTINS)}")
        kwargs = {"field": field} if field is not None else {}
        P = builtin(name, **kwargs)
        text = render_stx(P)
    else:
        path = Path(spec)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {spec}: {exc.strerror or exc}") from None
        P = parse_stx(text, name=path.stem, field=field)
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return P, {"source": spec, "sha256": digest, "field": str(P.field)}


def _field_arg(text: str | None) -> Field | None:
    if text is None:
        return None
    try:
        return field_from_spec(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None


# ---------------------------------------------------------------------------
# commands


def _cmd_check(args) -> dict:
    P, inp = load_source(args.source, _field_arg(args.field))
    rep = check_axioms(P, sigma13_mode=args.sigma13, slow=args.slow, seed=args.seed, samples=args.samples or 20)
    return {"inputs": [inp], "passed": rep.passed, "results": {"axioms": rep.to_dict()}}


def _algebra(args, P: CotrussPresentation) -> GrassmannAlgebra:
    if args.grassmann < 0:
        raise InputError("--grassmann must be non-negative")
    return GrassmannAlgebra(P.field, args.grassmann)


def _mode(args, P: CotrussPresentation) -> str:
    if args.exhaustive:
        return "exhaustive"
    if args.samples is not None:
        return "samples"
    return "exhaustive" if P.field.finite else "samples"


def _cmd_points(args) -> dict:
    P, inp = load_source(args.source, _field_arg(args.field))
    A = _algebra(args, P)
    mode = _mode(args, P)
    rep = check_truss_at_points(P, A, mode=mode, samples=args.samples or 100, seed=args.seed, budget=args.budget)
    return {"inputs": [inp], "passed": rep.passed, "results": {"truss": rep.to_dict()}}


def _cmd_ybe(args) -> dict:
    P, inp = load_source(args.source, _field_arg(args.field))
    A = _algebra(args, P)
    mode = _mode(args, P)
    kind = args.map.replace("-", "_")
    q = args.q
    if q is not None:
        try:
            q = P.field.coerce(Fraction(q))
        except (ValueError, ArithmeticError) as exc:
            raise InputError(f"bad --q value {args.q!r}: {exc}") from None
    r = make_map(kind, P, A, q=q, inner=args.inner.replace("-", "_"), outer=args.outer, budget=args.budget)
    samples = args.samples or 100
    comp = check_components(r, mode, samples, args.seed, args.budget)
    results = {"map": r.name, "mode": comp.mode, "points": comp.points, "triples": comp.triples,
               "braid": comp.braid_passed, "components": comp.to_dict()}
    if not comp.braid_passed:
        braid = check_braid(r, mode, samples, args.seed, args.budget).to_dict()
        results["braid_witness"] = {k: braid[k] for k in ("witness", "lhs", "rhs")}
    properties = {}
    if mode == "exhaustive":
        properties["nondegenerate"] = check_nondegenerate(r, args.budget).to_dict()
    else:
        properties["nondegenerate"] = "not decided in samples mode"
    passed = comp.braid_passed and comp.passed and comp.agrees_with_braid
    return {"inputs": [inp], "passed": passed, "results": {"ybe": results}, "properties": properties}


def _cmd_reduce(args) -> dict:
    P, inp = load_source(args.source, _field_arg(args.field))
    R = reduce(P)
    text = render_stx(R)
    rep = check_axioms(R)
    out: dict = {"inputs": [inp], "passed": rep.passed, "results": {"axioms": rep.to_dict()}}
    if args.output:
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot write {args.output}: {exc.strerror or exc}") from None
        out["results"]["written"] = {"path": args.output, "sha256": hashlib.sha256(text.encode()).hexdigest()}
    else:
        out["results"]["stx"] = text
    return out


def _cmd_morphism(args) -> dict:
    field = _field_arg(args.field)
    P, inp_p = load_source(args.source, field)
    Q, inp_q = load_source(args.target, field)
    try:
        text = Path(args.phi).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {args.phi}: {exc.strerror or exc}") from None
    phi = parse_morphism(text, P, Q)
    rep = check_morphism(phi, P, Q)
    inp_phi = {"source": args.phi, "sha256": hashlib.sha256(text.encode("utf-8")).hexdigest()}
    return {"inputs": [inp_phi, inp_p, inp_q], "passed": rep.passed, "results": {"morphism": rep.to_dict()}}


COMMANDS = {
    "check": _cmd_check,
    "points": _cmd_points,
    "ybe": _cmd_ybe,
    "reduce": _cmd_reduce,
    "morphism": _cmd_morphism,
}


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 already; keep the message on stderr
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="supertruss", description="Verify supercotruss presentations, their points and Yang-Baxter maps.")
    p.add_argument("--version", action="version", version=f"supertruss {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, source=True):
        if source:
            sp.add_argument("source", help="a .stx file or builtin:NAME")
        sp.add_argument("--field", help="qq or fp:P (overrides the file's scalars)")
        sp.add_argument("--json", action="store_true", help="machine-readable report")
        sp.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte-identity)")
        sp.add_argument("--seed", type=int, default=0)

    def pointwise(sp):
        sp.add_argument("--grassmann", type=int, default=2, metavar="N", help="test algebra Lambda_N (default 2)")
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--exhaustive", action="store_true")
        g.add_argument("--samples", type=int, metavar="N")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="tuple-evaluation cap")

    c = sub.add_parser("check", help="axioms Con1-Con7 plus counit/cozero")
    common(c)
    c.add_argument("--sigma13", choices=("graded", "plain"), default="graded")
    c.add_argument("--slow", action="store_true", help="also test random products of generators")
    c.add_argument("--samples", type=int, metavar="N", help="random products in --slow mode")

    pt = sub.add_parser("points", help="truss and semi-brace identities at points")
    common(pt)
    pointwise(pt)

    y = sub.add_parser("ybe", help="braid relation, YB1-YB3 and non-degeneracy")
    common(y)
    pointwise(y)
    y.add_argument("--map", required=True, choices=MAP_KINDS)
    y.add_argument("--q", help="scalar for odd-scaling (or composed with --outer scale)")
    y.add_argument("--inner", default="flip", choices=MAP_KINDS[:-1], help="inner map for composed")
    y.add_argument("--outer", default="parity", choices=("parity", "scale"))

    r = sub.add_parser("reduce", help="write the reduced presentation")
    common(r)
    r.add_argument("-o", "--output", help="output .stx path")

    m = sub.add_parser("morphism", help="check that a generator map is a cotruss morphism")
    m.add_argument("phi", help="file of '<gen> -> <expr>' lines")
    m.add_argument("source", help="domain presentation")
    m.add_argument("target", help="codomain presentation")
    common(m, source=False)
    return p


# ---------------------------------------------------------------------------
# reports


def _envelope(args, argv: list[str]) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "supertruss", "version": __version__},
        "command": args.command,
        "argv": list(argv),
    }


def execute(argv: list[str]) -> tuple[int, dict]:
    """Run a command; returns the exit code and the report (``report["error"]`` on exit 2)."""
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
    except InputError as exc:
        return 2, {"schema_version": SCHEMA_VERSION, "error": str(exc)}
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0), {}
    report = _envelope(args, argv)
    try:
        body = COMMANDS[args.command](args)
    except (InputError, SupertrussError, KeyError, ValueError) as exc:
        report["verdict"] = "error"
        report["error"] = f"{type(exc).__name__}: {exc.args[0] if isinstance(exc, KeyError) else exc}"
        return 2, report
    report["verdict"] = "pass" if body.pop("passed") else "fail"
    report.update(body)
    if args.timing:
        report["seconds"] = round(time.perf_counter() - start, 3)
    return (0 if report["verdict"] == "pass" else 1), report


def render_text(report: dict) -> str:
    if "command" not in report:
        return f"error: {report.get('error', 'unknown')}\n"
    lines = [f"supertruss {report['tool']['version']} {report['command']}"]
    for inp in report.get("inputs", []):
        lines.append(f"input {inp['source']} sha256:{inp['sha256'][:16]}")
    if report["verdict"] == "error":
        lines.append(f"error: {report['error']}")
        return "\n".join(lines) + "\n"
    for key, res in report["results"].items():
        lines.extend(_text_section(key, res))
    for key, prop in report.get("properties", {}).items():
        if isinstance(prop, dict):
            lines.append(f"property {key}: {'yes' if prop['passed'] else 'no'}")
            for side in ("left_witness", "right_witness"):
                if side in prop:
                    lines.append(f"  {side}: {_pts(prop[side])}")
        else:
            lines.append(f"property {key}: {prop}")
    if "seconds" in report:
        lines.append(f"time {report['seconds']}s")
    lines.append(f"verdict: {report['verdict'].upper()}")
    return "\n".join(lines) + "\n"


def _pts(points: list[dict]) -> str:
    return "; ".join("(" + ", ".join(f"{k}: {v}" for k, v in p.items()) + ")" for p in points)


def _text_section(key: str, res) -> list[str]:
    out = []
    if key in ("axioms", "morphism"):
        for c in res["checks"]:
            mark = "PASS" if c["passed"] else "FAIL"
            out.append(f"{mark} {c['name']} ({c['checked']} checked)")
            if not c["passed"]:
                w = c["witness"]
                out.append(f"  on {w['element']}: {w['lhs']}  !=  {w['rhs']}")
        out.extend(f"note: {n}" for n in res["notes"])
    elif key == "truss":
        out.append(f"points: {res['points'] if res['points'] is not None else 'sampled'}; mode {res['mode']}; "
                   f"{res['evaluations']:,} evaluations")
        for c in res["identities"]:
            out.append(f"{c['status'].upper()} {c['name']} [{c['method']}, {c['tuples']:,} tuples]")
            if "witness" in c:
                out.append(f"  witness: {_pts(c['witness'])}")
            if "note" in c:
                out.append(f"  {c['note']}")
        out.extend(f"note: {n}" for n in res["notes"])
    elif key == "ybe":
        out.append(f"map {res['map']}; mode {res['mode']}; points {res['points']}; {res['triples']:,} triples checked")
        out.append(f"{'PASS' if res['braid'] else 'FAIL'} braid relation")
        if "braid_witness" in res:
            w = res["braid_witness"]
            out.append(f"  triple: {_pts(w['witness'])}")
            out.append(f"  (r x 1)(1 x r)(r x 1): {_pts(w['lhs'])}")
            out.append(f"  (1 x r)(r x 1)(1 x r): {_pts(w['rhs'])}")
        comp = res["components"]
        for name, ok in comp["results"].items():
            out.append(f"{'PASS' if ok else 'FAIL'} {name}")
            if name in comp["witnesses"]:
                out.append(f"  triple: {_pts(comp['witnesses'][name])}")
        out.append(f"{'PASS' if comp['agrees_with_braid'] else 'FAIL'} YB1-YB3 agree with the braid verdict")
    elif key == "written":
        out.append(f"wrote {res['path']} sha256:{res['sha256'][:16]}")
    elif key == "stx":
        out.append(res.rstrip("\n"))
    return out


def run(argv: list[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    code, report = execute(argv)
    if not report:
        return code
    as_json = "--json" in argv
    if "command" not in report:
        print(f"supertruss: {report['error']}", file=stderr)
        if as_json:
            stdout.write(json.dumps(report, indent=2) + "\n")
        return code
    if as_json:
        stdout.write(json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    else:
        stdout.write(render_text(report))
    if code == 2:
        print(f"supertruss: {report['error']}", file=stderr)
    return code


def main() -> None:
    raise SystemExit(run())
