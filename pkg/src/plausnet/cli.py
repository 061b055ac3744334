"""Command-line front end.

Exit status: 0 on success, 1 when an audit or demo assertion fails, 2 on
input errors.  ``--format structured`` prints one JSON document with a
versioned schema; for a fixed seed it is byte-for-byte reproducible.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .bayesnet import (RepresentationError, check_representable, construct_bn, dsep_counterexample,
                       extract_cpts, joint)
from .core import (AxiomReport, Cps, PlausibilityError, check_algebraic, check_cps_axioms, check_cpl5,
                   members)
from .dag import d_separated
from .demos import DEMOS, run_demo
from .domains import PlPValue, canonical_kind
from .formats import (ParseError, format_event, format_joint, format_measure, format_network, measure_kind,
                      parse_event, parse_measure, parse_network, parse_query, split_vars)
from .independence import indep_events, indep_rv, noninteract_events, noninteract_rv

SCHEMA = "plausnet.report/1"
SEED_ENV = "PLAUSNET_SEED"
EVENT_KEYS = {"U", "U2", "V", "V2", "Vp", "other_U", "other_U2", "other_V"}


class InputError(Exception):
    pass


class Failure(Exception):
    """Raised after output is written, to select exit status 1."""


# --------------------------------------------------------------------------
# serialisation


def jsonable(value: Any, cps: Cps | None = None, key: str = "") -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int) and cps is not None and key in EVENT_KEYS:
        return [str(w) if not isinstance(w, tuple) else "".join(map(str, w)) for w in cps.describe(value)]
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return "inf" if math.isinf(value) else repr(value)
    if isinstance(value, PlPValue):
        if value.is_const:
            return value.tag
        return ",".join(str(e) for e in value.entries)
    if isinstance(value, dict):
        return {str(k): jsonable(v, cps, str(k)) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value, key=str) if isinstance(value, (set, frozenset)) else value
        return [jsonable(v, cps, key) for v in items]
    if cps is not None:
        try:
            return cps.domain.format_value(value)
        except Exception:
            pass
    return str(value)


def report_dict(rep: AxiomReport, cps: Cps | None = None) -> dict:
    return {"axiom": rep.axiom, "holds": rep.holds, "checked": rep.checked, "detail": rep.detail,
            "witness": jsonable(rep.witness, cps), "example": jsonable(rep.example, cps)}


def report_line(rep: AxiomReport, cps: Cps | None = None) -> str:
    tag = {True: "PASS", False: "FAIL", None: "UNKNOWN"}[rep.holds]
    line = f"{tag:7} {rep.axiom} (checked {rep.checked})"
    if rep.detail:
        line += f" [{rep.detail}]"
    if rep.witness:
        line += " witness " + json.dumps(jsonable(rep.witness, cps), sort_keys=True)
    return line


# --------------------------------------------------------------------------
# helpers


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _check_domain_flag(flag: str | None, file_kind: str):
    if flag is None:
        raise InputError("--domain is required for this command")
    try:
        want = measure_kind(flag)
    except PlausibilityError as e:
        raise InputError(str(e)) from None
    if want != file_kind:
        raise InputError(f"domain mismatch: --domain {flag} but the file declares {file_kind}")


def _load_measure(args):
    text = _read(args.file)
    mf = parse_measure(text, args.file)
    _check_domain_flag(args.domain, mf.kind)
    return text, mf


def _load_network(path: str, domain_flag: str | None, require_domain: bool = True):
    text = _read(path)
    bn = parse_network(text, path)
    if require_domain or domain_flag is not None:
        if domain_flag is None:
            raise InputError("--domain is required for this command")
        try:
            want = canonical_kind(domain_flag)
        except PlausibilityError as e:
            raise InputError(str(e)) from None
        if want != bn.domain.name:
            raise InputError(f"domain mismatch: --domain {domain_flag} but the file declares {bn.domain.name}")
    return text, bn


# --------------------------------------------------------------------------
# commands; each returns (document body, text lines, ok)


def cmd_audit(args):
    text, mf = _load_measure(args)
    cps = mf.to_cps()
    reports = check_cps_axioms(cps, seed=args.seed, budget=args.budget)
    reports.append(check_cpl5(cps, seed=args.seed, budget=args.budget))
    reports += [r for r in check_algebraic(cps, seed=args.seed, budget=args.budget)
                if r.axiom not in {x.axiom for x in reports}]
    ok = all(r.holds is not False for r in reports)
    body = {"domain": mf.kind, "worlds": cps.n, "measure": format_measure(mf),
            "reports": [report_dict(r, cps) for r in reports]}
    lines = [f"audit {args.file} ({mf.kind}, {cps.n} worlds)"] + [report_line(r, cps) for r in reports]
    lines.append("all axioms hold" if ok else "some axioms fail")
    return [text], body, lines, ok


def _space_for(args):
    if args.net:
        text, bn = _load_network(args.net, args.domain)
        from .bayesnet import reconstruct
        return text, reconstruct(bn)
    if not args.file:
        raise InputError("give a measure file or --net")
    text, mf = _load_measure(args)
    return text, mf.to_cps()


def cmd_indep(args):
    text, cps = _space_for(args)
    q = parse_query(args.query)
    if q.form == "rv":
        X, Y, Z = split_vars(q.left), split_vars(q.right), split_vars(q.given)
        I = indep_rv(cps, X, Y, Z)
        NI = noninteract_rv(cps, X, Y, Z)
        label = f"{','.join(X)} ; {','.join(Y)}" + (f" | {','.join(Z)}" if Z else "")
    else:
        U, V = parse_event(cps, q.left), parse_event(cps, q.right)
        Vp = parse_event(cps, q.given) if q.given else cps.full
        I = indep_events(cps, U, V, Vp)
        NI = noninteract_events(cps, U, V, Vp)
        label = f"{format_event(cps, U)} ; {format_event(cps, V)} | {format_event(cps, Vp)}"
    answer = NI if q.form == "ni" else I
    body = {"query": label, "form": q.form, "independent": I, "noninteracting": NI}
    word = ("noninteracting" if NI else "interacting") if q.form == "ni" else \
        ("independent" if I else "not independent")
    return [text], body, [f"{label}: {word}"], True if answer in (True, False) else False


def cmd_dsep(args):
    text, bn = _load_network(args.net, args.domain, require_domain=False)
    q = parse_query(args.query)
    X, Y, Z = split_vars(q.left), split_vars(q.right), split_vars(q.given)
    sep = d_separated(bn.dag, X, Y, Z)
    trails = d_separated(bn.dag, X, Y, Z, method="trails")
    if sep != trails:
        raise Failure("d-separation implementations disagree")
    body = {"query": args.query, "separated": sep}
    return [text], body, ["separated" if sep else "not separated"], True


def cmd_build(args):
    text, mf = _load_measure(args)
    cps = mf.to_cps()
    if not cps.variables:
        raise InputError("build needs a measure over declared vars")
    order = split_vars(args.order) if args.order else list(cps.variables)
    dag = construct_bn(cps, order)
    bn = extract_cpts(cps, dag)
    net = format_network(bn)
    body = {"ordering": order, "edges": sorted(map(list, dag.edges)), "network": net}
    return [text], body, net.rstrip("\n").split("\n"), True


def cmd_reconstruct(args):
    text, bn = _load_network(args.file, args.domain)
    rep = check_representable(bn)
    if rep.holds is False:
        body = {"representable": report_dict(rep)}
        return [text], body, [report_line(rep)], False
    values = joint(bn)
    rows = format_joint(bn, values)
    body = {"representable": report_dict(rep), "variables": list(bn.dag.nodes),
            "joint": [{"world": w, "value": v} for w, v in rows]}
    lines = ["# " + " ".join(bn.dag.nodes)] + [f"({w}) {v}" for w, v in rows]
    return [text], body, lines, True


def cmd_counterexample(args):
    text, bn = _load_network(args.net, args.domain)
    q = parse_query(args.query)
    X, Y, Z = split_vars(q.left), split_vars(q.right), split_vars(q.given)
    if len(X) != 1 or len(Y) != 1:
        raise InputError("counterexample queries take one variable on each side")
    ce = dsep_counterexample(bn.dag, bn.domain, X[0], Y[0], Z)
    if ce is None:
        body = {"query": args.query, "counterexample": None}
        return [text], body, ["none: the query is d-separated"], True
    net = format_network(ce)
    body = {"query": args.query, "counterexample": net}
    return [text], body, net.rstrip("\n").split("\n"), True


def cmd_demo(args):
    results = run_demo(args.name)
    body = {"demos": [{"name": r.name, "ok": r.ok, "summary": r.summary,
                       "checks": [{"label": c.label, "expected": jsonable(c.expected), "actual": jsonable(c.actual),
                                   "ok": c.ok} for c in r.checks],
                       "data": jsonable(r.data)} for r in results]}
    lines = []
    for r in results:
        lines.append(f"[{r.name}] {r.summary}")
        for c in r.checks:
            lines.append(f"  {'ok ' if c.ok else 'BAD'} {c.label}: {jsonable(c.actual)}"
                         + ("" if c.ok else f" (expected {jsonable(c.expected)})"))
        for k, v in r.data.items():
            lines.append(f"  {k}: {jsonable(v)}")
    return [], body, lines, all(r.ok for r in results)


COMMANDS = {"audit": cmd_audit, "indep": cmd_indep, "dsep": cmd_dsep, "build": cmd_build,
            "reconstruct": cmd_reconstruct, "counterexample": cmd_counterexample, "demo": cmd_demo}


# --------------------------------------------------------------------------


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--domain", help="prob, rank, poss-min, poss-prod, plp, lower-some or lower-all")
    common.add_argument("--seed", type=int, default=None, help=f"sampling seed (default ${SEED_ENV} or 0)")
    common.add_argument("--format", choices=("text", "structured"), default="text")

    p = argparse.ArgumentParser(prog="plausnet", description="Plausibility measures, independence and networks.")
    p.add_argument("--version", action="version", version=f"plausnet {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("audit", parents=[common], help="run the axiom suite on a measure file")
    a.add_argument("file")
    a.add_argument("--budget", type=int, default=4000, help="samples per check above five worlds")

    i = sub.add_parser("indep", parents=[common], help="answer an independence query")
    i.add_argument("file", nargs="?")
    i.add_argument("query", help='"X ; Y | Z", "ni U ; V | V2" or "ievents U ; V | V2"')
    i.add_argument("--net", help="use the space a network file represents")

    d = sub.add_parser("dsep", parents=[common], help="d-separation query on a network file")
    d.add_argument("--net", required=True)
    d.add_argument("query")

    b = sub.add_parser("build", parents=[common], help="build a network from a measure and an ordering")
    b.add_argument("file")
    b.add_argument("--order", help="comma-separated variable ordering")

    r = sub.add_parser("reconstruct", parents=[common], help="print the joint a network represents")
    r.add_argument("file")

    c = sub.add_parser("counterexample", parents=[common], help="network violating a non-d-separated query")
    c.add_argument("--net", required=True)
    c.add_argument("query", help='"X ; Y | Z" with single variables X and Y')

    m = sub.add_parser("demo", parents=[common], help="replay a worked example")
    m.add_argument("name", choices=sorted(DEMOS) + ["all"])
    return p


def _emit(args, inputs: list[str], body: dict, lines: list[str], status: str, out):
    if args.format == "structured":
        digest = hashlib.sha256("\0".join(inputs).encode()).hexdigest()
        doc = {"schema": SCHEMA, "tool": "plausnet", "version": __version__, "command": args.command,
               "seed": args.seed, "input_digest": digest, "status": status, "result": body}
        out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(lines) + "\n")


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        if args.seed is None:
            args.seed = _default_seed()
        inputs, body, lines, ok = COMMANDS[args.command](args)
    except (InputError, ParseError) as e:
        err.write(f"error: {e}\n")
        return 2
    except RepresentationError as e:
        err.write(f"error: {e}\n")
        return 2
    except Failure as e:
        err.write(f"failure: {e}\n")
        return 1
    except PlausibilityError as e:
        err.write(f"error: {e}\n")
        return 2
    _emit(args, inputs, body, lines, "ok" if ok else "fail", out)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
