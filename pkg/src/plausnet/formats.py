"""Text formats: measure files, network files, events and queries.

Measure file::

    # comments run to the end of the line
    domain rank                  # prob | rank | poss-min | poss-prod | plp | lower-some | lower-all
    vars A B                     # or: worlds a b c
    (00) 0                       # one line per world; omitted worlds get bottom weight
    (01) 1

Probability sets (plp and the lower kinds) give one block per member::

    domain plp
    worlds h t
    measure mu1
    (h) 1
    measure mu2
    (h) 1/2
    (t) 1/2

Network file::

    domain prob                  # plp adds: index i1,i2
    node A
    node B
    edge A B
    cpt A - 1/2 1/2              # '-' when the node has no parents
    cpt B A=0 1/3 2/3
    cpt B A=1 1 0
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .bayesnet import QuantitativeBN
from .conditioning import (UnconditionalMeasure, binary_worlds, extend, extend_lower_upper,
                           possibility_measure, probability_measure, probability_set, ranking_function)
from .core import Cps, PlausibilityError
from .dag import Dag
from .domains import INF, KINDS, canonical_kind, make_domain, parse_rational

SET_KINDS = ("plp", "lower_some", "lower_all")
MEASURE_KINDS = KINDS + ("lower_some", "lower_all")


class ParseError(PlausibilityError):
    def __init__(self, message: str, line: int = 0, col: int = 0, source: str = "<input>"):
        self.line, self.col, self.source = line, col, source
        where = f"{source}:{line}:{col}: " if line else f"{source}: "
        super().__init__(where + message)


def measure_kind(text: str) -> str:
    t = text.strip().lower().replace("-", "_")
    if t in ("lower", "lower_some", "lower_some_positive"):
        return "lower_some"
    if t in ("lower_all", "lower_all_positive"):
        return "lower_all"
    return canonical_kind(text)


# --------------------------------------------------------------------------
# tokenising


@dataclass(frozen=True)
class Tok:
    text: str
    line: int
    col: int


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = [Tok(m.group(), no, m.start() + 1) for m in re.finditer(r"\S+", body)]
        if toks:
            yield toks


class _Reader:
    def __init__(self, source: str):
        self.source = source

    def error(self, msg, tok: Tok | None = None):
        return ParseError(msg, tok.line if tok else 0, tok.col if tok else 0, self.source)

    def value(self, domain, tok: Tok):
        try:
            return domain.parse_value(tok.text)
        except (ValueError, ZeroDivisionError) as e:
            raise self.error(f"bad {domain.name} value {tok.text!r}: {e}", tok) from None


# --------------------------------------------------------------------------
# measures


@dataclass
class MeasureFile:
    kind: str
    measure: UnconditionalMeasure

    def to_cps(self) -> Cps:
        if self.kind == "lower_some":
            return extend_lower_upper(self.measure, "some_positive", "lower")
        if self.kind == "lower_all":
            return extend_lower_upper(self.measure, "all_positive", "lower")
        return extend(self.measure, self.kind)


def _weight_domain(kind):
    if kind == "ranking":
        return make_domain("ranking")
    if kind.startswith("possibility"):
        return make_domain(kind)
    return make_domain("probability")


def parse_measure(text: str, source: str = "<measure>") -> MeasureFile:
    rd = _Reader(source)
    kind = None
    variables: tuple = ()
    worlds: list | None = None
    blocks: list[tuple[str, dict]] = []
    current: dict | None = None
    for toks in _lines(text):
        head = toks[0]
        word = head.text
        if word == "domain":
            if kind is not None:
                raise rd.error("duplicate domain line", head)
            if len(toks) != 2:
                raise rd.error("expected: domain <kind>", head)
            try:
                kind = measure_kind(toks[1].text)
            except PlausibilityError as e:
                raise rd.error(str(e), toks[1]) from None
            continue
        if kind is None:
            raise rd.error("the file must start with a domain line", head)
        if word in ("vars", "worlds"):
            if worlds is not None:
                raise rd.error("worlds already declared", head)
            names = [t.text for t in toks[1:]]
            if not names or len(set(names)) != len(names):
                raise rd.error(f"{word} needs distinct names", head)
            if word == "vars":
                variables = tuple(names)
                worlds = binary_worlds(variables)
            else:
                worlds = names
            if kind not in SET_KINDS:
                current = {}
                blocks.append(("", current))
            continue
        if word == "measure":
            if kind not in SET_KINDS:
                raise rd.error(f"measure blocks are only for {', '.join(SET_KINDS)}", head)
            if len(toks) != 2:
                raise rd.error("expected: measure <label>", head)
            current = {}
            blocks.append((toks[1].text, current))
            continue
        if word.startswith("("):
            if worlds is None:
                raise rd.error("declare vars or worlds before world lines", head)
            if current is None:
                raise rd.error("world line outside a measure block", head)
            if len(toks) != 2 or not word.endswith(")"):
                raise rd.error("expected: (<world>) <value>", head)
            label = word[1:-1]
            if variables:
                if len(label) != len(variables) or set(label) - {"0", "1"}:
                    raise rd.error(f"world {label!r} is not a {len(variables)}-bit assignment", head)
                key = tuple(int(c) for c in label)
            else:
                if label not in worlds:
                    raise rd.error(f"unknown world {label!r}", head)
                key = label
            if key in current:
                raise rd.error(f"world {label!r} given twice", head)
            current[key] = rd.value(_weight_domain(kind), toks[1])
            continue
        raise rd.error(f"unexpected {word!r}", head)
    if kind is None:
        raise rd.error("empty measure file")
    if worlds is None:
        raise rd.error("no vars or worlds declared")
    if not blocks or (kind in SET_KINDS and not any(lab for lab, _ in blocks)):
        raise rd.error("no measure blocks")
    bottom = INF if kind == "ranking" else Fraction(0)
    rows = [[b.get(w, bottom) for w in worlds] for _, b in blocks]
    kw = dict(variables=variables) if variables else dict(worlds=worlds)
    try:
        if kind == "probability":
            m = probability_measure(rows[0], **kw)
        elif kind == "ranking":
            m = ranking_function(rows[0], **kw)
        elif kind.startswith("possibility"):
            m = possibility_measure(rows[0], **kw)
        else:
            m = probability_set(rows, index=[lab for lab, _ in blocks], **kw)
    except PlausibilityError as e:
        raise rd.error(str(e)) from None
    return MeasureFile(kind, m)


def format_measure(mf: MeasureFile) -> str:
    m = mf.measure
    alias = {"probability": "prob", "ranking": "rank", "possibility_min": "poss-min",
             "possibility_prod": "poss-prod", "plp": "plp", "lower_some": "lower-some",
             "lower_all": "lower-all"}[mf.kind]
    out = [f"domain {alias}"]
    if m.variables:
        out.append("vars " + " ".join(m.variables))
        labels = ["".join(map(str, w)) for w in m.worlds]
    else:
        out.append("worlds " + " ".join(m.worlds))
        labels = list(m.worlds)
    dom = _weight_domain(mf.kind)
    if m.kind == "probability_set":
        for lab, weights in zip(m.index, m.members):
            out.append(f"measure {lab}")
            out += [f"({l}) {dom.format_value(w)}" for l, w in zip(labels, weights)]
    else:
        out += [f"({l}) {dom.format_value(w)}" for l, w in zip(labels, m.weights)]
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# networks


def parse_network(text: str, source: str = "<network>") -> QuantitativeBN:
    rd = _Reader(source)
    domain = None
    nodes: list[str] = []
    edges: list[tuple[str, str]] = []
    cpt_lines: list[list[Tok]] = []
    for toks in _lines(text):
        head = toks[0]
        word = head.text
        if word == "domain":
            if domain is not None:
                raise rd.error("duplicate domain line", head)
            index = None
            if len(toks) == 4 and toks[2].text == "index":
                index = toks[3].text.split(",")
            elif len(toks) != 2:
                raise rd.error("expected: domain <kind> [index i1,i2,...]", head)
            try:
                domain = make_domain(toks[1].text, index)
            except PlausibilityError as e:
                raise rd.error(str(e), toks[1]) from None
        elif domain is None:
            raise rd.error("the file must start with a domain line", head)
        elif word == "node":
            if len(toks) != 2:
                raise rd.error("expected: node <name>", head)
            if toks[1].text in nodes:
                raise rd.error(f"node {toks[1].text!r} declared twice", toks[1])
            nodes.append(toks[1].text)
        elif word == "edge":
            if len(toks) != 3:
                raise rd.error("expected: edge <from> <to>", head)
            for t in toks[1:]:
                if t.text not in nodes:
                    raise rd.error(f"unknown node {t.text!r}", t)
            edges.append((toks[1].text, toks[2].text))
        elif word == "cpt":
            cpt_lines.append(toks)
        else:
            raise rd.error(f"unexpected {word!r}", head)
    if domain is None:
        raise rd.error("empty network file")
    try:
        dag = Dag.of(nodes, edges)
    except PlausibilityError as e:
        raise rd.error(str(e)) from None
    tables: dict[str, dict] = {v: {} for v in nodes}
    for toks in cpt_lines:
        if len(toks) != 5:
            raise rd.error("expected: cpt <node> <parents> <v0> <v1>", toks[0])
        node = toks[1].text
        if node not in tables:
            raise rd.error(f"unknown node {node!r}", toks[1])
        y = _parent_assignment(rd, dag, node, toks[2])
        if y in tables[node]:
            raise rd.error(f"row {toks[2].text} of {node} given twice", toks[2])
        tables[node][y] = (rd.value(domain, toks[3]), rd.value(domain, toks[4]))
    for v in nodes:
        k = len(dag.parents(v))
        for y in itertools.product((0, 1), repeat=k):
            if y not in tables[v]:
                label = ",".join(f"{p}={b}" for p, b in zip(dag.parents(v), y)) or "-"
                raise rd.error(f"cpt for {v} lacks the row {label}")
    return QuantitativeBN(dag, domain, tables)


def _parent_assignment(rd, dag: Dag, node: str, tok: Tok) -> tuple:
    parents = dag.parents(node)
    if tok.text == "-":
        if parents:
            raise rd.error(f"{node} has parents {', '.join(parents)}", tok)
        return ()
    got = {}
    for part in tok.text.split(","):
        name, eq, val = part.partition("=")
        if not eq or val not in ("0", "1"):
            raise rd.error(f"bad parent assignment {part!r}", tok)
        got[name] = int(val)
    if set(got) != set(parents):
        raise rd.error(f"row must assign exactly the parents of {node}: {', '.join(parents) or 'none'}", tok)
    return tuple(got[p] for p in parents)


def _domain_header(domain) -> str:
    alias = {"probability": "prob", "ranking": "rank", "possibility_min": "poss-min",
             "possibility_prod": "poss-prod", "plp": "plp"}[domain.name]
    if domain.name == "plp":
        return f"domain plp index {','.join(map(str, domain.index))}"
    return f"domain {alias}"


def format_network(bn: QuantitativeBN) -> str:
    d = bn.domain
    out = [_domain_header(d)]
    out += [f"node {v}" for v in bn.dag.nodes]
    out += [f"edge {a} {b}" for a, b in sorted(bn.dag.edges)]
    for v, y, row in bn.rows():
        label = ",".join(f"{p}={b}" for p, b in zip(bn.dag.parents(v), y)) or "-"
        out.append(f"cpt {v} {label} {d.format_value(row[0])} {d.format_value(row[1])}")
    return "\n".join(out) + "\n"


def format_joint(bn: QuantitativeBN, values: Sequence) -> list[tuple[str, str]]:
    return [("".join(map(str, w)), bn.domain.format_value(v))
            for w, v in zip(binary_worlds(bn.dag.nodes), values)]


# --------------------------------------------------------------------------
# events and queries


def world_label(cps: Cps, i: int) -> str:
    w = cps.worlds[i]
    return "".join(map(str, w)) if cps.variables else str(w)


def parse_event(cps: Cps, text: str) -> int:
    """``A=1&B=0``, ``{01,11}``, ``W`` (everything) or ``{}`` (nothing)."""
    text = text.strip()
    if text in ("W", "all"):
        return cps.full
    if text.startswith("{") and text.endswith("}"):
        inner = text[1:-1].strip()
        labels = {world_label(cps, i): i for i in range(cps.n)}
        mask = 0
        for lab in filter(None, (p.strip() for p in inner.split(","))):
            if lab not in labels:
                raise ParseError(f"unknown world {lab!r} in event {text!r}")
            mask |= 1 << labels[lab]
        return mask
    values = {}
    for part in text.split("&"):
        name, eq, val = part.strip().partition("=")
        if not eq or val not in ("0", "1"):
            raise ParseError(f"bad event literal {part.strip()!r}; use A=1&B=0 or {{01,11}}")
        if name not in cps.variables:
            raise ParseError(f"unknown variable {name!r}")
        values[name] = int(val)
    return cps.assignment(values)


def format_event(cps: Cps, mask: int) -> str:
    return "{" + ",".join(world_label(cps, i) for i in range(cps.n) if mask >> i & 1) + "}"


@dataclass(frozen=True)
class Query:
    form: str  # "rv", "ni" or "ievents"
    left: str
    right: str
    given: str


def parse_query(text: str) -> Query:
    """``X ; Y | Z`` over variables, or ``ni``/``ievents`` followed by events."""
    text = text.strip()
    form = "rv"
    for prefix in ("ni", "ievents"):
        if text.startswith(prefix + " "):
            form, text = prefix, text[len(prefix):].strip()
    left, sep, rest = text.partition(";")
    if not sep:
        raise ParseError(f"query {text!r} needs the form X ; Y | Z")
    right, bar, given = rest.partition("|")
    if not left.strip() or not right.strip():
        raise ParseError("both sides of ';' must be nonempty")
    return Query(form, left.strip(), right.strip(), given.strip() if bar else "")


def split_vars(text: str) -> list[str]:
    return [v for v in re.split(r"[,\s]+", text.strip()) if v]
