"""Quantitative Bayesian networks over a plausibility domain."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .core import (AxiomReport, ConfigurationError, Cps, DomainError, DomainSpec, PreconditionError,
                   check_rich, members)
from .conditioning import binary_worlds, extend_probability, probability_measure
from .dag import Dag, active_trails, d_separated, query_triples
from .domains import INF, STAR, PlPDomain, ProbabilityDomain, plp_vector
from .independence import indep_rv

RECONSTRUCT_MAX_NODES = 16
R2_MAX_NODES = 12


class RepresentationError(PreconditionError):
    """A network failed the representability check it needs."""

    def __init__(self, report: AxiomReport):
        super().__init__(f"network is not representable: {report.axiom} fails at {report.witness}")
        self.report = report


class DomainViolatesBN5(DomainError):
    """solve_otimes could not produce a required quotient."""


Row = tuple  # (value for X=0, value for X=1)


@dataclass(frozen=True, eq=False)
class QuantitativeBN:
    """A dag plus one table per node.

    ``tables[X]`` maps each assignment of ``dag.parents(X)`` (a tuple of 0/1
    in parent order) to the pair of entries for X=0 and X=1.
    """

    dag: Dag
    domain: DomainSpec
    tables: Mapping[str, Mapping[tuple, Row]]
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for v in self.dag.nodes:
            table = self.tables.get(v)
            if table is None:
                raise PreconditionError(f"no cpt for node {v}")
            k = len(self.dag.parents(v))
            for y in itertools.product((0, 1), repeat=k):
                row = table.get(y)
                if row is None:
                    raise PreconditionError(f"cpt for {v} lacks the row {y}")
                if len(row) != 2 or not all(self.domain.contains(e) for e in row):
                    raise PreconditionError(f"cpt row {v} | {y} is not a pair of {self.domain.name} values")
            extra = set(table) - set(itertools.product((0, 1), repeat=k))
            if extra:
                raise PreconditionError(f"cpt for {v} has rows for unknown parent assignments {sorted(extra)}")
        unknown = set(self.tables) - set(self.dag.nodes)
        if unknown:
            raise PreconditionError(f"cpts for unknown nodes {sorted(unknown)}")

    def __eq__(self, other):
        if not isinstance(other, QuantitativeBN):
            return NotImplemented
        return self.dag == other.dag and self.domain == other.domain and \
            {k: dict(v) for k, v in self.tables.items()} == {k: dict(v) for k, v in other.tables.items()}

    __hash__ = None

    @property
    def variables(self) -> tuple[str, ...]:
        return self.dag.nodes

    def entry(self, node: str, world: Mapping[str, int]):
        """d_{X, G, x}: the entry of X's table selected by a full assignment."""
        y = tuple(world[p] for p in self.dag.parents(node))
        return self.tables[node][y][world[node]]

    def rows(self):
        for v in self.dag.nodes:
            for y, row in sorted(self.tables[v].items()):
                yield v, y, row


# --------------------------------------------------------------------------
# representability


def _worlds_dicts(nodes):
    for values in itertools.product((0, 1), repeat=len(nodes)):
        yield dict(zip(nodes, values))


def check_r1(bn: QuantitativeBN) -> AxiomReport:
    d = bn.domain
    checked = 0
    for v, y, row in bn.rows():
        checked += 1
        if not d.in_dom_oplus(row) or d.oplus(row) != d.top:
            return AxiomReport("R1", False, {"node": v, "parents": dict(zip(bn.dag.parents(v), y)),
                                             "row": [d.format_value(e) for e in row]}, checked)
    return AxiomReport("R1", True, None, checked)


def check_r2(bn: QuantitativeBN) -> AxiomReport:
    """Chain products along the topological order stay inside Dom(otimes).

    Both factor orientations are checked the way reconstruction multiplies:
    a new entry on the left of the running product, and a product of later
    entries on the left of an earlier entry.
    """
    d = bn.domain
    order = bn.dag.topological_order()
    n = len(order)
    if n > R2_MAX_NODES:
        raise PreconditionError(f"R2 checking is capped at {R2_MAX_NODES} nodes")
    if d.otimes_total:
        return AxiomReport("R2", True, None, 0, "Dom(otimes) is total")
    checked = 0
    for world in _worlds_dicts(bn.dag.nodes):
        e = [bn.entry(v, world) for v in order]
        # P[s][m]: product of entries s..m, later entries on the left
        P = [[None] * n for _ in range(n)]
        for s in range(n):
            P[s][s] = e[s]
            for m in range(s + 1, n):
                checked += 1
                if not d.in_dom_otimes(e[m], P[s][m - 1]):
                    return _r2_fail(bn, "new-left", s + 1, m + 1, world, e[m], P[s][m - 1], checked)
                P[s][m] = d.otimes(e[m], P[s][m - 1])
        for k in range(1, n):
            for j in range(k):
                checked += 1
                if not d.in_dom_otimes(P[j + 1][k], e[j]):
                    return _r2_fail(bn, "earlier-right", j + 1, k + 1, world, P[j + 1][k], e[j], checked)
    return AxiomReport("R2", True, None, checked)


def _r2_fail(bn, clause, j, k, world, a, b, checked):
    d = bn.domain
    return AxiomReport("R2", False, {"clause": clause, "j": j, "k": k, "world": dict(world),
                                     "pair": [d.format_value(a), d.format_value(b)]}, checked)


def check_representable(bn: QuantitativeBN) -> AxiomReport:
    r1 = check_r1(bn)
    if r1.holds is False:
        return r1
    r2 = check_r2(bn)
    if r2.holds is False:
        return r2
    return AxiomReport("representable", True, None, r1.checked + r2.checked)


# --------------------------------------------------------------------------
# reconstruction


def joint(bn: QuantitativeBN, *, check: bool = True) -> list:
    """Chain product per world, worlds in product order over ``dag.nodes``."""
    if len(bn.dag.nodes) > RECONSTRUCT_MAX_NODES:
        raise PreconditionError(f"reconstruction is capped at {RECONSTRUCT_MAX_NODES} nodes")
    if check:
        rep = check_representable(bn) if len(bn.dag.nodes) <= R2_MAX_NODES else check_r1(bn)
        if rep.holds is False:
            raise RepresentationError(rep)
    d = bn.domain
    order = bn.dag.topological_order()
    out = []
    for world in _worlds_dicts(bn.dag.nodes):
        acc = bn.entry(order[0], world)
        for v in order[1:]:
            acc = d.otimes_checked(bn.entry(v, world), acc)
        out.append(acc)
    return out


def reconstruct(bn: QuantitativeBN) -> Cps:
    """The unique standard algebraic space the network represents."""
    if "cps" in bn._cache:
        return bn._cache["cps"]
    d = bn.domain
    atoms = joint(bn)
    if not d.in_dom_oplus(atoms):
        raise DomainError("the atoms of the joint do not lie in Dom(oplus)")
    nodes = bn.dag.nodes
    worlds = binary_worlds(nodes)
    uncond: dict[int, object] = {}

    def value(U):
        try:
            return uncond[U]
        except KeyError:
            pass
        rest = U & (U - 1)
        if rest in uncond:
            v = d.oplus2(uncond[rest], atoms[(U ^ rest).bit_length() - 1])
        else:
            v = d.oplus([atoms[i] for i in members(U)])
        uncond[U] = v
        return v

    quotients: dict[int, dict[int, object]] = {}

    def quotient(V):
        try:
            return quotients[V]
        except KeyError:
            pass
        pv = value(V)
        q = {}
        for i in members(V):
            r = d.solve_otimes(atoms[i], pv)
            if r is None:
                raise DomainViolatesBN5(f"{d.name}: no quotient of {d.format_value(atoms[i])} "
                                        f"by {d.format_value(pv)}")
            q[i] = r
        if not d.in_dom_oplus(list(q.values())):
            raise DomainViolatesBN5(f"{d.name}: conditional atoms leave Dom(oplus)")
        quotients[V] = q
        return q

    def cond(U, V):
        if V == (1 << len(worlds)) - 1:
            return value(U)
        q = quotient(V)
        return d.oplus([q[i] for i in members(U & V)])

    cps = Cps(worlds, d, cond, lambda V: value(V) != d.bot, variables=nodes, name=bn.name or f"bn-{d.name}")
    bn._cache["cps"] = cps
    return cps


def extract_cpts(cps: Cps, dag: Dag, name: str = "") -> QuantitativeBN:
    """Read a network's tables off a space; rows conditioned outside F' get (top, bot)."""
    if set(dag.nodes) != set(cps.variables):
        raise PreconditionError("dag nodes must be the space's variables")
    d = cps.domain
    tables = {}
    for v in dag.nodes:
        ps = dag.parents(v)
        table = {}
        for y in itertools.product((0, 1), repeat=len(ps)):
            cond = cps.assignment(dict(zip(ps, y)))
            if cps.in_cond(cond):
                table[y] = (cps.pl(cps.var_event(v, 0), cond), cps.pl(cps.var_event(v, 1), cond))
            else:
                table[y] = (d.top, d.bot)
        tables[v] = table
    return QuantitativeBN(dag, d, tables, name)


def rows_agree(bn: QuantitativeBN, other: QuantitativeBN, cps: Cps) -> dict | None:
    """First table row where the two networks differ on a parent assignment in F', or None."""
    for v in bn.dag.nodes:
        ps = bn.dag.parents(v)
        for y, row in bn.tables[v].items():
            if not cps.in_cond(cps.assignment(dict(zip(ps, y)))):
                continue
            if other.tables[v][y] != row:
                return {"node": v, "parents": dict(zip(ps, y)), "expected": row, "got": other.tables[v][y]}
    return None


def represents(bn: QuantitativeBN, cps: Cps) -> bool:
    """Compatible with the dag, and the tables agree with the space on F' rows."""
    return compatible(cps, bn.dag) and rows_agree(bn, extract_cpts(cps, bn.dag), cps) is None


# --------------------------------------------------------------------------
# compatibility and construction


def _check_nodes(cps: Cps, dag: Dag):
    if set(dag.nodes) != set(cps.variables):
        raise PreconditionError("dag nodes must be the space's variables")


def compatibility_report(cps: Cps, dag: Dag) -> AxiomReport:
    _check_nodes(cps, dag)
    checked = 0
    for v in dag.nodes:
        ps = set(dag.parents(v))
        rest = dag.nondescendants(v) - ps
        checked += 1
        if rest and not indep_rv(cps, {v}, rest, ps):
            return AxiomReport("compatible", False, {"node": v, "nondescendants": sorted(rest),
                                                     "parents": sorted(ps)}, checked)
    return AxiomReport("compatible", True, None, checked)


def compatible(cps: Cps, dag: Dag) -> bool:
    return bool(compatibility_report(cps, dag).holds)


def construct_bn(cps: Cps, ordering: Sequence[str]) -> Dag:
    """Each variable gets the smallest earlier set that screens off the other earlier ones.

    Ties go to the lexicographically first set in ``ordering`` order.
    """
    ordering = tuple(ordering)
    if sorted(ordering) != sorted(cps.variables) or len(set(ordering)) != len(ordering):
        raise PreconditionError("ordering must be a permutation of the space's variables")
    edges = []
    for k, v in enumerate(ordering):
        earlier = ordering[:k]
        for size in range(k + 1):
            found = None
            for parents in itertools.combinations(earlier, size):
                rest = set(earlier) - set(parents)
                if not rest or indep_rv(cps, {v}, rest, parents):
                    found = parents
                    break
            if found is not None:
                edges.extend((p, v) for p in found)
                break
    return Dag.of(cps.variables, edges)


# --------------------------------------------------------------------------
# random representable networks


def _rand_prob(rng, extremes: bool = True):
    r = rng.random()
    if extremes and r < 0.15:
        return Fraction(0)
    if extremes and r < 0.3:
        return Fraction(1)
    q = rng.choice((2, 3, 4, 5, 6, 8))
    return Fraction(rng.randint(1, q - 1), q)


def _each_row(dag: Dag, make) -> dict:
    return {v: {y: make(v, y) for y in itertools.product((0, 1), repeat=len(dag.parents(v)))}
            for v in dag.nodes}


def _prob_tables(dag: Dag, rng, extremes: bool = True) -> dict:
    def row(v, y):
        p = _rand_prob(rng, extremes)
        return p, 1 - p
    return _each_row(dag, row)


def _one_sided(rng, a, top):
    return (top, a) if rng.random() < 0.5 else (a, top)


def _poss_min_broad(dag: Dag, rng) -> dict:
    grid = [Fraction(k, 6) for k in range(7)]
    return _each_row(dag, lambda v, y: _one_sided(rng, rng.choice(grid), Fraction(1)))


def _poss_min_bands(dag: Dag, rng) -> dict:
    # later nodes draw from lower bands, so each new entry sits below the running product
    order = dag.topological_order()
    n = len(order)
    pos = {v: i for i, v in enumerate(order)}

    def row(v, y):
        lo, hi = Fraction(n - pos[v] - 1, n), Fraction(n - pos[v], n)
        r = rng.random()
        a = Fraction(0) if r < 0.2 else Fraction(1) if r < 0.35 else lo + (hi - lo) * Fraction(rng.randint(1, 5), 6)
        return _one_sided(rng, a, Fraction(1))
    return _each_row(dag, row)


def random_bn(dag: Dag, domain: DomainSpec, rng: random.Random, *, name: str = "",
              attempts: int = 40) -> QuantitativeBN:
    """Random tables satisfying R1 and R2.

    Where the domain's multiplication is partial, broad random tables are
    redrawn until R2 holds; after ``attempts`` misses a construction that
    satisfies R2 by design is used instead.
    """
    kind = domain.name
    if kind == "probability":
        return QuantitativeBN(dag, domain, _prob_tables(dag, rng), name)
    if kind == "ranking":
        return QuantitativeBN(dag, domain, _each_row(
            dag, lambda v, y: _one_sided(rng, rng.choice((0, 1, 1, 2, 3, INF)), 0)), name)
    if kind == "possibility_prod":
        return QuantitativeBN(dag, domain, _each_row(
            dag, lambda v, y: _one_sided(rng, rng.choice((Fraction(0), Fraction(1), _rand_prob(rng))),
                                         Fraction(1))), name)
    if kind == "possibility_min":
        broad, fallback = _poss_min_broad, _poss_min_bands
    elif isinstance(domain, PlPDomain):
        broad = lambda g, r: _plp_tables(g, domain, r)
        fallback = lambda g, r: _plp_tables(g, domain, r, extremes=False)
    else:
        raise ConfigurationError(f"no random networks for {kind}")
    for _ in range(attempts):
        bn = QuantitativeBN(dag, domain, broad(dag, rng), name)
        if check_r2(bn).holds:
            return bn
    return QuantitativeBN(dag, domain, fallback(dag, rng), name)


def _plp_tables(dag: Dag, domain: PlPDomain, rng, extremes: bool = True) -> dict:
    """One probability network per index; * where that member gives the parents zero."""
    members_ = []
    for _ in range(domain.size):
        t = _prob_tables(dag, rng, extremes)
        mu = joint(QuantitativeBN(dag, _PROB, t), check=False)
        members_.append((t, reconstruct_probability(dag.nodes, mu)))

    def row(v, y):
        ps = dag.parents(v)
        cols = [t[v][y] if cps.in_cond(cps.assignment(dict(zip(ps, y)))) else (STAR, STAR)
                for t, cps in members_]
        if all(c[0] == STAR for c in cols):
            return domain.top, domain.bot
        return plp_vector([c[0] for c in cols]), plp_vector([c[1] for c in cols])
    return _each_row(dag, row)


def reconstruct_probability(nodes: Sequence[str], weights: Sequence[Fraction]) -> Cps:
    return extend_probability(probability_measure(list(weights), variables=nodes))


_PROB = ProbabilityDomain()


# --------------------------------------------------------------------------
# soundness and completeness of d-separation


def dsep_soundness_check(dag: Dag, domain: DomainSpec, trials: int = 10, *, seed: int = 0,
                         triples: Iterable | None = None) -> AxiomReport:
    """d-separated triples must be independent in random representable networks.

    Reconstructions that are not compatible with the dag fall outside the
    soundness claim; they are skipped and counted in ``example``.
    """
    rng = random.Random(seed)
    sep = [(X, Y, Z) for X, Y, Z in (triples or query_triples(dag.nodes))
           if min(X) < min(Y) and d_separated(dag, X, Y, Z)]
    checked = skipped = 0
    for t in range(trials):
        bn = random_bn(dag, domain, rng)
        cps = reconstruct(bn)
        if not compatible(cps, dag):
            skipped += 1
            continue
        for X, Y, Z in sep:
            checked += 1
            if not indep_rv(cps, X, Y, Z):
                return AxiomReport("dsep-sound", False, {
                    "trial": t, "X": sorted(X), "Y": sorted(Y), "Z": sorted(Z),
                    "tables": {v: {str(y): [domain.format_value(e) for e in row] for y, row in tb.items()}
                               for v, tb in bn.tables.items()}}, checked)
    detail = f"{skipped} of {trials} reconstructions were not compatible and were skipped" if skipped else ""
    return AxiomReport("dsep-sound", True, None, checked, detail, example={"skipped": skipped})


_CE_CACHE: dict = {}


def _directed_paths(dag: Dag, start: str, Z: set, blocked: set):
    """Simple directed paths from ``start`` to its first Z node, avoiding ``blocked``."""
    if start in Z:
        yield (start,)
        return

    def walk(path):
        for c in dag.children(path[-1]):
            if c in blocked or c in path:
                continue
            if c in Z:
                yield tuple(path) + (c,)
            else:
                yield from walk(path + [c])

    yield from walk([start])


def _colliders(dag: Dag, trail):
    return [trail[i] for i in range(1, len(trail) - 1)
            if trail[i] in dag.children(trail[i - 1]) and trail[i] in dag.children(trail[i + 1])]


def _path_choices(dag, trail, Z):
    """Node-disjoint descendant paths for the trail's colliders: greedy first, then exhaustive."""
    heads = _colliders(dag, trail)
    on_trail = set(trail)
    options = [sorted(_directed_paths(dag, h, Z, on_trail - {h}), key=lambda p: (len(p), p)) for h in heads]
    if any(not o for o in options):
        return
    used = set()
    greedy = []
    for opts in options:
        pick = next((p for p in opts if not (set(p[1:]) & used)), None)
        if pick is None:
            break
        greedy.append(pick)
        used |= set(pick[1:])
    if len(greedy) == len(options):
        yield greedy
    for combo in itertools.product(*options):
        tails = [set(p[1:]) for p in combo]
        disjoint = sum(map(len, tails)) == len(set().union(*tails))
        if disjoint and list(combo) != greedy:
            yield list(combo)


def _counterexample_tables(dag: Dag, domain: DomainSpec, sub_edges: set, d, d2) -> dict:
    top, bot = domain.top, domain.bot
    tables = {}
    for v in dag.nodes:
        ps = dag.parents(v)
        active = [i for i, p in enumerate(ps) if (p, v) in sub_edges]
        tables[v] = {}
        for y in itertools.product((0, 1), repeat=len(ps)):
            if not active:
                tables[v][y] = (d, d2)
            else:
                k = sum(y[i] for i in active) % 2
                tables[v][y] = (top, bot) if k == 0 else (bot, top)
    return tables


def verify_counterexample(bn: QuantitativeBN, X: Iterable[str], Y: Iterable[str], Z: Iterable[str]) -> bool:
    cps = reconstruct(bn)
    return compatible(cps, bn.dag) and not indep_rv(cps, set(X), set(Y), set(Z))


def dsep_counterexample(dag: Dag, domain: DomainSpec, x: str, y: str, Z: Iterable[str] = (), *,
                        rich: tuple | None = None) -> QuantitativeBN | None:
    """A network on ``dag`` whose space violates I({x}, {y} | Z), or None when d-separated."""
    Z = frozenset(Z)
    if d_separated(dag, {x}, {y}, Z):
        return None
    key = (dag, domain, x, y, Z, rich)
    if key in _CE_CACHE:
        return _CE_CACHE[key]
    if rich is None:
        rep = check_rich(domain, len(dag.nodes))
        if not rep.holds:
            raise ConfigurationError(f"{domain.name} has no richness witness for {len(dag.nodes)} variables")
        rich = (rep.example["d"], rep.example["d2"])
    d, d2 = rich
    trails = sorted(active_trails(dag, x, {y}, Z), key=lambda t: (len(t), t))
    result = None
    for trail in trails:
        for paths in _path_choices(dag, trail, set(Z)):
            sub = {(a, b) if (a, b) in dag.edges else (b, a) for a, b in zip(trail, trail[1:])}
            for p in paths:
                sub |= set(zip(p, p[1:]))
            bn = QuantitativeBN(dag, domain, _counterexample_tables(dag, domain, sub, d, d2),
                                name=f"counterexample {x};{y}|{','.join(sorted(Z))}")
            if verify_counterexample(bn, {x}, {y}, Z):
                result = bn
                break
        if result is not None:
            break
    _CE_CACHE[key] = result
    if result is None:
        raise RuntimeError(f"no counterexample found for {x};{y}|{sorted(Z)} on {dag}")
    return result
