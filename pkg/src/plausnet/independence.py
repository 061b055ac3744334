"""Conditional independence, noninteractivity and the semi-graphoid checker."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import AxiomReport, Cps, PreconditionError
from .conditioning import UnconditionalMeasure, extend_probability


@dataclass(frozen=True)
class IndependenceQuery:
    """X ; Y | Z over variable names."""

    X: frozenset
    Y: frozenset
    Z: frozenset

    def __post_init__(self):
        if self.X & self.Y or self.X & self.Z or self.Y & self.Z:
            raise PreconditionError("independence queries need pairwise disjoint sets")

    @classmethod
    def of(cls, X: Iterable[str], Y: Iterable[str], Z: Iterable[str] = ()):
        return cls(frozenset(X), frozenset(Y), frozenset(Z))


# --------------------------------------------------------------------------
# events


def indep_events(cps: Cps, U: int, V: int, Vp: int) -> bool:
    """Both clauses of conditional independence; each is vacuous off F'."""
    VV = V & Vp
    if cps.in_cond(VV) and cps.pl(U, VV) != cps.pl(U, Vp):
        return False
    UV = U & Vp
    if cps.in_cond(UV) and cps.pl(V, UV) != cps.pl(V, Vp):
        return False
    return True


def indep_events_with_complements(cps: Cps, U: int, V: int, Vp: int) -> bool:
    """The stronger reading that also demands independence of the complements."""
    cU, cV = cps.full & ~U, cps.full & ~V
    return all(indep_events(cps, a, b, Vp) for a in (U, cU) for b in (V, cV))


def noninteract_events(cps: Cps, U: int, V: int, Vp: int, *, explain: bool = False):
    """Pl(U & V | V') == Pl(U|V') * Pl(V|V') whenever V' is in F'.

    Multiplication is the domain's total operation.  With ``explain`` the
    result is ``(answer, diagnostic)``.
    """
    d = cps.domain
    if not cps.in_cond(Vp):
        return (True, "conditioning event outside F'") if explain else True
    if not d.has_algebra:
        return (False, f"{d.name} has no multiplication") if explain else False
    a, b = cps.pl(U, Vp), cps.pl(V, Vp)
    ok = cps.pl(U & V, Vp) == d.otimes(a, b)
    if explain:
        note = "" if d.in_dom_otimes(a, b) else "factor pair lies outside Dom(otimes)"
        return ok, note
    return ok


# --------------------------------------------------------------------------
# random variables


def _assignments(variables: Sequence[str]):
    for values in itertools.product((0, 1), repeat=len(variables)):
        yield dict(zip(variables, values))


def _check_disjoint(X, Y, Z):
    X, Y, Z = set(X), set(Y), set(Z)
    if X & Y or X & Z or Y & Z:
        raise PreconditionError("variable sets must be pairwise disjoint")


def indep_rv(cps: Cps, X: Iterable[str], Y: Iterable[str], Z: Iterable[str] = ()) -> bool:
    """I(X, Y | Z) for all value assignments; vacuous when X or Y is empty."""
    X, Y, Z = sorted(X), sorted(Y), sorted(Z)
    _check_disjoint(X, Y, Z)
    for v in X + Y + Z:
        cps.var_index(v)
    if not X or not Y:
        return True
    xs = [cps.assignment(a) for a in _assignments(X)]
    ys = [cps.assignment(a) for a in _assignments(Y)]
    for z in _assignments(Z):
        Ze = cps.assignment(z)
        for U in xs:
            for V in ys:
                if not indep_events(cps, U, V, Ze):
                    return False
    return True


def noninteract_rv(cps: Cps, X: Iterable[str], Y: Iterable[str], Z: Iterable[str] = ()) -> bool:
    X, Y, Z = sorted(X), sorted(Y), sorted(Z)
    _check_disjoint(X, Y, Z)
    if not X or not Y:
        return True
    for z in _assignments(Z):
        Ze = cps.assignment(z)
        for x in _assignments(X):
            for y in _assignments(Y):
                if not noninteract_events(cps, cps.assignment(x), cps.assignment(y), Ze):
                    return False
    return True


def type1_indep(P: UnconditionalMeasure, X: Iterable[str], Y: Iterable[str], Z: Iterable[str] = ()) -> bool:
    """Probabilistic conditional independence under every member separately."""
    if P.kind != "probability_set":
        raise PreconditionError("type-1 independence needs a probability set")
    X, Y, Z = list(X), list(Y), list(Z)
    return all(indep_rv(extend_probability(P.member(i)), X, Y, Z) for i in range(len(P.members)))


# --------------------------------------------------------------------------
# semi-graphoid properties


RULES = ("CIRV1", "CIRV2", "CIRV3", "CIRV4")


def _rule(cps, rule, X, Y, Y2, Z):
    """Return (antecedent holds, consequent holds) for one instance."""
    I = lambda a, b, c: indep_rv(cps, a, b, c)
    if rule == "CIRV1":
        if not I(X, Y, Z):
            return False, True
        return True, I(Y, X, Z)
    if rule == "CIRV2":
        if not I(X, Y | Y2, Z):
            return False, True
        return True, I(X, Y, Z)
    if rule == "CIRV3":
        if not I(X, Y | Y2, Z):
            return False, True
        return True, I(X, Y, Y2 | Z)
    if not (I(X, Y, Z) and I(X, Y2, Y | Z)):
        return False, True
    return True, I(X, Y | Y2, Z)


def _roles(variables, rng, mode, samples):
    # every variable goes to X, Y, Y', Z or nowhere
    if mode == "exhaustive":
        yield from itertools.product(range(5), repeat=len(variables))
    else:
        for _ in range(samples):
            yield tuple(rng.randrange(5) for _ in variables)


def check_semigraphoid(cps: Cps, n_vars: int | None = None, mode: str = "exhaustive", *,
                       samples: int = 2000, seed: int = 0) -> list[AxiomReport]:
    """Symmetry, decomposition, weak union and contraction.

    ``checked`` in each report counts instances whose antecedent held.
    Degenerate role assignments (X or Y empty, or Y' empty for the rules
    that use it) hold vacuously and are not counted.
    """
    variables = list(cps.variables[:n_vars] if n_vars else cps.variables)
    if mode == "exhaustive" and len(variables) > 4:
        raise PreconditionError("exhaustive mode is limited to four variables")
    if mode not in ("exhaustive", "sampled"):
        raise PreconditionError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    counts = dict.fromkeys(RULES, 0)
    witness = {}
    for roles in _roles(variables, rng, mode, samples):
        parts = [frozenset(v for v, r in zip(variables, roles) if r == k) for k in range(1, 5)]
        X, Y, Y2, Z = parts
        if not X or not Y:
            continue
        for rule in RULES:
            if rule in witness or (rule != "CIRV1" and not Y2):
                continue
            ante, cons = _rule(cps, rule, X, Y, Y2, Z)
            if ante:
                counts[rule] += 1
                if not cons:
                    witness[rule] = {"X": sorted(X), "Y": sorted(Y), "Y2": sorted(Y2), "Z": sorted(Z)}
    return [AxiomReport(r, False, witness[r], counts[r]) if r in witness else AxiomReport(r, True, None, counts[r])
            for r in RULES]


# --------------------------------------------------------------------------


def check_prob_indep_equivalence(mu, U: int, V: int) -> AxiomReport:
    """For probability: conditioning on U, the product rule and conditioning on V agree."""
    cps = mu if isinstance(mu, Cps) else extend_probability(mu)
    a = not cps.in_cond(U) or cps.pl(V, U) == cps.pl(V)
    b = cps.pl(U & V) == cps.pl(U) * cps.pl(V)
    c = not cps.in_cond(V) or cps.pl(U, V) == cps.pl(U)
    if a == b == c:
        return AxiomReport("prob-indep-equivalence", True, None, 1, example={"agree": a})
    return AxiomReport("prob-indep-equivalence", False, {"U": U, "V": V, "a": a, "b": b, "c": c}, 1)


def find_ni_without_independence(cps: Cps, *, events: Iterable[tuple[int, int, int]] | None = None):
    """First event triple where noninteractivity holds but independence fails, or None."""
    if events is None:
        r = range(cps.full + 1)
        events = ((U, V, Vp) for Vp in reversed(r) for U in r for V in r)
    for U, V, Vp in events:
        if noninteract_events(cps, U, V, Vp) and not indep_events(cps, U, V, Vp):
            return U, V, Vp
    return None
