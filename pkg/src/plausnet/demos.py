"""Named worked examples with their documented outcomes."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .conditioning import (extend_lower_upper, extend_plp, plp_raw_conditional, probability_measure,
                           probability_set)
from .core import Cps, check_algebraic, check_cpl5, check_standard, find_report
from .domains import STAR, make_domain
from .independence import indep_events, indep_rv, noninteract_events, noninteract_rv, type1_indep


@dataclass
class Check:
    label: str
    expected: object
    actual: object

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


@dataclass
class DemoResult:
    name: str
    summary: str
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def _yes(b: bool) -> str:
    return "yes" if b else "no"


# --------------------------------------------------------------------------


def lower_cpl5_space() -> Cps:
    """Three worlds, two measures; F' admits events some measure makes positive."""
    P = probability_set([[0, 0, 1], [Fraction(2, 3), Fraction(1, 3), 0]], worlds=["a", "b", "c"],
                        index=["mu", "mu'"])
    return extend_lower_upper(P, "some_positive", "lower")


def demo_lower_cpl5() -> DemoResult:
    cps = lower_cpl5_space()
    U, U2, V = cps.event("a"), cps.event("b"), cps.event("a", "b")
    rep = check_cpl5(cps, quadruples=[(U, U2, V, cps.full)])
    w = rep.witness or {}
    res = DemoResult("lower-cpl5", "lower probability with the some-positive F' is not coherent")
    res.checks = [
        Check("CPl5 holds", False, rep.holds),
        Check("P_*({a} & V | W)", Fraction(0), w.get("pl_U_and_V_given_V2")),
        Check("P_*({b} & V | W)", Fraction(0), w.get("pl_U2_and_V_given_V2")),
        Check("P_*({a} | V)", Fraction(2, 3), w.get("pl_U_given_meet")),
        Check("P_*({b} | V)", Fraction(1, 3), w.get("pl_U2_given_meet")),
    ]
    res.data = {"witness": {"U": ["a"], "U2": ["b"], "V": ["a", "b"], "V2": ["a", "b", "c"]}}
    return res


def lower_alg1_space() -> Cps:
    """Four worlds where equal interval pairs have different lower unions."""
    tenths = lambda *xs: [Fraction(x, 10) for x in xs]
    P = probability_set([tenths(1, 3, 4, 2), tenths(3, 1, 2, 4), tenths(1, 3, 2, 4)],
                        worlds=["a", "b", "c", "d"], index=["mu1", "mu2", "mu3"])
    return extend_lower_upper(P, "all_positive", "interval")


def find_alg1_obstruction(seed: int = 0, tries: int = 500, n_worlds: int = 4, members: int = 3):
    """Random search for a probability set whose interval space fails Alg1."""
    rng = random.Random(seed)
    for _ in range(tries):
        rows = []
        for _ in range(members):
            raw = [rng.randint(1, 4) for _ in range(n_worlds)]
            rows.append([Fraction(x, sum(raw)) for x in raw])
        P = probability_set(rows)
        cps = extend_lower_upper(P, "all_positive", "interval")
        rep = find_report(check_algebraic(cps), "Alg1")
        if rep.holds is False:
            return P, rep
    return None


def demo_lower_alg1() -> DemoResult:
    cps = lower_alg1_space()
    rep = find_report(check_algebraic(cps), "Alg1")
    res = DemoResult("lower-alg1", "interval-valued lower/upper probability admits no addition")
    res.checks = [Check("Alg1 holds", False, rep.holds)]
    if rep.witness:
        d = cps.domain
        res.data = {"reason": rep.witness["reason"],
                    "first": [cps.describe(rep.witness["U"]), cps.describe(rep.witness["U2"]),
                              d.format_value(rep.witness["union_value"])],
                    "second": [cps.describe(rep.witness["other_U"]), cps.describe(rep.witness["other_U2"]),
                               d.format_value(rep.witness["other_union_value"])]}
    return res


def coin_space() -> tuple:
    """Double-headed or double-tailed coin tossed twice; 1 is heads."""
    P = probability_set([[0, 0, 0, 1], [1, 0, 0, 0]], variables=("X1", "X2"), index=[0, 1])
    return P, extend_plp(P)


def demo_coin() -> DemoResult:
    P, cps = coin_space()
    t1 = type1_indep(P, ["X1"], ["X2"])
    ni = all(noninteract_events(cps, cps.var_event("X1", i), cps.var_event("X2", j), cps.full)
             for i in (0, 1) for j in (0, 1))
    ip = indep_rv(cps, ["X1"], ["X2"])
    h1, h2 = cps.var_event("X1", 1), cps.var_event("X2", 1)
    f_cond = cps.pl(h1, h2)
    f_plain = cps.pl(h1)
    raw_cond = plp_raw_conditional(P, h1, h2)
    raw_plain = plp_raw_conditional(P, h1, cps.full)
    res = DemoResult("coin", f"type-1 independent: {_yes(t1)}; NI: {_yes(ni)}; I_plp: {_yes(ip)}")
    res.checks = [
        Check("type-1 independent", True, t1),
        Check("NI", True, ni),
        Check("NI (variable form)", True, noninteract_rv(cps, ["X1"], ["X2"])),
        Check("I_plp", False, ip),
        Check("f_{X1=h}(1)", Fraction(0), raw_plain[1]),
        Check("f_{X1=h|X2=h}(1)", STAR, raw_cond[1]),
        Check("Pl(X1=h|X2=h) differs from Pl(X1=h)", True, f_cond != f_plain),
    ]
    fmt = lambda t: ",".join(STAR if e == STAR else str(e) for e in t)
    res.data = {"f_X1=h": fmt(raw_plain), "f_X1=h|X2=h": fmt(raw_cond),
                "class_X1=h": cps.domain.format_value(f_plain), "class_X1=h|X2=h": cps.domain.format_value(f_cond)}
    return res


def nonstandard_space() -> Cps:
    """mu(a) = 1, mu(b) = 0, yet {b} is a conditioning event with mu(b|b) = 1."""
    mu = probability_measure([1, 0], worlds=["a", "b"])

    def cond(U, V):
        if mu.value(V) > 0:
            return mu.value(U & V) / mu.value(V)
        return Fraction(1) if U & V else Fraction(0)

    return Cps(mu.worlds, make_domain("probability"), cond, lambda V: V != 0, name="nonstandard")


def demo_nonstandard() -> DemoResult:
    cps = nonstandard_space()
    b = cps.event("b")
    alg = check_algebraic(cps)
    res = DemoResult("nonstandard", "noninteraction without independence once standardness is dropped")
    res.checks = [
        Check("NI({b},{b}|W)", True, noninteract_events(cps, b, b, cps.full)),
        Check("I({b},{b}|W)", False, indep_events(cps, b, b, cps.full)),
        Check("standard", False, check_standard(cps).holds),
        Check("algebraic", True, all(r.holds is not False for r in alg)),
        Check("mu(b|b)", Fraction(1), cps.pl(b, b)),
    ]
    return res


DEMOS = {
    "lower-cpl5": demo_lower_cpl5,
    "coin": demo_coin,
    "nonstandard": demo_nonstandard,
    "lower-alg1": demo_lower_alg1,
}


def run_demo(name: str) -> list[DemoResult]:
    if name == "all":
        return [f() for f in DEMOS.values()]
    return [DEMOS[name]()]
