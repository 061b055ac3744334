"""Unconditional measures and the constructions that turn them into conditional spaces."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Hashable, Sequence

from .core import Cps, MalformedMeasure, PlausibilityMeasure, PreconditionError
from .domains import (INF, LIFT_BOT, LIFT_TOP, PLP_BOT, PLP_TOP, STAR, IntervalDomain, IntervalValue,
                      LiftedDomain, LiftedValue, OrderOnlyDomain, make_domain, plp_vector)

MEASURE_KINDS = ("probability", "ranking", "possibility", "probability_set")


def binary_worlds(variables: Sequence[str]) -> list[tuple[int, ...]]:
    """All value tuples over binary variables, first variable most significant."""
    return list(itertools.product((0, 1), repeat=len(variables)))


class UnconditionalMeasure:
    """A measure given by its values on single worlds.

    ``kind`` is one of probability, ranking, possibility or probability_set.
    For a probability set, ``weights`` holds one weight sequence per member
    and ``index`` labels the members.
    """

    def __init__(self, kind: str, weights, *, worlds: Sequence[Hashable] | None = None,
                 variables: Sequence[str] = (), index: Sequence[Hashable] | None = None):
        if kind not in MEASURE_KINDS:
            raise PreconditionError(f"unknown measure kind {kind!r}")
        self.kind = kind
        self.variables = tuple(variables)
        if worlds is None:
            if self.variables:
                worlds = binary_worlds(self.variables)
            else:
                size = len(weights[0]) if kind == "probability_set" else len(weights)
                worlds = [f"w{i}" for i in range(size)]
        self.worlds = tuple(worlds)
        self.n = len(self.worlds)
        self.full = (1 << self.n) - 1
        if kind == "probability_set":
            self.members = tuple(tuple(_as_weight(x, "probability") for x in m) for m in weights)
            if not self.members:
                raise MalformedMeasure("a probability set needs at least one member")
            self.index = tuple(index) if index is not None else tuple(range(len(self.members)))
            if len(self.index) != len(self.members):
                raise MalformedMeasure("index labels do not match the members")
            for m in self.members:
                _validate("probability", m, self.n)
            self.weights = None
        else:
            if index is not None:
                raise PreconditionError("only probability sets take an index")
            self.weights = tuple(_as_weight(x, kind) for x in weights)
            _validate(kind, self.weights, self.n)
            self.members = ()
            self.index = ()
        self._cache: dict = {}

    def __repr__(self):
        return f"<{self.kind} measure on {self.n} worlds>"

    def _combine(self, kind, weights, U, key):
        try:
            return self._cache[key]
        except KeyError:
            pass
        if U == 0:
            v = {"probability": Fraction(0), "ranking": INF, "possibility": Fraction(0)}[kind]
        else:
            low = U & -U
            rest = self._combine(kind, weights, U ^ low, key[:-1] + (U ^ low,))
            w = weights[low.bit_length() - 1]
            v = rest + w if kind == "probability" else min(rest, w) if kind == "ranking" else max(rest, w)
        self._cache[key] = v
        return v

    def value(self, U: int):
        if self.kind == "probability_set":
            raise PreconditionError("a probability set has no single value; use member_value")
        return self._combine(self.kind, self.weights, U, (U,))

    def member_value(self, i: int, U: int) -> Fraction:
        return self._combine("probability", self.members[i], U, (i, U))

    def member(self, i: int) -> "UnconditionalMeasure":
        return UnconditionalMeasure("probability", self.members[i], worlds=self.worlds, variables=self.variables)

    def event(self, *labels) -> int:
        mask = 0
        for lab in labels:
            mask |= 1 << self.worlds.index(lab)
        return mask


def _as_weight(x, kind):
    if kind == "ranking":
        return x
    return Fraction(x)


def _validate(kind, weights, n):
    if len(weights) != n:
        raise MalformedMeasure(f"expected {n} weights, got {len(weights)}")
    if kind == "probability":
        if any(w < 0 for w in weights) or sum(weights) != 1:
            raise MalformedMeasure("probability weights must be nonnegative and sum to 1")
    elif kind == "ranking":
        for w in weights:
            if not (w == INF or (isinstance(w, int) and w >= 0)):
                raise MalformedMeasure(f"rank {w!r} is not a natural number or inf")
        if n and min(weights) != 0:
            raise MalformedMeasure("some world must have rank 0")
    elif kind == "possibility":
        if any(not 0 <= w <= 1 for w in weights):
            raise MalformedMeasure("possibility degrees must lie in [0,1]")
        if n and max(weights) != 1:
            raise MalformedMeasure("some world must have possibility 1")


def probability_measure(weights, **kw) -> UnconditionalMeasure:
    return UnconditionalMeasure("probability", weights, **kw)


def ranking_function(ranks, **kw) -> UnconditionalMeasure:
    return UnconditionalMeasure("ranking", ranks, **kw)


def possibility_measure(degrees, **kw) -> UnconditionalMeasure:
    return UnconditionalMeasure("possibility", degrees, **kw)


def probability_set(members, **kw) -> UnconditionalMeasure:
    return UnconditionalMeasure("probability_set", members, **kw)


def as_plausibility(measure: UnconditionalMeasure) -> PlausibilityMeasure:
    """View a measure as a plausibility measure over its natural domain.

    Probability sets map to Pl_P vectors; possibility uses the product domain
    (both possibility domains share the same order).
    """
    kw = dict(variables=measure.variables)
    if measure.kind == "probability_set":
        dom = make_domain("plp", measure.index)
        k = len(measure.members)
        return PlausibilityMeasure(measure.worlds, dom,
                                   lambda U: plp_vector([measure.member_value(i, U) for i in range(k)]), **kw)
    dom = make_domain({"probability": "probability", "ranking": "ranking",
                       "possibility": "possibility_prod"}[measure.kind])
    return PlausibilityMeasure(measure.worlds, dom, measure.value, **kw)


def _require(measure, kind):
    if measure.kind != kind:
        raise PreconditionError(f"expected a {kind} measure, got {measure.kind}")


# --------------------------------------------------------------------------
# conditioning constructions


def extend_probability(mu: UnconditionalMeasure) -> Cps:
    _require(mu, "probability")
    v = mu.value
    return Cps(mu.worlds, make_domain("probability"), lambda U, V: v(U & V) / v(V),
               lambda V: v(V) > 0, variables=mu.variables, name="probability")


def extend_ranking(kappa: UnconditionalMeasure) -> Cps:
    _require(kappa, "ranking")
    k = kappa.value

    def cond(U, V):
        a = k(U & V)
        return INF if a == INF else a - k(V)

    return Cps(kappa.worlds, make_domain("ranking"), cond, lambda V: k(V) != INF,
               variables=kappa.variables, name="ranking")


def extend_possibility(poss: UnconditionalMeasure, variant: str) -> Cps:
    _require(poss, "possibility")
    p = poss.value
    if variant == "min":
        def cond(U, V):
            a, b = p(U & V), p(V)
            return a if a < b else Fraction(1)
    elif variant == "prod":
        def cond(U, V):
            return p(U & V) / p(V)
    else:
        raise PreconditionError(f"unknown possibility conditioning {variant!r}")
    return Cps(poss.worlds, make_domain(f"possibility_{variant}"), cond, lambda V: p(V) > 0,
               variables=poss.variables, name=f"possibility_{variant}")


def extend_lower_upper(P: UnconditionalMeasure, strictness: str, component: str = "interval") -> Cps:
    """Lower/upper conditional probability of a probability set.

    ``strictness`` picks F': all members positive on V, or some member
    positive (then the bounds range over the members positive on V).
    ``component`` selects interval values, or just the lower or upper bound
    ordered as numbers.
    """
    _require(P, "probability_set")
    k = len(P.members)
    mv = P.member_value
    if strictness == "all_positive":
        defined = lambda V: all(mv(i, V) > 0 for i in range(k))
    elif strictness == "some_positive":
        defined = lambda V: any(mv(i, V) > 0 for i in range(k))
    else:
        raise PreconditionError(f"unknown strictness {strictness!r}")

    def bounds(U, V):
        vals = [mv(i, U & V) / mv(i, V) for i in range(k) if mv(i, V) > 0]
        return min(vals), max(vals)

    if component == "interval":
        dom, cond = IntervalDomain(), lambda U, V: IntervalValue(*bounds(U, V))
    elif component == "lower":
        dom, cond = OrderOnlyDomain(make_domain("probability"), "lower_probability"), lambda U, V: bounds(U, V)[0]
    elif component == "upper":
        dom, cond = OrderOnlyDomain(make_domain("probability"), "upper_probability"), lambda U, V: bounds(U, V)[1]
    else:
        raise PreconditionError(f"unknown component {component!r}")
    return Cps(P.worlds, dom, cond, defined, variables=P.variables, name=f"{component}-{strictness}")


def extend_plp(P: UnconditionalMeasure, variant: str = "some_positive") -> Cps:
    """Pl_P: entry i is the i-th member's conditional, * where that member gives V zero."""
    _require(P, "probability_set")
    k = len(P.members)
    mv = P.member_value
    if variant == "some_positive":
        defined = lambda V: any(mv(i, V) > 0 for i in range(k))
    elif variant == "all_positive":
        defined = lambda V: all(mv(i, V) > 0 for i in range(k))
    else:
        raise PreconditionError(f"unknown plp variant {variant!r}")

    def cond(U, V):
        return plp_vector([mv(i, U & V) / mv(i, V) if mv(i, V) > 0 else STAR for i in range(k)])

    return Cps(P.worlds, make_domain("plp", P.index), cond, defined, variables=P.variables, name="plp")


def plp_raw_conditional(P: UnconditionalMeasure, U: int, V: int) -> tuple:
    """The representative vector of Pl_P(U|V) before bottom/top identification."""
    _require(P, "probability_set")
    mv = P.member_value
    return tuple(mv(i, U & V) / mv(i, V) if mv(i, V) > 0 else STAR for i in range(len(P.members)))


def lift_unconditional(pl) -> Cps:
    """Conditional space over pairs (Pl(U & V), V) for any unconditional measure."""
    if isinstance(pl, UnconditionalMeasure):
        pl = as_plausibility(pl)
    d = pl.domain
    val = pl.value

    def cond(U, V):
        a, b = val(U & V), val(V)
        if a == b:
            return LIFT_TOP
        if a == d.bot:
            return LIFT_BOT
        return LiftedValue("pair", a, V)

    return Cps(pl.worlds, LiftedDomain(d), cond, lambda V: val(V) != d.bot,
               variables=pl.variables, name=f"lift-{d.name}")


def extend(measure: UnconditionalMeasure, kind: str) -> Cps:
    """Dispatch to the standard construction for a domain kind."""
    if kind == "probability":
        return extend_probability(measure)
    if kind == "ranking":
        return extend_ranking(measure)
    if kind == "possibility_min":
        return extend_possibility(measure, "min")
    if kind == "possibility_prod":
        return extend_possibility(measure, "prod")
    if kind == "plp":
        return extend_plp(measure)
    raise PreconditionError(f"no standard construction for {kind!r}")


# --------------------------------------------------------------------------
# random measures for tests and demos


def random_measure(kind: str, rng: random.Random, *, n_worlds: int | None = None,
                   variables: Sequence[str] = (), zero_rate: float = 0.25, members: int = 2,
                   index: Sequence[Hashable] | None = None) -> UnconditionalMeasure:
    """A random measure with small rational weights; zeros are frequent on purpose.

    ``kind`` may be a measure kind or a domain kind (possibility_min and
    possibility_prod give a possibility measure, plp a probability set).
    """
    kind = {"possibility_min": "possibility", "possibility_prod": "possibility",
            "plp": "probability_set"}.get(kind, kind)
    n = len(binary_worlds(variables)) if variables else n_worlds
    kw = dict(variables=variables) if variables else dict(worlds=[f"w{i}" for i in range(n)])

    def prob():
        while True:
            raw = [0 if rng.random() < zero_rate else rng.randint(1, 4) for _ in range(n)]
            if sum(raw):
                return [Fraction(x, sum(raw)) for x in raw]

    if kind == "probability":
        return probability_measure(prob(), **kw)
    if kind == "probability_set":
        return probability_set([prob() for _ in range(members)], index=index, **kw)
    if kind == "ranking":
        raw = [INF if rng.random() < zero_rate else rng.randint(0, 3) for _ in range(n)]
        if all(r == INF for r in raw):
            raw[rng.randrange(n)] = 0
        low = min(raw)
        return ranking_function([r if r == INF else r - low for r in raw], **kw)
    if kind == "possibility":
        raw = [Fraction(0) if rng.random() < zero_rate else Fraction(rng.randint(1, 6), 6) for _ in range(n)]
        raw[rng.randrange(n)] = Fraction(1)
        return possibility_measure(raw, **kw)
    raise PreconditionError(f"unknown measure kind {kind!r}")
