"""Plausibility domains, conditional plausibility spaces and the axiom auditors.

Events are plain ``int`` bitmasks over the world list of a space: bit ``i``
set means world ``i`` belongs to the event.  Every event algebra is the full
power set of the worlds.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, Sequence

import numpy as np

# Spaces with at most this many worlds are audited exhaustively; larger ones
# are sampled.
EXHAUSTIVE_MAX_WORLDS = 5
DEFAULT_BUDGET = 4000


class PlausibilityError(Exception):
    """Base class for every error raised by this package."""


class MalformedMeasure(PlausibilityError):
    pass


class MalformedCps(PlausibilityError):
    pass


class UndefinedConditional(PlausibilityError):
    """Raised when conditioning on an event outside F'."""


class DomainError(PlausibilityError):
    """A partial operation was applied outside its domain."""


class ConfigurationError(PlausibilityError):
    pass


class PreconditionError(PlausibilityError, ValueError):
    pass


# --------------------------------------------------------------------------
# events


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def members(mask: int) -> Iterator[int]:
    """Indices of the worlds in ``mask``, ascending."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def subsets(mask: int) -> Iterator[int]:
    """All subsets of ``mask`` including the empty event."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


# --------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of one axiom check.

    ``holds`` is ``None`` for inconclusive searches (for example a richness
    search that found no witness).  ``witness`` is present exactly when
    ``holds`` is ``False``.
    """

    axiom: str
    holds: bool | None
    witness: Mapping[str, Any] | None = None
    checked: int = 0
    detail: str = ""
    example: Mapping[str, Any] | None = None

    def __post_init__(self):
        if (self.witness is not None) != (self.holds is False):
            raise ValueError(f"{self.axiom}: witness must accompany exactly the failing reports")

    @property
    def failed(self) -> bool:
        return self.holds is False


def _ok(axiom, checked, detail="", example=None):
    return AxiomReport(axiom, True, None, checked, detail, example)


def _fail(axiom, witness, checked, detail=""):
    return AxiomReport(axiom, False, dict(witness), checked, detail)


def find_report(reports: Iterable[AxiomReport], axiom: str) -> AxiomReport:
    for r in reports:
        if r.axiom == axiom:
            return r
    raise KeyError(axiom)


# --------------------------------------------------------------------------
# domains


class DomainSpec:
    """A plausibility value algebra.

    ``oplus`` and ``otimes`` are total functions; ``in_dom_oplus`` and
    ``in_dom_otimes`` say where the algebraic axioms constrain them.  Use the
    ``*_checked`` variants when leaving the domain must be an error.
    Domains without an algebra set ``has_algebra = False``.
    """

    name = "abstract"
    has_algebra = True
    otimes_total = False  # Dom(otimes) is all of D x D
    bot: Any = None
    top: Any = None

    def leq(self, a, b) -> bool:
        raise NotImplementedError

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def contains(self, value) -> bool:
        raise NotImplementedError

    def oplus(self, values: Sequence):
        acc = self.bot
        for v in values:
            acc = self.oplus2(acc, v)
        return acc

    def oplus2(self, a, b):
        raise NotImplementedError(f"{self.name} has no addition")

    def otimes(self, a, b):
        raise NotImplementedError(f"{self.name} has no multiplication")

    def in_dom_oplus(self, values: Sequence) -> bool:
        return True

    def in_dom_otimes(self, a, b) -> bool:
        return True

    def oplus_checked(self, values: Sequence):
        values = tuple(values)
        if not self.in_dom_oplus(values):
            raise DomainError(f"{self.name}: {self.format_tuple(values)} is outside Dom(oplus)")
        return self.oplus(values)

    def otimes_checked(self, a, b):
        if not self.in_dom_otimes(a, b):
            raise DomainError(f"{self.name}: ({self.format_value(a)}, {self.format_value(b)}) is outside Dom(otimes)")
        return self.otimes(a, b)

    def solve_otimes(self, product, divisor):
        """Return ``d`` with ``(d, divisor)`` in Dom(otimes) and ``d * divisor == product``, or None."""
        raise ConfigurationError(f"{self.name} provides no division")

    def rich_candidates(self) -> list[tuple[Any, Any]]:
        return []

    def sample_values(self, rng: random.Random, count: int) -> list:
        """A pool of carrier values including both extremes."""
        raise NotImplementedError

    def sample_sum_tuples(self, rng: random.Random, count: int, max_len: int = 3) -> list[tuple]:
        """Tuples that lie in Dom(oplus), built constructively."""
        raise NotImplementedError

    def format_value(self, value) -> str:
        return str(value)

    def parse_value(self, text: str):
        raise NotImplementedError

    def format_tuple(self, values) -> str:
        return "(" + ", ".join(self.format_value(v) for v in values) + ")"

    def __repr__(self):
        return f"<domain {self.name}>"

    def __eq__(self, other):
        return type(self) is type(other) and self.name == other.name

    def __hash__(self):
        return hash((type(self).__name__, self.name))


# --------------------------------------------------------------------------
# unconditional measures


class PlausibilityMeasure:
    """An unconditional plausibility measure given by a function on events."""

    def __init__(self, worlds: Sequence[Hashable], domain: DomainSpec, fn: Callable[[int], Any],
                 variables: Sequence[str] = ()):
        self.worlds = tuple(worlds)
        self.n = len(self.worlds)
        self.full = (1 << self.n) - 1
        self.domain = domain
        self.variables = tuple(variables)
        self._fn = fn
        self._cache: dict[int, Any] = {}

    def value(self, U: int):
        try:
            return self._cache[U]
        except KeyError:
            v = self._cache[U] = self._fn(U)
            return v

    __call__ = value


def check_unconditional_axioms(pl, domain: DomainSpec | None = None) -> list[AxiomReport]:
    """Pl1-Pl3 over every event of a finite measure.

    ``pl`` is a :class:`PlausibilityMeasure` or anything with ``n``,
    ``value`` and (optionally) ``domain`` attributes.
    """
    domain = domain or pl.domain
    full = (1 << pl.n) - 1
    values = {}
    for U in range(full + 1):
        v = pl.value(U)
        if not domain.contains(v):
            raise MalformedMeasure(f"value {v!r} of event {U:#b} is outside the {domain.name} carrier")
        values[U] = v
    reports = []
    if values[0] == domain.bot:
        reports.append(_ok("Pl1", 1))
    else:
        reports.append(_fail("Pl1", {"U": 0, "value": values[0]}, 1))
    if values[full] == domain.top:
        reports.append(_ok("Pl2", 1))
    else:
        reports.append(_fail("Pl2", {"U": full, "value": values[full]}, 1))
    checked = 0
    for U2 in range(full + 1):
        for U in subsets(U2):
            checked += 1
            if not domain.leq(values[U], values[U2]):
                reports.append(_fail("Pl3", {"U": U, "U2": U2, "value_U": values[U],
                                             "value_U2": values[U2]}, checked))
                break
        else:
            continue
        break
    else:
        reports.append(_ok("Pl3", checked))
    return reports


# --------------------------------------------------------------------------
# conditional plausibility spaces


class Cps:
    """A finite conditional plausibility space.

    ``conditional(U, V)`` computes Pl(U|V) and is only called for ``V`` with
    ``defined(V)`` true.  Results are memoised; the space itself is never
    mutated after construction.
    """

    def __init__(self, worlds: Sequence[Hashable], domain: DomainSpec,
                 conditional: Callable[[int, int], Any], defined: Callable[[int], bool], *,
                 variables: Sequence[str] = (), name: str = ""):
        self.worlds = tuple(worlds)
        self.n = len(self.worlds)
        self.full = (1 << self.n) - 1
        self.domain = domain
        self.variables = tuple(variables)
        self.name = name
        self._conditional = conditional
        self._defined = defined
        self._pl: dict[tuple[int, int], Any] = {}
        self._in: dict[int, bool] = {}
        self._family: list[int] | None = None
        self._var_events: dict[tuple[str, int], int] = {}
        if self.variables:
            for w in self.worlds:
                if not isinstance(w, tuple) or len(w) != len(self.variables):
                    raise MalformedCps("worlds must be value tuples over the declared variables")

    def __repr__(self):
        return f"<Cps {self.name or self.domain.name} |W|={self.n}>"

    # conditioning family
    def in_cond(self, V: int) -> bool:
        try:
            return self._in[V]
        except KeyError:
            r = self._in[V] = bool(self._defined(V))
            return r

    def cond_family(self) -> list[int]:
        if self._family is None:
            self._family = [V for V in range(self.full + 1) if self.in_cond(V)]
        return self._family

    def pl(self, U: int, V: int | None = None):
        """Pl(U|V); ``V`` defaults to the whole world set."""
        if V is None:
            V = self.full
        key = (U, V)
        try:
            return self._pl[key]
        except KeyError:
            pass
        if not self.in_cond(V):
            raise UndefinedConditional(f"conditioning event {self.describe(V)} is not in F'")
        v = self._pl[key] = self._conditional(U, V)
        return v

    def defined(self, U: int, V: int) -> bool:
        return self.in_cond(V)

    # events
    def event(self, *labels) -> int:
        mask = 0
        for lab in labels:
            try:
                mask |= 1 << self.worlds.index(lab)
            except ValueError:
                raise PreconditionError(f"unknown world {lab!r}") from None
        return mask

    def var_index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise PreconditionError(f"unknown variable {var!r}") from None

    def var_event(self, var: str, value: int) -> int:
        key = (var, value)
        try:
            return self._var_events[key]
        except KeyError:
            i = self.var_index(var)
            mask = 0
            for k, w in enumerate(self.worlds):
                if w[i] == value:
                    mask |= 1 << k
            self._var_events[key] = mask
            return mask

    def assignment(self, values: Mapping[str, int]) -> int:
        mask = self.full
        for var, val in values.items():
            mask &= self.var_event(var, val)
        return mask

    def describe(self, mask: int) -> list:
        return [self.worlds[i] for i in members(mask)]

    def range_values(self) -> list:
        """Distinct values of Pl over F x F' (exhaustive)."""
        seen = {}
        for V in self.cond_family():
            for U in range(self.full + 1):
                seen.setdefault(self.pl(U, V), None)
        return list(seen)


# --------------------------------------------------------------------------
# shared helpers for the auditors


def _exhaustive(cps: Cps, exhaustive: bool | None) -> bool:
    return cps.n <= EXHAUSTIVE_MAX_WORLDS if exhaustive is None else exhaustive


def _random_event(rng: random.Random, cps: Cps) -> int:
    return rng.getrandbits(cps.n) if cps.n else 0


def _random_superset(rng: random.Random, cps: Cps, base: int) -> int:
    return base | _random_event(rng, cps)


def _family_or_fail(cps: Cps) -> list[int]:
    fam = cps.cond_family()
    if not fam:
        raise MalformedCps("the conditioning family is empty")
    return fam


# --------------------------------------------------------------------------
# CPl1-CPl4, Acc1-Acc4 and standardness


def check_cps_axioms(cps: Cps, *, exhaustive: bool | None = None, budget: int = DEFAULT_BUDGET,
                     seed: int = 0) -> list[AxiomReport]:
    d = cps.domain
    rng = random.Random(seed)
    full = cps.full
    ex = _exhaustive(cps, exhaustive)
    fam = cps.cond_family()
    reports = [_ok("Acc1", 1, "events form the full power set")]

    if fam:
        reports.append(_ok("Acc2", 1))
    else:
        reports.append(_fail("Acc2", {"family_size": 0}, 1))
        return reports

    # closure under supersets; adding one world at a time suffices
    bad = None
    checked = 0
    for V in fam:
        for i in range(cps.n):
            if not V >> i & 1:
                checked += 1
                if not cps.in_cond(V | 1 << i):
                    bad = {"V": V, "V2": V | 1 << i}
                    break
        if bad:
            break
    reports.append(_fail("Acc3", bad, checked) if bad else _ok("Acc3", checked))

    def pairs():
        if ex:
            for V in fam:
                for U in range(full + 1):
                    yield U, V
        else:
            for _ in range(budget):
                yield _random_event(rng, cps), rng.choice(fam)

    acc4 = cpl4 = None
    n_pairs = 0
    for U, V in pairs():
        n_pairs += 1
        v = _pl(cps, U, V)
        if acc4 is None and v != d.bot and not cps.in_cond(U & V):
            acc4 = {"U": U, "V": V, "value": v}
        if cpl4 is None:
            w = _pl(cps, U & V, V)
            if v != w:
                cpl4 = {"U": U, "V": V, "value": v, "value_meet": w}
    reports.append(_fail("Acc4", acc4, n_pairs) if acc4 else _ok("Acc4", n_pairs))

    cpl1 = cpl2 = None
    for V in fam:
        if cpl1 is None and _pl(cps, 0, V) != d.bot:
            cpl1 = {"V": V, "value": _pl(cps, 0, V)}
        if cpl2 is None and _pl(cps, full, V) != d.top:
            cpl2 = {"V": V, "value": _pl(cps, full, V)}
    reports.append(_fail("CPl1", cpl1, len(fam)) if cpl1 else _ok("CPl1", len(fam)))
    reports.append(_fail("CPl2", cpl2, len(fam)) if cpl2 else _ok("CPl2", len(fam)))

    def chains():
        if ex:
            for V in fam:
                for U2 in range(full + 1):
                    for U in subsets(U2):
                        yield U, U2, V
        else:
            for _ in range(budget):
                U2 = _random_event(rng, cps)
                yield U2 & _random_event(rng, cps), U2, rng.choice(fam)

    cpl3 = None
    n3 = 0
    for U, U2, V in chains():
        n3 += 1
        if not d.leq(_pl(cps, U, V), _pl(cps, U2, V)):
            cpl3 = {"U": U, "U2": U2, "V": V, "value_U": _pl(cps, U, V), "value_U2": _pl(cps, U2, V)}
            break
    reports.append(_fail("CPl3", cpl3, n3) if cpl3 else _ok("CPl3", n3))
    reports.append(_fail("CPl4", cpl4, n_pairs) if cpl4 else _ok("CPl4", n_pairs))
    reports.append(check_standard(cps))
    return reports


def check_acceptable(cps: Cps, *, exhaustive: bool | None = None, budget: int = DEFAULT_BUDGET,
                     seed: int = 0) -> AxiomReport:
    """Acc4: Pl(U|V) above bottom forces U & V into F'."""
    rng = random.Random(seed)
    fam = _family_or_fail(cps)
    if _exhaustive(cps, exhaustive):
        pairs = ((U, V) for V in fam for U in range(cps.full + 1))
    else:
        pairs = ((_random_event(rng, cps), rng.choice(fam)) for _ in range(budget))
    n = 0
    for U, V in pairs:
        n += 1
        v = _pl(cps, U, V)
        if v != cps.domain.bot and not cps.in_cond(U & V):
            return _fail("Acc4", {"U": U, "V": V, "value": v}, n)
    return _ok("Acc4", n)


def check_standard(cps: Cps) -> AxiomReport:
    """F' must be exactly the events with unconditional plausibility above bottom."""
    bot = cps.domain.bot
    for U in range(cps.full + 1):
        inside = cps.in_cond(U)
        if inside != (_pl(cps, U, cps.full) != bot):
            return _fail("standard", {"U": U, "in_family": inside, "value": _pl(cps, U, cps.full)},
                         U + 1)
    return _ok("standard", cps.full + 1)


def _pl(cps: Cps, U: int, V: int):
    try:
        return cps.pl(U, V)
    except UndefinedConditional as exc:
        raise MalformedCps(str(exc)) from None


# --------------------------------------------------------------------------
# CPl5


def cpl5_violated(cps: Cps, U: int, U2: int, V: int, V2: int) -> bool:
    """True when the coherence biconditional fails for this quadruple."""
    leq = cps.domain.leq
    left = leq(_pl(cps, U, V & V2), _pl(cps, U2, V & V2))
    right = leq(_pl(cps, U & V, V2), _pl(cps, U2 & V, V2))
    return left != right


def _cpl5_witness(cps, U, U2, V, V2):
    return {"U": U, "U2": U2, "V": V, "V2": V2,
            "pl_U_given_meet": _pl(cps, U, V & V2), "pl_U2_given_meet": _pl(cps, U2, V & V2),
            "pl_U_and_V_given_V2": _pl(cps, U & V, V2), "pl_U2_and_V_given_V2": _pl(cps, U2 & V, V2)}


def check_cpl5(cps: Cps, *, quadruples: Iterable[tuple[int, int, int, int]] | None = None,
               exhaustive: bool | None = None, budget: int = DEFAULT_BUDGET, seed: int = 0) -> AxiomReport:
    """Coherence over all (U, U', V, V') with V & V' in F'.

    ``quadruples`` restricts the search to the given instances.
    """
    if quadruples is not None:
        checked = 0
        for U, U2, V, V2 in quadruples:
            if not cps.in_cond(V & V2):
                continue
            checked += 1
            if cpl5_violated(cps, U, U2, V, V2):
                return _fail("CPl5", _cpl5_witness(cps, U, U2, V, V2), checked)
        return _ok("CPl5", checked)

    fam = _family_or_fail(cps)
    if not _exhaustive(cps, exhaustive):
        rng = random.Random(seed)
        for k in range(budget):
            X = rng.choice(fam)
            V, V2 = _random_superset(rng, cps, X), _random_superset(rng, cps, X)
            U, U2 = _random_event(rng, cps), _random_event(rng, cps)
            if cpl5_violated(cps, U, U2, V, V2):
                return _fail("CPl5", _cpl5_witness(cps, U, U2, V, V2), k + 1)
        return _ok("CPl5", budget, "sampled")

    # Vectorised exhaustive check: intern every value, precompute the order
    # matrix, then compare order patterns of whole columns at once.
    full = cps.full
    size = full + 1
    ids: dict[Any, int] = {}
    table = np.zeros((size, size), dtype=np.int64)
    for X in fam:
        for U in range(size):
            table[U, X] = ids.setdefault(_pl(cps, U, X), len(ids))
    vals = list(ids)
    leq = cps.domain.leq
    order = np.array([[leq(a, b) for b in vals] for a in vals], dtype=bool)
    events = np.arange(size)
    checked = 0
    for V in range(size):
        meets = events & V
        for V2 in fam:
            X = V & V2
            if not cps.in_cond(X):
                continue
            a = table[:, X]
            b = table[meets, V2]
            A = order[np.ix_(a, a)]
            B = order[np.ix_(b, b)]
            checked += size * size
            diff = np.argwhere(A != B)
            if len(diff):
                U, U2 = (int(x) for x in diff[0])
                return _fail("CPl5", _cpl5_witness(cps, U, U2, V, V2), checked)
    return _ok("CPl5", checked)


# --------------------------------------------------------------------------
# algebraic structure


def _disjoint_tuples(cps: Cps, length: int, ex: bool, rng: random.Random, budget: int):
    """Ordered tuples of pairwise disjoint events."""
    if ex:
        # assign each world to one slot or to none
        for labels in itertools.product(range(length + 1), repeat=cps.n):
            t = [0] * length
            for w, slot in enumerate(labels):
                if slot:
                    t[slot - 1] |= 1 << w
            yield tuple(t)
    else:
        for _ in range(budget):
            t = [0] * length
            for w in range(cps.n):
                slot = rng.randrange(length + 1)
                if slot:
                    t[slot - 1] |= 1 << w
            yield tuple(t)


def check_algebraic(cps: Cps, *, exhaustive: bool | None = None, budget: int = DEFAULT_BUDGET,
                    seed: int = 0) -> list[AxiomReport]:
    """Acc4, Alg1-Alg4 and the bottom/top arithmetic identities.

    Besides comparing against the domain's operations, Alg1 and Alg2 are also
    checked for *functional consistency*: equal argument values must always
    produce equal results, otherwise no operation of any kind can exist.
    Domains without an algebra can only fail this way.
    """
    d = cps.domain
    rng = random.Random(seed)
    ex = _exhaustive(cps, exhaustive)
    fam = _family_or_fail(cps)
    reports = []

    reports.append(check_acceptable(cps, exhaustive=ex, budget=budget, seed=seed))

    # Alg1, collecting realised Dom(oplus) tuples on the way
    sum_tuples: set[tuple] = set()
    sums: dict[tuple, tuple] = {}
    alg1 = None
    n1 = 0
    for length in (2, 3):
        for t in _disjoint_tuples(cps, length, ex, rng, budget):
            for V in (fam if ex else (rng.choice(fam),)):
                vals = tuple(_pl(cps, U, V) for U in t)
                sum_tuples.add(vals)
                if length != 2:
                    continue
                n1 += 1
                union = _pl(cps, t[0] | t[1], V)
                if alg1 is not None:
                    continue
                seen = sums.setdefault(vals, (union, t, V))
                if seen[0] != union:
                    alg1 = {"U": t[0], "U2": t[1], "V": V, "union_value": union,
                            "other_U": seen[1][0], "other_U2": seen[1][1], "other_V": seen[2],
                            "other_union_value": seen[0], "components": vals,
                            "reason": "equal component values, different unions"}
                elif d.has_algebra:
                    if not d.in_dom_oplus(vals):
                        alg1 = {"U": t[0], "U2": t[1], "V": V, "components": vals,
                                "reason": "realised pair outside Dom(oplus)"}
                    elif d.oplus(vals) != union:
                        alg1 = {"U": t[0], "U2": t[1], "V": V, "components": vals,
                                "union_value": union, "oplus_value": d.oplus(vals),
                                "reason": "oplus disagrees with the union"}
    if alg1:
        reports.append(_fail("Alg1", alg1, n1))
    elif d.has_algebra:
        reports.append(_ok("Alg1", n1))
    else:
        reports.append(AxiomReport("Alg1", None, None, n1, "no addition supplied; realised values are consistent"))

    # Alg2, collecting realised Dom(otimes) pairs
    prod_pairs: set[tuple] = set()
    prods: dict[tuple, tuple] = {}
    alg2 = None
    n2 = 0

    def triples():
        size = cps.full + 1
        if ex:
            for V2 in fam:
                for V in range(size):
                    if cps.in_cond(V & V2):
                        for U in range(size):
                            yield U, V, V2
        else:
            for _ in range(budget):
                X = rng.choice(fam)
                yield _random_event(rng, cps), _random_superset(rng, cps, X), _random_superset(rng, cps, X)

    for U, V, V2 in triples():
        n2 += 1
        a, b = _pl(cps, U, V & V2), _pl(cps, V, V2)
        prod_pairs.add((a, b))
        target = _pl(cps, U & V, V2)
        if alg2 is not None:
            continue
        seen = prods.setdefault((a, b), (target, U, V, V2))
        if seen[0] != target:
            alg2 = {"U": U, "V": V, "V2": V2, "factors": (a, b), "value": target,
                    "other_U": seen[1], "other_V": seen[2], "other_V2": seen[3], "other_value": seen[0],
                    "reason": "equal factors, different products"}
        elif d.has_algebra:
            if not d.in_dom_otimes(a, b):
                alg2 = {"U": U, "V": V, "V2": V2, "factors": (a, b), "reason": "realised pair outside Dom(otimes)"}
            elif d.otimes(a, b) != target:
                alg2 = {"U": U, "V": V, "V2": V2, "factors": (a, b), "value": target,
                        "otimes_value": d.otimes(a, b), "reason": "otimes disagrees with the joint value"}
    if alg2:
        reports.append(_fail("Alg2", alg2, n2))
    elif d.has_algebra:
        reports.append(_ok("Alg2", n2))
    else:
        reports.append(AxiomReport("Alg2", None, None, n2, "no multiplication supplied; realised values are consistent"))

    if not d.has_algebra:
        return reports

    reports.append(_check_alg3(d, sum_tuples, prod_pairs, rng, budget))
    reports.append(_check_alg4(d, prod_pairs, rng, budget))
    reports.extend(check_bot_top_identities(d, cps_range(cps, prod_pairs, sum_tuples), prod_pairs))
    return reports


def cps_range(cps: Cps, prod_pairs=(), sum_tuples=()) -> list:
    """Range(Pl) when small enough to enumerate, else the values seen so far."""
    if cps.n <= EXHAUSTIVE_MAX_WORLDS:
        return cps.range_values()
    seen = {}
    for a, b in prod_pairs:
        seen[a] = seen[b] = None
    for t in sum_tuples:
        for v in t:
            seen[v] = None
    return list(seen)


def _check_alg3(d: DomainSpec, sum_tuples, prod_pairs, rng, budget) -> AxiomReport:
    lefts_for: dict[Any, set] = {}
    for a, b in prod_pairs:
        lefts_for.setdefault(b, set()).add(a)
    instances = []
    for t in sum_tuples:
        if len(t) < 2:
            continue
        total = d.oplus(t)
        cands = lefts_for.get(total, set())
        for b in t:
            cands = cands & lefts_for.get(b, set())
            if not cands:
                break
        for a in cands:
            instances.append((a, t))
    if len(instances) > budget:
        instances = rng.sample(sorted(instances, key=repr), budget)
    checked = 0
    for a, t in instances:
        prods = tuple(d.otimes(a, b) for b in t)
        if prods not in sum_tuples:
            continue
        checked += 1
        lhs = d.otimes(a, d.oplus(t))
        rhs = d.oplus(prods)
        if lhs != rhs:
            return _fail("Alg3", {"a": a, "terms": t, "lhs": lhs, "rhs": rhs}, checked)
    return _ok("Alg3", checked)


def _check_alg4(d: DomainSpec, prod_pairs, rng, budget) -> AxiomReport:
    lefts_for: dict[Any, list] = {}
    for a, c in prod_pairs:
        if c != d.bot:
            lefts_for.setdefault(c, []).append(a)
    total = sum(len(v) ** 2 for v in lefts_for.values())
    checked = 0

    def check(a, b, c):
        return not (d.leq(d.otimes(a, c), d.otimes(b, c)) and not d.leq(a, b))

    if total <= budget * 4:
        for c, lefts in lefts_for.items():
            for a in lefts:
                for b in lefts:
                    checked += 1
                    if not check(a, b, c):
                        return _fail("Alg4", {"a": a, "b": b, "c": c}, checked)
    else:
        keys = sorted(lefts_for, key=repr)
        for _ in range(budget):
            c = rng.choice(keys)
            a, b = rng.choice(lefts_for[c]), rng.choice(lefts_for[c])
            checked += 1
            if not check(a, b, c):
                return _fail("Alg4", {"a": a, "b": b, "c": c}, checked)
    return _ok("Alg4", checked)


def check_alg4_prime(d: DomainSpec, sample: Sequence) -> AxiomReport:
    """Cancellation over every pair of the sample, ignoring Dom(otimes)."""
    checked = 0
    for c in sample:
        if c == d.bot:
            continue
        for a in sample:
            for b in sample:
                checked += 1
                if d.leq(d.otimes(a, c), d.otimes(b, c)) and not d.leq(a, b):
                    return _fail("Alg4'", {"a": a, "b": b, "c": c}, checked)
    return _ok("Alg4'", checked)


def check_bot_top_identities(d: DomainSpec, values: Iterable, prod_pairs=()) -> list[AxiomReport]:
    """Bottom/top arithmetic over a set of values (normally Range(Pl))."""
    values = list(values)
    bad5 = bad7 = None
    for v in values:
        if bad5 is None and not (d.oplus2(v, d.bot) == v == d.oplus2(d.bot, v)):
            bad5 = {"d": v, "d_plus_bot": d.oplus2(v, d.bot), "bot_plus_d": d.oplus2(d.bot, v)}
        if bad7 is None:
            if d.otimes(v, d.top) != v:
                bad7 = {"d": v, "clause": "d*top", "value": d.otimes(v, d.top)}
            elif v != d.bot and d.otimes(d.top, v) != v:
                bad7 = {"d": v, "clause": "top*d", "value": d.otimes(d.top, v)}
            elif v != d.bot and d.otimes(d.bot, v) != d.bot:
                bad7 = {"d": v, "clause": "bot*d", "value": d.otimes(d.bot, v)}
    if bad7 is None:
        for a, b in prod_pairs:
            if b == d.bot and not (d.otimes(d.top, d.bot) == d.otimes(a, d.bot) == d.otimes(d.bot, d.bot) == d.bot):
                bad7 = {"d": a, "clause": "x*bot"}
                break
    return [
        _fail("bot-sum", bad5, len(values)) if bad5 else _ok("bot-sum", len(values)),
        _fail("bot-top-product", bad7, len(values)) if bad7 else _ok("bot-top-product", len(values)),
    ]


def check_monotonic_otimes(domain: DomainSpec, sample: Sequence, *, budget: int = 20000,
                           seed: int = 0) -> AxiomReport:
    """d <= d' and e <= e' imply d*e <= d'*e' on Dom(otimes) pairs of the sample."""
    sample = list(dict.fromkeys(sample))
    pairs = [(a, b) for a in sample for b in sample if domain.in_dom_otimes(a, b)]
    checked = 0
    if len(pairs) ** 2 <= budget:
        quads = ((p, q) for p in pairs for q in pairs)
    else:
        rng = random.Random(seed)
        quads = ((rng.choice(pairs), rng.choice(pairs)) for _ in range(budget))
    for (a, b), (a2, b2) in quads:
        if domain.leq(a, a2) and domain.leq(b, b2):
            checked += 1
            if not domain.leq(domain.otimes(a, b), domain.otimes(a2, b2)):
                return _fail("monotonic", {"d": a, "e": b, "d2": a2, "e2": b2}, checked)
    return _ok("monotonic", checked)


# --------------------------------------------------------------------------
# BN-compatibility of a domain


def check_bn_compatible(domain: DomainSpec, sample_budget: int = 40, *, seed: int = 0) -> list[AxiomReport]:
    """BN1-BN8 over a sampled (or, for finite carriers, exhaustive) value pool."""
    d = domain
    if not d.has_algebra:
        raise ConfigurationError(f"{d.name} has no algebra to check")
    rng = random.Random(seed)
    pool = list(dict.fromkeys(d.sample_values(rng, sample_budget)))
    tuples = list(dict.fromkeys(d.sample_sum_tuples(rng, sample_budget * 3)))
    eq = lambda x, y: x == y
    reports = []

    # BN1
    bad = None
    n = 0
    for a, b in itertools.product(pool, repeat=2):
        n += 1
        if not eq(d.oplus2(a, b), d.oplus2(b, a)):
            bad = {"a": a, "b": b, "op": "oplus", "law": "commutative"}
        elif not eq(d.otimes(a, b), d.otimes(b, a)):
            bad = {"a": a, "b": b, "op": "otimes", "law": "commutative"}
        if bad:
            break
    if not bad:
        triples = list(itertools.product(pool, repeat=3))
        if len(triples) > sample_budget ** 2:
            triples = rng.sample(triples, sample_budget ** 2)
        for a, b, c in triples:
            n += 1
            if not eq(d.oplus2(d.oplus2(a, b), c), d.oplus2(a, d.oplus2(b, c))):
                bad = {"a": a, "b": b, "c": c, "op": "oplus", "law": "associative"}
            elif not eq(d.otimes(d.otimes(a, b), c), d.otimes(a, d.otimes(b, c))):
                bad = {"a": a, "b": b, "c": c, "op": "otimes", "law": "associative"}
            if bad:
                break
    reports.append(_fail("BN1", bad, n) if bad else _ok("BN1", n))

    # BN2
    bad = None
    for v in pool:
        if not (d.in_dom_otimes(d.top, v) and d.in_dom_otimes(d.bot, v) and d.in_dom_oplus((d.bot, v))):
            bad = {"d": v, "clause": "membership"}
        elif d.otimes(d.top, v) != v or d.otimes(d.bot, v) != d.bot or d.oplus2(d.bot, v) != v:
            bad = {"d": v, "clause": "identities"}
        if bad:
            break
    reports.append(_fail("BN2", bad, len(pool)) if bad else _ok("BN2", len(pool)))

    # BN3: distributivity on both sides
    bad = None
    n = 0
    for t in tuples:
        for a in pool:
            total = d.oplus(t)
            if all(d.in_dom_otimes(a, b) for b in t) and d.in_dom_otimes(a, total):
                prods = tuple(d.otimes(a, b) for b in t)
                if d.in_dom_oplus(prods):
                    n += 1
                    if d.otimes(a, total) != d.oplus(prods):
                        bad = {"a": a, "terms": t, "side": "left"}
                        break
            if all(d.in_dom_otimes(b, a) for b in t) and d.in_dom_otimes(total, a):
                prods = tuple(d.otimes(b, a) for b in t)
                if d.in_dom_oplus(prods):
                    n += 1
                    if d.otimes(total, a) != d.oplus(prods):
                        bad = {"a": a, "terms": t, "side": "right"}
                        break
        if bad:
            break
    reports.append(_fail("BN3", bad, n) if bad else _ok("BN3", n))

    # BN4: cancellation
    bad = None
    n = 0
    for a, b, c in itertools.product(pool, repeat=3):
        if c == d.bot or not (d.in_dom_otimes(a, c) and d.in_dom_otimes(b, c)):
            continue
        n += 1
        if d.leq(d.otimes(a, c), d.otimes(b, c)) and not d.leq(a, b):
            bad = {"a": a, "b": b, "c": c}
            break
    reports.append(_fail("BN4", bad, n) if bad else _ok("BN4", n))

    # BN5: division exists, checked by re-multiplying
    bad = None
    n = 0
    for t in tuples:
        total = d.oplus(t)
        for base in [total] + pool:
            if not d.leq(total, base):
                continue
            n += 1
            quotients = tuple(d.solve_otimes(x, base) for x in t)
            if any(q is None for q in quotients):
                bad = {"terms": t, "d": base, "reason": "no quotient"}
            elif not all(d.in_dom_otimes(q, base) and d.otimes(q, base) == x for q, x in zip(quotients, t)):
                bad = {"terms": t, "d": base, "quotients": quotients, "reason": "quotient does not multiply back"}
            elif not d.in_dom_oplus(quotients):
                bad = {"terms": t, "d": base, "quotients": quotients, "reason": "quotients outside Dom(oplus)"}
            else:
                qsum = d.oplus(quotients)
                if not d.in_dom_otimes(qsum, base) or d.otimes(qsum, base) != total:
                    bad = {"terms": t, "d": base, "quotients": quotients, "reason": "sum does not factor"}
            if bad:
                break
        if bad:
            break
    reports.append(_fail("BN5", bad, n) if bad else _ok("BN5", n))

    # BN6: permutations, prefixes, singletons
    bad = None
    n = 0
    for v in pool:
        n += 1
        if not d.in_dom_oplus((v,)):
            bad = {"terms": (v,), "reason": "singleton"}
            break
    if not bad:
        for t in tuples:
            for perm in itertools.permutations(t):
                n += 1
                if not d.in_dom_oplus(perm):
                    bad = {"terms": t, "permutation": perm}
                    break
            for k in range(1, len(t)):
                n += 1
                if not d.in_dom_oplus(t[:k]):
                    bad = {"terms": t, "prefix": k}
                    break
            if bad:
                break
    reports.append(_fail("BN6", bad, n) if bad else _ok("BN6", n))

    # BN7: products of two sums
    bad = None
    n = 0
    pairs = list(itertools.product(tuples[:sample_budget], repeat=2))
    for t, s in pairs:
        if all(d.in_dom_otimes(a, b) for a in t for b in s):
            n += 1
            prods = tuple(d.otimes(a, b) for a in t for b in s)
            if not d.in_dom_oplus(prods):
                bad = {"terms": t, "other_terms": s}
                break
    reports.append(_fail("BN7", bad, n) if bad else _ok("BN7", n))

    # BN8: prefix sums are below the full sum
    bad = None
    n = 0
    for t in tuples:
        total = d.oplus(t)
        for k in range(1, len(t) + 1):
            n += 1
            if not d.leq(d.oplus(t[:k]), total):
                bad = {"terms": t, "prefix": k}
                break
        if bad:
            break
    reports.append(_fail("BN8", bad, n) if bad else _ok("BN8", n))
    return reports


def check_rich(domain: DomainSpec, n: int) -> AxiomReport:
    """Search the domain's candidate pairs for a richness witness for n variables."""
    if n < 1:
        raise PreconditionError("richness needs at least one variable")
    d = domain
    tried = 0
    for a, b in d.rich_candidates():
        tried += 1
        if not d.in_dom_oplus((a, b)) or d.oplus((a, b)) != d.top:
            continue
        ok = True
        for k in range(1, n):
            for seq in itertools.product((a, b), repeat=k):
                x = seq[0]
                for y in seq[1:]:
                    x = d.otimes(x, y)
                if not all(d.in_dom_otimes(p, q) for e in (a, b) for p, q in ((e, x), (x, e))):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return _ok("rich", tried, example={"d": a, "d2": b})
    return AxiomReport("rich", None, None, tried, "no candidate pair qualifies; richness unknown")


def check_partition_expansion(cps: Cps, X: int, Y: int, partition: Sequence[int]) -> AxiomReport:
    """Pl(X|Y) equals the sum over the partition cells A with A & Y in F'."""
    union = 0
    for A in partition:
        if union & A:
            raise PreconditionError("partition cells overlap")
        union |= A
    if union != cps.full:
        raise PreconditionError("partition does not cover the worlds")
    if not cps.in_cond(Y):
        raise PreconditionError("conditioning event is not in F'")
    d = cps.domain
    terms = tuple(d.otimes(cps.pl(X, A & Y), cps.pl(A, Y)) for A in partition if cps.in_cond(A & Y))
    lhs = cps.pl(X, Y)
    rhs = d.oplus(terms)
    if lhs != rhs:
        return _fail("partition-expansion", {"X": X, "Y": Y, "lhs": lhs, "rhs": rhs, "terms": terms}, 1)
    return _ok("partition-expansion", 1)


# --------------------------------------------------------------------------
# witness re-evaluation


def recheck(cps: Cps, report: AxiomReport) -> bool:
    """Re-evaluate a failing report's witness directly; True if it still violates."""
    w = report.witness
    if w is None:
        return False
    d = cps.domain
    a = report.axiom
    if a == "CPl1":
        return cps.pl(0, w["V"]) != d.bot
    if a == "CPl2":
        return cps.pl(cps.full, w["V"]) != d.top
    if a == "CPl3":
        return (w["U"] & ~w["U2"]) == 0 and not d.leq(cps.pl(w["U"], w["V"]), cps.pl(w["U2"], w["V"]))
    if a == "CPl4":
        return cps.pl(w["U"], w["V"]) != cps.pl(w["U"] & w["V"], w["V"])
    if a == "CPl5":
        return cpl5_violated(cps, w["U"], w["U2"], w["V"], w["V2"])
    if a == "Acc3":
        return cps.in_cond(w["V"]) and not cps.in_cond(w["V2"])
    if a == "Acc4":
        return cps.pl(w["U"], w["V"]) != d.bot and not cps.in_cond(w["U"] & w["V"])
    if a == "standard":
        return cps.in_cond(w["U"]) != (cps.pl(w["U"]) != d.bot)
    if a == "Alg1":
        U, U2, V = w["U"], w["U2"], w["V"]
        if U & U2:
            return False
        vals = (cps.pl(U, V), cps.pl(U2, V))
        union = cps.pl(U | U2, V)
        if "other_U" in w:
            o = (cps.pl(w["other_U"], w["other_V"]), cps.pl(w["other_U2"], w["other_V"]))
            return o == vals and cps.pl(w["other_U"] | w["other_U2"], w["other_V"]) != union
        return not d.in_dom_oplus(vals) or d.oplus(vals) != union
    if a == "Alg2":
        U, V, V2 = w["U"], w["V"], w["V2"]
        f = (cps.pl(U, V & V2), cps.pl(V, V2))
        val = cps.pl(U & V, V2)
        if "other_U" in w:
            o = (cps.pl(w["other_U"], w["other_V"] & w["other_V2"]), cps.pl(w["other_V"], w["other_V2"]))
            return o == f and cps.pl(w["other_U"] & w["other_V"], w["other_V2"]) != val
        return not d.in_dom_otimes(*f) or d.otimes(*f) != val
    raise KeyError(f"no re-check for {a}")
