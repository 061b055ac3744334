"""Concrete plausibility domains: probability, ranking, possibility and Pl_P vectors."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Hashable, Sequence

from .core import ConfigurationError, DomainSpec, PreconditionError

INF = math.inf
STAR = "*"

_ZERO = Fraction(0)
_ONE = Fraction(1)


def parse_rational(text: str) -> Fraction:
    """Exact rational from ``p/q`` or a decimal literal."""
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational literal: {text!r}") from None


def format_rational(x) -> str:
    return str(Fraction(x))


def _is_rational(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def _random_fraction(rng: random.Random, denominators=(2, 3, 4, 5, 6, 8)) -> Fraction:
    q = rng.choice(denominators)
    return Fraction(rng.randint(0, q), q)


def _split(rng: random.Random, total: Fraction, parts: int) -> list[Fraction]:
    """Split ``total`` into ``parts`` nonnegative rationals."""
    cuts = sorted(_random_fraction(rng) * total for _ in range(parts - 1))
    points = [_ZERO] + cuts + [total]
    return [points[i + 1] - points[i] for i in range(parts)]


# --------------------------------------------------------------------------
# probability


class ProbabilityDomain(DomainSpec):
    name = "probability"
    otimes_total = True
    bot = _ZERO
    top = _ONE

    def leq(self, a, b):
        return a <= b

    def contains(self, v):
        return _is_rational(v) and 0 <= v <= 1

    def oplus2(self, a, b):
        return min(_ONE, a + b)

    def oplus(self, values):
        return min(_ONE, sum(values, _ZERO))

    def in_dom_oplus(self, values):
        return sum(values, _ZERO) <= 1

    def otimes(self, a, b):
        return Fraction(a) * b

    def solve_otimes(self, product, divisor):
        if divisor == 0:
            return _ZERO if product == 0 else None
        q = Fraction(product) / divisor
        return q if q <= 1 else None

    def rich_candidates(self):
        return [(Fraction(1, 2), Fraction(1, 2))]

    def sample_values(self, rng, count):
        pool = [_ZERO, _ONE, Fraction(1, 2)]
        pool += [_random_fraction(rng) for _ in range(max(0, count - 3))]
        return pool

    def sample_sum_tuples(self, rng, count, max_len=3):
        out = []
        for _ in range(count):
            total = rng.choice([_ONE, _random_fraction(rng)])
            out.append(tuple(_split(rng, total, rng.randint(1, max_len))))
        return out

    def format_value(self, v):
        return format_rational(v)

    def parse_value(self, text):
        v = parse_rational(text)
        if not self.contains(v):
            raise ValueError(f"probability {text!r} is outside [0,1]")
        return v


# --------------------------------------------------------------------------
# ranking


class RankingDomain(DomainSpec):
    """Natural numbers with infinity, ordered in reverse."""

    name = "ranking"
    otimes_total = True
    bot = INF
    top = 0

    def leq(self, a, b):
        return b <= a

    def contains(self, v):
        return v == INF or (isinstance(v, int) and not isinstance(v, bool) and v >= 0)

    def oplus2(self, a, b):
        return min(a, b)

    def oplus(self, values):
        return min(values, default=INF)

    def otimes(self, a, b):
        return a + b

    def solve_otimes(self, product, divisor):
        if divisor == INF:
            return INF if product == INF else None
        if product == INF:
            return INF
        return product - divisor if product >= divisor else None

    def rich_candidates(self):
        return [(0, 0)]

    def sample_values(self, rng, count):
        # finite carrier slice: exhaustive grid
        return [0, 1, 2, 3, 4, INF]

    def sample_sum_tuples(self, rng, count, max_len=3):
        import itertools

        grid = self.sample_values(rng, 0)
        return [t for k in range(1, max_len + 1) for t in itertools.product(grid, repeat=k)]

    def format_value(self, v):
        return "inf" if v == INF else str(v)

    def parse_value(self, text):
        text = text.strip()
        if text in ("inf", "∞"):
            return INF
        if not text.isdigit():
            raise ValueError(f"rank must be a natural number or inf, got {text!r}")
        return int(text)


# --------------------------------------------------------------------------
# possibility


class _PossibilityDomain(DomainSpec):
    bot = _ZERO
    top = _ONE

    def leq(self, a, b):
        return a <= b

    def contains(self, v):
        return _is_rational(v) and 0 <= v <= 1

    def oplus2(self, a, b):
        return max(a, b)

    def oplus(self, values):
        return max(values, default=_ZERO)

    def rich_candidates(self):
        return [(_ONE, _ONE)]

    def sample_values(self, rng, count):
        pool = [_ZERO, _ONE, Fraction(1, 2)]
        pool += [_random_fraction(rng) for _ in range(max(0, count - 3))]
        return pool

    def sample_sum_tuples(self, rng, count, max_len=3):
        return [tuple(_random_fraction(rng) for _ in range(rng.randint(1, max_len))) for _ in range(count)]

    def format_value(self, v):
        return format_rational(v)

    def parse_value(self, text):
        v = parse_rational(text)
        if not self.contains(v):
            raise ValueError(f"possibility {text!r} is outside [0,1]")
        return v


class PossibilityProdDomain(_PossibilityDomain):
    name = "possibility_prod"
    otimes_total = True

    def otimes(self, a, b):
        return Fraction(a) * b

    def solve_otimes(self, product, divisor):
        if divisor == 0:
            return _ZERO if product == 0 else None
        q = Fraction(product) / divisor
        return q if q <= 1 else None


class PossibilityMinDomain(_PossibilityDomain):
    """max/min with Dom(min) = {(a, b): a < b or a = 1}, plus pairs with b = 0.

    The extra pairs with a bottom right factor never arise from a standard
    space; they make (0, 0) available, which bottom arithmetic on networks
    needs.
    """

    name = "possibility_min"

    def otimes(self, a, b):
        return min(a, b)

    def in_dom_otimes(self, a, b):
        return a < b or a == 1 or b == 0

    def solve_otimes(self, product, divisor):
        if divisor == 0:
            return _ZERO if product == 0 else None
        if product < divisor:
            return Fraction(product)
        if product == divisor:
            return _ONE
        return None


# --------------------------------------------------------------------------
# Pl_P vectors


@dataclass(frozen=True)
class PlPValue:
    """Element of D_I^*: a vector over the index set, or one of the constants.

    Build vectors with :func:`plp_vector`, which normalises vectors equivalent
    to bottom or top into the constants.
    """

    entries: tuple | None
    tag: str = "vec"

    def __repr__(self):
        if self.tag != "vec":
            return f"PlP({self.tag})"
        return "PlP(" + ",".join(str(e) for e in self.entries) + ")"

    @property
    def is_const(self) -> bool:
        return self.tag != "vec"


PLP_BOT = PlPValue(None, "bot")
PLP_TOP = PlPValue(None, "top")


def _is_star(e) -> bool:
    # entries are Fractions or the string "*"; a type test avoids slow mixed comparisons
    return type(e) is str


def plp_vector(entries: Sequence) -> PlPValue:
    out = []
    for e in entries:
        if _is_star(e):
            if e != STAR:
                raise ValueError(f"bad entry {e!r}")
            out.append(STAR)
        else:
            e = Fraction(e)
            if not 0 <= e <= 1:
                raise ValueError(f"entry {e} outside [0,1]")
            out.append(e)
    return _normalise(out)


def _normalise(out: list) -> PlPValue:
    """Identify vectors equivalent to bottom or top with the constants."""
    nums = [e for e in out if not _is_star(e)]
    if not nums:
        raise ValueError("a vector needs at least one entry other than *")
    if all(e == 0 for e in nums):
        return PLP_BOT
    if all(e == 1 for e in nums):
        return PLP_TOP
    return PlPValue(tuple(out))


class PlPDomain(DomainSpec):
    """Vectors over a finite index set with * marking undefined entries."""

    name = "plp"
    bot = PLP_BOT
    top = PLP_TOP

    def __init__(self, index: Sequence[Hashable]):
        index = tuple(index)
        if not index:
            raise ConfigurationError("plp needs a nonempty index set")
        self.index = index
        self.size = len(index)

    def __repr__(self):
        return f"<domain plp over {list(self.index)}>"

    def __eq__(self, other):
        return isinstance(other, PlPDomain) and other.index == self.index

    def __hash__(self):
        return hash(("plp", self.index))

    def contains(self, v):
        return isinstance(v, PlPValue) and (v.is_const or len(v.entries) == self.size)

    def leq(self, f, g):
        if f == PLP_BOT or g == PLP_TOP:
            return True
        if f == PLP_TOP or g == PLP_BOT:
            return False
        for a, b in zip(f.entries, g.entries):
            if (_is_star(a)) != (_is_star(b)):
                return False
            if not _is_star(a) and a > b:
                return False
        return True

    def oplus2(self, f, g):
        if f == PLP_TOP or g == PLP_TOP:
            return PLP_TOP
        if f == PLP_BOT:
            return g
        if g == PLP_BOT:
            return f
        return _normalise([STAR if _is_star(a) or _is_star(b) else min(_ONE, a + b)
                           for a, b in zip(f.entries, g.entries)])

    def otimes(self, f, g):
        if f == PLP_BOT or g == PLP_BOT:
            return PLP_BOT
        if f == PLP_TOP:
            return g
        if g == PLP_TOP:
            return f
        out = []
        for a, b in zip(f.entries, g.entries):
            if _is_star(a) and _is_star(b):
                out.append(STAR)
            elif _is_star(a) or _is_star(b):
                out.append(_ZERO)
            else:
                out.append(a * b)
        return _normalise(out)

    def in_dom_oplus(self, values):
        values = tuple(values)
        tops = [v for v in values if v == PLP_TOP]
        if tops:
            return len(tops) == 1 and all(v == PLP_BOT for v in values if v != PLP_TOP)
        vecs = [v for v in values if v != PLP_BOT]
        if not vecs:
            return True
        pattern = tuple(_is_star(e) for e in vecs[0].entries)
        for v in vecs[1:]:
            if tuple(_is_star(e) for e in v.entries) != pattern:
                return False
        for i in range(self.size):
            if not pattern[i] and sum((v.entries[i] for v in vecs), _ZERO) > 1:
                return False
        return True

    def in_dom_otimes(self, f, g):
        if f.is_const or g.is_const:
            return True
        return all((_is_star(b) or b == 0) == (_is_star(a)) for a, b in zip(f.entries, g.entries))

    def solve_otimes(self, product, divisor):
        return plp_solve_otimes(product, divisor, self)

    def rich_candidates(self):
        half = plp_vector([Fraction(1, 2)] * self.size)
        return [(half, half)]

    # sampling ---------------------------------------------------------------

    def _random_pattern(self, rng):
        while True:
            pat = tuple(rng.random() < 0.3 for _ in range(self.size))
            if not all(pat):
                return pat

    def random_vector(self, rng, pattern=None):
        pattern = pattern or self._random_pattern(rng)
        return plp_vector([STAR if s else _random_fraction(rng) for s in pattern])

    def sample_values(self, rng, count):
        pool = [PLP_BOT, PLP_TOP, plp_vector([Fraction(1, 2)] * self.size)]
        patterns = [self._random_pattern(rng) for _ in range(3)]
        while len(pool) < count:
            pool.append(self.random_vector(rng, rng.choice(patterns)))
        return pool

    def sample_sum_tuples(self, rng, count, max_len=3):
        out = [(PLP_TOP, PLP_BOT), (PLP_BOT, PLP_TOP, PLP_BOT)]
        while len(out) < count:
            k = rng.randint(1, max_len)
            pattern = self._random_pattern(rng)
            columns = [[STAR] * k if s else _split(rng, rng.choice([_ONE, _random_fraction(rng)]), k)
                       for s in pattern]
            out.append(tuple(plp_vector([col[j] for col in columns]) for j in range(k)))
        return out

    # literals ---------------------------------------------------------------

    def format_value(self, v):
        if v == PLP_BOT:
            return "bot"
        if v == PLP_TOP:
            return "top"
        return ",".join(STAR if _is_star(e) else format_rational(e) for e in v.entries)

    def parse_value(self, text):
        text = text.strip()
        if text in ("bot", "⊥"):
            return PLP_BOT
        if text in ("top", "⊤"):
            return PLP_TOP
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != self.size:
            raise ValueError(f"expected {self.size} entries, got {len(parts)}")
        return plp_vector([STAR if p == STAR else parse_rational(p) for p in parts])


def plp_solve_otimes(product: PlPValue, divisor: PlPValue, domain: PlPDomain | None = None):
    """Solve ``d * divisor == product`` for ``d`` with ``(d, divisor)`` in Dom(otimes)."""
    if divisor == PLP_BOT:
        return PLP_BOT if product == PLP_BOT else None
    if divisor == PLP_TOP:
        return product
    out = []
    for i, c in enumerate(divisor.entries):
        if _is_star(c) or c == 0:
            out.append(STAR)
            continue
        if product == PLP_BOT:
            p = _ZERO
        elif product == PLP_TOP:
            p = _ONE
        else:
            p = product.entries[i]
            if _is_star(p):
                return None
        q = p / c
        if q > 1:
            return None
        out.append(q)
    try:
        d = plp_vector(out)
    except ValueError:
        return None
    dom = domain or PlPDomain(range(len(divisor.entries)))
    if not dom.in_dom_otimes(d, divisor) or dom.otimes(d, divisor) != product:
        return None
    return d


# --------------------------------------------------------------------------
# order-only domains


@dataclass(frozen=True)
class IntervalValue:
    lower: Fraction
    upper: Fraction

    def __repr__(self):
        return f"[{self.lower}, {self.upper}]"


class IntervalDomain(DomainSpec):
    """Pairs (lower, upper) with (a, b) <= (a', b') iff they are equal or b <= a'."""

    name = "interval"
    has_algebra = False
    bot = IntervalValue(_ZERO, _ZERO)
    top = IntervalValue(_ONE, _ONE)

    def leq(self, x, y):
        return x == y or x.upper <= y.lower

    def contains(self, v):
        return isinstance(v, IntervalValue) and 0 <= v.lower <= v.upper <= 1

    def format_value(self, v):
        return f"[{format_rational(v.lower)},{format_rational(v.upper)}]"


class OrderOnlyDomain(DomainSpec):
    """The order of another domain without its operations."""

    has_algebra = False

    def __init__(self, base: DomainSpec, name: str):
        self.base = base
        self.name = name
        self.bot = base.bot
        self.top = base.top

    def leq(self, a, b):
        return self.base.leq(a, b)

    def contains(self, v):
        return self.base.contains(v)

    def format_value(self, v):
        return self.base.format_value(v)

    def parse_value(self, text):
        return self.base.parse_value(text)


@dataclass(frozen=True)
class LiftedValue:
    """Either the pair (value, conditioning event) or a constant."""

    tag: str
    value: Any = None
    cond: int = 0

    def __repr__(self):
        return self.tag if self.tag != "pair" else f"({self.value!r}, {self.cond:#b})"


LIFT_BOT = LiftedValue("bot")
LIFT_TOP = LiftedValue("top")


class LiftedDomain(DomainSpec):
    """Pairs (d, V) comparable only under the same V, between two constants."""

    has_algebra = False
    bot = LIFT_BOT
    top = LIFT_TOP

    def __init__(self, base: DomainSpec):
        self.base = base
        self.name = f"lifted-{base.name}"

    def leq(self, x, y):
        if x == LIFT_BOT or y == LIFT_TOP:
            return True
        if x == LIFT_TOP or y == LIFT_BOT:
            return False
        return x.cond == y.cond and self.base.leq(x.value, y.value)

    def contains(self, v):
        return isinstance(v, LiftedValue)

    def format_value(self, v):
        if v.tag != "pair":
            return v.tag
        return f"({self.base.format_value(v.value)}|{v.cond:#b})"


# --------------------------------------------------------------------------

KINDS = ("probability", "ranking", "possibility_min", "possibility_prod", "plp")

ALIASES = {
    "prob": "probability", "probability": "probability",
    "rank": "ranking", "ranking": "ranking", "kappa": "ranking",
    "poss-min": "possibility_min", "poss_min": "possibility_min", "possibility_min": "possibility_min",
    "poss-prod": "possibility_prod", "poss_prod": "possibility_prod", "possibility_prod": "possibility_prod",
    "plp": "plp",
}


def canonical_kind(kind: str) -> str:
    try:
        return ALIASES[kind.strip().lower()]
    except KeyError:
        raise ConfigurationError(f"unknown domain kind {kind!r}") from None


def make_domain(kind: str, index: Sequence[Hashable] | None = None) -> DomainSpec:
    kind = canonical_kind(kind)
    if kind == "plp":
        if index is None:
            raise ConfigurationError("plp needs an index set")
        return PlPDomain(index)
    if index is not None:
        raise PreconditionError(f"{kind} takes no index set")
    return {
        "probability": ProbabilityDomain,
        "ranking": RankingDomain,
        "possibility_min": PossibilityMinDomain,
        "possibility_prod": PossibilityProdDomain,
    }[kind]()
