from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from plausnet.core import ConfigurationError, DomainError, check_bn_compatible, check_rich
from plausnet.domains import (INF, PLP_BOT, PLP_TOP, STAR, canonical_kind, make_domain, plp_solve_otimes,
                              plp_vector)

unit = st.fractions(min_value=0, max_value=1, max_denominator=12)
ranks = st.one_of(st.integers(min_value=0, max_value=6), st.just(INF))
SCALAR = ("probability", "ranking", "possibility_min", "possibility_prod")


def values_for(kind):
    return ranks if kind == "ranking" else unit


@pytest.mark.parametrize("alias,kind", [("prob", "probability"), ("rank", "ranking"), ("kappa", "ranking"),
                                        ("poss-min", "possibility_min"), ("poss_prod", "possibility_prod"),
                                        ("plp", "plp")])
def test_aliases(alias, kind):
    assert canonical_kind(alias) == kind


def test_unknown_kind():
    with pytest.raises(ConfigurationError):
        make_domain("belief")


def test_bottom_and_top():
    assert make_domain("prob").bot == 0 and make_domain("prob").top == 1
    r = make_domain("rank")
    assert (r.bot, r.top) == (INF, 0)
    assert r.leq(INF, 3) and r.leq(3, 0) and not r.leq(0, 3)


def test_probability_addition_caps_at_one():
    d = make_domain("probability")
    assert d.oplus((F(2, 3), F(2, 3))) == 1
    assert not d.in_dom_oplus((F(2, 3), F(2, 3)))
    with pytest.raises(DomainError):
        d.oplus_checked((F(2, 3), F(2, 3)))


def test_possibility_min_product_domain():
    d = make_domain("possibility_min")
    assert d.in_dom_otimes(F(1, 3), F(1, 2))
    assert not d.in_dom_otimes(F(1, 2), F(1, 3))
    assert d.in_dom_otimes(F(1), F(1, 3)) and d.in_dom_otimes(F(1, 2), F(0))
    with pytest.raises(DomainError):
        d.otimes_checked(F(1, 2), F(1, 3))


@pytest.mark.parametrize("kind", SCALAR)
@given(data=st.data())
@settings(max_examples=150, deadline=None)
def test_scalar_algebra_laws(kind, data):
    d = make_domain(kind)
    a, b, c = (data.draw(values_for(kind)) for _ in range(3))
    assert d.oplus2(a, b) == d.oplus2(b, a)
    assert d.oplus2(d.oplus2(a, b), c) == d.oplus2(a, d.oplus2(b, c))
    assert d.oplus2(a, d.bot) == a
    assert d.otimes(a, d.top) == a
    assert d.otimes(d.otimes(a, b), c) == d.otimes(a, d.otimes(b, c))
    # distributivity where every sum involved is defined
    if d.in_dom_oplus((b, c)) and d.in_dom_oplus((d.otimes(a, b), d.otimes(a, c))):
        assert d.otimes(d.oplus2(b, c), a) == d.oplus2(d.otimes(b, a), d.otimes(c, a))
    # addition is monotone
    if d.leq(a, b):
        assert d.leq(d.oplus2(a, c), d.oplus2(b, c))


@pytest.mark.parametrize("kind", SCALAR)
@given(data=st.data())
@settings(max_examples=150, deadline=None)
def test_solve_otimes_inverts(kind, data):
    d = make_domain(kind)
    a, b = data.draw(values_for(kind)), data.draw(values_for(kind))
    if not d.in_dom_otimes(a, b):
        return
    product = d.otimes(a, b)
    q = d.solve_otimes(product, b)
    assert q is not None
    assert d.in_dom_otimes(q, b) and d.otimes(q, b) == product


@pytest.mark.parametrize("kind", SCALAR + ("plp",))
def test_bn_compatible_and_rich(kind):
    d = make_domain(kind, [0, 1] if kind == "plp" else None)
    assert all(r.holds for r in check_bn_compatible(d))
    assert check_rich(d, 3).holds


# plp


def test_plp_normalisation():
    assert plp_vector([0, STAR]) == PLP_BOT
    assert plp_vector([1, STAR, 1]) == PLP_TOP
    assert plp_vector([F(1, 2), STAR]).entries == (F(1, 2), STAR)
    with pytest.raises(ValueError):
        plp_vector([STAR, STAR])
    with pytest.raises(ValueError):
        plp_vector([F(3, 2)])


def test_plp_arithmetic():
    d = make_domain("plp", ["a", "b"])
    f, g = plp_vector([F(1, 4), STAR]), plp_vector([F(1, 2), F(1, 3)])
    assert d.oplus2(f, g).entries == (F(3, 4), STAR)
    assert d.otimes(f, g).entries == (F(1, 8), 0)
    assert d.otimes(f, PLP_TOP) == f and d.otimes(g, PLP_BOT) == PLP_BOT
    assert d.leq(PLP_BOT, f) and d.leq(f, PLP_TOP)
    # entries with * in different places are incomparable
    assert not d.leq(f, g) and not d.leq(g, f)


def test_plp_solve_otimes():
    d = make_domain("plp", [0, 1])
    divisor = plp_vector([F(1, 2), F(1, 4)])
    product = plp_vector([F(1, 4), F(1, 8)])
    q = plp_solve_otimes(product, divisor, d)
    assert q.entries == (F(1, 2), F(1, 2))
    assert d.otimes(q, divisor) == product


@given(st.lists(st.one_of(unit, st.just(STAR)), min_size=2, max_size=2),
       st.lists(st.one_of(unit, st.just(STAR)), min_size=2, max_size=2))
@settings(max_examples=200, deadline=None)
def test_plp_format_parse_round_trip(xs, ys):
    d = make_domain("plp", [0, 1])
    for raw in (xs, ys):
        if all(e == STAR for e in raw):
            continue
        v = plp_vector(raw)
        assert d.parse_value(d.format_value(v)) == v


@pytest.mark.parametrize("kind,text,value", [("prob", "3/6", F(1, 2)), ("rank", "inf", INF), ("rank", "4", 4),
                                             ("poss-min", "0.25", F(1, 4))])
def test_parse_values(kind, text, value):
    d = make_domain(kind)
    assert d.parse_value(text) == value
    assert d.parse_value(d.format_value(value)) == value


@pytest.mark.parametrize("kind,text", [("prob", "5/4"), ("rank", "-1"), ("rank", "x"), ("poss-prod", "2")])
def test_parse_rejects(kind, text):
    with pytest.raises(ValueError):
        make_domain(kind).parse_value(text)
