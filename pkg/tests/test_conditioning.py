import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from plausnet.conditioning import (binary_worlds, extend, extend_lower_upper, plp_raw_conditional,
                                   possibility_measure, probability_measure, probability_set, random_measure,
                                   ranking_function)
from plausnet.core import PlausibilityError, subsets
from plausnet.demos import coin_space, lower_cpl5_space
from plausnet.domains import INF, PLP_TOP, STAR


def test_binary_worlds_order():
    assert binary_worlds(["A", "B"]) == [(0, 0), (0, 1), (1, 0), (1, 1)]


@pytest.mark.parametrize("bad", [[F(1, 2), F(1, 3)], [F(-1, 2), F(3, 2)]])
def test_probability_must_sum_to_one(bad):
    with pytest.raises(PlausibilityError):
        probability_measure(bad, worlds=["a", "b"])


def test_ranking_needs_a_zero():
    with pytest.raises(PlausibilityError):
        ranking_function([1, 2], worlds=["a", "b"])


def test_possibility_needs_a_one():
    with pytest.raises(PlausibilityError):
        possibility_measure([F(1, 2), 0], worlds=["a", "b"])


# brute-force oracles for each conditioning rule


def _weights():
    return st.lists(st.integers(min_value=0, max_value=4), min_size=3, max_size=3).filter(any)


@given(_weights())
@settings(max_examples=60, deadline=None)
def test_probability_conditioning_oracle(raw):
    mu = [F(x, sum(raw)) for x in raw]
    cps = extend(probability_measure(mu, worlds="abc"), "probability")
    for V in range(8):
        pv = sum(mu[i] for i in range(3) if V >> i & 1)
        assert cps.in_cond(V) == (pv > 0)
        if pv > 0:
            for U in range(8):
                assert cps.pl(U, V) == sum(mu[i] for i in range(3) if (U & V) >> i & 1) / pv


@given(st.lists(st.one_of(st.integers(0, 3), st.just(INF)), min_size=3, max_size=3).filter(lambda r: 0 in r))
@settings(max_examples=60, deadline=None)
def test_ranking_conditioning_oracle(kappa):
    cps = extend(ranking_function(kappa, worlds="abc"), "ranking")
    k = lambda U: min((kappa[i] for i in range(3) if U >> i & 1), default=INF)
    for V in range(8):
        assert cps.in_cond(V) == (k(V) != INF)
        if k(V) != INF:
            for U in range(8):
                expected = INF if k(U & V) == INF else k(U & V) - k(V)
                assert cps.pl(U, V) == expected


@given(st.lists(st.sampled_from([F(0), F(1, 3), F(1, 2), F(1)]), min_size=3, max_size=3).filter(lambda p: 1 in p))
@settings(max_examples=60, deadline=None)
def test_possibility_conditioning_oracles(poss):
    P = lambda U: max((poss[i] for i in range(3) if U >> i & 1), default=F(0))
    pmin = extend(possibility_measure(poss, worlds="abc"), "possibility_min")
    pprod = extend(possibility_measure(poss, worlds="abc"), "possibility_prod")
    for V in range(8):
        if P(V) == 0:
            continue
        for U in range(8):
            pu = P(U & V)
            assert pmin.pl(U, V) == (F(1) if pu == P(V) else pu)
            assert pprod.pl(U, V) == pu / P(V)


def test_kappa1_values():
    kappa = ranking_function([0, 1, 2, INF], variables=("A", "B"))
    cps = extend(kappa, "ranking")
    assert [cps.pl(U) for U in range(16)] == [INF, 0, 1, 0, 2, 0, 1, 0, INF, 0, 1, 0, 2, 0, 1, 0]
    a1 = cps.var_event("A", 1)
    assert cps.pl(cps.var_event("B", 0), a1) == 0
    assert cps.pl(cps.var_event("B", 1), a1) == INF


def test_lower_probability_values():
    cps = lower_cpl5_space()
    a, b = cps.event("a"), cps.event("b")
    V = cps.event("a", "b")
    assert cps.pl(a & V) == 0 and cps.pl(b & V) == 0
    assert cps.pl(a, V) == F(2, 3) and cps.pl(b, V) == F(1, 3)


def test_lower_probability_families():
    P = probability_set([[0, 0, 1], [F(2, 3), F(1, 3), 0]], worlds="abc")
    some = extend_lower_upper(P, "some_positive", "lower")
    every = extend_lower_upper(P, "all_positive", "lower")
    V = some.event("a", "b")
    assert some.in_cond(V) and not every.in_cond(V)
    assert every.in_cond(every.full)


def test_coin_raw_and_classes():
    P, cps = coin_space()
    h1, h2 = cps.var_event("X1", 1), cps.var_event("X2", 1)
    assert plp_raw_conditional(P, h1, cps.full) == (F(1), F(0))
    assert plp_raw_conditional(P, h1, h2) == (F(1), STAR)
    # (1, *) is equivalent to top
    assert cps.pl(h1, h2) == PLP_TOP
    assert cps.domain.format_value(cps.pl(h1)) == "1,0"


@pytest.mark.parametrize("kind", ["probability", "ranking", "possibility", "probability_set"])
def test_random_measure_is_valid(kind):
    for seed in range(20):
        m = random_measure(kind, random.Random(seed), n_worlds=4)
        assert m.kind == kind


def test_plp_conditional_is_member_wise():
    P = probability_set([[F(1, 2), F(1, 2), 0], [F(1, 4), F(1, 4), F(1, 2)]], worlds="abc", index=["p", "q"])
    cps = extend(P, "plp")
    for V in subsets(cps.full):
        if not V or not cps.in_cond(V):
            continue
        for U in subsets(cps.full):
            raw = plp_raw_conditional(P, U, V)
            v = cps.pl(U, V)
            if not v.is_const:
                assert v.entries == raw
