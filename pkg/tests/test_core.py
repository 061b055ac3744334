import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from plausnet.conditioning import extend, probability_measure, random_measure
from plausnet.core import (AxiomReport, Cps, UndefinedConditional, check_algebraic, check_cps_axioms, check_cpl5,
                           check_partition_expansion, check_standard, find_report, members, popcount, recheck, subsets)
from plausnet.domains import KINDS, make_domain


def test_bit_helpers():
    assert list(members(0b1011)) == [0, 1, 3]
    assert sorted(subsets(0b101)) == [0, 1, 4, 5]
    assert popcount(0b1011) == 3


def test_report_invariant():
    with pytest.raises(ValueError):
        AxiomReport("x", False)
    with pytest.raises(ValueError):
        AxiomReport("x", True, {"U": 1})
    assert AxiomReport("x", None).holds is None


def _prob3():
    return extend(probability_measure([F(1, 2), F(1, 3), F(1, 6)], worlds=["a", "b", "c"]), "probability")


def test_probability_space_passes_everything():
    cps = _prob3()
    reports = check_cps_axioms(cps) + check_algebraic(cps) + [check_cpl5(cps)]
    assert all(r.holds for r in reports), [r for r in reports if not r.holds]
    assert cps.pl(cps.event("a"), cps.event("a", "b")) == F(3, 5)


def test_undefined_conditional():
    cps = extend(probability_measure([1, 0], worlds=["a", "b"]), "probability")
    with pytest.raises(UndefinedConditional):
        cps.pl(cps.event("a"), cps.event("b"))


def test_broken_space_gets_a_rechecked_witness():
    # a constant 1/2 breaks CPl1 and CPl2 but satisfies CPl4
    cps = Cps(["a", "b"], make_domain("probability"), lambda U, V: F(1, 2), lambda V: V != 0)
    reports = check_cps_axioms(cps)
    cpl1 = find_report(reports, "CPl1")
    assert cpl1.holds is False
    assert recheck(cps, cpl1)
    cpl2 = find_report(reports, "CPl2")
    assert cpl2.holds is False and recheck(cps, cpl2)
    assert find_report(reports, "CPl4").holds


def test_non_monotone_space_fails_cpl3():
    def cond(U, V):
        return F(1) if U & V == V else (F(1, 2) if U & V == 0b01 else F(0))

    cps = Cps(["a", "b", "c"], make_domain("probability"), cond, lambda V: V != 0)
    rep = find_report(check_cps_axioms(cps), "CPl3")
    assert rep.holds is False
    assert recheck(cps, rep)


def test_standard_needs_every_nonbottom_event():
    cps = extend(probability_measure([F(1, 2), F(1, 2), 0], worlds="abc"), "probability")
    assert check_standard(cps).holds
    assert not cps.in_cond(cps.event("c"))


def test_partition_expansion():
    cps = _prob3()
    full = cps.full
    parts = [cps.event("a"), cps.event("b"), cps.event("c")]
    assert check_partition_expansion(cps, cps.event("a", "c"), full, parts).holds


@pytest.mark.parametrize("kind", KINDS)
@given(seed=st.integers(min_value=0, max_value=10 ** 6), n=st.sampled_from([2, 3, 4]))
@settings(max_examples=15, deadline=None)
def test_random_spaces_are_coherent_and_algebraic(kind, seed, n):
    rng = random.Random(seed)
    cps = extend(random_measure(kind, rng, n_worlds=n, members=2, index=[0, 1]), kind)
    reports = check_cps_axioms(cps) + check_algebraic(cps) + [check_cpl5(cps)]
    assert not [r for r in reports if r.holds is False]


@pytest.mark.parametrize("kind", KINDS)
def test_range_contains_bottom_and_top(kind):
    cps = extend(random_measure(kind, random.Random(3), n_worlds=3, members=2, index=[0, 1]), kind)
    values = cps.range_values()
    assert cps.domain.bot in values and cps.domain.top in values
