import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from plausnet.bayesnet import (QuantitativeBN, RepresentationError, check_r1, check_r2, check_representable,
                               compatibility_report, compatible, construct_bn, dsep_counterexample,
                               dsep_soundness_check, extract_cpts, joint, random_bn, reconstruct, represents,
                               rows_agree, verify_counterexample)
from plausnet.conditioning import extend, probability_measure, ranking_function
from plausnet.core import PreconditionError, check_algebraic, check_cps_axioms, check_standard
from plausnet.dag import Dag, random_dag
from plausnet.domains import INF, KINDS, make_domain, plp_vector
from plausnet.independence import indep_rv

PROB = make_domain("probability")
RANK = make_domain("ranking")
CHAIN = Dag.of("ABC", [("A", "B"), ("B", "C")])
COLLIDER = Dag.of("ABC", [("A", "C"), ("B", "C")])


def chain_bn():
    return QuantitativeBN(CHAIN, PROB, {
        "A": {(): (F(1, 2), F(1, 2))},
        "B": {(0,): (F(3, 4), F(1, 4)), (1,): (F(1, 3), F(2, 3))},
        "C": {(0,): (F(1, 5), F(4, 5)), (1,): (F(1), F(0))},
    })


def test_chain_joint():
    assert joint(chain_bn()) == [F(3, 40), F(3, 10), F(1, 8), 0, F(1, 30), F(2, 15), F(1, 3), 0]


def test_collider_ranking_joint():
    bn = QuantitativeBN(COLLIDER, RANK, {
        "A": {(): (0, 1)}, "B": {(): (0, 2)},
        "C": {(0, 0): (0, INF), (0, 1): (INF, 0), (1, 0): (INF, 0), (1, 1): (0, INF)},
    })
    assert joint(bn) == [0, INF, INF, 2, INF, 1, 3, INF]
    cps = reconstruct(bn)
    assert indep_rv(cps, ["A"], ["B"])
    assert not indep_rv(cps, ["A"], ["B"], ["C"])


def test_table_validation():
    with pytest.raises(PreconditionError):
        QuantitativeBN(CHAIN, PROB, {"A": {(): (F(1, 2), F(1, 2))}})
    with pytest.raises(PreconditionError):
        QuantitativeBN(Dag.of("A"), PROB, {"A": {(): (F(1, 2), F(3, 2))}})
    with pytest.raises(PreconditionError):
        QuantitativeBN(Dag.of("A"), PROB, {"A": {(): (F(1, 2), F(1, 2)), (0,): (1, 0)}})


def test_r1_rows_must_sum_to_top():
    bn = QuantitativeBN(Dag.of("A"), PROB, {"A": {(): (F(1, 2), F(1, 3))}})
    rep = check_r1(bn)
    assert rep.holds is False and rep.witness["node"] == "A"
    with pytest.raises(RepresentationError):
        joint(bn)


def test_r2_possibility_min():
    poss = make_domain("possibility_min")
    good = QuantitativeBN(Dag.of("AB", [("A", "B")]), poss, {
        "A": {(): (F(1), F(1, 2))}, "B": {(0,): (F(1), F(1, 3)), (1,): (F(1), F(1, 3))}})
    assert check_r2(good).holds
    bad = QuantitativeBN(Dag.of("AB", [("A", "B")]), poss, {
        "A": {(): (F(1), F(1, 2))}, "B": {(0,): (F(1), F(3, 4)), (1,): (F(1), F(3, 4))}})
    rep = check_r2(bad)
    assert rep.holds is False
    assert rep.witness["pair"] == ["3/4", "1/2"]
    assert check_representable(bad).holds is False


@given(seed=st.integers(0, 10 ** 6), n=st.integers(1, 4))
@settings(max_examples=40, deadline=None)
def test_probability_reconstruction_matches_product_oracle(seed, n):
    rng = random.Random(seed)
    dag = random_dag(n, rng)
    bn = random_bn(dag, PROB, rng)
    weights = []
    for world in range(2 ** n):
        bits = {v: (world >> (n - 1 - i)) & 1 for i, v in enumerate(dag.nodes)}
        weights.append(math.prod(bn.entry(v, bits) for v in dag.nodes))
    assert joint(bn) == weights
    oracle = extend(probability_measure(weights, variables=dag.nodes), "probability")
    cps = reconstruct(bn)
    family = oracle.cond_family()
    for _ in range(300):
        U, V = rng.getrandbits(2 ** n), rng.choice(family)
        assert cps.in_cond(V)
        assert cps.pl(U, V) == oracle.pl(U, V)


@pytest.mark.parametrize("kind", KINDS)
def test_random_networks_round_trip(kind):
    domain = make_domain(kind, [0, 1] if kind == "plp" else None)
    rng = random.Random(kind)
    for _ in range(8):
        dag = random_dag(3, rng)
        bn = random_bn(dag, domain, rng)
        assert check_representable(bn).holds
        cps = reconstruct(bn)
        assert check_standard(cps).holds
        assert all(r.holds is not False for r in check_cps_axioms(cps) + check_algebraic(cps))
        assert rows_agree(bn, extract_cpts(cps, dag), cps) is None


@pytest.mark.parametrize("kind", ["probability", "ranking", "possibility_prod"])
def test_reconstruction_compatible(kind):
    domain = make_domain(kind)
    rng = random.Random(7)
    for _ in range(10):
        dag = random_dag(4, rng)
        bn = random_bn(dag, domain, rng)
        assert represents(bn, reconstruct(bn))


def test_possibility_min_reconstruction_can_be_incompatible():
    # found by random search: the tables are recovered but B, C inform A
    poss = make_domain("possibility_min")
    dag = Dag.of("ABC")
    bn = QuantitativeBN(dag, poss, {"A": {(): (F(13, 18), F(1))}, "B": {(): (F(4, 9), F(1))},
                                    "C": {(): (F(1), F(1, 18))}})
    assert check_representable(bn).holds
    cps = reconstruct(bn)
    assert rows_agree(bn, extract_cpts(cps, dag), cps) is None
    rep = compatibility_report(cps, dag)
    assert rep.holds is False
    assert rep.witness == {"node": "A", "nondescendants": ["B", "C"], "parents": []}
    a0 = cps.var_event("A", 0)
    assert cps.pl(a0) == F(13, 18)
    assert cps.pl(a0, cps.assignment({"B": 0, "C": 0})) == 1


def test_plp_reconstruction_can_be_incompatible():
    plp = make_domain("plp", [0, 1])
    v = lambda a, b: plp_vector([a, b])
    dag = Dag.of("ABC", [("B", "A"), ("A", "C")])
    bn = QuantitativeBN(dag, plp, {
        "A": {(0,): (v(F(1, 3), F(2, 3)), v(F(2, 3), F(1, 3))), (1,): (v(F(1, 4), F(3, 5)), v(F(3, 4), F(2, 5)))},
        "B": {(): (v(F(3, 4), F(2, 3)), v(F(1, 4), F(1, 3)))},
        "C": {(0,): (v(F(1, 2), 1), v(F(1, 2), 0)), (1,): (v(F(4, 5), F(1, 4)), v(F(1, 5), F(3, 4)))},
    })
    assert check_representable(bn).holds
    cps = reconstruct(bn)
    rep = compatibility_report(cps, dag)
    assert rep.witness == {"node": "C", "nondescendants": ["B"], "parents": ["A"]}
    b0 = cps.var_event("B", 0)
    fmt = plp.format_value
    assert fmt(cps.pl(b0, cps.assignment({"A": 0, "C": 1}))) == "4/5,*"
    assert fmt(cps.pl(b0, cps.assignment({"A": 0}))) == "4/5,20/29"


def test_construct_bn_recovers_the_chain():
    cps = reconstruct(chain_bn())
    assert construct_bn(cps, ["A", "B", "C"]).edges == CHAIN.edges
    # reversed ordering still needs only a chain
    assert construct_bn(cps, ["C", "B", "A"]).edges == {("C", "B"), ("B", "A")}
    with pytest.raises(PreconditionError):
        construct_bn(cps, ["A", "B"])


def test_construct_bn_on_a_ranking_measure():
    kappa = ranking_function([0, 1, 2, INF], variables=("A", "B"))
    cps = extend(kappa, "ranking")
    dag = construct_bn(cps, ["A", "B"])
    assert dag.edges == {("A", "B")}
    bn = extract_cpts(cps, dag)
    assert bn.tables["A"][()] == (0, 2)
    assert bn.tables["B"][(1,)] == (0, INF)
    assert reconstruct(bn).pl(5) == cps.pl(5)


def test_collider_counterexample():
    bn = dsep_counterexample(COLLIDER, PROB, "A", "B", {"C"})
    assert verify_counterexample(bn, {"A"}, {"B"}, {"C"})
    cps = reconstruct(bn)
    a0 = cps.var_event("A", 0)
    assert cps.pl(a0, cps.assignment({"B": 0, "C": 0})) == 1
    assert cps.pl(a0, cps.var_event("C", 0)) == F(1, 2)


def test_chain_counterexample_copies_values():
    bn = dsep_counterexample(CHAIN, PROB, "A", "C")
    cps = reconstruct(bn)
    c0, a0 = cps.var_event("C", 0), cps.var_event("A", 0)
    assert cps.pl(c0, a0) == 1 and cps.pl(c0) == F(1, 2)


def test_no_counterexample_when_separated():
    assert dsep_counterexample(CHAIN, RANK, "A", "C", {"B"}) is None


@pytest.mark.parametrize("kind", ["probability", "ranking"])
def test_soundness_on_small_dags(kind):
    rng = random.Random(kind)
    for i in range(6):
        rep = dsep_soundness_check(random_dag(4, rng), make_domain(kind), trials=2, seed=i)
        assert rep.holds


def test_soundness_skips_incompatible_reconstructions():
    rep = dsep_soundness_check(Dag.of("ABC"), make_domain("possibility_min"), trials=20, seed=0)
    assert rep.holds
    assert rep.example["skipped"] >= 0


def test_construct_bn_on_a_product_measure_has_no_edges():
    third = [F(1, 3), F(2, 3)]
    weights = [a * b * c for a in third for b in (F(1, 2), F(1, 2)) for c in third]
    cps = extend(probability_measure(weights, variables=("A", "B", "C")), "probability")
    for order in (["A", "B", "C"], ["C", "A", "B"], ["B", "C", "A"]):
        assert construct_bn(cps, order).edges == frozenset()
