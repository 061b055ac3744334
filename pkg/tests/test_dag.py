import random

import pytest
from hypothesis import given, settings, strategies as st

from plausnet.core import PreconditionError
from plausnet.dag import (Dag, active_trails, all_dags, d_separated, d_separated_trails, dags_up_to_isomorphism,
                          query_triples, random_dag)

CHAIN = Dag.of("ABC", [("A", "B"), ("B", "C")])
FORK = Dag.of("ABC", [("B", "A"), ("B", "C")])
COLLIDER = Dag.of("ABC", [("A", "C"), ("B", "C")])


def moral_separated(dag, X, Y, Z):
    """Oracle: separation in the moralised ancestral graph."""
    keep = dag.ancestors(set(X) | set(Y) | set(Z))
    adj = {v: set() for v in keep}
    for a, b in dag.edges:
        if a in keep and b in keep:
            adj[a].add(b)
            adj[b].add(a)
    for v in keep:
        ps = [p for p in dag.parents(v) if p in keep]
        for p in ps:
            for q in ps:
                if p != q:
                    adj[p].add(q)
    seen = set(X)
    stack = list(X)
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen and nb not in Z:
                seen.add(nb)
                stack.append(nb)
    return not (seen & set(Y))


def test_structure_queries():
    assert CHAIN.parents("B") == ("A",)
    assert CHAIN.children("B") == ("C",)
    assert CHAIN.descendants("A") == {"A", "B", "C"}
    assert CHAIN.nondescendants("B") == {"A"}
    assert COLLIDER.ancestors({"C"}) == {"A", "B", "C"}
    assert CHAIN.topological_order() == ("A", "B", "C")
    assert Dag.of("ABC", [("C", "A")]).topological_order() == ("B", "C", "A")


def test_bad_graphs():
    with pytest.raises(PreconditionError):
        Dag.of("AB", [("A", "B"), ("B", "A")])
    with pytest.raises(PreconditionError):
        Dag.of("AB", [("A", "A")])
    with pytest.raises(PreconditionError):
        Dag.of("AB", [("A", "Q")])
    with pytest.raises(PreconditionError):
        Dag.of("AA")


@pytest.mark.parametrize("dag,query,expected", [
    (CHAIN, ("A", "C", ""), False),
    (CHAIN, ("A", "C", "B"), True),
    (FORK, ("A", "C", ""), False),
    (FORK, ("A", "C", "B"), True),
    (COLLIDER, ("A", "B", ""), True),
    (COLLIDER, ("A", "B", "C"), False),
])
def test_textbook_cases(dag, query, expected):
    x, y, z = query
    for method in ("reachable", "trails"):
        assert d_separated(dag, {x}, {y}, set(z), method=method) == expected


def test_collider_descendant_opens_the_trail():
    g = Dag.of("ABCD", [("A", "C"), ("B", "C"), ("C", "D")])
    assert not d_separated(g, {"A"}, {"B"}, {"D"})


def test_active_trails_listed():
    assert list(active_trails(COLLIDER, "A", {"B"}, {"C"})) == [("A", "C", "B")]
    assert list(active_trails(COLLIDER, "A", {"B"}, set())) == []


def test_query_rejects_overlap():
    with pytest.raises(PreconditionError):
        d_separated(CHAIN, {"A"}, {"A"}, set())
    with pytest.raises(PreconditionError):
        d_separated(CHAIN, set(), {"A"}, set())


def test_dag_counts():
    # labelled dags on 1..4 nodes: 1, 3, 25, 543; unlabelled: 1, 2, 6, 31
    assert [len(all_dags(n)) for n in (1, 2, 3, 4)] == [1, 3, 25, 543]
    assert [len(dags_up_to_isomorphism(n)) for n in (1, 2, 3, 4)] == [1, 2, 6, 31]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_query_triple_count(n):
    assert len(list(query_triples("ABCD"[:n]))) == 4 ** n - 2 * 3 ** n + 2 ** n


@given(seed=st.integers(0, 10 ** 6), n=st.integers(2, 6), p=st.floats(0.1, 0.9))
@settings(max_examples=200, deadline=None)
def test_both_methods_match_moral_oracle(seed, n, p):
    rng = random.Random(seed)
    dag = random_dag(n, rng, p)
    roles = [rng.randrange(4) for _ in dag.nodes]
    X, Y, Z = ({v for v, r in zip(dag.nodes, roles) if r == k} for k in (1, 2, 3))
    if not X or not Y:
        return
    expected = moral_separated(dag, X, Y, Z)
    assert d_separated(dag, X, Y, Z) == expected
    assert d_separated_trails(dag, X, Y, Z) == expected


@given(seed=st.integers(0, 10 ** 6), n=st.integers(2, 6))
@settings(max_examples=100, deadline=None)
def test_symmetry(seed, n):
    rng = random.Random(seed)
    dag = random_dag(n, rng)
    for X, Y, Z in list(query_triples(dag.nodes))[:40]:
        assert d_separated(dag, X, Y, Z) == d_separated(dag, Y, X, Z)
