"""Directed acyclic graphs over named binary variables and d-separation."""
from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .core import PreconditionError


@dataclass(frozen=True)
class Dag:
    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self):
        if len(set(self.nodes)) != len(self.nodes):
            raise PreconditionError("duplicate node names")
        known = set(self.nodes)
        for a, b in self.edges:
            if a not in known or b not in known:
                raise PreconditionError(f"edge {a}->{b} mentions an unknown node")
            if a == b:
                raise PreconditionError(f"self loop on {a}")
        self.topological_order()  # raises on cycles

    @classmethod
    def of(cls, nodes: Iterable[str], edges: Iterable[tuple[str, str]] = ()) -> "Dag":
        return cls(tuple(nodes), frozenset(tuple(e) for e in edges))

    def __repr__(self):
        es = ", ".join(f"{a}->{b}" for a, b in sorted(self.edges))
        return f"Dag({list(self.nodes)}; {es})"

    @cached_property
    def _pos(self):
        return {v: i for i, v in enumerate(self.nodes)}

    @cached_property
    def _parents(self):
        out = {v: [] for v in self.nodes}
        for a, b in self.edges:
            out[b].append(a)
        return {v: tuple(sorted(ps, key=self._pos.__getitem__)) for v, ps in out.items()}

    @cached_property
    def _children(self):
        out = {v: [] for v in self.nodes}
        for a, b in self.edges:
            out[a].append(b)
        return {v: tuple(sorted(cs, key=self._pos.__getitem__)) for v, cs in out.items()}

    def check_node(self, v: str) -> str:
        if v not in self._pos:
            raise PreconditionError(f"unknown variable {v!r}")
        return v

    def parents(self, v: str) -> tuple[str, ...]:
        return self._parents[self.check_node(v)]

    def children(self, v: str) -> tuple[str, ...]:
        return self._children[self.check_node(v)]

    def neighbours(self, v: str) -> tuple[str, ...]:
        return self.parents(v) + self.children(v)

    def descendants(self, v: str) -> frozenset[str]:
        """Descendants of ``v``, including ``v`` itself."""
        seen = {v}
        stack = [v]
        while stack:
            for c in self.children(stack.pop()):
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return frozenset(seen)

    def nondescendants(self, v: str) -> frozenset[str]:
        return frozenset(self.nodes) - self.descendants(v)

    def ancestors(self, vs: Iterable[str]) -> frozenset[str]:
        """Ancestors of a set, including the set."""
        seen = set(vs)
        stack = list(seen)
        while stack:
            for p in self.parents(stack.pop()):
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return frozenset(seen)

    def topological_order(self) -> tuple[str, ...]:
        """Kahn's algorithm, breaking ties by declaration order."""
        indeg = {v: 0 for v in self.nodes}
        kids = {v: [] for v in self.nodes}
        for a, b in self.edges:
            indeg[b] += 1
            kids[a].append(b)
        pos = {v: i for i, v in enumerate(self.nodes)}
        ready = sorted((v for v in self.nodes if indeg[v] == 0), key=pos.__getitem__)
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for c in kids[v]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
            ready.sort(key=pos.__getitem__)
        if len(order) != len(self.nodes):
            raise PreconditionError("graph has a cycle")
        return tuple(order)

    def subgraph(self, edges: Iterable[tuple[str, str]]) -> "Dag":
        edges = frozenset(edges)
        if not edges <= self.edges:
            raise PreconditionError("not a subgraph")
        return Dag(self.nodes, edges)


# --------------------------------------------------------------------------
# d-separation


def _check_query(dag: Dag, X, Y, Z):
    X, Y, Z = set(X), set(Y), set(Z)
    for v in X | Y | Z:
        dag.check_node(v)
    if not X or not Y:
        raise PreconditionError("X and Y must be nonempty")
    if X & Y or X & Z or Y & Z:
        raise PreconditionError("X, Y and Z must be pairwise disjoint")
    return X, Y, Z


def _collider(dag: Dag, prev: str, mid: str, nxt: str) -> bool:
    return mid in dag.children(prev) and mid in dag.children(nxt)


def _passes(dag: Dag, prev: str, mid: str, nxt: str, Z: set) -> bool:
    """Whether an interior node lets a trail through given Z."""
    if _collider(dag, prev, mid, nxt):
        return bool(dag.descendants(mid) & Z)
    return mid not in Z


def active_trails(dag: Dag, x: str, Y: Iterable[str], Z: Iterable[str]) -> Iterable[tuple[str, ...]]:
    """Simple trails from ``x`` to a node of ``Y`` that no node of Z blocks.

    Depth-first with pruning: a prefix is abandoned as soon as one of its
    interior nodes blocks.
    """
    Y, Z = set(Y), set(Z)

    def walk(path, on_path):
        last = path[-1]
        if last in Y and len(path) > 1:
            yield tuple(path)
            return
        for nb in dag.neighbours(last):
            if nb in on_path:
                continue
            if len(path) >= 2 and not _passes(dag, path[-2], last, nb, Z):
                continue
            path.append(nb)
            on_path.add(nb)
            yield from walk(path, on_path)
            path.pop()
            on_path.discard(nb)

    yield from walk([x], {x})


def d_separated_trails(dag: Dag, X: Iterable[str], Y: Iterable[str], Z: Iterable[str] = ()) -> bool:
    """Reference implementation: look for any unblocked simple trail."""
    X, Y, Z = _check_query(dag, X, Y, Z)
    for x in sorted(X):
        for _ in active_trails(dag, x, Y, Z):
            return False
    return True


def reachable(dag: Dag, X: Iterable[str], Z: Iterable[str]) -> set[str]:
    """Nodes joined to X by an active trail given Z (Bayes-ball style sweep)."""
    Z = set(Z)
    anc = dag.ancestors(Z)
    todo = deque((x, "up") for x in X)
    visited = set()
    found = set()
    while todo:
        node, direction = todo.popleft()
        if (node, direction) in visited:
            continue
        visited.add((node, direction))
        if node not in Z:
            found.add(node)
        if direction == "up" and node not in Z:
            todo.extend((p, "up") for p in dag.parents(node))
            todo.extend((c, "down") for c in dag.children(node))
        elif direction == "down":
            if node not in Z:
                todo.extend((c, "down") for c in dag.children(node))
            if node in anc:
                todo.extend((p, "up") for p in dag.parents(node))
    return found


def d_separated_reachable(dag: Dag, X: Iterable[str], Y: Iterable[str], Z: Iterable[str] = ()) -> bool:
    X, Y, Z = _check_query(dag, X, Y, Z)
    return not (reachable(dag, X, Z) & Y)


def d_separated(dag: Dag, X: Iterable[str], Y: Iterable[str], Z: Iterable[str] = (), *,
                method: str = "reachable") -> bool:
    if method == "reachable":
        return d_separated_reachable(dag, X, Y, Z)
    if method == "trails":
        return d_separated_trails(dag, X, Y, Z)
    raise PreconditionError(f"unknown method {method!r}")


def query_triples(nodes: Sequence[str]):
    """Every (X, Y, Z) of pairwise disjoint sets with X and Y nonempty."""
    for roles in itertools.product(range(4), repeat=len(nodes)):
        X = frozenset(v for v, r in zip(nodes, roles) if r == 1)
        Y = frozenset(v for v, r in zip(nodes, roles) if r == 2)
        Z = frozenset(v for v, r in zip(nodes, roles) if r == 3)
        if X and Y:
            yield X, Y, Z


# --------------------------------------------------------------------------
# generators


def node_names(n: int) -> tuple[str, ...]:
    return tuple("ABCDEFGHIJKLMNOP"[i] if i < 16 else f"N{i}" for i in range(n))


def random_dag(n: int, rng: random.Random, edge_prob: float = 0.4, names: Sequence[str] | None = None) -> Dag:
    names = tuple(names or node_names(n))
    order = list(names)
    rng.shuffle(order)
    edges = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < edge_prob]
    return Dag.of(names, edges)


def all_dags(n: int, names: Sequence[str] | None = None) -> list[Dag]:
    names = tuple(names or node_names(n))
    pairs = [(a, b) for a in names for b in names if a < b]
    out = []
    # each unordered pair: absent, forward or backward
    for choice in itertools.product(range(3), repeat=len(pairs)):
        edges = [(a, b) if c == 1 else (b, a) for (a, b), c in zip(pairs, choice) if c]
        try:
            out.append(Dag.of(names, edges))
        except PreconditionError:
            pass
    return out


def _canonical(dag: Dag) -> tuple:
    best = None
    for perm in itertools.permutations(range(len(dag.nodes))):
        m = dict(zip(dag.nodes, perm))
        key = tuple(sorted((m[a], m[b]) for a, b in dag.edges))
        if best is None or key < best:
            best = key
    return best


def dags_up_to_isomorphism(n: int) -> list[Dag]:
    seen = {}
    for dag in all_dags(n):
        seen.setdefault(_canonical(dag), dag)
    return list(seen.values())
