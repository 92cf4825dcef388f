"""Brute-force spanning forests and spanning forest polynomials.

This is the ground truth the determinant side is checked against, so it stays
deliberately naive: every edge subset of the right size is tried, kept if
acyclic (union-find) and if its trees match the requested partition.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .graphs import DASH, MarkedGraph, Partition, canonicalize
from .polyring import Poly, pack, poly_sum


class NoDash(ValueError):
    """expand_dash called on a partition without DASH entries."""


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def induced_partition(G: MarkedGraph, forest: tuple[int, ...]) -> Partition | None:
    """Partition of the marked vertices cut out by an edge subset.

    Returns None when the subset has a cycle or leaves a tree with no marked
    vertex (such a forest matches no partition).
    """
    parent = list(range(G.n + 1))
    for var in forest:
        u, v, _ = G.edges[var]
        ru, rv = _find(parent, u), _find(parent, v)
        if ru == rv:
            return None
        parent[ru] = rv
    roots = {_find(parent, v) for v in range(1, G.n + 1)}
    labels = [_find(parent, v) for v in G.marked]
    if len(set(labels)) != len(roots):
        return None
    return canonicalize_labels(labels)


def canonicalize_labels(labels) -> Partition:
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(x, len(seen) + 1) for x in labels)


@lru_cache(maxsize=None)
def forests_by_partition(G: MarkedGraph, ntrees: int) -> dict[Partition, tuple[tuple[int, ...], ...]]:
    """All spanning forests with ``ntrees`` trees, grouped by induced partition.

    Forests are edge-id tuples in ``itertools.combinations`` order.
    """
    size = G.n - ntrees
    out: dict[Partition, list[tuple[int, ...]]] = {}
    if size < 0 or size > G.num_edges:
        return {}
    for forest in itertools.combinations(range(G.num_edges), size):
        part = induced_partition(G, forest)
        if part is not None:
            out.setdefault(part, []).append(forest)
    return {p: tuple(fs) for p, fs in out.items()}


def spanning_forests(G: MarkedGraph, P: Partition) -> list[frozenset[int]]:
    if DASH in P:
        raise ValueError("spanning_forests needs a DASH-free partition; use expand_dash")
    P = canonicalize(P)
    if len(P) != G.m:
        raise ValueError(f"partition has {len(P)} entries, graph has {G.m} marked vertices")
    ntrees = max(P)
    return [frozenset(f) for f in forests_by_partition(G, ntrees).get(P, ())]


def expand_dash(P: Partition) -> list[Partition]:
    """Replace DASH entries by every existing part label, recursively."""
    if DASH not in P:
        raise NoDash(f"no DASH in {P}")
    P = canonicalize(P)
    labels = sorted({x for x in P if x != DASH})
    i = P.index(DASH)
    out: list[Partition] = []
    for lab in labels:
        q = canonicalize(P[:i] + (lab,) + P[i + 1 :])
        if DASH in q:
            out.extend(expand_dash(q))
        else:
            out.append(q)
    return out


@lru_cache(maxsize=None)
def forest_poly(G: MarkedGraph, P: Partition) -> Poly:
    """Sum over compatible spanning forests of the product of non-forest edges."""
    P = canonicalize(P)
    if len(P) != G.m:
        raise ValueError(f"partition has {len(P)} entries, graph has {G.m} marked vertices")
    if DASH in P:
        return poly_sum(forest_poly(G, q) for q in expand_dash(P))
    full = pack({v: 1 for v in range(G.num_edges)})
    unit = [pack({v: 1}) for v in range(G.num_edges)]
    terms: dict[int, int] = {}
    for forest in forests_by_partition(G, max(P)).get(P, ()):
        key = full - sum(unit[v] for v in forest)
        terms[key] = terms.get(key, 0) + 1
    return Poly(terms)


def forest_count(G: MarkedGraph, P: Partition) -> int:
    P = canonicalize(P)
    if DASH in P:
        return sum(forest_count(G, q) for q in expand_dash(P))
    return len(forests_by_partition(G, max(P)).get(P, ()))


def all_ones(m: int) -> Partition:
    return (1,) * m


def all_distinct(m: int) -> Partition:
    return tuple(range(1, m + 1))
