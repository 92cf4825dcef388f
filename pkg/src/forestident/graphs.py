"""Marked multigraphs and the (p_1, ..., p_m) set-partition notation.

Vertices are numbered 1..n.  A partition is a plain tuple of ints over the
marked vertices, with ``DASH`` (0) for a vertex left out of the partitioned
subset.  Canonical partitions are restricted-growth strings over their non-DASH
entries.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import NamedTuple, Sequence

DASH = 0

Partition = tuple[int, ...]


class GraphError(ValueError):
    """Malformed graph input."""


class InvalidEntry(ValueError):
    """Partition entry outside 1..m (and not DASH)."""


@dataclass(frozen=True)
class MarkedGraph:
    """Undirected multigraph on vertices 1..n with ordered marked vertices.

    ``edges`` holds ``(u, v, var)`` triples; ``names[var]`` is the display name of
    the edge variable.
    """

    n: int
    edges: tuple[tuple[int, int, int], ...]
    marked: tuple[int, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("graph needs at least one vertex")
        m = len(self.marked)
        if not 1 <= m <= self.n:
            raise GraphError(f"need 1 <= m <= n, got m={m}, n={self.n}")
        if len(set(self.marked)) != m:
            raise GraphError("marked vertices must be distinct")
        for v in self.marked:
            if not 1 <= v <= self.n:
                raise GraphError(f"marked vertex {v} out of range")
        seen = set()
        for u, v, var in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise GraphError(f"edge ({u},{v}) out of range")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if var in seen:
                raise GraphError(f"edge variable {var} used twice")
            seen.add(var)
        if seen != set(range(len(self.edges))):
            raise GraphError("edge variables must be 0..E-1")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"a{i}" for i in range(len(self.edges))))
        elif len(self.names) != len(self.edges) or len(set(self.names)) != len(self.names):
            raise GraphError("edge names must be distinct, one per edge")

    @property
    def m(self) -> int:
        return len(self.marked)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def name_map(self) -> dict[int, str]:
        return dict(enumerate(self.names))

    def var_ids(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def relabeled(self) -> MarkedGraph:
        """Same graph with vertices renumbered so marked vertex i becomes vertex i."""
        order = list(self.marked) + [v for v in range(1, self.n + 1) if v not in self.marked]
        new = {old: i + 1 for i, old in enumerate(order)}
        edges = tuple((new[u], new[v], var) for u, v, var in self.edges)
        return MarkedGraph(self.n, edges, tuple(range(1, self.m + 1)), self.names)

    def with_marked(self, marked: Sequence[int]) -> MarkedGraph:
        return MarkedGraph(self.n, self.edges, tuple(marked), self.names)

    def is_connected(self) -> bool:
        parent = list(range(self.n + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v, _ in self.edges:
            parent[find(u)] = find(v)
        return len({find(v) for v in range(1, self.n + 1)}) == 1

    # ------------------------------------------------------------------ JSON

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "marked": list(self.marked),
            "edges": [[u, v, self.names[var]] for u, v, var in sorted(self.edges, key=lambda e: e[2])],
        }

    @classmethod
    def from_dict(cls, data: dict) -> MarkedGraph:
        try:
            n = data["n"]
            raw_edges = data["edges"]
            marked = data.get("marked", list(range(1, n + 1)))
        except (KeyError, TypeError) as exc:
            raise GraphError(f"graph JSON missing field: {exc}") from None
        if not isinstance(n, int) or isinstance(n, bool):
            raise GraphError("n must be an integer")
        edges = []
        names = []
        for i, e in enumerate(raw_edges):
            if not isinstance(e, (list, tuple)) or len(e) not in (2, 3):
                raise GraphError(f"edge {i} must be [u, v] or [u, v, name]")
            u, v = e[0], e[1]
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in (u, v)):
                raise GraphError(f"edge {i} endpoints must be integers")
            names.append(str(e[2]) if len(e) == 3 else f"a{i}")
            edges.append((u, v, i))
        if not isinstance(marked, list) or not all(isinstance(x, int) for x in marked):
            raise GraphError("marked must be a list of integers")
        return cls(n, tuple(edges), tuple(marked), tuple(names))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> MarkedGraph:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise GraphError("graph JSON must be an object")
        return cls.from_dict(data)


def complete_graph(n: int, marked: Sequence[int] | None = None) -> MarkedGraph:
    """K_n with one variable per vertex pair, pairs in lexicographic order."""
    if n < 2:
        raise GraphError("complete graph needs n >= 2")
    if marked is None:
        marked = range(1, n + 1)
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    edges = tuple((u, v, i) for i, (u, v) in enumerate(pairs))
    return MarkedGraph(n, edges, tuple(marked))


def triangle() -> MarkedGraph:
    """Triangle with a = {2,3}, b = {1,3}, c = {1,2}, all three vertices marked."""
    return MarkedGraph(3, ((2, 3, 0), (1, 3, 1), (1, 2, 2)), (1, 2, 3), ("a", "b", "c"))


def graph_from_pairs(n: int, pairs: Sequence[tuple[int, int]], marked: Sequence[int]) -> MarkedGraph:
    edges = tuple((u, v, i) for i, (u, v) in enumerate(pairs))
    return MarkedGraph(n, edges, tuple(marked))


# ------------------------------------------------------------------ partitions


def canonicalize(p: Sequence[int]) -> Partition:
    """Relabel parts in order of first appearance; DASH entries stay put."""
    m = len(p)
    relabel: dict[int, int] = {}
    out = []
    for x in p:
        if x == DASH:
            out.append(DASH)
            continue
        if not isinstance(x, int) or not 1 <= x <= m:
            raise InvalidEntry(f"part label {x!r} outside 1..{m}")
        if x not in relabel:
            relabel[x] = len(relabel) + 1
        out.append(relabel[x])
    return tuple(out)


def parse_partition(text: str) -> Partition:
    """Parse ``(1,1,2,-)``; the result is canonical."""
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise InvalidEntry(f"partition must be parenthesised: {text!r}")
    entries = []
    for tok in body[1:-1].split(","):
        tok = tok.strip()
        if tok in ("-", "−"):
            entries.append(DASH)
        elif tok.isdigit():
            entries.append(int(tok))
        else:
            raise InvalidEntry(f"bad partition entry {tok!r}")
    return canonicalize(entries)


def format_partition(p: Sequence[int]) -> str:
    return "(" + ",".join("-" if x == DASH else str(x) for x in p) + ")"


def num_parts(p: Sequence[int]) -> int:
    return len({x for x in p if x != DASH})


def parts(p: Sequence[int]) -> list[frozenset[int]]:
    """Blocks as sets of 1-based marked-vertex positions, ordered by label."""
    groups: dict[int, set[int]] = {}
    for i, x in enumerate(p, start=1):
        if x != DASH:
            groups.setdefault(x, set()).add(i)
    return [frozenset(groups[k]) for k in sorted(groups)]


def from_blocks(m: int, blocks: Sequence[Sequence[int]]) -> Partition:
    out = [DASH] * m
    for label, block in enumerate(blocks, start=1):
        for v in block:
            out[v - 1] = label
    return canonicalize(out)


def restricted_growth_strings(m: int) -> list[Partition]:
    """All set partitions of {1..m} as restricted-growth strings, lexicographically."""
    out: list[Partition] = []

    def rec(prefix: list[int], top: int):
        if len(prefix) == m:
            out.append(tuple(prefix))
            return
        for x in range(1, top + 2):
            prefix.append(x)
            rec(prefix, max(top, x))
            prefix.pop()

    if m >= 1:
        rec([1], 1)
    return out


def enumerate_A(m: int) -> list[Partition]:
    """Partitions of {1..m} into m-1 parts (one pair, rest singletons).

    Lexicographic order of the restricted-growth strings, which for m = 4 is the
    A_1..A_6 labelling.
    """
    if m < 3:
        raise ValueError("need m >= 3")
    return [p for p in restricted_growth_strings(m) if max(p) == m - 1]


def _b_order_key(p: Partition):
    one, two = parts(p)
    small = min(len(one), len(two))
    if len(one) == len(two):
        block = two  # the half not containing vertex 1
    else:
        block = one if len(one) < len(two) else two
    return (small, tuple(-v for v in sorted(block)))


def enumerate_B(m: int) -> list[Partition]:
    """Partitions of {1..m} into exactly two parts.

    Ordered by the size of the smaller part, then that part in decreasing
    lexicographic order (on ties, the part without vertex 1).  For m = 4 this
    reproduces the B_1..B_7 labelling.
    """
    if m < 3:
        raise ValueError("need m >= 3")
    bs = [p for p in restricted_growth_strings(m) if max(p) == 2]
    return sorted(bs, key=_b_order_key)


class ABPair(NamedTuple):
    A: Partition
    B: Partition


def a_pair(A: Partition) -> tuple[int, int]:
    """The two vertices sharing a part in an A-partition."""
    for block in parts(A):
        if len(block) == 2:
            lo, hi = sorted(block)
            return lo, hi
    raise ValueError(f"{format_partition(A)} has no part of size 2")


def validate_ab(pair: ABPair) -> None:
    A, B = pair
    m = len(A)
    if len(B) != m or DASH in A or DASH in B:
        raise ValueError("AB pair partitions must be DASH-free and of equal length")
    if canonicalize(A) != A or canonicalize(B) != B:
        raise ValueError("AB pair partitions must be canonical")
    if num_parts(A) != m - 1 or num_parts(B) != 2:
        raise ValueError("A needs m-1 parts and B needs 2 parts")


def is_forbidden(pair: ABPair | tuple[Partition, Partition]) -> bool:
    A, B = pair
    lo, hi = a_pair(A)
    return B[lo - 1] == B[hi - 1]


def all_ab_pairs(m: int) -> list[ABPair]:
    return [ABPair(A, B) for A in enumerate_A(m) for B in enumerate_B(m)]
