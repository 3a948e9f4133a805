"""Graphs, hypergraphs and the structural transforms used by every other module.

Vertex sets are Python ints used as fixed-width bit vectors, one bit per
vertex, so subset tests, unions and intersections are single machine-word
operations for the universes this package targets.  The universe cap is 64
vertices; constructions that would exceed it raise InputError.

Hypergraphs are identified with their edge sets: construction rejects
duplicate edges, and every transform deduplicates and sorts its output edges
by bit pattern so downstream fingerprints are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import BudgetError, InputError

UNIVERSE_CAP = 64


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits_of(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return mask.bit_count()


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _check_universe(n: int) -> None:
    if n < 0:
        raise InputError("vertex count must be nonnegative")
    if n > UNIVERSE_CAP:
        raise InputError(f"universe size {n} exceeds cap {UNIVERSE_CAP}")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph: ``adj[v]`` is the neighbour bitmask of v.

    Invariants (checked at construction): adjacency symmetric, empty
    diagonal, all bits within [0, n).
    """

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        _check_universe(self.n)
        if len(self.adj) != self.n:
            raise InputError("adjacency length must equal vertex count")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise InputError(f"vertex {v} has a neighbour outside [0, n)")
            if row >> v & 1:
                raise InputError(f"self-loop at vertex {v}")
        for v in range(self.n):
            for u in bits_of(self.adj[v]):
                if not self.adj[u] >> v & 1:
                    raise InputError(f"asymmetric adjacency between {u} and {v}")

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        _check_universe(n)
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u},{v}) outside universe [0,{n})")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return Graph(n, tuple(adj))

    @staticmethod
    def complete(n: int) -> "Graph":
        full = (1 << n) - 1
        return Graph(n, tuple(full ^ (1 << v) for v in range(n)))

    @staticmethod
    def empty(n: int) -> "Graph":
        return Graph(n, (0,) * n)

    @staticmethod
    def path(n: int) -> "Graph":
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @staticmethod
    def cycle(n: int) -> "Graph":
        if n < 3:
            raise InputError("cycle needs at least 3 vertices")
        return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits_of(self.adj[u]) if u < v]

    def edge_count(self) -> int:
        return sum(popcount(row) for row in self.adj) // 2

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def degree_into(self, v: int, mask: int) -> int:
        return popcount(self.adj[v] & mask)

    def is_subgraph_of(self, other: "Graph") -> bool:
        """Edge containment on a shared vertex set."""
        if self.n != other.n:
            return False
        return all(self.adj[v] & ~other.adj[v] == 0 for v in range(self.n))

    def induced(self, mask: int) -> "Graph":
        """Induced subgraph on the vertices of ``mask``, relabelled 0..|mask|-1."""
        verts = bits_of(mask)
        pos = {v: i for i, v in enumerate(verts)}
        adj = [0] * len(verts)
        for v in verts:
            for u in bits_of(self.adj[v] & mask):
                adj[pos[v]] |= 1 << pos[u]
        return Graph(len(verts), tuple(adj))

    def union(self, other: "Graph") -> "Graph":
        if self.n != other.n:
            raise InputError("union requires a shared vertex set")
        return Graph(self.n, tuple(a | b for a, b in zip(self.adj, other.adj)))


@dataclass(frozen=True)
class Hypergraph:
    """Finite hypergraph: a vertex universe [0, n) and a duplicate-free
    edge list of vertex subsets (bitmasks).  Uniformity is derived, never
    assumed."""

    n: int
    edges: tuple[int, ...]

    def __post_init__(self):
        _check_universe(self.n)
        full = (1 << self.n) - 1
        seen = set()
        for e in self.edges:
            if e & ~full:
                raise InputError("edge contains a vertex outside the universe")
            if e in seen:
                raise InputError(f"duplicate edge {sorted(bits_of(e))}")
            seen.add(e)

    @staticmethod
    def from_vertex_lists(n: int, edge_lists: Iterable[Iterable[int]]) -> "Hypergraph":
        return Hypergraph(n, tuple(mask_of(e) for e in edge_lists))

    def edge_sizes(self) -> list[int]:
        return [popcount(e) for e in self.edges]

    def uniformity(self) -> int | None:
        """Common edge size, or None if empty or non-uniform."""
        sizes = set(self.edge_sizes())
        if len(sizes) == 1:
            return sizes.pop()
        return None

    def sorted_edges(self) -> "Hypergraph":
        return Hypergraph(self.n, tuple(sorted(self.edges)))

    def canonical_key(self) -> tuple:
        return (self.n, tuple(sorted(self.edges)))


def induced_sub(h: Hypergraph, w_mask: int) -> Hypergraph:
    """Sub-hypergraph induced on W: exactly the edges contained in W,
    relabelled onto [0, |W|) in increasing vertex order.
    Use :func:`induced_sub_with_map` when the remap matters."""
    sub, _ = induced_sub_with_map(h, w_mask)
    return sub


def induced_sub_with_map(h: Hypergraph, w_mask: int) -> tuple[Hypergraph, tuple[int, ...]]:
    """As :func:`induced_sub`; also returns the old labels of the new vertices."""
    if w_mask & ~((1 << h.n) - 1):
        raise InputError("W contains a vertex outside the universe")
    verts = bits_of(w_mask)
    pos = {v: i for i, v in enumerate(verts)}
    out = []
    for e in h.edges:
        if e & ~w_mask == 0:
            out.append(mask_of(pos[v] for v in bits_of(e)))
    return Hypergraph(len(verts), tuple(sorted(set(out)))), tuple(verts)


def restrict_edges(h: Hypergraph, w_mask: int) -> Hypergraph:
    """Edges contained in W, keeping the original universe and labels."""
    if w_mask & ~((1 << h.n) - 1):
        raise InputError("W contains a vertex outside the universe")
    return Hypergraph(h.n, tuple(sorted(e for e in h.edges if e & ~w_mask == 0)))


def upset_slice(h: Hypergraph, s: int) -> Hypergraph:
    """The size-s slice of the up-set of h: every s-subset of the universe
    that contains some edge of h."""
    if s < 0:
        raise InputError("slice size must be nonnegative")
    out = []
    for combo in itertools.combinations(range(h.n), s):
        m = mask_of(combo)
        if any(e & ~m == 0 for e in h.edges):
            out.append(m)
    return Hypergraph(h.n, tuple(sorted(out)))


def nonstrict_link(h: Hypergraph, t_mask: int) -> Hypergraph:
    """Non-strict link: {E \\ T for each edge E}, deduplicated.  May contain
    the empty edge when some E is inside T; consumers state their own
    convention for it."""
    return Hypergraph(h.n, tuple(sorted({e & ~t_mask for e in h.edges})))


def edgewise_include(h: Hypergraph, v: int) -> Hypergraph:
    """Add v to every edge.  v must be a fresh vertex (>= h.n); the universe
    grows to include it."""
    if v < h.n:
        raise InputError(f"vertex {v} already lies in the universe [0,{h.n})")
    n = v + 1
    _check_universe(n)
    bit = 1 << v
    return Hypergraph(n, tuple(sorted(e | bit for e in h.edges)))


@dataclass(frozen=True)
class VertexMap:
    """Total function [0, n_source) -> [0, n_target), as a lookup table."""

    n_source: int
    n_target: int
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != self.n_source:
            raise InputError("vertex map must be total on the source universe")
        for img in self.table:
            if not 0 <= img < self.n_target:
                raise InputError("vertex map image outside target universe")

    @staticmethod
    def identity(n: int) -> "VertexMap":
        return VertexMap(n, n, tuple(range(n)))

    def apply_mask(self, mask: int) -> int:
        out = 0
        for v in bits_of(mask):
            out |= 1 << self.table[v]
        return out

    def image_mask(self) -> int:
        return self.apply_mask((1 << self.n_source) - 1)

    def fiber_mask(self, target_mask: int) -> int:
        """Pre-image of a target vertex set."""
        out = 0
        for v in range(self.n_source):
            if target_mask >> self.table[v] & 1:
                out |= 1 << v
        return out


def project(h: Hypergraph, pi: VertexMap) -> Hypergraph:
    """Image hypergraph {pi(E)}, deduplicated and sorted.  Pre-image counts,
    which the measure pullback needs, come from :func:`preimage_counts`."""
    if pi.n_source != h.n:
        raise InputError("projection domain must match the hypergraph universe")
    return Hypergraph(pi.n_target, tuple(sorted({pi.apply_mask(e) for e in h.edges})))


def preimage_counts(h: Hypergraph, pi: VertexMap) -> dict[int, int]:
    """For each image edge of project(h, pi), the number of h-edges mapping
    onto it."""
    if pi.n_source != h.n:
        raise InputError("projection domain must match the hypergraph universe")
    counts: dict[int, int] = {}
    for e in h.edges:
        img = pi.apply_mask(e)
        counts[img] = counts.get(img, 0) + 1
    return counts


DEFAULT_ENUM_CAP = 25


def independent_sets(
    h: Hypergraph, budget: int | None = None
) -> Iterator[int]:
    """Yield exactly the vertex sets containing no edge of h, in increasing
    bit-pattern order.

    The recursion decides the highest-index vertex first (exclude before
    include), which makes the yield order coincide with integer order of the
    masks; an edge is re-checked only when its lowest vertex is added.
    Exceeds ``budget`` yields -> BudgetError carrying the partial count.
    """
    if budget is None and h.n > DEFAULT_ENUM_CAP:
        raise InputError(
            f"universe size {h.n} above enumeration cap {DEFAULT_ENUM_CAP}; pass a budget"
        )
    if 0 in h.edges:
        return  # the empty edge is inside every set, nothing is independent
    edges_by_min: list[list[int]] = [[] for _ in range(h.n)]
    for e in h.edges:
        edges_by_min[(e & -e).bit_length() - 1].append(e)

    count = 0

    def rec(v: int, current: int) -> Iterator[int]:
        nonlocal count
        if v < 0:
            count += 1
            if budget is not None and count > budget:
                raise BudgetError(
                    f"independent-set budget {budget} exceeded", partial=count - 1
                )
            yield current
            return
        yield from rec(v - 1, current)  # without v: smaller bit patterns first
        cand = current | (1 << v)
        if all(e & ~cand != 0 for e in edges_by_min[v]):
            yield from rec(v - 1, cand)

    # Recursion over v = n-1 .. 0 with "exclude first" emits masks in
    # increasing integer order because the highest bit dominates.
    yield from rec(h.n - 1, 0)


def is_independent(h: Hypergraph, mask: int) -> bool:
    return all(e & ~mask != 0 for e in h.edges)


@dataclass(frozen=True)
class Coloring:
    """Total edge colouring of a Graph with colours 1..r."""

    r: int
    assignment: dict[tuple[int, int], int] = field(hash=False)

    def __post_init__(self):
        for (u, v), c in self.assignment.items():
            if u >= v:
                raise InputError("colouring keys must be (u, v) with u < v")
            if not 1 <= c <= self.r:
                raise InputError(f"colour {c} outside [1, {self.r}]")

    @staticmethod
    def of(graph: Graph, r: int, colours: Sequence[int]) -> "Coloring":
        es = graph.edges()
        if len(colours) != len(es):
            raise InputError("colouring must be total on E(G)")
        return Coloring(r, dict(zip(es, colours)))

    def color_subgraph(self, graph: Graph, colour: int) -> Graph:
        return Graph.from_edges(
            graph.n, [e for e, c in self.assignment.items() if c == colour]
        )
