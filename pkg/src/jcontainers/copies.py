"""Hypergraphs that encode induced copies of a pattern graph.

An edge of the copy hypergraph for (F, G', G) is a vertex set L with
G'[L] = G[L] isomorphic to F: a copy of F inside G' that is induced in G.
The extension hypergraph lives on two stacked copies of the host's vertex
set and encodes, for a designated pattern vertex w, which neighbourhood
patterns of a fresh vertex complete a copy of F - w to a copy of F: layer 1
holds the vertices that must be neighbours, layer 0 those that must not.

Vertex (u, b) of the two-layer universe is encoded as u + b*m where m is the
host size; the projection onto the first coordinate is therefore x mod m.
Isomorphisms are found by permutation backtracking with degree pruning
(pattern size capped at 8) and each stored witness is the lexicographically
least bijection, so edges that depend on the witness are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InputError
from .hypercore import (
    Graph,
    Hypergraph,
    VertexMap,
    bits_of,
    edgewise_include,
    mask_of,
    popcount,
    project,
    restrict_edges,
)

PATTERN_CAP = 8


def least_isomorphism(pattern: Graph, host: Graph, l_verts: list[int]):
    """Lexicographically least bijection phi: l_verts -> V(pattern) with
    host edges inside l_verts matching pattern edges exactly, or None.

    The returned tuple lists phi(u) for u in ascending order of l_verts;
    "least" refers to that tuple.  Backtracking assigns images in ascending
    candidate order, pruning on degree within the induced subgraph.
    """
    k = len(l_verts)
    if pattern.n != k:
        return None
    if k > PATTERN_CAP:
        raise InputError(f"pattern size {k} above isomorphism cap {PATTERN_CAP}")
    l_mask = mask_of(l_verts)
    local_deg = [popcount(host.adj[u] & l_mask) for u in l_verts]
    pattern_deg = [pattern.degree(x) for x in range(k)]
    if sorted(local_deg) != sorted(pattern_deg):
        return None
    assignment = [-1] * k
    used = [False] * k

    def backtrack(i: int):
        if i == k:
            return True
        for img in range(k):
            if used[img] or local_deg[i] != pattern_deg[img]:
                continue
            ok = True
            for j in range(i):
                if host.has_edge(l_verts[i], l_verts[j]) != pattern.has_edge(img, assignment[j]):
                    ok = False
                    break
            if ok:
                assignment[i] = img
                used[img] = True
                if backtrack(i + 1):
                    return True
                used[img] = False
                assignment[i] = -1
        return False

    if backtrack(0):
        return tuple(assignment)
    return None


@dataclass(frozen=True)
class CopyHypergraph:
    """Copy hypergraph plus, per edge, the pattern and one isomorphism
    witness (re-checkable)."""

    hyper: Hypergraph
    pattern: Graph
    witnesses: dict  # edge mask -> phi tuple aligned with sorted vertices

    def witness_of(self, edge_mask: int):
        return self.witnesses[edge_mask]


def _check_pair(g_prime: Graph, g: Graph):
    if g_prime.n != g.n:
        raise InputError("G' and G must share a vertex set")
    if not g_prime.is_subgraph_of(g):
        raise InputError("G' must be an edge-subgraph of G")


def induced_copy_hypergraph(f: Graph, g_prime: Graph, g: Graph) -> CopyHypergraph:
    """All vertex sets L with G'[L] = G[L] isomorphic to F."""
    _check_pair(g_prime, g)
    if f.n > PATTERN_CAP:
        raise InputError(f"pattern size {f.n} above cap {PATTERN_CAP}")
    edges = []
    witnesses = {}
    for combo in itertools.combinations(range(g.n), f.n):
        l_mask = mask_of(combo)
        if any(g_prime.adj[u] & l_mask != g.adj[u] & l_mask for u in combo):
            continue  # some G-edge inside L is missing from G'
        phi = least_isomorphism(f, g_prime, list(combo))
        if phi is not None:
            edges.append(l_mask)
            witnesses[l_mask] = phi
    return CopyHypergraph(Hypergraph(g.n, tuple(sorted(edges))), f, witnesses)


@dataclass(frozen=True)
class ExtensionHypergraph:
    """Two-layer hypergraph recording how a fresh vertex extends copies.

    ``hyper`` lives on [0, 2m); vertex u + b*m is the pair (u, b).  ``phi``
    stores, per base copy L, the recorded bijection onto the reduced pattern.
    ``pi`` is the first-coordinate projection; |pi(E)| = |E| holds for every
    edge by construction and is re-checked here.
    """

    hyper: Hypergraph
    m: int
    pattern: Graph  # F
    removed: int  # w, the designated vertex of F
    base_copies: Hypergraph  # the copy hypergraph of F - w in the host pair
    phi: dict  # base copy mask -> bijection tuple onto V(F - w)
    pi: VertexMap

    def __post_init__(self):
        for e in self.hyper.edges:
            if popcount(self.pi.apply_mask(e)) != popcount(e):
                raise InputError("projection must be injective on every edge")


def first_coordinate_map(m: int) -> VertexMap:
    return VertexMap(2 * m, m, tuple(list(range(m)) + list(range(m))))


def extension_hypergraph(
    f: Graph, w: int, g_prime: Graph, g: Graph
) -> ExtensionHypergraph:
    """Build the two-layer extension hypergraph for pattern F and removed
    vertex w over the host pair (G', G)."""
    _check_pair(g_prime, g)
    if not 0 <= w < f.n:
        raise InputError(f"removed vertex {w} outside the pattern")
    m = g.n
    f_minus = f.induced(((1 << f.n) - 1) ^ (1 << w))
    reduced_to_full = [x for x in range(f.n) if x != w]  # order-preserving
    copies = induced_copy_hypergraph(f_minus, g_prime, g)
    edges = []
    phi_of = {}
    for l_mask in copies.hyper.edges:
        phi = copies.witnesses[l_mask]
        verts = bits_of(l_mask)
        e = 0
        for u, img in zip(verts, phi):
            layer = 1 if f.has_edge(reduced_to_full[img], w) else 0
            e |= 1 << (u + layer * m)
        edges.append(e)
        phi_of[l_mask] = phi
    # distinct base copies cannot collide: the first-coordinate projection
    # recovers L from E_L, but deduplicate defensively anyway
    unique = tuple(sorted(set(edges)))
    return ExtensionHypergraph(
        Hypergraph(2 * m, unique),
        m,
        f,
        w,
        copies.hyper,
        phi_of,
        first_coordinate_map(m),
    )


def iota(g_prime: Graph, g: Graph, u_mask: int, v: int) -> int:
    """The two-layer vertex set indexing (G', G) at v: layer 0 holds the
    non-neighbours of v in G within U, layer 1 the G'-neighbours.

    U is relabelled ascending onto [0, m); the result is a bitmask on the
    two-layer universe [0, 2m)."""
    _check_pair(g_prime, g)
    if u_mask >> v & 1:
        raise InputError("v must lie outside U")
    verts = bits_of(u_mask)
    m = len(verts)
    out = 0
    for i, u in enumerate(verts):
        if not g.adj[v] >> u & 1:
            out |= 1 << i
        if g_prime.adj[v] >> u & 1:
            out |= 1 << (i + m)
    return out


def extend_copies(ext: ExtensionHypergraph, i_mask: int, v: int) -> Hypergraph:
    """Copies of the full pattern through v certified by the index set I:
    project the edges of the extension hypergraph inside I and adjoin v."""
    if v < ext.m:
        raise InputError(f"fresh vertex {v} must be at least the host size {ext.m}")
    inside = restrict_edges(ext.hyper, i_mask)
    projected = project(inside, ext.pi)
    if not projected.edges:
        return Hypergraph(v + 1, ())
    return edgewise_include(projected, v)
