"""Plain-text file formats for graphs, hypergraphs and measures.

Graph file:       first line ``graph <n>``, then one ``e <u> <v>`` line per
                  edge, 0-indexed with u < v.
Hypergraph file:  first line ``hypergraph <n>``, then one ``E <v1> ... <vk>``
                  line per edge with strictly increasing vertices.
Measure file:     one ``w <edge-index> <value>`` line per positive weight;
                  values are decimals or ``a/b`` rationals; edge indices refer
                  to the host hypergraph file's edge order.

Writers emit exactly what the parsers accept, so every emitted file
round-trips to an equal value.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError
from .hypercore import Graph, Hypergraph, bits_of, mask_of
from .measures import Measure


def _meaningful_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def parse_graph(text: str) -> Graph:
    lines = list(_meaningful_lines(text))
    if not lines:
        raise InputError("empty graph file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "graph":
        raise InputError(f"line {lineno}: expected 'graph <n>'")
    n = int(parts[1])
    edges = []
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) != 3 or parts[0] != "e":
            raise InputError(f"line {lineno}: expected 'e <u> <v>'")
        u, v = int(parts[1]), int(parts[2])
        if not u < v:
            raise InputError(f"line {lineno}: edges must satisfy u < v")
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def write_graph(g: Graph) -> str:
    lines = [f"graph {g.n}"]
    lines += [f"e {u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str) -> Hypergraph:
    lines = list(_meaningful_lines(text))
    if not lines:
        raise InputError("empty hypergraph file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "hypergraph":
        raise InputError(f"line {lineno}: expected 'hypergraph <n>'")
    n = int(parts[1])
    edges = []
    for lineno, line in lines[1:]:
        parts = line.split()
        if not parts or parts[0] != "E":
            raise InputError(f"line {lineno}: expected 'E <v1> ... <vk>'")
        verts = [int(p) for p in parts[1:]]
        if any(a >= b for a, b in zip(verts, verts[1:])):
            raise InputError(f"line {lineno}: vertices must be strictly increasing")
        edges.append(mask_of(verts))
    return Hypergraph(n, tuple(edges))


def write_hypergraph(h: Hypergraph) -> str:
    lines = [f"hypergraph {h.n}"]
    for e in h.edges:
        lines.append("E " + " ".join(str(v) for v in bits_of(e)))
    return "\n".join(lines) + "\n"


def parse_number(token: str, exact: bool):
    """A decimal or an ``a/b`` rational; ``exact`` selects the target type."""
    if "/" in token:
        num, den = token.split("/", 1)
        value = Fraction(int(num), int(den))
        return value if exact else float(value)
    if exact:
        return Fraction(token)
    return float(token)


def format_number(value) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return repr(value)


def parse_measure(text: str, host: Hypergraph, exact: bool = True) -> Measure:
    zero = Fraction(0) if exact else 0.0
    weights = [zero] * len(host.edges)
    for lineno, line in _meaningful_lines(text):
        parts = line.split()
        if len(parts) != 3 or parts[0] != "w":
            raise InputError(f"line {lineno}: expected 'w <edge-index> <value>'")
        idx = int(parts[1])
        if not 0 <= idx < len(host.edges):
            raise InputError(f"line {lineno}: edge index {idx} out of range")
        weights[idx] = parse_number(parts[2], exact)
    return Measure(host, tuple(weights), exact)


def write_measure(m: Measure) -> str:
    lines = []
    for idx, w in enumerate(m.weights):
        if w > 0:
            lines.append(f"w {idx} {format_number(w)}")
    return "\n".join(lines) + ("\n" if lines else "")
