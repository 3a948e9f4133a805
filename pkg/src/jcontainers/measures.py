"""Edge measures and the overlap functional they feed.

A Measure assigns a nonnegative weight to every edge of a host hypergraph.
Two arithmetic modes travel with the measure and never mix: exact
(fractions.Fraction, used by the container and identity machinery) and
floating (used by the optimiser).  All operations are pure.

The central quantity is the overlap functional

    lambda_p(m) = sum over vertex sets L with |L| >= 2 of  d(L)^2 * p^(-|L|),

where d(L) is the total weight of edges containing L.  Only L inside some
positive-weight edge contribute, so the sum is computed sparsely.  Two
independent algorithms are exposed: subset accumulation (enumerate submasks
of each edge into an accumulator) and a pairwise closed form,

    sum over edge pairs of  w1 * w2 * ((1 + 1/p)^c - 1 - c/p),  c = |E1 & E2|,

which agree because summing p^(-|L|) over the subsets L of an intersection of
size c with |L| >= 2 telescopes out of the binomial theorem.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import BudgetError, CertificateViolation, InputError
from .hypercore import (
    Hypergraph,
    VertexMap,
    bits_of,
    edgewise_include,
    popcount,
    preimage_counts,
    project,
    submasks,
)

SUBSET_EDGE_CAP = 20  # algorithm A enumerates 2^|E| submasks per edge


def _check_probability(p, exact: bool):
    if exact and not isinstance(p, (Fraction, int)):
        raise InputError("exact-mode lambda_p needs a rational p")
    if not 0 < p <= 1:
        raise InputError("p must lie in (0, 1]")


@dataclass(frozen=True)
class Measure:
    """Nonnegative weight per host edge; ``exact`` flags Fraction weights."""

    host: Hypergraph
    weights: tuple
    exact: bool = True

    def __post_init__(self):
        if len(self.weights) != len(self.host.edges):
            raise InputError("weight count must equal edge count")
        for w in self.weights:
            if self.exact and not isinstance(w, (Fraction, int)):
                raise InputError("exact measure weights must be rational")
            if not self.exact and not isinstance(w, float):
                raise InputError("floating measure weights must be floats")
            if w < 0:
                raise InputError("weights must be nonnegative")

    @staticmethod
    def zero(host: Hypergraph, exact: bool = True) -> "Measure":
        fill = Fraction(0) if exact else 0.0
        return Measure(host, (fill,) * len(host.edges), exact)

    @staticmethod
    def uniform(host: Hypergraph, total=1, exact: bool = True) -> "Measure":
        if not host.edges:
            raise InputError("uniform measure needs at least one edge")
        if exact:
            w = Fraction(total, len(host.edges))
        else:
            w = float(total) / len(host.edges)
        return Measure(host, (w,) * len(host.edges), exact)

    @staticmethod
    def unit_on(host: Hypergraph, index: int, exact: bool = True) -> "Measure":
        one = Fraction(1) if exact else 1.0
        zero = Fraction(0) if exact else 0.0
        ws = [zero] * len(host.edges)
        ws[index] = one
        return Measure(host, tuple(ws), exact)

    def support(self) -> list[int]:
        return [i for i, w in enumerate(self.weights) if w > 0]

    def to_float(self) -> "Measure":
        if not self.exact:
            return self
        return Measure(self.host, tuple(float(w) for w in self.weights), exact=False)


def _same_host(a: Measure, b: Measure):
    if a.host != b.host or a.exact != b.exact:
        raise InputError("measures must share host and arithmetic mode")


def mass(m: Measure):
    return sum(m.weights, Fraction(0) if m.exact else 0.0)


def degree(m: Measure, l_mask: int):
    """Total weight of edges containing L."""
    if l_mask & ~((1 << m.host.n) - 1):
        raise InputError("L contains a vertex outside the universe")
    total = Fraction(0) if m.exact else 0.0
    for e, w in zip(m.host.edges, m.weights):
        if l_mask & ~e == 0:
            total += w
    return total


def degree_square_sum(m: Measure):
    """Sum over single vertices u of d({u})^2.  Size-1 sets are excluded from
    lambda_p by definition but this sum appears in the vertex-extension
    identity, so it is exposed separately."""
    total = Fraction(0) if m.exact else 0.0
    for u in range(m.host.n):
        d = degree(m, 1 << u)
        total += d * d
    return total


def lambda_p_subsets(m: Measure, p):
    """Algorithm A: accumulate d(L) for every submask L of a positive edge,
    then sum d(L)^2 p^(-|L|) over |L| >= 2.  Capped at |E| <= 20 per edge."""
    _check_probability(p, m.exact)
    acc: dict[int, object] = {}
    for e, w in zip(m.host.edges, m.weights):
        if w == 0:
            continue
        if popcount(e) > SUBSET_EDGE_CAP:
            raise BudgetError(
                f"edge size {popcount(e)} exceeds subset-accumulation cap {SUBSET_EDGE_CAP}"
            )
        for sub in submasks(e):
            if popcount(sub) >= 2:
                acc[sub] = acc.get(sub, Fraction(0) if m.exact else 0.0) + w
    total = Fraction(0) if m.exact else 0.0
    inv = (Fraction(1) / Fraction(p)) if m.exact else 1.0 / p
    for sub, d in acc.items():
        total += d * d * inv ** popcount(sub)
    return total


def _pair_coefficient(c: int, p, exact: bool):
    # sum over L inside a size-c intersection, |L| >= 2, of p^(-|L|)
    if exact:
        q = 1 + Fraction(1) / Fraction(p)
        return q**c - 1 - Fraction(c) / Fraction(p)
    q = 1.0 + 1.0 / p
    return q**c - 1.0 - c / p


def lambda_p_pairwise(m: Measure, p):
    """Algorithm B: closed form over edge pairs; no edge-size cap."""
    _check_probability(p, m.exact)
    idx = m.support()
    total = Fraction(0) if m.exact else 0.0
    for a in range(len(idx)):
        i = idx[a]
        ei, wi = m.host.edges[i], m.weights[i]
        total += wi * wi * _pair_coefficient(popcount(ei), p, m.exact)
        for b in range(a + 1, len(idx)):
            j = idx[b]
            c = popcount(ei & m.host.edges[j])
            if c >= 2:
                total += 2 * wi * m.weights[j] * _pair_coefficient(c, p, m.exact)
    return total


def lambda_p(m: Measure, p, algorithm: str = "auto"):
    if algorithm == "subsets":
        return lambda_p_subsets(m, p)
    if algorithm == "pairwise":
        return lambda_p_pairwise(m, p)
    if algorithm != "auto":
        raise InputError(f"unknown lambda_p algorithm {algorithm!r}")
    if all(popcount(e) <= SUBSET_EDGE_CAP for e in m.host.edges):
        return lambda_p_subsets(m, p)
    return lambda_p_pairwise(m, p)


def pullback(theta: Measure, h: Hypergraph, pi: VertexMap) -> Measure:
    """Transport a measure on project(h, pi) back to h, splitting each image
    edge's weight equally over its pre-image edges.  Mass is preserved."""
    image = project(h, pi)
    if theta.host != image:
        raise InputError("pullback source must be hosted on project(h, pi)")
    counts = preimage_counts(h, pi)
    weight_of = dict(zip(theta.host.edges, theta.weights))
    ws = []
    for e in h.edges:
        img = pi.apply_mask(e)
        ws.append(weight_of[img] / counts[img])
    return Measure(h, tuple(ws), theta.exact)


def extend_by_vertex(m: Measure, v: int) -> Measure:
    """Transport weights edge-to-edge onto the host with v added everywhere."""
    new_host = edgewise_include(m.host, v)
    # edgewise_include sorts its output; realign weights with the new order
    order = {e | (1 << v): w for e, w in zip(m.host.edges, m.weights)}
    return Measure(new_host, tuple(order[e] for e in new_host.edges), m.exact)


def reweight_restrict(m: Measure, a_mask: int, probs: Sequence | Callable) -> Measure:
    """Weight nu(E) * [E inside A] / P(E), the survival-reweighted restriction
    used by the Monte-Carlo replications.  P(E) = 0 on a surviving
    positive-weight edge is a certificate violation."""
    if callable(probs):
        pvals = [probs(e) for e in m.host.edges]
    else:
        pvals = list(probs)
        if len(pvals) != len(m.host.edges):
            raise InputError("per-edge probabilities must be total on the host")
    ws = []
    zero = Fraction(0) if m.exact else 0.0
    for e, w, pe in zip(m.host.edges, m.weights, pvals):
        if e & ~a_mask:
            ws.append(zero)
            continue
        if w == 0:
            ws.append(zero)
            continue
        if pe == 0:
            raise CertificateViolation(
                f"edge {sorted(bits_of(e))} survives with weight {w} but P(E) = 0"
            )
        ws.append(w / pe)
    return Measure(m.host, tuple(ws), m.exact)


def add(a: Measure, b: Measure) -> Measure:
    _same_host(a, b)
    return Measure(a.host, tuple(x + y for x, y in zip(a.weights, b.weights)), a.exact)


def scale(m: Measure, t) -> Measure:
    if t < 0:
        raise InputError("scale factor must be nonnegative")
    if m.exact:
        t = Fraction(t)
    else:
        t = float(t)
    return Measure(m.host, tuple(w * t for w in m.weights), m.exact)


def restrict_to(m: Measure, sub: Hypergraph) -> Measure:
    """Zero the weights outside a sub-hypergraph (same universe)."""
    if sub.n != m.host.n:
        raise InputError("restriction target must share the universe")
    keep = set(sub.edges)
    zero = Fraction(0) if m.exact else 0.0
    ws = tuple(w if e in keep else zero for e, w in zip(m.host.edges, m.weights))
    return Measure(m.host, ws, m.exact)


def normalized(m: Measure, total=1) -> Measure:
    """Scale to a prescribed mass (the standard witness normalisation)."""
    e = mass(m)
    if e == 0:
        raise InputError("cannot normalise a zero measure")
    return scale(m, (Fraction(total) / e) if m.exact else float(total) / e)
