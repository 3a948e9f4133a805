"""Deciding the (p, R) edge-distribution property with certificates.

A hypergraph is (p, R)-Janson when some nonnegative edge measure nu has
lambda_p(nu) < mass(nu)^2 / R.  The ratio mass^2 / lambda_p is invariant
under scaling, so the decision reduces to minimising lambda_p over the
mass-one simplex.  lambda_p is a positive-semidefinite quadratic form
(a sum of squares of linear functionals), hence the problem is convex:

    minimise  x^T Q x   over  x >= 0, sum x = 1,

with Q[i][j] = (1 + 1/p)^c - 1 - c/p for c = |E_i & E_j|.  The threshold
R* = 1 / min equals the supremum of R for which the hypergraph is
(p, R)-Janson; membership is strict, so R* itself is always a NO.

Two solvers are provided.  The iterative one is conditional gradient
(Frank-Wolfe) with away steps and exact line search; its gap certificate
bounds the optimum from below by (primal - gap).  For small edge counts and
rational p, an exact rational KKT enumeration over support patterns decides
boundary cases with no tolerance at all.

Special cases settled by hand: an edge of size <= 1 (including the empty
edge) absorbs all mass with lambda = 0, so R* is infinite; a hypergraph with
no edges admits no positive-mass measure, so R* = 0 and only the R = 0
convention applies.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetError, InputError, UndecidedError
from .hypercore import Hypergraph, bits_of, popcount, restrict_edges
from .measures import (
    Measure,
    add,
    degree,
    lambda_p,
    lambda_p_pairwise,
    mass,
    scale,
)
from .prng import SplitMix64

KKT_EDGE_CAP = 10  # exact path enumerates 2^m support patterns
DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 10**6

INF = float("inf")


class HypothesisViolation(InputError):
    """The every-large-subset Janson hypothesis failed; carries the subset."""

    def __init__(self, message, w_mask=None, verdict=None):
        super().__init__(message)
        self.w_mask = w_mask
        self.verdict = verdict


@dataclass(frozen=True)
class MinLambdaResult:
    value: object  # Fraction (exact) or float
    witness: Measure  # mass-one measure attaining / approaching the value
    gap: object  # 0 on the exact path
    iterations: int
    exact: bool

    def lower_bound(self):
        return self.value - self.gap


@dataclass(frozen=True)
class JansonVerdict:
    answer: str  # "YES" | "NO" | "UNDECIDED"
    r_star: object  # Fraction, float, or math.inf
    witness: Optional[Measure]
    dual_bound: object  # certified lower bound on the simplex minimum
    gap: object
    iterations: int
    tol: float
    exact: bool
    note: str = ""


def overlap_matrix(h: Hypergraph, p, exact: bool):
    """Q with lambda_p(x) = x^T Q x for weights x on h.edges."""
    m = len(h.edges)
    if exact:
        base = 1 + Fraction(1) / Fraction(p)
        inv = Fraction(1) / Fraction(p)
        rows = []
        for i in range(m):
            row = []
            for j in range(m):
                c = popcount(h.edges[i] & h.edges[j])
                row.append(base**c - 1 - c * inv)
            rows.append(row)
        return rows
    base = 1.0 + 1.0 / p
    q = np.empty((m, m))
    for i in range(m):
        for j in range(i, m):
            c = popcount(h.edges[i] & h.edges[j])
            q[i, j] = q[j, i] = base**c - 1.0 - c / p
    return q


def _solve_rational(matrix, rhs):
    """One solution of matrix @ x = rhs over the rationals, free variables
    pinned to zero; None when inconsistent."""
    m = len(matrix)
    n = len(matrix[0])
    a = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    pivots = []
    row = 0
    for col in range(n):
        pivot = next((r for r in range(row, m) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[row], a[pivot] = a[pivot], a[row]
        pv = a[row][col]
        a[row] = [v / pv for v in a[row]]
        for r in range(m):
            if r != row and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [v - factor * w for v, w in zip(a[r], a[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if a[r][n] != 0:
            return None
    x = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        x[col] = a[r][n]
    return x


def min_lambda_exact(h: Hypergraph, p) -> MinLambdaResult:
    """Exact simplex minimum by enumerating KKT support patterns.

    On each face the stationary system  2 Q_SS x = lam * 1, sum x = 1  pins
    the face value at lam / 2 (lam is unique per face even when x is not);
    the global minimum is realised on the exact support of a minimiser, where
    a strictly positive stationary solution exists.  Singular faces whose
    particular solution carries a negative sign are skipped: their sign-clean
    stationary points, if any, are rediscovered on the sub-faces, which are
    all enumerated.
    """
    m = len(h.edges)
    if m == 0:
        raise InputError("minimum needs at least one edge")
    if m > KKT_EDGE_CAP:
        raise BudgetError(f"exact path capped at {KKT_EDGE_CAP} edges, got {m}")
    q = overlap_matrix(h, p, exact=True)
    best_value = None
    best_x = None
    supports = sorted(range(1, 1 << m), key=lambda s: (popcount(s), s))
    for support in supports:
        idx = bits_of(support)
        k = len(idx)
        mat = [[2 * q[i][j] for j in idx] + [Fraction(-1)] for i in idx]
        mat.append([Fraction(1)] * k + [Fraction(0)])
        rhs = [Fraction(0)] * k + [Fraction(1)]
        sol = _solve_rational(mat, rhs)
        if sol is None:
            continue
        xs = sol[:k]
        if any(v < 0 for v in xs):
            continue
        value = sum(xs[a] * q[i][j] * xs[b] for a, i in enumerate(idx) for b, j in enumerate(idx))
        if best_value is None or value < best_value:
            best_value = value
            full = [Fraction(0)] * m
            for a, i in enumerate(idx):
                full[i] = xs[a]
            best_x = full
    witness = Measure(h, tuple(best_x), exact=True)
    return MinLambdaResult(best_value, witness, Fraction(0), 1 << m, exact=True)


def min_lambda_fw(
    h: Hypergraph,
    p: float,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> MinLambdaResult:
    """Conditional gradient with away steps and exact line search.

    Deterministic: fixed uniform start, fixed step rule, ties broken by
    numpy argmin/argmax (lowest index).  Terminates when the Frank-Wolfe
    gap certifies the optimum within relative ``tol``; by convexity the
    simplex minimum is at least (primal - gap).
    """
    m = len(h.edges)
    if m == 0:
        raise InputError("minimum needs at least one edge")
    q = overlap_matrix(h, float(p), exact=False)
    x = np.full(m, 1.0 / m)
    qx = q @ x
    gap = 0.0
    iterations = 0
    for iterations in range(1, max_iter + 1):
        grad = 2.0 * qx
        i_fw = int(np.argmin(grad))
        xg = float(x @ grad)
        gap = max(xg - float(grad[i_fw]), 0.0)  # roundoff must not inflate the bound
        value = float(x @ qx)
        if gap <= tol * max(abs(value), 1e-300):
            break
        active = np.flatnonzero(x > 0)
        i_aw = int(active[np.argmax(grad[active])])
        away_gap = float(grad[i_aw]) - xg
        if gap >= away_gap:
            d = -x.copy()
            d[i_fw] += 1.0
            gamma_max = 1.0
        else:
            d = x.copy()
            d[i_aw] -= 1.0
            denom = 1.0 - x[i_aw]
            gamma_max = x[i_aw] / denom if denom > 1e-15 else 1.0
        qd = q @ d
        curvature = 2.0 * float(d @ qd)
        slope = float(grad @ d)
        if curvature > 0:
            gamma = min(gamma_max, max(0.0, -slope / curvature))
        else:
            gamma = gamma_max
        if gamma == 0.0:
            break
        x = x + gamma * d
        np.clip(x, 0.0, None, out=x)
        x /= x.sum()
        qx = q @ x
    value = float(x @ qx)
    witness = Measure(h, tuple(float(v) for v in x), exact=False)
    return MinLambdaResult(value, witness, gap, iterations, exact=False)


def dual_lower_bound(witness: Measure, p: float) -> float:
    """Certified lower bound on the simplex minimum, recomputed from a
    feasible point without the solver: by convexity the minimum is at least
    f(x) - (x . grad - min_i grad_i).  Pure Python, so it double-checks the
    numpy path independently."""
    h = witness.host
    x = [float(w) for w in witness.weights]
    m = len(x)
    grad = [0.0] * m
    for i in range(m):
        acc = 0.0
        for j in range(m):
            if x[j]:
                c = popcount(h.edges[i] & h.edges[j])
                acc += _pair_coef_float(c, float(p)) * x[j]
        grad[i] = 2.0 * acc
    value = 0.5 * sum(g * xi for g, xi in zip(grad, x))
    fw_gap = max(sum(g * xi for g, xi in zip(grad, x)) - min(grad), 0.0)
    return value - fw_gap


def _pair_coef_float(c: int, p: float) -> float:
    return (1.0 + 1.0 / p) ** c - 1.0 - c / p


_cache: dict = {}


def clear_cache():
    _cache.clear()


def _p_key(p):
    if isinstance(p, (Fraction, int)):
        f = Fraction(p)
        return ("Q", f.numerator, f.denominator)
    return ("f", float(p))


def min_lambda(
    h: Hypergraph,
    p,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    method: str = "auto",
) -> MinLambdaResult:
    """Minimise lambda_p over mass-one measures on h; see the module
    docstring for the two back ends.  Results are memoised on the canonical
    edge order."""
    if not h.edges:
        raise InputError("minimum needs at least one edge")
    if not 0 < p <= 1:
        raise InputError("p must lie in (0, 1]")
    trivial = next((i for i, e in enumerate(h.edges) if popcount(e) <= 1), None)
    if trivial is not None:
        exact = isinstance(p, (Fraction, int))
        witness = Measure.unit_on(h, trivial, exact=exact)
        zero = Fraction(0) if exact else 0.0
        return MinLambdaResult(zero, witness, zero, 0, exact=exact)

    rational = isinstance(p, (Fraction, int))
    if method == "auto":
        method = "exact" if rational and len(h.edges) <= KKT_EDGE_CAP else "fw"
    if method == "exact" and not rational:
        raise InputError("exact minimisation needs a rational p")

    key = (h.canonical_key(), _p_key(p), method, tol if method == "fw" else None)
    hit = _cache.get(key)
    if hit is not None:
        result, edge_order = hit
    else:
        canon = Hypergraph(h.n, tuple(sorted(h.edges)))
        if method == "exact":
            result = min_lambda_exact(canon, p)
        elif method == "fw":
            result = min_lambda_fw(canon, float(p), tol, max_iter)
        else:
            raise InputError(f"unknown method {method!r}")
        edge_order = canon.edges
        _cache[key] = (result, edge_order)
    if h.edges == edge_order:
        return MinLambdaResult(result.value, Measure(h, result.witness.weights, result.exact), result.gap, result.iterations, result.exact)
    weight_of = dict(zip(edge_order, result.witness.weights))
    ws = tuple(weight_of[e] for e in h.edges)
    return MinLambdaResult(
        result.value, Measure(h, ws, result.exact), result.gap, result.iterations, result.exact
    )


def janson_threshold(h: Hypergraph, p, tol: float = DEFAULT_TOL):
    """R* = 1 / (simplex minimum of lambda_p); 0 for an edgeless hypergraph,
    infinity when an edge of size <= 1 lets lambda vanish at positive mass."""
    if not h.edges:
        return Fraction(0) if isinstance(p, (Fraction, int)) else 0.0
    if any(popcount(e) <= 1 for e in h.edges):
        return INF
    result = min_lambda(h, p, tol)
    if result.exact:
        return Fraction(1) / result.value
    return 1.0 / result.value


def is_janson(h: Hypergraph, p, r, tol: float = DEFAULT_TOL) -> JansonVerdict:
    """Three-valued verdict for the strict inequality lambda < mass^2 / R.

    R = 0 is YES by convention.  On the exact path boundary cases are decided
    outright; on the floating path YES requires the re-verified witness to
    clear the bar with relative margin >= tol, NO requires the dual lower
    bound to meet it, and anything between is an honest UNDECIDED.
    """
    if r < 0:
        raise InputError("R must be nonnegative")
    if r == 0:
        return JansonVerdict(
            "YES", _trivial_r_star(h, p, tol), None, None, 0, 0, tol, True,
            note="R = 0: every hypergraph qualifies by convention",
        )
    if not h.edges:
        zero = Fraction(0) if isinstance(p, (Fraction, int)) else 0.0
        return JansonVerdict(
            "NO", zero, None, INF, 0, 0, tol, True,
            note="no edges: no measure has positive mass",
        )
    if any(popcount(e) <= 1 for e in h.edges):
        idx = next(i for i, e in enumerate(h.edges) if popcount(e) <= 1)
        exact = isinstance(p, (Fraction, int)) and isinstance(r, (Fraction, int))
        witness = Measure.unit_on(h, idx, exact=exact)
        return JansonVerdict(
            "YES", INF, witness, None, 0, 0, tol, exact,
            note="unit mass on a size-<=1 edge has zero overlap",
        )

    result = min_lambda(h, p, tol)
    if result.exact:
        r_star = Fraction(1) / result.value
        # independent witness recomputation; equals the reported minimum
        checked = lambda_p_pairwise(result.witness, Fraction(p))
        if Fraction(r) * checked < 1:
            return JansonVerdict("YES", r_star, result.witness, result.value, 0, result.iterations, tol, True)
        return JansonVerdict("NO", r_star, None, result.value, 0, result.iterations, tol, True)

    value = result.value
    lower = result.lower_bound()
    r_star = 1.0 / value
    rf = float(r)
    if rf * value < 1.0:
        checked = lambda_p_pairwise(result.witness, float(p))
        if rf * checked <= 1.0 - tol:
            return JansonVerdict(
                "YES", r_star, result.witness, lower, result.gap, result.iterations, tol, False
            )
    if rf * lower >= 1.0:
        # re-derive the bound from the witness, independently of the solver
        rechecked = dual_lower_bound(result.witness, float(p))
        if rf * rechecked >= 1.0:
            return JansonVerdict(
                "NO", r_star, None, rechecked, result.gap, result.iterations, tol, False
            )
    return JansonVerdict(
        "UNDECIDED", r_star, result.witness, lower, result.gap, result.iterations, tol, False,
        note="optimum sits within tolerance of the strict boundary",
    )


def _trivial_r_star(h, p, tol):
    if not h.edges:
        return Fraction(0) if isinstance(p, (Fraction, int)) else 0.0
    if any(popcount(e) <= 1 for e in h.edges):
        return INF
    result = min_lambda(h, p, tol)
    return (Fraction(1) / result.value) if result.exact else 1.0 / result.value


def require_verdict(h: Hypergraph, p, r, tol: float = DEFAULT_TOL, context: str = "") -> bool:
    """True/False for YES/NO; UNDECIDED aborts with the offending instance."""
    verdict = is_janson(h, p, r, tol)
    if verdict.answer == "UNDECIDED":
        raise UndecidedError(
            f"Janson query undecided{': ' + context if context else ''}",
            detail={"edges": h.edges, "n": h.n, "p": p, "R": r, "gap": verdict.gap},
        )
    return verdict.answer == "YES"


# ---------------------------------------------------------------------------
# Bounded-degree witnesses


def _witness_mass_one(h: Hypergraph, p, r, tol, context) -> Measure:
    verdict = is_janson(h, p, r, tol)
    if verdict.answer != "YES":
        raise HypothesisViolation(
            f"{context}: expected a YES verdict, got {verdict.answer}",
            verdict=verdict,
        )
    return verdict.witness


def bounded_degree_witness(
    h: Hypergraph,
    p,
    r,
    beta,
    tol: float = DEFAULT_TOL,
    max_rounds: int = 200,
    precondition_budget: int = 20000,
    seed: int = 0,
):
    """Witness with mass sqrt(R), lambda below mass^2 / R, and
    sum_v d(v)^2 <= 2 s^2 mass^2 / (beta v(h)).

    Hypothesis: every induced sub-hypergraph on at least (1 - beta) v(h)
    vertices is (p, R)-Janson.  Checking the minimum size suffices because
    the property only improves under adding vertices; subsets are enumerated
    up to ``precondition_budget`` and sampled beyond it.

    The construction follows the blend-and-restrict scheme: starting from an
    optimal witness, repeatedly solve on the low-degree vertex set
    W = {v : d(v) <= s * mass / (beta v(h))} and blend with step
    tau = min(1, 1/(beta v(h))) / 2 until the degree-square bound holds.
    All arithmetic runs on mass-one measures; the returned measure is the
    final witness scaled to mass sqrt(R).
    """
    s = h.uniformity()
    if s is None:
        raise InputError("bounded-degree witnesses need an s-uniform hypergraph")
    if s <= 1:
        raise InputError("uniformity must be at least 2")
    if not 0 < beta < 1:
        raise InputError("beta must lie in (0, 1)")
    if r <= 0:
        raise InputError("R must be positive")
    nverts = h.n
    w_size = math.ceil((1 - beta) * nverts)

    total = math.comb(nverts, w_size)
    if total <= precondition_budget:
        subsets = itertools.combinations(range(nverts), w_size)
    else:
        rng = SplitMix64(seed)
        subsets = (
            tuple(bits_of(rng.sample_mask(nverts, w_size)))
            for _ in range(precondition_budget)
        )
    for combo in subsets:
        w_mask = 0
        for v in combo:
            w_mask |= 1 << v
        sub = restrict_edges(h, w_mask)
        verdict = is_janson(sub, p, r, tol)
        if verdict.answer != "YES":
            raise HypothesisViolation(
                f"induced sub-hypergraph on {sorted(combo)} is not certified (p, R)-Janson "
                f"(verdict {verdict.answer})",
                w_mask=w_mask,
                verdict=verdict,
            )

    nu = _witness_mass_one(h, p, r, tol, "initial witness").to_float()
    target = 2.0 * s * s / (beta * nverts)  # mass-one form of the bound
    tau = min(1.0, 1.0 / (beta * nverts)) / 2.0
    for _ in range(max_rounds):
        dsq = sum(float(degree(nu, 1 << v)) ** 2 for v in range(nverts))
        if dsq <= target:
            break
        cutoff = s / (beta * nverts)
        w_mask = 0
        for v in range(nverts):
            if float(degree(nu, 1 << v)) <= cutoff:
                w_mask |= 1 << v
        sub = restrict_edges(h, w_mask)
        if not sub.edges:
            raise HypothesisViolation(
                "low-degree vertex set spans no edges", w_mask=w_mask
            )
        nu_prime_sub = _witness_mass_one(sub, p, r, tol, "restricted witness").to_float()
        weight_of = dict(zip(sub.edges, nu_prime_sub.weights))
        nu_prime = Measure(
            h, tuple(weight_of.get(e, 0.0) for e in h.edges), exact=False
        )
        nu = add(scale(nu, 1.0 - tau), scale(nu_prime, tau))
    else:
        raise BudgetError(f"degree bound not reached within {max_rounds} rounds")

    return scale(nu, math.sqrt(float(r)))


# ---------------------------------------------------------------------------
# Witness aggregation


@dataclass(frozen=True)
class AggregationReport:
    total_mass: object
    lambda_total: object
    lambda_parts: tuple
    max_shared: int  # max over L of the number of supports containing L
    bound: object  # max_shared * sum of per-part lambdas
    chain_holds: bool


def aggregate_witnesses(
    family: Sequence[tuple[int, Measure]], host: Hypergraph, p
) -> tuple[Measure, AggregationReport]:
    """Sum per-subset unit-mass witnesses and check the shared-overlap chain
    lambda(sum) <= max_L #{S : L inside S} * sum of lambdas."""
    if not family:
        raise InputError("aggregation needs at least one witness")
    exact = family[0][1].exact
    for s_mask, nu in family:
        if nu.host != host or nu.exact != exact:
            raise InputError("witnesses must share the host and arithmetic mode")
        for e, w in zip(host.edges, nu.weights):
            if w > 0 and e & ~s_mask:
                raise InputError("witness weight outside its subset's edges")
        m = mass(nu)
        if exact and m != 1:
            raise InputError("witnesses must be normalised to mass one")
        if not exact and abs(m - 1.0) > 1e-9:
            raise InputError("witnesses must be normalised to mass one")

    total = Measure.zero(host, exact)
    for _, nu in family:
        total = add(total, nu)

    parts = tuple(lambda_p(nu, p) for _, nu in family)
    lam_total = lambda_p(total, p)

    # max over relevant L (|L| >= 2, positive degree) of #{S : L inside S}
    seen: set[int] = set()
    for e, w in zip(host.edges, total.weights):
        if w > 0:
            for sub in list(_relevant_subsets(e)):
                seen.add(sub)
    max_shared = 0
    for l_mask in seen:
        cnt = sum(1 for s_mask, _ in family if l_mask & ~s_mask == 0)
        max_shared = max(max_shared, cnt)

    bound = max_shared * sum(parts, Fraction(0) if exact else 0.0)
    slack = 0 if exact else 1e-9 * max(1.0, abs(float(bound)))
    report = AggregationReport(
        total_mass=mass(total),
        lambda_total=lam_total,
        lambda_parts=parts,
        max_shared=max_shared,
        bound=bound,
        chain_holds=bool(lam_total <= bound + slack),
    )
    return total, report


def _relevant_subsets(edge_mask: int):
    from .hypercore import submasks

    if popcount(edge_mask) > 20:
        raise BudgetError("aggregation subset scan capped at edge size 20")
    for sub in submasks(edge_mask):
        if popcount(sub) >= 2:
            yield sub
