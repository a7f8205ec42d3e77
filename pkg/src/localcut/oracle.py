"""Brute-force reference implementations, for tests and acceptance only.

Exhaustive enumerations over all vertex subsets, hard-capped at 20
vertices. Subset scans walk a Gray code so each step updates the boundary
count and volumes in O(1) big-int operations.
"""

from __future__ import annotations

from fractions import Fraction

from .augmented import AugmentedGraph
from .errors import ParameterError
from .graphs import Graph, VertexSet

__all__ = ["brute_min_conductance", "brute_min_cut_value", "eval_condition_41"]

_MAX_N = 20


def _check_size(n: int) -> None:
    if n > _MAX_N:
        raise ParameterError(f"brute force is capped at {_MAX_N} vertices, got {n}")


def _gray_flip(i: int) -> int:
    """Index of the bit that flips between Gray codes i-1 and i."""
    return ((i ^ (i >> 1)) ^ ((i - 1) ^ ((i - 1) >> 1))).bit_length() - 1


def brute_min_conductance(
    g: Graph, max_vol: int | None = None
) -> tuple[VertexSet, Fraction]:
    """Exhaustive conductance minimum over all proper nonempty subsets.

    ``max_vol`` restricts candidates to sets of at most that volume.
    Returns the first minimizer in Gray-code order.
    """
    n = g.n
    _check_size(n)
    if n < 2:
        raise ParameterError("need at least two vertices")
    deg = [g.degree(u) for u in range(n)]
    mult = [dict(g.neighbor_multiplicities(u)) for u in range(n)]
    total = g.total_volume
    best: Fraction | None = None
    best_mask = 0
    mask = 0
    vol = 0
    cross = 0
    # inside[w] = edges from w into the current member set, with multiplicity,
    # maintained for every vertex so flips cost O(deg)
    inside = [0] * n
    for i in range(1, 1 << n):
        b = _gray_flip(i)
        if (mask >> b) & 1:
            mask &= ~(1 << b)
            vol -= deg[b]
            cross -= deg[b] - 2 * inside[b]
            for w, k in mult[b].items():
                inside[w] -= k
        else:
            mask |= 1 << b
            vol += deg[b]
            cross += deg[b] - 2 * inside[b]
            for w, k in mult[b].items():
                inside[w] += k
        if mask == 0 or mask == (1 << n) - 1:
            continue
        if vol == 0 or vol == total:
            continue
        if max_vol is not None and vol > max_vol:
            continue
        phi = Fraction(cross, min(vol, total - vol))
        if best is None or phi < best:
            best = phi
            best_mask = mask
    if best is None:
        raise ParameterError("no eligible subset (volume cap too small?)")
    members = [u for u in range(n) if (best_mask >> u) & 1]
    return VertexSet(g, members), best


def brute_min_cut_value(ag: AugmentedGraph) -> tuple[VertexSet, Fraction]:
    """Exhaustive minimum of the augmented cut value over all subsets.

    The empty set (value ``vol(A)``) participates, so the result never
    exceeds ``vol(A)``. Returns the first minimizer in Gray-code order.
    """
    g = ag.graph
    n = g.n
    _check_size(n)
    deg = [g.degree(u) for u in range(n)]
    mult = [dict(g.neighbor_multiplicities(u)) for u in range(n)]
    in_seed = [u in ag.seed for u in range(n)]
    sink = [0 if in_seed[u] else ag.sink_cap(u) for u in range(n)]
    ce = ag.edge_cap_unit
    scale = ag.scale
    source_scaled = [ag.source_cap(u) if in_seed[u] else 0 for u in range(n)]
    mask = 0
    cross = 0
    vol_a_out = sum(source_scaled)  # scaled volume of A - S
    sink_in = 0  # scaled sink capacity of S - A
    inside = [0] * n
    best_val = vol_a_out  # S = empty
    best_mask = 0
    for i in range(1, 1 << n):
        b = _gray_flip(i)
        if (mask >> b) & 1:
            mask &= ~(1 << b)
            cross -= deg[b] - 2 * inside[b]
            for w, k in mult[b].items():
                inside[w] -= k
            if in_seed[b]:
                vol_a_out += source_scaled[b]
            else:
                sink_in -= sink[b]
        else:
            mask |= 1 << b
            cross += deg[b] - 2 * inside[b]
            for w, k in mult[b].items():
                inside[w] += k
            if in_seed[b]:
                vol_a_out -= source_scaled[b]
            else:
                sink_in += sink[b]
        value = cross * ce + vol_a_out + sink_in
        if value < best_val:
            best_val = value
            best_mask = mask
    members = [u for u in range(n) if (best_mask >> u) & 1]
    return VertexSet(g, members), Fraction(best_val, scale)


def eval_condition_41(
    g: Graph,
    a: VertexSet,
    s_star: VertexSet,
    alpha: Fraction,
    eps: Fraction | None,
) -> bool:
    """Exact evaluation of the planted-set inequality.

    True iff ``|E(S*, V-S*)| / vol(S*)`` is strictly below
    ``alpha * (vol(A & S*) - eps * vol(S* - A)) / vol(S*)``. With an
    unbounded sink factor the right side is only finite when ``S*`` stays
    inside the seed set by volume.
    """
    if len(s_star) == 0:
        raise ParameterError("target set must be nonempty")
    cross = 0
    for u in s_star:
        for v in g.adjacent(u):
            if v not in s_star:
                cross += 1
    inter = s_star.intersection(a).volume
    outside = s_star.volume - inter
    if eps is None:
        if outside > 0:
            return False
        return Fraction(cross) < Fraction(alpha) * inter
    return Fraction(cross) < Fraction(alpha) * (inter - Fraction(eps) * outside)
