"""Localized, phase-capped Dinic over the augmented graph.

The solver runs blocking-flow phases while materializing only the seed
set, the saturated set (non-seed vertices whose sink arc filled up), and
their immediate frontier. If a phase ever fails to augment, the flow is an
exact maximum flow and the residual reachability is a minimum cut. If the
phase budget runs out first, the best layer cut of the final residual
distance labels is returned instead; its conductance is below twice the
capacity parameter whenever the budget was the configured one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .augmented import AugmentedGraph, build, overlap_for_sink_factor
from .errors import InvariantViolation
from .flow import DistanceLabels, FlowState, bfs_distances, blocking_flow, check_label_monotone
from .graphs import Graph, VertexSet

__all__ = [
    "SaturatedSet",
    "LocalGraphView",
    "LayerCutResult",
    "LocalFlowResult",
    "local_graph",
    "local_blocking_flow",
    "update_saturated_set",
    "iteration_bound",
    "local_flow",
]


class SaturatedSet:
    """Monotone set of non-seed vertices whose sink arcs are saturated."""

    __slots__ = ("ag", "members", "volume", "_unclamped_volume")

    def __init__(self, ag: AugmentedGraph):
        self.ag = ag
        self.members: set[int] = set()
        self.volume = 0
        self._unclamped_volume = 0

    def add(self, v: int) -> None:
        if v in self.ag.seed:
            raise InvariantViolation(f"seed vertex {v} cannot enter the saturated set")
        if v not in self.members:
            self.members.add(v)
            deg = self.ag.graph.degree(v)
            self.volume += deg
            eps = self.ag.eps
            if eps is not None and eps * deg <= self.ag.seed.volume:
                self._unclamped_volume += deg

    def check_volume_bound(self) -> None:
        """Saturated volume can never exceed vol(A)/eps.

        Each member absorbed ``eps * deg`` units, and the total flow is at
        most ``vol(A)``. The arithmetic covers members with unclamped sink
        capacity; a clamped sink (capacity ``vol(A)``) can only fill at the
        very moment the flow completes, so it is outside the bound.
        """
        eps = self.ag.eps
        if eps is None:
            return
        if self._unclamped_volume * eps.numerator > self.ag.seed.volume * eps.denominator:
            raise InvariantViolation(
                f"saturated volume {self._unclamped_volume} exceeds vol(A)/eps "
                f"= {Fraction(self.ag.seed.volume) / eps}"
            )

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class LocalGraphView:
    """Vertex and arc whitelist the localized solvers are confined to.

    Holds the source, the sink, the seed set, the saturated set, and the
    external neighbors of their union; allowed arcs are source arcs into
    the seed, sink arcs out of saturated/frontier vertices, and every edge
    incident to a seed or saturated vertex.
    """

    ag: AugmentedGraph
    core: frozenset[int]
    frontier: frozenset[int]

    @property
    def vertices(self) -> frozenset[int]:
        return self.core | self.frontier | {self.ag.source_id, self.ag.sink_id}

    def allows_pair(self, u: int, v: int) -> bool:
        ag = self.ag
        if u > v:
            u, v = v, u
        if v == ag.sink_id:
            return u in self.frontier or (u in self.core and u not in ag.seed)
        if v == ag.source_id:
            return u in ag.seed
        if u == ag.source_id:
            return v in ag.seed
        return u in self.core or v in self.core


def local_graph(ag: AugmentedGraph, bs: SaturatedSet) -> LocalGraphView:
    """The subgraph the flow computation may touch, given saturated set ``bs``."""
    core = set(ag.seed)
    core.update(bs.members)
    frontier: set[int] = set()
    g = ag.graph
    for u in core:
        for v in g.adjacent(u):
            if v not in core:
                frontier.add(v)
    return LocalGraphView(ag, frozenset(core), frozenset(frontier))


def local_blocking_flow(
    fs: FlowState, bs: SaturatedSet, labels: DistanceLabels | None = None
) -> tuple[int, bool]:
    """One blocking-flow phase confined to the local view.

    The flow state only materializes arcs incident to opened vertices, and
    the solvers open exactly the seed plus saturated set, so the shared
    blocking-flow core already traverses nothing outside the local view of
    ``bs``. Fresh unit labels are computed when not supplied.
    """
    if fs.opened != set(fs.ag.seed) | bs.members:
        raise InvariantViolation("flow state opened set disagrees with saturated set")
    if labels is None:
        labels = bfs_distances(fs)
    return blocking_flow(fs, labels)


def update_saturated_set(fs: FlowState, bs: SaturatedSet) -> list[int]:
    """Move frontier vertices whose sink arc just filled into the saturated set.

    Opens each new member so its edges join the local view. Returns the
    newly added vertices (sorted). Raises ``InvariantViolation`` if the
    saturated volume bound breaks, which would indicate a flow bug.
    """
    fresh = sorted(v for v in set(fs.newly_saturated) if v not in bs.members)
    fs.newly_saturated.clear()
    for v in fresh:
        bs.add(v)
        fs.open_vertex(v)
    bs.check_volume_bound()
    return fresh


def iteration_bound(alpha: Fraction, vol_a: int, sigma: Fraction) -> int:
    """Phase budget ``ceil((5/alpha) * ln(3 vol(A) / sigma))``."""
    ratio = 3 * Fraction(vol_a) / Fraction(sigma)
    return math.ceil(float(5 / Fraction(alpha)) * math.log(float(ratio)))


@dataclass(frozen=True)
class LayerCutResult:
    """Best prefix-of-layers cut of the final residual distance labels."""

    layer_index: int
    cut: VertexSet
    phi: Fraction


@dataclass
class LocalFlowStats:
    """Instrumentation counters exposed for the locality contract."""

    phases: int = 0
    touched_volume: int = 0
    opened_vertices: int = 0
    arcs: int = 0
    sink_distance_trace: list[int] = field(default_factory=list)
    phase_records: list = field(default_factory=list)
    lam: int = 0


@dataclass
class LocalFlowResult:
    """Outcome of one localized flow run at fixed ``(alpha, eps)``."""

    flow: FlowState
    cut: VertexSet
    exact: bool
    full_flow: bool
    stats: LocalFlowStats
    saturated: SaturatedSet
    layer_cut: LayerCutResult | None = None

    @property
    def value(self) -> Fraction:
        return self.flow.flow_value


def _check_layer_containment(
    fs: FlowState, bs: SaturatedSet, labels: DistanceLabels
) -> None:
    """Layers below the sink sit inside the core; the last one may touch the frontier."""
    dist = labels.dist
    ag = fs.ag
    dt = dist.get(ag.sink_id)
    if dt is None:
        return
    if dt < 3:
        raise InvariantViolation(f"sink distance {dt} below 3")
    n = ag.graph.n
    seed = ag.seed
    opened = fs.opened
    for v, d in dist.items():
        if v >= n or d >= dt:
            continue
        if d <= dt - 2:
            if v not in seed and v not in bs.members:
                raise InvariantViolation(
                    f"vertex {v} at distance {d} outside seed and saturated set"
                )
        else:
            # frontier membership: adjacent to an opened vertex
            if v not in opened and v not in fs.arcs_of:
                raise InvariantViolation(f"frontier vertex {v} has no materialized arcs")


def _best_layer_cut(
    fs: FlowState, bs: SaturatedSet, labels: DistanceLabels, validate: bool
) -> LayerCutResult:
    """Scan prefix unions of layers 1..d(t)-2 for the lowest conductance."""
    ag = fs.ag
    g = ag.graph
    dt = labels.dist[ag.sink_id]
    layers = labels.layers(fs)
    total = g.total_volume
    members: set[int] = set()
    vol = 0
    cross = 0
    best: tuple[Fraction, int] | None = None
    best_members: list[int] = []
    prefix: list[int] = []
    for j in range(1, dt - 1):
        for v in layers.get(j, ()):
            if validate and v not in ag.seed and v not in bs.members:
                raise InvariantViolation(f"layer-cut vertex {v} escapes the core")
            internal = 0
            for w in g.adjacent(v):
                if w in members:
                    internal += 1
            cross += g.degree(v) - 2 * internal
            vol += g.degree(v)
            members.add(v)
            prefix.append(v)
        if not members or vol >= total:
            continue
        phi = Fraction(cross, min(vol, total - vol))
        if best is None or phi < best[0]:
            best = (phi, j)
            best_members = list(prefix)
    if best is None:
        raise InvariantViolation("no nonempty layer cut available")
    return LayerCutResult(best[1], VertexSet(g, best_members), best[0])


def local_flow(
    g: Graph,
    a: VertexSet,
    alpha: Fraction,
    eps: Fraction | None,
    *,
    validate: bool = True,
    max_phases: int | None = None,
    ag: AugmentedGraph | None = None,
) -> LocalFlowResult:
    """Localized phase-capped Dinic on the augmented graph of ``(a, alpha, eps)``.

    Returns an exact maximum flow and minimum cut when a phase fails to
    augment within the budget; ``full_flow`` marks the case where the flow
    value reaches ``vol(A)`` and the cut is empty. Otherwise the result is
    approximate and ``cut`` is the best layer cut (smallest layer index
    among conductance minimizers).

    ``max_phases`` overrides the phase budget; it exists for tests that
    need to force the approximate branch and voids the layer-cut guarantee.
    """
    if ag is None:
        ag = build(g, a, alpha, eps)
    sigma = overlap_for_sink_factor(ag.eps)
    budget = iteration_bound(ag.alpha, a.volume, sigma) if max_phases is None else max_phases
    fs = FlowState(ag)
    bs = SaturatedSet(ag)
    stats = LocalFlowStats()
    t = ag.sink_id
    prev: DistanceLabels | None = None
    labels = bfs_distances(fs)
    exact = False
    for _ in range(budget):
        if validate:
            _check_layer_containment(fs, bs, labels)
            if prev is not None:
                check_label_monotone(prev, labels, t, exact_zone_only=True)
                dt_prev = prev.dist.get(t)
                dt_cur = labels.dist.get(t)
                if dt_cur is not None and dt_prev is not None and dt_cur < dt_prev + 1:
                    raise InvariantViolation("sink distance failed to grow across a phase")
        if t not in labels.dist:
            exact = True
            break
        stats.sink_distance_trace.append(labels.dist[t])
        pushed, _ = local_blocking_flow(fs, bs, labels)
        if pushed == 0:
            raise InvariantViolation("reachable sink but blocking flow pushed nothing")
        stats.phases += 1
        update_saturated_set(fs, bs)
        if validate:
            fs.check_conservation()
        prev = labels
        labels = bfs_distances(fs)
    else:
        # budget exhausted; the last recomputed labels decide the outcome
        if t not in labels.dist:
            exact = True
    if validate:
        _check_layer_containment(fs, bs, labels)
    stats.touched_volume = fs.touched_volume
    stats.opened_vertices = len(fs.opened)
    stats.arcs = len(fs.arc_to)
    if exact:
        if fs.value > ag.source_total:
            raise InvariantViolation("flow value exceeds total source capacity")
        full = fs.value == ag.source_total
        n = g.n
        cut = VertexSet(g, (v for v in labels.dist if v < n))
        if full and len(cut) != 0:
            raise InvariantViolation("full-value flow must leave the source isolated")
        return LocalFlowResult(fs, cut, True, full, stats, bs)
    layer = _best_layer_cut(fs, bs, labels, validate)
    return LocalFlowResult(fs, layer.cut, False, False, stats, bs, layer_cut=layer)
