"""Binary search over the capacity parameter, and overlap-parameterized entry points.

A probe at ``alpha`` either routes a full-value flow (no nearby cut beats
``alpha``; search higher) or produces a cut (search lower). Probes use
exact dyadic midpoints, so capacity scales stay small. The search keeps the
best cut seen and finishes with a run at the surviving upper endpoint.

When even ``alpha = 1`` routes a full-value flow there is no improvement
to report; that outcome is returned as a distinct non-error result whose
certificate is the routing itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .augmented import build, epsilon_sigma, min_feasible_sigma
from .errors import InvariantViolation, ParameterError
from .exact_flow import local_flow_exact
from .graphs import Graph, VertexSet, conductance
from .local_flow import LocalFlowResult, local_flow
from .seeding import ApprConfig, appr_push, sweep_cut

__all__ = ["ImproveResult", "local_improve", "local_improve_overlap", "pipeline_nibble_improve"]

_MAX_PROBES = 300


@dataclass
class ImproveResult:
    """Outcome of one improvement run.

    ``improved`` distinguishes a genuine cut from the no-improvement
    outcome, where ``cut`` is empty, ``phi`` is ``None``, and the final
    full-value flow state is kept as the routing certificate.
    """

    cut: VertexSet
    phi: Fraction | None
    improved: bool
    solver: str
    alpha_trace: list[tuple[Fraction, str]]
    cut_alpha: Fraction | None
    cut_kind: str | None
    certificate_flow: LocalFlowResult | None
    eps: Fraction | None
    touched_volume: int = 0
    phases: int = 0

    @property
    def volume(self) -> int:
        return self.cut.volume


def _solve(g, a, alpha, eps, solver, validate):
    if solver == "approx":
        return local_flow(g, a, alpha, eps, validate=validate)
    return local_flow_exact(g, a, alpha, eps, validate=validate)


def local_improve(
    g: Graph,
    a: VertexSet,
    eps_sigma: Fraction | None,
    eps: Fraction = Fraction(1, 5),
    solver: str = "approx",
    *,
    validate: bool = True,
) -> ImproveResult:
    """Minimize the capacity parameter by binary search and return the best cut.

    ``eps`` is the relative stopping width of the search. With the
    ``approx`` solver the output conductance is below ``2 (1 + eps)`` times
    the smallest parameter at which a well-overlapping low-conductance set
    exists; the ``exact`` solver drops the factor 2.
    """
    if solver not in ("approx", "exact"):
        raise ParameterError(f"solver must be 'approx' or 'exact', got {solver!r}")
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ParameterError(f"eps must be in (0, 1], got {eps}")
    build(g, a, Fraction(1), eps_sigma)  # validate instance preconditions up front

    alpha_min = Fraction(0)
    alpha_max = Fraction(1)
    trace: list[tuple[Fraction, str]] = []
    results: dict[Fraction, LocalFlowResult] = {}
    best: tuple[Fraction, int, tuple[int, ...], Fraction] | None = None
    touched = 0
    phases = 0

    def record(alpha: Fraction, res: LocalFlowResult) -> None:
        nonlocal best, touched, phases
        results[alpha] = res
        touched = max(touched, res.stats.touched_volume)
        phases += res.stats.phases
        if not res.full_flow:
            phi = conductance(g, res.cut)
            key = (phi, res.cut.volume, res.cut.ids, alpha)
            if best is None or key < best:
                best = key

    probes = 0
    while alpha_max - alpha_min > eps * alpha_min:
        probes += 1
        if probes > _MAX_PROBES:
            raise InvariantViolation("binary search failed to converge")
        alpha = (alpha_min + alpha_max) / 2
        res = _solve(g, a, alpha, eps_sigma, solver, validate)
        record(alpha, res)
        if res.full_flow:
            trace.append((alpha, "full-flow"))
            alpha_min = alpha
        else:
            trace.append((alpha, "cut-found"))
            alpha_max = alpha
            if best is not None and best[0] == 0:
                break  # a disconnection cut cannot be beaten

    final = results.get(alpha_max)
    if final is None:
        final = _solve(g, a, alpha_max, eps_sigma, solver, validate)
        record(alpha_max, final)
        trace.append((alpha_max, "full-flow" if final.full_flow else "cut-found"))

    if best is None:
        return ImproveResult(
            cut=VertexSet(g, ()),
            phi=None,
            improved=False,
            solver=solver,
            alpha_trace=trace,
            cut_alpha=None,
            cut_kind=None,
            certificate_flow=final,
            eps=eps_sigma,
            touched_volume=touched,
            phases=phases,
        )

    phi, _vol, ids, at_alpha = best
    winner = results[at_alpha]
    kind = "min-cut" if winner.exact else "layer-cut"
    return ImproveResult(
        cut=VertexSet(g, ids),
        phi=phi,
        improved=True,
        solver=solver,
        alpha_trace=trace,
        cut_alpha=at_alpha,
        cut_kind=kind,
        certificate_flow=winner,
        eps=eps_sigma,
        touched_volume=touched,
        phases=phases,
    )


def local_improve_overlap(
    g: Graph,
    a: VertexSet,
    sigma: Fraction,
    solver: str = "approx",
    *,
    eps: Fraction = Fraction(1, 5),
    validate: bool = True,
) -> ImproveResult:
    """Improvement run parameterized by the overlap guarantee ``sigma``.

    Any target set whose volume overlaps ``a`` by at least ``sigma``
    bounds the output: conductance within ``4/overlap`` (approx) or
    ``2/overlap`` (exact) times the target's, with output volume at most
    ``(3/sigma) vol(A)``.
    """
    eps_s = epsilon_sigma(Fraction(sigma), g, a)
    return local_improve(g, a, eps_s, eps=eps, solver=solver, validate=validate)


def pipeline_nibble_improve(
    g: Graph,
    seed_vertex: int,
    sigma: Fraction,
    solver: str = "approx",
    *,
    cfg: ApprConfig | None = None,
    eps: Fraction = Fraction(1, 5),
    validate: bool = True,
) -> ImproveResult:
    """Grow a seed set from one vertex, then improve it.

    The seed expansion is a deterministic push/sweep pass; all conductance
    guarantees come from the improvement stage.
    """
    if not 0 <= seed_vertex < g.n:
        raise ParameterError(f"seed vertex {seed_vertex} out of range")
    scores = appr_push(g, seed_vertex, cfg or ApprConfig())
    a = sweep_cut(g, scores)
    if len(a) == 0 or len(a) == g.n:
        raise ParameterError("seed expansion produced an empty or full set")
    if sigma < min_feasible_sigma(g, a):
        raise ParameterError(
            f"sigma={sigma} infeasible for the expanded seed set; "
            f"sigma must be at least {min_feasible_sigma(g, a)}"
        )
    return local_improve_overlap(g, a, sigma, solver, eps=eps, validate=validate)
