"""Lower bounds on the clearing cost, an exhaustive optimum for tiny domains,
and approximation-ratio reports for the three planners."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import InfeasibleInstance, OracleExhausted
from .grid import Dir, Pixel, PixelDomain
from .sim import Throw, ThrowModel, Tour, simulate
from .voronoi import VoronoiAssignment, voronoi_assignment


@dataclass(frozen=True)
class LowerBounds:
    """Snow-pixel count ``snow`` and rational distance bound ``distance`` of a region."""

    snow: int
    distance: Fraction

    def __post_init__(self) -> None:
        if self.snow < 0 or self.distance < 0:
            raise ValueError("lower bounds are non-negative")

    @property
    def best(self) -> Fraction:
        return max(Fraction(self.snow), self.distance)


def _depths(domain: PixelDomain, depth: Mapping[Pixel, int] | None) -> Mapping[Pixel, int]:
    return domain.depth if depth is None else depth


def _check_region(domain: PixelDomain, region: Iterable[Pixel]) -> list[Pixel]:
    region = list(region)
    outside = [p for p in region if p not in domain]
    if outside:
        raise ValueError(f"region pixels {outside[:3]} are not in the domain")
    return region


def snow_lower_bound(domain: PixelDomain, region: Iterable[Pixel],
                     depth: Mapping[Pixel, int] | None = None) -> int:
    """Number of pixels of ``region`` holding snow; each must be visited."""
    depth = _depths(domain, depth)
    return sum(1 for p in _check_region(domain, region) if depth.get(p, 0) >= 1)


def distance_lower_bound(domain: PixelDomain, region: Iterable[Pixel], D: int,
                         assignment: VoronoiAssignment | None = None,
                         depth: Mapping[Pixel, int] | None = None) -> Fraction:
    """``(1/D)`` times the sum of Voronoi distances of the snowy pixels of ``region``."""
    if D < 1:
        raise ValueError("D must be positive")
    depth = _depths(domain, depth)
    region = [p for p in _check_region(domain, region) if depth.get(p, 0) >= 1]
    if not region:
        return Fraction(0)
    a = voronoi_assignment(domain) if assignment is None else assignment
    return Fraction(sum(a.vdist_of[p] for p in region), D)


def lower_bounds(domain: PixelDomain, D: int,
                 assignment: VoronoiAssignment | None = None) -> LowerBounds:
    """Both bounds for the whole domain minus the garage."""
    region = [p for p in domain.pixels if p != domain.garage]
    return LowerBounds(snow_lower_bound(domain, region),
                       distance_lower_bound(domain, region, D, assignment))


# -- exhaustive optimum ----------------------------------------------------------

@dataclass(frozen=True)
class OracleLimits:
    max_states: int = 5_000_000
    max_cost: int | None = None


def optimal_cost_exhaustive(domain: PixelDomain, model: ThrowModel, D: int,
                            limits: OracleLimits = OracleLimits()) -> int:
    """Minimum number of moves of a closed tour from the garage clearing all snow.

    Breadth-first search over (position, depth map).  The heading is left out
    of the key: every throw is relative to the step that makes it, so the
    heading carried into a state never constrains later moves.  Raises
    :class:`OracleExhausted` when a limit is hit and
    :class:`InfeasibleInstance` when no clearing tour exists.
    """
    if D < 2:
        raise ValueError("D must be at least 2")
    order = sorted(domain.pixels)
    index = {p: i for i, p in enumerate(order)}
    n = len(order)
    # per (pixel, step) the arrival index and, per allowed throw, the target index (-1 = off)
    moves: list[list[tuple[int, list[int]]]] = [[] for _ in range(n)]
    throws = [t for t in Throw if t in model.allowed]
    for i, p in enumerate(order):
        for d in Dir:
            u = p.step(d)
            if u in index:
                targets = sorted({index.get(u.step(t.absolute(d)), -1) for t in throws})
                moves[i].append((index[u], targets))
    start_depth = tuple(domain.depth.get(p, 0) for p in order)
    if any(v > D for v in start_depth):
        raise InfeasibleInstance(f"initial depth exceeds D={D}")
    garage = index[domain.garage]
    start = (garage, start_depth)
    if not any(start_depth):
        return 0
    seen = {start}
    frontier = [start]
    cost = 0
    while frontier:
        if limits.max_cost is not None and cost >= limits.max_cost:
            raise OracleExhausted(f"no tour of cost < {limits.max_cost} found")
        cost += 1
        nxt = []
        for pos, depth in frontier:
            for u, targets in moves[pos]:
                amount = depth[u]
                if not amount:
                    results = [depth]
                else:
                    results = []
                    for t in targets:
                        if t >= 0 and depth[t] + amount > D:
                            continue
                        new = list(depth)
                        new[u] = 0
                        if t >= 0:
                            new[t] += amount
                        results.append(tuple(new))
                for new in results:
                    state = (u, new)
                    if state in seen:
                        continue
                    if u == garage and not any(new):
                        return cost
                    seen.add(state)
                    nxt.append(state)
            if len(seen) > limits.max_states:
                raise OracleExhausted(f"more than {limits.max_states} states explored")
        frontier = nxt
    raise InfeasibleInstance("no clearing tour exists")


# -- ratio reports ---------------------------------------------------------------

def guaranteed_factor(model: ThrowModel, D: int) -> Fraction:
    """Proven approximation factor of the planner for ``model``."""
    if D < 2:
        raise ValueError("D must be at least 2")
    half = D // 2
    if model is ThrowModel.DEFAULT:
        return Fraction(6 if D <= 3 else 8)
    if model is ThrowModel.ADJUSTABLE:
        return 4 + Fraction(3 * D, half)
    return 34 + Fraction(24 * D, half)


@dataclass(frozen=True)
class RatioRow:
    model: str
    D: int
    alg_cost: int
    snow_lb: int
    distance_lb: Fraction
    ratio_vs_max_lb: Fraction | None
    guaranteed_factor: Fraction
    within_guarantee: bool

    def to_dict(self) -> dict:
        row = asdict(self)
        for key in ("distance_lb", "ratio_vs_max_lb", "guaranteed_factor"):
            row[key] = None if row[key] is None else str(row[key])
        return row


def ratio_row(domain: PixelDomain, D: int, model: ThrowModel, tour: Tour,
              bounds: LowerBounds | None = None) -> RatioRow:
    """Ratio of a tour's simulated cost to the larger lower bound, exact."""
    bounds = lower_bounds(domain, D) if bounds is None else bounds
    cost = simulate(domain, tour, model, D).cost
    factor = guaranteed_factor(model, D)
    best = bounds.best
    ratio = Fraction(cost) / best if best else None
    within = cost <= factor * best
    return RatioRow(model.value, D, cost, bounds.snow, bounds.distance, ratio, factor, within)


def _planners() -> dict[ThrowModel, Callable[[PixelDomain, int], Tour]]:
    from .planner_default import plan_default
    from .planner_restricted import plan_adjustable, plan_fixed
    return {ThrowModel.DEFAULT: plan_default, ThrowModel.ADJUSTABLE: plan_adjustable,
            ThrowModel.FIXED: plan_fixed}


def ratio_report(domain: PixelDomain, D: int,
                 models: Iterable[ThrowModel] = tuple(ThrowModel)) -> list[RatioRow]:
    """Plan with each model's planner and report against the lower bounds."""
    planners = _planners()
    bounds = lower_bounds(domain, D)
    return [ratio_row(domain, D, m, planners[m](domain, D), bounds) for m in models]


def report_json(rows: Iterable[RatioRow]) -> str:
    return "\n".join(json.dumps(r.to_dict(), sort_keys=True) for r in rows)


def report_csv(rows: Iterable[RatioRow]) -> str:
    rows = [r.to_dict() for r in rows]
    out = io.StringIO()
    fields = list(RatioRow.__dataclass_fields__)
    writer = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return out.getvalue()
