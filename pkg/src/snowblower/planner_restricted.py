"""Tours for the adjustable-throw and fixed-throw models.

Both planners keep the default-model structure: Voronoi trees are visited
in counterclockwise order and each tree is cleared by repeated passes along
root-anchored lines.  Since snow may not be thrown back onto the pixel just
left, a pass walks out along the line throwing each pixel's snow sideways
onto a *lane* next to it, and the gathered piles are then pushed off the
domain with model-legal pushes (see :mod:`snowblower.pile`).
"""

from __future__ import annotations

from typing import Sequence

from .errors import PlanningError, SimulationError
from .grid import Dir, Pixel, PixelDomain
from .pile import boundary_distance, drive_off, walk, walk_to
from .planner_default import _check, comb_lines, transit_default
from .sim import Runner, Throw, ThrowModel, Tour
from .voronoi import ClearTree, TreeKind, decompose, voronoi_assignment


def _steps(path: Sequence[Pixel]) -> list[Dir]:
    return [Dir.between(a, b) for a, b in zip(path, path[1:])]


def lane_throw(model: ThrowModel, path: Sequence[Pixel]) -> Throw:
    """Sideways throw used on the way out: towards the outer side of any bend."""
    if model is ThrowModel.FIXED:
        return Throw.R
    steps = _steps(path)
    if any(b == a.cw for a, b in zip(steps, steps[1:])):
        return Throw.L
    return Throw.R


def _reach_index(runner: Runner, path: Sequence[Pixel], throw: Throw) -> tuple[int, int]:
    """Farthest index an outward walk may gather up to, and its snowy deposits.

    The walk stops before a pixel whose snow would make the gathered piles
    exceed ``D`` or overflow the pixel it lands on.
    """
    trial = runner.fork()
    original = runner.state.depth
    touched: set[Pixel] = set()
    best = (0, 0)
    snowy_lane = 0
    for i, u in enumerate(path[1:], start=1):
        step = Dir.between(trial.pos, u)
        snowy = trial.snow(u) > 0
        target = u.step(throw.absolute(step))
        try:
            trial.move(step, throw)
        except SimulationError:
            break
        if not snowy:
            continue
        snowy_lane += original.get(target, 0) > 0
        touched.add(target)
        pile = sum(trial.snow(p) for p in touched if trial.snow(p) > original.get(p, 0))
        if pile > runner.D:
            break
        best = (i, snowy_lane)
    return best


def _pass_options(runner: Runner, path: Sequence[Pixel]) -> list[tuple[Throw, int]]:
    throws = [Throw.R] if runner.model is ThrowModel.FIXED else [lane_throw(runner.model, path)]
    if runner.model is ThrowModel.ADJUSTABLE:
        throws.append(Throw.L if throws[0] is Throw.R else Throw.R)
    reach = sorted(((-_reach_index(runner, path, th)[0], _reach_index(runner, path, th)[1], k), th)
                   for k, th in enumerate(throws))
    first = next(i for i, p in enumerate(path) if runner.snow(p))
    options = [(th, -key[0]) for key, th in reach if key[0] < 0]
    options += [(th, first) for key, th in reach if -key[0] > first]
    options.append((throws[0], 0))
    return options


def _gather_and_drive(runner: Runner, path: Sequence[Pixel], throw: Throw, t: int) -> None:
    if t == 0:
        first = next(i for i, p in enumerate(path) if runner.snow(p))
        walk(runner, path[1:first])
        drive_off(runner, path[first])
        return
    deposits = []
    for u in path[1: t + 1]:
        step = Dir.between(runner.pos, u)
        if runner.snow(u):
            deposits.append(u.step(throw.absolute(step)))
        runner.move(step, throw)
    for src in reversed(deposits):
        if runner.snow(src):
            drive_off(runner, src)


def restricted_pass(runner: Runner, path: Sequence[Pixel]) -> int:
    """One outward gather along ``path`` plus the pushes clearing it; returns units removed.

    Lane side and turnaround are tried in order of preference on a fork of
    the runner; the first variant whose pushes all exist is kept.
    """
    before = runner.state.discarded
    walk_to(runner, path[0])
    for throw, t in _pass_options(runner, path):
        trial = runner.fork()
        try:
            _gather_and_drive(trial, path, throw, t)
        except (PlanningError, SimulationError):
            continue
        runner.adopt(trial)
        return runner.state.discarded - before
    raise PlanningError(f"no feasible pass along the line at {path[0]}")


def peel(runner: Runner, tries: int = 8) -> int:
    """Push off one snowy pixel next to the clear region, nearest the boundary first.

    Used when the lanes around a line are still snowy and no pass exists;
    returns the units removed.
    """
    dist = boundary_distance(runner.domain)
    seen = {runner.pos: 0}
    frontier = [runner.pos]
    found: dict[Pixel, int] = {}
    while frontier:
        nxt = []
        for p in frontier:
            for d in Dir:
                q = p.step(d)
                if q in seen or q not in runner.domain:
                    continue
                seen[q] = seen[p] + 1
                if runner.snow(q):
                    found[q] = seen[q]
                else:
                    nxt.append(q)
        frontier = nxt
    before = runner.state.discarded
    for q in sorted(found, key=lambda q: (dist[q], found[q], q))[:tries]:
        trial = runner.fork()
        try:
            drive_off(trial, q)
        except (PlanningError, SimulationError):
            continue
        runner.adopt(trial)
        return runner.state.discarded - before
    raise PlanningError("no snowy pixel next to the clear region can be pushed off")


def drive_off_peeling(runner: Runner, src: Pixel, attempts: int = 64) -> None:
    """Push the snow on ``src`` off, growing the clear region first if needed."""
    for _ in range(attempts):
        if not runner.snow(src):
            return
        trial = runner.fork()
        try:
            drive_off(trial, src)
        except (PlanningError, SimulationError):
            peel(runner)
            continue
        runner.adopt(trial)
        return
    raise PlanningError(f"no route for the snow on {src}")


def clear_line_restricted(runner: Runner, path: Sequence[Pixel]) -> list[int]:
    """Passes until ``path[1:]`` is clear; returns the units removed by each pass.

    When no pass exists the clear region is first grown by :func:`peel`.
    """
    if runner.snow(path[0]):
        raise PlanningError("line root must be clear (J >= 1)")
    passes = []
    while any(runner.snow(p) for p in path[1:]):
        try:
            removed = restricted_pass(runner, path)
        except PlanningError:
            removed = peel(runner)
        if removed <= 0:
            raise PlanningError(f"pass along the line at {path[0]} made no progress")
        passes.append(removed)
    return passes


def clear_line_adjustable(runner: Runner, line: Sequence[Pixel]) -> list[int]:
    """Clear a root-anchored line without backward throws."""
    if runner.model is not ThrowModel.ADJUSTABLE:
        raise PlanningError("clear_line_adjustable needs an adjustable-throw runner")
    if runner.pos != line[0]:
        raise PlanningError("line clearing must start at the root")
    passes = clear_line_restricted(runner, line)
    walk_to(runner, line[0])
    return passes


def tree_lines(tree: ClearTree) -> list[tuple[Pixel, ...]]:
    if tree.kind is TreeKind.LINE:
        return [tree.path]
    return [line for comb in tree.combs for line in comb_lines(comb)]


def _double_base(runner: Runner, line: Sequence[Pixel]) -> None:
    """Clear the pixel to the right of the root so passes can leave through it."""
    if len(line) < 2:
        return
    side = line[0].step(Dir.between(line[0], line[1]).cw)
    if side in runner.domain and runner.snow(side):
        walk_to(runner, line[0])
        drive_off_peeling(runner, side)


def clear_tree_restricted(runner: Runner, tree: ClearTree) -> None:
    lines = [line for line in tree_lines(tree) if len(line) > 1]
    if runner.model is ThrowModel.FIXED and lines:
        _double_base(runner, lines[0])
    while any(runner.snow(p) for p in tree.pixels):
        progress = runner.state.discarded
        for line in lines:
            clear_line_restricted(runner, line)
        stray = [p for p in tree.pixels if runner.snow(p)]
        for p in stray:
            drive_off_peeling(runner, p)
        if runner.state.discarded == progress and stray:
            raise PlanningError(f"tree at {tree.root} could not be cleared")
    walk_to(runner, tree.root)


class BoundaryWalk:
    """Counterclockwise walk along the boundary pixels, outside on the right.

    Entering a boundary pixel along this walk throws right, which is across
    the boundary, so the walk clears what it passes in the fixed-throw model.
    """

    def __init__(self, sides):
        self.sides = sides
        self.at = 0

    def to_side(self, runner: Runner, k: int) -> None:
        n = len(self.sides)
        walk_to(runner, self.sides[self.at].pixel)
        while self.at != k:
            self.at = (self.at + 1) % n
            self._enter(runner, self.sides[self.at].pixel)

    def _enter(self, runner: Runner, p: Pixel) -> None:
        here = runner.pos
        if p == here:
            return
        if abs(p.x - here.x) + abs(p.y - here.y) == 1:
            runner.move(Dir.between(here, p), Throw.R)
            return
        corner = [q for q in (Pixel(p.x, here.y), Pixel(here.x, p.y)) if q in runner.domain]
        if abs(p.x - here.x) == 1 and abs(p.y - here.y) == 1 and len(corner) == 1:
            runner.move(Dir.between(here, corner[0]), Throw.R)
            runner.move(Dir.between(corner[0], p), Throw.R)
            return
        walk_to(runner, p)


def _plan_restricted(domain: PixelDomain, D: int, model: ThrowModel) -> Tour:
    _check(domain, D)
    a = voronoi_assignment(domain)
    trees = {t.base.ccw_index: t for t in decompose(domain, a)}
    runner = Runner(domain, model, D)
    boundary = BoundaryWalk(a.sides)
    for side in a.sides:
        if model is ThrowModel.FIXED:
            boundary.to_side(runner, side.ccw_index)
        else:
            transit_default(runner, side.pixel)
        tree = trees.get(side.ccw_index)
        if tree is not None:
            clear_tree_restricted(runner, tree)
    if model is ThrowModel.FIXED:
        boundary.to_side(runner, 0)
    else:
        transit_default(runner, domain.garage)
    return Tour(domain.garage, tuple(runner.moves))


def plan_adjustable(domain: PixelDomain, D: int) -> Tour:
    """Closed tour clearing ``domain`` without backward throws."""
    return _plan_restricted(domain, D, ThrowModel.ADJUSTABLE)


def plan_fixed(domain: PixelDomain, D: int) -> Tour:
    """Closed tour clearing ``domain`` throwing only to the right of the heading."""
    return _plan_restricted(domain, D, ThrowModel.FIXED)
