"""Tours for the default throw model: D-full line passes, brushes, and splicing.

Inside a tree every entered pixel throws its snow one step towards the root
(the root throws across its base), so the snow only ever moves rootward and
any closed walk from the root that gathers at most ``D`` units is feasible.
Passes and brushes are particular choices of such walks.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import PlanningError
from .grid import Dir, Pixel, PixelDomain, own_side, validate_for_planning
from .sim import Runner, ThrowModel, Tour
from .voronoi import ClearTree, Comb, TreeKind, VoronoiAssignment, decompose, voronoi_assignment


@dataclass(frozen=True)
class LineClearPlan:
    """Pass arithmetic for a line of ``ell`` pixels whose first ``J`` are clear."""

    ell: int
    J: int
    D: int

    def __post_init__(self) -> None:
        if self.J < 1:
            raise PlanningError("line root must be clear (J >= 1)")
        if self.J > self.ell:
            raise PlanningError("J exceeds the line length")

    @property
    def k(self) -> int:
        return (self.ell - self.J) // self.D

    @property
    def r(self) -> int:
        return (self.ell - self.J) % self.D

    def cost(self) -> int:
        full = sum(2 * (self.J - 1 + i * self.D) for i in range(1, self.k + 1))
        return full + (2 * (self.ell - 1) if self.r else 0)


class TreeWalker:
    """Moves the snowblower inside one tree, always throwing towards the root."""

    def __init__(self, runner: Runner, parent: dict[Pixel, Pixel | None], base: Dir):
        self.runner = runner
        self.parent = parent
        self.base = base

    def enter(self, u: Pixel) -> int:
        gathered = self.runner.snow(u)
        par = self.parent[u]
        self.runner.enter(u, self.base if par is None else Dir.between(u, par))
        return gathered

    def walk(self, pixels: Sequence[Pixel]) -> int:
        return sum(self.enter(u) for u in pixels)


def _turnaround(runner: Runner, pixels: Sequence[Pixel], room: int) -> int:
    """How many of ``pixels`` to walk through without gathering more than ``room``.

    Stops early once the load is full or no snow lies further out.
    """
    last_snowy = max((i + 1 for i, p in enumerate(pixels) if runner.snow(p)), default=0)
    load = 0
    for i, p in enumerate(pixels[:last_snowy]):
        if load + runner.snow(p) > room:
            return i
        load += runner.snow(p)
        if load == room:
            return i + 1
    return last_snowy


def line_pass(walker: TreeWalker, line: Sequence[Pixel], D: int) -> int:
    """One forward/backward pass from ``line[0]``; returns the units disposed."""
    out = line[1:]
    t = _turnaround(walker.runner, out, D)
    if t == 0:
        return 0
    gathered = walker.walk(out[:t])
    walker.walk(list(reversed(line[:t])))
    return gathered


def clear_line(walker: TreeWalker, line: Sequence[Pixel], D: int) -> list[int]:
    """Repeated passes until the line is clear; returns the units of each pass."""
    passes = []
    while any(walker.runner.snow(p) for p in line[1:]):
        passes.append(line_pass(walker, line, D))
    return passes


def _line_parent(line: Sequence[Pixel]) -> dict[Pixel, Pixel | None]:
    parent: dict[Pixel, Pixel | None] = {line[0]: None}
    parent.update(zip(line[1:], line))
    return parent


def clear_line_default(runner: Runner, line: Sequence[Pixel], base: Dir) -> list[int]:
    """Clear ``line`` (root first, root already clear) by D-full passes over ``base``."""
    if runner.pos != line[0]:
        raise PlanningError("line clearing must start at the root")
    if runner.snow(line[0]):
        raise PlanningError("line root must be clear (J >= 1)")
    return clear_line(TreeWalker(runner, _line_parent(line), base), line, runner.D)


def comb_parent(comb: Comb) -> dict[Pixel, Pixel | None]:
    parent: dict[Pixel, Pixel | None] = {comb.handle[0]: None}
    parent.update(zip(comb.handle[1:], comb.handle))
    for h, tooth in zip(comb.handle, comb.teeth):
        parent.update(zip(tooth, (h,) + tooth))
    return parent


def _snow(runner: Runner, pixels) -> int:
    return sum(runner.snow(p) for p in pixels)


def comb_lines(comb: Comb) -> list[tuple[Pixel, ...]]:
    """Root-anchored lines of a comb, farthest tooth first, handle last."""
    lines = [comb.tooth_line(i) for i in reversed(range(len(comb.handle))) if comb.teeth[i]]
    lines.append(comb.handle)
    return lines


def make_brush_ready(walker: TreeWalker, comb: Comb, D: int,
                     capacity: int | None = None) -> list[int]:
    """Full passes on root-anchored lines until each holds less than ``capacity``."""
    cap = D if capacity is None else capacity
    passes = []
    changed = True
    while changed:
        changed = False
        for line in comb_lines(comb):
            while _snow(walker.runner, line[1:]) >= cap:
                passes.append(line_pass(walker, line, cap))
                changed = True
    return passes


def brush(walker: TreeWalker, comb: Comb, D: int) -> int:
    """One capacitated depth-first sweep over the teeth; returns units disposed."""
    runner = walker.runner
    handle, teeth = comb.handle, comb.teeth
    rows = [i for i in range(len(handle)) if _snow(runner, (handle[i],) + teeth[i])]
    if not rows:
        return 0
    top = max(rows)
    if _snow(runner, handle[1: top + 1]) > D:
        return line_pass(walker, handle, D)
    visited: set[Pixel] = {handle[0]}  # the root only ever holds the carried pile

    def sweep(pixels: Sequence[Pixel]) -> int:
        """Walk ``pixels``; return the snow picked up from pixels new to this brush."""
        fresh = 0
        for u in pixels:
            amount = walker.enter(u)
            if u not in visited:
                visited.add(u)
                fresh += amount
        return fresh

    gathered = sweep(handle[1: top + 1])
    i = top
    while True:
        t = _turnaround(runner, teeth[i], D - gathered)
        if t:
            gathered += sweep(teeth[i][:t])
            sweep(list(reversed((handle[i],) + teeth[i][: t - 1])))
        if gathered >= D:
            break
        below = [j for j in range(i) if _snow(runner, teeth[j]) or
                 (runner.snow(handle[j]) and handle[j] not in visited)]
        if not below:
            break
        nxt = max(below)
        gathered += sweep(list(reversed(handle[nxt:i])))
        i = nxt
    sweep(list(reversed(handle[:i])))
    return gathered


def clear_comb_default(runner: Runner, tree: ClearTree) -> dict[str, list[int]]:
    """Passes until brush-ready, then brushes, for each side of a (double) comb."""
    if runner.pos != tree.root:
        raise PlanningError("comb clearing must start at the root")
    record: dict[str, list[int]] = {"passes": [], "brushes": []}
    for comb in tree.combs:
        walker = TreeWalker(runner, comb_parent(comb), tree.base.side)
        record["passes"] += make_brush_ready(walker, comb, runner.D)
        while _snow(runner, comb.pixels):
            record["brushes"].append(brush(walker, comb, runner.D))
    return record


def clear_tree_default(runner: Runner, tree: ClearTree) -> None:
    if tree.kind is TreeKind.LINE:
        clear_line_default(runner, tree.path, tree.base.side)
    else:
        clear_comb_default(runner, tree)


# -- splicing -------------------------------------------------------------------

def boundary_route(domain: PixelDomain, a: Pixel, b: Pixel) -> list[Pixel]:
    """Shortest inside path from ``a`` to ``b`` (exclusive of ``a``)."""
    if a == b:
        return []
    prev: dict[Pixel, Pixel] = {a: a}
    queue = deque([a])
    while queue:
        p = queue.popleft()
        if p == b:
            break
        for q in domain.neighbors(p):
            if q not in prev:
                prev[q] = p
                queue.append(q)
    if b not in prev:
        raise PlanningError(f"no inside path from {a} to {b}")
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[-2::-1]


def transit_default(runner: Runner, target: Pixel) -> None:
    """Walk to ``target``; boundary pixels dump across their own side, others forward."""
    domain = runner.domain
    route = boundary_route(domain, runner.pos, target)
    for i, u in enumerate(route):
        if domain.is_boundary(u):
            runner.enter(u, own_side(domain, u))
        else:
            runner.enter(u, Dir.between(u, route[i + 1]))


def _check(domain: PixelDomain, D: int) -> None:
    if D < 2:
        raise PlanningError("D must be at least 2")
    validate_for_planning(domain).raise_if_invalid()
    if any(domain.depth[p] != 1 for p in domain.pixels if p != domain.garage):
        raise PlanningError("planners require uniform initial depth 1")


def splice(domain: PixelDomain, runner: Runner, trees: list[ClearTree],
           transit: Callable[[Runner, Pixel], None],
           clear: Callable[[Runner, ClearTree], None],
           assignment: VoronoiAssignment) -> Tour:
    """Visit the trees in counterclockwise base order and return to the garage."""
    by_side = {t.base.ccw_index: t for t in trees}
    for side in assignment.sides:
        transit(runner, side.pixel)
        tree = by_side.get(side.ccw_index)
        if tree is not None:
            clear(runner, tree)
    transit(runner, domain.garage)
    return Tour(domain.garage, tuple(runner.moves))


def plan_default(domain: PixelDomain, D: int) -> Tour:
    _check(domain, D)
    a = voronoi_assignment(domain)
    trees = decompose(domain, a)
    runner = Runner(domain, ThrowModel.DEFAULT, D)
    return splice(domain, runner, trees, transit_default, clear_tree_default, a)
