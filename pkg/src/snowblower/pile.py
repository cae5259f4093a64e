"""Moving piles of snow under a restricted throw model.

A *push* steps into the pile's pixel from an approach pixel chosen so that
the model-legal throw lands on the wanted neighbour.  Between pushes the
blower only walks over clear pixels, where throws have no effect, so a
pile route is fully determined by the sequence of pushes.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .errors import PlanningError
from .grid import Dir, Pixel, PixelDomain
from .sim import Runner, Throw, ThrowModel


def push_headings(model: ThrowModel, d: Dir) -> list[Dir]:
    """Headings from which entering a pixel may throw its snow towards ``d``."""
    return [h for h in Dir if Throw.relative(h, d) in model.allowed]


def boundary_distance(domain: PixelDomain) -> dict[Pixel, int]:
    """Grid distance from every pixel to the nearest boundary pixel."""
    return _boundary_distance(domain.pixels)


@lru_cache(maxsize=64)
def _boundary_distance(pixels: frozenset[Pixel]) -> dict[Pixel, int]:
    dist = {p: 0 for p in pixels if any(p.step(d) not in pixels for d in Dir)}
    queue = deque(dist)
    while queue:
        p = queue.popleft()
        for d in Dir:
            q = p.step(d)
            if q in pixels and q not in dist:
                dist[q] = dist[p] + 1
                queue.append(q)
    return dist


@lru_cache(maxsize=64)
def adjacency(pixels: frozenset[Pixel]) -> dict[Pixel, tuple[Pixel, ...]]:
    """Inside neighbours of every pixel."""
    return {p: tuple(q for q in (p.step(d) for d in Dir) if q in pixels) for p in pixels}


def clear_route(runner: Runner, goals: Iterable[Pixel], avoid: Iterable[Pixel] = (),
                limit: int | None = None, start: Pixel | None = None) -> list[Pixel] | None:
    """Shortest walk over clear pixels from the blower to any of ``goals``.

    The returned list excludes the start.  ``None`` when no such walk of at
    most ``limit`` steps exists.
    """
    src = runner.pos if start is None else start
    goals = set(goals)
    if src in goals:
        return []
    blocked = set(avoid)
    depth = runner.state.depth
    adj = adjacency(runner.domain.pixels)
    prev = {src: src}
    frontier = [src]
    steps = 0
    while frontier and (limit is None or steps < limit):
        steps += 1
        nxt = []
        for p in frontier:
            for q in adj[p]:
                if q in prev or q in blocked or depth[q]:
                    continue
                prev[q] = p
                if q in goals:
                    path = [q]
                    while path[-1] != src:
                        path.append(prev[path[-1]])
                    return path[-2::-1]
                nxt.append(q)
        frontier = nxt
    return None


def walk(runner: Runner, route: Iterable[Pixel]) -> None:
    """Follow ``route`` over clear pixels; the throws carry no snow."""
    for u in route:
        if runner.snow(u):
            raise PlanningError(f"walk would disturb snow at {u}")
        runner.move(Dir.between(runner.pos, u), Throw.R)


def walk_to(runner: Runner, target: Pixel, avoid: Iterable[Pixel] = ()) -> None:
    route = clear_route(runner, [target], avoid)
    if route is None:
        raise PlanningError(f"no clear walk from {runner.pos} to {target}")
    walk(runner, route)


@dataclass(frozen=True)
class Push:
    at: Pixel
    toward: Dir
    heading: Dir

    @property
    def approach(self) -> Pixel:
        return self.at.step(self.heading.opposite)


def push(runner: Runner, p: Push) -> None:
    """Walk to the approach pixel and step into the pile, throwing it on."""
    walk_to(runner, p.approach, avoid=[p.at])
    runner.move(p.heading, Throw.relative(p.heading, p.toward))


def plan_pile_route(runner: Runner, src: Pixel, cap: int | None = None,
                    reach: int = 10) -> list[Push] | None:
    """Cheapest push sequence taking the snow on ``src`` off the domain.

    A* over (pile pixel, blower pixel, pile size).  The pile may absorb
    other snow on its way as long as it never exceeds ``cap``.  Repositioning
    between pushes is limited to ``reach`` steps over currently clear pixels.
    """
    cap = runner.D if cap is None else cap
    domain = runner.domain
    inside = domain.pixels
    depth = runner.state.depth
    model = runner.model
    dist = boundary_distance(domain)
    adj = adjacency(inside)
    headings = {d: push_headings(model, d) for d in Dir}
    vacated = {src}
    reach_cache: dict[tuple[Pixel, Pixel, Pixel], int | None] = {}

    def approach_cost(b: Pixel, z: Pixel, x: Pixel, first: bool) -> int | None:
        key = (b, z, x)
        if key not in reach_cache:
            if b == z:
                reach_cache[key] = 0
            elif depth.get(z, 0) and z not in vacated:
                reach_cache[key] = None
            else:
                reach_cache[key] = _reach(adj, depth, vacated, b, z, x,
                                          None if first else reach)
        return reach_cache[key]

    start = (src, runner.pos, depth[src])
    counter = itertools.count()
    heap = [(dist[src] + 1, 0, next(counter), start)]
    best = {start: 0}
    back: dict[tuple, tuple[tuple, Push]] = {}
    goal_key = None
    while heap:
        _, g, _, state = heapq.heappop(heap)
        if state[0] is None:
            goal_key = state
            break
        if g > best.get(state, g):
            continue
        x, b, amount = state
        first = x == src and b == runner.pos
        for d in Dir:
            y = x.step(d)
            gain = 0
            if y in inside:
                if y not in vacated:
                    gain = depth[y]
                if amount + gain > cap:
                    continue
            for h in headings[d]:
                z = x.step(h.opposite)
                if z not in inside or z == y:
                    continue
                c = approach_cost(b, z, x, first)
                if c is None:
                    continue
                cost = g + c + 1
                nxt = (y, x, amount + gain) if y in inside else (None, x, amount)
                if cost < best.get(nxt, cost + 1):
                    best[nxt] = cost
                    back[nxt] = (state, Push(x, d, h))
                    est = 0 if y not in inside else dist[y] + 1
                    heapq.heappush(heap, (cost + est, cost, next(counter), nxt))
    if goal_key is None:
        return None
    pushes = []
    key = goal_key
    while key != start:
        key, p = back[key]
        pushes.append(p)
    return pushes[::-1]


def _reach(adj: dict[Pixel, tuple[Pixel, ...]], depth: dict[Pixel, int], vacated: set[Pixel],
           src: Pixel, dst: Pixel, avoid: Pixel, limit: int | None) -> int | None:
    seen = {src, avoid}
    frontier = [src]
    steps = 0
    while frontier and (limit is None or steps < limit):
        steps += 1
        nxt = []
        for p in frontier:
            for q in adj[p]:
                if q in seen or (depth[q] and q not in vacated):
                    continue
                if q == dst:
                    return steps
                seen.add(q)
                nxt.append(q)
        frontier = nxt
    return None


def drive_off(runner: Runner, src: Pixel, cap: int | None = None) -> int:
    """Push the pile on ``src`` off the domain; returns the number of moves."""
    route = plan_pile_route(runner, src, cap)
    if route is None:
        raise PlanningError(f"no {runner.model.value}-model route for the snow on {src}")
    before = runner.mark()
    for p in route:
        push(runner, p)
    return runner.mark() - before
