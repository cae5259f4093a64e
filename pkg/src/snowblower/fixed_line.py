"""Line clearing with right-only throws by emulating back throws and pushes.

Every gadget is expressed in the local frame of a line step: ``u`` is the
step direction away from the root and ``r = u.cw`` points at the
*companion* pixels that receive snow thrown to the right.  A pass walks out
to the first snowy line pixel and performs back-throw gadgets, each moving
the snow of one line pixel and its companion onto the line pixel behind.
The gathered piles are then pushed back one pixel at a time by push
gadgets and finally disposed of across the base.

The recorded :class:`Segment` list lets callers check the gadget move
counts of a fragment.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .errors import PlanningError, SimulationError
from .grid import Dir, Pixel
from .sim import Runner, Throw, ThrowModel


class LineKind(enum.Enum):
    PERPENDICULAR = "perpendicular"
    PARALLEL_LEFT = "parallel-left"
    PARALLEL_RIGHT = "parallel-right"
    L_SHAPED = "L-shaped"


class Gadget(enum.Enum):
    SETUP = "setup"
    WALK = "walk"
    BACK_THROW = "back_throw"
    LAST_BACK_THROW = "last_back_throw"
    PUSH = "push"
    FINAL_DISPOSAL = "final_disposal"


BACK_THROW_MOVES = 5
LAST_BACK_THROW_MOVES = 3  # the final move up and right of a pass are dropped
PUSH_MOVES = 7
SETUP_MOVES = frozenset({2, 3, 4, 8, 12})
MAX_FINAL_DISPOSAL_MOVES = 9


@dataclass(frozen=True)
class Segment:
    gadget: Gadget
    start: int
    moves: int


@dataclass
class FixedLineLog:
    """Kind of the line and the gadget segments of the emitted fragment."""

    kind: LineKind
    segments: list[Segment] = field(default_factory=list)

    def count(self, gadget: Gadget) -> int:
        return sum(1 for s in self.segments if s.gadget is gadget)

    def moves_of(self, gadget: Gadget) -> list[int]:
        return [s.moves for s in self.segments if s.gadget is gadget]

    @property
    def total(self) -> int:
        return sum(s.moves for s in self.segments)


def _steps(line: Sequence[Pixel]) -> list[Dir]:
    return [Dir.between(a, b) for a, b in zip(line, line[1:])]


def line_kind(line: Sequence[Pixel], base: Dir) -> LineKind:
    """Classify a root-first line by its shape and the side of its base."""
    steps = _steps(line)
    if not steps:
        raise PlanningError("a line of one pixel needs no clearing")
    turns = sum(1 for a, b in zip(steps, steps[1:]) if a != b)
    u = steps[0]
    if turns > 1 or any(b == a.opposite for a, b in zip(steps, steps[1:])):
        raise PlanningError("a line has at most one bend")
    if turns == 1:
        if base != u.opposite:
            raise PlanningError("an L-shaped line must leave its base perpendicularly")
        return LineKind.L_SHAPED
    if base == u.opposite:
        return LineKind.PERPENDICULAR
    if base == u.ccw:
        return LineKind.PARALLEL_LEFT
    if base == u.cw:
        return LineKind.PARALLEL_RIGHT
    raise PlanningError("the base cannot lie ahead of the line")


class _Emitter:
    def __init__(self, runner: Runner, log: FixedLineLog):
        self.runner = runner
        self.log = log

    def go(self, gadget: Gadget, *dirs: Dir) -> None:
        start = self.runner.mark()
        for d in dirs:
            self.runner.move(d, Throw.R)
        self.log.segments.append(Segment(gadget, start, len(dirs)))

    def walk(self, route: Sequence[Pixel]) -> None:
        dirs = []
        here = self.runner.pos
        for p in route:
            if self.runner.snow(p):
                raise PlanningError(f"walk would disturb snow at {p}")
            dirs.append(Dir.between(here, p))
            here = p
        if dirs:
            self.go(Gadget.WALK, *dirs)


class _FixedLine:
    """Pass machinery for a line whose root is ``line[0]`` (after any setup)."""

    def __init__(self, em: _Emitter, line: Sequence[Pixel], disposal: Sequence[Dir]):
        self.em = em
        self.runner = em.runner
        self.line = list(line)
        self.u = [Dir.between(a, b) for a, b in zip(self.line, self.line[1:])]
        self.disposal = list(disposal)

    def frame(self, i: int) -> tuple[Dir, Dir]:
        """Step into ``line[i]`` and its right-hand side (``i >= 1``)."""
        u = self.u[i - 1]
        return u, u.cw

    def back_throw(self, y: int, last: bool) -> None:
        u, r = self.frame(y + 1)
        dirs = [u, r, u.opposite]
        if not last:
            dirs += [u, r.opposite]
        self.em.go(Gadget.LAST_BACK_THROW if last else Gadget.BACK_THROW, *dirs)

    def push(self, y: int) -> None:
        """Move the pile on ``line[y]`` to ``line[y-1]``; the blower starts right of it."""
        u, r = self.frame(y)
        start = self.line[y].step(r)
        if self.runner.pos != start:
            self._reposition(start)
        self.em.go(Gadget.PUSH, r.opposite, u, r, r.opposite, u.opposite, r, u.opposite)

    def _reposition(self, target: Pixel) -> None:
        here = self.runner.pos
        for mid in (Pixel(here.x, target.y), Pixel(target.x, here.y)):
            if abs(here.x - target.x) + abs(here.y - target.y) == 2 and \
                    mid in self.runner.domain and not self.runner.snow(mid):
                self.em.walk([mid, target])
                return
        raise PlanningError(f"cannot reach {target} to continue pushing")

    def gather_count(self, J: int) -> int:
        """Back throws in the next pass: pairs of pixels while the pile fits."""
        load = 0
        count = 0
        for y in range(J - 1, len(self.line) - 1):
            u, r = self.frame(y + 1)
            pair = self.runner.snow(self.line[y + 1]) + self.runner.snow(self.line[y + 1].step(r))
            if count and load + pair > self.runner.D:
                break
            load += pair
            count += 1
        return count

    def run_pass(self) -> None:
        line = self.line
        J = next(i for i, p in enumerate(line) if self.runner.snow(p) or
                 (i and self.runner.snow(p.step(self.frame(i)[1]))))
        if self.runner.pos != line[0]:
            raise PlanningError("a pass must start at the root")
        self.em.walk(line[1:J])
        t = self.gather_count(J)
        for k in range(t):
            self.back_throw(J - 1 + k, last=k == t - 1)
        for y in range(J - 2 + t, 0, -1):
            self.push(y)
        self.final()

    def final(self) -> None:
        u, r = self.frame(1)
        start = self.line[0].step(r)
        if self.runner.pos != start:
            self._reposition(start)
        self.em.go(Gadget.FINAL_DISPOSAL, *self.disposal)

    def clear(self) -> None:
        while any(self.runner.snow(p) for p in self.line[1:]):
            before = self.runner.state.discarded
            self.run_pass()
            if self.runner.state.discarded == before:
                raise PlanningError("a pass disposed of no snow")


def _inside(runner: Runner, *pixels: Pixel) -> bool:
    return all(p in runner.domain for p in pixels)


def clear_line_fixed(runner: Runner, line: Sequence[Pixel], base: Dir) -> FixedLineLog:
    """Clear ``line[1:]`` (and the companion pixels used) with right throws only.

    The runner must stand on the clear root ``line[0]`` whose side ``base``
    lies on the boundary.  Companion pixels on the right of the line must
    exist; for an L-shaped line the two pixels beyond the bend (ahead of the
    first segment and to its right) must also be clear.  The fragment
    begins with the double-base setup and ends back at the root.
    """
    if runner.model is not ThrowModel.FIXED:
        raise PlanningError("clear_line_fixed needs a fixed-throw runner")
    root = line[0]
    if runner.pos != root:
        raise PlanningError("line clearing must start at the root")
    if runner.snow(root):
        raise PlanningError("line root must be clear (J >= 1)")
    if root.step(base) in runner.domain:
        raise PlanningError(f"side {base.value} of the root is not a boundary side")
    kind = line_kind(line, base)
    log = FixedLineLog(kind)
    em = _Emitter(runner, log)
    steps = _steps(line)
    u, r = steps[0], steps[0].cw
    companions = [p.step(d.cw) for p, d in zip(line[1:], steps)]
    if kind is not LineKind.PARALLEL_RIGHT:
        companions.append(root.step(r))
    if not _inside(runner, *companions):
        raise PlanningError("companion pixels right of the line are missing")
    if kind is LineKind.L_SHAPED:
        bend = next(i for i in range(1, len(steps)) if steps[i] != steps[i - 1])
        k = line[bend]
        helpers = (k.step(steps[bend - 1]), k.step(steps[bend - 1]).step(steps[bend - 1].cw))
        if not _inside(runner, *helpers) or any(runner.snow(h) for h in helpers):
            raise PlanningError(f"the pixels beyond the bend at {k} must be clear")

    try:
        if kind in (LineKind.PERPENDICULAR, LineKind.L_SHAPED):
            p2 = root.step(r)
            if p2.step(base) in runner.domain:
                em.go(Gadget.SETUP, r, base, base.opposite, r.opposite)
                final = [r.opposite, u, r, r.opposite, u.opposite, r, base, base.opposite,
                         r.opposite]
            else:
                em.go(Gadget.SETUP, r, r.opposite)
                final = [r.opposite, u, r, r.opposite, u.opposite, r, r.opposite]
            _FixedLine(em, line, final).clear()
        elif kind is LineKind.PARALLEL_LEFT:
            right = root.step(u.opposite)
            if not _inside(runner, right, right.step(r)):
                raise PlanningError("the double-base pixels right of the root are missing")
            below = right.step(base)
            if below in runner.domain:
                half = [u.opposite, base, base.opposite, u, r, u.opposite]
            else:
                half = [u.opposite, u, r, u.opposite]
            back = [d.opposite for d in reversed(half)]
            em.go(Gadget.SETUP, *half, *back)
            _FixedLine(em, line, [u, r.opposite, u.opposite]).clear()
        else:
            em.go(Gadget.SETUP, u, r, r.opposite)
            final = [r.opposite, u, r, r.opposite, u.opposite, r, r.opposite]
            _FixedLine(em, line[1:], final).clear()
            em.walk([root])
    except SimulationError as e:
        raise PlanningError(f"fixed-throw emulation failed: {e}") from e
    return log
