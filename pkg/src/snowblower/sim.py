"""Move-by-move execution of snowblower tours; the arbiter of cost and feasibility."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import ParseError, SimulationError
from .grid import Dir, Pixel, PixelDomain, own_side


class ThrowModel(enum.Enum):
    DEFAULT = "default"
    ADJUSTABLE = "adjustable"
    FIXED = "fixed"

    @property
    def allowed(self) -> frozenset["Throw"]:
        return _ALLOWED[self]


class Throw(enum.Enum):
    """Throw direction relative to the heading after the step."""

    F = "F"
    B = "B"
    L = "L"
    R = "R"

    __hash__ = object.__hash__

    def absolute(self, heading: Dir) -> Dir:
        return _ABSOLUTE[self, heading]

    @staticmethod
    def relative(heading: Dir, target: Dir) -> "Throw":
        for t in Throw:
            if t.absolute(heading) == target:
                return t
        raise AssertionError("unreachable")


_ABSOLUTE = {(t, h): {Throw.F: h, Throw.B: h.opposite, Throw.L: h.ccw, Throw.R: h.cw}[t]
             for t in Throw for h in Dir}

_ALLOWED = {
    ThrowModel.DEFAULT: frozenset(Throw),
    ThrowModel.ADJUSTABLE: frozenset({Throw.F, Throw.L, Throw.R}),
    ThrowModel.FIXED: frozenset({Throw.R}),
}


@dataclass(frozen=True)
class Move:
    step: Dir
    throw: Throw

    def __str__(self) -> str:
        return self.step.value + self.throw.value


@dataclass(frozen=True)
class Tour:
    start: Pixel
    moves: tuple[Move, ...] = ()

    def __len__(self) -> int:
        return len(self.moves)

    def to_json(self) -> str:
        return json.dumps({"start": [self.start.x, self.start.y],
                           "moves": [{"step": m.step.value, "throw": m.throw.value}
                                     for m in self.moves]},
                          separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Tour":
        try:
            data = json.loads(text)
            start = Pixel(*data["start"])
            moves = tuple(Move(Dir(m["step"]), Throw(m["throw"])) for m in data["moves"])
        except (ValueError, KeyError, TypeError) as e:
            raise ParseError(f"bad tour JSON: {e}") from e
        return cls(start, moves)


@dataclass
class SnowState:
    depth: dict[Pixel, int]
    position: Pixel
    heading: Dir
    discarded: int = 0

    def copy(self) -> "SnowState":
        return SnowState(dict(self.depth), self.position, self.heading, self.discarded)

    def total(self) -> int:
        return sum(self.depth.values())


@dataclass(frozen=True)
class SimReport:
    cleared: bool
    cost: int
    max_depth_seen: int
    closed: bool
    final_state: SnowState | None = field(default=None, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {"cleared": self.cleared, "cost": self.cost,
                "max_depth_seen": self.max_depth_seen, "closed": self.closed}


def initial_heading(domain: PixelDomain) -> Dir:
    """Pointing from the garage's disposal side into the domain."""
    return own_side(domain, domain.garage).opposite


def initial_state(domain: PixelDomain) -> SnowState:
    return SnowState(dict(domain.depth), domain.garage, initial_heading(domain))


def _step(state: SnowState, move: Move, model: ThrowModel, D: int,
          pixels: frozenset[Pixel]) -> int:
    """Mutate ``state`` by one move; return the depth of the receiving pixel."""
    if move.throw not in model.allowed:
        raise SimulationError("throw", f"throw {move.throw.value} not allowed in {model.value} model")
    u = state.position.step(move.step)
    if u not in pixels:
        raise SimulationError("outside", f"step {move.step.value} from {state.position} leaves the domain")
    amount = state.depth[u]
    target = u.step(move.throw.absolute(move.step))
    received = 0
    if amount:
        if target in pixels:
            received = state.depth[target] + amount
            if received > D:
                raise SimulationError(
                    "depth", f"throwing {amount} onto {target} makes depth {received} > D={D}")
            state.depth[target] = received
        else:
            state.discarded += amount
        state.depth[u] = 0
    state.position = u
    state.heading = move.step
    return received


def apply_move(state: SnowState, move: Move, model: ThrowModel, D: int,
               domain: PixelDomain) -> SnowState:
    """Pure single-move transition; raises :class:`SimulationError` on violation."""
    if D < 2:
        raise ValueError("D must be at least 2")
    new = state.copy()
    _step(new, move, model, D, domain.pixels)
    return new


def simulate(domain: PixelDomain, tour: Tour, model: ThrowModel, D: int,
             state: SnowState | None = None) -> SimReport:
    """Run ``tour`` from the initial depth map (or ``state``) and report."""
    if D < 2:
        raise ValueError("D must be at least 2")
    state = initial_state(domain) if state is None else state.copy()
    if tour.start != state.position:
        raise SimulationError("start", f"tour starts at {tour.start}, expected {state.position}")
    peak = max(state.depth.values(), default=0)
    for i, move in enumerate(tour.moves):
        try:
            peak = max(peak, _step(state, move, model, D, domain.pixels))
        except SimulationError as e:
            e.index = i
            raise
    return SimReport(cleared=not any(state.depth.values()), cost=len(tour.moves),
                     max_depth_seen=peak, closed=state.position == tour.start,
                     final_state=state)


class Runner:
    """Mutable simulation used by the planners to emit moves while tracking snow."""

    def __init__(self, domain: PixelDomain, model: ThrowModel, D: int,
                 state: SnowState | None = None):
        if D < 2:
            raise ValueError("D must be at least 2")
        self.domain = domain
        self.model = model
        self.D = D
        self.state = initial_state(domain) if state is None else state.copy()
        self.moves: list[Move] = []
        self.peak = max(self.state.depth.values(), default=0)

    @property
    def pos(self) -> Pixel:
        return self.state.position

    @property
    def heading(self) -> Dir:
        return self.state.heading

    def snow(self, p: Pixel) -> int:
        return self.state.depth.get(p, 0)

    def inside(self, p: Pixel) -> bool:
        return p in self.domain.pixels

    def move(self, step: Dir, throw: Throw) -> None:
        m = Move(step, throw)
        try:
            self.peak = max(self.peak, _step(self.state, m, self.model, self.D, self.domain.pixels))
        except SimulationError as e:
            e.index = len(self.moves)
            raise
        self.moves.append(m)

    def enter(self, u: Pixel, target: Dir) -> None:
        """Step to neighbour ``u`` and throw its snow in absolute direction ``target``."""
        step = Dir.between(self.pos, u)
        self.move(step, Throw.relative(step, target))

    def run(self, moves: Iterable[Move]) -> None:
        for m in moves:
            self.move(m.step, m.throw)

    def fork(self) -> "Runner":
        """Independent runner continuing from the current state, with no moves yet."""
        return Runner(self.domain, self.model, self.D, self.state)

    def adopt(self, other: "Runner") -> None:
        """Replay the moves of a fork made from the current state."""
        self.run(other.moves)

    def mark(self) -> int:
        return len(self.moves)

    def depths(self) -> Mapping[Pixel, int]:
        return self.state.depth
