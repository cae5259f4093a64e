"""Pixel polygons: parsing, rendering, boundary traversal and validation.

Coordinates put the origin at the lower-left corner with ``y`` growing
upwards, so row 0 of a parsed map is its *last* text line.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple

import networkx as nx

from .errors import ParseError, ValidationError


class Pixel(NamedTuple):
    x: int
    y: int

    def step(self, d: "Dir", n: int = 1) -> "Pixel":
        dx, dy = d.delta
        return _new_tuple(Pixel, (self[0] + n * dx, self[1] + n * dy))


_new_tuple = tuple.__new__


class Dir(enum.Enum):
    """Compass direction; the value is its one-letter wire code."""

    N = "N"
    E = "E"
    S = "S"
    W = "W"

    # identity hashing: members are singletons and this sits on hot paths
    __hash__ = object.__hash__

    @property
    def dx(self) -> int:
        return self.delta[0]

    @property
    def dy(self) -> int:
        return self.delta[1]

    @property
    def cw(self) -> "Dir":
        return _CW[self]

    @property
    def ccw(self) -> "Dir":
        return _CCW[self]

    @property
    def opposite(self) -> "Dir":
        return _CW[_CW[self]]

    @property
    def horizontal_side(self) -> bool:
        """True for the N and S sides of a pixel, which are horizontal segments."""
        return self in (Dir.N, Dir.S)

    @staticmethod
    def between(a: Pixel, b: Pixel) -> "Dir":
        """Direction of the unit step from ``a`` to the neighbouring pixel ``b``."""
        try:
            return _BY_DELTA[(b.x - a.x, b.y - a.y)]
        except KeyError:
            raise ValueError(f"{a} and {b} are not neighbours") from None


_DELTA = {Dir.N: (0, 1), Dir.E: (1, 0), Dir.S: (0, -1), Dir.W: (-1, 0)}
_BY_DELTA = {v: k for k, v in _DELTA.items()}
_CW = {Dir.N: Dir.E, Dir.E: Dir.S, Dir.S: Dir.W, Dir.W: Dir.N}
_CCW = {v: k for k, v in _CW.items()}
for _d, _delta in _DELTA.items():
    _d.delta = _delta

# Neighbour order used by the tie-breaking rules: right, left, down, up.
PRIORITY = (Dir.E, Dir.W, Dir.S, Dir.N)


@dataclass(frozen=True, order=True)
class BoundarySide:
    """One unit side of a boundary pixel, with its position along the boundary."""

    ccw_index: int
    pixel: Pixel
    side: Dir

    @property
    def key(self) -> tuple[Pixel, Dir]:
        return (self.pixel, self.side)

    @property
    def horizontal(self) -> bool:
        return self.side.horizontal_side


@dataclass(frozen=True)
class PixelDomain:
    pixels: frozenset[Pixel]
    garage: Pixel
    depth: Mapping[Pixel, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.pixels:
            raise ValidationError("empty", "domain has no pixels")
        if self.garage not in self.pixels:
            raise ValidationError("garage", f"garage {self.garage} is not a domain pixel")
        if self.degree(self.garage) == 4:
            raise ValidationError("garage", f"garage {self.garage} is not a boundary pixel")
        depth = {p: 1 for p in self.pixels}
        depth[self.garage] = 0
        for p, d in dict(self.depth).items():
            if p not in self.pixels:
                raise ValidationError("depth", f"depth given for non-pixel {p}")
            if d < 0:
                raise ValidationError("depth", f"negative depth at {p}")
            depth[p] = d
        object.__setattr__(self, "depth", MappingProxyType(depth))

    @classmethod
    def from_pixels(cls, pixels: Iterable[tuple[int, int]], garage: tuple[int, int],
                    depth: Mapping[Pixel, int] | None = None) -> "PixelDomain":
        return cls(frozenset(Pixel(*p) for p in pixels), Pixel(*garage), depth or {})

    def __contains__(self, p: object) -> bool:
        return p in self.pixels

    def __len__(self) -> int:
        return len(self.pixels)

    def neighbors(self, p: Pixel) -> Iterator[Pixel]:
        for d in PRIORITY:
            q = p.step(d)
            if q in self.pixels:
                yield q

    def degree(self, p: Pixel) -> int:
        return sum(1 for _ in self.neighbors(p))

    def is_boundary(self, p: Pixel) -> bool:
        return self.degree(p) < 4

    def boundary_pixels(self) -> list[Pixel]:
        return sorted(p for p in self.pixels if self.is_boundary(p))

    def open_sides(self, p: Pixel) -> list[Dir]:
        """Sides of ``p`` that lie on the domain boundary, in tie-break order."""
        return [d for d in PRIORITY if p.step(d) not in self.pixels]

    def total_snow(self) -> int:
        return sum(self.depth.values())

    def bbox(self) -> tuple[int, int, int, int]:
        xs = [p.x for p in self.pixels]
        ys = [p.y for p in self.pixels]
        return min(xs), min(ys), max(xs), max(ys)

    def with_garage(self, garage: Pixel) -> "PixelDomain":
        depth = dict(self.depth)
        depth[self.garage] = 1 if self.garage != garage else 0
        depth[garage] = 0
        return PixelDomain(self.pixels, garage, depth)


# -- ASCII format -------------------------------------------------------------

def parse_ascii(text: str) -> PixelDomain:
    """Parse a map of ``#`` (snow), ``G`` (garage) and ``.``/space (outside)."""
    lines = [ln.rstrip() for ln in text.splitlines()]
    while lines and not lines[-1]:
        lines.pop()
    while lines and not lines[0]:
        lines.pop(0)
    if not lines:
        raise ParseError("empty map")
    pixels: set[Pixel] = set()
    garages: list[Pixel] = []
    height = len(lines)
    for row, line in enumerate(lines):
        y = height - 1 - row
        for x, ch in enumerate(line):
            if ch in "#G":
                pixels.add(Pixel(x, y))
                if ch == "G":
                    garages.append(Pixel(x, y))
            elif ch not in ". ":
                raise ParseError(f"unexpected character {ch!r} at line {row + 1}")
    if not pixels:
        raise ParseError("map contains no pixels")
    if len(garages) != 1:
        raise ParseError(f"expected exactly one garage 'G', found {len(garages)}")
    return PixelDomain(frozenset(pixels), garages[0])


def render_ascii(domain: PixelDomain) -> str:
    """Inverse of :func:`parse_ascii` for the pixel set and the garage."""
    x0, y0, x1, y1 = domain.bbox()
    rows = []
    for y in range(y1, y0 - 1, -1):
        row = []
        for x in range(x0, x1 + 1):
            p = Pixel(x, y)
            row.append("G" if p == domain.garage else "#" if p in domain.pixels else ".")
        rows.append("".join(row).rstrip("."))
    return "\n".join(rows) + "\n"


def render_svg(domain: PixelDomain, cell: int = 20,
               depth: Mapping[Pixel, int] | None = None) -> str:
    depth = domain.depth if depth is None else depth
    x0, y0, x1, y1 = domain.bbox()
    w, h = (x1 - x0 + 1) * cell, (y1 - y0 + 1) * cell
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">']
    for p in sorted(domain.pixels):
        sx, sy = (p.x - x0) * cell, (y1 - p.y) * cell
        fill = "#c03030" if p == domain.garage else "#dde6f0" if depth.get(p, 0) else "#8a8a8a"
        out.append(f'<rect x="{sx}" y="{sy}" width="{cell}" height="{cell}" '
                   f'fill="{fill}" stroke="#333" stroke-width="1"/>')
        if depth.get(p, 0) > 1:
            out.append(f'<text x="{sx + cell // 2}" y="{sy + cell * 2 // 3}" '
                       f'font-size="{cell // 2}" text-anchor="middle">{depth[p]}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- boundary -----------------------------------------------------------------

# Each boundary side as a directed unit edge with the interior on its left.
def _side_edge(p: Pixel, d: Dir) -> tuple[tuple[int, int], tuple[int, int]]:
    x, y = p
    return {
        Dir.S: ((x, y), (x + 1, y)),
        Dir.E: ((x + 1, y), (x + 1, y + 1)),
        Dir.N: ((x + 1, y + 1), (x, y + 1)),
        Dir.W: ((x, y + 1), (x, y)),
    }[d]


# heading of each directed side edge
_EDGE_HEADING = {Dir.S: Dir.E, Dir.E: Dir.N, Dir.N: Dir.W, Dir.W: Dir.S}


def own_side(domain: PixelDomain, p: Pixel) -> Dir:
    """The side a boundary pixel disposes across: right, else left, bottom, top."""
    sides = domain.open_sides(p)
    if not sides:
        raise ValueError(f"{p} is not a boundary pixel")
    return sides[0]


def boundary_sides_ccw(domain: PixelDomain) -> list[BoundarySide]:
    """All boundary sides in counterclockwise order, starting at the garage."""
    outgoing: dict[tuple[int, int], list[tuple[Pixel, Dir]]] = {}
    count = 0
    for p in domain.pixels:
        for d in domain.open_sides(p):
            outgoing.setdefault(_side_edge(p, d)[0], []).append((p, d))
            count += 1
    start = (domain.garage, own_side(domain, domain.garage))
    order = [start]
    seen = {start}
    cur = start
    while True:
        end = _side_edge(*cur)[1]
        heading = _EDGE_HEADING[cur[1]]
        cands = outgoing[end]
        if len(cands) > 1:
            # pinch vertex: turn right so the walk stays on one closed curve
            rank = {heading.cw: 0, heading: 1, heading.ccw: 2}
            cands = sorted(cands, key=lambda s: rank[_EDGE_HEADING[s[1]]])
        nxt = cands[0]
        if nxt == start:
            break
        if nxt in seen:
            raise ValidationError("hole", "boundary does not form a single cycle")
        seen.add(nxt)
        order.append(nxt)
        cur = nxt
    if len(order) != count:
        raise ValidationError("hole", "domain boundary has more than one component")
    return [BoundarySide(i, p, d) for i, (p, d) in enumerate(order)]


# -- validation ---------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    connected: bool
    hole_free: bool
    articulation_free: bool
    articulation_vertices: tuple[Pixel, ...] = ()
    hole_cells: tuple[Pixel, ...] = ()

    @property
    def ok(self) -> bool:
        return self.connected and self.hole_free and self.articulation_free

    def raise_if_invalid(self) -> None:
        if not self.connected:
            raise ValidationError("disconnected", "pixel set is not connected")
        if not self.hole_free:
            raise ValidationError("hole", f"domain has holes at {list(self.hole_cells)[:5]}")
        if not self.articulation_free:
            raise ValidationError(
                "articulation",
                f"articulation vertices {list(self.articulation_vertices)[:5]}")


def dual_graph(pixels: Iterable[Pixel]) -> nx.Graph:
    pixels = set(pixels)
    g = nx.Graph()
    g.add_nodes_from(pixels)
    for p in pixels:
        for d in (Dir.E, Dir.N):
            q = p.step(d)
            if q in pixels:
                g.add_edge(p, q)
    return g


def _holes(pixels: frozenset[Pixel]) -> list[Pixel]:
    xs = [p.x for p in pixels]
    ys = [p.y for p in pixels]
    x0, x1, y0, y1 = min(xs) - 1, max(xs) + 1, min(ys) - 1, max(ys) + 1
    outside = {Pixel(x0, y0)}
    queue = deque(outside)
    while queue:
        p = queue.popleft()
        for d in Dir:
            q = p.step(d)
            if x0 <= q.x <= x1 and y0 <= q.y <= y1 and q not in pixels and q not in outside:
                outside.add(q)
                queue.append(q)
    return sorted(Pixel(x, y) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1)
                  if Pixel(x, y) not in pixels and Pixel(x, y) not in outside)


def validate_for_planning(domain: PixelDomain) -> ValidationReport:
    g = dual_graph(domain.pixels)
    connected = nx.is_connected(g)
    holes = _holes(domain.pixels)
    arts = tuple(sorted(nx.articulation_points(g))) if connected else ()
    return ValidationReport(connected, not holes, not arts, arts, tuple(holes))
