"""Discrete Voronoi decomposition of a pixel polygon by its boundary sides.

Each pixel is assigned the boundary side it would push its snow across,
using the direction-priority tie-break (right, left, down, up) over all
shortest inside paths.  The cells are then classified as lines, combs or
double-sided combs.
"""

from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

from .errors import ClassificationError
from .grid import PRIORITY, BoundarySide, Dir, Pixel, PixelDomain, boundary_sides_ccw, own_side


@dataclass(frozen=True)
class VoronoiAssignment:
    side_of: Mapping[Pixel, BoundarySide]
    vdist_of: Mapping[Pixel, int]
    # next pixel on the tie-broken path towards the Voronoi side; None for roots
    toward: Mapping[Pixel, Pixel | None]
    sides: tuple[BoundarySide, ...]

    def cell(self, side: BoundarySide) -> set[Pixel]:
        return {p for p, s in self.side_of.items() if s == side}


def _boundary_distance(domain: PixelDomain) -> dict[Pixel, int]:
    dist = {p: 0 for p in domain.pixels if domain.is_boundary(p)}
    queue = deque(sorted(dist))
    while queue:
        p = queue.popleft()
        for q in domain.neighbors(p):
            if q not in dist:
                dist[q] = dist[p] + 1
                queue.append(q)
    return dist


def voronoi_assignment(domain: PixelDomain) -> VoronoiAssignment:
    sides = boundary_sides_ccw(domain)
    by_key = {s.key: s for s in sides}
    dist = _boundary_distance(domain)
    side_of: dict[Pixel, BoundarySide] = {}
    toward: dict[Pixel, Pixel | None] = {}
    for p in sorted(domain.pixels, key=lambda q: (dist[q], q)):
        if dist[p] == 0:
            side_of[p] = by_key[(p, own_side(domain, p))]
            toward[p] = None
            continue
        for d in PRIORITY:
            q = p.step(d)
            if dist.get(q) == dist[p] - 1:
                side_of[p] = side_of[q]
                toward[p] = q
                break
    vdist = {p: dist[p] + 1 for p in domain.pixels}
    return VoronoiAssignment(side_of, vdist, toward, tuple(sides))


def voronoi_side(domain: PixelDomain, p: Pixel,
                 assignment: VoronoiAssignment | None = None) -> tuple[BoundarySide, int]:
    """Voronoi side of ``p`` and its displacement count (path length + 1)."""
    a = assignment or voronoi_assignment(domain)
    if p not in a.side_of:
        raise KeyError(f"{p} is not a domain pixel")
    return a.side_of[p], a.vdist_of[p]


# -- trees --------------------------------------------------------------------

class TreeKind(enum.Enum):
    LINE = "line"
    COMB = "comb"
    DOUBLE_COMB = "double_comb"


@dataclass(frozen=True)
class Comb:
    """A set of horizontal teeth hanging off a vertical handle.

    ``handle`` runs from the root away from the base.  ``teeth[i]`` is the
    row attached to ``handle[i]``, ordered outward from the handle and not
    including the handle pixel itself (it may be empty).
    """

    handle: tuple[Pixel, ...]
    teeth: tuple[tuple[Pixel, ...], ...]
    orientation: Dir  # W for a leftward comb, E for a rightward one

    @property
    def pixels(self) -> frozenset[Pixel]:
        return frozenset(self.handle).union(*self.teeth)

    def tooth_line(self, i: int) -> tuple[Pixel, ...]:
        """Root-anchored line up the handle to row ``i`` and out along its tooth."""
        return self.handle[: i + 1] + self.teeth[i]


@dataclass(frozen=True)
class ClearTree:
    kind: TreeKind
    root: Pixel
    base: BoundarySide
    pixels: frozenset[Pixel]
    path: tuple[Pixel, ...] = ()  # LINE only, root first
    combs: tuple[Comb, ...] = ()  # one for COMB, two (W then E) for DOUBLE_COMB
    parent: Mapping[Pixel, Pixel | None] = field(default_factory=dict, compare=False)

    @property
    def size(self) -> int:
        return len(self.pixels)

    @property
    def handle(self) -> tuple[Pixel, ...]:
        return self.combs[0].handle if self.combs else ()

    def to_json(self) -> dict:
        out: dict = {
            "kind": self.kind.value,
            "root": list(self.root),
            "base": {"pixel": list(self.base.pixel), "side": self.base.side.value,
                     "ccw_index": self.base.ccw_index},
            "pixels": [list(p) for p in sorted(self.pixels)],
        }
        if self.kind is TreeKind.LINE:
            out["path"] = [list(p) for p in self.path]
        else:
            out["combs"] = [{"orientation": c.orientation.value,
                             "handle": [list(p) for p in c.handle],
                             "teeth": [[list(p) for p in t] for t in c.teeth]}
                            for c in self.combs]
        return out


def _as_line(cell: set[Pixel], root: Pixel) -> tuple[Pixel, ...] | None:
    path = [root]
    prev = None
    cur = root
    while True:
        nxt = [cur.step(d) for d in Dir if cur.step(d) in cell and cur.step(d) != prev]
        if len(nxt) > 1:
            return None
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        if cur in path:
            return None
        path.append(cur)
    if len(path) != len(cell):
        return None
    # the induced dual graph must be the path itself, with at most one bend
    dirs = [Dir.between(a, b) for a, b in zip(path, path[1:])]
    bends = sum(1 for a, b in zip(dirs, dirs[1:]) if a != b)
    if bends > 1:
        return None
    index = {p: i for i, p in enumerate(path)}
    for p in path:
        for d in Dir:
            q = p.step(d)
            if q in index and abs(index[q] - index[p]) != 1:
                return None
    return tuple(path)


def _as_combs(cell: set[Pixel], root: Pixel, base: BoundarySide) -> tuple[Comb, ...] | None:
    if not base.horizontal:
        return None
    up = base.side.opposite
    handle = [root]
    while handle[-1].step(up) in cell:
        handle.append(handle[-1].step(up))
    left: list[tuple[Pixel, ...]] = []
    right: list[tuple[Pixel, ...]] = []
    covered = set(handle)
    for h in handle:
        for d, teeth in ((Dir.W, left), (Dir.E, right)):
            row = []
            q = h.step(d)
            while q in cell:
                row.append(q)
                q = q.step(d)
            teeth.append(tuple(row))
            covered.update(row)
    if covered != cell:
        return None
    combs = []
    if any(left):
        combs.append(Comb(tuple(handle), tuple(left), Dir.W))
    if any(right):
        combs.append(Comb(tuple(handle), tuple(right), Dir.E))
    if not combs:
        return None
    return tuple(combs)


def classify_cell(cell: set[Pixel], base: BoundarySide,
                  parent: Mapping[Pixel, Pixel | None] | None = None) -> ClearTree:
    root = base.pixel
    if root not in cell:
        raise ClassificationError(f"cell of {base} does not contain its root")
    path = _as_line(cell, root)
    parent = dict(parent or {})
    if path is not None:
        return ClearTree(TreeKind.LINE, root, base, frozenset(cell), path=path, parent=parent)
    combs = _as_combs(cell, root, base)
    if combs is None:
        raise ClassificationError(
            f"cell of side {base.ccw_index} at {root} ({len(cell)} pixels) "
            "is not a line or comb")
    kind = TreeKind.COMB if len(combs) == 1 else TreeKind.DOUBLE_COMB
    return ClearTree(kind, root, base, frozenset(cell), combs=combs, parent=parent)


def decompose(domain: PixelDomain,
              assignment: VoronoiAssignment | None = None) -> list[ClearTree]:
    """Nonempty Voronoi cells as classified trees, in counterclockwise base order."""
    a = assignment or voronoi_assignment(domain)
    cells: dict[BoundarySide, set[Pixel]] = {}
    for p, s in a.side_of.items():
        cells.setdefault(s, set()).add(p)
    trees = []
    for side in a.sides:
        cell = cells.get(side)
        if cell:
            trees.append(classify_cell(cell, side, {p: a.toward[p] for p in cell}))
    return trees


def decomposition_json(trees: list[ClearTree]) -> str:
    return json.dumps([t.to_json() for t in trees], sort_keys=True, separators=(",", ":"))


def boundary_edge_length(sides: tuple[BoundarySide, ...] | list[BoundarySide],
                         side: BoundarySide) -> int:
    """Number of collinear unit sides in the boundary edge containing ``side``."""
    n = len(sides)
    i = side.ccw_index
    length = 1
    for step in (1, -1):
        j = i
        while True:
            j = (j + step) % n
            s = sides[j]
            if j == i or s.side != side.side:
                break
            # consecutive collinear sides belong to neighbouring pixels
            prev = sides[(j - step) % n]
            if s.pixel != prev.pixel.step(_along_edge(side.side, step)):
                break
            length += 1
    return length


def _along_edge(side: Dir, step: int) -> Dir:
    # ccw traversal along an S side moves east, along E north, N west, W south
    fwd = {Dir.S: Dir.E, Dir.E: Dir.N, Dir.N: Dir.W, Dir.W: Dir.S}[side]
    return fwd if step == 1 else fwd.opposite
