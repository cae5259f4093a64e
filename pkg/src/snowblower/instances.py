"""Random polygon generation and exhaustive enumeration of small domains."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Iterator

from .errors import SnowblowerError
from .grid import Dir, Pixel, PixelDomain


@dataclass(frozen=True)
class GenSpec:
    target_pixels: int
    seed: int = 0
    min_feature_width: int = 1

    def __post_init__(self) -> None:
        if self.target_pixels < 1:
            raise ValueError("target_pixels must be at least 1")
        if self.min_feature_width < 1:
            raise ValueError("min_feature_width must be at least 1")


class GenerationError(SnowblowerError):
    pass


def _articulation_points(pixels: set[Pixel]) -> set[Pixel]:
    # iterative Tarjan; networkx is too slow for the inner generation loop
    start = next(iter(pixels))
    disc = {start: 0}
    low = {start: 0}
    out: set[Pixel] = set()
    root_children = 0
    stack = [(start, None, iter([start.step(d) for d in Dir]))]
    counter = 1
    while stack:
        v, parent, it = stack[-1]
        advanced = False
        for w in it:
            if w not in pixels or w == parent:
                continue
            if w in disc:
                low[v] = min(low[v], disc[w])
            else:
                disc[w] = low[w] = counter
                counter += 1
                stack.append((w, v, iter([w.step(d) for d in Dir])))
                advanced = True
                break
        if advanced:
            continue
        stack.pop()
        if parent is not None:
            low[parent] = min(low[parent], low[v])
            if parent == start:
                root_children += 1
            elif low[v] >= disc[parent]:
                out.add(parent)
    if root_children > 1:
        out.add(start)
    if len(disc) != len(pixels):
        out.add(start)  # disconnected: report something so callers reject
    return out


def _has_hole(pixels: set[Pixel]) -> bool:
    xs = [p.x for p in pixels]
    ys = [p.y for p in pixels]
    x0, x1, y0, y1 = min(xs) - 1, max(xs) + 1, min(ys) - 1, max(ys) + 1
    free = (x1 - x0 + 1) * (y1 - y0 + 1) - len(pixels)
    seen = {Pixel(x0, y0)}
    queue = deque(seen)
    while queue:
        p = queue.popleft()
        for d in Dir:
            q = p.step(d)
            if x0 <= q.x <= x1 and y0 <= q.y <= y1 and q not in pixels and q not in seen:
                seen.add(q)
                queue.append(q)
    return len(seen) != free


def plannable(pixels: set[Pixel]) -> bool:
    return len(pixels) <= 2 or not (_has_hole(pixels) or _articulation_points(pixels))


def min_width_ok(pixels: set[Pixel], width: int) -> bool:
    """Every pixel lies inside a ``width`` x ``width`` square of the set."""
    if width <= 1:
        return True
    covered: set[Pixel] = set()
    for p in pixels:
        if all(Pixel(p.x + i, p.y + j) in pixels for i in range(width) for j in range(width)):
            covered.update(Pixel(p.x + i, p.y + j) for i in range(width) for j in range(width))
    return covered == pixels


def _blocks(width: int) -> list[tuple[int, int]]:
    if width <= 1:
        return [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1), (2, 3), (3, 2)]
    return [(width, width), (width, width + 1), (width + 1, width)]


def generate(spec: GenSpec, max_attempts: int = 50) -> PixelDomain:
    """Grow a random plannable polygon by accreting small rectangles."""
    rng = random.Random(spec.seed)
    target = spec.target_pixels
    lo, hi = max(1, int(target * 0.8 + 0.999)), int(target * 1.2)
    if target <= 2 and spec.min_feature_width <= 1:
        pixels = {Pixel(0, 0), Pixel(1, 0)} if target == 2 else {Pixel(0, 0)}
        return _with_garage(pixels, rng)
    w0 = max(2, spec.min_feature_width)
    shapes = _blocks(spec.min_feature_width)
    for _ in range(max_attempts):
        pixels = {Pixel(x, y) for x in range(w0) for y in range(w0)}
        stalls = 0
        while len(pixels) < target and stalls < 400:
            bw, bh = rng.choice(shapes)
            anchor = rng.choice(sorted(pixels))
            ox = anchor.x + rng.randint(-bw, 1)
            oy = anchor.y + rng.randint(-bh, 1)
            block = {Pixel(ox + i, oy + j) for i in range(bw) for j in range(bh)}
            grown = pixels | block
            if len(grown) == len(pixels) or len(grown) > hi:
                stalls += 1
                continue
            if not plannable(grown) or not min_width_ok(grown, spec.min_feature_width):
                stalls += 1
                continue
            pixels = grown
            stalls = 0
        if lo <= len(pixels) <= hi:
            return _with_garage(pixels, rng)
    raise GenerationError(f"could not grow a domain of ~{target} pixels (seed {spec.seed})")


def corpus(n: int, seed: int = 0, min_pixels: int = 10, max_pixels: int = 300,
           min_feature_width: int = 1) -> list[PixelDomain]:
    """``n`` generated domains of at most ``max_pixels`` pixels.

    Domain ``i`` uses seed ``seed + i``, which also draws its target size
    low enough that the generator's 20% tolerance respects ``max_pixels``.
    """
    top = max(min_pixels, int(max_pixels / 1.2))
    out = []
    for i in range(n):
        s = seed + i
        target = random.Random(s).randint(min_pixels, top)
        out.append(generate(GenSpec(target, s, min_feature_width)))
    return out


def _with_garage(pixels: set[Pixel], rng: random.Random) -> PixelDomain:
    x0 = min(p.x for p in pixels)
    y0 = min(p.y for p in pixels)
    pixels = {Pixel(p.x - x0, p.y - y0) for p in pixels}
    boundary = sorted(p for p in pixels if any(p.step(d) not in pixels for d in Dir))
    return PixelDomain(frozenset(pixels), rng.choice(boundary))


# -- enumeration ----------------------------------------------------------------

def canonical(pixels) -> tuple[Pixel, ...]:
    """Lexicographically smallest translation: shift to the origin and sort."""
    x0 = min(p[0] for p in pixels)
    y0 = min(p[1] for p in pixels)
    return tuple(sorted(Pixel(p[0] - x0, p[1] - y0) for p in pixels))


def fixed_polyominoes(n: int) -> set[tuple[Pixel, ...]]:
    """All polyominoes of exactly ``n`` cells, up to translation only."""
    if n == 1:
        return {(Pixel(0, 0),)}
    out = set()
    for shape in fixed_polyominoes(n - 1):
        cells = set(shape)
        for c in shape:
            for d in Dir:
                q = c.step(d)
                if q not in cells:
                    out.add(canonical(cells | {q}))
    return out


def enumerate_shapes(max_pixels: int) -> list[tuple[Pixel, ...]]:
    """Plannable (hole- and articulation-free) shapes up to translation."""
    if max_pixels > 8:
        raise ValueError("enumeration is limited to 8 pixels")
    shapes = []
    for n in range(1, max_pixels + 1):
        shapes.extend(s for s in sorted(fixed_polyominoes(n)) if plannable(set(s)))
    return shapes


def enumerate_small(max_pixels: int) -> Iterator[PixelDomain]:
    """Every plannable shape with every boundary-pixel garage choice."""
    for shape in enumerate_shapes(max_pixels):
        cells = set(shape)
        for g in shape:
            if any(g.step(d) not in cells for d in Dir):
                yield PixelDomain(frozenset(shape), g)


# -- line contexts ----------------------------------------------------------------

@dataclass(frozen=True)
class LineInstance:
    """A line of a given kind inside a small domain, with its base side."""

    domain: PixelDomain
    line: tuple[Pixel, ...]
    base: Dir
    kind: str


def line_instance(kind: str, ell: int, J: int = 1, variant: bool = False,
                  bend: int = 1, turn: Dir = Dir.W) -> LineInstance:
    """Line of ``ell`` pixels with its first ``J`` (and their companions) clear.

    ``kind`` is ``perpendicular``, ``parallel-left``, ``parallel-right`` or
    ``L-shaped``.  ``variant`` selects the boundary turning away after the
    base (an extra pixel below the pixel following the root).  An L-shaped
    line goes up ``bend`` pixels from the root, then towards ``turn``.
    """
    if not 1 <= J <= ell:
        raise ValueError("need 1 <= J <= ell")
    root = Pixel(0, 0)
    extra: set[Pixel] = set()
    clear: set[Pixel] = set()
    if kind == "perpendicular":
        line = [Pixel(0, y) for y in range(ell)]
        comp = [p.step(Dir.E) for p in line]
        base = Dir.S
        if variant:
            extra.add(Pixel(1, -1))
    elif kind == "parallel-left":
        line = [Pixel(-i, 0) for i in range(ell)]
        comp = [p.step(Dir.N) for p in line]
        base = Dir.S
        extra |= {Pixel(1, 0), Pixel(1, 1)}
        if variant:
            extra.add(Pixel(1, -1))
    elif kind == "parallel-right":
        line = [Pixel(i, 0) for i in range(ell)]
        comp = [p.step(Dir.S) for p in line[1:]]
        base = Dir.S
    elif kind == "L-shaped":
        if not 1 <= bend < ell - 1 or turn not in (Dir.E, Dir.W):
            raise ValueError("an L-shaped line needs 1 <= bend < ell - 1 and turn E or W")
        line = [Pixel(0, y) for y in range(bend + 1)]
        line += [Pixel(turn.dx * i, bend) for i in range(1, ell - bend)]
        comp = [Pixel(1, y) for y in range(bend + 1)]
        comp += [p.step(turn.cw) for p in line[bend + 1:]]
        base = Dir.S
        helpers = {Pixel(0, bend + 1), Pixel(1, bend + 1)}
        extra |= helpers
        clear |= helpers
        if variant:
            extra.add(Pixel(1, -1))
    else:
        raise ValueError(f"unknown line kind {kind!r}")
    pixels = set(line) | set(comp) | extra
    clear |= set(line[:J])
    clear |= {c for c in comp if any(c == p.step(d) for p in line[:J] for d in Dir)
              and (c in comp[:J] if kind != "parallel-right" else c in comp[: max(J - 1, 0)])}
    depth = {p: 0 for p in clear if p in pixels}
    domain = PixelDomain(frozenset(pixels), root, depth)
    return LineInstance(domain, tuple(line), base, kind)


def random_line_instance(rng: random.Random, max_ell: int = 12) -> LineInstance:
    kind = rng.choice(["perpendicular", "parallel-left", "parallel-right", "L-shaped"])
    ell = rng.randint(3 if kind == "L-shaped" else 2, max_ell)
    J = rng.randint(1, max(1, ell // 3))
    bend = rng.randint(1, ell - 2) if kind == "L-shaped" else 1
    J = min(J, bend) if kind == "L-shaped" else J
    return line_instance(kind, ell, J, rng.random() < 0.5, bend, rng.choice([Dir.E, Dir.W]))
