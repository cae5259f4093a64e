from __future__ import annotations

import random

import pytest

from snowblower.errors import PlanningError
from snowblower.fixed_line import Gadget, LineKind, clear_line_fixed, line_kind
from snowblower.grid import Dir, Pixel, PixelDomain
from snowblower.instances import line_instance, random_line_instance
from snowblower.sim import Runner, Throw, ThrowModel


def run(inst, D):
    runner = Runner(inst.domain, ThrowModel.FIXED, D)
    return runner, clear_line_fixed(runner, inst.line, inst.base)


def line_cost_bound(ell: int, J: int, D: int) -> int:
    h = D // 2
    k, r = divmod(ell - J, h)
    passes = sum(J - 1 + (i - 1) * h + 5 * h + 7 * (J + i * h - 1) for i in range(1, k + 1))
    return 12 + passes + J + 5 * r + 7 * (ell - 1)


@pytest.mark.parametrize("kind, variant, setup", [
    ("perpendicular", False, 2),
    ("perpendicular", True, 4),
    ("parallel-left", False, 8),
    ("parallel-left", True, 12),
    ("parallel-right", False, 3),
    ("L-shaped", False, 2),
    ("L-shaped", True, 4),
])
def test_setup_costs(kind, variant, setup):
    inst = line_instance(kind, 5, variant=variant, bend=2)
    runner, log = run(inst, 4)
    assert log.kind is LineKind(kind)
    assert log.moves_of(Gadget.SETUP) == [setup]
    assert log.segments[0].gadget is Gadget.SETUP and log.segments[0].start == 0


def test_short_perpendicular_line_within_line_cost_bound():
    inst = line_instance("perpendicular", 3)
    runner, log = run(inst, 2)
    assert not any(runner.snow(p) for p in inst.line)
    assert runner.pos == inst.line[0]
    assert log.total == len(runner.moves) == 30
    assert len(runner.moves) <= line_cost_bound(3, 1, 2) == 59


@pytest.mark.parametrize("kind", ["perpendicular", "parallel-left", "parallel-right", "L-shaped"])
@pytest.mark.parametrize("D", [2, 3, 5, 8])
def test_lines_clear_with_exact_gadget_counts(kind, D):
    inst = line_instance(kind, 7, J=2, bend=3, turn=Dir.E)
    runner, log = run(inst, D)
    assert all(m.throw is Throw.R for m in runner.moves)
    assert not any(runner.snow(p) for p in inst.line)
    assert runner.peak <= D
    assert set(log.moves_of(Gadget.BACK_THROW)) <= {5}
    assert set(log.moves_of(Gadget.LAST_BACK_THROW)) <= {3}
    assert set(log.moves_of(Gadget.PUSH)) <= {7}
    assert max(log.moves_of(Gadget.FINAL_DISPOSAL)) <= 9
    starts = [s.start for s in log.segments]
    assert starts == sorted(starts) and log.total == len(runner.moves)


def test_random_straight_lines_stay_within_the_line_cost_bound():
    rng = random.Random(11)
    for _ in range(400):
        inst = random_line_instance(rng)
        D = rng.randint(2, 8)
        if inst.kind == "L-shaped":  # the corner repositioning walks are not in the bound
            continue
        J = next(i for i, p in enumerate(inst.line) if inst.domain.depth[p])
        runner, log = run(inst, D)
        # the expression prices each final disposal like a 7-move push
        surplus = sum(m - 7 for m in log.moves_of(Gadget.FINAL_DISPOSAL) if m > 7)
        assert len(runner.moves) <= line_cost_bound(len(inst.line), J, D) + surplus


def test_line_kinds():
    up = [Pixel(0, y) for y in range(3)]
    assert line_kind(up, Dir.S) is LineKind.PERPENDICULAR
    assert line_kind(up, Dir.W) is LineKind.PARALLEL_LEFT
    assert line_kind(up, Dir.E) is LineKind.PARALLEL_RIGHT
    assert line_kind(up + [Pixel(1, 2)], Dir.S) is LineKind.L_SHAPED
    with pytest.raises(PlanningError):
        line_kind(up, Dir.N)
    with pytest.raises(PlanningError):
        line_kind(up[:1], Dir.S)


def test_missing_companions_are_reported():
    line = [Pixel(0, y) for y in range(4)]
    domain = PixelDomain(frozenset(line), line[0])
    with pytest.raises(PlanningError, match="companion"):
        clear_line_fixed(Runner(domain, ThrowModel.FIXED, 2), line, Dir.S)


def test_needs_a_fixed_runner():
    inst = line_instance("perpendicular", 3)
    with pytest.raises(PlanningError):
        clear_line_fixed(Runner(inst.domain, ThrowModel.DEFAULT, 2), inst.line, inst.base)


def test_snowy_helpers_beyond_the_bend_are_reported():
    inst = line_instance("L-shaped", 5, bend=2)
    helpers = (Pixel(0, 3), Pixel(1, 3))
    depth = {p: inst.domain.depth[p] for p in inst.domain.pixels} | {helpers[0]: 1}
    domain = PixelDomain(inst.domain.pixels, inst.domain.garage, depth)
    with pytest.raises(PlanningError, match="bend"):
        clear_line_fixed(Runner(domain, ThrowModel.FIXED, 2), inst.line, inst.base)
