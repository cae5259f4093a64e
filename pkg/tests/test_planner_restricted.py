from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snowblower.bounds import guaranteed_factor, lower_bounds
from snowblower.errors import PlanningError
from snowblower.grid import Pixel, PixelDomain
from snowblower.instances import GenSpec, generate
from snowblower.planner_restricted import (clear_line_adjustable, lane_throw, plan_adjustable,
                                           plan_fixed)
from snowblower.sim import Runner, Throw, ThrowModel, simulate

from conftest import block

ONE = PixelDomain.from_pixels([(0, 0)], (0, 0))


def strip_line(ell: int, D: int) -> tuple[Runner, list[Pixel]]:
    """Vertical line of ``ell`` pixels up the middle of a 3-wide strip, root clear."""
    pixels = [(x, y) for x in (-1, 0, 1) for y in range(ell)]
    domain = PixelDomain.from_pixels(pixels, (0, 0))
    return Runner(domain, ThrowModel.ADJUSTABLE, D), [Pixel(0, y) for y in range(ell)]


def adjustable_line_bound(ell: int, J: int, D: int) -> int:
    half = D // 2
    k = (ell - J) // half
    return 2 * k * J + half * k * (k + 1) + 2 * ell


@pytest.mark.parametrize("ell, D", [(5, 4), (4, 2), (6, 2), (9, 5)])
def test_adjustable_line(ell, D):
    runner, line = strip_line(ell, D)
    passes = clear_line_adjustable(runner, line)
    assert passes and sum(passes) >= ell - 1
    assert not any(runner.snow(p) for p in line)
    assert runner.pos == line[0]
    assert all(m.throw is not Throw.B for m in runner.moves)
    assert runner.peak <= D
    assert len(runner.moves) <= adjustable_line_bound(ell, 1, D)


def test_adjustable_line_of_one_pixel_is_empty():
    runner, line = strip_line(1, 2)
    assert clear_line_adjustable(runner, line) == []
    assert runner.moves == []


def test_adjustable_line_needs_the_right_model():
    domain = block(3, 3)
    with pytest.raises(PlanningError):
        clear_line_adjustable(Runner(domain, ThrowModel.DEFAULT, 2), [Pixel(0, 0), Pixel(0, 1)])


def test_lane_throw_points_outside_bends():
    straight = [Pixel(0, y) for y in range(3)]
    right_bend = [Pixel(0, 0), Pixel(0, 1), Pixel(1, 1)]
    assert lane_throw(ThrowModel.ADJUSTABLE, straight) is Throw.R
    assert lane_throw(ThrowModel.ADJUSTABLE, right_bend) is Throw.L
    assert lane_throw(ThrowModel.FIXED, right_bend) is Throw.R


@pytest.mark.parametrize("plan", [plan_adjustable, plan_fixed])
def test_single_pixel_domain(plan):
    assert len(plan(ONE, 2)) == 0


def test_adjustable_block():
    d = block(2, 2)
    tour = plan_adjustable(d, 2)
    rep = simulate(d, tour, ThrowModel.ADJUSTABLE, 2)
    assert rep.cleared and rep.closed and rep.cost <= 30
    assert all(m.throw is not Throw.B for m in tour.moves)


def test_fixed_block():
    d = block(3, 3)
    tour = plan_fixed(d, 2)
    rep = simulate(d, tour, ThrowModel.FIXED, 2)
    assert rep.cleared and rep.closed
    assert rep.cost <= 58 * lower_bounds(d, 2).best
    assert all(m.throw is Throw.R for m in tour.moves)


def check(domain: PixelDomain, model: ThrowModel, D: int) -> None:
    plan = plan_adjustable if model is ThrowModel.ADJUSTABLE else plan_fixed
    tour = plan(domain, D)
    assert all(m.throw in model.allowed for m in tour.moves)
    rep = simulate(domain, tour, model, D)
    assert rep.cleared and rep.closed and rep.max_depth_seen <= D
    assert rep.cost <= guaranteed_factor(model, D) * lower_bounds(domain, D).best


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([2, 4, 5]))
def test_adjustable_on_random_polygons(seed, D):
    check(generate(GenSpec(100, seed)), ThrowModel.ADJUSTABLE, D)


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([2, 4]))
def test_fixed_on_wide_random_polygons(seed, D):
    check(generate(GenSpec(100, seed, min_feature_width=2)), ThrowModel.FIXED, D)


@settings(max_examples=12, deadline=None)
@given(st.integers(4, 60), st.integers(0, 10_000), st.integers(2, 6))
def test_fixed_on_thin_random_polygons(target, seed, D):
    check(generate(GenSpec(target, seed)), ThrowModel.FIXED, D)


def test_tours_are_deterministic():
    d = generate(GenSpec(80, 5))
    assert plan_fixed(d, 3) == plan_fixed(d, 3)
    assert plan_adjustable(d, 3) == plan_adjustable(d, 3)

