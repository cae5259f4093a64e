"""Acceptance criteria 1-6, one PASS/FAIL line each on stdout (run with ``-s`` to see them)."""

from __future__ import annotations

import random
import time
from fractions import Fraction

import pytest

from snowblower.bounds import (guaranteed_factor, lower_bounds, optimal_cost_exhaustive,
                               _planners)
from snowblower.fixed_line import (BACK_THROW_MOVES, LAST_BACK_THROW_MOVES,
                                   MAX_FINAL_DISPOSAL_MOVES, PUSH_MOVES, SETUP_MOVES, Gadget,
                                   clear_line_fixed)
from snowblower.grid import Dir, Pixel, PixelDomain
from snowblower.instances import corpus, enumerate_small, random_line_instance
from snowblower.planner_default import LineClearPlan, clear_line_default
from snowblower.sim import Runner, ThrowModel
from snowblower.voronoi import TreeKind, boundary_edge_length, decompose, voronoi_assignment

from conftest import CORPUS_SIZE, DEPTHS


def report(number: int, ok: bool, detail: str) -> None:
    print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")


@pytest.mark.slow
def test_criterion_1_feasibility(feasibility_corpus, corpus_plans):
    results, elapsed = corpus_plans
    assert all(len(d.pixels) <= 300 for d in feasibility_corpus)
    failures = []
    for (i, model, D), outcome in sorted(results.items(), key=lambda kv: (kv[0][0], kv[0][1].value, kv[0][2])):
        if isinstance(outcome, Exception):
            failures.append((i, model.value, D, repr(outcome)))
            continue
        tour, rep = outcome
        legal = all(m.throw in model.allowed for m in tour.moves)
        if not (rep.cleared and rep.closed and rep.max_depth_seen <= D and legal):
            failures.append((i, model.value, D, rep.to_dict()))
    ok = not failures and elapsed < 300
    report(1, ok, f"{len(results)} plans, {len(failures)} failures, {elapsed:.0f}s")
    assert len(results) == CORPUS_SIZE * len(DEPTHS) * 3
    assert not failures, failures[:5]
    assert elapsed < 300


@pytest.mark.slow
def test_criterion_2_guarantee(feasibility_corpus, corpus_plans):
    results, _ = corpus_plans
    violations = []
    worst = Fraction(0)
    for i, domain in enumerate(feasibility_corpus):
        for D in DEPTHS:
            best = lower_bounds(domain, D).best
            for model in ThrowModel:
                outcome = results[i, model, D]
                if isinstance(outcome, Exception):
                    violations.append((i, model.value, D, "no tour"))
                    continue
                cost = outcome[1].cost
                factor = guaranteed_factor(model, D)
                if not cost <= factor * best:
                    violations.append((i, model.value, D, cost, factor * best))
                if best:
                    worst = max(worst, Fraction(cost) / (factor * best))
    report(2, not violations, f"{len(violations)} violations, worst cost/(factor*lb) = {float(worst):.3f}")
    assert not violations, violations[:5]


@pytest.mark.slow
def test_criterion_3_oracle():
    start = time.perf_counter()
    planners = _planners()
    violations = []
    checked = 0
    for domain in enumerate_small(7):
        for D in (2, 3):
            best = lower_bounds(domain, D).best
            for model in (ThrowModel.DEFAULT, ThrowModel.ADJUSTABLE):
                opt = optimal_cost_exhaustive(domain, model, D)
                cost = len(planners[model](domain, D))
                checked += 1
                if opt < best:
                    violations.append(("lb", sorted(domain.pixels), domain.garage, model.value, D, opt, best))
                factor = guaranteed_factor(model, D)
                if opt == 0 and cost != 0 or opt and Fraction(cost, opt) > factor:
                    violations.append(("ratio", sorted(domain.pixels), domain.garage, model.value, D, cost, opt))
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 1800
    report(3, ok, f"{checked} oracle runs, {len(violations)} violations, {elapsed:.0f}s")
    assert checked == 21 * 2 * 2
    assert not violations, violations[:5]
    assert elapsed < 1800


def test_criterion_4_cost_identity():
    rng = random.Random(4)
    bad = []
    for _ in range(1000):
        ell = rng.randint(1, 50)
        J = rng.randint(1, ell)
        D = rng.randint(2, 10)
        line = [Pixel(0, y) for y in range(ell)]
        domain = PixelDomain(frozenset(line), line[0], {p: 0 for p in line[:J]})
        runner = Runner(domain, ThrowModel.DEFAULT, D)
        passes = clear_line_default(runner, line, Dir.S)
        plan = LineClearPlan(ell, J, D)
        expected = sum(2 * (J - 1 + i * D) for i in range(1, plan.k + 1)) + \
            (2 * (ell - 1) if plan.r else 0)
        if len(runner.moves) != expected or runner.pos != line[0] or \
                any(runner.snow(p) for p in line) or runner.state.discarded != ell - J or \
                any(units != D for units in passes[:-1]) or sum(passes) != ell - J:
            bad.append((ell, J, D, len(runner.moves), expected, passes))
    report(4, not bad, f"1000 lines, {len(bad)} mismatches")
    assert not bad, bad[:5]


def test_criterion_5_structure(cross, cross_center):
    problems = []
    for domain in corpus(500, seed=10_000):
        a = voronoi_assignment(domain)
        trees = decompose(domain, a)
        covered = [p for t in trees for p in t.pixels]
        if len(covered) != len(set(covered)) or set(covered) != domain.pixels:
            problems.append(("partition", domain.garage))
        for t in trees:
            if t.kind is TreeKind.LINE:
                continue
            if not t.base.horizontal:
                problems.append(("vertical comb base", t.root))
            if t.kind is TreeKind.DOUBLE_COMB and boundary_edge_length(a.sides, t.base) != 1:
                problems.append(("double comb on a long edge", t.root))
            if t.kind not in (TreeKind.COMB, TreeKind.DOUBLE_COMB):
                problems.append(("kind", t.kind))
    vd = voronoi_assignment(cross).vdist_of[cross_center]
    ok = not problems and vd == 4
    report(5, ok, f"500 polygons, {len(problems)} structural problems, cross centre vd = {vd}")
    assert not problems, problems[:5]
    assert vd == 4


def test_criterion_6_gadget_counts():
    rng = random.Random(6)
    problems = []
    counted = {g: 0 for g in Gadget}
    for n in range(100):
        inst = random_line_instance(rng)
        D = rng.randint(2, 8)
        runner = Runner(inst.domain, ThrowModel.FIXED, D)
        log = clear_line_fixed(runner, inst.line, inst.base)
        for s in log.segments:
            counted[s.gadget] += 1
        checks = {
            "back throw": all(m == BACK_THROW_MOVES for m in log.moves_of(Gadget.BACK_THROW)),
            "last back throw": all(m == LAST_BACK_THROW_MOVES
                                   for m in log.moves_of(Gadget.LAST_BACK_THROW)),
            "push": all(m == PUSH_MOVES for m in log.moves_of(Gadget.PUSH)),
            "setup": len(log.moves_of(Gadget.SETUP)) == 1
            and log.moves_of(Gadget.SETUP)[0] in SETUP_MOVES,
            "final": log.count(Gadget.FINAL_DISPOSAL) >= 1
            and all(m <= MAX_FINAL_DISPOSAL_MOVES for m in log.moves_of(Gadget.FINAL_DISPOSAL)),
            "segments tile the fragment": log.total == len(runner.moves),
            "right throws only": all(m.throw.value == "R" for m in runner.moves),
            "line cleared": not any(runner.snow(p) for p in inst.line),
            "back at root": runner.pos == inst.line[0],
        }
        failed = [k for k, v in checks.items() if not v]
        if failed:
            problems.append((n, inst.kind, len(inst.line), D, failed))
    ok = not problems and counted[Gadget.PUSH] > 0 and counted[Gadget.BACK_THROW] > 0
    report(6, ok, f"100 lines, {len(problems)} bad fragments, "
                  f"{counted[Gadget.BACK_THROW]} back throws, {counted[Gadget.PUSH]} pushes")
    assert not problems, problems[:5]
    assert counted[Gadget.PUSH] > 0 and counted[Gadget.BACK_THROW] > 0
