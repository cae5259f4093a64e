from __future__ import annotations

from pathlib import Path

import pytest

from snowblower.grid import Pixel, PixelDomain, parse_ascii
from snowblower.instances import corpus

DATA = Path(__file__).parent / "data"

CROSS = """\
..###..
..###..
#######
#######
#######
..###..
..#G#..
"""

CORPUS_SIZE = 200
DEPTHS = (2, 3, 4, 5, 7, 8)


def block(w: int, h: int, garage: tuple[int, int] = (0, 0)) -> PixelDomain:
    return PixelDomain.from_pixels([(x, y) for x in range(w) for y in range(h)], garage)


def corridor(n: int) -> PixelDomain:
    return block(n, 1)


@pytest.fixture(scope="session")
def cross() -> PixelDomain:
    return parse_ascii(CROSS)


@pytest.fixture(scope="session")
def cross_center() -> Pixel:
    return Pixel(3, 3)


@pytest.fixture(scope="session")
def feasibility_corpus() -> list[PixelDomain]:
    return corpus(CORPUS_SIZE)


@pytest.fixture(scope="session")
def corpus_plans(feasibility_corpus):
    """Every corpus domain planned for every depth and model, simulated once.

    Maps ``(index, model, D)`` to ``(tour, report)``, or to the raised
    exception when planning or simulation failed.  Also records the wall
    time of the whole batch.
    """
    import time

    from snowblower.bounds import _planners
    from snowblower.sim import simulate

    planners = _planners()
    results = {}
    start = time.perf_counter()
    for i, domain in enumerate(feasibility_corpus):
        for D in DEPTHS:
            for model, plan in planners.items():
                try:
                    tour = plan(domain, D)
                    results[i, model, D] = (tour, simulate(domain, tour, model, D))
                except Exception as e:  # recorded and reported by the acceptance test
                    results[i, model, D] = e
    return results, time.perf_counter() - start
