"""Shared fixtures, cached geometries and hypothesis strategies."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import strategies as st

from goldlight.bilinear import SymmetricForm
from goldlight.connection import PointGeometry
from goldlight.golden import block_product
from goldlight.lightlike import AmbientSpace
from goldlight.scalar import ZERO, ExtScalar
from goldlight.scenario import builtin_scenario, parse_scenario

SIGNS = (-1, -1, 1, 1, -1, -1, 1, 1)

ACCEPTANCE_RESULTS: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, text = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}")


@lru_cache(maxsize=None)
def ambient8() -> AmbientSpace:
    metric = SymmetricForm.diagonal([ExtScalar(s) for s in SIGNS], ZERO)
    return AmbientSpace.build(metric, block_product(4, 4))


@lru_cache(maxsize=None)
def scenario(name):
    return builtin_scenario(name)


@lru_cache(maxsize=None)
def geometry(name, index=0, mode="exact"):
    sc = scenario(name)
    return PointGeometry(sc.ambient, sc.immersion, sc.points[index], screen=sc.screen, mode=mode)


# an alternative screen on curved1: d2 + x1 d1 and d3 - 2 d1, still complementary to the radical
ALT_SCREEN = [["x1", "1", "0"], ["-2", "0", "1"]]


@lru_cache(maxsize=None)
def curved1_alt_geometry(index=0):
    import json
    from goldlight.scenario import builtin_text

    data = json.loads(builtin_text("curved1"))
    data["screen"] = ALT_SCREEN
    sc = parse_scenario(data)
    return PointGeometry(sc.ambient, sc.immersion, sc.points[index], screen=sc.screen)


@pytest.fixture
def amb():
    return ambient8()


# ------------------------------------------------------------------ strategies

small_fractions = st.fractions(min_value=-12, max_value=12, max_denominator=9)


@st.composite
def ext_scalars(draw, nonzero=False):
    coords = [draw(small_fractions) for _ in range(4)]
    # mostly sparse elements, like the ones that show up in practice
    mask = draw(st.lists(st.booleans(), min_size=4, max_size=4))
    coords = [c if keep else Fraction(0) for c, keep in zip(coords, mask)]
    x = ExtScalar(*coords)
    if nonzero and x.is_zero():
        x = ExtScalar(draw(st.integers(1, 9)), *coords[1:])
    return x


def rational_matrix(draw, n, lo=-4, hi=4):
    return [[draw(st.integers(lo, hi)) for _ in range(n)] for _ in range(n)]


@st.composite
def symmetric_forms(draw, max_dim=8):
    n = draw(st.integers(1, max_dim))
    entries = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = draw(st.integers(-3, 3))
            entries[i][j] = entries[j][i] = v
    return SymmetricForm(tuple(tuple(ExtScalar(x) for x in row) for row in entries))
