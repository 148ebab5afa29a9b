import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from qreading.search import golden_section, grid_golden_minimize


def test_golden_section_quadratic():
    x, fx = golden_section(lambda t: (t - 0.3) ** 2, 0.0, 1.0, tol=1e-8)
    assert abs(x - 0.3) < 1e-7
    assert fx < 1e-14


def test_golden_section_accepts_reversed_bracket():
    x, _ = golden_section(lambda t: (t - 0.7) ** 2, 1.0, 0.0, tol=1e-8)
    assert abs(x - 0.7) < 1e-7


def test_grid_finds_boundary_minimum():
    x, fx = grid_golden_minimize(lambda t: 1.0 - t, 0.0, 1.0)
    assert x == 1.0 and fx == 0.0
    x, _ = grid_golden_minimize(lambda t: t, 0.0, 1.0)
    assert x == 0.0


def test_ties_resolve_to_largest_abscissa():
    x, fx = grid_golden_minimize(lambda t: 0.0, 0.0, 1.0)
    assert x == 1.0 and fx == 0.0


def test_grid_escapes_local_minimum():
    # two wells; the deeper one is near 0.8
    f = lambda t: min((t - 0.15) ** 2 + 0.05, 3 * (t - 0.8) ** 2)
    x, fx = grid_golden_minimize(f, 0.0, 1.0, tol=1e-9)
    assert abs(x - 0.8) < 1e-6 and fx < 1e-12


@settings(max_examples=50, deadline=None)
@given(c=st.floats(0.0, 1.0), w=st.floats(0.1, 10.0))
def test_matches_scipy_bounded(c, w):
    f = lambda t: w * (t - c) ** 2 + math.cosh(t - c)
    x, fx = grid_golden_minimize(f, 0.0, 1.0)
    ref = minimize_scalar(f, bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-10})
    assert fx <= ref.fun + 1e-10
    assert abs(x - ref.x) < 1e-5


@pytest.mark.parametrize("points", [3, 17, 65])
def test_grid_size_is_respected(points):
    calls = []

    def f(t):
        calls.append(t)
        return (t - 0.5) ** 2

    grid_golden_minimize(f, 0.0, 1.0, points=points)
    assert calls[:points][0] == 0.0 and calls[points - 1] == 1.0
