"""Bracketed 1-D minimization: coarse grid followed by golden-section refinement."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-6
) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on ``[a, b]`` until the bracket is narrower than ``tol``."""
    a, b = min(a, b), max(a, b)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def grid_golden_minimize(
    f: Callable[[float], float],
    lo: float = 0.0,
    hi: float = 1.0,
    points: int = 65,
    tol: float = 1e-6,
) -> tuple[float, float]:
    """Global-ish minimum of ``f`` on ``[lo, hi]``.

    The grid includes both endpoints; among equal grid minima the largest
    abscissa wins. The golden-section result only replaces the grid point if it
    is strictly lower.
    """
    xs = np.linspace(lo, hi, points)
    values = np.array([f(x) for x in xs])
    k = points - 1 - int(np.argmin(values[::-1]))
    best_x, best_f = float(xs[k]), float(values[k])
    left, right = xs[max(k - 1, 0)], xs[min(k + 1, points - 1)]
    x, fx = golden_section(f, left, right, tol)
    if fx < best_f:
        return float(x), float(fx)
    return best_x, best_f
