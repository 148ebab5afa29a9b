"""Log-domain helpers for probabilities far below double-precision range."""

from __future__ import annotations

import math

LN_HALF = -math.log(2.0)
# exp() of anything below this is not representable as a normal double
UNDERFLOW_LN = -700.0


def exp_probability(ln_p: float) -> tuple[float, bool]:
    """Exponentiate a log-probability; returns ``(p, underflowed)``.

    Values below ``exp(UNDERFLOW_LN)`` come back as ``0.0`` with the flag set
    instead of as a silently denormal or zero number.
    """
    if ln_p < UNDERFLOW_LN:
        return 0.0, True
    return math.exp(ln_p), False


def ln_half_one_minus_sqrt_one_minus(ln_y: float) -> float:
    """``ln[(1 - sqrt(1 - y)) / 2]`` for ``0 <= y <= 1`` given ``ln y``.

    Uses ``1 - sqrt(1 - y) = -expm1(ln(1 - y) / 2)``; for ``y`` below the
    underflow floor the leading term ``y/2`` is used, i.e. ``ln y - ln 4``.
    """
    if ln_y == -math.inf:
        return -math.inf
    if ln_y < UNDERFLOW_LN:
        return ln_y - 2.0 * math.log(2.0)
    if ln_y >= 0.0:
        return LN_HALF
    # ln(1 - y): log1p is exact for small y, log(-expm1) for y near 1
    if ln_y < -math.log(2.0):
        ln_one_minus_y = math.log1p(-math.exp(ln_y))
    else:
        ln_one_minus_y = math.log(-math.expm1(ln_y))
    return math.log(-math.expm1(0.5 * ln_one_minus_y)) + LN_HALF


def log10(ln_p: float) -> float:
    return ln_p / math.log(10.0)
