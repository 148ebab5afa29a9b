"""Bits of information retrieved per memory cell."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .discrimination import (
    _check_intensity,
    ln_classical_lb_noisy,
    scenario_qcb,
)
from .scenario import ReadoutScenario
from .states import TransmitterSpec

__all__ = ["InfoReport", "binary_entropy", "info_retrieved", "info_report"]

LN2 = math.log(2.0)
# below this the entropy is evaluated from ln p without exponentiating first
TINY_P = 1e-15


def binary_entropy(p: float, *, log: bool = False) -> float:
    """Binary Shannon entropy in bits, with ``0 log 0 = 0``.

    With ``log=True`` the argument is ``ln p``. For ``p < 1e-15`` the entropy is
    ``p (1 - ln p) / ln 2`` to leading order, which stays accurate however
    small ``p`` gets (and is exactly zero only once ``p`` underflows).
    """
    if log:
        ln_p = p
        if ln_p > 0.0:
            raise ValueError(f"ln p must be <= 0, got {ln_p}")
        if ln_p == -math.inf:
            return 0.0
        if ln_p < math.log(TINY_P):
            return math.exp(ln_p) * (1.0 - ln_p) / LN2
        p = math.exp(ln_p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return (-p * math.log(p) - (1.0 - p) * math.log1p(-p)) / LN2


def info_retrieved(p_err: float, *, log: bool = False) -> float:
    """``1 - H(p_err)``: average bits read from one cell at error probability ``p_err``."""
    if log:
        if p_err > -LN2 + 1e-12:
            raise ValueError(f"error probability must be <= 1/2, got exp({p_err})")
        return 1.0 - binary_entropy(min(p_err, -LN2), log=True)
    if not 0.0 <= p_err <= 0.5 + 1e-12:
        raise ValueError(f"error probability must lie in [0, 1/2], got {p_err}")
    return 1.0 - binary_entropy(min(p_err, 0.5))


@dataclass(frozen=True)
class InfoReport:
    """Guaranteed quantum bits, best classical bits, and their difference."""

    j_min_quantum: float
    j_max_classical: float

    @property
    def gain(self) -> float:
        return self.j_min_quantum - self.j_max_classical


def info_report(
    scenario: ReadoutScenario, transmitter: TransmitterSpec, method: str = "pure"
) -> InfoReport:
    """Compare the transmitter's Chernoff bound against the classical lower bound.

    The gain is built from an upper bound on the quantum error and a lower bound
    on the classical one, so it understates the true advantage.
    """
    _check_intensity(scenario, transmitter)
    ln_q = scenario_qcb(scenario, transmitter, method)
    ln_c = ln_classical_lb_noisy(
        scenario.M, scenario.N_S, scenario.N_B, scenario.r0, scenario.r1
    )
    return InfoReport(
        j_min_quantum=info_retrieved(ln_q, log=True),
        j_max_classical=info_retrieved(ln_c, log=True),
    )
