"""Error-probability bounds for telling the two memory cells apart.

Multi-copy quantities are never built as tensor powers. The Chernoff overlap of
``M`` i.i.d. copies is the single-copy overlap to the power ``M``, so every
bound is carried as a natural log: ``ln(1/2) + M * ln(Q)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .channels import readout_pair
from .errors import (
    CapacityError,
    ConsistencyError,
    SpaceMismatchError,
    UnsupportedModelError,
)
from .fock import (
    DEFAULT_MAX_DIM,
    Operator,
    StateVector,
    fidelity_pure,
    spectrum,
    tensor,
    trace_norm,
)
from .logprob import LN_HALF, exp_probability, ln_half_one_minus_sqrt_one_minus
from .scenario import ReadoutScenario
from .search import grid_golden_minimize
from .states import TransmitterSpec, TruncationPolicy

__all__ = [
    "ReadoutScenario",
    "BoundReport",
    "ChernoffResult",
    "OverlapFunction",
    "s_overlap",
    "chernoff_infimum",
    "qcb_numeric",
    "qcb_pure",
    "helstrom",
    "mm_qcb_closed",
    "psi_qcb_printed",
    "fock_qcb_closed",
    "closed_form_qcb",
    "classical_lb_noiseless",
    "classical_lb_noisy",
    "ln_classical_lb_noiseless",
    "ln_classical_lb_noisy",
    "per_copy_fidelity",
    "per_copy_chernoff",
    "scenario_qcb",
    "bound_report",
]

PURE_ARGMIN_MIN = 1.0 - 1e-4


class OverlapFunction:
    """``s -> Tr[rho0**s rho1**(1-s)]`` with both spectra computed once.

    Only the supports enter, which implements ``0**0 := 0`` on both sides:
    ``Q_s = sum_ij lam_i**s mu_j**(1-s) |<u_i|v_j>|**2``.
    """

    def __init__(self, rho0: Operator, rho1: Operator):
        if rho0.space != rho1.space:
            raise SpaceMismatchError(f"{rho0.space.dims} vs {rho1.space.dims}")
        spec0, spec1 = spectrum(rho0), spectrum(rho1)
        supp0, supp1 = spec0.support(), spec1.support()
        self.lam = spec0.values[supp0]
        self.mu = spec1.values[supp1]
        self.rank0, self.rank1 = supp0.size, supp1.size
        if spec0.vectors is None and spec1.vectors is None:
            overlap = (supp0[:, None] == supp1[None, :]).astype(float)
        elif spec0.vectors is None:
            overlap = np.abs(spec1.vectors[np.ix_(supp0, supp1)]) ** 2
        elif spec1.vectors is None:
            overlap = np.abs(spec0.vectors[np.ix_(supp1, supp0)]).T ** 2
        else:
            u = spec0.vectors[:, supp0]
            v = spec1.vectors[:, supp1]
            overlap = np.abs(u.conj().T @ v) ** 2
        self.overlap = overlap

    def __call__(self, s: float) -> float:
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"s must lie in [0, 1], got {s}")
        if self.lam.size == 0 or self.mu.size == 0:
            return 0.0
        return float(self.lam**s @ self.overlap @ self.mu ** (1.0 - s))


def s_overlap(rho0: Operator, rho1: Operator, s: float) -> float:
    """``Q_s = Tr[rho0**s rho1**(1-s)]`` with the ``0**0 := 0`` convention."""
    return OverlapFunction(rho0, rho1)(s)


@dataclass(frozen=True)
class ChernoffResult:
    s_star: float
    q_min: float
    pure: bool

    @property
    def ln_q(self) -> float:
        return math.log(self.q_min) if self.q_min > 0 else -math.inf


def chernoff_infimum(rho0: Operator, rho1: Operator) -> ChernoffResult:
    """Locate ``inf_s Q_s`` on ``[0, 1]``: 65-point grid, then golden section to 1e-6.

    When ``rho1`` is pure the minimum must sit at the ``s = 1`` boundary; a
    located argmin below ``1 - 1e-4`` raises :class:`ConsistencyError`.
    """
    overlap = OverlapFunction(rho0, rho1)
    s_star, q_min = grid_golden_minimize(overlap, 0.0, 1.0, points=65, tol=1e-6)
    q_min = min(max(q_min, 0.0), 1.0)
    pure = overlap.rank1 == 1
    if pure and q_min > 0 and s_star < PURE_ARGMIN_MIN:
        raise ConsistencyError(f"pure bit-1 output but Chernoff argmin at s={s_star:.6f}")
    return ChernoffResult(s_star, q_min, pure)


def qcb_numeric(rho0: Operator, rho1: Operator, M: int) -> float:
    """Natural log of the ``M``-copy quantum Chernoff bound from single-copy outputs."""
    result = chernoff_infimum(rho0, rho1)
    return LN_HALF + M * result.ln_q


def qcb_pure(psi1: StateVector, rho0: Operator, M: int) -> float:
    """Chernoff bound when the bit-1 output is the pure state ``psi1``.

    The infimum sits at ``s = 1``, giving ``ln(1/2) + M ln <psi1|rho0|psi1>``;
    zero fidelity returns ``-inf``.
    """
    fid = fidelity_pure(psi1, rho0)
    if fid <= 0.0:
        return -math.inf
    return LN_HALF + M * math.log(min(fid, 1.0))


def helstrom(
    rho0: Operator, rho1: Operator, copies: int = 1, max_dim: int = DEFAULT_MAX_DIM
) -> float:
    """Minimum error for equiprobable hypotheses, ``(1 - ||rho0 - rho1||_1 / 2) / 2``.

    ``copies > 1`` tensors the single-copy outputs explicitly and is limited to
    two copies and ``max_dim``.
    """
    if rho0.space != rho1.space:
        raise SpaceMismatchError(f"{rho0.space.dims} vs {rho1.space.dims}")
    if copies < 1:
        raise ValueError(f"copies must be >= 1, got {copies}")
    if copies > 2:
        raise CapacityError("explicit multi-copy Helstrom is limited to 2 copies")
    if copies == 2:
        rho0 = tensor(rho0, rho0, max_dim=max_dim)
        rho1 = tensor(rho1, rho1, max_dim=max_dim)
    elif rho0.dim > max_dim:
        raise CapacityError(f"dimension {rho0.dim} exceeds {max_dim}")
    p = 0.5 * (1.0 - 0.5 * trace_norm(rho0 - rho1))
    return min(max(p, 0.0), 0.5)


def _ln_thermal_weight(n: int, n_b: float) -> float:
    """``ln[N_B**n / (1+N_B)**(n+1)]``."""
    if n_b == 0:
        return 0.0 if n == 0 else -math.inf
    return n * math.log(n_b) - (n + 1) * math.log1p(n_b)


def mm_qcb_closed(m: int, m_prime: int, n_b: float, M: int) -> float:
    """Log Chernoff bound of ``M`` copies of ``|m::m'>`` against thermal replacement.

    Per copy the overlap is ``(p_m + p_m') / 4`` with ``p_n`` the thermal weights.
    """
    if not m > m_prime >= 0:
        raise ValueError(f"M&M needs m > m' >= 0, got m={m}, m'={m_prime}")
    if n_b < 0:
        raise ValueError(f"N_B must be >= 0, got {n_b}")
    ln_sum = np.logaddexp(_ln_thermal_weight(m, n_b), _ln_thermal_weight(m_prime, n_b))
    if ln_sum == -math.inf:
        return -math.inf
    return LN_HALF + M * (float(ln_sum) - 2.0 * math.log(2.0))


def psi_qcb_printed(n_s: float, n_b: float, M: int) -> float:
    """Literature closed form for the photon+coherent transmitter, evaluated verbatim.

    Agrees with the state-based bound at ``N_B = 0`` only; for ``N_B > 0`` it
    does not reduce to the M&M(1,0) value at ``N_S = 1/2`` even though the
    states coincide there. Kept for side-by-side reporting.
    """
    if n_s < 0.5:
        raise ValueError(f"photon+coherent light has N_S >= 1/2, got {n_s}")
    x = 2.0 * n_s - 1.0
    per_copy = (
        -x / (2.0 * (n_b + 1.0))
        - math.log(4.0 * (n_b + 1.0))
        + math.log1p(x * (1.0 + n_b + n_b**2) / (2.0 * (n_b + 1.0) ** 2))
    )
    return LN_HALF + M * per_copy


def fock_qcb_closed(n_b: float, M: int) -> float:
    """Single-photon transmitter: ``(1/2) (N_B / (1+N_B)**2)**M`` in log form."""
    if n_b == 0:
        return -math.inf
    return LN_HALF + M * (math.log(n_b) - 2.0 * math.log1p(n_b))


def closed_form_qcb(transmitter: TransmitterSpec, n_b: float, M: int) -> float:
    if transmitter.family == "mandm":
        return mm_qcb_closed(transmitter.m, transmitter.m_prime, n_b, M)
    if transmitter.family == "photon_coherent":
        return psi_qcb_printed(transmitter.signal_intensity, n_b, M)
    return fock_qcb_closed(n_b, M)


def ln_classical_lb_noiseless(M: int, n_s: float, r0: float, r1: float) -> float:
    """Log of the coherent-state lower bound without background noise."""
    _check_reflectivities(r0, r1)
    if r0 == r1:
        return LN_HALF
    ln_y = -M * n_s * (math.sqrt(r1) - math.sqrt(r0)) ** 2
    return ln_half_one_minus_sqrt_one_minus(ln_y)


def ln_classical_lb_noisy(M: int, n_s: float, n_b: float, r0: float, r1: float) -> float:
    """Log of the lower bound on any classical transmitter with ``N_B`` noise photons.

    ``F = exp(-(sqrt r0 - sqrt r1)**2 N_S / g) / (sqrt(g**2 + t) - sqrt(t))`` with
    ``g = 1 + (2 - r0 - r1) N_B`` and ``t = 4 N_B**2 prod_u (1-r_u)(1 + (1-r_u) N_B)``;
    the bound is ``(1 - sqrt(1 - F**M)) / 2``.
    """
    _check_reflectivities(r0, r1)
    if n_b < 0:
        raise ValueError(f"N_B must be >= 0, got {n_b}")
    if r0 == r1:
        # sqrt(g**2 + t) - sqrt(t) == 1 identically here, so F == 1
        return LN_HALF
    gamma = 1.0 + (2.0 - r0 - r1) * n_b
    theta = 4.0 * n_b**2
    for r in (r0, r1):
        theta *= (1.0 - r) * (1.0 + (1.0 - r) * n_b)
    root_t = math.sqrt(theta)
    # sqrt(g^2 + t) - sqrt(t) rewritten without cancellation
    denom = gamma**2 / (math.sqrt(gamma**2 + theta) + root_t)
    ln_f = -((math.sqrt(r0) - math.sqrt(r1)) ** 2) * n_s / gamma - math.log(denom)
    return ln_half_one_minus_sqrt_one_minus(min(M * ln_f, 0.0))


def classical_lb_noiseless(M: int, n_s: float, r0: float, r1: float) -> float:
    return exp_probability(ln_classical_lb_noiseless(M, n_s, r0, r1))[0]


def classical_lb_noisy(M: int, n_s: float, n_b: float, r0: float, r1: float) -> float:
    return exp_probability(ln_classical_lb_noisy(M, n_s, n_b, r0, r1))[0]


def _check_reflectivities(r0: float, r1: float):
    for name, r in (("r0", r0), ("r1", r1)):
        if not 0.0 <= r <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {r}")


@lru_cache(maxsize=64)
def per_copy_fidelity(
    transmitter: TransmitterSpec, n_b: float, policy: TruncationPolicy = TruncationPolicy()
) -> float:
    pair = readout_pair(transmitter, n_b, policy)
    return fidelity_pure(pair.psi, pair.rho0)


@lru_cache(maxsize=64)
def per_copy_chernoff(
    transmitter: TransmitterSpec, n_b: float, policy: TruncationPolicy = TruncationPolicy()
) -> ChernoffResult:
    pair = readout_pair(transmitter, n_b, policy)
    return chernoff_infimum(pair.rho0, pair.rho1)


def scenario_qcb(
    scenario: ReadoutScenario, transmitter: TransmitterSpec, method: str = "pure"
) -> float:
    """Log Chernoff bound for ``scenario.M`` copies from the constructed outputs.

    ``method`` selects the pure-state fidelity shortcut (``"pure"``) or the full
    infimum over ``s`` (``"numeric"``).
    """
    if not scenario.is_ideal_memory:
        raise UnsupportedModelError(
            f"quantum outputs need r1=1, r0=0; got r1={scenario.r1}, r0={scenario.r0}"
        )
    if method == "pure":
        fid = per_copy_fidelity(transmitter, scenario.N_B, scenario.truncation)
        if fid <= 0.0:
            return -math.inf
        return LN_HALF + scenario.M * math.log(min(fid, 1.0))
    if method == "numeric":
        result = per_copy_chernoff(transmitter, scenario.N_B, scenario.truncation)
        return LN_HALF + scenario.M * result.ln_q
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class BoundReport:
    """Error-probability bounds for one scenario, natural-log where they can underflow.

    ``methods`` names how each field was obtained.
    """

    ln_p_qcb: float
    ln_p_classical_lb: float
    ln_p_qcb_closed: Optional[float] = None
    p_helstrom: Optional[float] = None
    methods: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("ln_p_qcb", "ln_p_classical_lb", "ln_p_qcb_closed"):
            value = getattr(self, name)
            if value is not None and value > LN_HALF + 1e-12:
                raise ValueError(f"{name}={value} exceeds ln(1/2)")
        if self.p_helstrom is not None:
            if not 0.0 <= self.p_helstrom <= 0.5:
                raise ValueError(f"p_helstrom={self.p_helstrom} outside [0, 1/2]")
            if self.p_helstrom > math.exp(self.ln_p_qcb) + 1e-10:
                raise ConsistencyError("Helstrom error exceeds the Chernoff bound")

    @property
    def p_qcb(self) -> float:
        return exp_probability(self.ln_p_qcb)[0]

    @property
    def p_classical_lb(self) -> float:
        return exp_probability(self.ln_p_classical_lb)[0]

    @property
    def quantum_advantage(self) -> bool:
        return self.ln_p_qcb < self.ln_p_classical_lb

    def as_lines(self) -> list[str]:
        ln10 = math.log(10.0)
        lines = [
            f"ln_p_qcb={self.ln_p_qcb:.12g}",
            f"log10_p_qcb={self.ln_p_qcb / ln10:.12g}",
            f"ln_p_classical_lb={self.ln_p_classical_lb:.12g}",
            f"log10_p_classical_lb={self.ln_p_classical_lb / ln10:.12g}",
        ]
        if self.ln_p_qcb_closed is not None:
            lines.append(f"ln_p_qcb_closed={self.ln_p_qcb_closed:.12g}")
        if self.p_helstrom is not None:
            lines.append(f"p_helstrom={self.p_helstrom:.12g}")
        lines.append(f"quantum_advantage={str(self.quantum_advantage).lower()}")
        lines.extend(f"method.{k}={v}" for k, v in sorted(self.methods.items()))
        return lines


def _check_intensity(scenario: ReadoutScenario, transmitter: TransmitterSpec):
    if abs(scenario.N_S - transmitter.signal_intensity) > 1e-9:
        raise ValueError(
            f"transmitter {transmitter.label} has N_S={transmitter.signal_intensity}, "
            f"scenario has N_S={scenario.N_S}"
        )


def bound_report(
    scenario: ReadoutScenario,
    transmitter: TransmitterSpec,
    method: str = "pure",
    with_helstrom: bool = False,
) -> BoundReport:
    _check_intensity(scenario, transmitter)
    ln_qcb = scenario_qcb(scenario, transmitter, method)
    ln_cl = ln_classical_lb_noisy(
        scenario.M, scenario.N_S, scenario.N_B, scenario.r0, scenario.r1
    )
    closed_names = {"mandm": "mm_closed", "photon_coherent": "psi_printed", "single_fock": "fock_closed"}
    p_hel = None
    methods = {
        "ln_p_qcb": f"fock_{method}",
        "ln_p_classical_lb": "classical_noisy",
        "ln_p_qcb_closed": closed_names[transmitter.family],
    }
    if with_helstrom:
        pair = readout_pair(transmitter, scenario.N_B, scenario.truncation)
        p_hel = helstrom(pair.rho0, pair.rho1, copies=scenario.M)
        methods["p_helstrom"] = f"trace_norm_{scenario.M}copy"
    return BoundReport(
        ln_p_qcb=ln_qcb,
        ln_p_classical_lb=ln_cl,
        ln_p_qcb_closed=closed_form_qcb(transmitter, scenario.N_B, scenario.M),
        p_helstrom=p_hel,
        methods=methods,
    )
