"""Transmitter and environment states on truncated Fock spaces.

Cutoffs come from :class:`TruncationPolicy`: a mode is cut where the thermal or
Poisson tail drops below ``tail_epsilon`` and never closer than ``min_margin``
levels above the highest Fock index a state uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.linalg import expm
from scipy.stats import poisson

from .errors import CapacityError, ConsistencyError, TruncationError
from .fock import (
    DEFAULT_MAX_DIM,
    ModeSpace,
    Operator,
    StateVector,
    annihilation,
)

__all__ = [
    "TruncationPolicy",
    "TransmitterSpec",
    "thermal_cutoff",
    "poisson_cutoff",
    "transmitter_cutoffs",
    "fock_state",
    "thermal_state",
    "coherent_state",
    "displacement_operator",
    "displaced_fock",
    "beamsplitter",
    "beamsplitter_5050",
    "apply_beamsplitter",
    "mm_state",
    "photon_coherent_state",
    "transmitter_state",
]

Cutoff = Union[int, Sequence[int]]


def thermal_cutoff(n_b: float, tail_epsilon: float = 1e-12) -> int:
    """Smallest cutoff whose thermal tail ``(N_B/(1+N_B))**cutoff`` is below tolerance."""
    if n_b < 0:
        raise ValueError(f"thermal photon number must be >= 0, got {n_b}")
    if n_b == 0:
        return 1
    ratio = n_b / (1.0 + n_b)
    cutoff = max(1, math.floor(math.log(tail_epsilon) / math.log(ratio)))
    while ratio**cutoff >= tail_epsilon:
        cutoff += 1
    return cutoff


def poisson_cutoff(mean: float, tail_epsilon: float = 1e-12) -> int:
    """Smallest cutoff with Poisson mass beyond it below tolerance."""
    if mean < 0:
        raise ValueError(f"mean must be >= 0, got {mean}")
    if mean == 0:
        return 1
    cutoff = max(1, int(mean))
    while poisson.sf(cutoff - 1, mean) >= tail_epsilon:
        cutoff += 1
    return cutoff


@dataclass(frozen=True)
class TruncationPolicy:
    tail_epsilon: float = 1e-12
    min_margin: int = 10
    max_total_dim: int = DEFAULT_MAX_DIM

    def __post_init__(self):
        if not 0.0 < self.tail_epsilon <= 1e-6:
            raise ValueError(f"tail_epsilon must lie in (0, 1e-6], got {self.tail_epsilon}")
        if self.min_margin < 0:
            raise ValueError(f"min_margin must be >= 0, got {self.min_margin}")

    def fock_cutoff(self, n_max: int) -> int:
        return n_max + max(1, self.min_margin)

    def thermal_cutoff(self, n_b: float) -> int:
        return thermal_cutoff(n_b, self.tail_epsilon)

    def displaced_cutoff(self, mean: float, n_max: int = 0) -> int:
        """Cutoff for a displaced Fock state ``D(beta)|n_max>`` with ``|beta|**2 = mean``."""
        return poisson_cutoff(mean, self.tail_epsilon) + self.fock_cutoff(n_max)

    def check_capacity(self, dims: Sequence[int]):
        total = int(np.prod(dims))
        if total > self.max_total_dim:
            raise CapacityError(
                f"mode dims {tuple(dims)} give dimension {total} > {self.max_total_dim}"
            )


@dataclass(frozen=True)
class TransmitterSpec:
    """Which light the reader shines on a memory cell.

    ``family`` is one of ``"mandm"``, ``"photon_coherent"`` or ``"single_fock"``;
    N00N states are M&M states with ``m_prime == 0``.
    """

    family: str
    m: int = 0
    m_prime: int = 0
    alpha: complex = 0j

    FAMILIES = ("mandm", "photon_coherent", "single_fock")

    def __post_init__(self):
        if self.family not in self.FAMILIES:
            raise ValueError(f"unknown transmitter family {self.family!r}")
        if self.family == "mandm":
            if int(self.m) != self.m or int(self.m_prime) != self.m_prime:
                raise ValueError("M&M photon numbers must be integers")
            if not self.m > self.m_prime >= 0:
                raise ValueError(f"M&M needs m > m' >= 0, got m={self.m}, m'={self.m_prime}")
        object.__setattr__(self, "alpha", complex(self.alpha))

    @classmethod
    def mandm(cls, m: int, m_prime: int) -> TransmitterSpec:
        return cls("mandm", m=m, m_prime=m_prime)

    @classmethod
    def noon(cls, m: int) -> TransmitterSpec:
        return cls("mandm", m=m, m_prime=0)

    @classmethod
    def photon_coherent(cls, alpha: complex) -> TransmitterSpec:
        return cls("photon_coherent", alpha=alpha)

    @classmethod
    def photon_coherent_for_intensity(cls, n_s: float) -> TransmitterSpec:
        """Real-amplitude photon+coherent transmitter with signal intensity ``n_s``."""
        if n_s < 0.5:
            raise ValueError(f"photon+coherent light has N_S >= 1/2, got {n_s}")
        return cls("photon_coherent", alpha=math.sqrt(2.0 * n_s - 1.0))

    @classmethod
    def single_fock(cls) -> TransmitterSpec:
        return cls("single_fock")

    @property
    def is_noon(self) -> bool:
        return self.family == "mandm" and self.m_prime == 0

    @property
    def signal_intensity(self) -> float:
        if self.family == "mandm":
            return (self.m + self.m_prime) / 2.0
        if self.family == "photon_coherent":
            return (abs(self.alpha) ** 2 + 1.0) / 2.0
        return 1.0

    @property
    def n_modes(self) -> int:
        return 1 if self.family == "single_fock" else 2

    @property
    def label(self) -> str:
        if self.family == "mandm":
            return f"mm_{self.m}_{self.m_prime}"
        if self.family == "photon_coherent":
            return "psi"
        return "fock"


def transmitter_cutoffs(
    spec: TransmitterSpec, n_b: float, policy: TruncationPolicy = TruncationPolicy()
) -> tuple[int, ...]:
    """Per-mode cutoffs (signal first) covering both the state and the thermal bit-0 output."""
    thermal = policy.thermal_cutoff(n_b)
    if spec.family == "mandm":
        own = policy.fock_cutoff(spec.m)
        dims = (max(own, thermal), own)
    elif spec.family == "photon_coherent":
        own = policy.displaced_cutoff(abs(spec.alpha) ** 2 / 2.0, n_max=1)
        dims = (max(own, thermal), own)
    else:
        dims = (max(policy.fock_cutoff(1), thermal),)
    policy.check_capacity(dims)
    return dims


def _pair(cutoff: Cutoff) -> tuple[int, int]:
    if isinstance(cutoff, (int, np.integer)):
        return int(cutoff), int(cutoff)
    cs, ci = cutoff
    return int(cs), int(ci)


def fock_state(n: int, cutoff: int) -> StateVector:
    if not 0 <= n < cutoff:
        raise ValueError(f"Fock index {n} outside cutoff {cutoff}")
    amps = np.zeros(cutoff, dtype=complex)
    amps[n] = 1.0
    return StateVector(ModeSpace((cutoff,)), amps)


def thermal_state(n_b: float, cutoff: int, tail_epsilon: float = 1e-12) -> Operator:
    """Truncated thermal state; the missing tail mass is kept in ``deficit``, not renormalized."""
    if n_b < 0:
        raise ValueError(f"thermal photon number must be >= 0, got {n_b}")
    n = np.arange(cutoff)
    if n_b == 0:
        weights = (n == 0).astype(float)
        tail = 0.0
    else:
        weights = n_b**n / (1.0 + n_b) ** (n + 1)
        tail = (n_b / (1.0 + n_b)) ** cutoff
    if tail >= tail_epsilon:
        raise TruncationError(
            f"thermal tail {tail:.3e} at cutoff {cutoff} for N_B={n_b} "
            f"exceeds {tail_epsilon:.1e}"
        )
    return Operator(ModeSpace((cutoff,)), np.diag(weights), deficit=tail)


def coherent_state(alpha: complex, cutoff: int, tail_epsilon: float = 1e-12) -> StateVector:
    mean = abs(alpha) ** 2
    tail = float(poisson.sf(cutoff - 1, mean)) if mean > 0 else 0.0
    if tail >= tail_epsilon:
        raise TruncationError(
            f"Poisson tail {tail:.3e} at cutoff {cutoff} for |alpha|^2={mean} "
            f"exceeds {tail_epsilon:.1e}"
        )
    n = np.arange(cutoff)
    if mean == 0:
        amps = (n == 0).astype(complex)
    else:
        log_mag = -mean / 2.0 + n * math.log(abs(alpha)) - 0.5 * np.array(
            [math.lgamma(k + 1.0) for k in n]
        )
        amps = np.exp(log_mag) * np.exp(1j * np.angle(alpha) * n)
    return StateVector.normalized(ModeSpace((cutoff,)), amps)


def displacement_operator(
    alpha: complex, cutoff: int, max_dim: int = DEFAULT_MAX_DIM
) -> Operator:
    """``exp(alpha a^dag - alpha^* a)`` of the truncated generator (exactly unitary)."""
    if cutoff > max_dim:
        raise CapacityError(f"cutoff {cutoff} exceeds maximum dimension {max_dim}")
    a = annihilation(cutoff)
    gen = alpha * a.conj().T - np.conj(alpha) * a
    return Operator(ModeSpace((cutoff,)), expm(gen))


def displaced_fock(beta: complex, n: int, cutoff: int) -> np.ndarray:
    """Amplitudes of ``D(beta)|n>`` on ``cutoff`` levels (unnormalized truncation).

    The displacement is exponentiated on a padded space so that the truncated
    generator's edge error does not reach the kept levels.
    """
    padded = cutoff + max(cutoff, 20)
    disp = displacement_operator(beta, padded, max_dim=padded).matrix
    return disp[:cutoff, n].copy()


def _beamsplitter_blocks(theta: float, cutoff_a: int, cutoff_b: int):
    """Yield (flat indices, unitary block) for each total-photon-number sector.

    Within a sector the states ``|k, N-k>`` inside the box are ordered by ``k``
    and the truncated generator ``a b^dag - a^dag b`` is tridiagonal there.
    """
    for total in range(cutoff_a + cutoff_b - 1):
        ks = np.arange(max(0, total - cutoff_b + 1), min(total, cutoff_a - 1) + 1)
        ls = total - ks
        gen = np.zeros((ks.size, ks.size))
        # a b^dag |k, l> = sqrt(k (l+1)) |k-1, l+1>
        hop = np.sqrt(ks[1:] * (ls[1:] + 1.0))
        gen[np.arange(ks.size - 1), np.arange(1, ks.size)] = hop
        gen[np.arange(1, ks.size), np.arange(ks.size - 1)] = -hop
        yield ks * cutoff_b + ls, expm(theta * gen)


def beamsplitter(
    theta: float, cutoff_a: int, cutoff_b: int, max_dim: int = DEFAULT_MAX_DIM
) -> Operator:
    """``exp(theta (a b^dag - a^dag b))`` on a truncated two-mode space.

    The generator conserves total photon number, so it is exponentiated one
    photon-number block at a time. With this sign convention
    ``|1,0> -> cos(theta)|1,0> + sin(theta)|0,1>``.
    """
    total = cutoff_a * cutoff_b
    if total > max_dim:
        raise CapacityError(f"beam splitter dimension {total} exceeds {max_dim}")
    unitary = np.zeros((total, total), dtype=complex)
    for idx, block in _beamsplitter_blocks(theta, cutoff_a, cutoff_b):
        unitary[np.ix_(idx, idx)] = block
    return Operator(ModeSpace((cutoff_a, cutoff_b)), unitary)


def apply_beamsplitter(theta: float, psi: StateVector) -> StateVector:
    """Apply :func:`beamsplitter` to a two-mode vector without forming the dense unitary."""
    cutoff_a, cutoff_b = psi.space.dims
    out = np.zeros(psi.dim, dtype=complex)
    for idx, block in _beamsplitter_blocks(theta, cutoff_a, cutoff_b):
        out[idx] = block @ psi.amplitudes[idx]
    return StateVector(psi.space, out, psi.deficit)


def beamsplitter_5050(cutoff_a: int, cutoff_b: int, max_dim: int = DEFAULT_MAX_DIM) -> Operator:
    return beamsplitter(math.pi / 4, cutoff_a, cutoff_b, max_dim)


def mm_state(m: int, m_prime: int, cutoff: Cutoff) -> StateVector:
    """``(|m, m'> + |m', m>)/sqrt(2)``; ``cutoff`` is one int or a (signal, idler) pair."""
    if not m > m_prime >= 0:
        raise ValueError(f"M&M needs m > m' >= 0, got m={m}, m'={m_prime}")
    cs, ci = _pair(cutoff)
    if m >= min(cs, ci):
        raise ValueError(f"Fock index {m} outside cutoffs {(cs, ci)}")
    amps = np.zeros((cs, ci), dtype=complex)
    amps[m, m_prime] = amps[m_prime, m] = 1.0 / math.sqrt(2.0)
    return StateVector(ModeSpace((cs, ci)), amps.ravel())


def _photon_coherent_beamsplitter(alpha: complex, cs: int, ci: int, tail_epsilon: float) -> StateVector:
    # padded so every photon-number block reached by the input is complete
    size = max(cs, ci, poisson_cutoff(abs(alpha) ** 2, tail_epsilon)) + 2
    one = fock_state(1, size)
    coh = coherent_state(alpha, size, tail_epsilon)
    joint = StateVector(
        ModeSpace((size, size)), np.kron(one.amplitudes, coh.amplitudes), coh.deficit
    )
    out = apply_beamsplitter(math.pi / 4, joint).amplitudes.reshape(size, size)
    return StateVector.normalized(ModeSpace((cs, ci)), out[:cs, :ci])


def photon_coherent_state(
    alpha: complex,
    cutoff: Cutoff,
    form: str = "closed",
    tail_epsilon: float = 1e-12,
    check: bool = True,
) -> StateVector:
    """Single photon mixed with a coherent state on a 50:50 beam splitter.

    ``form="closed"`` returns ``D(b) x D(b) (|1,0> + |0,1>)/sqrt(2)`` with
    ``b = alpha/sqrt(2)``. ``form="beamsplitter"`` returns the beam-splitter
    output of ``|1> x |alpha>``, which under this package's convention equals
    ``D(-b) x D(b) (|1,0> + |0,1>)/sqrt(2)``: the signal displacement has the
    opposite sign, no 50:50 splitter produces equal-sign displacements. The two
    forms differ by a signal parity and an idler unitary, so their idler
    marginals and every overlap with ``thermal x idler-marginal`` coincide.

    With ``check=True`` the beam-splitter route is also computed and compared
    against its closed form; a mismatch above 1e-6 raises :class:`ConsistencyError`.
    """
    if form not in ("closed", "beamsplitter"):
        raise ValueError(f"unknown form {form!r}")
    cs, ci = _pair(cutoff)
    beta = alpha / math.sqrt(2.0)
    sign = 1.0 if form == "closed" else -1.0
    sig0 = displaced_fock(sign * beta, 0, cs)
    sig1 = displaced_fock(sign * beta, 1, cs)
    idl0 = displaced_fock(beta, 0, ci)
    idl1 = displaced_fock(beta, 1, ci)
    amps = (np.kron(sig1, idl0) + np.kron(sig0, idl1)) / math.sqrt(2.0)
    psi = StateVector.normalized(ModeSpace((cs, ci)), amps)
    if check:
        routed = _photon_coherent_beamsplitter(alpha, cs, ci, tail_epsilon)
        if form == "closed":
            reference = photon_coherent_state(alpha, (cs, ci), "beamsplitter", tail_epsilon, False)
        else:
            reference = psi
        gap = float(np.max(np.abs(routed.amplitudes - reference.amplitudes)))
        if gap > 1e-6:
            raise ConsistencyError(
                f"beam-splitter construction differs from closed form by {gap:.3e}"
            )
    return psi


def transmitter_state(spec: TransmitterSpec, cutoffs: Sequence[int]) -> StateVector:
    if spec.family == "mandm":
        return mm_state(spec.m, spec.m_prime, tuple(cutoffs))
    if spec.family == "photon_coherent":
        return photon_coherent_state(spec.alpha, tuple(cutoffs))
    return fock_state(1, cutoffs[0])
