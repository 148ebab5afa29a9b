"""Memory-cell channels acting on transmitter states.

Bit 1 is an ideal mirror (identity on the signal); bit 0 loses the signal and
returns thermal light instead. The idler never touches the cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import UnsupportedModelError
from .fock import ModeSpace, Operator, StateVector, partial_trace, tensor
from .scenario import ReadoutScenario
from .states import (
    TransmitterSpec,
    TruncationPolicy,
    beamsplitter,
    thermal_state,
    transmitter_cutoffs,
    transmitter_state,
)

__all__ = [
    "ChannelSpec",
    "OutputPair",
    "apply_bit",
    "lossy_channel",
    "readout_pair",
    "channel_pair",
]


@dataclass(frozen=True)
class ChannelSpec:
    """Beam-splitter memory cell: reflectivity ``r`` with ``N_B`` thermal photons behind it."""

    r: float
    N_B: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"reflectivity must lie in [0, 1], got {self.r}")
        if self.N_B < 0:
            raise ValueError(f"N_B must be >= 0, got {self.N_B}")

    def __call__(self, rho_signal: Operator) -> Operator:
        return lossy_channel(rho_signal, self.r, self.N_B)


def apply_bit(
    state: StateVector, bit: int, n_b: float, tail_epsilon: float = 1e-12
) -> Operator:
    """Single-copy output for memory bit ``bit``; mode 0 is the signal.

    Bit 1 returns ``|in><in|``. Bit 0 returns ``thermal(N_B) x Tr_S|in><in|``
    with the thermal state cut at the signal mode's dimension.
    """
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    rho_in = Operator.projector(state)
    if bit == 1:
        return rho_in
    thermal = thermal_state(n_b, state.space.dims[0], tail_epsilon)
    if state.space.n_modes == 1:
        return thermal
    idlers = partial_trace(rho_in, range(1, state.space.n_modes))
    return tensor(thermal, idlers, max_dim=max(thermal.dim * idlers.dim, 1))


def lossy_channel(
    rho_signal: Operator, r: float, n_b: float, tail_epsilon: float = 1e-12
) -> Operator:
    """Mix a single-mode state with thermal light on a beam splitter of reflectivity ``r``.

    The environment mode carries ``thermal(N_B)`` on the same cutoff as the
    signal. The unitary dilation is evaluated on a joint space large enough
    that every photon-number sector the input reaches is complete, then the
    environment is traced out and the signal cut back to its input dimension.
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"reflectivity must lie in [0, 1], got {r}")
    if rho_signal.space.n_modes != 1:
        raise ValueError("lossy_channel acts on a single signal mode")
    d = rho_signal.dim
    env = thermal_state(n_b, d, tail_epsilon)
    big = 2 * d - 1
    theta = math.acos(math.sqrt(r))
    unitary = beamsplitter(theta, big, big, max_dim=big * big).matrix
    grid = np.arange(big)
    in_box = ((grid[:, None] < d) & (grid[None, :] < d)).ravel()
    out_rows = np.repeat(grid < d, big)
    u = unitary[np.ix_(out_rows, in_box)]
    joint_in = np.kron(rho_signal.matrix, env.matrix)
    joint_out = u @ joint_in @ u.conj().T
    reduced = np.einsum("aebe->ab", joint_out.reshape(d, big, d, big))
    return Operator(ModeSpace((d,)), reduced, deficit=env.deficit)


@dataclass(frozen=True, eq=False)
class OutputPair:
    """Single-copy bit-0 / bit-1 outputs plus the pure bit-1 state."""

    transmitter: TransmitterSpec
    psi: StateVector
    rho0: Operator
    rho1: Operator


@lru_cache(maxsize=16)
def readout_pair(
    transmitter: TransmitterSpec, n_b: float, policy: TruncationPolicy = TruncationPolicy()
) -> OutputPair:
    """Build the transmitter at policy cutoffs and push one copy through both cells."""
    dims = transmitter_cutoffs(transmitter, n_b, policy)
    psi = transmitter_state(transmitter, dims)
    rho0 = apply_bit(psi, 0, n_b, policy.tail_epsilon)
    rho1 = apply_bit(psi, 1, n_b, policy.tail_epsilon)
    return OutputPair(transmitter, psi, rho0, rho1)


def channel_pair(
    scenario: ReadoutScenario, transmitter: TransmitterSpec
) -> tuple[Operator, Operator]:
    """Single-copy ``(rho_out^(0), rho_out^(1))`` for the ideal-memory model."""
    if not scenario.is_ideal_memory:
        raise UnsupportedModelError(
            f"quantum outputs need r1=1, r0=0; got r1={scenario.r1}, r0={scenario.r0}"
        )
    pair = readout_pair(transmitter, scenario.N_B, scenario.truncation)
    return pair.rho0, pair.rho1
