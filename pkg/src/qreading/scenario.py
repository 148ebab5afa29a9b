"""The readout scenario shared by the channel, bound and metric layers."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .states import TruncationPolicy


@dataclass(frozen=True)
class ReadoutScenario:
    """``M`` signal copies of mean intensity ``N_S`` read against memory cells.

    Bit 1 is a cell of reflectivity ``r1`` and bit 0 one of reflectivity ``r0``;
    ``N_B`` thermal photons leak in behind the cell. Quantum-state computations
    need the identity-vs-replacement model ``r1 = 1, r0 = 0``; the closed-form
    classical bounds accept any pair.
    """

    M: int
    N_S: float
    N_B: float = 0.0
    r0: float = 0.0
    r1: float = 1.0
    truncation: TruncationPolicy = field(default_factory=TruncationPolicy)

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise ValueError(f"number of copies must be a positive integer, got {self.M}")
        object.__setattr__(self, "M", int(self.M))
        if not self.N_S > 0:
            raise ValueError(f"N_S must be > 0, got {self.N_S}")
        if self.N_B < 0:
            raise ValueError(f"N_B must be >= 0, got {self.N_B}")
        for name in ("r0", "r1"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")

    @property
    def total_photons(self) -> float:
        return self.M * self.N_S

    @property
    def is_ideal_memory(self) -> bool:
        return self.r1 == 1.0 and self.r0 == 0.0

    def with_copies(self, M: int) -> ReadoutScenario:
        return replace(self, M=M)
