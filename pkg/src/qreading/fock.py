"""Dense operator algebra on truncated multi-mode Fock spaces.

Everything here works with plain numpy matrices wrapped in two small immutable
containers: :class:`Operator` (square matrix plus the per-mode dimensions it
acts on) and :class:`StateVector` (pure state amplitudes on the same kind of
space). Mode order is significant and is preserved by every operation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, NotPSDError, SpaceMismatchError

__all__ = [
    "DEFAULT_MAX_DIM",
    "EIG_FLOOR",
    "HERMITIAN_TOL",
    "NEG_EIG_TOL",
    "ModeSpace",
    "Operator",
    "StateVector",
    "Spectrum",
    "annihilation",
    "number_operator",
    "embed",
    "expect",
    "mean_photon_number",
    "tensor",
    "partial_trace",
    "spectrum",
    "fractional_power",
    "trace_norm",
    "trace_distance",
    "fidelity_pure",
    "density_violations",
]

DEFAULT_MAX_DIM = 4096
HERMITIAN_TOL = 1e-12
NEG_EIG_TOL = 1e-12
# eigenvalues from a dense eigensolver below this are treated as roundoff
EIG_FLOOR = 1e-14


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex)
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class ModeSpace:
    """Ordered per-mode truncation dimensions of a multi-mode Fock space."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValueError("a mode space needs at least one mode")
        if any(d < 1 for d in dims):
            raise ValueError(f"mode dimensions must be >= 1, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n_modes(self) -> int:
        return len(self.dims)

    def __add__(self, other: ModeSpace) -> ModeSpace:
        return ModeSpace(self.dims + other.dims)

    def __len__(self) -> int:
        return len(self.dims)


@dataclass(frozen=True, eq=False)
class Operator:
    """Dense square matrix acting on a :class:`ModeSpace`.

    ``deficit`` records the trace mass lost to truncation when the operator was
    built (zero for exact constructions).
    """

    space: ModeSpace
    matrix: np.ndarray
    deficit: float = 0.0

    def __post_init__(self):
        if not isinstance(self.space, ModeSpace):
            object.__setattr__(self, "space", ModeSpace(tuple(self.space)))
        mat = _frozen(self.matrix)
        n = self.space.total
        if mat.shape != (n, n):
            raise SpaceMismatchError(
                f"matrix shape {mat.shape} does not match space dims {self.space.dims}"
            )
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def projector(cls, psi: StateVector) -> Operator:
        amps = psi.amplitudes
        return cls(psi.space, np.outer(amps, amps.conj()), deficit=psi.deficit)

    @classmethod
    def identity(cls, space: ModeSpace | Sequence[int]) -> Operator:
        space = space if isinstance(space, ModeSpace) else ModeSpace(tuple(space))
        return cls(space, np.eye(space.total))

    @property
    def dim(self) -> int:
        return self.space.total

    @property
    def dag(self) -> Operator:
        return Operator(self.space, self.matrix.conj().T, self.deficit)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return self.hermiticity_defect() <= tol

    def is_diagonal(self) -> bool:
        mat = self.matrix
        return not np.any(mat[~np.eye(mat.shape[0], dtype=bool)])

    def _check_space(self, other: Operator):
        if self.space != other.space:
            raise SpaceMismatchError(f"{self.space.dims} vs {other.space.dims}")

    def __sub__(self, other: Operator) -> Operator:
        self._check_space(other)
        return Operator(self.space, self.matrix - other.matrix)

    def __add__(self, other: Operator) -> Operator:
        self._check_space(other)
        return Operator(self.space, self.matrix + other.matrix)

    def __mul__(self, scalar) -> Operator:
        return Operator(self.space, self.matrix * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            if self.space != other.space:
                raise SpaceMismatchError(f"{self.space.dims} vs {other.space.dims}")
            return self.matrix @ other.amplitudes
        self._check_space(other)
        return Operator(self.space, self.matrix @ other.matrix)

    def conjugate_by(self, unitary: Operator) -> Operator:
        """Return ``U rho U^dagger``."""
        self._check_space(unitary)
        u = unitary.matrix
        return Operator(self.space, u @ self.matrix @ u.conj().T, self.deficit)

    def allclose(self, other: Operator, atol: float) -> bool:
        return self.space == other.space and np.allclose(
            self.matrix, other.matrix, rtol=0.0, atol=atol
        )


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state on a :class:`ModeSpace`.

    Use :meth:`normalized` to build from unnormalized amplitudes; the discarded
    norm (one minus the squared norm before rescaling) is kept in ``deficit``.
    """

    space: ModeSpace
    amplitudes: np.ndarray
    deficit: float = 0.0

    NORM_TOL = 1e-10

    def __post_init__(self):
        if not isinstance(self.space, ModeSpace):
            object.__setattr__(self, "space", ModeSpace(tuple(self.space)))
        amps = _frozen(self.amplitudes).reshape(-1)
        if amps.shape != (self.space.total,):
            raise SpaceMismatchError(
                f"{amps.shape[0]} amplitudes do not match space dims {self.space.dims}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > self.NORM_TOL:
            raise ValueError(f"state vector norm {norm!r} is not 1")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, space: ModeSpace | Sequence[int], amplitudes) -> StateVector:
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm_sq = float(np.vdot(amps, amps).real)
        if norm_sq == 0.0:
            raise ValueError("cannot normalize the zero vector")
        space = space if isinstance(space, ModeSpace) else ModeSpace(tuple(space))
        return cls(space, amps / np.sqrt(norm_sq), deficit=max(0.0, 1.0 - norm_sq))

    @property
    def dim(self) -> int:
        return self.space.total

    def inner(self, other: StateVector) -> complex:
        if self.space != other.space:
            raise SpaceMismatchError(f"{self.space.dims} vs {other.space.dims}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def dm(self) -> Operator:
        return Operator.projector(self)

    def tensor_array(self) -> np.ndarray:
        return self.amplitudes.reshape(self.space.dims)


def annihilation(cutoff: int) -> np.ndarray:
    """Truncated single-mode lowering operator as a dense matrix."""
    return np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), 1).astype(complex)


def number_operator(cutoff: int) -> np.ndarray:
    return np.diag(np.arange(cutoff, dtype=float)).astype(complex)


def embed(single: np.ndarray, mode: int, space: ModeSpace) -> np.ndarray:
    """Lift a single-mode matrix onto ``mode`` of a multi-mode space."""
    if single.shape != (space.dims[mode],) * 2:
        raise SpaceMismatchError(
            f"single-mode matrix {single.shape} does not fit mode {mode} of {space.dims}"
        )
    factors = [np.eye(d) for d in space.dims]
    factors[mode] = single
    return reduce(np.kron, factors)


def expect(observable: np.ndarray, state: StateVector | Operator) -> float:
    """Real part of ``<O>`` in a pure or mixed state."""
    if isinstance(state, StateVector):
        amps = state.amplitudes
        return float(np.vdot(amps, observable @ amps).real)
    return float(np.trace(observable @ state.matrix).real)


def mean_photon_number(state: StateVector | Operator, mode: int = 0) -> float:
    n_op = embed(number_operator(state.space.dims[mode]), mode, state.space)
    return expect(n_op, state)


def tensor(a, b, max_dim: int = DEFAULT_MAX_DIM):
    """Kronecker product of two operators (or two state vectors).

    The result's mode list is ``a``'s modes followed by ``b``'s.
    """
    total = a.space.total * b.space.total
    if total > max_dim:
        raise CapacityError(
            f"tensor product dimension {total} exceeds the maximum {max_dim}"
        )
    space = a.space + b.space
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        deficit = 1.0 - (1.0 - a.deficit) * (1.0 - b.deficit)
        return StateVector(space, np.kron(a.amplitudes, b.amplitudes), deficit)
    if isinstance(a, Operator) and isinstance(b, Operator):
        deficit = 1.0 - (1.0 - a.deficit) * (1.0 - b.deficit)
        return Operator(space, np.kron(a.matrix, b.matrix), deficit)
    raise TypeError("tensor needs two Operators or two StateVectors")


def partial_trace(rho: Operator, keep: Iterable[int]) -> Operator:
    """Trace out every mode not listed in ``keep``.

    Kept modes stay in their original order regardless of the order given.
    """
    keep = sorted(set(int(k) for k in keep))
    n = rho.space.n_modes
    if not keep:
        raise ValueError("partial_trace needs at least one mode to keep")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"mode indices {keep} out of range for {n} modes")
    if len(keep) == n:
        return rho
    dims = rho.space.dims
    tensor_form = rho.matrix.reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for mode in range(n):
        if mode not in keep:
            col[mode] = row[mode]
    out = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    reduced = np.einsum("".join(row) + "".join(col) + "->" + out, tensor_form)
    kept_dims = tuple(dims[k] for k in keep)
    d = int(np.prod(kept_dims))
    return Operator(ModeSpace(kept_dims), reduced.reshape(d, d), rho.deficit)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Clamped eigendecomposition of a PSD operator.

    ``vectors`` is ``None`` when the operator was already diagonal in the Fock
    basis, in which case the eigenvalues are the diagonal entries themselves.
    """

    values: np.ndarray
    vectors: np.ndarray | None = field(default=None)

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.values > 0.0)

    def power(self, s: float) -> np.ndarray:
        """Eigenvalues raised to ``s`` with ``0**s == 0`` for every ``s``."""
        out = np.zeros_like(self.values)
        pos = self.values > 0.0
        out[pos] = self.values[pos] ** s
        return out

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.values > 0.0))


def spectrum(rho: Operator, floor: float = EIG_FLOOR) -> Spectrum:
    """Eigendecomposition of a PSD operator with roundoff clamping.

    Eigenvalues below ``-NEG_EIG_TOL`` raise :class:`NotPSDError`. When the
    matrix is exactly diagonal no eigensolver runs and only negative entries are
    clamped; otherwise eigenvalues below ``floor`` are set to zero.
    """
    if not rho.is_hermitian(HERMITIAN_TOL):
        raise ValueError(
            f"operator is not Hermitian (defect {rho.hermiticity_defect():.3g})"
        )
    if rho.is_diagonal():
        values = np.diag(rho.matrix).real.copy()
        vectors = None
        cut = 0.0
    else:
        herm = 0.5 * (rho.matrix + rho.matrix.conj().T)
        values, vectors = np.linalg.eigh(herm)
        cut = floor
    lowest = values.min()
    if lowest < -NEG_EIG_TOL:
        raise NotPSDError(f"operator has eigenvalue {lowest:.3e} < -{NEG_EIG_TOL}")
    values[values < cut] = 0.0
    return Spectrum(values, vectors)


def fractional_power(rho: Operator, s: float) -> Operator:
    """``rho**s`` through the eigendecomposition, with ``0**0 := 0``.

    At ``s = 0`` this is the projector onto the support of ``rho``.
    """
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"exponent must lie in [0, 1], got {s}")
    spec = spectrum(rho)
    powered = spec.power(s)
    if spec.vectors is None:
        return Operator(rho.space, np.diag(powered))
    v = spec.vectors
    return Operator(rho.space, (v * powered) @ v.conj().T)


def trace_norm(a: Operator) -> float:
    """Sum of absolute eigenvalues of a Hermitian operator."""
    if not a.is_hermitian(HERMITIAN_TOL):
        raise ValueError(
            f"trace_norm is restricted to Hermitian operators "
            f"(defect {a.hermiticity_defect():.3g})"
        )
    herm = 0.5 * (a.matrix + a.matrix.conj().T)
    return float(np.sum(np.abs(np.linalg.eigvalsh(herm))))


def trace_distance(a: Operator, b: Operator) -> float:
    return 0.5 * trace_norm(a - b)


def fidelity_pure(psi: StateVector, rho: Operator) -> float:
    """``<psi|rho|psi>`` for a pure state against a density operator."""
    if psi.space != rho.space:
        raise SpaceMismatchError(f"{psi.space.dims} vs {rho.space.dims}")
    amps = psi.amplitudes
    value = np.vdot(amps, rho.matrix @ amps)
    if abs(value.imag) > 1e-12:
        raise ValueError(f"<psi|rho|psi> has imaginary part {value.imag:.3e}")
    return float(value.real)


def density_violations(rho: Operator, budget: float = 1e-12) -> list[str]:
    """List the density-operator invariants that ``rho`` breaks (empty if valid).

    ``budget`` bounds the allowed trace deficit from truncation.
    """
    problems = []
    defect = rho.hermiticity_defect()
    if defect > HERMITIAN_TOL:
        problems.append(f"hermiticity defect {defect:.3e}")
    tr = rho.trace()
    if abs(tr.imag) > HERMITIAN_TOL or not (1.0 - budget - 1e-12 <= tr.real <= 1.0 + 1e-12):
        problems.append(f"trace {tr} outside budget {budget}")
    if rho.is_diagonal():
        lowest = float(np.diag(rho.matrix).real.min())
    else:
        herm = 0.5 * (rho.matrix + rho.matrix.conj().T)
        lowest = float(np.linalg.eigvalsh(herm).min())
    if lowest < -NEG_EIG_TOL:
        problems.append(f"minimum eigenvalue {lowest:.3e}")
    return problems
