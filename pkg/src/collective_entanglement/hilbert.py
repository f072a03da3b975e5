"""Qubit-register state spaces, basis kets and collective ladder operators.

Convention: qubit 1 is the leftmost tensor factor, i.e. the most significant
bit of the computational-basis index. ``|10>`` therefore has index 2 and
means "qubit 1 excited, qubit 2 in the ground state".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

MAX_QUBITS = 10

HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-9
PSD_ATOL = 1e-9


class DensityMatrixError(ValueError):
    """Raised when an array fails the density-matrix invariants."""


@dataclass(frozen=True)
class BasisKet:
    """Computational-basis ket of an ``n``-qubit register (1 = excited)."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if not bits:
            raise ValueError("a basis ket needs at least one qubit")
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"bits must be 0 or 1, got {self.bits!r}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, label: str) -> "BasisKet":
        return cls(tuple(int(c) for c in label.strip().strip("|>")))

    @classmethod
    def from_index(cls, index: int, n: int) -> "BasisKet":
        if not 0 <= index < 2**n:
            raise ValueError(f"index {index} out of range for {n} qubits")
        return cls(tuple((index >> (n - 1 - q)) & 1 for q in range(n)))

    @classmethod
    def excited(cls, n: int, qubits: Sequence[int]) -> "BasisKet":
        """Ket with the given 1-based qubits excited and the rest in |0>."""
        qubits = list(qubits)
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"duplicate excited qubits {qubits}")
        for q in qubits:
            if not 1 <= q <= n:
                raise ValueError(f"qubit {q} outside [1, {n}]")
        return cls(tuple(1 if q + 1 in qubits else 0 for q in range(n)))

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def index(self) -> int:
        idx = 0
        for b in self.bits:
            idx = (idx << 1) | b
        return idx

    @property
    def excitations(self) -> int:
        return sum(self.bits)

    def __str__(self) -> str:
        return "|" + "".join(map(str, self.bits)) + ">"


def _check_n(n: int, max_qubits: int = MAX_QUBITS) -> None:
    if n < 1:
        raise ValueError(f"qubit count must be positive, got {n}")
    if n > max_qubits:
        raise ValueError(f"qubit count {n} exceeds the configured maximum {max_qubits}")


def basis_vector(ket: BasisKet) -> np.ndarray:
    vec = np.zeros(2**ket.n, dtype=complex)
    vec[ket.index] = 1.0
    return vec


def collective_lowering(n: int, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    """Return ``sigma = sum_i I x ... x |0><1|_i x ... x I`` on ``n`` qubits.

    The raising operator is the conjugate transpose.
    """
    _check_n(n, max_qubits)
    dim = 2**n
    sigma = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        for q in range(n):
            mask = 1 << (n - 1 - q)
            if col & mask:
                sigma[col ^ mask, col] += 1.0
    return sigma


def collective_raising(n: int, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    return collective_lowering(n, max_qubits).conj().T


StateLike = Union[BasisKet, Mapping, Sequence[complex], np.ndarray]


def state_vector(state: StateLike, n: int | None = None) -> np.ndarray:
    """Coerce a ket description into a dense amplitude vector.

    Accepts a :class:`BasisKet`, a mapping from basis kets (or bit strings such
    as ``"0110"``) to amplitudes, or a flat amplitude array.
    """
    if isinstance(state, BasisKet):
        return basis_vector(state)
    if isinstance(state, Mapping):
        kets = [k if isinstance(k, BasisKet) else BasisKet.from_string(str(k)) for k in state]
        sizes = {k.n for k in kets}
        if len(sizes) != 1:
            raise ValueError(f"superposition mixes register sizes {sorted(sizes)}")
        size = sizes.pop()
        if n is not None and size != n:
            raise ValueError(f"expected {n} qubits, got {size}")
        vec = np.zeros(2**size, dtype=complex)
        for ket, amp in zip(kets, state.values()):
            vec[ket.index] += complex(amp)
        return vec
    vec = np.asarray(state, dtype=complex).ravel()
    dim = vec.size
    if dim < 2 or dim & (dim - 1):
        raise ValueError(f"amplitude vector length {dim} is not a power of two")
    return vec


def pure_state_density(state: StateLike, atol: float = 1e-12) -> np.ndarray:
    """Projector ``|psi><psi|`` of a normalized pure state."""
    vec = state_vector(state)
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > atol:
        raise ValueError(f"state is not normalized: norm = {norm!r}")
    return np.outer(vec, vec.conj())


def num_qubits(op: np.ndarray) -> int:
    dim = op.shape[0]
    if op.ndim != 2 or op.shape[1] != dim or dim < 2 or dim & (dim - 1):
        raise ValueError(f"operator shape {op.shape} is not square with power-of-two size")
    return dim.bit_length() - 1


def density_diagnostics(rho: np.ndarray) -> dict[str, float]:
    """Hermiticity defect, trace defect and minimum eigenvalue of ``rho``."""
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    trace = abs(complex(np.trace(rho)) - 1.0)
    min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    return {"hermiticity": herm, "trace": trace, "min_eigenvalue": min_eig}


def check_density_matrix(
    rho: np.ndarray,
    herm_atol: float = HERMITIAN_ATOL,
    trace_atol: float = TRACE_ATOL,
    psd_atol: float = PSD_ATOL,
) -> np.ndarray:
    """Validate ``rho`` as a density matrix and return it as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    num_qubits(rho)
    diag = density_diagnostics(rho)
    if diag["hermiticity"] > herm_atol:
        raise DensityMatrixError(f"not Hermitian: max |rho - rho^dag| = {diag['hermiticity']:.3e}")
    if diag["trace"] > trace_atol:
        raise DensityMatrixError(f"trace deviates from 1 by {diag['trace']:.3e}")
    if diag["min_eigenvalue"] < -psd_atol:
        raise DensityMatrixError(f"not positive semidefinite: min eigenvalue {diag['min_eigenvalue']:.3e}")
    return rho


def partial_trace(rho: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Reduced state on the 1-based qubits ``keep``, in the order given.

    The first kept qubit becomes the leftmost factor of the result.
    """
    rho = np.asarray(rho)
    n = num_qubits(rho)
    keep = [int(q) for q in keep]
    if len(set(keep)) != len(keep):
        raise ValueError(f"duplicate qubit indices in {keep}")
    for q in keep:
        if not 1 <= q <= n:
            raise ValueError(f"qubit index {q} outside [1, {n}]")
    traced = [q for q in range(1, n + 1) if q not in keep]
    tensor = rho.reshape((2,) * (2 * n))
    # move kept ket axes, then traced ket axes, then the same for bra axes
    order = [q - 1 for q in keep] + [q - 1 for q in traced]
    tensor = tensor.transpose(order + [n + i for i in order])
    k, m = 2 ** len(keep), 2 ** len(traced)
    tensor = tensor.reshape(k, m, k, m)
    return np.einsum("ajbj->ab", tensor)
