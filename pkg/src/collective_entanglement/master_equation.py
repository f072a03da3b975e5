"""Collective (optionally thermal) Lindblad dissipation in the full qubit space.

The generator is

    drho/dt = gamma (1 + nbar) D[sigma] rho + gamma nbar D[sigma^dag] rho,
    D[O] rho = 2 O rho O^dag - {O^dag O, rho},

with ``sigma`` the collective lowering operator. For ``nbar = 0`` only the
first term is evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .expm import expm
from .hilbert import (
    MAX_QUBITS,
    check_density_matrix,
    collective_lowering,
    density_diagnostics,
    num_qubits,
)

EXPM_MAX_QUBITS = 4

RK4_TRACE_ATOL = 1e-9
RK4_HERMITIAN_ATOL = 1e-10
RK4_PSD_ATOL = 1e-8


class InvariantViolation(RuntimeError):
    """A propagated state left the density-matrix manifold."""

    def __init__(self, t, metric, value):
        self.t = t
        self.metric = metric
        self.value = value
        super().__init__(f"{metric} violated at t={t!r}: {value:.3e}")


@dataclass(frozen=True)
class DissipatorSpec:
    n: int
    gamma: float
    nbar: float = 0.0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"qubit count must lie in [1, {MAX_QUBITS}], got {self.n}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not self.nbar >= 0:
            raise ValueError(f"nbar must be non-negative, got {self.nbar}")

    @property
    def dim(self) -> int:
        return 2**self.n

    @property
    def stiffness(self) -> float:
        """Rate scale ``gamma n (1 + 2 nbar)`` used for step-size bounds."""
        return self.gamma * self.n * (1.0 + 2.0 * self.nbar)

    def default_dt(self) -> float:
        return 0.01 / self.stiffness

    def max_dt(self) -> float:
        return 0.1 / self.stiffness


@dataclass(frozen=True)
class EvolutionGrid:
    """Fixed-step time grid; every ``sample_every``-th step is recorded.

    The final time is always sampled. If ``t_end - t_start`` is not a
    multiple of ``dt`` the step is shrunk to the nearest divisor.
    """

    t_start: float
    t_end: float
    dt: float
    sample_every: int = 1

    def __post_init__(self):
        if not 0 <= self.t_start <= self.t_end:
            raise ValueError(f"need 0 <= t_start <= t_end, got {self.t_start}, {self.t_end}")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.sample_every < 1:
            raise ValueError("sample_every must be a positive integer")

    @classmethod
    def for_spec(cls, spec: DissipatorSpec, t_end, samples=None, dt=None, t_start=0.0):
        """Grid with the default stable step and roughly ``samples`` samples."""
        dt = spec.default_dt() if dt is None else dt
        grid = cls(t_start, t_end, dt)
        if samples is not None and samples > 1 and grid.steps > 0:
            every = max(1, grid.steps // (samples - 1))
            grid = cls(t_start, t_end, dt, every)
        grid.validate(spec)
        return grid

    def validate(self, spec: DissipatorSpec) -> None:
        if self.dt > spec.max_dt() * (1 + 1e-12):
            raise ValueError(
                f"dt={self.dt} exceeds the stability bound 0.1/(gamma n (1+2 nbar)) = {spec.max_dt()}"
            )

    @property
    def steps(self) -> int:
        span = self.t_end - self.t_start
        if span == 0:
            return 0
        return max(1, math.ceil(span / self.dt - 1e-9))

    @property
    def step(self) -> float:
        return (self.t_end - self.t_start) / self.steps if self.steps else 0.0

    def sample_steps(self) -> list[int]:
        idx = list(range(0, self.steps + 1, self.sample_every))
        if idx[-1] != self.steps:
            idx.append(self.steps)
        return idx

    def times(self) -> np.ndarray:
        return np.array([self.t_start + k * self.step for k in self.sample_steps()])


@lru_cache(maxsize=None)
def _ladder(n: int):
    low = collective_lowering(n)
    low.setflags(write=False)
    high = low.conj().T.copy()
    high.setflags(write=False)
    return low, high


def _dissipator(op, op_dag, rho):
    number = op_dag @ op
    return 2.0 * (op @ rho @ op_dag) - number @ rho - rho @ number


def apply_dissipator(spec: DissipatorSpec, rho: np.ndarray) -> np.ndarray:
    """Return ``drho/dt`` for the collective (thermal) Lindblad generator."""
    rho = np.asarray(rho, dtype=complex)
    if num_qubits(rho) != spec.n:
        raise ValueError(f"operator of dimension {rho.shape[0]} does not match n={spec.n}")
    low, high = _ladder(spec.n)
    out = spec.gamma * (1.0 + spec.nbar) * _dissipator(low, high, rho)
    if spec.nbar:
        out = out + spec.gamma * spec.nbar * _dissipator(high, low, rho)
    return out


def liouvillian(spec: DissipatorSpec) -> np.ndarray:
    """Superoperator acting on column-stacked ``vec(rho)``.

    Uses ``vec(A X B) = (B^T kron A) vec(X)``.
    """
    low, high = _ladder(spec.n)
    ident = np.eye(spec.dim)

    def block(op, op_dag):
        number = op_dag @ op
        return 2.0 * np.kron(op_dag.T, op) - np.kron(ident, number) - np.kron(number.T, ident)

    out = spec.gamma * (1.0 + spec.nbar) * block(low, high)
    if spec.nbar:
        out = out + spec.gamma * spec.nbar * block(high, low)
    return out


def vec(rho):
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v, dim):
    return np.asarray(v).reshape((dim, dim), order="F")


def evolve_expm(spec: DissipatorSpec, rho0: np.ndarray, t: float) -> np.ndarray:
    """Oracle propagation ``rho(t) = exp(t L) rho(0)`` in Liouville space (n <= 4)."""
    if spec.n > EXPM_MAX_QUBITS:
        raise ValueError(f"expm oracle limited to n <= {EXPM_MAX_QUBITS}, got n={spec.n}")
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    rho0 = check_density_matrix(rho0)
    if num_qubits(rho0) != spec.n:
        raise ValueError("initial state does not match spec.n")
    if t == 0:
        return rho0.copy()
    prop = expm(t * liouvillian(spec))
    return unvec(prop @ vec(rho0), spec.dim)


def evolve_expm_series(spec: DissipatorSpec, rho0: np.ndarray, times) -> np.ndarray:
    return np.array([evolve_expm(spec, rho0, float(t)) for t in times])


def check_sample(t, rho):
    diag = density_diagnostics(rho)
    if diag["trace"] > RK4_TRACE_ATOL:
        raise InvariantViolation(t, "trace", diag["trace"])
    if diag["hermiticity"] > RK4_HERMITIAN_ATOL:
        raise InvariantViolation(t, "hermiticity", diag["hermiticity"])
    if diag["min_eigenvalue"] < -RK4_PSD_ATOL:
        raise InvariantViolation(t, "positivity", diag["min_eigenvalue"])


def evolve_rk4(spec: DissipatorSpec, rho0: np.ndarray, grid: EvolutionGrid):
    """Classical fixed-step RK4 with Hermitian symmetrization after each step.

    Returns ``(times, states)`` where ``states[k]`` is the density matrix at
    ``times[k]``. Each recorded sample is checked against the trace,
    hermiticity and positivity tolerances; a violation raises
    :class:`InvariantViolation`.
    """
    rho = check_density_matrix(rho0).copy()
    if num_qubits(rho) != spec.n:
        raise ValueError("initial state does not match spec.n")
    grid.validate(spec)
    h = grid.step
    wanted = set(grid.sample_steps())
    times, states = [], []
    for k in range(grid.steps + 1):
        if k in wanted:
            t = grid.t_start + k * h
            check_sample(t, rho)
            times.append(t)
            states.append(rho.copy())
        if k == grid.steps:
            break
        k1 = apply_dissipator(spec, rho)
        k2 = apply_dissipator(spec, rho + 0.5 * h * k1)
        k3 = apply_dissipator(spec, rho + 0.5 * h * k2)
        k4 = apply_dissipator(spec, rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = 0.5 * (rho + rho.conj().T)
    return np.array(times), np.array(states)
