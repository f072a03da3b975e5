"""Two-qubit concurrence: the general Wootters measure and closed forms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hilbert import DensityMatrixError, check_density_matrix, partial_trace

SIGMA_Y2 = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))

# eigenvalues of rho below this are treated as exact zeros when forming sqrt(rho)
SPECTRUM_FLOOR = 1e-14
# concurrences below this are reported as exactly zero
CONCURRENCE_FLOOR = 1e-12


@dataclass(frozen=True)
class ConcurrencePoint:
    t: float
    value: float
    pair: tuple[int, int]

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"concurrence {self.value} outside [0, 1]")


def _sqrtm_psd(rho):
    vals, vecs = np.linalg.eigh(rho)
    vals = np.where(vals < SPECTRUM_FLOOR, 0.0, vals)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def wootters_lambdas(rho: np.ndarray) -> np.ndarray:
    """Eigenvalues of ``R = sqrt(sqrt(rho) rho~ sqrt(rho))``, descending.

    With ``rho~ = Y rho* Y`` and ``Y = sigma_y x sigma_y`` one has
    ``sqrt(rho~) = Y sqrt(rho)* Y``, so the eigenvalues of ``R`` are the
    singular values of ``sqrt(rho) Y sqrt(rho)* Y``. Singular values avoid
    the square root of round-off sized eigenvalues.
    """
    root = _sqrtm_psd(0.5 * (rho + rho.conj().T))
    flipped = SIGMA_Y2 @ root.conj() @ SIGMA_Y2
    return np.linalg.svd(root @ flipped, compute_uv=False)


def wootters_concurrence(rho4: np.ndarray) -> float:
    """Concurrence ``max(0, l1 - l2 - l3 - l4)`` of a two-qubit density matrix."""
    rho4 = np.asarray(rho4, dtype=complex)
    if rho4.shape != (4, 4):
        raise ValueError(f"concurrence needs a 4x4 two-qubit state, got shape {rho4.shape}")
    try:
        rho4 = check_density_matrix(rho4, herm_atol=1e-10)
    except DensityMatrixError as exc:
        raise DensityMatrixError(f"invalid two-qubit state: {exc}") from None
    lam = wootters_lambdas(rho4)
    value = float(lam[0] - lam[1] - lam[2] - lam[3])
    if value < CONCURRENCE_FLOOR:
        return 0.0
    return min(value, 1.0)


def pair_concurrences(states, pairs: Sequence[tuple[int, int]]) -> np.ndarray:
    """Concurrence of every ``pair`` for each state in ``states``."""
    return np.array([[wootters_concurrence(partial_trace(rho, pair)) for pair in pairs] for rho in states])


# -- closed forms -------------------------------------------------------------------


def _clamp(x):
    return max(0.0, float(x))


def c_two_qubit(gamma, t):
    return _clamp(0.5 - 0.5 * math.exp(-4 * gamma * t))


def c_kj(n, gamma, t):
    """Excited/ground pair after one initial excitation among ``n`` qubits."""
    f = (1 - math.exp(-n * gamma * t)) / n
    return _clamp(2 * f * (1 - f))


def c_jm(n, gamma, t):
    """Two initially unexcited qubits."""
    return _clamp(2 * ((1 - math.exp(-n * gamma * t)) / n) ** 2)


def c_kj_steady(n):
    return _clamp(2 * (n - 1) / n**2)


def c_jm_steady(n):
    return _clamp(2 / n**2)


def c_12_four(d):
    """Printed four-qubit ``C_{1,2}``, evaluated verbatim then clamped."""
    return _clamp(2 * (d[2] + 2 * d[5]) - math.sqrt(max(0.0, (d[0] + 2 * d[1] + d[6]) * d[4])))


def c_13_four(d):
    return _clamp(-2 * (d[3] + d[9] + d[7]) - 2 * math.sqrt(max(0.0, d[5] * (d[0] + d[1] + d[2] + d[5]))))


def c_34_four(d):
    return _clamp(2 * (d[1] + 2 * d[5]) - 2 * math.sqrt(max(0.0, d[6] * (d[0] + 2 * d[2] + d[4]))))


def c_13_three(d):
    """Printed three-qubit ``C_{1,3}``; ``d`` uses the four-qubit slot numbering."""
    return _clamp(-2 * (d[3] + d[7]) - 2 * math.sqrt(max(0.0, d[5] * (d[0] + d[2]))))


def c_kj_thermal(n, gamma, nbar, t):
    """``2 (1 + nbar)/n (1 - e^{-n gamma (1 + 2 nbar) t}) (1 - f_n)``, written as ``2 f_n (1 - f_n)``."""
    f = (1 + nbar) * (1 - math.exp(-n * gamma * (1 + 2 * nbar) * t)) / n
    return _clamp(2 * f * (1 - f))


CLOSED_FORMS = {
    "c_two_qubit": c_two_qubit,
    "c_kj": c_kj,
    "c_jm": c_jm,
    "c_kj_steady": c_kj_steady,
    "c_jm_steady": c_jm_steady,
    "c_12_four": c_12_four,
    "c_13_four": c_13_four,
    "c_34_four": c_34_four,
    "c_13_three": c_13_three,
    "c_kj_thermal": c_kj_thermal,
}


def closed_form_concurrence(case: str, *params):
    """Dispatch to one of the closed-form concurrences by name."""
    try:
        func = CLOSED_FORMS[case]
    except KeyError:
        raise ValueError(f"unknown closed form {case!r}; choose from {sorted(CLOSED_FORMS)}") from None
    return func(*params)


def concurrence_series(spec, rho0, pair, grid, method="auto"):
    """Pairwise concurrence along an evolution.

    The state is propagated by :func:`dynamics.evolve_states` (exact subspace
    when available, RK4 otherwise), reduced to ``pair`` and passed through
    :func:`wootters_concurrence`.
    """
    from .dynamics import evolve_states

    pair = tuple(int(q) for q in pair)
    times, states, _ = evolve_states(spec, rho0, grid, method)
    return [
        ConcurrencePoint(float(t), wootters_concurrence(partial_trace(rho, pair)), pair)
        for t, rho in zip(times, states)
    ]
