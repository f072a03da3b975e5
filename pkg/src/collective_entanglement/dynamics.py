"""Route an evolution through the reduced subspace or the full-space integrator."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .hilbert import check_density_matrix, num_qubits
from .master_equation import (
    DissipatorSpec,
    EvolutionGrid,
    check_sample,
    evolve_expm_series,
    evolve_rk4,
)
from .subspace import OperatorBasisElement, SubspaceSystem, evolve_subspace, generate_subspace

METHODS = ("auto", "subspace", "rk4", "expm")


def exact_operator(rho, max_denominator=1 << 20, atol=1e-15):
    """Sparse exact form of ``rho`` if all entries are small rationals, else None."""
    if isinstance(rho, OperatorBasisElement):
        return rho.as_dict()
    rho = np.asarray(rho)
    out = {}
    for (k, b) in zip(*np.nonzero(np.abs(rho) > atol)):
        z = complex(rho[k, b])
        if abs(z.imag) > atol:
            return None
        w = Fraction(z.real).limit_denominator(max_denominator)
        if abs(float(w) - z.real) > atol:
            return None
        out[(int(k), int(b))] = w
    return out or None


def subspace_for(spec: DissipatorSpec, rho0) -> SubspaceSystem | None:
    if spec.nbar != 0:
        return None
    exact = exact_operator(rho0)
    if exact is None:
        return None
    return generate_subspace(spec.n, exact)


def evolve_states(spec: DissipatorSpec, rho0, grid: EvolutionGrid, method: str = "auto"):
    """Density matrices at the sample times of ``grid``.

    ``auto`` uses the exact subspace when ``nbar == 0`` and ``rho0`` has
    rational entries, falling back to RK4. Returns ``(times, states, route)``.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if isinstance(rho0, OperatorBasisElement):
        dense = rho0.to_dense().astype(complex)
    else:
        dense = np.asarray(rho0, dtype=complex)
    dense = check_density_matrix(dense)
    if num_qubits(dense) != spec.n:
        raise ValueError("initial state does not match spec.n")

    if method in ("auto", "subspace"):
        system = subspace_for(spec, rho0)
        if system is not None:
            times = grid.times()
            traj = evolve_subspace(system, spec.gamma, times)
            states = system.reconstruct(traj.values)
            for t, rho in zip(times, states):
                check_sample(t, rho)
            return times, states, "subspace"
        if method == "subspace":
            raise ValueError("no exact subspace route: needs nbar = 0 and a rational initial state")
    if method == "expm":
        times = grid.times()
        states = evolve_expm_series(spec, dense, times)
        for t, rho in zip(times, states):
            check_sample(t, rho)
        return times, states, "expm"
    times, states = evolve_rk4(spec, dense, grid)
    return times, states, "rk4"
