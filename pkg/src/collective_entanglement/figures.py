"""Curve data behind each figure, as column tables.

Every generator returns a :class:`FigureData` whose first column is ``t``
(or ``nbar`` for steady-state curves). Concurrences labelled ``pipeline``
come from evolution, partial trace and the Wootters measure; unlabelled
curves are closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import entanglement as ent
from . import reference, thermal
from .dynamics import evolve_states
from .hilbert import partial_trace, pure_state_density
from .library import four_qubit_system, one_excitation_system, three_qubit_system, two_qubit_system
from .master_equation import DissipatorSpec, EvolutionGrid
from .subspace import SubspaceSystem, evolve_subspace

FIGURES = tuple(f"fig{i}" for i in range(1, 10))
DEFAULT_SAMPLES = 200


@dataclass
class FigureData:
    figure: str
    params: dict
    columns: list[str]
    rows: np.ndarray
    extra: dict[str, "FigureData"] = field(default_factory=dict)


def _times(t_max, samples):
    return np.linspace(0.0, t_max, samples)


def subspace_concurrence(system: SubspaceSystem, gamma, times, pair):
    """Pipeline concurrence of ``pair`` along the reduced trajectory."""
    states = system.reconstruct(evolve_subspace(system, gamma, times).values)
    return np.array([ent.wootters_concurrence(partial_trace(rho, pair)) for rho in states])


def fig1(samples=DEFAULT_SAMPLES, gamma=1.0, t_max=5.0):
    t = _times(t_max, samples)
    closed = [ent.c_two_qubit(gamma, x) for x in t]
    pipe = subspace_concurrence(two_qubit_system(), gamma, t, (1, 2))
    return FigureData("fig1", {"gamma": gamma, "t_max": t_max, "samples": samples},
                      ["t", "C12", "C12 pipeline"], np.column_stack([t, closed, pipe]))


def _one_excitation_family(fig, closed, pair, ns, samples, gamma, t_max):
    t = _times(t_max, samples)
    columns, data = ["t"], [t]
    for n in ns:
        columns += [f"n={n}", f"n={n} pipeline"]
        data.append([closed(n, gamma, x) for x in t])
        data.append(subspace_concurrence(one_excitation_system(n), gamma, t, pair))
    return FigureData(fig, {"gamma": gamma, "t_max": t_max, "samples": samples, "n": list(ns)},
                      columns, np.column_stack(data))


def fig2(samples=DEFAULT_SAMPLES, gamma=1.0, t_max=5.0, ns=(2, 3, 4, 5, 6)):
    """Excited/ground pair ``(1, 2)`` after exciting qubit 1."""
    return _one_excitation_family("fig2", ent.c_kj, (1, 2), ns, samples, gamma, t_max)


def fig3(samples=DEFAULT_SAMPLES, gamma=1.0, t_max=5.0, ns=(3, 4, 5, 6)):
    """Ground/ground pair ``(2, 3)`` after exciting qubit 1; needs ``n >= 3``."""
    return _one_excitation_family("fig3", ent.c_jm, (2, 3), ns, samples, gamma, t_max)


def fig4(samples=DEFAULT_SAMPLES, gamma=1.0, t_max=5.0):
    """Four qubits, qubits 1 and 2 excited."""
    t = _times(t_max, samples)
    system = four_qubit_system()
    states = system.reconstruct(evolve_subspace(system, gamma, t).values)
    cols = {pair: [ent.wootters_concurrence(partial_trace(rho, pair)) for rho in states]
            for pair in ((1, 2), (1, 3), (3, 4))}
    printed = [ent.c_13_four(reference.four_qubit_coefficients(gamma * x)) for x in t]
    return FigureData("fig4", {"gamma": gamma, "t_max": t_max, "samples": samples},
                      ["t", "C13 pipeline", "C13 printed", "C12 pipeline", "C34 pipeline"],
                      np.column_stack([t, cols[(1, 3)], printed, cols[(1, 2)], cols[(3, 4)]]))


def fig5(samples=DEFAULT_SAMPLES, gamma=1.0, t_max=5.0):
    """Three qubits, qubits 1 and 2 excited."""
    t = _times(t_max, samples)
    system = three_qubit_system()
    coeffs = evolve_subspace(system, gamma, t).values
    states = system.reconstruct(coeffs)
    pipe = [ent.wootters_concurrence(partial_trace(rho, (1, 3))) for rho in states]
    printed = []
    for a in coeffs:
        d = np.zeros(10)
        d[list(reference.THREE_QUBIT_SLOTS)] = a
        printed.append(ent.c_13_three(d))
    return FigureData("fig5", {"gamma": gamma, "t_max": t_max, "samples": samples},
                      ["t", "C13 pipeline", "C13 printed"], np.column_stack([t, pipe, printed]))


def fig6(samples=DEFAULT_SAMPLES, gamma=1.0, t_max=5.0):
    """Three qubits, qubit 1 excited."""
    t = _times(t_max, samples)
    pipe = subspace_concurrence(one_excitation_system(3), gamma, t, (1, 3))
    closed = [ent.c_kj(3, gamma, x) for x in t]
    return FigureData("fig6", {"gamma": gamma, "t_max": t_max, "samples": samples},
                      ["t", "C13", "C13 pipeline"], np.column_stack([t, closed, pipe]))


FIG7_TEMPERATURES = (0.01, 0.1, 1.0)
FIG7_NBARS = (0.0, 0.1, 3.0)


def ghz_state(n):
    amp = 2**-0.5
    return pure_state_density({"0" * n: amp, "1" * n: amp})


def fig7(samples=DEFAULT_SAMPLES, gamma=0.1, t_max=50.0, n=4):
    """Four-qubit GHZ state at the three bath temperatures.

    The occupations are the quoted values for ``T = 0.01, 0.1, 1.0``. The
    GHZ columns are pipeline concurrences of qubits ``(1, 2)``; the
    ``C_kj`` columns are the thermal closed form for one initial excitation.
    """
    t = _times(t_max, samples)
    columns, data = ["t"], [t]
    ghz = ghz_state(n)
    for temp, nbar in zip(FIG7_TEMPERATURES, FIG7_NBARS):
        spec = DissipatorSpec(n, gamma, nbar)
        every = max(1, round((t_max / (samples - 1)) / spec.default_dt()))
        grid = EvolutionGrid(0.0, t_max, t_max / ((samples - 1) * every), every)
        times, states, _ = evolve_states(spec, ghz, grid)
        if len(times) != samples:
            raise AssertionError("sample grid mismatch")
        columns.append(f"T={temp:g} nbar={nbar:g} GHZ C12 pipeline")
        data.append([ent.wootters_concurrence(partial_trace(rho, (1, 2))) for rho in states])
        columns.append(f"T={temp:g} nbar={nbar:g} C_kj")
        data.append([thermal.thermal_closed_form(n, gamma, nbar, x)[1] for x in t])
    return FigureData("fig7", {"gamma": gamma, "t_max": t_max, "samples": samples, "n": n},
                      columns, np.column_stack(data))


FIG8_NBARS = (0.0, 1.0, 2.0, 3.0)


def fig8(samples=DEFAULT_SAMPLES, gamma=0.1, t_max=50.0, ns=(2, 3, 4), nbar_max=4.0):
    """Thermal closed-form ``C_kj(t)`` and the steady-state curve ``C_inf(nbar)``.

    The steady-state table records the formula roots and the marked values in
    its parameters.
    """
    t = _times(t_max, samples)
    columns, data = ["t"], [t]
    for n in ns:
        for nbar in FIG8_NBARS:
            columns.append(f"n={n} nbar={nbar:g}")
            data.append([thermal.thermal_closed_form(n, gamma, nbar, x)[1] for x in t])
    grid = np.linspace(0.0, nbar_max, samples)
    s_cols, s_data = ["nbar"], [grid]
    for n in ns:
        s_cols.append(f"n={n} C_inf")
        s_data.append([max(0.0, thermal.steady_concurrence(n, x)) for x in grid])
    steady = FigureData("fig8_steady", {"ns": list(ns), "critical_nbar": [thermal.critical_nbar(n) for n in ns],
                                        "marked_nbar": list(reference.FIGURE8_MARKED_NBAR)},
                        s_cols, np.column_stack(s_data))
    return FigureData("fig8", {"gamma": gamma, "t_max": t_max, "samples": samples, "n": list(ns)},
                      columns, np.column_stack(data), {"steady": steady})


FIG9_PANELS = (
    ("(a) n=2 one excitation", lambda: two_qubit_system(), (1, 2)),
    ("(b) n=3 one excitation", lambda: one_excitation_system(3), (1, 3)),
    ("(c) n=3 two excitations", lambda: three_qubit_system(), (1, 3)),
    ("(d) n=4 two excitations", lambda: four_qubit_system(), (1, 3)),
)


def fig9(samples=DEFAULT_SAMPLES, gamma=1.0, t_max=10.0):
    t = _times(t_max, samples)
    columns, data = ["t"], [t]
    for label, build, pair in FIG9_PANELS:
        columns.append(label)
        data.append(subspace_concurrence(build(), gamma, t, pair))
    return FigureData("fig9", {"gamma": gamma, "t_max": t_max, "samples": samples},
                      columns, np.column_stack(data))


def figure(fig_id: str, samples: int = DEFAULT_SAMPLES) -> FigureData:
    builders = {"fig1": fig1, "fig2": fig2, "fig3": fig3, "fig4": fig4, "fig5": fig5,
                "fig6": fig6, "fig7": fig7, "fig8": fig8, "fig9": fig9}
    if fig_id not in builders:
        raise ValueError(f"unknown figure {fig_id!r}; choose from {FIGURES}")
    return builders[fig_id](samples=samples)
