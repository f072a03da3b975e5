"""Cross-checks between printed formulas and independent numerical routes."""

from __future__ import annotations

import numpy as np

from . import reference, thermal
from .dynamics import evolve_states
from .entanglement import c_12_four, c_13_four, c_34_four, pair_concurrences, wootters_concurrence
from .hilbert import partial_trace
from .library import coefficient_deviations, four_qubit_system
from .master_equation import DissipatorSpec, EvolutionGrid
from .subspace import evolve_subspace, excited_projector

REPORTS = ("thermal-closed-form", "four-qubit-concurrence", "critical-nbar", "four-qubit-coefficients")

THERMAL_NS = (2, 3, 4)
THERMAL_NBARS = (0.0, 0.45, 3.0)


def thermal_closed_form_report(ns=THERMAL_NS, nbars=THERMAL_NBARS, gamma=1.0, samples=101, span=10.0):
    """Closed-form ``f_n``/``C_kj`` against the rate equations and the full pipeline.

    Per ``(n, nbar)`` the time window is ``[0, span / (gamma n (1 + 2 nbar))]``.
    From the rate-equation solution ``f = 1 - sqrt(a1)`` and ``C = 2 |a3|``;
    the pipeline value is the Wootters concurrence of qubits ``(1, 2)`` after
    full-space RK4 from ``|10...0>``.
    """
    entries = []
    for n in ns:
        for nbar in nbars:
            spec = DissipatorSpec(n, gamma, nbar)
            t_end = span / spec.stiffness
            grid = EvolutionGrid.for_spec(spec, t_end, samples=samples)
            times, states, _ = evolve_states(spec, excited_projector(n, [1]).to_dense(), grid, "rk4")
            a = thermal.integrate_rate_equations(n, gamma, nbar, times)
            f_ode = 1 - np.sqrt(np.clip(a[:, 1], 0, None))
            c_ode = 2 * np.abs(a[:, 3])
            closed = np.array([thermal.thermal_closed_form(n, gamma, nbar, t) for t in times])
            c_pipe = pair_concurrences(states, [(1, 2)])[:, 0]
            entries.append({
                "n": n,
                "nbar": nbar,
                "t_max": float(times[-1]),
                "samples": len(times),
                "max_dev_f_closed_vs_rate_equations": float(np.max(np.abs(closed[:, 0] - f_ode))),
                "max_dev_c_closed_vs_rate_equations": float(np.max(np.abs(closed[:, 1] - c_ode))),
                "max_dev_c_closed_vs_pipeline": float(np.max(np.abs(closed[:, 1] - c_pipe))),
                "max_dev_c_rate_equations_vs_pipeline": float(np.max(np.abs(c_ode - c_pipe))),
                "steady_c_closed": thermal.steady_concurrence(n, nbar),
            })
    return {"report": "thermal-closed-form", "gamma": gamma, "entries": entries}


PRINTED_FOUR_QUBIT = {(1, 2): c_12_four, (1, 3): c_13_four, (3, 4): c_34_four}


def printed_rho34(d):
    """Reduced state of qubits 3 and 4 as printed, entry for entry."""
    rho = np.zeros((4, 4))
    rho[0, 0] = d[0] + 2 * d[2] + d[4]
    rho[2, 2] = rho[2, 1] = rho[1, 2] = rho[1, 1] = d[1] + 2 * d[5]
    rho[3, 3] = d[6]
    return rho


def four_qubit_concurrence_report(gamma=1.0, t_max=10.0, samples=201, pairs=((1, 2), (1, 3), (3, 4))):
    """Printed four-qubit concurrences against the Wootters pipeline.

    The printed formulas are evaluated twice: with the printed ``d_i(t)`` and
    with the exact coefficients, separating formula errors from coefficient
    errors.
    """
    system = four_qubit_system()
    times = np.linspace(0.0, t_max, samples)
    exact = evolve_subspace(system, gamma, times).values
    states = system.reconstruct(exact)
    out = []
    for pair in pairs:
        pair = tuple(pair)
        formula = PRINTED_FOUR_QUBIT[pair]
        pipe = np.array([wootters_concurrence(partial_trace(rho, pair)) for rho in states])
        printed = np.array([formula(reference.four_qubit_coefficients(gamma * t)) for t in times])
        printed_exact_d = np.array([formula(d) for d in exact])
        dev = np.abs(printed - pipe)
        out.append({
            "pair": list(pair),
            "max_pipeline": float(pipe.max()),
            "max_deviation": float(dev.max()),
            "max_deviation_exact_coefficients": float(np.max(np.abs(printed_exact_d - pipe))),
            "worst_t": float(times[int(np.argmax(dev))]),
            "series": [
                {"t": float(t), "printed": float(p), "pipeline": float(q), "deviation": float(d)}
                for t, p, q, d in zip(times, printed, pipe, dev)
            ],
        })
    entry_dev = np.max([np.abs(printed_rho34(d) - partial_trace(rho, (3, 4)).real) for d, rho in zip(exact, states)],
                       axis=0)
    names = ("00", "10", "01", "11")
    rho34 = {
        "max_deviation": float(entry_dev.max()),
        "differing_entries": [f"|{names[i]}><{names[j]}|" for i in range(4) for j in range(4) if entry_dev[i, j] > 1e-12],
    }
    return {"report": "four-qubit-concurrence", "gamma": gamma, "pairs": out, "rho34_printed_vs_partial_trace": rho34}


def critical_nbar_report():
    """Marked critical ``nbar`` of the three steady-state panels against ``nbar = n - 1``.

    Panels are read as ``n = 1, 2, 3`` in order.
    """
    panels = []
    for n, marked in zip((1, 2, 3), reference.FIGURE8_MARKED_NBAR):
        root = thermal.critical_nbar(n)
        panels.append({
            "n": n,
            "marked_nbar": marked,
            "formula_root": root,
            "difference": abs(marked - root),
            "steady_c_at_marked": thermal.steady_concurrence(n, marked),
        })
    return {"report": "critical-nbar", "panels": panels,
            "roots": {str(n): thermal.critical_nbar(n) for n in (2, 3, 4, 5, 6)}}


def four_qubit_coefficients_report(times=(0.1, 0.5, 1.0, 2.0), tol=1e-9):
    every, divergent = coefficient_deviations(times, tol=tol)
    rows = [{"index": d.index, "label": d.label, "max_deviation": d.max_deviation, "worst_t": d.worst_t}
            for d in every]
    return {
        "report": "four-qubit-coefficients",
        "times": list(times),
        "tolerance": tol,
        "coefficients": rows,
        "divergent": [f"d{d.index}" for d in divergent],
    }


def run_report(report_id: str):
    if report_id == "thermal-closed-form":
        return thermal_closed_form_report()
    if report_id == "four-qubit-concurrence":
        return four_qubit_concurrence_report()
    if report_id == "critical-nbar":
        return critical_nbar_report()
    if report_id == "four-qubit-coefficients":
        return four_qubit_coefficients_report()
    raise ValueError(f"unknown report {report_id!r}; choose from {REPORTS}")
