"""Acceptance criteria 1-10, one test each.

Every test records a one-line verdict in ``RESULTS``; ``conftest.py`` prints
them after the run.
"""

import json
import math
import time

import numpy as np
import pytest

from collective_entanglement import cli, reference, thermal
from collective_entanglement.dynamics import evolve_states
from collective_entanglement.entanglement import c_jm_steady, c_kj_steady, c_two_qubit, wootters_concurrence
from collective_entanglement.hilbert import density_diagnostics, partial_trace, pure_state_density
from collective_entanglement.library import four_qubit_system, table_diffs, two_qubit_system
from collective_entanglement.master_equation import DissipatorSpec, EvolutionGrid, evolve_expm
from collective_entanglement.reports import four_qubit_coefficients_report, thermal_closed_form_report
from collective_entanglement.subspace import evolve_subspace, excited_projector

RESULTS = {}

# every evolved state from criteria 1-4, for the conservation suite
EVOLVED = []


class Verdict:
    def __init__(self, number, title):
        self.number, self.title, self.detail = number, title, ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        detail = self.detail if exc_type is None else f"{exc_type.__name__}: {exc}".splitlines()[0]
        RESULTS[self.number] = f"criterion {self.number:2d} {status}  {self.title}: {detail}"
        print(RESULTS[self.number])
        return False


def keep(label, times, states):
    EVOLVED.append((label, np.asarray(times), np.asarray(states)))


def test_criterion_01_two_qubit_concurrence():
    with Verdict(1, "two-qubit concurrence") as v:
        spec = DissipatorSpec(2, 1.0)
        rho0 = excited_projector(2, [1])
        grid = EvolutionGrid.for_spec(spec, 5.0, samples=501)
        errors = {}
        for method in ("auto", "rk4"):
            start = time.perf_counter()
            times, states, route = evolve_states(spec, rho0, grid, method)
            conc = np.array([wootters_concurrence(partial_trace(r, (1, 2))) for r in states])
            elapsed = time.perf_counter() - start
            err = max(abs(c - c_two_qubit(1.0, t)) for t, c in zip(times, conc))
            keep(f"c1 {route}", times, states)
            errors[route] = (err, elapsed)
            assert times[-1] == pytest.approx(5.0)
            assert err < 1e-6, f"{route}: max error {err:.2e}"
            assert elapsed < 1.0, f"{route}: runtime {elapsed:.2f} s"
        v.detail = ", ".join(f"{r} max err {e:.1e} in {s:.2f} s" for r, (e, s) in errors.items())


def test_criterion_02_steady_states():
    with Verdict(2, "steady-state concurrences") as v:
        worst = 0.0
        for n in (2, 3, 4, 5, 6):
            spec = DissipatorSpec(n, 1.0)
            times, states, _ = evolve_states(spec, excited_projector(n, [1]), EvolutionGrid.for_spec(spec, 50 / n, samples=2))
            keep(f"c2 n={n}", times, states)
            final = states[-1]
            kj = wootters_concurrence(partial_trace(final, (1, 2)))
            worst = max(worst, abs(kj - c_kj_steady(n)))
            assert abs(kj - c_kj_steady(n)) < 1e-5, f"C_kj n={n}: {kj}"
            if n >= 3:  # a ground/ground pair needs two unexcited qubits
                jm = wootters_concurrence(partial_trace(final, (2, 3)))
                worst = max(worst, abs(jm - c_jm_steady(n)))
                assert abs(jm - c_jm_steady(n)) < 1e-5, f"C_jm n={n}: {jm}"
        v.detail = f"n=2..6, worst deviation {worst:.1e}"


def test_criterion_03_tables_and_oracle():
    with Verdict(3, "generator tables, closure and oracle") as v:
        system1, _, (rows1, _) = table_diffs("table1")
        assert system1.size == 4
        assert rows1.empty, f"Table 1 diff: {rows1.as_dict()}"
        assert system1.closure_residual() == 0

        system2, _, diffs2 = table_diffs("table2")
        assert system2.size == 10
        report = [d.as_dict() for d in diffs2]
        assert all("mismatches" in d for d in report)
        assert system2.closure_residual() == 0

        spec = DissipatorSpec(4, 1.0)
        rho0 = system2.reconstruct(system2.initial_vector())
        times = (0.1, 0.5, 1.0)
        recon = system2.reconstruct(evolve_subspace(system2, 1.0, times).values)
        oracle = [evolve_expm(spec, rho0, t) for t in times]
        keep("c3 subspace", times, recon)
        keep("c3 expm", times, oracle)
        dev = max(np.max(np.abs(a - b)) for a, b in zip(recon, oracle))
        assert dev < 1e-10, f"oracle deviation {dev:.2e}"
        mism = min(d["mismatches"] for d in report)
        v.detail = (f"Table 1 zero diff; Table 2 closes (10 elements), {mism} cells differ in the best "
                    f"orientation; oracle deviation {dev:.1e}")


def test_criterion_04_four_qubit_coefficients():
    with Verdict(4, "four-qubit coefficients") as v:
        times = (0.1, 0.5, 1.0, 2.0)
        system = four_qubit_system()
        exact = evolve_subspace(system, 1.0, times).values
        keep("c4 subspace", times, system.reconstruct(exact))
        printed = np.array([reference.four_qubit_coefficients(t) for t in times])
        dev = np.max(np.abs(printed - exact), axis=0)
        divergent = {f"d{i}" for i in range(10) if dev[i] > 1e-9}
        report = four_qubit_coefficients_report(times)
        if divergent:
            assert set(report["divergent"]) == divergent, (report["divergent"], divergent)
            branch = f"report localizes divergent {sorted(divergent)} (max {dev.max():.1e})"
        else:
            branch = "all ten match to 1e-9"
        # oracle equivalence from criterion 3 must hold here as well
        spec = DissipatorSpec(4, 1.0)
        rho0 = system.reconstruct(system.initial_vector())
        for t, a in zip(times, exact):
            assert np.max(np.abs(system.reconstruct(a) - evolve_expm(spec, rho0, t))) < 1e-10
        v.detail = branch + "; oracle equivalence holds"


def test_criterion_05_conservation():
    with Verdict(5, "conservation suite") as v:
        if not EVOLVED:
            pytest.fail("criteria 1-4 produced no states")
        count = 0
        worst = {"trace": 0.0, "hermiticity": 0.0, "min_eigenvalue": 0.0}
        for label, times, states in EVOLVED:
            for t, rho in zip(times, states):
                d = density_diagnostics(rho)
                assert d["trace"] < 1e-9, (label, t, d)
                assert d["hermiticity"] < 1e-10, (label, t, d)
                assert d["min_eigenvalue"] >= -1e-8, (label, t, d)
                worst["trace"] = max(worst["trace"], d["trace"])
                worst["hermiticity"] = max(worst["hermiticity"], d["hermiticity"])
                worst["min_eigenvalue"] = min(worst["min_eigenvalue"], d["min_eigenvalue"])
                count += 1
        v.detail = (f"{count} samples; max |tr-1| {worst['trace']:.1e}, hermiticity {worst['hermiticity']:.1e}, "
                    f"min eigenvalue {worst['min_eigenvalue']:.1e}")


def test_criterion_06_thermal_rates():
    with Verdict(6, "thermal rates and Table 4") as v:
        start = time.perf_counter()
        assert thermal.decoherence_rate(0.01, 3) == pytest.approx(0.07, abs=1e-15)
        assert thermal.dd_effective_rate(0.7, 1e7, 1e-5) == pytest.approx(0.007, abs=1e-15)
        rows = thermal.lifetime_table()
        cells = 0
        for row, printed in zip(rows, reference.TABLE4):
            got = row.rounded()
            for a, b in zip(printed[1:], got[1:]):
                assert a == pytest.approx(b, abs=1e-12), (printed, got)
                cells += 1
        elapsed = time.perf_counter() - start
        assert cells == 20
        assert elapsed < 0.1
        v.detail = f"{cells}/20 cells match at printed rounding in {elapsed * 1e3:.1f} ms"


def test_criterion_07_thermal_closed_form_report():
    with Verdict(7, "thermal closed-form cross-check") as v:
        first = thermal_closed_form_report()
        second = thermal_closed_form_report()
        assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)
        keys = {(e["n"], e["nbar"]) for e in first["entries"]}
        assert {0.45, 3.0} <= {nb for _, nb in keys}
        zero = [e for e in first["entries"] if e["nbar"] == 0]
        assert zero
        for e in zero:
            assert e["max_dev_f_closed_vs_rate_equations"] < 1e-8, e
            assert e["max_dev_c_closed_vs_rate_equations"] < 1e-8, e
        for e in first["entries"]:
            for key in ("max_dev_f_closed_vs_rate_equations", "max_dev_c_closed_vs_rate_equations",
                        "max_dev_c_closed_vs_pipeline"):
                assert math.isfinite(e[key])
        hot = max(e["max_dev_c_closed_vs_pipeline"] for e in first["entries"] if e["nbar"] > 0)
        v.detail = (f"nbar=0 agrees to <1e-8 for n={sorted({e['n'] for e in zero})}; deterministic report over "
                    f"{len(keys)} (n, nbar) pairs; largest nbar>0 closed-form vs pipeline gap {hot:.2f}")


def _random_state(rng):
    rank = int(rng.integers(1, 5))
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def _random_unitary(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_criterion_08_wootters_properties():
    with Verdict(8, "Wootters properties") as v:
        rng = np.random.default_rng(20240808)
        worst = 0.0
        for _ in range(1000):
            rho = _random_state(rng)
            c = wootters_concurrence(rho)
            assert 0.0 <= c <= 1.0
            u = np.kron(_random_unitary(rng), _random_unitary(rng))
            worst = max(worst, abs(wootters_concurrence(u @ rho @ u.conj().T) - c))
        assert worst < 1e-9, f"local-unitary deviation {worst:.2e}"
        s = 2**-0.5
        bells = [{"00": s, "11": s}, {"00": s, "11": -s}, {"01": s, "10": s}, {"01": s, "10": -s}]
        for amps in bells:
            assert abs(wootters_concurrence(pure_state_density(amps)) - 1) < 1e-10
        for _ in range(200):
            a = _random_state(rng)
            a, b = partial_trace(a, (1,)), partial_trace(_random_state(rng), (2,))
            assert wootters_concurrence(np.kron(a, b)) == 0.0
        v.detail = f"1000 random states in [0,1]; local-unitary deviation {worst:.1e}; Bell states 1; products exactly 0"


def test_criterion_09_qec_dfs():
    with Verdict(9, "QEC and DFS arithmetic") as v:
        rec = thermal.qec_frequency_recommendation
        assert (rec(0.7).frequency, rec(0.007).frequency) == (1e4, 1e2)
        assert (rec(0.19).frequency, rec(0.0019).frequency) == (1e3, 1e2)
        assert thermal.dfs_feasibility(0.7, 0.02) == (False, 50.0)
        feasible, t_dfs = thermal.dfs_feasibility(0.007, 0.02)
        assert feasible and t_dfs == pytest.approx(50.0)
        v.detail = "1e4 -> 1e2 and 1e3 -> 1e2; DFS infeasible at 0.7, feasible at 0.007, t_DFS = 50 s"


def _read_rows(path):
    lines = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
    return lines[0].split(","), np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]])


def test_criterion_10_figure_determinism(tmp_path):
    with Verdict(10, "figure determinism and ordering") as v:
        for k in range(1, 10):
            first, second = tmp_path / f"a_fig{k}.csv", tmp_path / f"b_fig{k}.csv"
            assert cli.main(["figure", f"fig{k}", "--output", str(first)]) == 0
            assert cli.main(["figure", f"fig{k}", "--output", str(second)]) == 0
            assert first.read_bytes() == second.read_bytes(), f"fig{k} differs between runs"
        _, rows = _read_rows(tmp_path / "a_fig9.csv")
        maxima = rows[:, 1:].max(axis=0)
        assert maxima[0] > maxima[1] > maxima[2] > maxima[3], maxima
        v.detail = "fig1..fig9 byte-identical; fig9 maxima " + " > ".join(f"{m:.6f}" for m in maxima)
