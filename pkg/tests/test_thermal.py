import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import constants

from collective_entanglement import reference, thermal
from collective_entanglement.library import closed_form_library


def test_nbar_ln2_gives_one():
    omega = 1e10
    temp = constants.hbar * omega / (constants.k * math.log(2))
    assert thermal.nbar_from_temperature(omega, temp) == pytest.approx(1.0, rel=1e-12)


def test_nbar_zero_temperature():
    assert thermal.nbar_from_temperature(1e9, 0.0) == 0.0
    assert thermal.nbar_from_temperature(1e9, 1e-9) == 0.0


def test_crossover_anchor():
    assert thermal.crossover_temperature(2 * math.pi * 5e9) == pytest.approx(0.24, abs=0.005)
    assert thermal.crossover_temperature(5e9, "ordinary") == pytest.approx(0.24, abs=0.005)
    assert thermal.crossover_temperature(5e9, "angular") == pytest.approx(0.24 / (2 * math.pi), abs=1e-3)
    with pytest.raises(ValueError):
        thermal.crossover_temperature(1.0, "other")


@given(st.floats(1e8, 1e11), st.floats(0.001, 10), st.floats(1.01, 5))
def test_nbar_monotone_in_temperature(omega, temp, factor):
    assert thermal.nbar_from_temperature(omega, temp * factor) >= thermal.nbar_from_temperature(omega, temp)


def test_decoherence_rate_examples():
    assert thermal.decoherence_rate(0.01, 3) == pytest.approx(0.07)
    assert thermal.decoherence_rate(0.1, 3) == pytest.approx(0.7)
    assert thermal.decoherence_rate(0.3, 0) == 0.3


@given(st.floats(0.01, 5), st.floats(0, 10), st.floats(0, 10))
def test_decoherence_rate_affine(gamma, a, b):
    slope = (thermal.decoherence_rate(gamma, b) - thermal.decoherence_rate(gamma, a))
    assert slope == pytest.approx(2 * gamma * (b - a), abs=1e-12)


def test_dd_examples():
    assert thermal.dd_effective_rate(0.7, 1e7, 1e-5) == pytest.approx(0.007)
    assert thermal.dd_effective_rate(0.19, 1e7, 1e-5) == pytest.approx(0.0019)
    with pytest.warns(thermal.NonSuppressiveDD):
        assert thermal.dd_effective_rate(0.7, 1e5, 1e-5) == pytest.approx(0.7)


@given(st.floats(2, 1e8), st.floats(1e-5, 1), st.floats(1.01, 10))
def test_dd_rate_decreasing(f, tau, factor):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", thermal.NonSuppressiveDD)
        base = thermal.dd_effective_rate(0.5, f, tau)
        assert thermal.dd_effective_rate(0.5, f * factor, tau) < base
        assert thermal.dd_effective_rate(0.5, f, tau * factor) < base


def test_dd_concurrence_lifetime():
    rate = 0.0053
    assert thermal.dd_concurrence(rate, 1 / rate) == pytest.approx(math.exp(-1), rel=1e-15)


def test_qec_examples():
    assert thermal.qec_frequency_recommendation(0.7).frequency == 1e4
    assert thermal.qec_frequency_recommendation(0.007).frequency == 1e2
    assert thermal.qec_frequency_recommendation(0.19).frequency == 1e3
    assert thermal.qec_frequency_recommendation(0.0019).frequency == 1e2
    rec = thermal.qec_frequency_recommendation(0.7)
    assert rec.raw == pytest.approx(1400)
    assert rec.gates_per_second == (5e5, 1e6)


@given(st.floats(0.05, 100))
def test_qec_decade_homogeneity(rate):
    base = thermal.qec_frequency_recommendation(rate).frequency
    assert thermal.qec_frequency_recommendation(10 * rate).frequency == pytest.approx(10 * base)


def test_dfs_examples():
    assert thermal.dfs_feasibility(0.7, 0.02) == (False, 50.0)
    assert thermal.dfs_feasibility(0.007, 0.02) == (True, 50.0)
    assert thermal.dfs_feasibility(0.0019, 0.02)[0]
    assert not thermal.dfs_feasibility(0.02, 0.02)[0]


def test_mitigation_plan():
    plan = thermal.MitigationPlan(pulse_frequency=1e7, correlation_time=1e-5, dfs_rate=0.02)
    assert plan.dd_valid(0.1, 3)
    assert not thermal.MitigationPlan(pulse_frequency=10).dd_valid(0.1, 3)
    with pytest.raises(ValueError):
        thermal.MitigationPlan(pulse_frequency=-1)
    report = thermal.rate_report(0.1, 3, plan)
    assert report.dfs_feasible and report.t_dfs == 50
    assert report.gamma_eff * report.lifetime_dd == pytest.approx(1)


def test_lifetime_table_reproduces_printed():
    rows = thermal.lifetime_table()
    assert len(rows) == 5
    for row, printed in zip(rows, reference.TABLE4):
        assert row.rounded() == pytest.approx(printed, abs=1e-12)
        assert row.gamma_d * row.lifetime_no_dd == pytest.approx(1, abs=1e-15)
        assert row.gamma_eff * row.lifetime_dd == pytest.approx(1, abs=1e-15)


def test_rate_equation_examples():
    rhs = thermal.thermal_rate_equations(2, 1.0, 0.0)
    np.testing.assert_allclose(rhs(0, np.array([0, 1, 0, 0.0])), [2, -2, 0, -1])
    rhs = thermal.thermal_rate_equations(3, 1.0, 1.0)
    np.testing.assert_allclose(rhs(0, np.array([1, 0, 0, 0.0])), [-4, 4, 4, 0])


@pytest.mark.parametrize("n", [2, 3, 5])
def test_rate_equations_zero_temperature_match_subspace(n):
    times = np.array([0.1, 0.5, 1, 5])
    a = thermal.integrate_rate_equations(n, 1.0, 0.0, times)
    for t, row in zip(times, a):
        w = closed_form_library("n_qubit_one_exc", 1.0, t, n=n)
        np.testing.assert_allclose(row, w, atol=1e-8)


def test_closed_form_zero_temperature_reduction():
    from collective_entanglement.entanglement import c_kj

    f, c = thermal.thermal_closed_form(4, 1.0, 0.0, 0.3)
    assert f == pytest.approx((1 - math.exp(-1.2)) / 4)
    assert c == pytest.approx(c_kj(4, 1.0, 0.3))


def test_closed_form_decay_claim():
    assert thermal.thermal_closed_form(4, 0.01, 3.0, 50.0)[1] < 0.05


def test_steady_root():
    assert thermal.critical_nbar(3) == 2.0
    assert thermal.steady_concurrence(3, 2.0) == pytest.approx(0.0, abs=1e-15)
