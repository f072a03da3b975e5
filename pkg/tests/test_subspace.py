import math
from fractions import Fraction

import numpy as np
import pytest

from collective_entanglement import reference
from collective_entanglement.hilbert import BasisKet
from collective_entanglement.library import (
    closed_form_library,
    coefficient_deviations,
    four_qubit_system,
    one_excitation_system,
    render_table,
    table_diffs,
    three_qubit_system,
    two_qubit_system,
)
from collective_entanglement.master_equation import DissipatorSpec, evolve_expm
from collective_entanglement.subspace import (
    KetBraTerm,
    OperatorBasisElement,
    coefficient_odes,
    evolve_subspace,
    exact_dissipator,
    excited_projector,
    generate_subspace,
    solve_coefficients,
)

TIMES = (0.1, 0.5, 1.0, 5.0)


def test_canonical_form():
    e = OperatorBasisElement.from_mapping(2, {(2, 1): Fraction(-4), (1, 2): Fraction(-4)})
    assert e.weights == (((1, 2), 1), ((2, 1), 1))
    assert OperatorBasisElement.from_mapping(2, {(1, 1): Fraction(1, 3)}).weights == (((1, 1), 1),)


def test_ket_bra_term_rejects_mismatched_n():
    with pytest.raises(ValueError):
        KetBraTerm(BasisKet((1, 0)), BasisKet((1, 0, 0)), Fraction(1))


def test_two_qubit_basis_and_table1():
    system = generate_subspace(2, excited_projector(2, [1]))
    assert system.size == 4
    assert system.initial_index == 0
    assert {e.weights for e in system.basis} == {e.weights for e in reference.two_qubit_basis()}
    ordered = two_qubit_system()
    assert [[int(x) for x in row] for row in ordered.generator] == [list(r) for r in reference.TABLE1]
    assert ordered.closure_residual() == 0


def test_ground_state_closes_to_one_element():
    system = generate_subspace(2, excited_projector(2, []))
    assert system.size == 1
    assert system.generator == ((0,),)


def test_four_qubit_basis():
    system = generate_subspace(4, excited_projector(4, [1, 2]))
    assert system.size == 10
    assert system.closure_residual() == 0
    assert {e.weights for e in system.basis} == {e.weights for e in reference.four_qubit_basis()}


def test_three_qubit_two_excitation_basis():
    system = three_qubit_system()
    assert system.size == 7
    assert system.closure_residual() == 0


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_one_excitation_dimension(n):
    system = one_excitation_system(n)
    assert system.size == 4
    assert system.closure_residual() == 0


def test_exact_dissipator_matches_dense():
    e = reference.four_qubit_basis()[7]
    image = exact_dissipator(e.as_dict(), 4)
    dense = np.zeros((16, 16))
    for (k, b), w in image.items():
        dense[k, b] = float(w)
    from collective_entanglement.master_equation import apply_dissipator

    np.testing.assert_allclose(dense, apply_dissipator(DissipatorSpec(4, 1.0), e.to_dense()).real, atol=1e-12)


def test_two_qubit_ode_matrix():
    a = coefficient_odes(two_qubit_system(), 1.0)
    # the -2 on a3 follows from the generator (the a3 self-decay)
    np.testing.assert_array_equal(a, [[0, 2, 2, 4], [0, -2, 0, -2], [0, 0, -2, -2], [0, -1, -1, -2]])


@pytest.mark.parametrize("n", [3, 4, 6])
def test_n_qubit_ode_matrix(n):
    a = coefficient_odes(one_excitation_system(n), 1.0)
    m = n - 1
    np.testing.assert_array_equal(a[0], [0, 2, 2 * m**2, 4 * m])
    np.testing.assert_array_equal(a[3], [0, -1, -m, -n])


def test_gamma_scaling():
    system = two_qubit_system()
    np.testing.assert_array_equal(coefficient_odes(system, 2.0), 2 * coefficient_odes(system, 1.0))


@pytest.mark.parametrize("system_factory", [two_qubit_system, four_qubit_system, three_qubit_system,
                                            lambda: one_excitation_system(5)])
def test_trace_conservation(system_factory):
    system = system_factory()
    traces = np.array([e.trace for e in system.basis], dtype=float)
    a = coefficient_odes(system, 1.0)
    np.testing.assert_allclose(traces @ a, 0, atol=1e-14)


def test_solve_coefficients_zero_time():
    system = four_qubit_system()
    traj = solve_coefficients(coefficient_odes(system, 1.0), system.initial_vector(), [0.0])
    np.testing.assert_array_equal(traj.values[0], system.initial_vector())


@pytest.mark.parametrize("t", TIMES)
def test_two_qubit_closed_form(t):
    values = evolve_subspace(two_qubit_system(), 1.0, [t]).values[0]
    np.testing.assert_allclose(values, closed_form_library("two_qubit_one_exc", 1.0, t), atol=1e-10)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("t", TIMES)
def test_n_qubit_closed_form(n, t):
    gamma = 0.7
    values = evolve_subspace(one_excitation_system(n), gamma, [t / gamma]).values[0]
    np.testing.assert_allclose(values, closed_form_library("n_qubit_one_exc", gamma, t / gamma, n=n), atol=1e-10)


def test_n_qubit_steady_limit_matches_two_qubit():
    w = closed_form_library("n_qubit_one_exc", 1.0, 60.0, n=2)
    np.testing.assert_allclose(w, [0.5, 0.25, 0.25, -0.25], atol=1e-12)


def test_four_qubit_closed_form_initial():
    d = closed_form_library("four_qubit_two_exc", 1.0, 0.0)
    np.testing.assert_allclose(d, np.eye(10)[4], atol=1e-15)


@pytest.mark.parametrize("case,n", [("two_qubit_one_exc", None), ("n_qubit_one_exc", 4),
                                    ("four_qubit_two_exc", None), ("three_qubit_two_exc", None)])
def test_closed_form_reconstructs_initial_state(case, n):
    from collective_entanglement.library import system_for

    system = system_for(case, n)
    rho = system.reconstruct(closed_form_library(case, 1.0, 0.0, n=n))
    np.testing.assert_allclose(rho, system.reconstruct(system.initial_vector()), atol=1e-15)


def test_printed_four_qubit_coefficients_except_d5():
    system = four_qubit_system()
    times = (0.1, 0.5, 1.0, 2.0)
    exact = evolve_subspace(system, 1.0, times).values
    for t, row in zip(times, exact):
        printed = reference.four_qubit_coefficients(t)
        ok = [i for i in range(10) if i != 5]
        np.testing.assert_allclose(printed[ok], row[ok], atol=1e-9)
        d5 = (1 - 2 * math.exp(-6 * t) + math.exp(-12 * t)) / 36
        assert abs(row[5] - d5) < 1e-12
    _, divergent = coefficient_deviations(times)
    assert [d.index for d in divergent] == [5]


@pytest.mark.parametrize("factory,n", [(two_qubit_system, 2), (three_qubit_system, 3), (four_qubit_system, 4),
                                       (lambda: one_excitation_system(4, 3), 4)])
def test_reconstruction_matches_expm_oracle(factory, n):
    system = factory()
    spec = DissipatorSpec(n, 1.3)
    rho0 = system.reconstruct(system.initial_vector())
    for t in (0.1, 0.5, 1.0, 3.0):
        rho = system.reconstruct(evolve_subspace(system, spec.gamma, [t]).values[0])
        assert np.max(np.abs(rho - evolve_expm(spec, rho0, t))) < 1e-10


def test_table1_diff_empty_and_table2_diff_localized():
    _, _, (rows, transposed) = table_diffs("table1")
    assert rows.empty
    _, _, (rows2, transposed2) = table_diffs("table2")
    cells = {(c.row, c.column) for c in transposed2.cells}
    assert len(cells) == 6
    assert all("|0><0|" in pair for pair in cells)


def test_render_table_layout():
    text = render_table(reference.TABLE1_LABELS, reference.TABLE1)
    lines = text.splitlines()
    assert len(lines) == 5
    assert lines[2].split()[-4:] == ["2", "-2", "0", "-1"]


def test_generation_limit_rejects_bad_n():
    with pytest.raises(ValueError):
        generate_subspace(11, {(0, 0): 1})
