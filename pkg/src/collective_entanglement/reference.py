"""Transcribed reference values: hand-grouped bases, generator tables, Table 4.

Everything here is data copied from the published tables and formulas, kept
apart from the code that regenerates the same objects from first principles
so the two can be diffed.
"""

from __future__ import annotations

import math

import numpy as np

from .hilbert import BasisKet
from .subspace import OperatorBasisElement

TABLE1_LABELS = ("|00><00|", "|10><10|", "|01><01|", "(|01><10|+|10><01|)")

# rows: D(basis_i); columns: coefficient of basis_j
TABLE1 = (
    (0, 0, 0, 0),
    (2, -2, 0, -1),
    (2, 0, -2, -1),
    (4, -2, -2, -2),
)

TABLE2_LABELS = (
    "|0><0|", "|~12><~12|", "|1+2><1+2|", "M", "|1,2><1,2|",
    "|N><N|", "|P><P|", "Q", "R", "S",
)

TABLE2 = (
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (8, -4, 0, -4, 0, 8, 2, 0, 0, 8),
    (8, 0, -4, -4, 2, 8, 0, 8, 0, 0),
    (16, -2, -2, -4, 0, 8, 0, 4, 2, 4),
    (0, 0, 0, 0, -4, 0, 0, -8, 0, 0),
    (0, 0, 0, 0, 0, -8, 0, -2, 0, -2),
    (0, 0, 0, 0, 0, 0, -4, 0, 0, -8),
    (0, 0, 0, 0, -1, -4, 0, -6, -1, 0),
    (0, 0, 0, 0, 0, 0, 0, -4, -4, -4),
    (0, 0, 0, 0, 0, -4, -1, 0, -1, -6),
)

# (nbar, Gamma_d, Gamma_eff, lifetime without DD, lifetime with DD)
TABLE4 = (
    (0.05, 0.11, 0.0011, 9.1, 909.1),
    (0.40, 0.18, 0.0018, 5.6, 555.6),
    (0.45, 0.19, 0.0019, 5.3, 526.3),
    (2.16, 0.53, 0.0053, 1.9, 188.7),
    (3.00, 0.70, 0.0070, 1.4, 142.9),
)
TABLE4_GAMMA = 0.1
TABLE4_PULSE_FREQUENCY = 1e7
TABLE4_CORRELATION_TIME = 1e-5

# critical nbar marked in the three steady-state panels of the DD figure
FIGURE8_MARKED_NBAR = (0.05, 0.40, 2.16)


def _single(n, qubit):
    return BasisKet.excited(n, [qubit])


def two_qubit_basis():
    g, k, e = BasisKet((0, 0)), BasisKet((1, 0)), BasisKet((0, 1))
    elems = [
        OperatorBasisElement.from_kets(g),
        OperatorBasisElement.from_kets(k),
        OperatorBasisElement.from_kets(e),
        OperatorBasisElement.from_kets(e, k, symmetric=True),
    ]
    return [OperatorBasisElement(x.n, x.weights, lab) for x, lab in zip(elems, TABLE1_LABELS)]


ONE_EXCITATION_LABELS = ("|G><G|", "|K><K|", "|E><E|", "(|E><K|+|K><E|)")


def one_excitation_basis(n, excited=1):
    """``{|G><G|, |K><K|, |E><E|, |E><K| + |K><E|}`` with ``|E> = sum_{j != K} |j>``."""
    g = BasisKet((0,) * n)
    k = _single(n, excited)
    others = [_single(n, j) for j in range(1, n + 1) if j != excited]
    elems = [
        OperatorBasisElement.from_kets(g),
        OperatorBasisElement.from_kets(k),
        OperatorBasisElement.from_kets(others),
        OperatorBasisElement.from_kets(others, k, symmetric=True),
    ]
    return [OperatorBasisElement(x.n, x.weights, lab) for x, lab in zip(elems, ONE_EXCITATION_LABELS)]


def four_qubit_basis():
    """Hand-grouped two-excitation basis, with ``|~12> = |3> + |4>``."""
    n = 4
    zero = BasisKet((0,) * n)
    one_two = [_single(n, 1), _single(n, 2)]
    not_one_two = [_single(n, 3), _single(n, 4)]
    pair12 = BasisKet.excited(n, [1, 2])
    big_n = [BasisKet.excited(n, q) for q in ([3, 1], [4, 1], [3, 2], [4, 2])]
    big_p = BasisKet.excited(n, [3, 4])
    elems = [
        OperatorBasisElement.from_kets(zero),
        OperatorBasisElement.from_kets(not_one_two),
        OperatorBasisElement.from_kets(one_two),
        OperatorBasisElement.from_kets(not_one_two, one_two, symmetric=True),
        OperatorBasisElement.from_kets(pair12),
        OperatorBasisElement.from_kets(big_n),
        OperatorBasisElement.from_kets(big_p),
        OperatorBasisElement.from_kets(big_n, pair12, symmetric=True),
        OperatorBasisElement.from_kets(big_p, pair12, symmetric=True),
        OperatorBasisElement.from_kets(big_n, big_p, symmetric=True),
    ]
    return [OperatorBasisElement(x.n, x.weights, lab) for x, lab in zip(elems, TABLE2_LABELS)]


THREE_QUBIT_LABELS = ("|0><0|", "|~12><~12|", "|1+2><1+2|", "M", "|1,2><1,2|", "|N><N|", "Q")
# slot of each three-qubit element in the four-qubit numbering d0..d9
THREE_QUBIT_SLOTS = (0, 1, 2, 3, 4, 5, 7)


def three_qubit_basis():
    """Three-qubit analogue of the two-excitation basis.

    ``|~12> = |3>`` and ``|N> = |3,1> + |3,2>``; no ``|P>`` exists, so the
    elements ``|P><P|``, ``R`` and ``S`` drop out.
    """
    n = 3
    zero = BasisKet((0,) * n)
    one_two = [_single(n, 1), _single(n, 2)]
    third = _single(n, 3)
    pair12 = BasisKet.excited(n, [1, 2])
    big_n = [BasisKet.excited(n, q) for q in ([3, 1], [3, 2])]
    elems = [
        OperatorBasisElement.from_kets(zero),
        OperatorBasisElement.from_kets(third),
        OperatorBasisElement.from_kets(one_two),
        OperatorBasisElement.from_kets(third, one_two, symmetric=True),
        OperatorBasisElement.from_kets(pair12),
        OperatorBasisElement.from_kets(big_n),
        OperatorBasisElement.from_kets(big_n, pair12, symmetric=True),
    ]
    return [OperatorBasisElement(x.n, x.weights, lab) for x, lab in zip(elems, THREE_QUBIT_LABELS)]


def two_qubit_coefficients(t):
    """Printed two-qubit solution ``(a0, a1, a2, a3)`` at ``gamma t = t``."""
    e2, e4 = math.exp(-2 * t), math.exp(-4 * t)
    return np.array([0.5 - 0.5 * e4, 0.25 + 0.25 * e4 + 0.5 * e2, 0.25 + 0.25 * e4 - 0.5 * e2, -0.25 + 0.25 * e4])


def four_qubit_coefficients(t):
    """Printed inverse-Laplace coefficients ``d0 .. d9`` at ``gamma t = t``."""
    e = {k: math.exp(-k * t) for k in (2, 4, 6, 8, 12)}
    return np.array([
        (2 * e[12] - 3 * e[8] + 1) / 6,
        (3 * e[8] - 3 * e[4] - e[12] + 1) / 8,
        (e[4] - e[8] - e[12] + 1) / 8,
        (e[4] + e[8] - e[12] - 1) / 8,
        (12 * e[2] + 9 * e[4] + 4 * e[6] + 6 * e[8] + e[12] + 4) / 36,
        (e[12] - 2 * e[4] + 1) / 36,
        (9 * e[4] - 12 * e[2] + 4 * e[6] - 6 * e[8] + e[12] + 4) / 36,
        (e[6] - 3 * e[2] + 3 * e[8] + e[12] - 2) / 36,
        (4 * e[6] - 9 * e[4] + e[12] + 4) / 36,
        (3 * e[2] + e[6] - 3 * e[8] + e[12] - 2) / 36,
    ])
