"""Named reduced systems, closed-form coefficient solutions and table diffs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import reference
from .subspace import SubspaceSystem, evolve_subspace, excited_projector, generate_subspace

CASES = ("two_qubit_one_exc", "n_qubit_one_exc", "four_qubit_two_exc", "three_qubit_two_exc")

# cases whose coefficients come from regeneration rather than a printed formula
DERIVED_CASES = frozenset({"three_qubit_two_exc"})


def two_qubit_system() -> SubspaceSystem:
    system = generate_subspace(2, excited_projector(2, [1]))
    ref = reference.two_qubit_basis()
    return system.reordered(system.permutation_to(ref), reference.TABLE1_LABELS)


def one_excitation_system(n: int, excited: int = 1) -> SubspaceSystem:
    system = generate_subspace(n, excited_projector(n, [excited]))
    ref = reference.one_excitation_basis(n, excited)
    return system.reordered(system.permutation_to(ref), reference.ONE_EXCITATION_LABELS)


def four_qubit_system() -> SubspaceSystem:
    system = generate_subspace(4, excited_projector(4, [1, 2]))
    ref = reference.four_qubit_basis()
    return system.reordered(system.permutation_to(ref), reference.TABLE2_LABELS)


def three_qubit_system() -> SubspaceSystem:
    system = generate_subspace(3, excited_projector(3, [1, 2]))
    ref = reference.three_qubit_basis()
    return system.reordered(system.permutation_to(ref), reference.THREE_QUBIT_LABELS)


def system_for(case: str, n: int | None = None) -> SubspaceSystem:
    if case == "two_qubit_one_exc":
        return two_qubit_system()
    if case == "n_qubit_one_exc":
        if n is None or n < 2:
            raise ValueError("n_qubit_one_exc needs n >= 2")
        return one_excitation_system(n)
    if case == "four_qubit_two_exc":
        return four_qubit_system()
    if case == "three_qubit_two_exc":
        return three_qubit_system()
    raise ValueError(f"unknown case {case!r}; choose from {CASES}")


def one_excitation_weights(n, gamma, t):
    """``(f(2 - n f), (1 - f)^2, f^2, -f(1 - f))`` with ``f = (1 - e^{-n gamma t}) / n``."""
    f = (1 - math.exp(-n * gamma * t)) / n
    return np.array([f * (2 - n * f), (1 - f) ** 2, f**2, -f * (1 - f)])


def closed_form_library(case: str, gamma: float, t: float, n: int | None = None) -> np.ndarray:
    """Analytic coefficient vector in the order of the matching reference basis.

    ``three_qubit_two_exc`` has no printed solution and is evaluated from the
    regenerated subspace (see :data:`DERIVED_CASES`).
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if case == "two_qubit_one_exc":
        return reference.two_qubit_coefficients(gamma * t)
    if case == "n_qubit_one_exc":
        if n is None or n < 2:
            raise ValueError("n_qubit_one_exc needs n >= 2")
        return one_excitation_weights(n, gamma, t)
    if case == "four_qubit_two_exc":
        return reference.four_qubit_coefficients(gamma * t)
    if case == "three_qubit_two_exc":
        return evolve_subspace(three_qubit_system(), gamma, [t]).values[0]
    raise ValueError(f"unknown case {case!r}; choose from {CASES}")


# -- table rendering and diffs ------------------------------------------------------


def _cell(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def render_table(labels: Sequence[str], matrix, fmt=_cell) -> str:
    """Aligned text table with row and column labels."""
    cells = [[fmt(x) for x in row] for row in matrix]
    widths = [max(len(labels[j]), *(len(r[j]) for r in cells)) for j in range(len(labels))]
    stub = max(len(s) for s in labels)
    lines = [" " * stub + "  " + "  ".join(lab.rjust(w) for lab, w in zip(labels, widths))]
    for lab, row in zip(labels, cells):
        lines.append(lab.ljust(stub) + "  " + "  ".join(c.rjust(w) for c, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def table_csv_rows(labels: Sequence[str], matrix, fmt=_cell):
    yield ["", *labels]
    for lab, row in zip(labels, matrix):
        yield [lab, *(fmt(x) for x in row)]


@dataclass(frozen=True)
class CellDiff:
    row: str
    column: str
    printed: Fraction
    regenerated: Fraction


@dataclass(frozen=True)
class TableDiff:
    """Cell-level comparison of a printed table with a regenerated matrix.

    ``orientation`` is ``"rows"`` when the printed row ``i`` is compared with
    the dissipator image of ``basis[i]`` and ``"transposed"`` when it is
    compared with the coefficient equation of ``a_i``.
    """

    orientation: str
    labels: tuple[str, ...]
    cells: tuple[CellDiff, ...] = field(default=())

    @property
    def empty(self) -> bool:
        return not self.cells

    def as_dict(self):
        return {
            "orientation": self.orientation,
            "mismatches": len(self.cells),
            "cells": [
                {"row": c.row, "column": c.column, "printed": _cell(c.printed), "regenerated": _cell(c.regenerated)}
                for c in self.cells
            ],
        }


def diff_table(printed, regenerated, labels: Sequence[str], orientation: str) -> TableDiff:
    printed = [[Fraction(x) for x in row] for row in printed]
    regen = [[Fraction(x) for x in row] for row in regenerated]
    if orientation == "transposed":
        regen = [list(col) for col in zip(*regen)]
    elif orientation != "rows":
        raise ValueError(f"orientation must be 'rows' or 'transposed', got {orientation!r}")
    if len(printed) != len(regen):
        raise ValueError("table sizes differ")
    cells = tuple(
        CellDiff(labels[i], labels[j], printed[i][j], regen[i][j])
        for i in range(len(labels))
        for j in range(len(labels))
        if printed[i][j] != regen[i][j]
    )
    return TableDiff(orientation, tuple(labels), cells)


def table_diffs(table_id: str):
    """``(system, printed table, [TableDiff, ...])`` for ``table1`` or ``table2``."""
    if table_id == "table1":
        system, printed = two_qubit_system(), reference.TABLE1
    elif table_id == "table2":
        system, printed = four_qubit_system(), reference.TABLE2
    else:
        raise ValueError(f"no generator table {table_id!r}")
    labels = [e.label for e in system.basis]
    diffs = [diff_table(printed, system.generator, labels, o) for o in ("rows", "transposed")]
    return system, printed, diffs


# -- printed four-qubit coefficients vs exact solution -------------------------------


@dataclass(frozen=True)
class CoefficientDeviation:
    index: int
    label: str
    max_deviation: float
    worst_t: float


def coefficient_deviations(times=(0.1, 0.5, 1.0, 2.0), gamma=1.0, tol=1e-9):
    """Per-coefficient max |printed d_i - exact d_i| over ``times``.

    Returns ``(all, divergent)`` where ``divergent`` holds the entries above
    ``tol``.
    """
    system = four_qubit_system()
    exact = evolve_subspace(system, gamma, times).values
    printed = np.array([reference.four_qubit_coefficients(gamma * t) for t in times])
    dev = np.abs(printed - exact)
    out = []
    for i, e in enumerate(system.basis):
        k = int(np.argmax(dev[:, i]))
        out.append(CoefficientDeviation(i, e.label, float(dev[k, i]), float(times[k])))
    return out, [d for d in out if d.max_deviation > tol]
