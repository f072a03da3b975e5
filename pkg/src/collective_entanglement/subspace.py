"""Incoherent free subspace: exact generation, generator matrices and solutions.

Operators are handled as sparse maps ``(ket index, bra index) -> weight``
with exact integer/rational weights. The collective dissipator (``gamma = 1``,
zero temperature) maps integer operators to integer operators, so the whole
closure computation runs in exact arithmetic.

Generation proceeds in two stages:

1. the span generated by repeated dissipator application to ``rho(0)`` is
   built by exact Gaussian elimination until no independent image appears;
2. support positions whose coordinates are proportional across that span are
   lumped together, and each lump is split into the connected components of
   its ket graph (kets joined by a ket-bra term). The resulting elements have
   disjoint supports and reproduce hand-grouped elements such as
   ``|01><10| + |10><01|`` or ``|N><1,2| + |1,2><N|``.

Splitting can enlarge the span (for two qubits ``|00><00|`` and the
coherence pair move in lockstep but are kept apart), so the closure is
recomputed from the split elements until the element count equals the span
dimension.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .expm import expm
from .hilbert import MAX_QUBITS, BasisKet

Position = tuple[int, int]


# -- exact sparse dissipator -------------------------------------------------


def _lower(idx: int, n: int) -> list[int]:
    return [idx ^ (1 << s) for s in range(n) if idx >> s & 1]


def _raise(idx: int, n: int) -> list[int]:
    return [idx | (1 << s) for s in range(n) if not idx >> s & 1]


def _number(idx: int, n: int) -> dict[int, int]:
    out: dict[int, int] = defaultdict(int)
    for low in _lower(idx, n):
        for up in _raise(low, n):
            out[up] += 1
    return out


def _clean(op: Mapping[Position, Fraction]) -> dict[Position, Fraction]:
    return {p: w for p, w in op.items() if w != 0}


def exact_dissipator(op: Mapping[Position, Fraction], n: int) -> dict[Position, Fraction]:
    """``2 s X s^dag - s^dag s X - X s^dag s`` for the collective lowering ``s``."""
    out: dict[Position, Fraction] = defaultdict(int)
    for (k, b), w in op.items():
        for k2 in _lower(k, n):
            for b2 in _lower(b, n):
                out[(k2, b2)] += 2 * w
        for k2, c in _number(k, n).items():
            out[(k2, b)] -= c * w
        for b2, c in _number(b, n).items():
            out[(k, b2)] -= c * w
    return _clean(out)


# -- basis element types -------------------------------------------------------


@dataclass(frozen=True)
class KetBraTerm:
    ket: BasisKet
    bra: BasisKet
    weight: Fraction

    def __post_init__(self):
        if self.ket.n != self.bra.n:
            raise ValueError("ket and bra act on different register sizes")
        object.__setattr__(self, "weight", Fraction(self.weight))

    def __str__(self):
        return f"{self.ket}<{''.join(map(str, self.bra.bits))}|"


def _canonical_weights(weights: Mapping[Position, Fraction]) -> dict[Position, int]:
    items = sorted((p, Fraction(w)) for p, w in weights.items() if w != 0)
    if not items:
        raise ValueError("a basis element needs at least one nonzero term")
    lcm = 1
    for _, w in items:
        lcm = lcm * w.denominator // math.gcd(lcm, w.denominator)
    ints = [(p, int(w * lcm)) for p, w in items]
    g = 0
    for _, w in ints:
        g = math.gcd(g, abs(w))
    sign = 1 if ints[0][1] > 0 else -1
    return {p: sign * w // g for p, w in ints}


@dataclass(frozen=True)
class OperatorBasisElement:
    """Integer-weighted sum of ket-bra terms in canonical form.

    Terms are sorted by (ket index, bra index), weights are coprime and the
    first weight is positive.
    """

    n: int
    weights: tuple[tuple[Position, int], ...]
    label: str = field(default="", compare=False)

    @classmethod
    def from_mapping(cls, n: int, weights: Mapping[Position, Fraction], label: str = ""):
        canon = _canonical_weights(weights)
        for k, b in canon:
            if not (0 <= k < 2**n and 0 <= b < 2**n):
                raise ValueError(f"term ({k}, {b}) outside a {n}-qubit register")
        return cls(n, tuple(sorted(canon.items())), label)

    @classmethod
    def from_kets(cls, ket, bra=None, symmetric=False, label=""):
        """Build ``|u><v|`` (plus its adjoint if ``symmetric``).

        ``ket``/``bra`` are basis kets or sequences of basis kets whose sum
        forms an unnormalized vector, e.g. ``|1+2> = |1000> + |0100>``.
        """
        kets = [ket] if isinstance(ket, BasisKet) else list(ket)
        bras = kets if bra is None else ([bra] if isinstance(bra, BasisKet) else list(bra))
        n = kets[0].n
        weights: dict[Position, int] = defaultdict(int)
        for u in kets:
            for v in bras:
                weights[(u.index, v.index)] += 1
                if symmetric:
                    weights[(v.index, u.index)] += 1
        return cls.from_mapping(n, weights, label)

    def as_dict(self) -> dict[Position, Fraction]:
        return {p: Fraction(w) for p, w in self.weights}

    @property
    def terms(self) -> tuple[KetBraTerm, ...]:
        return tuple(
            KetBraTerm(BasisKet.from_index(k, self.n), BasisKet.from_index(b, self.n), Fraction(w))
            for (k, b), w in self.weights
        )

    @property
    def trace(self) -> int:
        return sum(w for (k, b), w in self.weights if k == b)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((2**self.n, 2**self.n))
        for (k, b), w in self.weights:
            out[k, b] = w
        return out

    def describe(self) -> str:
        parts = []
        for term in self.terms:
            w = term.weight
            prefix = "" if w == 1 else ("-" if w == -1 else f"{w}*")
            parts.append(prefix + str(term))
        return "+".join(parts).replace("+-", "-")

    def __str__(self):
        return self.label or self.describe()


# -- exact linear algebra ----------------------------------------------------------


class _Echelon:
    """Reduced row-echelon form over the rationals for sparse vectors."""

    def __init__(self):
        self.rows: dict[Position, dict[Position, Fraction]] = {}

    def reduce(self, v: Mapping[Position, Fraction]) -> dict[Position, Fraction]:
        v = {p: Fraction(w) for p, w in v.items() if w != 0}
        for pivot in [p for p in v if p in self.rows]:
            c = v.get(pivot, 0)
            if c:
                for p, w in self.rows[pivot].items():
                    v[p] = v.get(p, 0) - c * w
        return _clean(v)

    def add(self, v: Mapping[Position, Fraction]) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        pivot = min(r)
        lead = r[pivot]
        r = {p: w / lead for p, w in r.items()}
        for row in self.rows.values():
            c = row.get(pivot, 0)
            if c:
                for p, w in r.items():
                    row[p] = row.get(p, 0) - c * w
                    if row[p] == 0:
                        del row[p]
        self.rows[pivot] = r
        return True

    def __len__(self):
        return len(self.rows)


class SubspaceClosureError(RuntimeError):
    pass


def _closed_span(seeds: Sequence[Mapping[Position, Fraction]], n: int, limit: int):
    ech = _Echelon()
    vectors = []
    queue = []
    for s in seeds:
        if ech.add(s):
            vectors.append(dict(s))
            queue.append(dict(s))
    while queue:
        image = exact_dissipator(queue.pop(0), n)
        if ech.add(image):
            vectors.append(image)
            queue.append(image)
            if len(vectors) > limit:
                raise SubspaceClosureError(f"span exceeded {limit} dimensions without closing")
    return vectors


def _lump(vectors: Sequence[Mapping[Position, Fraction]]) -> list[dict[Position, Fraction]]:
    groups: dict[tuple, dict[Position, Fraction]] = {}
    support = sorted(set().union(*[set(v) for v in vectors]))
    for p in support:
        row = [Fraction(v.get(p, 0)) for v in vectors]
        lead = next(x for x in row if x != 0)
        key = tuple(x / lead for x in row)
        groups.setdefault(key, {})[p] = lead
    return list(groups.values())


def _components(group: Mapping[Position, Fraction]) -> list[dict[Position, Fraction]]:
    parent: dict[int, int] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, b in group:
        parent[find(k)] = find(b)
    parts: dict[int, dict[Position, Fraction]] = {}
    for p, w in sorted(group.items()):
        parts.setdefault(find(p[0]), {})[p] = w
    return list(parts.values())


def _decompose(op, elements):
    """Exact coordinates of ``op`` in disjoint-support ``elements`` or None."""
    coeffs = []
    covered = set()
    for e in elements:
        d = e.as_dict()
        p0 = e.weights[0][0]
        c = Fraction(op.get(p0, 0)) / d[p0]
        for p, w in d.items():
            if Fraction(op.get(p, 0)) != c * w:
                return None
        covered.update(d)
        coeffs.append(c)
    if any(p not in covered for p, w in op.items() if w != 0):
        return None
    return coeffs


@dataclass(frozen=True)
class SubspaceSystem:
    """Closed operator basis with its exact generator.

    ``generator[i][j]`` is the coefficient of ``basis[j]`` in the dissipator
    image of ``basis[i]`` (``gamma = 1``). Coefficient vectors evolve as
    ``da/dt = gamma * generator^T a``.
    """

    n: int
    basis: tuple[OperatorBasisElement, ...]
    generator: tuple[tuple[Fraction, ...], ...]
    initial: tuple[Fraction, ...]

    @property
    def size(self) -> int:
        return len(self.basis)

    @property
    def initial_index(self) -> int | None:
        nz = [i for i, c in enumerate(self.initial) if c != 0]
        return nz[0] if len(nz) == 1 and self.initial[nz[0]] == 1 else None

    def generator_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.generator])

    def initial_vector(self) -> np.ndarray:
        return np.array([float(c) for c in self.initial])

    def closure_residual(self) -> int:
        """Number of basis images with a nonzero exact residual (0 when closed)."""
        bad = 0
        for i, e in enumerate(self.basis):
            image = exact_dissipator(e.as_dict(), self.n)
            recon: dict[Position, Fraction] = defaultdict(int)
            for j, f in enumerate(self.basis):
                for p, w in f.as_dict().items():
                    recon[p] += self.generator[i][j] * w
            if _clean(recon) != image:
                bad += 1
        return bad

    def dense_basis(self) -> np.ndarray:
        return np.array([e.to_dense() for e in self.basis])

    def reconstruct(self, coeffs) -> np.ndarray:
        """``sum_i coeffs[..., i] * basis_i`` as dense matrices."""
        return np.tensordot(np.asarray(coeffs, dtype=float), self.dense_basis(), axes=(-1, 0)).astype(complex)

    def permutation_to(self, reference: Sequence[OperatorBasisElement]) -> list[int]:
        """Indices ``perm`` with ``basis[perm[k]] == reference[k]``."""
        lookup = {e.weights: i for i, e in enumerate(self.basis)}
        missing = [str(r) for r in reference if r.weights not in lookup]
        if missing or len(reference) != self.size:
            raise ValueError(f"basis does not match reference; unmatched: {missing}")
        return [lookup[r.weights] for r in reference]

    def reordered(self, perm: Sequence[int], labels: Sequence[str] | None = None) -> "SubspaceSystem":
        basis = [self.basis[i] for i in perm]
        if labels is not None:
            basis = [OperatorBasisElement(e.n, e.weights, lab) for e, lab in zip(basis, labels)]
        gen = tuple(tuple(self.generator[i][j] for j in perm) for i in perm)
        return SubspaceSystem(self.n, tuple(basis), gen, tuple(self.initial[i] for i in perm))


def _as_sparse(rho0, n):
    if isinstance(rho0, OperatorBasisElement):
        return rho0.as_dict()
    return _clean({(int(k), int(b)): Fraction(w) for (k, b), w in rho0.items()})


def generate_subspace(n: int, rho0, max_qubits: int = MAX_QUBITS) -> SubspaceSystem:
    """Close ``rho0`` under the zero-temperature collective dissipator.

    ``rho0`` is an :class:`OperatorBasisElement` or a mapping from
    ``(ket index, bra index)`` to exact weights. The returned basis is in
    discovery order: the elements making up ``rho0`` first, then elements in
    the order they appear in successive dissipator images.
    """
    if not 1 <= n <= max_qubits:
        raise ValueError(f"qubit count must lie in [1, {max_qubits}], got {n}")
    start = _as_sparse(rho0, n)
    if not start:
        raise ValueError("initial operator is zero")
    limit = 4**n
    seeds = [start]
    for _ in range(limit):
        span = _closed_span(seeds, n, limit)
        groups = [part for g in _lump(span) for part in _components(g)]
        elements = [OperatorBasisElement.from_mapping(n, g) for g in groups]
        if len(elements) == len(span):
            break
        seeds = [e.as_dict() for e in elements]
    else:  # pragma: no cover - bounded by the dimension count
        raise SubspaceClosureError("lumping did not stabilise")

    images = [exact_dissipator(e.as_dict(), n) for e in elements]
    gen_rows = []
    for image in images:
        row = _decompose(image, elements)
        if row is None:
            raise SubspaceClosureError("dissipator image left the lumped span")
        gen_rows.append(row)
    init = _decompose(start, elements)
    if init is None:
        raise SubspaceClosureError("initial operator not representable in the basis")

    # discovery order: breadth-first over the generator graph from rho0
    first = lambda i: elements[i].weights[0][0]
    order = sorted((i for i, c in enumerate(init) if c != 0), key=first)
    seen = set(order)
    head = 0
    while head < len(order):
        i = order[head]
        head += 1
        new = sorted((j for j, c in enumerate(gen_rows[i]) if c != 0 and j not in seen), key=first)
        seen.update(new)
        order.extend(new)
    order.extend(sorted((i for i in range(len(elements)) if i not in seen), key=first))

    basis = tuple(elements[i] for i in order)
    gen = tuple(tuple(gen_rows[i][j] for j in order) for i in order)
    return SubspaceSystem(n, basis, gen, tuple(init[i] for i in order))


def excited_projector(n: int, excited: Sequence[int]) -> OperatorBasisElement:
    ket = BasisKet.excited(n, excited)
    return OperatorBasisElement.from_kets(ket, label=f"{ket}<{''.join(map(str, ket.bits))}|")


# -- reduced coefficient dynamics ---------------------------------------------------


def coefficient_odes(system: SubspaceSystem, gamma: float) -> np.ndarray:
    """Matrix ``A`` of ``da/dt = A a``; ``A = gamma * generator^T``."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    return gamma * system.generator_array().T


@dataclass(frozen=True)
class CoefficientTrajectory:
    times: np.ndarray
    values: np.ndarray  # shape (len(times), basis size)


def solve_coefficients(a_matrix, a0, times) -> CoefficientTrajectory:
    """``a(t) = exp(t A) a0`` at every requested time."""
    a_matrix = np.asarray(a_matrix, dtype=float)
    a0 = np.asarray(a0, dtype=float)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0):
        raise ValueError("times must be non-negative")
    values = np.array([a0.copy() if t == 0 else expm(t * a_matrix) @ a0 for t in times])
    return CoefficientTrajectory(times, values)


def evolve_subspace(system: SubspaceSystem, gamma: float, times) -> CoefficientTrajectory:
    return solve_coefficients(coefficient_odes(system, gamma), system.initial_vector(), times)
