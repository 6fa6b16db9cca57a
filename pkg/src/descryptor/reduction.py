"""Reduced descriptors, their validity, and convex sums of pure descriptors."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .descriptors import Descriptor, Register, algebra_defect, component_index, density_matrix, pauli_coefficients
from .errors import ContractError, DecompositionError
from .linalg import unitary_with_first_column
from .pauli import PauliString, PauliSum, expectation_zero

PURITY_TOL = 1e-10
EXPECTATION_TOL = 1e-10
CONVEX_TOL = 1e-8


def _mask(n: int, keep: Iterable[int]) -> int:
    mask = 0
    for a in keep:
        mask |= 1 << (n - a)
    return mask


def _keep_set(n: int, keep: Iterable[int]) -> frozenset[int]:
    ks = frozenset(int(a) for a in keep)
    if not ks:
        raise ContractError("keep set must be nonempty")
    for a in ks:
        if not 1 <= a <= n:
            raise ContractError(f"qubit {a} outside register of {n} qubits")
    return ks


@dataclass(frozen=True, eq=False)
class ReducedDescriptor:
    """``[q_a]_N``: the base descriptor with every letter outside ``keep`` set to I.

    The components still act on the full register, so products with other
    reduced descriptors are ordinary operator products after identity
    substitution.
    """

    base: Descriptor
    keep: frozenset[int]
    comps: tuple[PauliSum, PauliSum, PauliSum]

    @property
    def qubit(self) -> int:
        return self.base.qubit

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def history(self):
        return self.base.history

    def component(self, c) -> PauliSum:
        i = component_index(c)
        return PauliSum.identity(self.n) if i == 0 else self.comps[i - 1]

    def as_descriptor(self) -> Descriptor:
        return Descriptor(self.base.qubit, self.base.n, self.comps, self.base.history)

    def labels(self) -> tuple[str, str, str]:
        return tuple(str(c) for c in self.comps)


def reduce(d: Descriptor | ReducedDescriptor, keep: Iterable[int]) -> ReducedDescriptor:
    ks = _keep_set(d.n, keep)
    base = d.base if isinstance(d, ReducedDescriptor) else d
    if isinstance(d, ReducedDescriptor):
        ks = ks & d.keep
        if not ks:
            raise ContractError("keep set does not meet the existing reduction")
    mask = _mask(d.n, ks)
    return ReducedDescriptor(base, ks, tuple(c.restrict(mask) for c in d.comps))


def purity(r: Register, subset: Iterable[int]) -> float:
    rho = density_matrix(r, subset)
    return float(np.real(np.trace(rho @ rho)))


@dataclass(frozen=True)
class ReductionVerdict:
    valid: bool
    pure: bool
    purity: float
    mismatches: tuple[tuple[tuple[int, ...], complex, complex], ...] = ()
    algebra_breaks: tuple[str, ...] = ()

    @property
    def divergent(self) -> bool:
        """Expectation agreement and purity disagree."""
        return self.valid != self.pure

    def __bool__(self) -> bool:
        return self.valid


def is_valid_reduction(r: Register, a: int, keep: Iterable[int]) -> ReductionVerdict:
    """Whether ``[q_a]_keep`` can stand in for ``q_a``.

    Compares every single and joint expectation over the kept qubits, with all
    of their descriptors reduced to ``keep``, against the values from the full
    descriptors, and checks that the reduced components still satisfy the
    Pauli relations so that reordered or repeated products agree as well.  ``a`` names the descriptor of interest and must be kept.
    Purity of the kept subsystem is reported alongside so the two notions can
    be compared.
    """
    ks = _keep_set(r.n, keep)
    if a not in ks:
        raise ContractError(f"qubit {a} is not in the keep set {sorted(ks)}")
    qs = sorted(ks)
    reduced = Register(r.n, tuple(reduce(r[b], ks).as_descriptor() if b in ks else r[b] for b in range(1, r.n + 1)), r.history)
    full = pauli_coefficients(r, qs)
    red = pauli_coefficients(reduced, qs)
    mismatches = []
    for idx in full:
        if abs(full[idx] - red[idx]) > EXPECTATION_TOL:
            mismatches.append((idx, full[idx], red[idx]))
    # ordered products only cover every word if the reduced set keeps the algebra
    broken = _algebra_breaks([reduced[b] for b in qs])
    p = purity(r, qs)
    return ReductionVerdict(not mismatches and not broken, abs(p - 1) <= PURITY_TOL, p, tuple(mismatches), tuple(broken))


def _algebra_breaks(descs: list[Descriptor]) -> list[str]:
    out = [f"q{d.qubit} products" for d in descs if algebra_defect(d) > EXPECTATION_TOL]
    for d, e in itertools.combinations(descs, 2):
        for i, p in zip("xyz", d.comps):
            for j, q in zip("xyz", e.comps):
                if not (p * q - q * p).allclose(PauliSum(d.n), atol=EXPECTATION_TOL):
                    out.append(f"q{d.qubit}{i} q{e.qubit}{j} commutator")
    return out


def descriptors_from_state(psi: np.ndarray, label: str = "pure") -> Register:
    """A register whose descriptors reproduce the pure state ``psi`` from |0...0>."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    k = psi.size.bit_length() - 1
    v = unitary_with_first_column(psi)
    descs = []
    history = (label,)
    for b in range(k):
        comps = []
        for L in "XYZ":
            sigma = PauliString.single(k, b, L).to_dense()
            comps.append(PauliSum.from_dense(v.conj().T @ sigma @ v))
        descs.append(Descriptor(b + 1, k, tuple(comps), history))
    return Register(k, tuple(descs), history)


@dataclass(frozen=True, eq=False)
class ConvexDescriptor:
    """Sum_i w_i [q_a^i] over registers that are pure on the kept space.

    ``keep`` lists the original qubit indices; inside each term register they
    are renumbered 1..len(keep) in ascending order, and ``position`` is the
    renumbered index of qubit ``qubit``.
    """

    qubit: int
    keep: tuple[int, ...]
    weights: tuple[float, ...]
    terms: tuple[Register, ...] = field(repr=False)

    @property
    def position(self) -> int:
        return self.keep.index(self.qubit) + 1

    def __len__(self):
        return len(self.weights)

    def descriptor(self, i: int) -> Descriptor:
        return self.terms[i][self.position]

    def expectations(self) -> np.ndarray:
        """Weighted <q_a> over the terms."""
        out = np.zeros(3)
        for w, term in zip(self.weights, self.terms):
            out += w * term[self.position].expectations()
        return out


def convex_decompose(r: Register, a: int, keep: Iterable[int]) -> ConvexDescriptor:
    """Spectral decomposition of rho_keep, one pure-state descriptor per eigenvector."""
    ks = _keep_set(r.n, keep)
    if a not in ks:
        raise ContractError(f"qubit {a} is not in the keep set {sorted(ks)}")
    qs = tuple(sorted(ks))
    rho = density_matrix(r, qs)
    vals, vecs = np.linalg.eigh(rho)
    order = np.argsort(vals)[::-1]
    weights, terms = [], []
    for i in order:
        w = float(vals[i])
        if w <= 1e-12:
            continue
        weights.append(w)
        terms.append(descriptors_from_state(vecs[:, i], label=f"eigen{i}"))
    total = sum(weights)
    weights = [w / total for w in weights]
    out = ConvexDescriptor(a, qs, tuple(weights), tuple(terms))
    target = pauli_coefficients(r, qs)
    worst = 0.0
    for idx, value in target.items():
        got = sum(w * _term_coefficient(t, idx) for w, t in zip(weights, terms))
        worst = max(worst, abs(got - value))
    if worst > CONVEX_TOL:
        raise DecompositionError(f"convex decomposition misses expectations by {worst:.3g}", worst)
    return out


def _term_coefficient(term: Register, idx: tuple[int, ...]) -> complex:
    acc = None
    for b, i in enumerate(idx, start=1):
        if i == 0:
            continue
        comp = term[b].comps[i - 1]
        acc = comp if acc is None else acc * comp
    return 1.0 if acc is None else expectation_zero(acc)


def all_keeps(n: int):
    """Every nonempty subset of 1..n, smallest first."""
    for k in range(1, n + 1):
        yield from itertools.combinations(range(1, n + 1), k)
