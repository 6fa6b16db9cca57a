"""Heisenberg-picture descriptors and their evolution under circuits.

A descriptor of qubit ``a`` is the triple ``U^dag sigma_a U`` for the circuit
unitary ``U`` (gates applied in Schroedinger order, so the latest gate sits
innermost).  A new gate ``G`` therefore updates descriptors by substitution:
the new image of ``sigma`` is the old image of ``G^dag sigma G``, obtained by
replacing each letter of that support string with the corresponding old
component.  Qubit indices are 1-based everywhere in this module's API.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import CircuitError, ContractError
from .pauli import (
    LETTERS,
    PauliString,
    PauliSum,
    check_dense,
    expectation_of_product,
    expectation_zero,
    pauli_matrix,
)

COMPONENTS = "xyz"
CLIFFORD_KINDS = ("H", "X", "Y", "Z", "S", "CNOT", "CZ", "SWAP")
DENSE_KIND = "DenseUnitary"
MAX_DENSE_SUPPORT = 3
UNITARY_TOL = 1e-12

# G^dag X_t G and G^dag Z_t G for each target t, written on the gate support.
_CONJUGATION = {
    "H": (("+.Z", "+.X"),),
    "X": (("+.X", "-.Z"),),
    "Y": (("-.X", "-.Z"),),
    "Z": (("-.X", "+.Z"),),
    "S": (("-.Y", "+.Z"),),
    "CNOT": (("+.XX", "+.ZI"), ("+.IX", "+.ZZ")),
    "CZ": (("+.XZ", "+.ZI"), ("+.ZX", "+.IZ")),
    "SWAP": (("+.IX", "+.IZ"), ("+.XI", "+.ZI")),
}
_ARITY = {kind: len(rules) for kind, rules in _CONJUGATION.items()}


def component_index(c) -> int:
    """Map ``'i'/'x'/'y'/'z'`` or ``0..3`` to ``0..3`` (0 is the identity)."""
    if isinstance(c, str):
        key = c.lower()
        if key in ("i", "0"):
            return 0
        if key in COMPONENTS:
            return COMPONENTS.index(key) + 1
    elif isinstance(c, (int, np.integer)) and 0 <= int(c) <= 3:
        return int(c)
    raise ContractError(f"unknown descriptor component {c!r}")


class Gate:
    """One gate of a circuit.

    Named kinds are the Clifford gates in ``CLIFFORD_KINDS``; ``DenseUnitary``
    carries an explicit matrix over at most three targets (first target is the
    most significant bit of the matrix index).
    """

    __slots__ = ("kind", "targets", "matrix")

    def __init__(self, kind: str, targets: Sequence[int], matrix: np.ndarray | None = None):
        kind = kind.upper() if kind.upper() in CLIFFORD_KINDS else kind
        if kind in ("U", "DENSEUNITARY"):
            kind = DENSE_KIND
        targets = tuple(int(t) for t in targets)
        if len(set(targets)) != len(targets):
            raise CircuitError(f"{kind} targets must be distinct, got {targets}")
        if kind in _ARITY:
            if matrix is not None:
                raise CircuitError(f"{kind} takes no matrix")
            if len(targets) != _ARITY[kind]:
                raise CircuitError(f"{kind} needs {_ARITY[kind]} target(s), got {len(targets)}")
        elif kind == DENSE_KIND:
            if matrix is None:
                raise CircuitError("DenseUnitary needs a matrix")
            if not 1 <= len(targets) <= MAX_DENSE_SUPPORT:
                raise CircuitError(f"DenseUnitary supports 1..{MAX_DENSE_SUPPORT} targets, got {len(targets)}")
            matrix = np.array(matrix, dtype=complex)
            dim = 1 << len(targets)
            if matrix.shape != (dim, dim):
                raise CircuitError(f"matrix shape {matrix.shape} does not match {len(targets)} target(s)")
            if not np.allclose(matrix.conj().T @ matrix, np.eye(dim), atol=UNITARY_TOL, rtol=0):
                raise CircuitError("DenseUnitary matrix is not unitary to 1e-12")
            matrix.setflags(write=False)
        else:
            raise CircuitError(f"unknown gate kind {kind!r}")
        self.kind = kind
        self.targets = targets
        self.matrix = matrix

    def check(self, n: int) -> None:
        for t in self.targets:
            if not 1 <= t <= n:
                raise CircuitError(f"{self.kind} target {t} outside register of {n} qubits")

    def __eq__(self, other):
        if not isinstance(other, Gate):
            return NotImplemented
        if (self.kind, self.targets) != (other.kind, other.targets):
            return False
        if self.matrix is None or other.matrix is None:
            return self.matrix is other.matrix
        return bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.kind, self.targets))

    def __repr__(self):
        args = " ".join(str(t) for t in self.targets)
        return f"Gate({self.kind} {args})"

    def conjugated(self, position: int, letter: str) -> PauliSum:
        """``G^dag sigma G`` for ``sigma`` on target ``position``, on the gate support."""
        k = len(self.targets)
        if self.kind == DENSE_KIND:
            sigma = np.kron(np.kron(np.eye(1 << position), pauli_matrix(letter)), np.eye(1 << (k - position - 1)))
            return PauliSum.from_dense(self.matrix.conj().T @ sigma @ self.matrix)
        img_x, img_z = (PauliString.parse(s) for s in _CONJUGATION[self.kind][position])
        if letter == "X":
            return PauliSum.from_string(img_x)
        if letter == "Z":
            return PauliSum.from_string(img_z)
        # Y = i X Z
        return PauliSum.from_string(PauliString(k, 0, 0, 1) * img_x * img_z)


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise CircuitError(f"register size must be positive, got {self.n}")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            g.check(self.n)

    def __len__(self):
        return len(self.gates)

    def then(self, *gates: Gate) -> "Circuit":
        return Circuit(self.n, self.gates + tuple(gates))


@dataclass(frozen=True, eq=False)
class Descriptor:
    """The triple ``(q_x, q_y, q_z)`` of one qubit; ``qubit`` is 1-based."""

    qubit: int
    n: int
    comps: tuple[PauliSum, PauliSum, PauliSum]
    history: tuple = ()

    def component(self, c) -> PauliSum:
        i = component_index(c)
        return PauliSum.identity(self.n) if i == 0 else self.comps[i - 1]

    @property
    def x(self) -> PauliSum:
        return self.comps[0]

    @property
    def y(self) -> PauliSum:
        return self.comps[1]

    @property
    def z(self) -> PauliSum:
        return self.comps[2]

    def same_comps(self, other: "Descriptor") -> bool:
        return self.n == other.n and all(a == b for a, b in zip(self.comps, other.comps))

    def expectations(self) -> np.ndarray:
        return np.array([expectation_zero(c).real for c in self.comps])

    def is_clifford(self) -> bool:
        return all(c.single_string() is not None for c in self.comps)

    def labels(self) -> tuple[str, str, str]:
        return tuple(str(c) for c in self.comps)


def initial(a: int, n: int) -> Descriptor:
    """Descriptor at t=0: identity everywhere except the Pauli vector on slot ``a``."""
    if not 1 <= a <= n:
        raise ContractError(f"qubit {a} outside register of {n} qubits")
    comps = tuple(PauliSum.from_string(PauliString.single(n, a - 1, L)) for L in "XYZ")
    return Descriptor(a, n, comps, ())


@dataclass(frozen=True, eq=False)
class Register:
    n: int
    descriptors: tuple[Descriptor, ...]
    history: tuple = field(default=())

    @classmethod
    def fresh(cls, n: int) -> "Register":
        if n < 1:
            raise ContractError(f"register size must be positive, got {n}")
        return cls(n, tuple(initial(a, n) for a in range(1, n + 1)), ())

    @classmethod
    def from_table(cls, table: Sequence[Sequence[PauliSum | str]], label: str = "table") -> "Register":
        """Build a register directly from descriptor triples (no evolution history)."""
        rows = [[PauliSum.parse(c) if isinstance(c, str) else c for c in row] for row in table]
        n = rows[0][0].n
        history = (label,)
        descs = []
        for a, row in enumerate(rows, start=1):
            if len(row) != 3 or any(c.n != n for c in row):
                raise ContractError(f"row {a} is not a triple of {n}-qubit operators")
            descs.append(Descriptor(a, n, tuple(row), history))
        if len(descs) != n:
            raise ContractError(f"{len(descs)} descriptors for {n} qubits")
        return cls(n, tuple(descs), history)

    def __getitem__(self, a: int) -> Descriptor:
        if not 1 <= a <= self.n:
            raise ContractError(f"qubit {a} outside register of {self.n} qubits")
        return self.descriptors[a - 1]

    def __iter__(self):
        return iter(self.descriptors)

    def apply(self, gate: Gate) -> "Register":
        return apply_gate(self, gate)

    def run(self, circuit: Circuit | Iterable[Gate]) -> "Register":
        gates = circuit.gates if isinstance(circuit, Circuit) else circuit
        if isinstance(circuit, Circuit) and circuit.n != self.n:
            raise ContractError(f"circuit has {circuit.n} qubits, register has {self.n}")
        r = self
        for g in gates:
            r = apply_gate(r, g)
        return r

    def same_tables(self, other: "Register") -> bool:
        return self.n == other.n and all(a.same_comps(b) for a, b in zip(self, other))

    def is_clifford(self) -> bool:
        return all(d.is_clifford() for d in self)


def apply_gate(r: Register, g: Gate) -> Register:
    """Conjugate every descriptor by ``g``; untouched qubits keep their components."""
    g.check(r.n)
    old = {t: r[t] for t in g.targets}
    cache: dict[tuple[int, int], PauliSum] = {}
    k = len(g.targets)

    def image(x: int, z: int) -> PauliSum:
        # product of old components named by a support string (letters on distinct qubits commute)
        key = (x, z)
        if key not in cache:
            acc = None
            letters = PauliString(k, x, z).letters
            for pos, L in enumerate(letters):
                if L == "I":
                    continue
                comp = old[g.targets[pos]].comps[LETTERS.index(L) - 1]
                acc = comp if acc is None else acc * comp
            cache[key] = PauliSum.identity(r.n) if acc is None else acc
        return cache[key]

    history = r.history + (g,)
    descs = []
    for d in r:
        if d.qubit not in old:
            descs.append(Descriptor(d.qubit, d.n, d.comps, history))
            continue
        pos = g.targets.index(d.qubit)
        comps = []
        for L in "XYZ":
            total = PauliSum(r.n)
            for (x, z), c in g.conjugated(pos, L).items():
                total = total + c * image(x, z)
            comps.append(total)
        descs.append(Descriptor(d.qubit, d.n, tuple(comps), history))
    return Register(r.n, tuple(descs), history)


def evolve(circuit: Circuit) -> Register:
    return Register.fresh(circuit.n).run(circuit)


def joint(parts: Sequence[tuple[Descriptor, object]]) -> PauliSum:
    """Ordered product of the selected descriptor components."""
    if not parts:
        raise ContractError("joint needs at least one component")
    hist = parts[0][0].history
    n = parts[0][0].n
    for d, _ in parts:
        if d.history != hist or d.n != n:
            raise ContractError("descriptors come from different evolution histories")
    acc = parts[0][0].component(parts[0][1])
    for d, c in parts[1:]:
        acc = acc * d.component(c)
    return acc


def _subset(r: Register, subset: Iterable[int]) -> list[int]:
    qs = sorted(set(int(a) for a in subset))
    if not qs:
        raise ContractError("subset must be nonempty")
    for a in qs:
        if not 1 <= a <= r.n:
            raise ContractError(f"qubit {a} outside register of {r.n} qubits")
    return qs


def pauli_coefficients(r: Register, subset: Iterable[int]) -> dict[tuple[int, ...], complex]:
    """``<prod_b q_{b,i_b}>`` for every index tuple over ``subset`` (0 = identity)."""
    qs = _subset(r, subset)
    out: dict[tuple[int, ...], complex] = {}

    def walk(depth: int, idx: tuple[int, ...], prefix: PauliSum | None):
        if depth == len(qs) - 1:
            for i in range(4):
                key = idx + (i,)
                if i == 0:
                    out[key] = 1.0 + 0j if prefix is None else expectation_zero(prefix)
                else:
                    comp = r[qs[depth]].comps[i - 1]
                    out[key] = expectation_zero(comp) if prefix is None else expectation_of_product(prefix, comp)
            return
        for i in range(4):
            if i == 0:
                walk(depth + 1, idx + (0,), prefix)
            else:
                comp = r[qs[depth]].comps[i - 1]
                walk(depth + 1, idx + (i,), comp if prefix is None else prefix * comp)

    walk(0, (), None)
    return out


def density_matrix(r: Register, subset: Iterable[int]) -> np.ndarray:
    """rho_S = 2^-k sum over index tuples of <prod q> sigma_i1 (x) ... (x) sigma_ik."""
    qs = _subset(r, subset)
    k = len(qs)
    check_dense(k)
    coeffs = pauli_coefficients(r, qs)
    terms = [("".join(LETTERS[i] for i in idx), c / (1 << k)) for idx, c in coeffs.items()]
    return PauliSum.from_terms(k, terms).to_dense()


def algebra_defect(d: Descriptor) -> float:
    """Largest deviation from q_x q_y = i q_z (and cyclic) and q^2 = 1."""
    x, y, z = d.comps
    ident = PauliSum.identity(d.n)
    checks = [(x * y, 1j * z), (y * z, 1j * x), (z * x, 1j * y), (x * x, ident), (y * y, ident), (z * z, ident)]
    worst = 0.0
    for lhs, rhs in checks:
        diff = lhs - rhs
        worst = max([worst] + [abs(c) for _, c in diff.items()])
    return worst

