"""Dense Schroedinger-picture reference simulator.

Deliberately simple: gates are applied to the amplitude tensor one by one and
nothing is shared with the descriptor engine except the gate list.  Qubit 1 is
the most significant amplitude bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ContractError, ResourceError

MAX_QUBITS = 10
_S2 = 1 / np.sqrt(2)

GATE_MATRICES = {
    "H": np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": GATE_MATRICES["X"],
    "Y": GATE_MATRICES["Y"],
    "Z": GATE_MATRICES["Z"],
}


@dataclass(frozen=True, eq=False)
class StateVector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 1 << self.n:
            raise ContractError(f"{amps.size} amplitudes for {self.n} qubits")
        if abs(np.linalg.norm(amps) - 1) > 1e-12:
            raise ContractError("state vector is not normalised to 1e-12")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zero(cls, n: int) -> "StateVector":
        amps = np.zeros(1 << n, dtype=complex)
        amps[0] = 1
        return cls(n, amps)

    @classmethod
    def normalized(cls, amplitudes) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        n = amps.size.bit_length() - 1
        return cls(n, amps / np.linalg.norm(amps))

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


def gate_matrix(gate) -> np.ndarray:
    if gate.matrix is not None:
        return np.asarray(gate.matrix, dtype=complex)
    return GATE_MATRICES[gate.kind]


def apply_matrix(psi: np.ndarray, n: int, matrix: np.ndarray, targets: Iterable[int]) -> np.ndarray:
    """Apply ``matrix`` to 1-based ``targets`` of an n-qubit amplitude vector."""
    targets = [t - 1 for t in targets]
    k = len(targets)
    tensor = psi.reshape((2,) * n)
    op = matrix.reshape((2,) * (2 * k))
    out = np.tensordot(op, tensor, axes=(list(range(k, 2 * k)), targets))
    # tensordot puts the gate's output axes first; move them back into place
    out = np.moveaxis(out, list(range(k)), targets)
    return out.reshape(-1)


def simulate(circuit) -> StateVector:
    n = circuit.n
    if n > MAX_QUBITS:
        raise ResourceError(f"oracle is limited to {MAX_QUBITS} qubits")
    psi = StateVector.zero(n).amplitudes
    for g in circuit.gates:
        psi = apply_matrix(psi, n, gate_matrix(g), g.targets)
    return StateVector(n, psi / np.linalg.norm(psi))


def reduced_density(s: StateVector | np.ndarray, subset: Iterable[int], n: int | None = None) -> np.ndarray:
    """Partial trace of ``|psi><psi|`` (or of a density matrix) onto 1-based ``subset``."""
    if isinstance(s, StateVector):
        n = s.n
        keep = sorted(set(subset))
        psi = s.amplitudes.reshape((2,) * n)
        drop = [q for q in range(n) if q + 1 not in keep]
        order = [q - 1 for q in keep] + drop
        m = np.transpose(psi, order).reshape(1 << len(keep), -1)
        return m @ m.conj().T
    rho = np.asarray(s, dtype=complex)
    if n is None:
        n = rho.shape[0].bit_length() - 1
    keep = [q - 1 for q in sorted(set(subset))]
    t = rho.reshape((2,) * (2 * n))
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:n])
    cols = list(letters[n : 2 * n])
    for q in range(n):
        if q not in keep:
            cols[q] = rows[q]
    out = "".join(rows[q] for q in keep) + "".join(cols[q] for q in keep)
    d = 1 << len(keep)
    return np.einsum("".join(rows) + "".join(cols) + "->" + out, t).reshape(d, d)


def pauli_string_matrix(letters: str, phase: complex = 1.0) -> np.ndarray:
    out = np.array([[phase]], dtype=complex)
    for L in letters:
        out = np.kron(out, _PAULI[L])
    return out


def expectation(s: StateVector, p) -> complex:
    """<psi| P |psi> for a ``PauliSum`` or ``PauliString``."""
    if p.n != s.n:
        raise ContractError(f"operator has {p.n} qubits, state has {s.n}")
    if hasattr(p, "letters"):
        terms = [(p.letters, p.phase)]
    else:
        terms = [(q.letters, c) for q, c in p]
    psi = s.amplitudes
    total = 0j
    for letters, c in terms:
        total += c * np.vdot(psi, pauli_string_matrix(letters) @ psi)
    return total
