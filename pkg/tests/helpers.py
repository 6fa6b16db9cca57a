"""Random circuit and state generators shared by the test modules."""

from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from descryptor.descriptors import Circuit, Gate
from descryptor.linalg import unitary_with_first_column

ONE_QUBIT = ("H", "X", "Y", "Z", "S")
TWO_QUBIT = ("CNOT", "CZ", "SWAP")


def random_clifford(rng: np.random.Generator, n: int, depth: int) -> Circuit:
    gates = []
    for _ in range(depth):
        if n > 1 and rng.random() < 0.5:
            a, b = rng.choice(n, size=2, replace=False) + 1
            gates.append(Gate(str(rng.choice(TWO_QUBIT)), [int(a), int(b)]))
        else:
            gates.append(Gate(str(rng.choice(ONE_QUBIT)), [int(rng.integers(n)) + 1]))
    return Circuit(n, tuple(gates))


@st.composite
def clifford_circuits(draw, max_n: int = 5, max_depth: int = 25):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    depth = draw(st.integers(0, max_depth))
    return random_clifford(np.random.default_rng(seed), n, depth)


def random_ket(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def product_mixture_state(rng: np.random.Generator) -> np.ndarray:
    """(a, b, purifier) purification of p|a1 b1><a1 b1| + (1-p)|a2 b2><a2 b2|.

    The purifier basis is a random orthonormal pair, so the pair state is an
    exact two-term product mixture.
    """
    p = rng.uniform(0.05, 0.95)
    basis = random_unitary(rng, 2)
    psi = np.zeros(8, dtype=complex)
    for k, w in enumerate((p, 1 - p)):
        ab = np.kron(random_ket(rng), random_ket(rng))
        psi += np.sqrt(w) * np.kron(ab, basis[:, k])
    return psi


def pure_entangled_state(rng: np.random.Generator) -> np.ndarray:
    return np.kron(random_ket(rng, 4), random_ket(rng))


def state_circuit(psi: np.ndarray) -> Circuit:
    """A one-gate circuit preparing ``psi`` on three qubits from |000>."""
    return Circuit(3, (Gate("U", [1, 2, 3], unitary_with_first_column(psi)),))


# criterion number -> PASS/FAIL line, filled by the acceptance tests
ACCEPTANCE_LOG: dict[int, str] = {}
