"""Canonical constructions: Bell pair, GHZ, the W table and the two-detector protocol."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .descriptors import Circuit, Gate, Register, density_matrix
from .errors import ContractError
from .pauli import PauliSum, expectation_of_product, expectation_zero

BELL_CIRCUIT = Circuit(2, (Gate("H", [1]), Gate("CNOT", [1, 2])))
GHZ_CIRCUIT = Circuit(3, BELL_CIRCUIT.gates + (Gate("CNOT", [1, 3]),))


def load_fixture(name: str) -> dict[int, tuple[str, ...]]:
    """Read a golden table shipped with the package.

    Each non-comment line holds the components of one qubit, optionally
    prefixed by ``N:``; unprefixed lines are numbered from 1.
    """
    text = resources.files(__package__).joinpath("fixtures", f"{name}.txt").read_text()
    rows: dict[int, tuple[str, ...]] = {}
    auto = 0
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line:
            head, line = line.split(":", 1)
            q = int(head)
        else:
            auto += 1
            q = auto
        rows[q] = tuple(line.split())
    return rows


@dataclass(frozen=True)
class BitDescriptor:
    """The q_z component of ``source``, as sent down a classical channel."""

    source: int
    content: PauliSum
    step: str = ""

    def __str__(self) -> str:
        return str(self.content)


@dataclass
class ProtocolTrace:
    name: str
    steps: list[tuple[str, Register]] = field(default_factory=list)
    bit_channels: list[BitDescriptor] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def record(self, label: str, r: Register) -> Register:
        self.steps.append((label, r))
        return r

    @property
    def final(self) -> Register:
        return self.steps[-1][1]

    def snapshot(self, label: str) -> Register:
        for name, r in self.steps:
            if name == label:
                return r
        raise KeyError(label)


def extract_bit(r: Register, a: int, step: str = "") -> BitDescriptor:
    return BitDescriptor(a, r[a].z, step)


def _trace_circuit(name: str, circuit: Circuit) -> ProtocolTrace:
    trace = ProtocolTrace(name)
    r = trace.record("initial", Register.fresh(circuit.n))
    for g in circuit.gates:
        r = trace.record(repr(g), r.apply(g))
    return trace


def build_bell() -> Register:
    """(|00> + |11>)/sqrt2 via H(1), CNOT(1,2)."""
    return Register.fresh(2).run(BELL_CIRCUIT)


def build_ghz() -> Register:
    return Register.fresh(3).run(GHZ_CIRCUIT)


def bell_trace() -> ProtocolTrace:
    return _trace_circuit("bell", BELL_CIRCUIT)


def ghz_trace() -> ProtocolTrace:
    return _trace_circuit("ghz", GHZ_CIRCUIT)


def w_fixture() -> Register:
    """The three-qubit W table loaded as data; it is not produced by any circuit here."""
    rows = load_fixture("w")
    return Register.from_table([rows[q] for q in sorted(rows)], label="w-table")


def canonical_w() -> np.ndarray:
    psi = np.zeros(8, dtype=complex)
    psi[[1, 2, 4]] = 1 / np.sqrt(3)
    return psi


def cross_commutators(r: Register) -> list[tuple[int, str, int, str]]:
    """Component pairs from different qubits that fail to commute.

    Descriptors of distinct qubits must commute; any entry here means the
    table cannot come from a unitary evolution of |0...0>.
    """
    bad = []
    for a in range(1, r.n + 1):
        for b in range(a + 1, r.n + 1):
            for i, p in zip("xyz", r[a].comps):
                for j, q in zip("xyz", r[b].comps):
                    if not (p * q - q * p).allclose(PauliSum(r.n), atol=1e-12):
                        bad.append((a, i, b, j))
    return bad


@dataclass(frozen=True, eq=False)
class StateReport:
    rho: np.ndarray
    hermitian_defect: float
    trace: complex
    min_eigenvalue: float
    fidelity: float
    cross_commutators: tuple = ()

    def is_density_matrix(self, tol: float = 1e-8) -> bool:
        return self.hermitian_defect <= tol and abs(self.trace - 1) <= tol and self.min_eigenvalue >= -tol


def w_report(r: Register | None = None) -> StateReport:
    """Reconstruct rho from the W table and compare it with (|001>+|010>+|100>)/sqrt3.

    The reconstruction is taken as is.  Its Hermitian part is used for the
    eigenvalue check; the deviation from Hermiticity is reported separately.
    """
    r = w_fixture() if r is None else r
    rho = density_matrix(r, range(1, r.n + 1))
    herm = (rho + rho.conj().T) / 2
    w = canonical_w()
    return StateReport(
        rho=rho,
        hermitian_defect=float(np.abs(rho - rho.conj().T).max()),
        trace=complex(np.trace(rho)),
        min_eigenvalue=float(np.linalg.eigvalsh(herm).min()),
        fidelity=float(np.real(np.vdot(w, rho @ w))),
        cross_commutators=tuple(cross_commutators(r)),
    )


def w_trace() -> ProtocolTrace:
    trace = ProtocolTrace("w")
    r = trace.record("table", w_fixture())
    rep = w_report(r)
    trace.notes.update(
        fidelity=rep.fidelity,
        hermitian_defect=rep.hermitian_defect,
        trace=rep.trace.real,
        min_eigenvalue=rep.min_eigenvalue,
        valid_density_matrix=rep.is_density_matrix(),
        noncommuting_pairs=len(rep.cross_commutators),
    )
    return trace


def bell_measurement_protocol() -> ProtocolTrace:
    """Bell pair on (1, 2), detectors 3 and 4 record qubits 1 and 2 by CNOT."""
    trace = ProtocolTrace("bell-measurement")
    r = trace.record("initial", Register.fresh(4))
    r = trace.record("bell", r.run([Gate("H", [1]), Gate("CNOT", [1, 2])]))
    before = r[2]
    r = trace.record("measure-1", r.apply(Gate("CNOT", [1, 3])))
    if not r[2].same_comps(before):
        raise ContractError("measuring qubit 1 disturbed the descriptor of qubit 2")
    r = trace.record("measure-2", r.apply(Gate("CNOT", [2, 4])))
    b3, b4 = extract_bit(r, 3, "measure-2"), extract_bit(r, 4, "measure-2")
    trace.bit_channels.extend([b3, b4])
    trace.notes.update(
        bit_correlation=expectation_of_product(b3.content, b4.content).real,
        bit_marginals=[expectation_zero(b3.content).real, expectation_zero(b4.content).real],
        q2_unchanged_by_measure_1=True,
    )
    return trace


PROTOCOLS = {
    "bell": bell_trace,
    "ghz": ghz_trace,
    "w": w_trace,
    "bell-measurement": bell_measurement_protocol,
}


def run_protocol(name: str) -> ProtocolTrace:
    if name not in PROTOCOLS:
        raise ContractError(f"unknown protocol {name!r}; choose from {', '.join(PROTOCOLS)}")
    return PROTOCOLS[name]()
