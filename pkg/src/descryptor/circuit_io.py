"""Plain-text circuit files.

One directive per line::

    # comment
    qubits 3
    gate H 1
    gate CNOT 1 2
    gate U2 1 3 @swapish.mat

``@file`` names a matrix file (relative to the circuit file) holding the
row-major entries of a dense unitary as whitespace- or comma-separated
Python complex literals such as ``0.5`` or ``-0.5j`` or ``1+2j``.  Matrix
indices put the first listed target on the most significant bit.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .descriptors import CLIFFORD_KINDS, DENSE_KIND, Circuit, Gate
from .errors import CircuitError, ContractError

DENSE_ALIASES = ("U", "U1", "U2", "U3")


def read_matrix(path: Path, line: int | None = None) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CircuitError(f"cannot read matrix file {path}: {exc.strerror}", line) from None
    tokens = [t for t in re.split(r"[\s,]+", text) if t]
    try:
        values = [complex(t) for t in tokens]
    except ValueError as exc:
        raise CircuitError(f"bad matrix entry in {path}: {exc}", line) from None
    dim = int(round(np.sqrt(len(values))))
    if dim * dim != len(values) or dim < 2:
        raise CircuitError(f"{path} holds {len(values)} entries, not a square matrix", line)
    return np.array(values, dtype=complex).reshape(dim, dim)


def _int(token: str, what: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise CircuitError(f"{what} must be an integer, got {token!r}", line) from None


def parse_circuit(text: str, base: Path | None = None) -> Circuit:
    base = Path(base) if base is not None else Path.cwd()
    n: int | None = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0].lower()
        if head == "qubits":
            if n is not None:
                raise CircuitError("qubits declared twice", lineno)
            if len(words) != 2:
                raise CircuitError("expected 'qubits N'", lineno)
            n = _int(words[1], "qubit count", lineno)
            if n < 1:
                raise CircuitError(f"qubit count must be positive, got {n}", lineno)
        elif head == "gate":
            if n is None:
                raise CircuitError("gate before the 'qubits' line", lineno)
            if len(words) < 3:
                raise CircuitError("expected 'gate KIND t1 [t2 ...]'", lineno)
            kind, args = words[1], words[2:]
            matrix = None
            if args[-1].startswith("@"):
                matrix = read_matrix(base / args[-1][1:], lineno)
                args = args[:-1]
            targets = [_int(t, "target", lineno) for t in args]
            if kind.upper() in DENSE_ALIASES or kind == DENSE_KIND:
                if matrix is None:
                    raise CircuitError(f"{kind} needs a matrix file '@path'", lineno)
                kind = DENSE_KIND
            elif kind.upper() not in CLIFFORD_KINDS:
                raise CircuitError(f"unknown gate kind {kind!r}", lineno)
            try:
                g = Gate(kind, targets, matrix)
                g.check(n)
            except ContractError as exc:
                raise CircuitError(str(exc), lineno) from None
            gates.append(g)
        else:
            raise CircuitError(f"unknown directive {words[0]!r}", lineno)
    if n is None:
        raise CircuitError("missing 'qubits N' line")
    return Circuit(n, tuple(gates))


def load_circuit(path: str | Path) -> Circuit:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CircuitError(f"cannot read {path}: {exc.strerror}") from None
    return parse_circuit(text, path.parent)


def format_circuit(circuit: Circuit, matrix_names: dict[int, str] | None = None) -> str:
    """Text form of ``circuit``; dense gates refer to ``matrix_names[index]``."""
    lines = [f"qubits {circuit.n}"]
    for i, g in enumerate(circuit.gates):
        targets = " ".join(str(t) for t in g.targets)
        if g.kind == DENSE_KIND:
            if not matrix_names or i not in matrix_names:
                raise ContractError(f"gate {i} is dense and needs a matrix file name")
            lines.append(f"gate U{len(g.targets)} {targets} @{matrix_names[i]}")
        else:
            lines.append(f"gate {g.kind} {targets}")
    return "\n".join(lines) + "\n"


def write_matrix(path: Path, m: np.ndarray) -> None:
    rows = [" ".join(repr(complex(v)) for v in row) for row in np.asarray(m)]
    Path(path).write_text("\n".join(rows) + "\n")
