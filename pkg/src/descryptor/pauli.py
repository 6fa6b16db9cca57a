"""Pauli strings and Pauli sums with exact phase tracking.

Strings use the symplectic encoding: one X bit and one Z bit per qubit plus a
phase exponent ``k`` (the string is ``i**k`` times a tensor product of the
Hermitian letters I, X, Y, Z).  Bit ``n - 1 - q`` of each mask belongs to qubit
``q`` (0-based), so the leftmost letter is qubit 1 and is also the most
significant bit of a computational-basis index.  This is the ordering used by
every dense matrix in the package.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import ContractError, ResourceError

LETTERS = "IXYZ"
PRUNE = 1e-12
DEFAULT_DENSE_CAP = 10

_PHASE_TEXT = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_TEXT_PHASE = {v: k for k, v in _PHASE_TEXT.items()}
_LABEL = re.compile(r"^\s*([+-]i?)\.([IXYZ]+)\s*$")

_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_matrix(letter: str) -> np.ndarray:
    return _MATS[letter].copy()


def dense_cap() -> int:
    """Largest register size for which dense matrices may be built.

    Read from ``DESCRYPTOR_DENSE_CAP`` on every call so tests and the CLI can
    override it without reloading the module.
    """
    raw = os.environ.get("DESCRYPTOR_DENSE_CAP")
    if raw is None:
        return DEFAULT_DENSE_CAP
    try:
        return int(raw)
    except ValueError:
        raise ContractError(f"DESCRYPTOR_DENSE_CAP must be an integer, got {raw!r}") from None


def check_dense(n: int) -> None:
    cap = dense_cap()
    if n > cap:
        raise ResourceError(f"{n} qubits exceeds the dense cap of {cap}")


def _product_phase(x1: int, z1: int, x2: int, z2: int) -> int:
    """Exponent of i picked up when multiplying Hermitian-letter strings."""
    y1 = x1 & z1
    xo = x1 & ~z1
    zo = z1 & ~x1
    up = (y1 & z2 & ~x2) | (xo & z2 & x2) | (zo & x2 & ~z2)
    down = (y1 & x2 & ~z2) | (xo & z2 & ~x2) | (zo & x2 & z2)
    return up.bit_count() - down.bit_count()


def _code(x: int, z: int, bit: int) -> int:
    xb = (x >> bit) & 1
    zb = (z >> bit) & 1
    return (0, 1, 3, 2)[xb | (zb << 1)]


def letters_of(n: int, x: int, z: int) -> str:
    return "".join(LETTERS[_code(x, z, n - 1 - q)] for q in range(n))


def masks_of(letters: str) -> tuple[int, int]:
    x = z = 0
    for ch in letters:
        if ch not in LETTERS:
            raise ContractError(f"unknown Pauli letter {ch!r}")
        x = (x << 1) | (ch in "XY")
        z = (z << 1) | (ch in "ZY")
    return x, z


@dataclass(frozen=True)
class PauliString:
    n: int
    x: int
    z: int
    k: int = 0

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % 4)

    @classmethod
    def from_letters(cls, letters: str, k: int = 0) -> "PauliString":
        x, z = masks_of(letters)
        return cls(len(letters), x, z, k)

    @classmethod
    def parse(cls, label: str) -> "PauliString":
        """Parse the ``-i.ZXI`` text grammar."""
        m = _LABEL.match(label)
        if m is None:
            raise ContractError(f"not a Pauli string label: {label!r}")
        return cls.from_letters(m.group(2), _TEXT_PHASE[m.group(1)])

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0, 0)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        """``letter`` on 0-based ``qubit`` and identity elsewhere."""
        return cls.from_letters("I" * qubit + letter + "I" * (n - qubit - 1))

    @property
    def letters(self) -> str:
        return letters_of(self.n, self.x, self.z)

    @property
    def phase(self) -> complex:
        return 1j**self.k

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def is_hermitian(self) -> bool:
        return self.k % 2 == 0

    def __str__(self) -> str:
        return f"{_PHASE_TEXT[self.k]}.{self.letters}"

    def __repr__(self) -> str:
        return f"PauliString({str(self)!r})"

    def __mul__(self, other):
        if isinstance(other, PauliString):
            return multiply(self, other)
        return NotImplemented

    def __neg__(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, self.k + 2)

    def commutes_with(self, other: "PauliString") -> bool:
        return ((self.x & other.z).bit_count() + (self.z & other.x).bit_count()) % 2 == 0

    def to_dense(self) -> np.ndarray:
        check_dense(self.n)
        dim = 1 << self.n
        rows = np.arange(dim)
        cols = rows ^ self.x
        zdot = np.array([(int(c) & self.z).bit_count() for c in cols])
        vals = (1j ** ((self.x & self.z).bit_count() + self.k)) * (-1.0) ** zdot
        out = np.zeros((dim, dim), dtype=complex)
        # P|c> = i^{|x&z|} (-1)^{z.c} |c ^ x>
        out[rows, cols] = vals
        return out


def multiply(a: PauliString, b: PauliString) -> PauliString:
    if a.n != b.n:
        raise ContractError(f"length mismatch: {a.n} vs {b.n}")
    g = _product_phase(a.x, a.z, b.x, b.z)
    return PauliString(a.n, a.x ^ b.x, a.z ^ b.z, a.k + b.k + g)


def tensor(a: PauliString, b: PauliString) -> PauliString:
    return PauliString(a.n + b.n, (a.x << b.n) | b.x, (a.z << b.n) | b.z, a.k + b.k)


def _fmt_coeff(c: complex) -> str:
    re_, im = c.real, c.imag
    if im == 0:
        return f"{re_:+.12g}"
    if re_ == 0:
        return f"{im:+.12g}i"
    return f"({re_:.12g}{im:+.12g}i)"


class PauliSum:
    """Complex-weighted sum of Hermitian-letter Pauli strings.

    Terms are keyed by ``(x, z)`` masks; string phases are folded into the
    coefficient.  Instances are treated as immutable.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[tuple[int, int], complex] | None = None, prune: float = PRUNE):
        self.n = n
        self._terms = {key: complex(c) for key, c in (terms or {}).items() if abs(c) > prune}

    @classmethod
    def from_string(cls, p: PauliString) -> "PauliSum":
        return cls(p.n, {(p.x, p.z): p.phase})

    @classmethod
    def identity(cls, n: int) -> "PauliSum":
        return cls(n, {(0, 0): 1.0})

    @classmethod
    def parse(cls, text: str) -> "PauliSum":
        return cls.from_string(PauliString.parse(text))

    @classmethod
    def from_terms(cls, n: int, items: Iterable[tuple[str, complex]]) -> "PauliSum":
        acc: dict[tuple[int, int], complex] = {}
        for letters, c in items:
            if len(letters) != n:
                raise ContractError(f"term {letters!r} does not have {n} letters")
            key = masks_of(letters)
            acc[key] = acc.get(key, 0) + c
        return cls(n, acc)

    @classmethod
    def from_dense(cls, m: np.ndarray, prune: float = PRUNE) -> "PauliSum":
        """Expand a 2^n x 2^n matrix in the Pauli basis, c_P = Tr(P M) / 2^n."""
        m = np.asarray(m, dtype=complex)
        dim = m.shape[0]
        n = dim.bit_length() - 1
        if m.shape != (dim, dim) or (1 << n) != dim:
            raise ContractError(f"matrix shape {m.shape} is not 2^n x 2^n")
        check_dense(n)
        cidx = np.arange(dim)
        # v[c, x] = M[c, c ^ x]; a Walsh-Hadamard transform over c gives sum_c (-1)^{z.c} v[c, x]
        v = m[cidx[:, None], cidx[:, None] ^ cidx[None, :]]
        w = v.reshape((2,) * n + (dim,))
        for axis in range(n):
            a = np.take(w, 0, axis=axis)
            b = np.take(w, 1, axis=axis)
            w = np.stack([a + b, a - b], axis=axis)
        w = w.reshape(dim, dim)  # w[z, x]
        terms = {}
        ys = np.array([[(int(x) & int(z)).bit_count() for x in range(dim)] for z in range(dim)])
        coeffs = w * (1j ** ys) / dim
        for z, x in zip(*np.nonzero(np.abs(coeffs) > prune)):
            terms[(int(x), int(z))] = coeffs[z, x]
        return cls(n, terms, prune)

    @property
    def terms(self) -> dict[tuple[int, int], complex]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        """Yield ``(PauliString, coefficient)`` pairs sorted by letters."""
        for (x, z), c in sorted(self._terms.items(), key=lambda kv: letters_of(self.n, *kv[0])):
            yield PauliString(self.n, x, z), c

    def single_string(self, tol: float = 1e-12) -> PauliString | None:
        """The equivalent ``PauliString`` if this sum is one unit-phase term."""
        if len(self._terms) != 1:
            return None
        (x, z), c = next(iter(self._terms.items()))
        for k in range(4):
            if abs(c - 1j**k) <= tol:
                return PauliString(self.n, x, z, k)
        return None

    def _check(self, other: "PauliSum") -> None:
        if self.n != other.n:
            raise ContractError(f"length mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        self._check(other)
        acc = dict(self._terms)
        for key, c in other._terms.items():
            acc[key] = acc.get(key, 0) + c
        return PauliSum(self.n, acc)

    def __sub__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __rmul__(self, scalar):
        if isinstance(scalar, (int, float, complex, np.number)):
            return PauliSum(self.n, {key: scalar * c for key, c in self._terms.items()})
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return other * self
        if isinstance(other, PauliString):
            other = PauliSum.from_string(other)
        if not isinstance(other, PauliSum):
            return NotImplemented
        self._check(other)
        acc: dict[tuple[int, int], complex] = {}
        for (x1, z1), c1 in self._terms.items():
            for (x2, z2), c2 in other._terms.items():
                key = (x1 ^ x2, z1 ^ z2)
                acc[key] = acc.get(key, 0) + c1 * c2 * 1j ** _product_phase(x1, z1, x2, z2)
        return PauliSum(self.n, acc)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, frozenset(self._terms.items())))

    def allclose(self, other: "PauliSum", atol: float = 1e-10) -> bool:
        self._check(other)
        keys = set(self._terms) | set(other._terms)
        return all(abs(self._terms.get(k, 0) - other._terms.get(k, 0)) <= atol for k in keys)

    def dagger(self) -> "PauliSum":
        return PauliSum(self.n, {key: c.conjugate() for key, c in self._terms.items()})

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return all(abs(c.imag) <= atol for c in self._terms.values())

    def trace(self) -> complex:
        """Normalised trace, i.e. the identity coefficient."""
        return self._terms.get((0, 0), 0j)

    def restrict(self, mask: int) -> "PauliSum":
        """Replace every letter outside ``mask`` (an amplitude-ordered bit set) by I."""
        acc: dict[tuple[int, int], complex] = {}
        for (x, z), c in self._terms.items():
            key = (x & mask, z & mask)
            acc[key] = acc.get(key, 0) + c
        return PauliSum(self.n, acc)

    def support(self) -> int:
        out = 0
        for x, z in self._terms:
            out |= x | z
        return out

    def expectation_zero(self) -> complex:
        return expectation_zero(self)

    def to_dense(self) -> np.ndarray:
        check_dense(self.n)
        dim = 1 << self.n
        out = np.zeros((dim, dim), dtype=complex)
        for (x, z), c in self._terms.items():
            out += c * PauliString(self.n, x, z).to_dense()
        return out

    def __str__(self) -> str:
        p = self.single_string()
        if p is not None:
            return str(p)
        if not self._terms:
            return "0"
        return " ".join(f"{_fmt_coeff(c)}*{s.letters}" for s, c in self)

    def __repr__(self) -> str:
        return f"PauliSum({str(self)!r})"


def expectation_zero(p: PauliSum | PauliString) -> complex:
    """<0...0| p |0...0>: only terms with no X or Y letters contribute."""
    if isinstance(p, PauliString):
        return p.phase if p.x == 0 else 0j
    return sum((c for (x, _), c in p.items() if x == 0), 0j)


def expectation_of_product(*factors: PauliSum) -> complex:
    """<0...0| f1 f2 ... fk |0...0> without keeping X-carrying final terms."""
    if not factors:
        return 1.0 + 0j
    acc = factors[0]
    for f in factors[1:-1]:
        acc = acc * f
    if len(factors) == 1:
        return expectation_zero(acc)
    last = factors[-1]
    total = 0j
    for (x1, z1), c1 in acc.items():
        for (x2, z2), c2 in last.items():
            if x1 == x2:
                total += c1 * c2 * 1j ** _product_phase(x1, z1, x2, z2)
    return total


def to_dense(p: PauliSum | PauliString, n: int | None = None) -> np.ndarray:
    if n is not None and p.n != n:
        raise ContractError(f"operator has {p.n} qubits, expected {n}")
    return p.to_dense()
