"""Correlation tables, separability tests and correlation attribution."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .descriptors import COMPONENTS, Register
from .errors import ContractError, PreconditionError
from .pauli import expectation_of_product, expectation_zero
from .reduction import PURITY_TOL, purity, reduce

EXACT_TOL = 1e-10
PPT_TOL = 1e-10


def _check_pair(r: Register, a: int, b: int) -> None:
    if a == b:
        raise ContractError("pair members must differ")
    for q in (a, b):
        if not 1 <= q <= r.n:
            raise ContractError(f"qubit {q} outside register of {r.n} qubits")


def _tables(comps_a, comps_b) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Joint 3x3 table and the two marginal vectors, real parts."""
    joint = np.array([[expectation_of_product(p, q).real for q in comps_b] for p in comps_a])
    ma = np.array([expectation_zero(p).real for p in comps_a])
    mb = np.array([expectation_zero(q).real for q in comps_b])
    return joint, ma, mb


def expectation_tables(r: Register, a: int, b: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``<q_ai q_bj>``, ``<q_ai>`` and ``<q_bj>`` for i, j over x, y, z."""
    _check_pair(r, a, b)
    return _tables(r[a].comps, r[b].comps)


def _witnesses(joint, product, tol) -> list[tuple[str, str]]:
    return [
        (COMPONENTS[i], COMPONENTS[j])
        for i in range(3)
        for j in range(3)
        if abs(joint[i, j] - product[i, j]) > tol
    ]


@dataclass(frozen=True, eq=False)
class CorrelationReport:
    pair: tuple[int, int]
    joint: np.ndarray
    product: np.ndarray
    witnesses: tuple[tuple[str, str], ...]

    @property
    def correlated(self) -> bool:
        return bool(self.witnesses)

    def component_table(self) -> list[list[tuple[float, float]]]:
        return [[(float(self.joint[i, j]), float(self.product[i, j])) for j in range(3)] for i in range(3)]


def correlation_test(r: Register, a: int, b: int, tol: float = EXACT_TOL) -> CorrelationReport:
    joint, ma, mb = expectation_tables(r, a, b)
    product = np.outer(ma, mb)
    return CorrelationReport((a, b), joint, product, tuple(_witnesses(joint, product, tol)))


@dataclass(frozen=True, eq=False)
class PureSeparabilityVerdict:
    pair: tuple[int, int]
    separable: bool
    full: np.ndarray
    reduced: np.ndarray

    def __bool__(self):
        return self.separable


def pure_separability_test(r: Register, a: int, b: int, tol: float = EXACT_TOL) -> PureSeparabilityVerdict:
    """<q_a q_b> == <[q_a]_a [q_b]_b> for all nine component pairs.

    Only meaningful when the pair is jointly pure; mixed pairs raise
    ``PreconditionError`` so callers use the purifier-based search instead.
    """
    _check_pair(r, a, b)
    p = purity(r, (a, b))
    if abs(p - 1) > PURITY_TOL:
        raise PreconditionError(
            f"qubits {a} and {b} are jointly mixed (purity {p:.6g}); "
            "use the mixed-state test with a purifier"
        )
    full, _, _ = expectation_tables(r, a, b)
    reduced, _, _ = _tables(reduce(r[a], [a]).comps, reduce(r[b], [b]).comps)
    ok = bool(np.all(np.abs(full - reduced) <= tol))
    return PureSeparabilityVerdict((a, b), ok, full, reduced)


@dataclass(frozen=True, eq=False)
class SeparabilityVerdict:
    """Outcome of one separability method.

    ``separable`` is ``True``/``False`` for decisive answers and ``None`` when
    the method could not decide (a failed decomposition search).  ``status``
    spells the outcome out: ``separable``, ``entangled``, ``certified``,
    ``inconclusive-entangled`` or ``budget-exhausted``.
    """

    method: str
    separable: bool | None
    residual: float
    status: str
    certificate: object | None = None
    ppt: "SeparabilityVerdict | None" = None
    details: dict = field(default_factory=dict)


def _validate_two_qubit(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ContractError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=PPT_TOL, rtol=0):
        raise ContractError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > PPT_TOL:
        raise ContractError("density matrix does not have unit trace")
    if np.linalg.eigvalsh(rho).min() < -PPT_TOL:
        raise ContractError("density matrix is not positive semidefinite")
    return rho


def partial_transpose(rho: np.ndarray) -> np.ndarray:
    """Transpose on the second qubit of a 4x4 matrix."""
    t = np.asarray(rho).reshape(2, 2, 2, 2)
    return t.transpose(0, 3, 2, 1).reshape(4, 4)


def ppt_separability(rho: np.ndarray, tol: float = PPT_TOL) -> SeparabilityVerdict:
    rho = _validate_two_qubit(rho)
    low = float(np.linalg.eigvalsh(partial_transpose(rho)).min())
    separable = low >= -tol
    return SeparabilityVerdict("ppt", separable, low, "separable" if separable else "entangled", details={"min_eigenvalue": low})


def werner_state(p: float) -> np.ndarray:
    """p |Phi+><Phi+| + (1 - p) I/4."""
    phi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return p * np.outer(phi, phi.conj()) + (1 - p) * np.eye(4) / 4


def ppt_threshold(family: Callable[[float], np.ndarray] = werner_state, lo: float = 0.0, hi: float = 1.0, tol: float = 1e-6) -> float:
    """Bisect for the parameter where ``family(p)`` stops being PPT.

    ``family(lo)`` must be separable and ``family(hi)`` entangled.
    """
    if not ppt_separability(family(lo)).separable or ppt_separability(family(hi)).separable:
        raise ContractError("bisection bracket does not straddle the PPT boundary")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ppt_separability(family(mid)).separable:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True, eq=False)
class AttributionReport:
    """Which correlation witnesses survive reduction to {self, purifier}.

    ``entries`` maps each witness ``(i, j)`` to ``"third-party"`` when the
    reduced descriptors still show the correlation and ``"direct"`` when it
    disappears.  ``outcome`` is ``"no-attribution"`` for uncorrelated pairs.
    """

    pair: tuple[int, int]
    purifier: int
    outcome: str
    full: np.ndarray
    reduced: np.ndarray
    reduced_product: np.ndarray
    entries: dict[tuple[str, str], str]

    @property
    def classes(self) -> set[str]:
        return set(self.entries.values())


def correlation_attribution(r: Register, a: int, b: int, purifier: int, tol: float = EXACT_TOL) -> AttributionReport:
    _check_pair(r, a, b)
    if purifier in (a, b) or not 1 <= purifier <= r.n:
        raise ContractError(f"purifier {purifier} must be a third qubit of the register")
    report = correlation_test(r, a, b, tol)
    ra = reduce(r[a], (a, purifier))
    rb = reduce(r[b], (b, purifier))
    reduced, ma, mb = _tables(ra.comps, rb.comps)
    reduced_product = np.outer(ma, mb)
    if not report.correlated:
        return AttributionReport((a, b), purifier, "no-attribution", report.joint, reduced, reduced_product, {})
    entries = {}
    for i, j in report.witnesses:
        ii, jj = COMPONENTS.index(i), COMPONENTS.index(j)
        survives = abs(reduced[ii, jj] - reduced_product[ii, jj]) > tol
        entries[(i, j)] = "third-party" if survives else "direct"
    kinds = set(entries.values())
    outcome = kinds.pop() if len(kinds) == 1 else "mixed"
    return AttributionReport((a, b), purifier, outcome, report.joint, reduced, reduced_product, entries)
