"""Small dense linear-algebra helpers shared by the analysis modules."""

from __future__ import annotations

import numpy as np


def unitary_with_first_column(v: np.ndarray) -> np.ndarray:
    """A unitary whose first column is ``v / |v|`` (so it maps |0...0> to v)."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    v = v / np.linalg.norm(v)
    d = v.size
    q, r = np.linalg.qr(np.column_stack([v, np.eye(d, dtype=complex)]))
    q = q[:, :d]
    # QR fixes the first column only up to a phase
    q[:, 0] *= r[0, 0] / abs(r[0, 0])
    return q


def bloch_ket(r: np.ndarray) -> np.ndarray:
    """Pure qubit ket with unit Bloch vector ``r``."""
    x, y, z = np.asarray(r, dtype=float) / np.linalg.norm(r)
    theta = np.arccos(np.clip(z, -1, 1))
    phi = np.arctan2(y, x)
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def bloch_rotation(r: np.ndarray) -> np.ndarray:
    """Single-qubit unitary sending |0> to the state with Bloch vector ``r``.

    The identity when ``r`` is +z.
    """
    x, y, z = np.asarray(r, dtype=float) / np.linalg.norm(r)
    theta = np.arccos(np.clip(z, -1, 1))
    phi = np.arctan2(y, x) if abs(x) + abs(y) > 0 else 0.0
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -np.exp(-1j * phi) * s], [np.exp(1j * phi) * s, c]])


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    return np.array([2 * rho[0, 1].real, -2 * rho[0, 1].imag, (rho[0, 0] - rho[1, 1]).real])


def is_unitary(u: np.ndarray, atol: float) -> bool:
    u = np.asarray(u)
    return u.ndim == 2 and u.shape[0] == u.shape[1] and np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=atol, rtol=0)
