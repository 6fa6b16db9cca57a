"""Mixed-state separability through purifier-assisted descriptor decompositions.

A candidate consists of weights ``lam[k, l]`` and two families of two-qubit
unitaries: ``U_k`` on (a, purifier) and ``U'_l`` on (b, purifier), both with
the pair qubit as the most significant bit.  The candidate reproduces the pair
when

    <q_ai q_bj> = sum_kl lam[k, l] <000| (U_k^dag sigma_i U_k)(U'_l^dag sigma_j U'_l) |000>
    <q_ai>      = sum_k mu_k <00| U_k^dag (sigma_i x 1) U_k |00>,   mu = lam.sum(1)
    <q_bj>      = sum_l nu_l <00| U'_l^dag (sigma_j x 1) U'_l |00>, nu = lam.sum(0)

and every used pair (k, l) factorises through the purifier, i.e. the three-qubit
trace equals the product of the two marginal traces.  Under that condition the
certificate is a decomposition of rho_ab into product states, so it can never
vouch for an entangled pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, nnls

from .analysis import SeparabilityVerdict, expectation_tables, ppt_separability
from .descriptors import Register
from .errors import ContractError, PreconditionError
from .linalg import bloch_rotation, bloch_vector, is_unitary
from .reduction import PURITY_TOL, purity

CERTIFICATE_TOL = 1e-6
UNITARY_TOL = 1e-10
_GOAL = 1e-10

_SIGMA = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]
_ID2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class SearchBudget:
    max_terms: int = 8
    restarts: int = 8
    anneal_steps: int = 150
    polish_evals: int = 400
    seed: int = 0

    def __post_init__(self):
        if min(self.max_terms, self.restarts, self.polish_evals) < 1 or self.anneal_steps < 0:
            raise ContractError("search budget entries must be positive")


@dataclass(frozen=True, eq=False)
class DecompositionCandidate:
    weights: np.ndarray
    unitaries: tuple[np.ndarray, ...]
    primed: tuple[np.ndarray, ...]
    form: str = "diagonal"

    @property
    def mu(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    @property
    def nu(self) -> np.ndarray:
        return self.weights.sum(axis=0)

    @property
    def term_count(self) -> int:
        return int(np.count_nonzero(self.weights > 0))

    def is_well_formed(self) -> bool:
        w = self.weights
        if w.shape != (len(self.unitaries), len(self.primed)):
            return False
        if w.min() < -1e-12 or abs(w.sum() - 1) > 1e-10:
            return False
        return all(is_unitary(u, UNITARY_TOL) and u.shape == (4, 4) for u in self.unitaries + self.primed)


def _heisenberg_pair_ops(u: np.ndarray) -> list[np.ndarray]:
    """U^dag (sigma_i x 1) U for i = x, y, z on a two-qubit space."""
    return [u.conj().T @ np.kron(s, _ID2) @ u for s in _SIGMA]


def _embed(op: np.ndarray, pair_slot: int) -> np.ndarray:
    """Two-qubit operator on (pair_slot, 2) embedded in the 3-qubit space (a, b, purifier)."""
    t = op.reshape(2, 2, 2, 2)  # [p', c', p, c]
    eye = np.eye(2)
    if pair_slot == 0:
        full = np.einsum("xzuw,yv->xyzuvw", t, eye)
    else:
        full = np.einsum("yzvw,xu->xyzuvw", t, eye)
    return full.reshape(8, 8)


def reconstruct(c: DecompositionCandidate) -> dict[str, np.ndarray]:
    """Joint table, marginals and the worst factorisation defect of a candidate."""
    a_ops = [_heisenberg_pair_ops(u) for u in c.unitaries]
    b_ops = [_heisenberg_pair_ops(u) for u in c.primed]
    ma_terms = np.array([[ops[i][0, 0] for i in range(3)] for ops in a_ops])
    mb_terms = np.array([[ops[j][0, 0] for j in range(3)] for ops in b_ops])
    joint = np.zeros((3, 3), dtype=complex)
    defect = 0.0
    for k, ops_a in enumerate(a_ops):
        big_a = [_embed(o, 0) for o in ops_a]
        for l, ops_b in enumerate(b_ops):
            lam = c.weights[k, l]
            if lam <= 0:
                continue
            big_b = [_embed(o, 1) for o in ops_b]
            term = np.array([[(big_a[i] @ big_b[j])[0, 0] for j in range(3)] for i in range(3)])
            defect = max(defect, float(np.abs(term - np.outer(ma_terms[k], mb_terms[l])).max()))
            joint += lam * term
    return {
        "joint": joint,
        "marginal_a": c.mu @ ma_terms,
        "marginal_b": c.nu @ mb_terms,
        "factorisation_defect": defect,
    }


def certificate_residual(c: DecompositionCandidate, joint: np.ndarray, ma: np.ndarray, mb: np.ndarray) -> float:
    """Max deviation of the candidate from the target tables (inf if malformed)."""
    if not c.is_well_formed():
        return float("inf")
    rec = reconstruct(c)
    return float(
        max(
            np.abs(rec["joint"] - joint).max(),
            np.abs(rec["marginal_a"] - ma).max(),
            np.abs(rec["marginal_b"] - mb).max(),
            rec["factorisation_defect"],
        )
    )


# -- Bloch-vector parameterisation used by the optimiser ----------------------


def _target(joint, ma, mb) -> np.ndarray:
    return np.concatenate([[1.0], ma, mb, np.asarray(joint).reshape(-1)])


def _features(rs: np.ndarray, ss: np.ndarray) -> np.ndarray:
    """Columns [1, r, s, vec(r s^T)] for each product term; shape (16, K)."""
    outer = np.einsum("ki,kj->kij", rs, ss).reshape(len(rs), 9)
    return np.hstack([np.ones((len(rs), 1)), rs, ss, outer]).T


def _unit(theta, phi):
    return np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)


def _angles(v):
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v, axis=-1, keepdims=True)
    return np.arccos(np.clip(v[..., 2], -1, 1)), np.arctan2(v[..., 1], v[..., 0])


def _fit_weights(rs, ss, t) -> tuple[np.ndarray, float]:
    f = _features(rs, ss)
    w, _ = nnls(f, t)
    return w, float(np.abs(f @ w - t).max())


def _polish(rs, ss, w, t, max_nfev) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    k = len(w)
    th_r, ph_r = _angles(rs)
    th_s, ph_s = _angles(ss)
    x0 = np.concatenate([np.sqrt(np.maximum(w, 0)) + 1e-3, th_r, ph_r, th_s, ph_s])

    def unpack(x):
        u = x[:k]
        return u**2, _unit(x[k : 2 * k], x[2 * k : 3 * k]), _unit(x[3 * k : 4 * k], x[4 * k :])

    def resid(x):
        ww, r_, s_ = unpack(x)
        return _features(r_, s_) @ ww - t

    def jac(x):
        u = x[:k]
        ww, r_, s_ = unpack(x)
        out = np.zeros((16, 5 * k))
        out[:, :k] = 2 * u * _features(r_, s_)
        for block, (th, ph, vec, other, first) in enumerate(
            ((x[k : 2 * k], x[2 * k : 3 * k], r_, s_, True), (x[3 * k : 4 * k], x[4 * k :], s_, r_, False))
        ):
            d_th = np.stack([np.cos(th) * np.cos(ph), np.cos(th) * np.sin(ph), -np.sin(th)], axis=-1)
            d_ph = np.stack([-np.sin(th) * np.sin(ph), np.sin(th) * np.cos(ph), np.zeros_like(th)], axis=-1)
            for col, dv in enumerate((d_th, d_ph)):
                pair = np.einsum("ki,kj->kij", dv, other) if first else np.einsum("ki,kj->kij", other, dv)
                rows = np.zeros((k, 15))
                rows[:, 0:3] = dv if first else 0
                rows[:, 3:6] = 0 if first else dv
                rows[:, 6:] = pair.reshape(k, 9)
                out[1:, k * (1 + 2 * block + col) : k * (2 + 2 * block + col)] = (ww[:, None] * rows).T
        return out

    sol = least_squares(resid, x0, jac=jac, method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=max_nfev)
    ww, r_, s_ = unpack(sol.x)
    # re-fit weights exactly for the final directions, keeping nonnegativity
    w2, err2 = _fit_weights(r_, s_, t)
    err1 = float(np.abs(resid(sol.x)).max())
    if err2 <= err1:
        return r_, s_, w2, err2
    return r_, s_, ww, err1


def _schmidt_terms(psi: np.ndarray, weight: float):
    u, s, vh = np.linalg.svd(psi.reshape(2, 2))
    out = []
    for m in range(2):
        if s[m] ** 2 * weight <= 1e-14:
            continue
        ua, vb = u[:, m], vh[m, :]
        out.append((weight * s[m] ** 2, bloch_vector(np.outer(ua, ua.conj())), bloch_vector(np.outer(vb, vb.conj()))))
    return out


def _range_product_vectors(vecs: np.ndarray) -> list[np.ndarray]:
    """Product vectors inside a two-dimensional subspace spanned by ``vecs`` columns.

    alpha e1 + beta e2 is a product vector iff det(alpha E1 + beta E2) = 0.
    """
    e1, e2 = vecs[:, 0].reshape(2, 2), vecs[:, 1].reshape(2, 2)
    d1, d2 = np.linalg.det(e1), np.linalg.det(e2)
    cross = np.linalg.det(e1 + e2) - d1 - d2
    out = []
    if abs(d2) < 1e-14:
        out.append(vecs[:, 1])
        if abs(cross) > 1e-14:
            out.append(vecs[:, 0] - d1 / cross * vecs[:, 1])
    else:
        for t in np.roots([d2, cross, d1]):
            out.append(vecs[:, 0] + t * vecs[:, 1])
    return [v / np.linalg.norm(v) for v in out]


def _seeds(rho: np.ndarray, ma: np.ndarray, mb: np.ndarray, max_terms: int) -> list[list[tuple[float, np.ndarray, np.ndarray]]]:
    vals, vecs = np.linalg.eigh(rho)
    live = vals > 1e-12
    spectral = []
    for val, vec in zip(vals[live], vecs[:, live].T):
        spectral.extend(_schmidt_terms(vec, float(val)))
    seeds = [spectral[:max_terms]]
    if live.sum() == 2:
        prods = []
        for v in _range_product_vectors(vecs[:, live]):
            prods.extend(_schmidt_terms(v, 0.5)[:1])
        if prods:
            seeds.append(prods)
    axes = []
    for m in (ma, mb):
        n = np.linalg.norm(m)
        axes.append(m / n if n > 1e-9 else np.array([0.0, 0.0, 1.0]))
    corners = [(0.25, sa * axes[0], sb * axes[1]) for sa in (1, -1) for sb in (1, -1)]
    seeds.append(corners[:max_terms])
    return [s for s in seeds if s]


def _merge_terms(rs, ss, w, tol=1e-7):
    keep_r, keep_s, keep_w = [], [], []
    for r, s, wt in zip(rs, ss, w):
        if wt <= 1e-12:
            continue
        for i in range(len(keep_w)):
            if np.abs(keep_r[i] - r).max() < tol and np.abs(keep_s[i] - s).max() < tol:
                keep_w[i] += wt
                break
        else:
            keep_r.append(r)
            keep_s.append(s)
            keep_w.append(wt)
    w = np.array(keep_w)
    return np.array(keep_r), np.array(keep_s), w / w.sum()


def _candidate_from_terms(rs, ss, w, form="diagonal") -> DecompositionCandidate:
    us = tuple(np.kron(bloch_rotation(r), _ID2) for r in rs)
    ps = tuple(np.kron(bloch_rotation(s), _ID2) for s in ss)
    return DecompositionCandidate(np.diag(w), us, ps, form)


def _marginal_terms(m: np.ndarray):
    """Spectral decomposition of a single-qubit Bloch vector into pure states."""
    length = float(np.linalg.norm(m))
    axis = m / length if length > 1e-12 else np.array([0.0, 0.0, 1.0])
    out = [((1 + length) / 2, axis), ((1 - length) / 2, -axis)]
    return [(w, v) for w, v in out if w > 1e-12]


def product_candidate(ma: np.ndarray, mb: np.ndarray) -> DecompositionCandidate:
    """lam_ij = mu_i nu_j from the two marginals, for uncorrelated pairs."""
    ta, tb = _marginal_terms(ma), _marginal_terms(mb)
    mu = np.array([w for w, _ in ta])
    nu = np.array([w for w, _ in tb])
    us = tuple(np.kron(bloch_rotation(v), _ID2) for _, v in ta)
    ps = tuple(np.kron(bloch_rotation(v), _ID2) for _, v in tb)
    return DecompositionCandidate(np.outer(mu, nu), us, ps, "product")


def pair_density(joint, ma, mb) -> np.ndarray:
    """rho_ab = 1/4 sum_ij C_ij sigma_i x sigma_j with C_00 = 1."""
    paulis = [_ID2] + _SIGMA
    coeff = np.zeros((4, 4))
    coeff[0, 0] = 1
    coeff[1:, 0] = ma
    coeff[0, 1:] = mb
    coeff[1:, 1:] = joint
    return sum(coeff[i, j] * np.kron(paulis[i], paulis[j]) for i in range(4) for j in range(4)) / 4


def _restart(seed_terms, t, rng, budget: SearchBudget):
    """One independent restart: anneal directions, refit weights, polish."""
    if seed_terms is not None:
        rs = np.array([r for _, r, _ in seed_terms])
        ss = np.array([s for _, _, s in seed_terms])
        rs = rs / np.linalg.norm(rs, axis=1, keepdims=True)
        ss = ss / np.linalg.norm(ss, axis=1, keepdims=True)
        w, err = _fit_weights(rs, ss, t)
        steps = 0 if err <= _GOAL else budget.anneal_steps // 3
    else:
        k = budget.max_terms
        rs = rng.normal(size=(k, 3))
        ss = rng.normal(size=(k, 3))
        rs /= np.linalg.norm(rs, axis=1, keepdims=True)
        ss /= np.linalg.norm(ss, axis=1, keepdims=True)
        w, err = _fit_weights(rs, ss, t)
        steps = budget.anneal_steps
    temp = max(err, 1e-3)
    best = (rs.copy(), ss.copy(), w, err)
    for step in range(steps):
        if best[3] <= _GOAL:
            break
        k = rng.integers(len(rs))
        angle = 0.5 * (1 - step / steps) + 0.02
        nr, ns = rs.copy(), ss.copy()
        target = nr if rng.random() < 0.5 else ns
        target[k] = target[k] + angle * rng.normal(size=3)
        target[k] /= np.linalg.norm(target[k])
        nw, nerr = _fit_weights(nr, ns, t)
        if nerr <= err or rng.random() < np.exp(-(nerr - err) / temp):
            rs, ss, w, err = nr, ns, nw, nerr
            if err < best[3]:
                best = (rs.copy(), ss.copy(), w, err)
        temp *= 0.97
    rs, ss, w, err = best
    if err > _GOAL:
        rs, ss, w, err = _polish(rs, ss, w, t, budget.polish_evals)
    return rs, ss, w, err


def descriptor_separability_search(
    r: Register, a: int, b: int, purifier: int, budget: SearchBudget | None = None
) -> SeparabilityVerdict:
    """Look for a purifier-assisted decomposition certifying that a and b are separable.

    The search can only ever certify separability.  When it fails the verdict
    is left undecided and annotated with the PPT answer for the same pair.
    """
    budget = budget or SearchBudget()
    qs = {a, b, purifier}
    if len(qs) != 3:
        raise ContractError("pair and purifier must be three distinct qubits")
    for q in qs:
        if not 1 <= q <= r.n:
            raise ContractError(f"qubit {q} outside register of {r.n} qubits")
    p = purity(r, qs)
    if abs(p - 1) > PURITY_TOL:
        raise PreconditionError(f"qubits {sorted(qs)} are not jointly pure (purity {p:.6g}); {purifier} does not purify the pair")
    joint, ma, mb = expectation_tables(r, a, b)
    rho = pair_density(joint, ma, mb)
    ppt = ppt_separability(rho)
    t = _target(joint, ma, mb)

    best_res = float("inf")
    best_cand = None
    if np.abs(joint - np.outer(ma, mb)).max() <= 1e-10:
        cand = product_candidate(ma, mb)
        best_res, best_cand = certificate_residual(cand, joint, ma, mb), cand

    rngs = [np.random.default_rng(s) for s in np.random.SeedSequence(budget.seed).spawn(budget.restarts)]
    starts = _seeds(rho, ma, mb, budget.max_terms) + [None] * budget.restarts
    for i, seed_terms in enumerate(starts):
        if best_res <= _GOAL:
            break
        rng = rngs[i % len(rngs)]
        rs, ss, w, err = _restart(seed_terms, t, rng, budget)
        if err > CERTIFICATE_TOL:
            continue
        rs, ss, w = _merge_terms(rs, ss, w)
        cand = _candidate_from_terms(rs, ss, w)
        res = certificate_residual(cand, joint, ma, mb)
        if res < best_res:
            best_res, best_cand = res, cand

    details = {"ppt_min_eigenvalue": ppt.residual, "restarts": budget.restarts, "max_terms": budget.max_terms}
    if best_cand is not None and best_res <= CERTIFICATE_TOL:
        details["form"] = best_cand.form
        return SeparabilityVerdict("descriptor-search", True, best_res, "certified", best_cand, ppt, details)
    status = "inconclusive-entangled" if not ppt.separable else "budget-exhausted"
    return SeparabilityVerdict("descriptor-search", None, best_res, status, None, ppt, details)
