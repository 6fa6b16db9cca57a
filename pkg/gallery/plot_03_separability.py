"""
Certifying separability with a purifier
=======================================

For two qubits the partial transpose decides separability outright.  The
descriptor search instead tries to write the pair's joint table as a convex
sum of product terms, and hands back the terms as a certificate.
"""

# %%
import numpy as np

from descryptor import Circuit, Gate, evolve
from descryptor.analysis import ppt_separability, ppt_threshold, werner_state
from descryptor.linalg import unitary_with_first_column
from descryptor.separability import SearchBudget, descriptor_separability_search

# %%
# The GHZ pair (1, 2) with qubit 3 as purifier is an equal mixture of
# ``|00>`` and ``|11>``.  Two terms suffice.
ghz = evolve(Circuit(3, (Gate("H", [1]), Gate("CNOT", [1, 2]), Gate("CNOT", [1, 3]))))
v = descriptor_separability_search(ghz, 1, 2, 3)
print(v.status, "terms:", v.certificate.term_count, "residual:", f"{v.residual:.1e}")
print("weights:", np.round(v.certificate.weights, 6).tolist())

# %%
# A random pure entangled pair, prepared by one dense three-qubit gate.
rng = np.random.default_rng(1)
ab = rng.normal(size=4) + 1j * rng.normal(size=4)
psi = np.kron(ab / np.linalg.norm(ab), [1, 0])
r = evolve(Circuit(3, (Gate("U", [1, 2, 3], unitary_with_first_column(psi)),)))
v = descriptor_separability_search(r, 1, 2, 3, SearchBudget(restarts=2))
print(v.status, "| PPT min eigenvalue", f"{v.ppt.residual:.4f}")

# %%
# The PPT test on the Werner family flips at one third.
for p in (0.2, 0.3, 0.34, 0.5):
    print(p, ppt_separability(werner_state(p)).status)
print("threshold", round(ppt_threshold(), 6))
