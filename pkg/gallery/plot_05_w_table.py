"""
Reading a state back from a descriptor table
============================================

Any table of descriptors defines a candidate density matrix through the
``|0...0>`` averages of every component product.  When the table is a
genuine evolution the result is a valid state.  A hand-written table can
break this, and the reconstruction shows how.
"""

# %%
import numpy as np

from descryptor.cli import render_register
from descryptor.protocols import build_ghz, w_fixture, w_report

print(render_register(w_fixture()))

# %%
# Components belonging to different qubits ought to commute.  In this table
# several of them do not.
rep = w_report()
print(len(rep.cross_commutators), "clashing pairs, e.g.", rep.cross_commutators[:3])

# %%
# The reconstruction has unit trace but is not Hermitian, so it is not a state.
print(f"hermitian defect {rep.hermitian_defect}, trace {rep.trace.real:.3f}")
print(f"fidelity with the W state {rep.fidelity:.4f}, valid: {rep.is_density_matrix()}")

# %%
# The same reconstruction on the evolved GHZ table returns the GHZ projector.
good = w_report(build_ghz())
print(good.is_density_matrix(), np.round(np.diag(good.rho).real, 3))
