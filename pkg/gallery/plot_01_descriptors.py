"""
Descriptors of a GHZ register
=============================

Each qubit carries a triple of operators ``(q_x, q_y, q_z)`` acting on the
whole register.  Gates rewrite the triples of the qubits they touch and leave
everyone else alone, so locality is visible in the tables themselves.
"""

# %%
# A fresh register holds single-letter Paulis on each qubit's own slot.
from descryptor import Circuit, Gate, Register, evolve
from descryptor.cli import render_register

print(render_register(Register.fresh(3)))

# %%
# Hadamard then two CNOTs builds the GHZ state.  Printing after each gate
# shows which rows change.
gates = [Gate("H", [1]), Gate("CNOT", [1, 2]), Gate("CNOT", [1, 3])]
r = Register.fresh(3)
for g in gates:
    r = r.apply(g)
    print(f"after {g.kind}{list(g.targets)}")
    print(render_register(r))

# %%
# Expectation values come from the ``|0...0>`` diagonal of each component.
# Here every single-qubit average vanishes, while ``q1z q2z`` equals one.
from descryptor.pauli import expectation_of_product

r = evolve(Circuit(3, tuple(gates)))
print([d.expectations().round(12).tolist() for d in r])
print("<q1z q2z> =", expectation_of_product(r[1].z, r[2].z).real)

# %%
# The dense simulator agrees: ``<psi| Z Z I |psi> = 1``.
import numpy as np

from descryptor.oracle import expectation, simulate
from descryptor.pauli import PauliString

psi = simulate(Circuit(3, tuple(gates)))
print(np.round(psi.amplitudes, 6))
print("<ZZI> =", expectation(psi, PauliString.parse("+.ZZI")).real)
