"""
Bell measurement with two detector qubits
=========================================

Qubits 1 and 2 are prepared in a Bell state, then each one is copied onto
its own detector with a CNOT.  The detectors' ``z`` components are the
recorded bits.
"""

# %%
from descryptor.cli import render_register
from descryptor.pauli import expectation_of_product, expectation_zero
from descryptor.protocols import bell_measurement_protocol

trace = bell_measurement_protocol()
for label, r in trace.steps:
    print(f"-- {label}")
    print(render_register(r))

# %%
# Measuring with detector 3 touches qubits 1 and 3 only.  Qubit 2's row is
# unchanged, so whatever happens at one wing is not visible at the other.
print(trace.snapshot("bell")[2].labels() == trace.snapshot("measure-1")[2].labels())

# %%
# The bits agree with certainty while each alone is unbiased.
b3, b4 = (b.content for b in trace.bit_channels)
print("BIT3 =", b3, " BIT4 =", b4)
print("<BIT3 BIT4> =", expectation_of_product(b3, b4).real)
print("<BIT3>, <BIT4> =", expectation_zero(b3).real, expectation_zero(b4).real)
