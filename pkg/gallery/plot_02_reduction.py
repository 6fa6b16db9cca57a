"""
Reduced descriptors and where correlations come from
====================================================

Reducing a descriptor to a set of qubits drops every component that acts
outside that set.  Comparing expectation tables before and after the cut
tells us whether two qubits got their correlation from each other or through
someone else.
"""

# %%
from descryptor import Circuit, Gate, evolve
from descryptor.analysis import correlation_attribution, correlation_test
from descryptor.reduction import is_valid_reduction, purity, reduce

ghz = evolve(Circuit(3, (Gate("H", [1]), Gate("CNOT", [1, 2]), Gate("CNOT", [1, 3]))))

# %%
# Qubit 2 reduced onto qubits 2 and 3 loses its dependence on qubit 1.
print(reduce(ghz[2], [2, 3]).labels())

# %%
# The pair (1, 2) is correlated only through ``zz``.
rep = correlation_test(ghz, 1, 2)
print("witnesses:", rep.witnesses)
print(rep.joint.real)

# %%
# Keeping each member together with the purifier: for (1, 2) the ``zz``
# entry drops from 1 to 0, so the link was direct.  For (2, 3) it survives,
# which points at qubit 1, the one both of them once interacted with.
for pair, purifier in (((1, 2), 3), ((2, 3), 1)):
    att = correlation_attribution(ghz, *pair, purifier=purifier)
    print(pair, "via", purifier, "->", att.outcome, att.entries)

# %%
# A reduction is only trustworthy on a subsystem that is pure.  The pair (1, 3)
# of a GHZ state is mixed and the reduction fails.
v = is_valid_reduction(ghz, 1, [1, 3])
print(f"purity {purity(ghz, [1, 3]):.3f}, valid {v.valid}, {len(v.mismatches)} mismatched products")

# %%
# The converse does not hold in general.  After a SWAP, qubit 1 is still
# in ``|0>`` (pure), yet its descriptor lives entirely on slot 2, so cutting
# down to slot 1 throws all of it away.
swapped = evolve(Circuit(2, (Gate("SWAP", [1, 2]),)))
v = is_valid_reduction(swapped, 1, [1])
print(f"pure {v.pure}, valid {v.valid}")
