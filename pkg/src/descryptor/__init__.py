"""Heisenberg-picture descriptors for qubit circuits, with correlation and separability analysis.

Qubit 1 is the leftmost tensor factor and the most significant amplitude bit
everywhere: in Pauli string text, dense matrices, matrix files and the oracle.
"""

from .analysis import (
    correlation_attribution,
    correlation_test,
    expectation_tables,
    ppt_separability,
    ppt_threshold,
    pure_separability_test,
    werner_state,
)
from .descriptors import Circuit, Descriptor, Gate, Register, density_matrix, evolve, joint
from .errors import (
    CircuitError,
    ContractError,
    DecompositionError,
    DescryptorError,
    PreconditionError,
    ResourceError,
)
from .pauli import PauliString, PauliSum, expectation_of_product, expectation_zero, multiply, tensor
from .reduction import convex_decompose, is_valid_reduction, purity, reduce
from .separability import SearchBudget, descriptor_separability_search

__version__ = "0.1.0"
