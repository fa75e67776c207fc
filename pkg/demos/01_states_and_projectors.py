"""
Validated states, projectors, and operator primitives
======================================================

Every operator in the engine is a plain complex numpy matrix; the
constructors check the physics invariants once, up front.
"""

import numpy as np

from decohist import adjoint, compose, make_projector, make_state, tensor, trace
from decohist.errors import NotIdempotentError, TraceNotOneError

# a density matrix must be Hermitian, positive semidefinite, unit trace
mixed = make_state(np.eye(2) / 2)
print("maximally mixed state:\n", mixed.matrix)

pure = make_state([[1, 0], [0, 0]])
print("pure |0><0| has trace", trace(pure.matrix).real)

# violations are reported with the measured deviation
try:
    make_state(np.diag([0.6, 0.6]))
except TraceNotOneError as err:
    print("rejected:", err)

# projectors must be Hermitian and idempotent
plus_x = make_projector(0.5 * np.array([[1, 1], [1, 1]]))
print("rank of |x+><x+|:", plus_x.rank)

try:
    make_projector(0.5 * np.eye(2))
except NotIdempotentError as err:
    print("rejected:", err)

# ordered products read left to right; the first factor is applied last
z0 = np.array([[1, 0], [0, 0]], dtype=complex)
print("x+ projector after z0 projector:\n", compose([plus_x.matrix, z0]))

# adjoint and Kronecker product round out the toolbox
print("adjoint of i*I:\n", adjoint(1j * np.eye(2)))
print("two qubits from one:", tensor(np.eye(2), np.eye(2)).shape)
