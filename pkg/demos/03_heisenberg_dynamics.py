"""
Time grids, propagators, and Heisenberg-picture lifts
======================================================

Dynamics enter through a schedule of cumulative unitaries from a declared
reference slot.  Projectors are lifted to a slot by conjugation, so the
state stays fixed while the measured questions move in time.
"""

import numpy as np

from decohist import (
    DynamicsSpec,
    TimeGrid,
    build_schedule,
    heisenberg_projector,
    make_projector,
    propagator,
)

sigma_z = np.array([[1, 0], [0, -1]], dtype=complex)

# exp(-iH dt) via the Hermitian eigendecomposition, unitary to round-off
u = propagator(0.5 * sigma_z, np.pi)
print("half-spin z rotation through pi:\n", np.round(u, 12))

# a grid with a past, a present, and a future slot
grid = TimeGrid((0.0, 1.0, 2.0), present_index=1)
print("slot offsets:", list(grid.offsets()))

# the reference slot (where the state lives) defaults to the earliest;
# its cumulative unitary is the identity exactly
schedule = build_schedule(grid, DynamicsSpec.from_hamiltonian(0.5 * np.pi * sigma_z))
print("reference slot:", schedule.reference_index)
print("U at reference:\n", schedule.unitary(0).real)

# conjugation sends |x+><x+| to |x-><x-| after a pi rotation about z
plus_x = make_projector(0.5 * np.array([[1, 1], [1, 1]]))
lifted = heisenberg_projector(schedule, 1, plus_x)
print("lifted projector:\n", np.round(lifted.matrix.real, 12))
