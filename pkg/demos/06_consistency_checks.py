"""
Consistency, additivity, and state robustness
==============================================

Whether history probabilities add like a classical measure is a property
of the whole family.  Three views of the same question: vanishing
off-diagonal real parts, additive union probabilities, and stability of
these under variation of the state.
"""

import numpy as np

from decohist import (
    DynamicsSpec,
    HistoryFamily,
    TimeGrid,
    build_schedule,
    check_additivity,
    check_state_robustness,
    check_weak_consistency,
    decoherence_functional,
    from_basis,
    make_resolution,
    make_state,
)

plus_x = 0.5 * np.array([[1, 1], [1, 1]], dtype=complex)
minus_x = 0.5 * np.array([[1, -1], [-1, 1]], dtype=complex)

grid = TimeGrid((0.0, 1.0), present_index=1)
schedule = build_schedule(grid, DynamicsSpec.trivial(2))
z = from_basis(2, [[0], [1]], names=["z0", "z1"])
x = make_resolution([("x+", plus_x), ("x-", minus_x)])

# the interfering z-then-x family fails every check
family = HistoryFamily(schedule, (z, x), make_state(plus_x))
weak = check_weak_consistency(decoherence_functional(family))
print("weak check:", "passed" if weak.passed else "FAILED",
      "worst violation", weak.worst_violation)

additive = check_additivity(family, scope="partitions")
print("additivity check:", "passed" if additive.passed else "FAILED",
      "worst violation", additive.worst_violation)
print("witness:", additive.witness)

# the same questions asked twice in the same basis are consistent
same = HistoryFamily(schedule, (z, z), make_state(plus_x))
print("same-basis weak check passed:",
      check_weak_consistency(decoherence_functional(same)).passed)

# a single lucky state can hide the inconsistency...
lucky = family.with_state(make_state([[1, 0], [0, 0]]))
print("weak check with state |0><0|:",
      check_weak_consistency(decoherence_functional(lucky)).passed)

# ...which the robustness sweep over seeded random states exposes
robust = check_state_robustness(lucky, count=20, seed=1729)
print("robust over 20 random states:", "passed" if robust.passed else "FAILED",
      "(seed", str(robust.seed) + ")")
