"""
Predicting forward, retrodicting backward
==========================================

Conditionals on the future behave classically: they always lie in [0, 1]
and sum to one.  Conditioning the past on the present does neither unless
the family is consistent; a corrected denominator (summing the joint
probability over all fine pasts) restores normalization.
"""

import numpy as np

from decohist import (
    DynamicsSpec,
    HistoryFamily,
    TimeGrid,
    build_schedule,
    from_basis,
    make_resolution,
    make_state,
    predictive_conditional,
    retrodictive_conditional,
    retrodictive_normalized,
)

plus_x = 0.5 * np.array([[1, 1], [1, 1]], dtype=complex)
minus_x = 0.5 * np.array([[1, -1], [-1, 1]], dtype=complex)
sigma_x = np.array([[0, 1], [1, 0]], dtype=complex)

# --- prediction: z measured now, z measured again after an x rotation ---
grid = TimeGrid((0.0, np.pi / 3), present_index=0)
schedule = build_schedule(grid, DynamicsSpec.from_hamiltonian(0.5 * sigma_x))
z = from_basis(2, [[0], [1]], names=["z0", "z1"])
family = HistoryFamily(schedule, (z, z), make_state(plus_x))

given = family.history({0: ["z0"]})
stay = predictive_conditional(family, family.history({1: ["z0"]}), given)
flip = predictive_conditional(family, family.history({1: ["z1"]}), given)
print(f"Pr(stay | z0 now) = {stay:.4f}, Pr(flip | z0 now) = {flip:.4f}")
print("futures sum to", stay + flip)

# --- retrodiction: past z conditioned on present x, state |x+><x+| ---
grid = TimeGrid((0.0, 1.0), present_index=1)
schedule = build_schedule(grid, DynamicsSpec.trivial(2))
x = make_resolution([("x+", plus_x), ("x-", minus_x)])
family = HistoryFamily(schedule, (z, x), make_state(plus_x))

present = family.resolution_at(0).outcome("x+")
plain = [
    retrodictive_conditional(family, family.history({-1: [lab]}), present)
    for lab in ("z0", "z1")
]
print("plain retrodictive values:", plain, "-> sum", sum(plain), "(not 1!)")

normalized = [
    retrodictive_normalized(family, family.history({-1: [lab]}), present)
    for lab in ("z0", "z1")
]
print("normalized retrodictive values:", normalized, "-> sum", sum(normalized))
