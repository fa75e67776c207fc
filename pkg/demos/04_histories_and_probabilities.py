"""
Histories, chain operators, and the decoherence functional
===========================================================

The running example: measure z in the past, x in the present, with the
state |x+><x+| and no dynamics.  Each fine history gets probability 1/4,
yet the four alternatives interfere, which the decoherence functional's
off-diagonal entries record.
"""

import numpy as np

from decohist import (
    DynamicsSpec,
    HistoryFamily,
    TimeGrid,
    build_schedule,
    chain_operator,
    decoherence_functional,
    fine_probabilities,
    from_basis,
    history_probability,
    make_resolution,
    make_state,
)

plus_x = 0.5 * np.array([[1, 1], [1, 1]], dtype=complex)
minus_x = 0.5 * np.array([[1, -1], [-1, 1]], dtype=complex)

grid = TimeGrid((0.0, 1.0), present_index=1)
schedule = build_schedule(grid, DynamicsSpec.trivial(2))
z = from_basis(2, [[0], [1]], names=["z0", "z1"])
x = make_resolution([("x+", plus_x), ("x-", minus_x)])
family = HistoryFamily(schedule, (z, x), make_state(plus_x))

# a history assigns one outcome per slot; offsets count from the present
history = family.history({-1: ["z0"], 0: ["x+"]})
print("chain operator (latest slot leftmost):\n", chain_operator(family, history))
print("probability:", history_probability(family, history))

# fine histories enumerate lexicographically, earliest slot most significant
for h, p in zip(family.fine_histories(), fine_probabilities(family)):
    print(h, "->", round(p, 12))
print("sum:", fine_probabilities(family).sum())

# the decoherence functional collects Tr(C_i rho C_j^dagger) for all pairs
d = decoherence_functional(family)
print("D:\n", np.round(d.matrix.real, 12))
print("off-diagonal D[0,2] =", d.matrix[0, 2], "(nonzero: the family interferes)")
