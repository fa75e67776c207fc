"""
Resolutions of the identity, outcomes, and coarse-graining
===========================================================

A resolution is a labeled family of orthogonal projectors summing to the
identity.  Outcomes are label subsets, so their Boolean algebra is exact
set arithmetic, and coarse-graining merges labels through a partition.
"""

import numpy as np

from decohist import coarsen, from_basis, outcome_projector, outcome_subset, outcome_union

# a 4-level system read in the computational basis
fine = from_basis(4, [[0], [1], [2], [3]], names=["a", "b", "c", "d"])
print("fine resolution:", fine)

# outcomes are subsets of labels; their projectors are orthogonal sums
low = fine.outcome(["a", "b"])
print("projector for {a,b}:\n", outcome_projector(fine, low).matrix.real)

# the set structure is exact, no floating point involved
assert outcome_subset(fine.outcome("a"), low)
both = outcome_union(fine.outcome("a"), fine.outcome("c"))
print("union labels:", sorted(both.labels))

# merging labels produces a coarser resolution; blocks become new labels
parity = coarsen(fine, {"even": ["a", "c"], "odd": ["b", "d"]})
print("coarse resolution:", parity)
print("rank of 'even':", parity.projectors[0].rank)

# coarse projectors are block sums of the fine ones
block_sum = fine.projectors[0].matrix + fine.projectors[2].matrix
assert np.array_equal(parity.projectors[0].matrix, block_sum)
print("block sums confirmed")
