"""Consistency and additivity checks over history families.

Four checks, each returning a structured report with the worst violation and
the witness achieving it:

* weak: off-diagonal real parts of the decoherence functional vanish
  (probabilities of unions add up);
* medium: off-diagonal moduli vanish (strictly implies weak);
* additivity: union probabilities computed from chain operators match sums
  of fine probabilities, either over history pairs differing in one slot or
  over single-slot coarsenings;
* robustness: a chosen check passes for every state in a (seeded or
  user-supplied) state set.

Reports are deterministic: identical inputs and seed give identical
violations and witnesses (ties broken by enumeration order).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import FamilyTooLargeError
from .histories import (
    DEFAULT_FAMILY_CAP,
    DecoherenceFunctional,
    HistoryFamily,
    coarsen_slot,
    decoherence_functional,
    fine_probabilities,
    history_intersection,
    history_probability,
    history_union,
)
from .linalg import DensityState, hermiticity_deviation
from .sampling import robustness_states

DEFAULT_CHECK_TOL = 1e-9
DEFAULT_ROBUSTNESS_SEED = 1729
DEFAULT_ROBUSTNESS_COUNT = 20

#: Resolutions larger than this get a seeded sample of partitions instead of
#: the exhaustive two-block enumeration.
PARTITION_EXHAUSTIVE_MAX = 8
PARTITION_SAMPLE_SIZE = 64


@dataclass(frozen=True)
class ConsistencyReport:
    mode: str
    passed: bool
    worst_violation: float
    witness: dict | None
    tolerance: float
    seed: int | None = None

    def __post_init__(self):
        if self.passed != (self.worst_violation <= self.tolerance):
            raise ValueError("passed must match worst_violation <= tolerance")


def _report(mode, worst, witness, tol, seed=None) -> ConsistencyReport:
    return ConsistencyReport(mode, worst <= tol, float(worst), witness, tol, seed)


def _pair_witness(dfunc: DecoherenceFunctional, i: int, j: int) -> dict:
    return {
        "kind": "pair",
        "indices": [int(i), int(j)],
        "first": dfunc.histories[i].labels_by_offset(),
        "second": dfunc.histories[j].labels_by_offset(),
    }


def _offdiag_check(
    dfunc: DecoherenceFunctional, tol: float, mode: str, magnitude
) -> ConsistencyReport:
    n = dfunc.n
    if n < 2:
        return _report(mode, 0.0, None, tol)
    # the two traces of the defining sum are conjugates for Hermitian rho,
    # so 2 Re D covers both; the identity itself is asserted in debug mode
    assert hermiticity_deviation(np.asarray(dfunc.matrix)) <= max(dfunc.tol, tol)
    viol = np.where(
        np.triu(np.ones((n, n), dtype=bool), k=1), magnitude(dfunc.matrix), -1.0
    )
    flat = int(np.argmax(viol))
    i, j = divmod(flat, n)
    worst = float(viol[i, j])
    return _report(mode, worst, _pair_witness(dfunc, i, j), tol)


def check_weak_consistency(
    dfunc: DecoherenceFunctional, tol: float = DEFAULT_CHECK_TOL
) -> ConsistencyReport:
    """Largest |2 Re D[i][j]| over distinct history pairs."""
    return _offdiag_check(dfunc, tol, "weak", lambda m: np.abs(2.0 * m.real))


def check_medium_decoherence(
    dfunc: DecoherenceFunctional, tol: float = DEFAULT_CHECK_TOL
) -> ConsistencyReport:
    """Largest |D[i][j]| over distinct history pairs; implies the weak check."""
    return _offdiag_check(dfunc, tol, "medium", np.abs)


# ---------------------------------------------------------------------------
# Additivity of union probabilities.


def _strides(shape: tuple[int, ...]) -> list[int]:
    strides = [1] * len(shape)
    for k in range(len(shape) - 2, -1, -1):
        strides[k] = strides[k + 1] * shape[k + 1]
    return strides


def _pairs_scope(family: HistoryFamily, tol: float) -> ConsistencyReport:
    fine = list(family.fine_histories())
    probs = fine_probabilities(family)
    shape = family.shape
    strides = _strides(shape)

    worst = -1.0
    witness = None
    for pos in range(family.n_slots):
        size = shape[pos]
        other_axes = [range(s) for k, s in enumerate(shape) if k != pos]
        for a, b in itertools.combinations(range(size), 2):
            for other in itertools.product(*other_axes):
                base = 0
                it = iter(other)
                for k in range(family.n_slots):
                    if k != pos:
                        base += next(it) * strides[k]
                i = base + a * strides[pos]
                j = base + b * strides[pos]
                union = history_union(fine[i], fine[j])
                inter = history_intersection(fine[i], fine[j])
                p_inter = (
                    0.0 if inter is None else history_probability(family, inter, clamp=False)
                )
                p_union = history_probability(family, union, clamp=False)
                viol = abs(p_union - (probs[i] + probs[j] - p_inter))
                if viol > worst:
                    worst = viol
                    witness = {
                        "kind": "pair",
                        "indices": [int(i), int(j)],
                        "slot": family.offset_of(pos),
                        "first": fine[i].labels_by_offset(),
                        "second": fine[j].labels_by_offset(),
                    }
    if worst < 0.0:
        worst = 0.0
    return _report("additivity", worst, witness, tol)


def _candidate_partitions(size: int) -> list[tuple[tuple[int, ...], ...]]:
    """Merging partitions with at most two blocks, as position tuples.

    The full merge first, then every two-block split (the coarsest levels of
    the partition lattice).  Splits that merge nothing (all blocks
    singletons, possible only at size 2) are skipped, as is everything for a
    single-label resolution.
    """
    if size < 2:
        return []
    parts: list[tuple[tuple[int, ...], ...]] = [(tuple(range(size)),)]
    # two-block splits, canonicalized by putting position 0 in the first
    # block; the mask ranges over the remaining positions and excludes the
    # full set (that is the full merge above)
    for mask in range(2 ** (size - 1) - 1):
        block = tuple(sorted({0, *(p + 1 for p in range(size - 1) if (mask >> p) & 1)}))
        rest = tuple(p for p in range(size) if p not in block)
        if len(block) == 1 and len(rest) == 1:
            continue
        parts.append((block, rest))
    return parts


def _partitions_scope(
    family: HistoryFamily, tol: float, seed: int | None
) -> ConsistencyReport:
    probs = fine_probabilities(family).reshape(family.shape)
    worst = -1.0
    witness = None
    used_seed = None

    for pos in range(family.n_slots):
        res = family.resolutions[pos]
        size = res.size
        candidates = _candidate_partitions(size)
        if size > PARTITION_EXHAUSTIVE_MAX:
            used_seed = DEFAULT_ROBUSTNESS_SEED if seed is None else seed
            rng = np.random.default_rng(used_seed)
            take = min(PARTITION_SAMPLE_SIZE, len(candidates))
            idx = rng.choice(len(candidates), size=take, replace=False)
            candidates = [candidates[int(i)] for i in np.sort(idx)]

        for blocks in candidates:
            label_blocks: dict[str, list[int]] = {}
            for block in blocks:
                name = "+".join(res.labels[p].display for p in block)
                while name in label_blocks:  # label names may themselves contain '+'
                    name += "'"
                label_blocks[name] = [res.labels[p].index for p in block]
            coarse = coarsen_slot(family, family.offset_of(pos), label_blocks)
            coarse_probs = fine_probabilities(coarse).reshape(coarse.shape)
            expected = np.stack(
                [probs.take([p for p in block], axis=pos).sum(axis=pos) for block in blocks],
                axis=pos,
            )
            diff = np.abs(coarse_probs - expected)
            flat = int(np.argmax(diff))
            local = float(diff.reshape(-1)[flat])
            if local > worst:
                worst = local
                coarse_history = list(coarse.fine_histories())[flat]
                witness = {
                    "kind": "partition",
                    "slot": family.offset_of(pos),
                    "blocks": [
                        [res.labels[p].display for p in block] for block in blocks
                    ],
                    "coarse_history": coarse_history.labels_by_offset(),
                }
    if worst < 0.0:
        worst = 0.0
    return _report("additivity", worst, witness, tol, seed=used_seed)


def check_additivity(
    family: HistoryFamily,
    tol: float = DEFAULT_CHECK_TOL,
    scope: str = "partitions",
    cap: int = DEFAULT_FAMILY_CAP,
    seed: int | None = None,
) -> ConsistencyReport:
    """Union probabilities versus sums of fine probabilities.

    ``scope='pairs'`` tests every fine-history pair differing in exactly one
    slot (where the union is a history); ``scope='partitions'`` coarsens one
    slot at a time by every at-most-two-block partition and compares the
    coarse chain probabilities against block-sums of fine ones.
    """
    if family.n_fine_histories > cap:
        raise FamilyTooLargeError(family.n_fine_histories, cap)
    if scope == "pairs":
        return _pairs_scope(family, tol)
    if scope == "partitions":
        return _partitions_scope(family, tol, seed)
    raise ValueError(f"unknown additivity scope {scope!r}")


# ---------------------------------------------------------------------------
# Robustness on variation of the state.


def check_state_robustness(
    family: HistoryFamily,
    states: list[DensityState] | None = None,
    count: int = DEFAULT_ROBUSTNESS_COUNT,
    seed: int = DEFAULT_ROBUSTNESS_SEED,
    mode: str = "weak",
    tol: float = DEFAULT_CHECK_TOL,
    scope: str = "partitions",
) -> ConsistencyReport:
    """Run a check with each state substituted into the family.

    Passes only if every state passes; the witness names the state index
    achieving the worst violation together with the inner witness.  When no
    explicit states are given, ``count`` normalized Wishart states are drawn
    from ``seed``.
    """
    used_seed: int | None = None
    if states is None:
        states = robustness_states(family.dim, count, seed)
        used_seed = seed
    if not states:
        raise ValueError("robustness needs at least one state")

    worst = -1.0
    witness = None
    for idx, state in enumerate(states):
        variant = family.with_state(state)
        if mode in ("weak", "medium"):
            d = decoherence_functional(variant)
            inner = (
                check_weak_consistency(d, tol)
                if mode == "weak"
                else check_medium_decoherence(d, tol)
            )
        elif mode == "additivity":
            inner = check_additivity(variant, tol, scope=scope, seed=seed)
        else:
            raise ValueError(f"unknown inner mode {mode!r}")
        if inner.worst_violation > worst:
            worst = inner.worst_violation
            witness = {
                "kind": "state",
                "state_index": idx,
                "inner_mode": mode,
                "inner": inner.witness,
            }
    return _report("robustness", worst, witness, tol, seed=used_seed)
