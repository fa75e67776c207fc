import numpy as np
import pytest

from decohist import (
    DynamicsSpec,
    HistoryFamily,
    TimeGrid,
    build_schedule,
    from_basis,
    make_resolution,
    make_state,
)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

P_Z0 = np.array([[1, 0], [0, 0]], dtype=complex)
P_Z1 = np.array([[0, 0], [0, 1]], dtype=complex)
P_XP = 0.5 * np.array([[1, 1], [1, 1]], dtype=complex)
P_XM = 0.5 * np.array([[1, -1], [-1, 1]], dtype=complex)


def z_resolution():
    return from_basis(2, [[0], [1]], names=["z0", "z1"])


def x_resolution():
    return make_resolution([("x+", P_XP), ("x-", P_XM)])


@pytest.fixture
def z_then_x_family():
    """Past z measurement, present x measurement, no dynamics, state |x+>."""
    grid = TimeGrid((0.0, 1.0), present_index=1)
    schedule = build_schedule(grid, DynamicsSpec.trivial(2))
    return HistoryFamily(schedule, (z_resolution(), x_resolution()), make_state(P_XP))


@pytest.fixture
def same_basis_family():
    """The z basis at three slots (past, present, future), no dynamics."""
    grid = TimeGrid((0.0, 1.0, 2.0), present_index=1)
    schedule = build_schedule(grid, DynamicsSpec.trivial(2))
    res = z_resolution()
    return HistoryFamily(schedule, (res, res, res), make_state(P_XP))


@pytest.fixture
def conserved_family():
    """Two qubits, total-z Hamiltonian, total-z eigenspace resolution twice.

    Projectors commute with the dynamics and each other, so the family is
    consistent for every state.
    """
    h = np.kron(PAULI_Z, np.eye(2)) + np.kron(np.eye(2), PAULI_Z)
    grid = TimeGrid((0.0, 0.7), present_index=1)
    schedule = build_schedule(grid, DynamicsSpec.from_hamiltonian(h))
    res = from_basis(4, [[0], [1, 2], [3]], names=["both_up", "mixed", "both_down"])
    psi = np.array([1, 1, 0, 1], dtype=complex) / np.sqrt(3)
    return HistoryFamily(schedule, (res, res), make_state(np.outer(psi, psi.conj())))
