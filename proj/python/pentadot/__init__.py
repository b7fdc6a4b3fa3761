"""Exact diagonalization of the five-dot composite qubit."""

from ._pentadot import (
    DeviceDelta,
    DeviceGraph,
    Dot,
    Edge,
    EffectiveGate,
    GapClosedError,
    Plateau,
    SolverError,
    SolverOptions,
    default_coupling_edges,
    effective_hamiltonian,
    effective_two_qubit,
    encode_single_qubit,
    encode_two_qubits,
    five_dot,
    ground_levels,
    heisenberg_levels,
    load_device,
    local_field_immunity,
    mu_grid,
    robustness_scan,
    staircase,
    tunneling_pulse,
    coupling_pulse,
    two_qubit_device,
)

__all__ = [name for name in dir() if not name.startswith("_")]
