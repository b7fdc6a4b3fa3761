import math

import numpy as np
import pytest

import pentadot


def test_two_dot_ground_energy():
    g = pentadot.DeviceGraph(
        [pentadot.Dot(0, 8.0), pentadot.Dot(1, 8.0)], [pentadot.Edge(0, 1, -1.0)]
    )
    levels = pentadot.ground_levels(g)
    assert levels[(1, 1)][0] == pytest.approx(4 - 2 * math.sqrt(5), abs=1e-12)


def test_ground_doublet():
    q = pentadot.encode_single_qubit(pentadot.five_dot())
    assert q.ground_multiplicity == 2
    assert q.ground_spin == pytest.approx(0.0)
    assert q.idle_energy == pytest.approx(-2.48939598971, abs=1e-9)
    v = q.vectors
    assert np.allclose(v.conj().T @ v, np.eye(2), atol=1e-12)


def test_gates_rotate_by_120_degrees():
    q = pentadot.encode_single_qubit(pentadot.five_dot())
    h12 = pentadot.effective_hamiltonian(q, pentadot.tunneling_pulse(0, [1, 2], 0.05))
    h14 = pentadot.effective_hamiltonian(q, pentadot.tunneling_pulse(0, [1, 4], 0.05))
    assert abs(h12.matrix[0, 1]) < 1e-6
    a, b = h12.pauli, h14.pauli
    angle = math.degrees(math.atan2(a["z"] * b["x"] - a["x"] * b["z"], a["z"] * b["z"] + a["x"] * b["x"]))
    assert abs(abs(angle) - 120.0) < 0.01


def test_gap_closed_raises():
    q = pentadot.encode_single_qubit(pentadot.five_dot())
    with pytest.raises(pentadot.GapClosedError):
        pentadot.effective_hamiltonian(q, pentadot.tunneling_pulse(0, [1, 2], 0.9))


def test_staircase_plateaus():
    n, plateaus = pentadot.staircase(pentadot.five_dot(), pentadot.mu_grid(-3.0, 11.0, 0.05))
    assert all(b >= a for a, b in zip(n, n[1:]))
    widths = {p.n: p.width for p in plateaus if p.bounded}
    assert max(widths, key=widths.get) == 5
    assert 3 not in widths and 7 not in widths


def test_heisenberg_and_immunity():
    levels = pentadot.heisenberg_levels(4)
    assert levels[0] == pytest.approx(-1.5)
    pts = pentadot.local_field_immunity(pentadot.five_dot(), [0.0, 0.05])
    assert all(p["splitting"] < 1e-9 for p in pts)
    heis = pentadot.robustness_scan("four-dot-heisenberg", [0.1])
    assert heis[0]["splitting"] == pytest.approx(0.1, rel=1e-6)


def test_delta_construction():
    d = pentadot.DeviceDelta(edges={(0, 1): 0.1}, sites={2: (0.0, 0.05)})
    assert not d.empty()
    assert "0.1" in d.to_json()
    assert pentadot.DeviceDelta().empty()
