"""Tests for the device and drive models."""

import numpy as np
import pytest

from drivengates.linalg import basis_state, bits_to_index
from drivengates.model import (
    RWAWarning,
    DeviceModel,
    DriveSpec,
    SubspaceLabel,
    all_subspaces,
    detuning_for_weight,
    drive_hamiltonian,
    resonant_fanout_drive,
    resonant_itoffoli_drive,
    rotating_frame_hamiltonian,
    star_couplings,
    star_device,
    static_energies,
    static_hamiltonian,
    subspace_detuning,
    subspace_gap,
)

TWO_PI = 2.0 * np.pi


def test_device_validation():
    j = star_couplings(3, 0, (1, 2), 1.0)
    dev = DeviceModel(n_controls=2, omega=0.0, couplings=j)
    assert dev.n_qubits == 3 and dev.dim == 8
    bad = j.copy()
    bad[0, 1] = 2.0  # asymmetric
    with pytest.raises(ValueError):
        DeviceModel(n_controls=2, omega=0.0, couplings=bad)
    bad = j.copy()
    bad[1, 1] = 0.5  # nonzero diagonal
    with pytest.raises(ValueError):
        DeviceModel(n_controls=2, omega=0.0, couplings=bad)
    with pytest.raises(ValueError):
        DeviceModel(n_controls=2, omega=np.zeros(5), couplings=j)


def test_desk_scale_guard():
    with pytest.raises(ValueError):
        star_device(8, 1.0)  # nine qubits exceeds the default guard
    dev = star_device(8, 1.0, max_qubits=9)
    assert dev.n_qubits == 9


def test_omega_broadcast():
    dev = star_device(2, 1.0, omega=3.0)
    assert np.allclose(dev.omega, [3.0, 3.0, 3.0])
    dev = star_device(1, 1.0, omega=[1.0, 2.0])
    assert np.allclose(dev.omega, [1.0, 2.0])


def test_star_couplings_layout():
    j = star_couplings(4, 0, (1, 2, 3), 2.5)
    assert np.allclose(j[0, 1:], 2.5)
    assert np.allclose(j[1:, 0], 2.5)
    assert np.allclose(j[1:, 1:], 0.0)
    with pytest.raises(ValueError):
        star_couplings(3, 1, (0, 1), 1.0)


def test_static_energies_two_qubits():
    omega0, omega1, j = 5.0, 3.0, 0.8
    dev = star_device(1, j, omega=[omega0, omega1])
    diag = static_energies(dev)
    for idx, (s0, s1) in enumerate([(1, 1), (1, -1), (-1, 1), (-1, -1)]):
        expected = -0.5 * (omega0 * s0 + omega1 * s1) + 0.5 * j * s0 * s1
        assert abs(diag[idx] - expected) < 1e-12
    h = static_hamiltonian(dev)
    assert np.allclose(h, np.diag(diag))


def test_subspace_gap_formula():
    j = TWO_PI * 40e6
    dev = star_device(3, j)
    for label in all_subspaces(3):
        expected = j * (3 - 2 * label.hamming)
        assert abs(subspace_gap(dev, label) - expected) < 1e-6
    # Plain integer labels are accepted too.
    assert subspace_gap(dev, 0b111) == pytest.approx(-3 * j)


def test_subspace_detuning_matches_weight_formula():
    j = TWO_PI * 40e6
    dev = star_device(2, j)
    drive = resonant_itoffoli_drive(dev, j / 8)
    for label in all_subspaces(2):
        expected = detuning_for_weight(j, 2, label.hamming)
        assert abs(subspace_detuning(dev, drive, label) - expected) < 1e-6
    # The resonant subspace sees zero detuning.
    assert subspace_detuning(dev, drive, SubspaceLabel(0b11, 2)) == pytest.approx(0.0)


def test_negative_coupling_resonance():
    j = -TWO_PI * 40e6
    dev = star_device(2, j)
    drive = resonant_itoffoli_drive(dev, abs(j) / 8)
    assert drive.delta_for(0) == pytest.approx(-2 * j)
    assert subspace_detuning(dev, drive, SubspaceLabel(0b11, 2)) == pytest.approx(0.0)


def test_drive_spec_validation():
    with pytest.raises(ValueError):
        DriveSpec(rabi=0.0)
    with pytest.raises(ValueError):
        DriveSpec(rabi=1.0, targets=())
    with pytest.raises(ValueError):
        DriveSpec(rabi=1.0, targets=(0, 0))
    with pytest.raises(ValueError):
        DriveSpec(rabi=1.0, quadrature="three")
    spec = DriveSpec(rabi=1.0, targets=(1, 2), delta=(0.5, -0.5), theta=0.1)
    assert spec.delta_for(2) == -0.5
    assert spec.theta_for(1) == 0.1
    with pytest.raises(ValueError):
        DriveSpec(rabi=1.0, targets=(1, 2), delta=(0.5,)).delta_for(1)


def test_subspace_label():
    label = SubspaceLabel(0b101, 3)
    assert label.bits == (1, 0, 1)
    assert label.hamming == 2
    assert label.indices == (5, 13)
    with pytest.raises(ValueError):
        SubspaceLabel(8, 3)


def test_resonant_fanout_drive_targets():
    j = TWO_PI * 40e6
    dev = star_device(2, j)
    drive = resonant_fanout_drive(dev, j / 8, control=0)
    assert drive.targets == (1, 2)
    assert drive.delta_for(1) == pytest.approx(-j)
    uncoupled = DeviceModel(n_controls=2, omega=0.0, couplings=np.zeros((3, 3)))
    with pytest.raises(ValueError):
        resonant_fanout_drive(uncoupled, 1.0, control=0)


def test_drive_hamiltonian_two_quadrature():
    j = TWO_PI * 40e6
    omega0 = TWO_PI * 5e9
    dev = star_device(1, j, omega=[omega0, 0.0])
    rabi = j / 8
    theta = 0.3
    drive = resonant_itoffoli_drive(dev, rabi, theta=theta)
    t = 1.7e-9
    h = drive_hamiltonian(dev, drive, t)
    # On target 0 the two-quadrature drive applies
    # rabi [cos(phi) sigma_x + sin(phi) sigma_y], phi = (delta - omega_0) t + theta.
    phi = (drive.delta_for(0) - omega0) * t + theta
    sx = np.kron([[0, 1], [1, 0]], np.eye(2))
    sy = np.kron([[0, -1j], [1j, 0]], np.eye(2))
    expected = rabi * (np.cos(phi) * sx + np.sin(phi) * sy)
    assert np.max(np.abs(h - expected)) < 1e-6


def test_rotating_frame_hamiltonian_structure():
    j = TWO_PI * 40e6
    dev = star_device(2, j)
    drive = resonant_itoffoli_drive(dev, j / 8)
    h = rotating_frame_hamiltonian(dev, drive)
    assert np.max(np.abs(h - h.conj().T)) < 1e-6
    # The resonant subspace block carries pure rabi coupling.
    i0, i1 = SubspaceLabel(0b11, 2).indices
    assert abs(h[i0, i1] - drive.rabi) < 1e-6
    assert abs(h[i0, i0] - h[i1, i1]) < 1e-6


def test_rwa_warning_one_quadrature():
    j = TWO_PI * 40e6
    dev = star_device(1, j, omega=[TWO_PI * 5e9, 0.0])
    drive = resonant_itoffoli_drive(dev, TWO_PI * 3e9, quadrature="one")
    with pytest.warns(RWAWarning):
        drive_hamiltonian(dev, drive, 0.0)


def test_one_quadrature_quiet_in_regime():
    import warnings

    j = TWO_PI * 40e6
    dev = star_device(1, j, omega=[TWO_PI * 5e9, 0.0])
    drive = resonant_itoffoli_drive(dev, TWO_PI * 1e6, quadrature="one")
    with warnings.catch_warnings():
        warnings.simplefilter("error", RWAWarning)
        drive_hamiltonian(dev, drive, 0.0)
