"""Device and drive models for Ising-coupled qubit registers.

The device is a register of ``n_controls + 1`` qubits with longitudinal
(zz) couplings.  The static Hamiltonian is diagonal in the computational
basis:

    H_static = -(1/2) sum_j omega_j sigma_z_j
               + (1/2) sum_{j<k} J_jk sigma_z_j sigma_z_k

For the single-step gates, qubit 0 is the driven target and qubits 1..n
are controls coupled to it in a star layout.  Each control bitstring x
then selects a two-dimensional subspace {|0,x>, |1,x>} whose transition
frequency is shifted from omega_0 by the subspace gap

    Delta_x = sum_j J_j0 (-1)^{x_j}

so a drive resonant with one subspace acts conditionally on the controls.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    SIGMA_X,
    SIGMA_Y,
    bit_values,
    embed,
    index_to_bits,
    subspace_indices,
)

# Desk-scale guard: registers beyond this size are rejected unless the
# device is constructed with a larger max_qubits.
DEFAULT_MAX_QUBITS = 8


class RWAWarning(UserWarning):
    """Drive amplitude outside the rotating-wave validity regime."""


@dataclass(frozen=True, eq=False)
class DeviceModel:
    """Static description of a register.

    Parameters
    ----------
    n_controls : int
        Number of qubits besides qubit 0 (register size is n_controls + 1).
    omega : array_like
        Qubit splittings, angular frequency, length n_controls + 1.
    couplings : array_like
        Symmetric zz-coupling matrix, angular frequency, zero diagonal.
    max_qubits : int
        Guard on register size (default 8 qubits total).
    """

    n_controls: int
    omega: np.ndarray
    couplings: np.ndarray
    max_qubits: int = DEFAULT_MAX_QUBITS

    def __post_init__(self):
        m = self.n_controls + 1
        if self.n_controls < 1:
            raise ValueError("need at least one control qubit")
        if m > self.max_qubits:
            raise ValueError(
                "register of %d qubits exceeds the desk-scale guard (%d); "
                "raise max_qubits explicitly to override" % (m, self.max_qubits)
            )
        omega = np.asarray(self.omega, dtype=float)
        if omega.shape == ():
            omega = np.full(m, float(omega))
        if omega.shape != (m,):
            raise ValueError("omega must have length %d" % m)
        j = np.asarray(self.couplings, dtype=float)
        if j.shape != (m, m):
            raise ValueError("couplings must be %d x %d" % (m, m))
        scale = max(1.0, np.max(np.abs(j)))
        if np.max(np.abs(j - j.T)) > 1e-12 * scale:
            raise ValueError("couplings must be symmetric")
        if np.any(np.diag(j) != 0.0):
            raise ValueError("couplings must have an exactly zero diagonal")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "couplings", j)

    @property
    def n_qubits(self):
        return self.n_controls + 1

    @property
    def dim(self):
        return 2 ** (self.n_controls + 1)


def star_couplings(m, center, leaves, strength):
    """Coupling matrix with ``center`` coupled to each qubit in ``leaves``."""
    j = np.zeros((m, m))
    for leaf in leaves:
        if leaf == center:
            raise ValueError("star center cannot couple to itself")
        j[center, leaf] = j[leaf, center] = strength
    return j


def star_device(n_controls, coupling, omega=0.0, max_qubits=DEFAULT_MAX_QUBITS):
    """Device with qubit 0 coupled equally to every control.

    ``omega`` may be a scalar (applied to all qubits) or a length
    ``n_controls + 1`` sequence.
    """
    m = n_controls + 1
    j = star_couplings(m, 0, range(1, m), coupling)
    return DeviceModel(n_controls=n_controls, omega=omega, couplings=j, max_qubits=max_qubits)


@dataclass(frozen=True)
class DriveSpec:
    """Transverse drive applied to one or more qubits.

    Parameters
    ----------
    rabi : float
        Drive amplitude (angular frequency), > 0.
    targets : tuple of int
        Driven qubit positions.
    delta : float or tuple
        Drive detuning per target (scalar broadcast to all targets).  The
        drive on target j oscillates at delta_j - omega_j in the lab frame,
        i.e. ``delta`` is quoted relative to the bare splitting.
    theta : float or tuple
        Drive phase per target (scalar broadcast).
    quadrature : str
        "two" (default) for the circular two-quadrature drive, "one" for a
        single-quadrature cosine drive (RWA regime; see drive_hamiltonian).
    """

    rabi: float
    targets: tuple = (0,)
    delta: object = 0.0
    theta: object = 0.0
    quadrature: str = "two"

    def __post_init__(self):
        if self.rabi <= 0:
            raise ValueError("rabi amplitude must be positive")
        targets = tuple(int(t) for t in self.targets)
        if len(targets) == 0:
            raise ValueError("drive needs at least one target")
        if len(set(targets)) != len(targets):
            raise ValueError("drive targets must be distinct")
        if self.quadrature not in ("two", "one"):
            raise ValueError("quadrature must be 'two' or 'one'")
        object.__setattr__(self, "targets", targets)

    def delta_for(self, target):
        return _per_target(self.delta, self.targets, target)

    def theta_for(self, target):
        return _per_target(self.theta, self.targets, target)


def _per_target(value, targets, target):
    if np.ndim(value) == 0:
        return float(value)
    seq = np.asarray(value, dtype=float)
    if seq.shape != (len(targets),):
        raise ValueError("per-target values must match the number of targets")
    return float(seq[targets.index(target)])


@dataclass(frozen=True)
class SubspaceLabel:
    """Control bitstring x on n controls; bit j of x is control qubit j+1."""

    x: int
    n: int

    def __post_init__(self):
        if not 0 <= self.x < 2 ** self.n:
            raise ValueError("control string %d out of range" % self.x)

    @property
    def bits(self):
        return tuple((self.x >> (self.n - 1 - k)) & 1 for k in range(self.n))

    @property
    def hamming(self):
        return bin(self.x).count("1")

    @property
    def indices(self):
        return subspace_indices(self.x, self.n)


def all_subspaces(n):
    return [SubspaceLabel(x, n) for x in range(2 ** n)]


def static_energies(dev):
    """Diagonal of the static Hamiltonian as a length-2**m real array."""
    m = dev.n_qubits
    spins = 1.0 - 2.0 * bit_values(m)  # +1 for |0>, -1 for |1>
    diag = -0.5 * dev.omega @ spins
    for j in range(m):
        for k in range(j + 1, m):
            if dev.couplings[j, k] != 0.0:
                diag = diag + 0.5 * dev.couplings[j, k] * spins[j] * spins[k]
    return diag


def static_hamiltonian(dev):
    """Static device Hamiltonian (diagonal dense matrix)."""
    return np.diag(static_energies(dev)).astype(complex)


def subspace_gap(dev, label):
    """Shift of the qubit-0 transition for control string ``label``.

    Accepts a SubspaceLabel or a plain control-string integer.  Equal to
    E(|0,x>) - E(|1,x>) + omega_0.
    """
    x = label.x if isinstance(label, SubspaceLabel) else int(label)
    bits = index_to_bits(x, dev.n_controls)
    return float(sum(dev.couplings[j + 1, 0] * (-1) ** bits[j] for j in range(dev.n_controls)))


def detuning_for_weight(coupling, n_controls, hamming):
    """Half-gap delta_q = J (n - q) for a uniform star, by Hamming weight q.

    This is (Delta_x - Delta_{all ones}) / 2 for any x of weight q when all
    couplings to qubit 0 equal ``coupling``.
    """
    return coupling * (n_controls - hamming)


def subspace_detuning(dev, drive, label):
    """Half detuning (Delta_x - delta_0) / 2 seen by subspace ``label``."""
    delta0 = drive.delta_for(0)
    return 0.5 * (subspace_gap(dev, label) - delta0)


def resonant_itoffoli_drive(dev, rabi, theta=0.0, quadrature="two", target=0):
    """Drive on ``target`` resonant with its all-partners-excited condition.

    Every qubit coupled to ``target`` acts as a control; the drive detuning
    is the target's transition shift when all of them sit in |1>, i.e.
    minus the sum of the couplings to the target.
    """
    delta = -float(sum(dev.couplings[j, target] for j in range(dev.n_qubits) if j != target))
    return DriveSpec(
        rabi=rabi,
        targets=(target,),
        delta=delta,
        theta=theta,
        quadrature=quadrature,
    )


def resonant_fanout_drive(dev, rabi, control=0, theta=0.0):
    """Drive on every qubit coupled to ``control``, each resonant with
    the control-excited condition (detuning -J_{j,control})."""
    targets = tuple(
        j for j in range(dev.n_qubits) if j != control and dev.couplings[j, control] != 0.0
    )
    if not targets:
        raise ValueError("control qubit %d has no coupled partners" % control)
    deltas = tuple(-dev.couplings[j, control] for j in targets)
    thetas = theta if np.ndim(theta) == 0 else tuple(theta)
    return DriveSpec(rabi=rabi, targets=targets, delta=deltas, theta=thetas)


def _check_rwa_regime(dev, drive):
    """Warn if a one-quadrature drive amplitude leaves the RWA regime."""
    scales = [abs(dev.omega[t]) for t in drive.targets]
    scales += [abs(drive.delta_for(t)) for t in drive.targets]
    if drive.targets == (0,):
        scales += [abs(subspace_gap(dev, s)) for s in all_subspaces(dev.n_controls)]
    floor = min(s for s in scales if s > 0.0) if any(s > 0.0 for s in scales) else 0.0
    if floor == 0.0 or drive.rabi > floor / 10.0:
        warnings.warn(
            "one-quadrature drive amplitude %.3g exceeds a tenth of the smallest "
            "relevant frequency %.3g; counter-rotating terms are not negligible"
            % (drive.rabi, floor),
            RWAWarning,
            stacklevel=3,
        )


def drive_hamiltonian(dev, drive, t):
    """Lab-frame drive Hamiltonian at time ``t``.

    Two-quadrature mode applies, on each target j,

        rabi * [cos((delta_j - omega_j) t + theta_j) sigma_x_j
                + sin((delta_j - omega_j) t + theta_j) sigma_y_j]

    One-quadrature mode keeps only the sigma_x term (same amplitude), so
    its co-rotating component carries rabi / 2: doubling the amplitude
    recovers the two-quadrature rotation in the rotating-wave regime.  It
    emits RWAWarning when the amplitude is not small against the relevant
    frequencies.
    """
    m = dev.n_qubits
    if drive.quadrature == "one":
        _check_rwa_regime(dev, drive)
    h = np.zeros((dev.dim, dev.dim), dtype=complex)
    for j in drive.targets:
        phase = (drive.delta_for(j) - dev.omega[j]) * t + drive.theta_for(j)
        h += drive.rabi * np.cos(phase) * embed(SIGMA_X, j, m)
        if drive.quadrature == "two":
            h += drive.rabi * np.sin(phase) * embed(SIGMA_Y, j, m)
    return h


def interaction_hamiltonian(dev, drive, label):
    """Time-independent 2x2 block seen by subspace ``label`` under a
    two-quadrature drive on qubit 0:

        delta_x sigma_z + rabi (cos theta sigma_x + sin theta sigma_y)

    with delta_x = (Delta_x - delta_0) / 2.
    """
    if drive.targets != (0,):
        raise ValueError("subspace blocks are defined for a drive on qubit 0 only")
    d = subspace_detuning(dev, drive, label)
    th = drive.theta_for(0)
    return np.array(
        [
            [d, drive.rabi * np.exp(-1j * th)],
            [drive.rabi * np.exp(1j * th), -d],
        ],
        dtype=complex,
    )


def interaction_frame_generator(dev, drive):
    """Diagonal generator G of the interaction frame for a drive on qubit 0.

    exp(+iGt) conjugation removes both the fast qubit-0 precession and the
    static subspace energies, leaving the time-independent blocks of
    interaction_hamiltonian.  Diagonal entries for |0,x> and |1,x> differ
    by delta_0 - omega_0.
    """
    if drive.targets != (0,):
        raise ValueError("the interaction frame is defined for a drive on qubit 0 only")
    n = dev.n_controls
    energies = static_energies(dev)
    g = np.zeros(dev.dim)
    half = 0.5 * (drive.delta_for(0) - dev.omega[0])
    for x in range(2 ** n):
        i0, i1 = subspace_indices(x, n)
        mean = 0.5 * (energies[i0] + energies[i1])
        g[i0] = mean + half
        g[i1] = mean - half
    return np.diag(g).astype(complex)


def drive_frame_generator(dev, drive):
    """Diagonal generator sum_j ((delta_j - omega_j)/2) sigma_z_j over targets.

    The frame exp(+iGt) makes any two-quadrature drive time independent
    while leaving single-qubit relaxation and dephasing operators invariant
    up to phases.
    """
    m = dev.n_qubits
    bits = bit_values(m)
    g = np.zeros(dev.dim)
    for j in drive.targets:
        g += 0.5 * (drive.delta_for(j) - dev.omega[j]) * (1.0 - 2.0 * bits[j])
    return np.diag(g).astype(complex)


def rotating_frame_hamiltonian(dev, drive):
    """Time-independent Hamiltonian in the drive frame.

    H_rot = H_static - G1 + sum_j rabi (cos theta_j sigma_x_j
                                        + sin theta_j sigma_y_j)

    with G1 = drive_frame_generator.  Valid for two-quadrature drives on
    any target set; the lab propagator is exp(-i G1 t) exp(-i H_rot t).
    """
    if drive.quadrature != "two":
        raise ValueError("the drive frame is exact for two-quadrature drives only")
    m = dev.n_qubits
    h = static_hamiltonian(dev) - drive_frame_generator(dev, drive)
    for j in drive.targets:
        th = drive.theta_for(j)
        h += drive.rabi * (
            np.cos(th) * embed(SIGMA_X, j, m) + np.sin(th) * embed(SIGMA_Y, j, m)
        )
    return h
