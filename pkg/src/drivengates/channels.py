"""Quantum channels of the driven gates, with exact fast fidelity paths.

The comparison channel of a driven gate is the lab evolution over one
inversion time, viewed in the frame rotating with the diagonal of the
Hamiltonian:

    C_cmp(rho) = exp(+iDT) C_rot(rho) exp(-iDT)

where C_rot integrates the master equation under the time-independent
rotating-frame Hamiltonian H_rot and D = diag(H_rot).  Single-qubit
sigma_z frame generators leave the T1/T2 collapse operators invariant, so
this is exact, not an approximation.

Because the ideal gates are block diagonal over conserved labels (control
bitstrings for the i-Toffoli, the control sector for the fanout) and
relaxation only feeds excitation downward, the entanglement fidelity
against the ideal gate depends only on the diagonal blocks of the channel
superoperator, each of which is a small matrix exponential.  That fast
path is exact and is cross-checked against the generic matrix-unit sum in
the test suite.

Superoperators use row-major vec: vec(A rho B) = (A kron B^T) vec(rho).
"""

import numpy as np
from scipy.linalg import expm

from .evolution import lindblad_evolve, rotate_result
from .fidelity import average_from_entanglement, process_fidelity_from_trace
from .gates import flip_operator, ideal_cnotn, ideal_itoffoli
from .linalg import (
    SIGMA_LOWER,
    SIGMA_Z,
    bit_values,
    block,
    dag,
    subspace_indices,
)
from .model import all_subspaces, rotating_frame_hamiltonian

ID2 = np.eye(2, dtype=complex)


def hamiltonian_superop(h):
    """-i [H, .] as a matrix on vec'd density matrices."""
    d = h.shape[0]
    eye = np.eye(d)
    return -1j * (np.kron(h, eye) - np.kron(eye, h.T))


def dissipator_superop(l_op):
    """L . L^dag - (1/2){L^dag L, .} as a matrix on vec'd density matrices."""
    d = l_op.shape[0]
    eye = np.eye(d)
    ldl = dag(l_op) @ l_op
    return (
        np.kron(l_op, np.conj(l_op))
        - 0.5 * np.kron(ldl, eye)
        - 0.5 * np.kron(eye, ldl.T)
    )


def unitary_channel(u):
    """Channel conjugating by a fixed unitary."""

    def apply(rho):
        return u @ rho @ dag(u)

    return apply


def unitary_superop(u):
    """Matrix of rho -> u rho u^dag on vec'd density matrices."""
    return np.kron(u, np.conj(u))


def depolarizing_channel(d):
    """Completely depolarizing channel rho -> tr(rho) I/d."""

    def apply(rho):
        return np.trace(rho) * np.eye(d, dtype=complex) / d

    return apply


def _single_qubit_dissipator(noise):
    if noise is None:
        return np.zeros((4, 4), dtype=complex)
    return noise.relax_rate * dissipator_superop(SIGMA_LOWER) + (
        noise.dephase_rate / 2.0
    ) * dissipator_superop(SIGMA_Z)


class DrivenGateChannel:
    """Comparison channel of one driven gate over a fixed duration.

    Parameters
    ----------
    dev : DeviceModel
    drive : DriveSpec
        Two-quadrature drive; targets (0,) for the i-Toffoli layout or
        (1..n) for the fanout layout.
    noise : NoiseSpec or None
    duration : float
        Evolution time (the inversion time pi/2 rabi for the gates).
    rtol : float
        Integrator tolerance for the reference ``apply`` path (the fast
        fidelity path is closed-form and ignores it).
    """

    def __init__(self, dev, drive, noise, duration, rtol=1e-8):
        if drive.quadrature != "two":
            raise ValueError("channel evaluation requires the two-quadrature drive")
        self.dev = dev
        self.drive = drive
        self.noise = noise
        self.duration = duration
        self.rtol = rtol
        self.h_rot = rotating_frame_hamiltonian(dev, drive)
        self.d_diag = np.real(np.diag(self.h_rot))
        if drive.targets == (0,):
            self.kind = "itoffoli"
        elif drive.targets == tuple(range(1, dev.n_qubits)):
            j = dev.couplings
            if np.any(j[1:, 1:] != 0.0):
                raise ValueError("fanout fast path requires couplings to qubit 0 only")
            self.kind = "cnotn"
        else:
            self.kind = "generic"

    @property
    def dim(self):
        return self.dev.dim

    def apply(self, rho):
        """Reference path: integrate the master equation, then rotate.

        Quadratic in the full superoperator dimension; intended for small
        registers and for validating the fast fidelity path.
        """
        rho = np.asarray(rho, dtype=complex)
        if self.noise is None:
            u = _expm_unitary(self.h_rot, self.duration)
            out = u @ rho @ dag(u)
        else:
            out = lindblad_evolve(
                self.h_rot,
                self.noise,
                rho,
                self.duration,
                samples=2,
                rtol=self.rtol,
                atol=self.rtol * 1e-2,
            ).final
        return rotate_result(out, self.d_diag, self.duration)

    def propagator(self):
        """Rotated propagator (no-noise channels only)."""
        if self.noise is not None:
            raise ValueError("noisy channels have no propagator")
        u = _expm_unitary(self.h_rot, self.duration)
        return rotate_result(u, self.d_diag, self.duration)

    def entanglement_fidelity(self, goal):
        """Exact F_e against a goal unitary via the structured fast path."""
        if self.kind == "itoffoli":
            return _itoffoli_entanglement_fidelity(self, goal)
        if self.kind == "cnotn":
            return _cnotn_entanglement_fidelity(self, goal)
        raise ValueError("no fast path for this drive layout; use the generic metric")

    def average_fidelity(self, goal):
        return average_from_entanglement(self.entanglement_fidelity(goal), self.dim)


def _expm_unitary(h, t):
    from .linalg import unitary_exp

    return unitary_exp(h, t)


def _itoffoli_entanglement_fidelity(ch, goal):
    dev, noise, t = ch.dev, ch.noise, ch.duration
    n = dev.n_controls
    d = dev.dim
    bits = bit_values(n)
    g1 = noise.relax_rate if noise is not None else 0.0
    gphi = noise.dephase_rate if noise is not None else 0.0
    diss = _single_qubit_dissipator(noise)

    # Per control string: 2x2 rotating-frame block, rotated goal block.
    h_blocks = []
    v_blocks = []
    block_weight = 0.0
    for x in range(2 ** n):
        idx = subspace_indices(x, n)
        hb = block(ch.h_rot, idx)
        gb = block(goal, idx)
        block_weight += float(np.sum(np.abs(gb) ** 2))
        r = np.diag(np.exp(1j * ch.d_diag[list(idx)] * t))
        v_blocks.append(dag(r) @ gb)
        h_blocks.append(hb)
    if abs(block_weight - float(np.sum(np.abs(goal) ** 2))) > 1e-9:
        raise ValueError("goal is not block diagonal over control strings")

    total = 0.0 + 0.0j
    for xr in range(2 ** n):
        wr = bits[:, xr]
        for xc in range(2 ** n):
            wc = bits[:, xc]
            scalar = -np.sum(0.5 * g1 * (wr + wc) + gphi * (wr != wc))
            lb = (
                hamiltonian_superop_pair(h_blocks[xr], h_blocks[xc])
                + diss
                + scalar * np.eye(4)
            )
            sb = expm(t * lb)
            vb = np.kron(dag(v_blocks[xr]), v_blocks[xc].T)
            total += np.trace(vb @ sb)
    f_e = total / d ** 2
    if abs(f_e.imag) > 1e-9:
        raise RuntimeError("entanglement fidelity has imaginary part %.3e" % f_e.imag)
    return float(f_e.real)


def hamiltonian_superop_pair(h_row, h_col):
    """-i (H_row kron 1 - 1 kron H_col^T) for off-diagonal pair blocks."""
    d = h_row.shape[0]
    eye = np.eye(d)
    return -1j * (np.kron(h_row, eye) - np.kron(eye, h_col.T))


def _cnotn_sector_terms(ch, a):
    """Per-target 2x2 blocks and the qubit-0 scalar for control sector ``a``."""
    dev, drive = ch.dev, ch.drive
    terms = []
    for j in drive.targets:
        coef = 0.5 * (dev.couplings[j, 0] * (-1) ** a - drive.delta_for(j))
        hj = np.diag([coef, -coef]).astype(complex) + drive.rabi * flip_operator(
            drive.theta_for(j)
        )
        terms.append(hj)
    const = -0.5 * dev.omega[0] * (-1) ** a
    return terms, const


def _cnotn_entanglement_fidelity(ch, goal):
    dev, drive, noise, t = ch.dev, ch.drive, ch.noise, ch.duration
    n = dev.n_controls
    d = dev.dim
    g1 = noise.relax_rate if noise is not None else 0.0
    gphi = noise.dephase_rate if noise is not None else 0.0
    diss = _single_qubit_dissipator(noise)

    # goal must factor per sector: identity (a=0) / phased flips (a=1).
    ref = ideal_cnotn(n, [drive.theta_for(j) for j in drive.targets])
    if np.max(np.abs(goal - ref)) > 1e-12:
        raise ValueError("fanout fast path expects the matching ideal fanout goal")

    sector = {}
    for a in (0, 1):
        terms, const = _cnotn_sector_terms(ch, a)
        phase = np.exp(-1j * const * t) * ((-1j) ** n if a == 1 else 1.0)
        v_list = []
        for j, hj in zip(drive.targets, terms):
            coef = hj[0, 0].real
            r = np.diag(np.exp(1j * np.array([coef, -coef]) * t))
            g = flip_operator(drive.theta_for(j)) if a == 1 else ID2
            v_list.append(dag(r) @ g)
        sector[a] = (terms, phase, v_list)

    total = 0.0 + 0.0j
    for ar in (0, 1):
        terms_r, phase_r, v_r = sector[ar]
        for ac in (0, 1):
            terms_c, phase_c, v_c = sector[ac]
            scalar = -(0.5 * g1 * (ar + ac) + gphi * (ar != ac))
            contrib = np.exp(scalar * t) * np.conj(phase_r) * phase_c
            for k in range(n):
                lb = hamiltonian_superop_pair(terms_r[k], terms_c[k]) + diss
                mb = expm(t * lb)
                vb = np.kron(dag(v_r[k]), v_c[k].T)
                contrib *= np.trace(vb @ mb)
            total += contrib
    f_e = total / d ** 2
    if abs(f_e.imag) > 1e-9:
        raise RuntimeError("entanglement fidelity has imaginary part %.3e" % f_e.imag)
    return float(f_e.real)


# ---------------------------------------------------------------------------
# Trace-level fidelity of the simulated (rotated) propagator


def rotated_propagator_itoffoli(dev, drive, t):
    """Diag-rotated propagator of the qubit-0 driven gate (block diagonal).

    The comparison frame multiplies the propagator from the left by
    exp(+iDt), D being the diagonal of the frame Hamiltonian; this is the
    propagator of the rotated channel rho -> R C(rho) R^dag.
    """
    from .evolution import driven_propagator
    from .model import interaction_frame_generator, static_hamiltonian

    u = driven_propagator(dev, drive, t)
    # Diagonal of the interaction-frame Hamiltonian: +/- delta_x per subspace.
    g = interaction_frame_generator(dev, drive)
    rot = np.real(np.diag(static_hamiltonian(dev) - g))
    return np.exp(1j * rot * t)[:, None] * u


def trace_fidelity_itoffoli(dev, drive, t, goal=None):
    """Weighted |trace| fidelity of the simulated gate vs the ideal i-Toffoli."""
    n = dev.n_controls
    if goal is None:
        goal = ideal_itoffoli(n, drive.theta_for(0))
    u = rotated_propagator_itoffoli(dev, drive, t)
    total = 0.0
    for label in all_subspaces(n):
        idx = label.indices
        total += abs(np.trace(dag(block(goal, idx)) @ block(u, idx)))
    return total / dev.dim


def trace_fidelity_cnotn(dev, drive, t, goal=None):
    """Per-sector |trace| fidelity of the simulated fanout vs the ideal gate."""
    from .evolution import rotating_propagator

    n = dev.n_controls
    if goal is None:
        goal = ideal_cnotn(n, [drive.theta_for(j) for j in drive.targets])
    h_rot = rotating_frame_hamiltonian(dev, drive)
    rot = np.real(np.diag(h_rot))
    u = np.exp(1j * rot * t)[:, None] * rotating_propagator(dev, drive, t)
    d = dev.dim
    half = d // 2
    total = 0.0
    for sel in (np.arange(half), np.arange(half, d)):
        total += abs(np.trace(dag(block(goal, sel)) @ block(u, sel)))
    return total / d


def driven_gate_fidelities(dev, drive, noise, kind, duration=None):
    """(no-noise process fidelity, noisy process fidelity or None).

    ``kind`` is "itoffoli" or "cnotn"; duration defaults to the inversion
    time pi/(2 rabi).  Both entries are average gate fidelities: the
    no-noise value converts the exact trace fidelity through
    (d f^2 + 1)/(d + 1), the noisy value is channel based.  When
    ``noise`` is None the second entry is None.
    """
    t = duration if duration is not None else 0.5 * np.pi / drive.rabi
    if kind == "itoffoli":
        f_tr = trace_fidelity_itoffoli(dev, drive, t)
        goal = ideal_itoffoli(dev.n_controls, drive.theta_for(0))
    elif kind == "cnotn":
        f_tr = trace_fidelity_cnotn(dev, drive, t)
        goal = ideal_cnotn(
            dev.n_controls, [drive.theta_for(j) for j in drive.targets]
        )
    else:
        raise ValueError("unknown gate kind %r" % (kind,))
    f_unitary = process_fidelity_from_trace(f_tr, dev.dim)
    f_noisy = None
    if noise is not None:
        ch = DrivenGateChannel(dev, drive, noise, t)
        f_noisy = ch.average_fidelity(goal)
    return f_unitary, f_noisy
