"""Propagators, frames, recurrence times, and open-system evolution.

The driven problem is solved in rotating frames generated by diagonal
operators.  Conjugating by exp(+iGt) with the appropriate G renders the
two-quadrature drive time independent, so propagators come from a single
matrix exponential (or, per control subspace, from a closed-form 2x2
rotation).  The lab propagator is recovered as exp(-iGt) U_frame(t).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np
from scipy.integrate import solve_ivp

from .linalg import SIGMA_Z, bit_values, unitary_exp
from .model import (
    all_subspaces,
    drive_frame_generator,
    drive_hamiltonian,
    interaction_frame_generator,
    rotating_frame_hamiltonian,
    static_hamiltonian,
    subspace_detuning,
)


def analytic_subspace_propagator(delta, rabi, theta, t):
    """Closed-form propagator of a single 2x2 subspace block.

    Evolves under H = delta sigma_z + rabi (cos theta sigma_x
    + sin theta sigma_y) for time ``t``:

        U = cos(vt) 1 - i sin(vt)/v (v_vec . sigma),
        v_vec = (rabi cos theta, rabi sin theta, delta),  v = |v_vec|

    The v -> 0 limit is the identity.

    Returns
    -------
    (2, 2) complex ndarray
    """
    v = np.hypot(rabi, delta)
    h = np.array(
        [
            [delta, rabi * np.exp(-1j * theta)],
            [rabi * np.exp(1j * theta), -delta],
        ],
        dtype=complex,
    )
    # sin(vt)/v == t * sinc(vt/pi), finite and smooth at v = 0.
    return np.cos(v * t) * np.eye(2) - 1j * t * np.sinc(v * t / np.pi) * h


def _interaction_picture_ode(dev, drive, t, generator):
    """Time-ordered propagator in the frame of a diagonal ``generator``."""
    d = dev.dim
    gdiag = np.real(np.diag(generator))
    h_static = static_hamiltonian(dev)

    def rhs(tau, y):
        u = y.reshape(d, d)
        phases = np.exp(1j * gdiag * tau)
        h_lab = h_static + drive_hamiltonian(dev, drive, tau)
        h_frame = (phases[:, None] * h_lab * np.conj(phases)[None, :]) - np.diag(gdiag)
        return (-1j * h_frame @ u).ravel()

    sol = solve_ivp(
        rhs,
        (0.0, t),
        np.eye(d, dtype=complex).ravel(),
        method="DOP853",
        rtol=1e-12,
        atol=1e-12,
        dense_output=False,
    )
    if not sol.success:
        raise RuntimeError("propagator integration failed: %s" % sol.message)
    return sol.y[:, -1].reshape(d, d)


def driven_propagator(dev, drive, t):
    """Interaction-frame propagator for a drive on qubit 0.

    For the two-quadrature drive this is block diagonal over control
    subspaces with closed-form blocks; the one-quadrature drive falls back
    to adaptive time-ordered integration in the same frame.

    Returns
    -------
    (2**m, 2**m) complex ndarray
    """
    if drive.targets != (0,):
        raise ValueError("driven_propagator expects the drive on qubit 0")
    if drive.quadrature == "one":
        return _interaction_picture_ode(
            dev, drive, t, interaction_frame_generator(dev, drive)
        )
    u = np.zeros((dev.dim, dev.dim), dtype=complex)
    theta = drive.theta_for(0)
    for label in all_subspaces(dev.n_controls):
        i0, i1 = label.indices
        blk = analytic_subspace_propagator(
            subspace_detuning(dev, drive, label), drive.rabi, theta, t
        )
        u[np.ix_((i0, i1), (i0, i1))] = blk
    return u


def rotating_propagator(dev, drive, t):
    """exp(-i H_rot t) in the drive frame, any two-quadrature target set."""
    return unitary_exp(rotating_frame_hamiltonian(dev, drive), t)


def lab_frame_propagator(dev, drive, t):
    """Full lab-frame propagator of the driven device.

    Uses the qubit-0 interaction frame when the drive targets qubit 0 and
    the general drive frame otherwise; both constructions are exact.
    """
    if drive.targets == (0,):
        g = interaction_frame_generator(dev, drive)
        u_frame = driven_propagator(dev, drive, t)
    else:
        g = drive_frame_generator(dev, drive)
        u_frame = rotating_propagator(dev, drive, t)
    phases = np.exp(-1j * np.real(np.diag(g)) * t)
    return phases[:, None] * u_frame


def _ising_energies(dev):
    m = dev.n_qubits
    spins = 1.0 - 2.0 * bit_values(m)
    diag = np.zeros(2 ** m)
    for j in range(m):
        for k in range(j + 1, m):
            if dev.couplings[j, k] != 0.0:
                diag = diag + 0.5 * dev.couplings[j, k] * spins[j] * spins[k]
    return diag


def phase_recurrence_time(dev, rel_tol=1e-9):
    """Smallest T > 0 with exp(-i H_coupling T) proportional to identity.

    Works from the coupling spectrum: all pairwise eigenvalue differences
    of the zz-coupling Hamiltonian must be commensurate (within ``rel_tol``
    relative, with rational ratios of denominator at most 10**4), in which
    case T = 2 pi / gcd(differences).  Raises ValueError for incommensurate
    spectra or when all differences vanish.
    """
    energies = _ising_energies(dev)
    diffs = np.abs(energies[:, None] - energies[None, :]).ravel()
    scale = max(np.max(np.abs(energies)), 1.0)
    vals = np.unique(diffs[diffs > 1e-12 * scale])
    if vals.size == 0:
        raise ValueError("coupling spectrum is fully degenerate; no finite recurrence")
    base = vals[0]
    fracs = []
    for v in vals:
        frac = Fraction(v / base).limit_denominator(10 ** 4)
        if frac == 0 or abs(v / base - float(frac)) > rel_tol * (v / base):
            raise ValueError("eigenvalue differences are not commensurate")
        fracs.append(frac)
    denom_lcm = 1
    for f in fracs:
        denom_lcm = lcm(denom_lcm, f.denominator)
    num_gcd = 0
    for f in fracs:
        num_gcd = gcd(num_gcd, f.numerator * (denom_lcm // f.denominator))
    g = base * num_gcd / denom_lcm
    return 2.0 * np.pi / g


# ---------------------------------------------------------------------------
# Open-system evolution


@dataclass(frozen=True)
class NoiseSpec:
    """Uniform single-qubit relaxation and dephasing times (seconds)."""

    t1: float
    t2: float

    def __post_init__(self):
        if self.t1 <= 0 or self.t2 <= 0:
            raise ValueError("T1 and T2 must be positive")
        if self.t2 > 2.0 * self.t1 + 1e-15 * self.t1:
            raise ValueError("T2 cannot exceed 2 T1")

    @property
    def relax_rate(self):
        return 1.0 / self.t1

    @property
    def dephase_rate(self):
        """Pure dephasing rate gamma_phi = 1/T2 - 1/(2 T1)."""
        return max(1.0 / self.t2 - 0.5 / self.t1, 0.0)


@dataclass
class Trajectory:
    """Sampled density-matrix evolution."""

    times: np.ndarray
    states: list

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("trajectory times must be strictly increasing")
        if len(self.states) != self.times.size:
            raise ValueError("one state per sample time required")

    @property
    def final(self):
        return self.states[-1]


def collapse_operators(noise, m):
    """Dense collapse operators for uniform T1/T2 noise on ``m`` qubits.

    One relaxation operator sqrt(1/T1) |0><1| per qubit, plus one dephasing
    operator sqrt(gamma_phi / 2) sigma_z per qubit when gamma_phi > 0.
    """
    from .linalg import SIGMA_LOWER, embed

    ops = []
    for j in range(m):
        ops.append(np.sqrt(noise.relax_rate) * embed(SIGMA_LOWER, j, m))
    if noise.dephase_rate > 0.0:
        for j in range(m):
            ops.append(np.sqrt(noise.dephase_rate / 2.0) * embed(SIGMA_Z, j, m))
    return ops


def _decay_matrix(noise, m):
    """Elementwise damping rates R[r, c] of the uniform-noise dissipator."""
    bits = bit_values(m)
    g1 = noise.relax_rate
    gphi = noise.dephase_rate
    r = np.zeros((2 ** m, 2 ** m))
    for j in range(m):
        br = bits[j][:, None]
        bc = bits[j][None, :]
        r += 0.5 * g1 * (br + bc) + gphi * (br != bc)
    return r


def lindblad_evolve(hsource, noise, rho0, t_end, samples=50, rtol=1e-8, atol=1e-10):
    """Integrate the Lindblad master equation for uniform T1/T2 noise.

    Parameters
    ----------
    hsource : ndarray or callable
        Hamiltonian; either a constant matrix or a function of time.
    noise : NoiseSpec or None
        None integrates the closed-system von Neumann equation.
    rho0 : ndarray
        Initial density matrix.
    t_end : float
        Final time (> 0).
    samples : int
        Number of sample times, evenly spaced over [0, t_end].

    Returns
    -------
    Trajectory
    """
    rho0 = np.asarray(rho0, dtype=complex)
    d = rho0.shape[0]
    m = int(np.log2(d))
    if 2 ** m != d:
        raise ValueError("state dimension must be a power of two")
    if t_end <= 0.0:
        raise ValueError("t_end must be positive")
    constant = not callable(hsource)
    h_const = np.asarray(hsource, dtype=complex) if constant else None

    if noise is not None:
        decay = _decay_matrix(noise, m)
        g1 = noise.relax_rate
        feeders = []
        for j in range(m):
            stride = 2 ** (m - 1 - j)
            idx1 = np.where(bit_values(m)[j] == 1)[0]
            feeders.append((idx1, idx1 - stride))
    else:
        decay = None

    def rhs(t, y):
        rho = y.reshape(d, d)
        h = h_const if constant else np.asarray(hsource(t), dtype=complex)
        drho = -1j * (h @ rho - rho @ h)
        if decay is not None:
            drho = drho - decay * rho
            for idx1, idx0 in feeders:
                drho[np.ix_(idx0, idx0)] += g1 * rho[np.ix_(idx1, idx1)]
        return drho.ravel()

    t_eval = np.linspace(0.0, t_end, samples)
    sol = solve_ivp(
        rhs,
        (0.0, t_end),
        rho0.ravel(),
        method="DOP853",
        t_eval=t_eval,
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise RuntimeError("master-equation integration failed: %s" % sol.message)
    states = [sol.y[:, k].reshape(d, d) for k in range(sol.y.shape[1])]
    for s in states:
        drift = abs(np.trace(s) - np.trace(rho0))
        if drift > 1e-7:
            raise RuntimeError("trace drift %.3e exceeds tolerance" % drift)
    return Trajectory(times=t_eval, states=states)


def rotate_result(obj, generator, t):
    """Conjugate a state or operator by exp(+i generator t).

    ``generator`` must be diagonal (matrix or 1-D array of diagonal
    entries).  Vectors transform as psi -> exp(+iGt) psi, matrices as
    A -> exp(+iGt) A exp(-iGt).
    """
    gen = np.asarray(generator)
    if gen.ndim == 2:
        offdiag = gen - np.diag(np.diag(gen))
        if np.max(np.abs(offdiag)) > 1e-12 * max(1.0, np.max(np.abs(gen))):
            raise ValueError("frame generator must be diagonal")
        gdiag = np.real(np.diag(gen))
    else:
        gdiag = np.real(gen)
    phases = np.exp(1j * gdiag * t)
    obj = np.asarray(obj, dtype=complex)
    if obj.ndim == 1:
        return phases * obj
    return phases[:, None] * obj * np.conj(phases)[None, :]
