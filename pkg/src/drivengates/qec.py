"""Error-correction demonstrations built from the single-step gates.

Two circuits are modeled: the three-qubit bit-flip code (encode with a
single fan-out gate, inject an optional flip, decode, correct with an
i-Toffoli) and the Steane-code encoder (one two-target and three
three-target fan-out gates on seven qubits).

A circuit is a sequence of drive windows.  During a window the register
evolves under its reconfigured couplings and a resonant drive for one
period T = pi / (2 rabi); coupling reconfiguration between windows is
instantaneous.  Each window is scored and chained in the frame that
rotates with the diagonal of the window's drive-frame Hamiltonian, so
the state handed to the next window is the computation-frame state and
the ideal limit of a window is exactly its target gate.

Open-system propagation over a window is exact: the register splits into
coupling-graph blocks, each block's Lindblad generator is exponentiated
once, and idle qubits only pick up single-qubit decay maps.
"""

from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import expm

from .channels import dissipator_superop, hamiltonian_superop, unitary_superop
from .evolution import NoiseSpec, collapse_operators, lindblad_evolve, rotate_result
from .gates import cnotn_on, itoffoli_on
from .linalg import (
    SIGMA_X,
    apply_superop_on_sites,
    basis_state,
    bit_values,
    dag,
    embed,
    expand_operator,
    kron_all,
    partial_trace,
    unitary_exp,
)
from .model import (
    DeviceModel,
    DriveSpec,
    resonant_fanout_drive,
    resonant_itoffoli_drive,
    rotating_frame_hamiltonian,
    star_couplings,
    static_hamiltonian,
)

TWO_PI = 2.0 * np.pi

# Six-state projective 2-design: |0>, |1>, |+>, |->, |+i>, |-i> as
# (alpha, beta) amplitude pairs.  Equal-weight averages over these states
# reproduce the Haar average of any integrand quadratic in the state and
# quadratic in its conjugate.
_R = 1.0 / np.sqrt(2.0)
BLOCH_DESIGN = (
    (1.0, 0.0),
    (0.0, 1.0),
    (_R, _R),
    (_R, -_R),
    (_R, 1j * _R),
    (_R, -1j * _R),
)


@dataclass(frozen=True, eq=False)
class GateWindow:
    """One drive period of a reconfigured register.

    ``device`` carries the couplings active during the window, ``drive``
    the resonant drive, and ``ideal`` the target gate on the full
    register.

    With ``compensate`` on (the default), each driven target's
    deterministic off-resonant z-phase (the light shift accumulated when
    its coupled partners sit in |0>) is canceled by symmetric virtual-z
    half rotations before and after the window.  These are free frame
    updates of the target's drive phase; they leave resonant inversions
    untouched and remove the phase error of the idle branch.
    """

    device: DeviceModel
    drive: DriveSpec
    ideal: np.ndarray
    compensate: bool = True

    def __post_init__(self):
        if self.drive.quadrature != "two":
            raise ValueError("gate windows require the two-quadrature drive")
        d = self.device.dim
        ideal = np.asarray(self.ideal, dtype=complex)
        if ideal.shape != (d, d):
            raise ValueError("ideal gate must match the register dimension")
        object.__setattr__(self, "ideal", ideal)

    @property
    def n_qubits(self):
        return self.device.n_qubits

    @property
    def duration(self):
        """One drive period, pi / (2 rabi)."""
        return np.pi / (2.0 * self.drive.rabi)


def stark_phase(detuning, rabi, t):
    """Deterministic z-phase of an off-resonant drive block.

    The gate-equivalent propagator of a block with detuning c is
    exp(+i c t sigma_z) exp(-i (c sigma_z + rabi sigma_x) t); its |0>
    diagonal element carries the phase returned here (its negative
    argument), which is the integrated light shift of the driven qubit.
    """
    v = np.hypot(rabi, detuning)
    z = np.exp(1j * detuning * t) * (np.cos(v * t) - 1j * (detuning / v) * np.sin(v * t))
    return -float(np.angle(z))


def compensation_phases(window):
    """Per-qubit virtual-z angles canceling the targets' light shifts.

    Each driven target is referenced to the configuration with all of its
    coupled partners in |0>; undriven qubits get no rotation.
    """
    dev = window.device
    drive = window.drive
    t = window.duration
    phases = np.zeros(dev.n_qubits)
    if not window.compensate:
        return phases
    for j in drive.targets:
        c = 0.5 * (float(np.sum(dev.couplings[j, :])) - drive.delta_for(j))
        phases[j] = stark_phase(c, drive.rabi, t)
    return phases


def _half_rotation(phases, sites):
    """Diagonal of the virtual-z half rotation on the given sites."""
    k = len(sites)
    spins = 1.0 - 2.0 * bit_values(k)
    return np.exp(0.5j * np.asarray(phases)[list(sites)] @ spins)


def _coupling_blocks(window):
    """Connected components of the window's coupling graph, ascending."""
    m = window.n_qubits
    j = window.device.couplings
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(m):
        for b in range(a + 1, m):
            if j[a, b] != 0.0:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
    groups = {}
    for q in range(m):
        groups.setdefault(find(q), []).append(q)
    return [tuple(sorted(g)) for g in sorted(groups.values())]


def _block_rotating_hamiltonian(window, sites):
    """Drive-frame Hamiltonian of one coupling block.

    The diagonal equals the block's static-minus-frame generator, so
    rotating the block propagator by exp(+i diag t) yields the
    gate-equivalent (computation-frame) evolution.
    """
    dev = window.device
    drive = window.drive
    targets_in = [t for t in drive.targets if t in sites]
    if len(sites) == 1:
        (q,) = sites
        if not targets_in:
            return -0.5 * dev.omega[q] * np.diag([1.0, -1.0]).astype(complex)
        delta = drive.delta_for(q)
        th = drive.theta_for(q)
        off = drive.rabi * np.exp(-1j * th)
        return np.array([[-0.5 * delta, off], [np.conj(off), 0.5 * delta]], dtype=complex)
    idx = np.ix_(sites, sites)
    sub = DeviceModel(
        n_controls=len(sites) - 1,
        omega=dev.omega[list(sites)],
        couplings=dev.couplings[idx],
        max_qubits=dev.max_qubits,
    )
    if not targets_in:
        return static_hamiltonian(sub)
    sub_drive = DriveSpec(
        rabi=drive.rabi,
        targets=tuple(sites.index(t) for t in targets_in),
        delta=tuple(drive.delta_for(t) for t in targets_in),
        theta=tuple(drive.theta_for(t) for t in targets_in),
    )
    return rotating_frame_hamiltonian(sub, sub_drive)


def effective_window_unitary(window):
    """Gate-equivalent unitary of one window (computation frame).

    Product over coupling blocks of exp(+i D t) exp(-i H_rot t) with D the
    diagonal of the block's drive-frame Hamiltonian, sandwiched by the
    virtual-z compensation when enabled.
    """
    m = window.n_qubits
    t = window.duration
    comp = compensation_phases(window)
    u = np.eye(2 ** m, dtype=complex)
    for sites in _coupling_blocks(window):
        h = _block_rotating_hamiltonian(window, sites)
        ub = unitary_exp(h, t)
        ub = np.exp(1j * np.real(np.diag(h)) * t)[:, None] * ub
        zh = _half_rotation(comp, sites)
        ub = zh[:, None] * ub * zh[None, :]
        u = expand_operator(ub, sites, m) @ u
    return u


def _window_block_channels(window, noise):
    """Per-block computation-frame superoperators of one noisy window."""
    t = window.duration
    comp = compensation_phases(window)
    out = []
    for sites in _coupling_blocks(window):
        h = _block_rotating_hamiltonian(window, sites)
        gen = hamiltonian_superop(h)
        for op in collapse_operators(noise, len(sites)):
            gen = gen + dissipator_superop(op)
        chan = expm(t * gen)
        rot = unitary_superop(np.diag(np.exp(1j * np.real(np.diag(h)) * t)))
        zh = unitary_superop(np.diag(_half_rotation(comp, sites)))
        out.append((sites, zh @ rot @ chan @ zh))
    return out


def apply_window(window, state, noise=None, method="exact"):
    """Propagate a state through one drive window (computation frame).

    Without noise the state may be a vector or a density matrix and the
    gate-equivalent unitary is applied.  With noise the state must be a
    density matrix; ``method`` "exact" exponentiates per-block Lindblad
    generators, "ode" integrates the full-register master equation (the
    two agree and the latter serves as a cross-check).
    """
    state = np.asarray(state, dtype=complex)
    if noise is None:
        u = effective_window_unitary(window)
        if state.ndim == 1:
            return u @ state
        return u @ state @ dag(u)
    if state.ndim != 2:
        raise ValueError("noisy propagation needs a density matrix")
    if method == "exact":
        for sites, chan in _window_block_channels(window, noise):
            state = apply_superop_on_sites(chan, sites, state, window.n_qubits)
        return state
    if method == "ode":
        h = rotating_frame_hamiltonian(window.device, window.drive)
        t = window.duration
        zv = _half_rotation(compensation_phases(window), tuple(range(window.n_qubits)))
        state = zv[:, None] * state * np.conj(zv)[None, :]
        traj = lindblad_evolve(h, noise, state, t, samples=2)
        out = rotate_result(traj.final, np.real(np.diag(h)), t)
        return zv[:, None] * out * np.conj(zv)[None, :]
    raise ValueError("unknown method %r" % (method,))


def run_windows(steps, state, gate_mode="driven", noise=None, method="exact"):
    """Evolve a state through gate windows and instantaneous operations.

    Each step is a GateWindow or a plain unitary matrix (applied
    instantaneously, e.g. an injected error).  ``gate_mode`` "ideal"
    replaces every window by its target gate; "driven" propagates the
    driven evolution.  Noise requires driven mode and promotes vector
    input to a density matrix.
    """
    if gate_mode not in ("ideal", "driven"):
        raise ValueError("gate_mode must be 'ideal' or 'driven'")
    if noise is not None and gate_mode == "ideal":
        raise ValueError("noise is modeled for driven gates only")
    state = np.asarray(state, dtype=complex)
    if noise is not None and state.ndim == 1:
        state = np.outer(state, np.conj(state))
    for step in steps:
        if isinstance(step, GateWindow):
            if gate_mode == "ideal":
                u = step.ideal
            else:
                state = apply_window(step, state, noise=noise, method=method)
                continue
        else:
            u = np.asarray(step, dtype=complex)
        state = u @ state if state.ndim == 1 else u @ state @ dag(u)
    return state


# ---------------------------------------------------------------------------
# Code runs


@dataclass(frozen=True)
class CodeRun:
    """Parameters of one error-correction circuit execution.

    ``input`` holds the data-qubit amplitudes (alpha, beta) of
    psi = alpha |0> + beta |1>.  ``error_site`` selects the register
    qubit (1-based label) hit by a bit flip after encoding, or None.
    ``drive_ratio`` is J / rabi; each driven window lasts one period.
    ``compensate`` toggles the virtual-z light-shift compensation of the
    drive windows (see GateWindow); turning it off runs the bare drive
    sequence.
    """

    gate_mode: str = "driven"
    noise: NoiseSpec = None
    error_site: int = None
    input: tuple = (1.0, 0.0)
    coupling: float = TWO_PI * 40e6
    drive_ratio: float = 8.0
    compensate: bool = True

    def __post_init__(self):
        if self.gate_mode not in ("ideal", "driven"):
            raise ValueError("gate_mode must be 'ideal' or 'driven'")
        if self.coupling <= 0.0 or self.drive_ratio <= 0.0:
            raise ValueError("coupling and drive ratio must be positive")
        alpha, beta = self.input
        if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > 1e-8:
            raise ValueError("input amplitudes must be normalized")
        object.__setattr__(self, "input", (complex(alpha), complex(beta)))

    @property
    def rabi(self):
        return self.coupling / self.drive_ratio

    def input_state(self):
        alpha, beta = self.input
        return np.array([alpha, beta], dtype=complex)


def bitflip_schedule(coupling, rabi, compensate=True):
    """Drive windows of the three-qubit bit-flip circuit.

    Register order (q1, q2, q3) with the data qubit q3 last; q3 is
    coupled to q1 and q2 in every window.  Windows: encode (fan-out from
    q3), decode (same gate), correct (i-Toffoli on q3).
    """
    j = star_couplings(3, 2, (0, 1), coupling)
    dev = DeviceModel(n_controls=2, omega=0.0, couplings=j)
    fan = GateWindow(
        device=dev,
        drive=resonant_fanout_drive(dev, rabi, control=2),
        ideal=cnotn_on(3, 2, (0, 1)),
        compensate=compensate,
    )
    correct = GateWindow(
        device=dev,
        drive=resonant_itoffoli_drive(dev, rabi, target=2),
        ideal=itoffoli_on(3, (0, 1), 2),
        compensate=compensate,
    )
    return (fan, fan, correct)


def run_bitflip_code(run):
    """Execute the bit-flip circuit and return the data-qubit fidelity.

    Qubits q1, q2 start in |0>, q3 carries the input state.  The circuit
    encodes, optionally flips ``error_site``, decodes, and corrects; the
    returned value is the overlap of q3's reduced state with the input
    (insensitive to the i-Toffoli's conditional phase).
    """
    if run.error_site is not None and run.error_site not in (1, 2, 3):
        raise ValueError("error_site must be a register label 1..3 or None")
    psi_q = run.input_state()
    psi0 = kron_all([basis_state(2, 0), basis_state(2, 0), psi_q])
    encode, decode, correct = bitflip_schedule(run.coupling, run.rabi, run.compensate)
    steps = [encode]
    if run.error_site is not None:
        steps.append(embed(SIGMA_X, run.error_site - 1, 3))
    steps += [decode, correct]
    out = run_windows(steps, psi0, gate_mode=run.gate_mode, noise=run.noise)
    if out.ndim == 1:
        out = np.outer(out, np.conj(out))
    reduced = partial_trace(out, keep=(2,), m=3)
    return float(np.real(np.conj(psi_q) @ reduced @ psi_q))


def bitflip_fidelity(run):
    """Bloch-sphere-averaged bit-flip fidelity for one error case."""
    return bloch_average(lambda amps: run_bitflip_code(replace(run, input=amps)))


# ---------------------------------------------------------------------------
# Steane encoder

# Register order (q1, q2, q3, data, q4, q5, q6) -> positions 0..6.  Each
# window is (control position, target positions): one two-target and
# three three-target fan-out gates.
STEANE_LAYOUT = (
    (3, (4, 5)),
    (2, (3, 4, 6)),
    (1, (3, 5, 6)),
    (0, (4, 5, 6)),
)

# The logical pair produced by this encoder, eight terms each with
# amplitude 1/(2 sqrt 2); bit order matches the register order above.
_LOGICAL_ZERO_TERMS = (
    ("0000000", 1.0),
    ("0101011", 1j),
    ("0011101", 1j),
    ("0110110", -1.0),
    ("1000111", 1j),
    ("1101100", -1.0),
    ("1011010", -1.0),
    ("1110001", -1j),
)
_LOGICAL_ONE_TERMS = (
    ("0001110", -1.0),
    ("0010011", -1j),
    ("0100101", -1j),
    ("0111000", 1.0),
    ("1001001", -1j),
    ("1100010", 1.0),
    ("1010100", 1.0),
    ("1111111", 1j),
)


@dataclass(frozen=True, eq=False)
class LogicalPair:
    """Seven-qubit logical |0> and |1> codewords."""

    zero_l: np.ndarray
    one_l: np.ndarray

    def __post_init__(self):
        amp = 1.0 / (2.0 * np.sqrt(2.0))
        for name in ("zero_l", "one_l"):
            v = np.asarray(getattr(self, name), dtype=complex)
            if v.shape != (128,):
                raise ValueError("logical states live on seven qubits")
            nonzero = np.abs(v) > 1e-12
            if nonzero.sum() != 8 or np.max(np.abs(np.abs(v[nonzero]) - amp)) > 1e-10:
                raise ValueError(
                    "each codeword needs exactly eight amplitudes of magnitude 1/(2 sqrt 2)"
                )
            if abs(np.linalg.norm(v) - 1.0) > 1e-10:
                raise ValueError("codewords must be normalized")
            object.__setattr__(self, name, v)
        if abs(np.vdot(self.zero_l, self.one_l)) > 1e-10:
            raise ValueError("codewords must be orthogonal")


def _terms_to_state(terms):
    amp = 1.0 / (2.0 * np.sqrt(2.0))
    v = np.zeros(128, dtype=complex)
    for bits, phase in terms:
        v[int(bits, 2)] = amp * phase
    return v


def steane_logical_states():
    """The encoder's logical codewords, with their conditional phases."""
    return LogicalPair(
        zero_l=_terms_to_state(_LOGICAL_ZERO_TERMS),
        one_l=_terms_to_state(_LOGICAL_ONE_TERMS),
    )


def steane_schedule(coupling, rabi, compensate=True):
    """The four drive windows of the Steane encoder.

    Each window couples one control to its targets in a star and drives
    the targets resonantly; all other couplings are off.
    """
    windows = []
    for control, targets in STEANE_LAYOUT:
        j = star_couplings(7, control, targets, coupling)
        dev = DeviceModel(n_controls=6, omega=0.0, couplings=j)
        windows.append(
            GateWindow(
                device=dev,
                drive=resonant_fanout_drive(dev, rabi, control=control),
                ideal=cnotn_on(7, control, targets),
                compensate=compensate,
            )
        )
    return tuple(windows)


def steane_encode(run):
    """Run the Steane encoder and return (output state, fidelity).

    Positions 0..2 start in |+>, position 3 carries the input state and
    positions 4..6 start in |0>.  The fidelity is the overlap of the
    output with alpha |0>_L + beta |1>_L.
    """
    if run.error_site is not None:
        raise ValueError("error injection is part of the bit-flip demonstration only")
    alpha, beta = run.input
    plus = np.array([_R, _R], dtype=complex)
    zero = basis_state(2, 0)
    psi0 = kron_all([plus, plus, plus, run.input_state(), zero, zero, zero])
    windows = steane_schedule(run.coupling, run.rabi, run.compensate)
    out = run_windows(windows, psi0, gate_mode=run.gate_mode, noise=run.noise)
    pair = steane_logical_states()
    goal = alpha * pair.zero_l + beta * pair.one_l
    if out.ndim == 1:
        fid = float(np.abs(np.vdot(goal, out)) ** 2)
    else:
        fid = float(np.real(np.conj(goal) @ out @ goal))
    return out, fid


def steane_fidelity(run):
    """Bloch-sphere-averaged Steane encoding fidelity for one drive ratio."""
    return bloch_average(lambda amps: steane_encode(replace(run, input=amps))[1])


def bloch_average(f):
    """Haar average of a state-dependent fidelity over the Bloch sphere.

    ``f`` maps an (alpha, beta) amplitude pair to a fidelity.  The
    average is evaluated exactly on the six-state 2-design, valid for
    integrands quadratic in the state and in its conjugate.
    """
    return float(np.mean([f(amps) for amps in BLOCH_DESIGN]))
