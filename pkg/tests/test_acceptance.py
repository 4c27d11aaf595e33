"""Acceptance suite: one test per numbered behavior contract.

Each test pins an end-to-end behavior of the package with explicit
tolerances and, where stated, a wall-clock budget measured with
time.perf_counter.  Oracles are built inside this file (dense matrix
exponentials, reference matrices, bitstring permutation builders, frozen
value tables) so every check runs against an independent construction.

Two companion tests accompany the drive-ratio sweep and the quoted-table
comparison; they freeze the reproducible values those checks run over.
"""

import time
from functools import lru_cache

import numpy as np
import pytest
from scipy.linalg import expm

from drivengates.channels import (
    depolarizing_channel,
    driven_gate_fidelities,
    unitary_channel,
)
from drivengates.evolution import (
    NoiseSpec,
    driven_propagator,
    lab_frame_propagator,
    phase_recurrence_time,
)
from drivengates.fidelity import (
    monte_carlo_average_fidelity,
    per_subspace_norm,
    process_fidelity_channel,
    subspace_trace_fidelity,
)
from drivengates.gates import toffoli_composite
from drivengates.linalg import unitary_exp
from drivengates.model import (
    DriveSpec,
    all_subspaces,
    interaction_hamiltonian,
    resonant_fanout_drive,
    resonant_itoffoli_drive,
    star_device,
    static_hamiltonian,
)
from drivengates.qec import CodeRun, bitflip_fidelity, steane_encode, steane_fidelity
from drivengates.synth import (
    GHZ,
    MHZ,
    derive_gate_params,
    gate_model_bridge,
    load_table1,
)

TWO_PI = 2.0 * np.pi
COUPLING = TWO_PI * 40e6
NOISE = NoiseSpec(30e-6, 30e-6)
RATIO_GRID = tuple(range(4, 21))


def test_a01_closed_form_matches_dense_exponential():
    start = time.perf_counter()
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(200):
        dev = star_device(2, rng.uniform(0.5, 3.0) * COUPLING)
        drive = DriveSpec(
            rabi=rng.uniform(1e6, 3e8),
            targets=(0,),
            delta=rng.uniform(-6e8, 6e8),
            theta=rng.uniform(0.0, TWO_PI),
        )
        t = rng.uniform(1e-9, 2e-7)
        dense = np.zeros((dev.dim, dev.dim), dtype=complex)
        for label in all_subspaces(2):
            i0, i1 = label.indices
            dense[np.ix_((i0, i1), (i0, i1))] = interaction_hamiltonian(
                dev, drive, label
            )
        brute = expm(-1j * t * dense)
        worst = max(worst, np.max(np.abs(driven_propagator(dev, drive, t) - brute)))
    elapsed = time.perf_counter() - start
    assert worst < 1e-10
    assert elapsed < 1.0


def test_a02_subspace_trace_fidelity_brute_force():
    start = time.perf_counter()
    sigma_x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    sigma_z = np.diag([1.0, -1.0]).astype(complex)
    t = 0.5 * np.pi
    worst = 0.0
    for gamma in np.linspace(0.1, 32.0, 50):
        u_q = expm(-1j * t * (gamma * sigma_z + sigma_x))
        u_goal = np.diag(np.exp(np.array([-1j, 1j]) * gamma * t))
        brute = 0.5 * abs(np.trace(u_q @ np.conj(u_goal.T)))
        worst = max(worst, abs(subspace_trace_fidelity(gamma) - brute))
    elapsed = time.perf_counter() - start
    assert worst < 1e-12
    assert elapsed < 1.0


@lru_cache(maxsize=None)
def _drive_ratio_sweep(noise):
    dev = star_device(2, COUPLING)
    out = {}
    for ratio in RATIO_GRID:
        drive = resonant_itoffoli_drive(dev, COUPLING / ratio)
        out[ratio] = driven_gate_fidelities(dev, drive, noise, "itoffoli")
    return out


def test_a03_fidelity_vs_drive_ratio():
    start = time.perf_counter()
    sweep = _drive_ratio_sweep(NOISE)
    for ratio in range(6, 21):
        f_uni = sweep[ratio][0]
        assert f_uni >= 0.99, (
            "no-noise process fidelity %.12f below 0.99 at drive ratio %d"
            % (f_uni, ratio)
        )
    evens = [sweep[r][0] for r in range(4, 21, 2)]
    for a, b in zip(evens, evens[1:]):
        assert a <= b <= 1.0
    noisy = {r: sweep[r][1] for r in RATIO_GRID}
    peak = max(noisy.values())
    assert peak == pytest.approx(0.99, abs=0.01)
    assert noisy[8] >= peak - 0.005
    assert time.perf_counter() - start < 120.0


A03_EXPECTED = {
    4: (0.981407092417, 0.979778782461),
    5: (0.971091849016, 0.969082497622),
    6: (0.991570883471, 0.989099670679),
    7: (0.984955718644, 0.982096264028),
    8: (0.995224967121, 0.991917336993),
    9: (0.990823542631, 0.987122982578),
    10: (0.996933886593, 0.992793082302),
    11: (0.993831143019, 0.989294280533),
    12: (0.997866924462, 0.992895025324),
    13: (0.995572491402, 0.990202372768),
    14: (0.998431139941, 0.992629709942),
    15: (0.996669361547, 0.990468178765),
    16: (0.998797993707, 0.992168334357),
    17: (0.997404288475, 0.990373770371),
    18: (0.999049806723, 0.991593071832),
    19: (0.997920500393, 0.990062103398),
    20: (0.999230076717, 0.990947330529),
}


def test_a03_companion_reproducible_sweep():
    sweep = _drive_ratio_sweep(NOISE)
    for ratio, (f_uni, f_noisy) in A03_EXPECTED.items():
        assert sweep[ratio][0] == pytest.approx(f_uni, abs=1e-9)
        assert sweep[ratio][1] == pytest.approx(f_noisy, abs=1e-9)
    # On this sweep every ratio from 6 on clears 0.99 without noise
    # except the odd point at 7, the even ratios rise toward 1, and the
    # noisy curve peaks at ratio 12 within 0.005 of its ratio-8 value.
    for ratio in range(6, 21):
        if ratio != 7:
            assert sweep[ratio][0] >= 0.99
    assert sweep[7][0] < 0.99
    noisy = {r: sweep[r][1] for r in RATIO_GRID}
    assert max(noisy, key=noisy.get) == 12
    assert max(noisy.values()) == pytest.approx(0.992895025324, abs=1e-9)
    assert noisy[8] >= max(noisy.values()) - 0.005


def test_a04_fidelity_vs_register_size():
    start = time.perf_counter()
    itoff = {}
    fanout = {}
    for n in range(1, 6):
        dev = star_device(n, COUPLING)
        rabi = COUPLING / 8.0
        itoff[n] = driven_gate_fidelities(
            dev, resonant_itoffoli_drive(dev, rabi), NOISE, "itoffoli"
        )
        fanout[n] = driven_gate_fidelities(
            dev, resonant_fanout_drive(dev, rabi, control=0), NOISE, "cnotn"
        )
    for n in range(1, 6):
        assert itoff[n][0] >= 0.995, "n=%d: %.6f" % (n, itoff[n][0])
    for n in range(2, 5):
        assert itoff[n + 1][0] >= itoff[n][0]
    for n in range(1, 6):
        assert itoff[n][1] >= 0.97, "n=%d noisy: %.6f" % (n, itoff[n][1])
    for n in range(1, 5):
        assert fanout[n + 1][0] <= fanout[n][0]
    assert abs(itoff[1][0] - fanout[1][0]) < 1e-9
    assert abs(itoff[1][1] - fanout[1][1]) < 1e-9
    assert time.perf_counter() - start < 1200.0


def test_a05_operator_norm_identity():
    start = time.perf_counter()
    worst = 0.0
    for ratio in (4.0, 6.0, 8.0, 12.5, 20.0):
        for q in range(1, 7):
            gamma = ratio * q
            root = np.sqrt(1.0 + gamma**2)
            identity = 2.0 - 2.0 * (
                np.cos(0.5 * np.pi * gamma) * np.cos(0.5 * np.pi * root)
                + (gamma / root)
                * np.sin(0.5 * np.pi * gamma)
                * np.sin(0.5 * np.pi * root)
            )
            worst = max(worst, abs(per_subspace_norm(gamma) ** 2 - identity))
    assert worst < 1e-12
    for ratio in (6.0, 8.0, 12.5):
        maxima = [
            max(per_subspace_norm(ratio * (n - q)) for q in range(n))
            for n in range(2, 7)
        ]
        for value in maxima[1:]:
            assert abs(value - maxima[0]) < 1e-12
    assert time.perf_counter() - start < 1.0


def _reference_single_control_gate(delta1, rabi, theta, t):
    """4x4 computation-frame gate of the driven one-control register."""
    u = np.eye(4, dtype=complex)
    c, s = np.cos(rabi * t), np.sin(rabi * t)
    phase = np.exp(1j * delta1 * t)
    u[1, 1] = phase * c
    u[1, 3] = -1j * phase * np.exp(-1j * theta) * s
    u[3, 1] = -1j * phase * np.exp(1j * theta) * s
    u[3, 3] = phase * c
    return u


def test_a06_single_control_lab_frame_gate():
    start = time.perf_counter()
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(20):
        delta1 = rng.uniform(-3e8, 3e8)
        rabi = rng.uniform(1e7, 2e8)
        theta = rng.uniform(0.0, TWO_PI)
        t = rng.uniform(1e-8, 1e-7)
        # Pick the coupling so the idle subspace precesses an integer
        # number of half turns; its frame phase v0 is then known exactly.
        k = int(np.ceil(rabi * t / np.pi)) + rng.integers(1, 4)
        v0 = k * np.pi / t
        coupling = np.sqrt(v0**2 - rabi**2)
        omega = (rng.uniform(0.0, TWO_PI * 5e9), rng.uniform(0.0, TWO_PI * 5e9))
        dev = star_device(1, coupling, omega=omega)
        drive = DriveSpec(rabi=rabi, targets=(0,), delta=-coupling, theta=theta)
        u_lab = lab_frame_propagator(dev, drive, t)
        frame = np.zeros(4)
        for idx in range(4):
            s0 = 1 - 2 * (idx >> 1)
            s1 = 1 - 2 * (idx & 1)
            frame[idx] = -0.5 * omega[1] * s1 + 0.5 * (-coupling - omega[0]) * s0
        frame[[0, 2]] += v0
        frame[[1, 3]] += delta1
        u_frame = np.exp(1j * frame * t)[:, None] * u_lab
        worst = max(
            worst,
            np.max(
                np.abs(u_frame - _reference_single_control_gate(delta1, rabi, theta, t))
            ),
        )
    elapsed = time.perf_counter() - start
    assert worst < 1e-8
    assert elapsed < 5.0


def _exact_toffoli(n):
    """Permutation matrix of the (n-1)-control flip on n qubits."""
    dim = 2**n
    u = np.zeros((dim, dim))
    for x in range(dim):
        bits = [(x >> (n - 1 - j)) & 1 for j in range(n)]
        if all(bits[:-1]):
            bits[-1] ^= 1
        y = sum(b << (n - 1 - j) for j, b in enumerate(bits))
        u[y, x] = 1.0
    return u


def test_a07_composite_toffoli():
    start = time.perf_counter()
    for n in (2, 3):
        comp = toffoli_composite(n)
        dim = 2**n
        # Ancilla in |0> reproduces the exact flip; no leakage between
        # the ancilla blocks.
        assert np.max(np.abs(comp[:dim, :dim] - _exact_toffoli(n))) < 1e-10
        assert np.max(np.abs(comp[:dim, dim:])) < 1e-10
        assert np.max(np.abs(comp[dim:, :dim])) < 1e-10
    assert time.perf_counter() - start < 1.0


# Reference codewords of the seven-qubit encoder: eight terms each, all
# of magnitude 1/(2 sqrt 2), phases fourth roots of unity.
A08_ZERO_TERMS = (
    ("0000000", 1.0),
    ("0101011", 1j),
    ("0011101", 1j),
    ("0110110", -1.0),
    ("1000111", 1j),
    ("1101100", -1.0),
    ("1011010", -1.0),
    ("1110001", -1j),
)
A08_ONE_TERMS = (
    ("0001110", -1.0),
    ("0010011", -1j),
    ("0100101", -1j),
    ("0111000", 1.0),
    ("1001001", -1j),
    ("1100010", 1.0),
    ("1010100", 1.0),
    ("1111111", 1j),
)


def _terms_to_vector(terms):
    amp = 1.0 / (2.0 * np.sqrt(2.0))
    v = np.zeros(128, dtype=complex)
    for bits, phase in terms:
        v[int(bits, 2)] = amp * phase
    return v


def test_a08_ideal_steane_codewords():
    start = time.perf_counter()
    zero_l = _terms_to_vector(A08_ZERO_TERMS)
    one_l = _terms_to_vector(A08_ONE_TERMS)
    amp = 1.0 / (2.0 * np.sqrt(2.0))
    for v in (zero_l, one_l):
        nonzero = np.abs(v) > 0.0
        assert nonzero.sum() == 8
        assert np.allclose(np.abs(v[nonzero]), amp, atol=1e-15)
        phases = v[nonzero] / amp
        assert np.allclose(np.abs(phases**4 - 1.0), 0.0, atol=1e-12)
    out0, _ = steane_encode(CodeRun(gate_mode="ideal", input=(1.0, 0.0)))
    out1, _ = steane_encode(CodeRun(gate_mode="ideal", input=(0.0, 1.0)))
    assert np.max(np.abs(out0 - zero_l)) < 1e-10
    assert np.max(np.abs(out1 - one_l)) < 1e-10
    assert abs(np.vdot(out0, out1)) < 1e-12
    assert time.perf_counter() - start < 1.0


def test_a09_bitflip_code_with_noise():
    start = time.perf_counter()
    for site in (None, 1, 2, 3):
        fid = bitflip_fidelity(CodeRun(error_site=site, noise=NOISE))
        assert fid > 0.985, "error case %s scored %.6f" % (site, fid)
    assert time.perf_counter() - start < 120.0


def test_a10_steane_encoding_with_noise():
    start = time.perf_counter()
    peak = 0.0
    for ratio in RATIO_GRID:
        run = CodeRun(drive_ratio=float(ratio), noise=NOISE, compensate=False)
        peak = max(peak, steane_fidelity(run))
    assert 0.85 <= peak <= 0.92, "peak %.6f" % peak
    assert time.perf_counter() - start < 1800.0


def test_a11_derived_table_matches_quoted_values():
    start = time.perf_counter()
    failures = []
    for row in load_table1():
        g = derive_gate_params(row.circuit)
        p = row.printed
        checks = [
            ("omega0", g.omega0 / GHZ, p.omega0, 0.01 * abs(p.omega0)),
            ("omegai", g.omegai[0] / GHZ, p.omegai, 0.01 * abs(p.omegai)),
            ("jz", g.jz[0] / MHZ, p.jz, max(0.02 * abs(p.jz), 0.1)),
            ("jxi", g.jx[0] / MHZ, p.jxi, max(0.02 * abs(p.jxi), 0.1)),
            ("jxij", g.jxij[0, 1] / MHZ, p.jxij, max(0.02 * abs(p.jxij), 0.1)),
            ("alpha0", g.alpha0, p.alpha0, 0.1),
            ("alphai", g.alphai[0], p.alphai, 0.1),
            ("ratio0", g.ratio0, p.ratio0, 0.02 * abs(p.ratio0)),
            ("ratioi", g.ratioi[0], p.ratioi, 0.02 * abs(p.ratioi)),
        ]
        for name, derived, quoted, tol in checks:
            if abs(derived - quoted) > tol:
                failures.append(
                    "row %d %s: derived %.6g vs quoted %.6g (tol %.3g)"
                    % (row.label, name, derived, quoted, tol)
                )
    assert not failures, "%d deviations:\n%s" % (len(failures), "\n".join(failures))
    assert time.perf_counter() - start < 1.0


def test_a11_companion_derived_table_regression():
    rows = load_table1()
    g = derive_gate_params(rows[0].circuit)
    assert g.omega0 / GHZ == pytest.approx(30.933425333, rel=1e-6)
    assert g.omegai[0] / GHZ == pytest.approx(12.782731375, rel=1e-6)
    assert g.jz[0] / MHZ == pytest.approx(-320.068761617, rel=1e-6)
    assert g.jx[0] / MHZ == pytest.approx(-9355.019547179, rel=1e-6)
    assert g.jxij[0, 1] / MHZ == pytest.approx(0.031558047, rel=1e-4)
    for row in rows:
        g = derive_gate_params(row.circuit)
        p = row.printed
        # The derived splittings round to the quoted one-decimal values
        # even where they sit outside a 1 percent band.
        assert round(g.omega0 / GHZ, 1) == pytest.approx(p.omega0)
        assert round(g.omegai[0] / GHZ, 1) == pytest.approx(p.omegai)
        assert g.jz[0] / MHZ == pytest.approx(p.jz, rel=0.02)
        assert g.alpha0 == pytest.approx(p.alpha0, abs=0.1)
        assert g.alphai[0] == pytest.approx(p.alphai, abs=0.1)
        assert g.ratio0 == pytest.approx(p.ratio0, rel=0.02)
        assert g.ratioi[0] == pytest.approx(p.ratioi, rel=0.02)
        # The derived transverse couplings disagree with the quoted
        # columns reproducibly: the target swap comes out negative and
        # much larger, the control-control swap far smaller.
        assert g.jx[0] < 0.0 <= p.jxi
        if p.jxij >= 1.0:
            assert abs(g.jxij[0, 1] / MHZ) < 0.01 * p.jxij
    g13 = derive_gate_params(rows[12].circuit)
    assert abs(g13.omegai[0] / GHZ - rows[12].printed.omegai) > 0.01 * abs(
        rows[12].printed.omegai
    )
    g14 = derive_gate_params(rows[13].circuit)
    assert abs(g14.omega0 / GHZ - rows[13].printed.omega0) > 0.01 * abs(
        rows[13].printed.omega0
    )


def test_a12_quoted_configurations_reach_high_fidelity():
    start = time.perf_counter()
    for row in load_table1():
        g = derive_gate_params(row.circuit)
        dev, _ = gate_model_bridge(g)
        rabi = abs(g.jz[0]) / 8.0
        drive = resonant_itoffoli_drive(dev, rabi)
        duration = 0.5 * np.pi / rabi
        f_at, _ = driven_gate_fidelities(dev, drive, None, "itoffoli", duration)
        assert f_at > 0.99, "row %d: %.6f" % (row.label, f_at)
        f_early, _ = driven_gate_fidelities(
            dev, drive, None, "itoffoli", 0.75 * duration
        )
        f_late, _ = driven_gate_fidelities(
            dev, drive, None, "itoffoli", 1.25 * duration
        )
        assert f_early < f_at > f_late
    assert time.perf_counter() - start < 600.0


def _haar_unitary(d, rng):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases[None, :]


def test_a13_average_fidelity_relations():
    rng = np.random.default_rng(5)
    for d in (2, 4, 8):
        u = _haar_unitary(d, rng)
        goal = _haar_unitary(d, rng)
        channel_value = process_fidelity_channel(unitary_channel(u), goal)
        trace_value = (abs(np.trace(np.conj(goal.T) @ u)) ** 2 / d + 1.0) / (d + 1.0)
        assert abs(channel_value - trace_value) < 1e-10
    u = _haar_unitary(4, rng)
    goal = _haar_unitary(4, rng)
    exact = process_fidelity_channel(unitary_channel(u), goal)
    mc, se = monte_carlo_average_fidelity(unitary_channel(u), goal, samples=3000, seed=11)
    assert abs(mc - exact) < 3.0 * se
    assert process_fidelity_channel(depolarizing_channel(2), _haar_unitary(2, rng)) == 0.5


def test_a14_ising_phase_recurrence():
    start = time.perf_counter()
    for n in (2, 3):
        dev = star_device(n, COUPLING)
        t_rec = phase_recurrence_time(dev)
        assert t_rec == pytest.approx(TWO_PI / COUPLING, rel=1e-12)
        u = unitary_exp(static_hamiltonian(dev), t_rec)
        assert np.max(np.abs(u / u[0, 0] - np.eye(dev.dim))) < 1e-10
    assert time.perf_counter() - start < 1.0
