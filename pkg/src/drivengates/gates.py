"""Ideal gate constructions and composite circuits.

The native gate of the package applies the phased flip

    flip(theta) = cos(theta) sigma_x + sin(theta) sigma_y

to a target qubit conditioned on controls.  Two families are provided:

* i-Toffoli: -i flip(theta) on the target iff every control is |1>;
* CNOT^n (fanout): one control flips n targets at once, with overall
  phase (-i)^n on the control-|1> branch.

Both are available in the canonical layout (target/control at qubit 0)
and at arbitrary wire positions for circuit assembly.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import PROJ_0, PROJ_1, SIGMA_X, SIGMA_Y, embed

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)


def flip_operator(theta=0.0):
    """cos(theta) sigma_x + sin(theta) sigma_y."""
    return np.cos(theta) * SIGMA_X + np.sin(theta) * SIGMA_Y


@dataclass(frozen=True)
class GateLabel:
    """Row label for experiment outputs: gate family plus control count."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in ("itoffoli", "cnotn"):
            raise ValueError("unknown gate kind %r" % (self.kind,))
        if self.n < 1:
            raise ValueError("need at least one control/target")


def itoffoli_on(m, controls, target, theta=0.0):
    """i-Toffoli on an ``m``-qubit register at explicit wire positions.

    Applies -i flip(theta) to ``target`` iff all ``controls`` are |1>;
    identity elsewhere.
    """
    controls = tuple(controls)
    if target in controls:
        raise ValueError("target cannot also be a control")
    proj = np.eye(2 ** m, dtype=complex)
    for c in controls:
        proj = proj @ embed(PROJ_1, c, m)
    flip = embed(flip_operator(theta), target, m)
    return np.eye(2 ** m, dtype=complex) + proj @ (-1j * flip - np.eye(2 ** m))


def cnotn_on(m, control, targets, theta=0.0):
    """Fanout gate on an ``m``-qubit register at explicit wire positions.

    Applies flip(theta_j) to every target iff ``control`` is |1>, with
    overall phase (-i)^len(targets) on that branch.  ``theta`` may be a
    scalar or a per-target sequence.
    """
    targets = tuple(targets)
    if control in targets:
        raise ValueError("control cannot also be a target")
    thetas = _theta_list(theta, len(targets))
    branch = np.eye(2 ** m, dtype=complex)
    for t, th in zip(targets, thetas):
        branch = branch @ embed(flip_operator(th), t, m)
    phase = (-1j) ** len(targets)
    return embed(PROJ_0, control, m) + phase * embed(PROJ_1, control, m) @ branch


def _theta_list(theta, count):
    if np.ndim(theta) == 0:
        return [float(theta)] * count
    thetas = [float(x) for x in theta]
    if len(thetas) != count:
        raise ValueError("need one theta per target")
    return thetas


def ideal_itoffoli(n, theta=0.0):
    """Canonical n-control i-Toffoli: target qubit 0, controls 1..n."""
    return itoffoli_on(n + 1, range(1, n + 1), 0, theta)


def ideal_cnotn(n, theta=0.0):
    """Canonical fanout: control qubit 0, targets 1..n."""
    return cnotn_on(n + 1, 0, range(1, n + 1), theta)


def barenco(delta1, rabi, theta, t):
    """Two-qubit entangling gate family (target qubit 0, control qubit 1).

    Identity on the control-|0> pair; on the control-|1> pair (ordered
    |0>, |1> of the target)

        exp(i delta1 t) [[cos(rabi t),            -i e^{-i theta} sin(rabi t)],
                         [-i e^{i theta} sin(rabi t), cos(rabi t)]]

    At rabi*t = pi/2 the control-|1> block reduces to the phased flip of
    the n=1 i-Toffoli times exp(i delta1 t).
    """
    u = np.eye(4, dtype=complex)
    c, s = np.cos(rabi * t), np.sin(rabi * t)
    blk = np.exp(1j * delta1 * t) * np.array(
        [
            [c, -1j * np.exp(-1j * theta) * s],
            [-1j * np.exp(1j * theta) * s, c],
        ],
        dtype=complex,
    )
    u[np.ix_((1, 3), (1, 3))] = blk
    return u


def toffoli_composite(n, theta=0.0):
    """(n-1)-bit Toffoli from two i-Toffoli applications and two Hadamards.

    Squaring the i-Toffoli leaves the target (qubit 0) untouched and
    imprints a phase -1 iff all n controls are |1>, i.e. an (n-1)-control
    Z among the controls.  Conjugating the promoted control (qubit n) with
    Hadamards turns that into an (n-1)-bit Toffoli with target qubit n and
    controls 1..n-1, acting trivially on qubit 0.

    Returns
    -------
    (2**(n+1), 2**(n+1)) ndarray
    """
    m = n + 1
    h_a = embed(HADAMARD, n, m)
    it = ideal_itoffoli(n, theta)
    return h_a @ it @ it @ h_a


def identity(m):
    return np.eye(2 ** m, dtype=complex)
