"""Transmon-circuit synthesis of the star-coupled gate model.

A target transmon coupled to ``n`` control transmons through small junction
couplers realizes, after fourth-order expansion and two-level truncation,
the longitudinal-coupling register simulated by the rest of this package.
This module carries netlist parameters (Josephson energies, capacitances) to
gate parameters (splittings, zz couplings, residual swap couplings, quality
metrics), calibrates the capacitive drive amplitude, searches circuit space
for netlists meeting gate-model constraints with a randomized simplex
method, and loads the golden table of reference configurations shipped with
the package.

Units: Josephson energies and every derived coupling or splitting are
angular frequencies (rad/s); capacitances are femtofarads.  Golden-table
files quote frequencies as /2pi values in GHz or MHz as documented in the
file header.
"""

import logging
from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy.constants import e as _ELEMENTARY_CHARGE
from scipy.constants import hbar as _HBAR
from scipy.optimize import minimize

from .model import DeviceModel

TWO_PI = 2.0 * np.pi
GHZ = TWO_PI * 1e9
MHZ = TWO_PI * 1e6

# Angular frequency carried by a unit (1/fF) entry of the inverse capacitance
# matrix: (2e)^2/hbar per inverse farad, scaled to femtofarads.  This fixes
# the charging-energy calibration E^C_i = e^2 (K^-1)_ii / (2 hbar), which the
# golden table validates through the quoted Josephson-to-charging ratios.
INVERSE_FF_TO_RADS = 4.0 * _ELEMENTARY_CHARGE**2 / _HBAR * 1e15

_LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class CircuitParams:
    """Netlist of the star circuit: one target node, n control branches.

    Parameters
    ----------
    e0 : float
        Target-qubit Josephson energy (rad/s), >= 0.
    ei : tuple of float
        Control-qubit Josephson energies (rad/s), >= 0.
    ezi : tuple of float
        Coupling-junction Josephson energies (rad/s), > 0.
    c0 : float
        Target-qubit capacitance (fF), > 0.
    ci : tuple of float
        Control-qubit capacitances (fF), > 0.
    czi : tuple of float
        Coupling capacitances (fF), >= 0.
    """

    e0: float
    ei: tuple
    ezi: tuple
    c0: float
    ci: tuple
    czi: tuple

    def __post_init__(self):
        ei = tuple(float(x) for x in np.atleast_1d(self.ei))
        ezi = tuple(float(x) for x in np.atleast_1d(self.ezi))
        ci = tuple(float(x) for x in np.atleast_1d(self.ci))
        czi = tuple(float(x) for x in np.atleast_1d(self.czi))
        n = len(ei)
        if n < 1:
            raise ValueError("need at least one control branch")
        if not len(ezi) == len(ci) == len(czi) == n:
            raise ValueError("control-branch tuples must have equal length")
        if self.e0 < 0 or min(ei) < 0:
            raise ValueError("qubit Josephson energies must be >= 0")
        if min(ezi) <= 0:
            raise ValueError("coupling Josephson energies must be > 0")
        if self.c0 <= 0 or min(ci) <= 0:
            raise ValueError("qubit capacitances must be > 0")
        if min(czi) < 0:
            raise ValueError("coupling capacitances must be >= 0")
        object.__setattr__(self, "ei", ei)
        object.__setattr__(self, "ezi", ezi)
        object.__setattr__(self, "ci", ci)
        object.__setattr__(self, "czi", czi)

    @property
    def n_controls(self):
        return len(self.ei)

    @classmethod
    def symmetric(cls, e0, ei, ezi, c0, ci, czi, n_controls=2):
        """Netlist with ``n_controls`` identical control branches."""
        n = int(n_controls)
        return cls(e0, (ei,) * n, (ezi,) * n, c0, (ci,) * n, (czi,) * n)


@dataclass(frozen=True, eq=False)
class GateParams:
    """Gate-model parameters derived from a netlist.

    ``omega0``/``omegai`` are the qubit splittings and ``jz``/``jx``/``jxij``
    the longitudinal, target-swap and control-swap couplings, all angular
    (rad/s); ``alpha0``/``alphai`` are relative anharmonicities in percent
    (negative for the weakly anharmonic well); ``ratio0``/``ratioi`` the
    Josephson-to-charging energy ratios.
    """

    omega0: float
    omegai: np.ndarray
    jz: np.ndarray
    jx: np.ndarray
    jxij: np.ndarray
    alpha0: float
    alphai: np.ndarray
    ratio0: float
    ratioi: np.ndarray

    def __post_init__(self):
        omegai = np.atleast_1d(np.asarray(self.omegai, dtype=float))
        n = omegai.shape[0]
        jz = np.atleast_1d(np.asarray(self.jz, dtype=float))
        jx = np.atleast_1d(np.asarray(self.jx, dtype=float))
        alphai = np.atleast_1d(np.asarray(self.alphai, dtype=float))
        ratioi = np.atleast_1d(np.asarray(self.ratioi, dtype=float))
        jxij = np.asarray(self.jxij, dtype=float)
        for name, arr in (("jz", jz), ("jx", jx), ("alphai", alphai), ("ratioi", ratioi)):
            if arr.shape != (n,):
                raise ValueError("%s must have one entry per control" % name)
        if jxij.shape != (n, n):
            raise ValueError("jxij must be a square control-control matrix")
        if np.any(jz >= 0.0):
            raise ValueError("zz couplings must be negative for positive coupling junctions")
        object.__setattr__(self, "omegai", omegai)
        object.__setattr__(self, "jz", jz)
        object.__setattr__(self, "jx", jx)
        object.__setattr__(self, "jxij", jxij)
        object.__setattr__(self, "alphai", alphai)
        object.__setattr__(self, "ratioi", ratioi)

    @property
    def n_controls(self):
        return self.omegai.shape[0]


def capacitance_matrix(p):
    """Star-topology capacitance matrix of a netlist, in fF.

    Index 0 is the target node, index i >= 1 control node i.  The target
    diagonal collects the qubit capacitance and every coupling capacitance,
    each control diagonal its own pair, and the only off-diagonal entries
    couple the target to each control with the negated coupling capacitance.

    Parameters
    ----------
    p : CircuitParams

    Returns
    -------
    ndarray
        Symmetric (n + 1) x (n + 1) matrix.
    """
    n = p.n_controls
    k = np.zeros((n + 1, n + 1))
    k[0, 0] = p.c0 + sum(p.czi)
    for i in range(1, n + 1):
        k[i, i] = p.ci[i - 1] + p.czi[i - 1]
        k[0, i] = k[i, 0] = -p.czi[i - 1]
    return k


def _inverse_energy_matrix(p):
    """Inverse capacitance matrix expressed as angular frequency (rad/s)."""
    k = capacitance_matrix(p)
    try:
        kinv = np.linalg.inv(k)
    except np.linalg.LinAlgError:
        raise ValueError("capacitance matrix is singular") from None
    return kinv * INVERSE_FF_TO_RADS


def charging_energies(p):
    """Effective charging energies (rad/s), one per node, target first."""
    return np.diag(_inverse_energy_matrix(p)) / 8.0


def josephson_energies(p):
    """Effective Josephson energies (rad/s), one per node, target first.

    The target junction is stiffened by every coupling junction, each
    control by its own coupler.
    """
    tail = np.asarray(p.ei, dtype=float) + np.asarray(p.ezi, dtype=float)
    return np.concatenate(([p.e0 + sum(p.ezi)], tail))


def impedances(p):
    """Mode impedances sqrt((K^-1)_ii / E^J_i), one per node, target first."""
    return np.sqrt(np.diag(_inverse_energy_matrix(p)) / josephson_energies(p))


def derive_gate_params(p):
    """Carry a netlist to the parameters of the two-level gate model.

    Expands the circuit potential to fourth order, normal-orders, and
    truncates each mode to its lowest two levels.  The splittings pick up
    the charging correction and the coupler light shift; the longitudinal
    coupling is the quartic cross term; the swap couplings collect the
    capacitive and inductive transverse terms that the Ising-model
    truncation later drops.

    Parameters
    ----------
    p : CircuitParams

    Returns
    -------
    GateParams

    Raises
    ------
    ValueError
        If the capacitance matrix is singular.
    """
    kinv = _inverse_energy_matrix(p)
    ej = josephson_energies(p)
    ec = np.diag(kinv) / 8.0
    zeta = np.sqrt(np.diag(kinv) / ej)
    ez = np.asarray(p.ezi, dtype=float)
    zz0 = zeta[1:] * zeta[0]
    harmonic = np.sqrt(8.0 * ec * ej) + 0.5 * ec
    omegai = harmonic[1:] + ez * zz0 / 6.0
    omega0 = float(harmonic[0] + np.sum(ez * zz0) / 6.0)
    jz = -ez * zz0 / 12.0
    root = np.sqrt(zz0)
    jx = kinv[1:, 0] / root - ez * root + 0.25 * ez * (zeta[1:] + zeta[0]) * root
    n = p.n_controls
    jxij = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                jxij[i, j] = kinv[i + 1, j + 1] / np.sqrt(zeta[i + 1] * zeta[j + 1])
    return GateParams(
        omega0=omega0,
        omegai=omegai,
        jz=jz,
        jx=jx,
        jxij=jxij,
        alpha0=float(-ec[0] / (2.0 * omega0) * 100.0),
        alphai=-ec[1:] / (2.0 * omegai) * 100.0,
        ratio0=float(ej[0] / ec[0]),
        ratioi=ej[1:] / ec[1:],
    )


def derive_drive(p, amplitude, drive_freq, theta=0.0, target=0):
    """Transverse drive amplitude of a capacitive flux drive on one node.

    The drive couples through the node's inverse capacitance and impedance;
    after two-level truncation it leaves a sigma^y term whose envelope
    amplitude is returned.  The result is linear in ``amplitude`` and the
    phase only redistributes the two quadratures (see drive_coefficient).

    Parameters
    ----------
    p : CircuitParams
    amplitude : float
        Drive amplitude knob, in units of inverse angular frequency so that
        the returned value is an angular frequency.
    drive_freq : float
        Drive angular frequency (rad/s).
    theta : float
        Drive phase; does not affect the returned amplitude.
    target : int
        Driven node, 0 for the target qubit, i >= 1 for control i.

    Returns
    -------
    float
        Rabi amplitude (rad/s), negative for positive knob values.
    """
    kinv = _inverse_energy_matrix(p)
    zeta = impedances(p)
    if not 0 <= target <= p.n_controls:
        raise ValueError("drive target out of range")
    return float(
        -amplitude * drive_freq * kinv[target, target] / np.sqrt(2.0 * zeta[target])
    )


def drive_amplitude(p, rabi, drive_freq, target=0):
    """Amplitude knob yielding a requested Rabi amplitude (inverts derive_drive)."""
    kinv = _inverse_energy_matrix(p)
    zeta = impedances(p)
    if not 0 <= target <= p.n_controls:
        raise ValueError("drive target out of range")
    return float(
        -rabi * np.sqrt(2.0 * zeta[target]) / (drive_freq * kinv[target, target])
    )


def drive_coefficient(p, amplitude, drive_freq, theta, target, t):
    """Instantaneous sigma^y drive coefficient at times ``t``.

    For theta = 0 the coefficient is the derive_drive amplitude times
    cos(drive_freq * t); a nonzero phase mixes in the sine quadrature.
    """
    rabi = derive_drive(p, amplitude, drive_freq, theta, target)
    t = np.asarray(t, dtype=float)
    return rabi * (
        np.cos(theta) * np.cos(drive_freq * t) - np.sin(theta) * np.sin(drive_freq * t)
    )


@dataclass(frozen=True)
class SynthConstraints:
    """Feasibility window on derived gate parameters.

    A netlist is feasible when every violation below is zero:

    * band hinge (log10) on each |jz| inside [jz_min, jz_max];
    * band hinge (log10) on each quality ratio inside [ratio_min, ratio_max];
    * anharmonicity window |alpha - alpha_rel| <= alpha_tol, in percentage
      points, for the target and every control;
    * cross-coupling bound max |jxij| / min |jz| <= cross_ratio_max;
    * swap bound |jx_i| / |omegai_i - omega0| <= swap_ratio_max per control.

    The ``w_*`` weights multiply the squared violations in the search cost.
    """

    jz_min: float = TWO_PI * 25e6
    jz_max: float = TWO_PI * 320e6
    ratio_min: float = 50.0
    ratio_max: float = 80.0
    alpha_rel: float = -2.0
    alpha_tol: float = 0.25
    cross_ratio_max: float = 1.0
    swap_ratio_max: float = 1.0
    w_jz: float = 1.0
    w_ratio: float = 1.0
    w_alpha: float = 1.0
    w_cross: float = 1.0
    w_swap: float = 1.0

    def violations(self, g):
        """Nonnegative violation vector of a GateParams; all-zero = feasible."""
        jz = np.abs(g.jz)
        out = []
        for v in jz:
            out.append(max(0.0, np.log10(self.jz_min / v), np.log10(v / self.jz_max)))
        for r in np.concatenate(([g.ratio0], g.ratioi)):
            out.append(
                max(0.0, np.log10(self.ratio_min / r), np.log10(r / self.ratio_max))
            )
        for a in np.concatenate(([g.alpha0], g.alphai)):
            out.append(max(0.0, (abs(a - self.alpha_rel) - self.alpha_tol) / self.alpha_tol))
        cross = 0.0
        n = g.n_controls
        for i in range(n):
            for j in range(i + 1, n):
                cross = max(cross, abs(g.jxij[i, j]) / min(jz[i], jz[j]))
        out.append(max(0.0, cross / self.cross_ratio_max - 1.0))
        swap = np.abs(g.jx) / np.abs(g.omegai - g.omega0)
        out.append(max(0.0, float(np.max(swap)) / self.swap_ratio_max - 1.0))
        return np.array(out)

    def _weights(self, n):
        return np.concatenate(
            [
                np.full(n, self.w_jz),
                np.full(n + 1, self.w_ratio),
                np.full(n + 1, self.w_alpha),
                [self.w_cross, self.w_swap],
            ]
        )

    def cost(self, g):
        """Weighted sum of squared violations; exactly zero iff feasible."""
        v = self.violations(g)
        return float(np.sum(self._weights(g.n_controls) * v * v))

    def satisfied(self, g):
        return bool(np.all(self.violations(g) == 0.0))


# log10 search box per parameter family: qubit junction energies, coupling
# junction energies (rad/s), qubit and coupling capacitances (fF).
_BOX_E = (0.005 * GHZ, 80.0 * GHZ)
_BOX_EZ = (0.5 * GHZ, 40.0 * GHZ)
_BOX_C = (10.0, 420.0)
_BOX_CZ = (0.004, 0.6)


def _vector_bounds(n_controls, symmetric):
    reps = 1 if symmetric else n_controls
    fams = [(_BOX_E, 1), (_BOX_E, reps), (_BOX_EZ, reps), (_BOX_C, 1), (_BOX_C, reps), (_BOX_CZ, reps)]
    lo = np.concatenate([np.full(r, np.log10(b[0])) for b, r in fams])
    hi = np.concatenate([np.full(r, np.log10(b[1])) for b, r in fams])
    return lo, hi


def _params_to_vector(p, symmetric):
    if symmetric:
        vals = [p.e0, p.ei[0], p.ezi[0], p.c0, p.ci[0], p.czi[0]]
    else:
        vals = [p.e0, *p.ei, *p.ezi, p.c0, *p.ci, *p.czi]
    lo, hi = _vector_bounds(p.n_controls, symmetric)
    return np.clip(np.log10(np.maximum(vals, 1e-300)), lo, hi)


def _vector_to_params(x, n_controls, symmetric):
    v = 10.0 ** np.asarray(x, dtype=float)
    if symmetric:
        return CircuitParams.symmetric(v[0], v[1], v[2], v[3], v[4], v[5], n_controls)
    n = n_controls
    return CircuitParams(
        v[0], tuple(v[1 : 1 + n]), tuple(v[1 + n : 1 + 2 * n]),
        v[1 + 2 * n], tuple(v[2 + 2 * n : 2 + 3 * n]), tuple(v[2 + 3 * n : 2 + 4 * n]),
    )


def _search_cost(x, targets, n_controls, symmetric, lo, hi):
    box = np.sum(np.maximum(0.0, lo - x) ** 2 + np.maximum(0.0, x - hi) ** 2)
    xc = np.clip(x, lo, hi)
    try:
        g = derive_gate_params(_vector_to_params(xc, n_controls, symmetric))
    except (ValueError, FloatingPointError):
        return 1e6 + 10.0 * box
    return targets.cost(g) + 10.0 * box


def optimize_circuit(targets, seeds=50, seed=0, n_controls=2, symmetric=True,
                     starts=None, max_iterations=4000):
    """Direct search for netlists whose gate parameters meet the targets.

    Runs a Nelder-Mead simplex search over log10-scaled circuit parameters
    from randomized starting points inside the search box (plus any explicit
    ``starts``) and keeps the endpoint netlists whose derived GateParams
    satisfy ``targets``.  Identical arguments give an identical result list.

    Parameters
    ----------
    targets : SynthConstraints
    seeds : int
        Total number of searches; random starts top up beyond ``starts``.
    seed : int
        Seed of the random generator drawing the starting points.
    n_controls : int
        Control count of the candidate netlists.
    symmetric : bool
        Share one value per branch family across all controls.
    starts : sequence of CircuitParams, optional
        Explicit starting netlists, used before the random ones.
    max_iterations : int
        Simplex iteration cap per start.

    Returns
    -------
    list of CircuitParams
        Feasible endpoints in search order.  An empty list (no feasible
        point found) is reported through the module logger.
    """
    lo, hi = _vector_bounds(n_controls, symmetric)
    x0s = [_params_to_vector(p, symmetric) for p in (starts or [])]
    rng = np.random.default_rng(seed)
    while len(x0s) < seeds:
        x0s.append(lo + (hi - lo) * rng.random(lo.shape[0]))
    found = []
    best = np.inf
    for x0 in x0s:
        res = minimize(
            _search_cost,
            x0,
            args=(targets, n_controls, symmetric, lo, hi),
            method="Nelder-Mead",
            options={"maxiter": max_iterations, "xatol": 1e-9, "fatol": 1e-16},
        )
        try:
            p = _vector_to_params(np.clip(res.x, lo, hi), n_controls, symmetric)
            g = derive_gate_params(p)
        except ValueError:
            continue
        best = min(best, targets.cost(g))
        if targets.satisfied(g):
            found.append(p)
    if not found:
        _LOG.warning(
            "no feasible netlist in %d searches (best cost %.3g)", len(x0s), best
        )
    return found


@dataclass(frozen=True, eq=False)
class TruncationReport:
    """Magnitudes of the transverse couplings dropped by the Ising truncation.

    ``swap_couplings`` and ``cross_couplings`` are the dropped |jx_i| and
    |jxij| (rad/s); ``swap_detuning_ratios`` divides each |jx_i| by the
    target-control detuning and ``cross_coupling_ratios`` each |jxij| by the
    smaller of the two longitudinal couplings it competes with.
    """

    swap_couplings: np.ndarray
    cross_couplings: np.ndarray
    swap_detuning_ratios: np.ndarray
    cross_coupling_ratios: np.ndarray


def gate_model_bridge(g, n_controls=None):
    """DeviceModel of a derived register, dropping the transverse couplings.

    Keeps the splittings and the longitudinal couplings between the target
    (node 0 of the returned device) and each control, and drops the residual
    swap terms; their magnitudes and relative sizes are returned alongside.
    A ``n_controls`` different from the derived count replicates identical
    control branches to the requested width.

    Parameters
    ----------
    g : GateParams
    n_controls : int, optional

    Returns
    -------
    (DeviceModel, TruncationReport)
    """
    n = g.n_controls if n_controls is None else int(n_controls)
    if n != g.n_controls:
        same = np.allclose(g.omegai, g.omegai[0], rtol=1e-9) and np.allclose(
            g.jz, g.jz[0], rtol=1e-9
        )
        if not same:
            raise ValueError("changing the control count needs identical controls")
        omegai = np.full(n, g.omegai[0])
        jz = np.full(n, g.jz[0])
        jx = np.full(n, abs(g.jx[0]))
        cross_val = abs(g.jxij[0, 1]) if g.n_controls > 1 else 0.0
        jxij = np.full((n, n), cross_val)
        np.fill_diagonal(jxij, 0.0)
    else:
        omegai, jz = g.omegai, g.jz
        jx = np.abs(g.jx)
        jxij = np.abs(g.jxij)
    couplings = np.zeros((n + 1, n + 1))
    couplings[0, 1:] = couplings[1:, 0] = jz
    dev = DeviceModel(
        n_controls=n, omega=np.concatenate(([g.omega0], omegai)), couplings=couplings
    )
    ajz = np.abs(jz)
    pair_floor = np.minimum.outer(ajz, ajz)
    cross_ratios = np.divide(jxij, pair_floor, out=np.zeros_like(jxij), where=pair_floor > 0)
    np.fill_diagonal(cross_ratios, 0.0)
    report = TruncationReport(
        swap_couplings=jx,
        cross_couplings=jxij,
        swap_detuning_ratios=jx / np.abs(omegai - g.omega0),
        cross_coupling_ratios=cross_ratios,
    )
    return dev, report


@dataclass(frozen=True)
class PrintedGateValues:
    """Quoted gate and quality columns of a golden-table row (print units).

    Splittings in /2pi GHz, couplings in /2pi MHz, anharmonicities in
    percent, energy ratios dimensionless; one shared value per control.
    """

    omega0: float
    omegai: float
    jz: float
    jxi: float
    jxij: float
    alpha0: float
    alphai: float
    ratio0: float
    ratioi: float


@dataclass(frozen=True)
class Table1Row:
    """One golden-table configuration: netlist plus its quoted values."""

    label: int
    circuit: CircuitParams
    printed: PrintedGateValues


def load_table1(path=None):
    """Parse the golden configuration table into Table1Row tuples.

    Without ``path`` the copy shipped with the package is read.  The format
    is documented in the file header: '#' comment lines, then one
    whitespace-separated row per configuration with 16 columns (label, six
    circuit columns in /2pi GHz and fF, five gate columns in /2pi GHz and
    MHz, four quality columns).

    Parameters
    ----------
    path : str, optional

    Returns
    -------
    tuple of Table1Row
    """
    if path is None:
        text = resources.files("drivengates").joinpath("data/table1.txt").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 16:
            raise ValueError(
                "golden-table rows need 16 columns, got %d" % len(fields)
            )
        label = int(fields[0])
        vals = [float(x) for x in fields[1:]]
        circuit = CircuitParams.symmetric(
            vals[0] * GHZ, vals[1] * GHZ, vals[2] * GHZ, vals[3], vals[4], vals[5]
        )
        rows.append(
            Table1Row(label=label, circuit=circuit, printed=PrintedGateValues(*vals[6:]))
        )
    if not rows:
        raise ValueError("golden table has no configuration rows")
    return tuple(rows)
