"""Experiment runners and CSV/JSON emission for the command line.

Each runner maps an ExperimentConfig to a (columns, rows) table.  Grid
points are independent and may be dispatched to a process pool
(``threads > 1``); results are always emitted in grid order, so identical
configurations produce byte-identical output regardless of worker count.
Floating-point cells are printed with 12 significant digits.
"""

import csv
import json
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .channels import driven_gate_fidelities
from .fidelity import operator_norm_error, per_subspace_norm
from .model import resonant_fanout_drive, resonant_itoffoli_drive, star_device
from .qec import CodeRun, bitflip_fidelity, steane_fidelity
from .synth import (
    GHZ,
    MHZ,
    derive_gate_params,
    gate_model_bridge,
    load_table1,
    optimize_circuit,
)

HALF_PI = 0.5 * np.pi


class InfeasibleError(RuntimeError):
    """A parameter search finished without any feasible point.

    Carries the table columns so callers can still emit an empty table.
    """

    def __init__(self, message, columns):
        super().__init__(message)
        self.columns = columns


def _pool_map(func, jobs, threads):
    if threads <= 1 or len(jobs) <= 1:
        return [func(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, jobs))


def _gate_time_ns(rabi):
    return HALF_PI / rabi * 1e9


def _sweep_drive_point(job):
    cfg, ratio = job
    dev = star_device(cfg.n_controls, cfg.coupling, cfg.omega)
    rabi = cfg.coupling / ratio
    drive = resonant_itoffoli_drive(dev, rabi, theta=cfg.theta)
    f_uni, f_noisy = driven_gate_fidelities(dev, drive, cfg.noise, "itoffoli")
    row = [ratio, _gate_time_ns(rabi), f_uni]
    if cfg.noise is not None:
        row.append(f_noisy)
    return row


def run_sweep_drive(cfg):
    """Fidelity of the driven gate versus the coupling-to-drive ratio."""
    columns = ["j_over_omega", "gate_time_ns", "fidelity_unitary"]
    if cfg.noise is not None:
        columns.append("fidelity_noisy")
    jobs = [(cfg, ratio) for ratio in cfg.ratios]
    return columns, _pool_map(_sweep_drive_point, jobs, cfg.threads)


def _sweep_n_point(job):
    cfg, n, kind = job
    dev = star_device(n, cfg.coupling, cfg.omega)
    rabi = cfg.coupling / cfg.ratio
    if kind == "itoffoli":
        drive = resonant_itoffoli_drive(dev, rabi, theta=cfg.theta)
    else:
        drive = resonant_fanout_drive(dev, rabi, control=0, theta=cfg.theta)
    f_uni, f_noisy = driven_gate_fidelities(dev, drive, cfg.noise, kind)
    row = [n, kind, f_uni]
    if cfg.noise is not None:
        row.append(f_noisy)
    return row


def run_sweep_n(cfg):
    """Fidelity of both driven gates versus the register size."""
    columns = ["n", "gate", "fidelity_unitary"]
    if cfg.noise is not None:
        columns.append("fidelity_noisy")
    jobs = [(cfg, n, kind) for n in cfg.n_grid for kind in ("itoffoli", "cnotn")]
    return columns, _pool_map(_sweep_n_point, jobs, cfg.threads)


def _qec3_point(job):
    cfg, site = job
    run = CodeRun(
        gate_mode="driven",
        noise=cfg.noise,
        error_site=site,
        coupling=cfg.coupling,
        drive_ratio=cfg.ratio,
        compensate=cfg.compensate,
    )
    label = "none" if site is None else "q%d" % site
    return [label, bitflip_fidelity(run)]


def run_qec3(cfg):
    """Bloch-averaged bit-flip code fidelity for each error case."""
    jobs = [(cfg, site) for site in (None, 1, 2, 3)]
    return ["error_case", "fidelity"], _pool_map(_qec3_point, jobs, cfg.threads)


def _steane_point(job):
    cfg, ratio = job
    run = CodeRun(
        gate_mode="driven",
        noise=cfg.noise,
        coupling=cfg.coupling,
        drive_ratio=ratio,
        compensate=cfg.compensate,
    )
    # the encoder is four driven windows, each one inversion long
    return [ratio, 4.0 * _gate_time_ns(run.rabi), steane_fidelity(run)]


def run_steane(cfg):
    """Bloch-averaged Steane encoding fidelity versus the drive ratio."""
    jobs = [(cfg, ratio) for ratio in cfg.ratios]
    return ["j_over_omega", "gate_time_ns", "fidelity"], _pool_map(
        _steane_point, jobs, cfg.threads
    )


def run_norm_error(cfg):
    """Worst-case operator-norm gate error versus the drive ratio.

    ``norm_qk`` is the contribution of the subspaces detuned by k coupling
    quanta; the total is their maximum, reached at the closest subspace.
    """
    columns = ["j_over_omega", "norm_error"] + ["norm_q%d" % k for k in (1, 2, 3, 4)]
    rows = []
    for ratio in cfg.ratios:
        rows.append(
            [ratio, operator_norm_error(ratio)]
            + [per_subspace_norm(ratio * k) for k in (1, 2, 3, 4)]
        )
    return columns, rows


_TABLE_COLUMNS = [
    "row", "e0_ghz", "ei_ghz", "ezi_ghz", "c0_ff", "ci_ff", "czi_ff",
    "omega0_ghz", "omegai_ghz", "jz_mhz", "jxi_mhz", "jxij_mhz",
    "alpha0_pct", "alphai_pct", "ratio0", "ratioi",
]


def _circuit_row(label, circuit):
    gate = derive_gate_params(circuit)
    return [
        label,
        circuit.e0 / GHZ, circuit.ei[0] / GHZ, circuit.ezi[0] / GHZ,
        circuit.c0, circuit.ci[0], circuit.czi[0],
        gate.omega0 / GHZ, gate.omegai[0] / GHZ,
        gate.jz[0] / MHZ, gate.jx[0] / MHZ, gate.jxij[0, 1] / MHZ,
        gate.alpha0, gate.alphai[0], gate.ratio0, gate.ratioi[0],
    ]


def run_synth(cfg):
    """Search circuit space and report feasible netlists in table format."""
    found = optimize_circuit(
        cfg.constraints,
        seeds=cfg.synth_seeds,
        seed=cfg.seed,
        n_controls=cfg.n_controls,
        symmetric=cfg.symmetric,
    )
    rows = [_circuit_row(i + 1, circuit) for i, circuit in enumerate(found)]
    if not rows:
        raise InfeasibleError(
            "no feasible netlist in %d searches" % cfg.synth_seeds, _TABLE_COLUMNS
        )
    return _TABLE_COLUMNS, rows


def _table1_point(job):
    cfg, row = job
    gate = derive_gate_params(row.circuit)
    printed = row.printed
    dev_omega = 100.0 * max(
        abs(gate.omega0 / GHZ - printed.omega0) / abs(printed.omega0),
        abs(gate.omegai[0] / GHZ - printed.omegai) / abs(printed.omegai),
    )
    dev_jz = 100.0 * abs(gate.jz[0] / MHZ - printed.jz) / abs(printed.jz)
    device, _ = gate_model_bridge(gate)
    rabi = abs(gate.jz[0]) / 8.0
    drive = resonant_itoffoli_drive(device, rabi, theta=cfg.theta)
    f_uni, f_noisy = driven_gate_fidelities(device, drive, cfg.noise, "itoffoli")
    out = [
        row.label,
        gate.omega0 / GHZ, gate.omegai[0] / GHZ, gate.jz[0] / MHZ,
        gate.alpha0, gate.alphai[0], gate.ratio0, gate.ratioi[0],
        dev_omega, dev_jz, _gate_time_ns(rabi), f_uni,
    ]
    if cfg.noise is not None:
        out.append(f_noisy)
    return out


def run_table1_check(cfg):
    """Round-trip check of the golden table plus a per-row gate simulation.

    Every row's netlist is rederived, compared to the quoted splittings and
    zz coupling, and simulated as the two-control driven gate at one eighth
    of its own coupling.
    """
    rows = load_table1(cfg.table_path)
    columns = [
        "row", "omega0_ghz", "omegai_ghz", "jz_mhz",
        "alpha0_pct", "alphai_pct", "ratio0", "ratioi",
        "dev_omega_pct", "dev_jz_pct", "gate_time_ns", "fidelity_unitary",
    ]
    if cfg.noise is not None:
        columns.append("fidelity_noisy")
    jobs = [(cfg, row) for row in rows]
    return columns, _pool_map(_table1_point, jobs, cfg.threads)


_RUNNERS = {
    "sweep-drive": run_sweep_drive,
    "sweep-n": run_sweep_n,
    "qec3": run_qec3,
    "steane": run_steane,
    "synth": run_synth,
    "table1-check": run_table1_check,
    "norm-error": run_norm_error,
}


def run_experiment(cfg):
    """Dispatch a config to its runner; returns (columns, rows)."""
    return _RUNNERS[cfg.experiment](cfg)


def format_cell(value):
    """CSV cell text: floats at 12 significant digits, others verbatim."""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return "%.12g" % value
    return str(value)


def write_csv(columns, rows, path):
    """Write a table as CSV with a header row and deterministic bytes."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_cell(cell) for cell in row])


def write_json(columns, rows, path, experiment):
    """Write the JSON mirror of a table (same values as the CSV)."""
    payload = {
        "experiment": experiment,
        "columns": columns,
        "rows": [
            [float(format_cell(c)) if isinstance(c, float) else c for c in row]
            for row in rows
        ],
    }
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")
