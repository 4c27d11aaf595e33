"""Experiment configuration: TOML files with explicit physical units.

Configs are TOML documents.  Frequencies are quoted the way the rest of the
package reports them, as frequency/2pi strings with a unit suffix ("40 MHz",
"1.2 GHz"); times carry ns/us/ms/s suffixes.  Dimensionless entries (drive
ratios, counts, seeds) are plain numbers.  Unknown keys are rejected so that
typos fail loudly instead of silently keeping a default.
"""

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from dataclasses import dataclass, field, replace

import numpy as np

from .evolution import NoiseSpec
from .synth import SynthConstraints

TWO_PI = 2.0 * np.pi

EXPERIMENTS = (
    "sweep-drive",
    "sweep-n",
    "qec3",
    "steane",
    "synth",
    "table1-check",
    "norm-error",
)

_FREQ_UNITS = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}
_TIME_UNITS = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "µs": 1e-6, "ns": 1e-9}

# Per-n ratio grid 4..20 and register sweep 1..5 used by the shipped sweeps.
DEFAULT_RATIOS = tuple(range(4, 21))
DEFAULT_N_GRID = (1, 2, 3, 4, 5)


def _split_quantity(value, kind):
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise ValueError("%s values must be strings with a unit" % kind)
    if not isinstance(value, str):
        raise ValueError(
            "%s values need a unit suffix, e.g. %r"
            % (kind, "40 MHz" if kind == "frequency" else "30 us")
        )
    parts = value.split()
    if len(parts) != 2:
        raise ValueError("cannot parse %s %r; expected '<number> <unit>'" % (kind, value))
    try:
        number = float(parts[0])
    except ValueError:
        raise ValueError("cannot parse %s %r" % (kind, value)) from None
    return number, parts[1].lower()


def parse_frequency(value):
    """Angular frequency (rad/s) of a frequency/2pi string like '40 MHz'."""
    number, unit = _split_quantity(value, "frequency")
    if unit not in _FREQ_UNITS:
        raise ValueError("unknown frequency unit %r" % unit)
    return TWO_PI * number * _FREQ_UNITS[unit]


def parse_time(value):
    """Seconds from a duration string like '30 us' or '50 ns'."""
    number, unit = _split_quantity(value, "time")
    if unit not in _TIME_UNITS:
        raise ValueError("unknown time unit %r" % unit)
    return number * _TIME_UNITS[unit]


@dataclass(frozen=True)
class ExperimentConfig:
    """Typed view of one experiment's configuration.

    Frequencies are angular (rad/s), times seconds.  Fields irrelevant to
    the selected experiment keep their defaults; ``compensate`` defaults per
    experiment (light-shift compensation on for the bit-flip circuit, off
    for the Steane encoder, matching the measured reference behavior).
    """

    experiment: str
    coupling: float = TWO_PI * 40e6
    omega: float = 0.0
    n_controls: int = 2
    ratios: tuple = DEFAULT_RATIOS
    n_grid: tuple = DEFAULT_N_GRID
    ratio: float = 8.0
    theta: float = 0.0
    noise: NoiseSpec = None
    compensate: bool = None
    table_path: str = None
    synth_seeds: int = 50
    constraints: SynthConstraints = field(default_factory=SynthConstraints)
    symmetric: bool = True
    seed: int = 0
    threads: int = 1
    out: str = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(
                "unknown experiment %r; expected one of %s"
                % (self.experiment, ", ".join(EXPERIMENTS))
            )
        ratios = tuple(float(r) for r in self.ratios)
        n_grid = tuple(int(n) for n in self.n_grid)
        if not ratios or not n_grid:
            raise ValueError("grids must be nonempty")
        if min(ratios) <= 0:
            raise ValueError("drive ratios must be positive")
        if self.experiment == "sweep-n" and max(n_grid) > 6:
            raise ValueError(
                "sweep-n is capped at 6 controls (the noisy register "
                "propagates a 2^(2(n+1))-element superoperator)"
            )
        if min(n_grid) < 1:
            raise ValueError("register sweep needs at least one control")
        if self.coupling <= 0 or self.ratio <= 0:
            raise ValueError("coupling and drive ratio must be positive")
        if self.threads < 1 or self.synth_seeds < 1:
            raise ValueError("threads and synth seeds must be at least 1")
        compensate = self.compensate
        if compensate is None:
            compensate = self.experiment != "steane"
        object.__setattr__(self, "ratios", ratios)
        object.__setattr__(self, "n_grid", n_grid)
        object.__setattr__(self, "compensate", bool(compensate))


def _take(section, key, default=None):
    return section.pop(key) if key in section else default


def _reject_leftovers(section, name):
    if section:
        raise ValueError(
            "unknown key%s in [%s]: %s"
            % ("s" if len(section) > 1 else "", name, ", ".join(sorted(section)))
        )


def config_from_dict(raw):
    """Build an ExperimentConfig from a parsed TOML document."""
    raw = dict(raw)
    experiment = _take(raw, "experiment")
    if experiment is None:
        raise ValueError("config needs a top-level 'experiment' key")
    kwargs = {"experiment": experiment}
    for key in ("seed", "threads"):
        value = _take(raw, key)
        if value is not None:
            kwargs[key] = int(value)
    out = _take(raw, "out")
    if out is not None:
        kwargs["out"] = str(out)

    device = dict(_take(raw, "device", {}))
    if "coupling" in device:
        kwargs["coupling"] = parse_frequency(device.pop("coupling"))
    if "omega" in device:
        kwargs["omega"] = parse_frequency(device.pop("omega"))
    if "n_controls" in device:
        kwargs["n_controls"] = int(device.pop("n_controls"))
    _reject_leftovers(device, "device")

    drive = dict(_take(raw, "drive", {}))
    if "ratios" in drive:
        kwargs["ratios"] = tuple(drive.pop("ratios"))
    if "ratio" in drive:
        kwargs["ratio"] = float(drive.pop("ratio"))
    if "theta" in drive:
        kwargs["theta"] = float(drive.pop("theta"))
    _reject_leftovers(drive, "drive")

    sweep = dict(_take(raw, "sweep", {}))
    if "n_grid" in sweep:
        kwargs["n_grid"] = tuple(sweep.pop("n_grid"))
    _reject_leftovers(sweep, "sweep")

    noise = _take(raw, "noise")
    if noise is not None:
        noise = dict(noise)
        t1 = noise.pop("t1", None)
        t2 = noise.pop("t2", None)
        _reject_leftovers(noise, "noise")
        if t1 is None or t2 is None:
            raise ValueError("[noise] needs both t1 and t2")
        kwargs["noise"] = NoiseSpec(t1=parse_time(t1), t2=parse_time(t2))

    qec = dict(_take(raw, "qec", {}))
    if "compensate" in qec:
        kwargs["compensate"] = bool(qec.pop("compensate"))
    _reject_leftovers(qec, "qec")

    table = dict(_take(raw, "table", {}))
    if "path" in table:
        kwargs["table_path"] = str(table.pop("path"))
    _reject_leftovers(table, "table")

    synth = dict(_take(raw, "synth", {}))
    if "seeds" in synth:
        kwargs["synth_seeds"] = int(synth.pop("seeds"))
    if "symmetric" in synth:
        kwargs["symmetric"] = bool(synth.pop("symmetric"))
    cons = {}
    for key in ("jz_min", "jz_max"):
        if key in synth:
            cons[key] = parse_frequency(synth.pop(key))
    for key in (
        "ratio_min", "ratio_max", "alpha_rel", "alpha_tol",
        "cross_ratio_max", "swap_ratio_max",
    ):
        if key in synth:
            cons[key] = float(synth.pop(key))
    if cons:
        kwargs["constraints"] = replace(SynthConstraints(), **cons)
    _reject_leftovers(synth, "synth")

    _reject_leftovers(raw, "top level")
    return ExperimentConfig(**kwargs)


def load_config(path):
    """Parse a TOML config file into an ExperimentConfig."""
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    return config_from_dict(raw)
