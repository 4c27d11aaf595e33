"""Figure recipes for the tables the ``sim`` command line writes.

Six figures are available:

* ``sweep-drive``  fidelity on the left axis and gate time on the right
  axis versus the coupling-to-drive ratio
* ``sweep-n``      per-gate fidelity lines versus register size
* ``qec3``         bit-flip code fidelity bars, one per error case
* ``steane``       Steane encoding fidelity versus the drive ratio
* ``norm-error``   log-log worst-case gate error versus the drive ratio
* ``table1``       per-row gate fidelity markers for the device table

Each recipe declares the columns it needs; ``render`` loads and validates
every input before the output path is touched, so a bad table never leaves
an image behind.  All numbers come from the CSVs; nothing is recomputed.
Styling is fixed and saved images embed no timestamps, so rerunning a
recipe overwrites its output deterministically.
"""

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.ticker import MaxNLocator

from .tables import FigureError, Table

FIGURES = ("sweep-drive", "sweep-n", "qec3", "steane", "norm-error", "table1")

_RC = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 130,
    "savefig.dpi": 130,
    "font.size": 11,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.6,
    "lines.markersize": 4.5,
    "legend.fontsize": 9,
    "svg.hashsalt": "gateplots",
}

_TIME_STYLE = {"linestyle": ":", "color": "0.45", "marker": "^"}


def _series_label(base, table, many):
    return "%s (%s)" % (base, table.label) if many else base


def _match_categories(tables, column):
    """Category labels shared by all tables, or a loud mismatch error."""
    first = tables[0].strings(column)
    for table in tables[1:]:
        if table.strings(column) != first:
            raise FigureError(
                "%r entries differ between %s and %s; overlays need matching rows"
                % (column, tables[0].path, table.path)
            )
    return first


def _draw_sweep_drive(fig, tables):
    ax = fig.add_subplot(111)
    twin = ax.twinx()
    twin.grid(False)
    many = len(tables) > 1
    for i, table in enumerate(tables):
        table.require(["j_over_omega", "gate_time_ns", "fidelity_unitary"])
        ratio = table.floats("j_over_omega")
        ax.plot(
            ratio,
            table.floats("fidelity_unitary"),
            marker="o",
            color="C%d" % (2 * i),
            label=_series_label("no noise", table, many),
        )
        if table.has("fidelity_noisy"):
            ax.plot(
                ratio,
                table.floats("fidelity_noisy"),
                linestyle="--",
                marker="s",
                color="C%d" % (2 * i + 1),
                label=_series_label("with noise", table, many),
            )
        twin.plot(
            ratio,
            table.floats("gate_time_ns"),
            label=_series_label("gate time", table, many),
            **_TIME_STYLE,
        )
    ax.set_xlabel(r"$J/\Omega$")
    ax.set_ylabel("average gate fidelity")
    twin.set_ylabel("gate time (ns)")
    ax.set_title("Driven gate fidelity and gate time vs drive ratio")
    handles, labels = ax.get_legend_handles_labels()
    more, more_labels = twin.get_legend_handles_labels()
    ax.legend(handles + more, labels + more_labels, loc="lower right")


def _draw_sweep_n(fig, tables):
    ax = fig.add_subplot(111)
    many = len(tables) > 1
    for table in tables:
        table.require(["n", "gate", "fidelity_unitary"])
        n = table.floats("n")
        gate = np.array(table.strings("gate"))
        f_uni = table.floats("fidelity_unitary")
        f_noisy = table.floats("fidelity_noisy") if table.has("fidelity_noisy") else None
        for kind in dict.fromkeys(gate):
            mask = gate == kind
            ax.plot(
                n[mask],
                f_uni[mask],
                marker="o",
                label=_series_label("%s, no noise" % kind, table, many),
            )
            if f_noisy is not None:
                ax.plot(
                    n[mask],
                    f_noisy[mask],
                    linestyle="--",
                    marker="s",
                    label=_series_label("%s, with noise" % kind, table, many),
                )
    ax.xaxis.set_major_locator(MaxNLocator(integer=True))
    ax.set_xlabel("register size n")
    ax.set_ylabel("average gate fidelity")
    ax.set_title("Gate fidelity vs register size")
    ax.legend(loc="lower left")


def _draw_qec3(fig, tables):
    ax = fig.add_subplot(111)
    for table in tables:
        table.require(["error_case", "fidelity"])
    cases = _match_categories(tables, "error_case")
    width = 0.8 / len(tables)
    values = []
    for i, table in enumerate(tables):
        fid = table.floats("fidelity")
        values.append(fid)
        x = np.arange(len(cases)) + (i - 0.5 * (len(tables) - 1)) * width
        ax.bar(x, fid, width=width, label=table.label if len(tables) > 1 else None)
    lo = min(v.min() for v in values)
    hi = max(v.max() for v in values)
    pad = max(0.1 * (hi - lo), 0.002)
    ax.set_ylim(lo - pad, min(hi + pad, 1.0 + 0.2 * pad))
    ax.set_xticks(np.arange(len(cases)), cases)
    ax.grid(axis="y")
    ax.set_xlabel("error case")
    ax.set_ylabel("Bloch-averaged fidelity")
    ax.set_title("Bit-flip code fidelity by error case")
    if len(tables) > 1:
        ax.legend(loc="lower right")


def _draw_steane(fig, tables):
    ax = fig.add_subplot(111)
    twin = None
    many = len(tables) > 1
    for table in tables:
        table.require(["j_over_omega", "fidelity"])
        ratio = table.floats("j_over_omega")
        ax.plot(
            ratio,
            table.floats("fidelity"),
            marker="o",
            label=_series_label("encoded state", table, many),
        )
        if table.has("gate_time_ns"):
            if twin is None:
                twin = ax.twinx()
                twin.grid(False)
                twin.set_ylabel("encoding time (ns)")
            twin.plot(
                ratio,
                table.floats("gate_time_ns"),
                label=_series_label("encoding time", table, many),
                **_TIME_STYLE,
            )
    ax.set_xlabel(r"$J/\Omega$")
    ax.set_ylabel("Bloch-averaged fidelity")
    ax.set_title("Steane encoding fidelity vs drive ratio")
    handles, labels = ax.get_legend_handles_labels()
    if twin is not None:
        more, more_labels = twin.get_legend_handles_labels()
        handles, labels = handles + more, labels + more_labels
    ax.legend(handles, labels, loc="lower right")


def _draw_norm_error(fig, tables):
    ax = fig.add_subplot(111)
    many = len(tables) > 1
    for table in tables:
        table.require(["j_over_omega", "norm_error"])
        ratio = table.floats("j_over_omega")
        ax.plot(
            ratio,
            table.floats("norm_error"),
            marker="o",
            color="k" if not many else None,
            label=_series_label("max over subspaces", table, many),
        )
        for k in (1, 2, 3, 4):
            name = "norm_q%d" % k
            if table.has(name):
                ax.plot(
                    ratio,
                    table.floats(name),
                    linewidth=1.0,
                    alpha=0.7,
                    label=_series_label("q = %d" % k, table, many),
                )
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(r"$J/\Omega$")
    ax.set_ylabel("operator-norm gate error")
    ax.set_title("Worst-case gate error vs drive ratio")
    ax.legend(loc="lower left")


def _draw_table1(fig, tables):
    ax = fig.add_subplot(111)
    for table in tables:
        table.require(["row", "fidelity_unitary"])
    rows = _match_categories(tables, "row")
    many = len(tables) > 1
    offsets = np.linspace(-0.15, 0.15, len(tables)) if many else [0.0]
    for table, offset in zip(tables, offsets):
        x = np.arange(len(rows)) + offset
        ax.plot(
            x,
            table.floats("fidelity_unitary"),
            linestyle="none",
            marker="o",
            label=_series_label("no noise", table, many),
        )
        if table.has("fidelity_noisy"):
            ax.plot(
                x,
                table.floats("fidelity_noisy"),
                linestyle="none",
                marker="s",
                markerfacecolor="none",
                label=_series_label("with noise", table, many),
            )
    ax.axhline(0.99, color="0.6", linewidth=1.0, linestyle="--")
    ax.set_xticks(np.arange(len(rows)), rows)
    ax.grid(axis="y")
    ax.set_xlabel("device table row")
    ax.set_ylabel("average gate fidelity")
    ax.set_title("Driven gate fidelity per device table row")
    ax.legend(loc="lower right")


_DRAWERS = {
    "sweep-drive": _draw_sweep_drive,
    "sweep-n": _draw_sweep_n,
    "qec3": _draw_qec3,
    "steane": _draw_steane,
    "norm-error": _draw_norm_error,
    "table1": _draw_table1,
}


@dataclass(frozen=True)
class FigureRecipe:
    """One figure request.

    Parameters
    ----------
    figure : str
        One of ``FIGURES``.
    inputs : tuple of str
        One CSV path, or two to overlay a comparison run.
    out : str
        Output image path; the suffix picks the format (png, pdf, svg).
    title, xlabel, ylabel : str, optional
        Override the recipe's default labels (the left axis for dual-axis
        figures).  Legend labels come from the series and, for overlays,
        the input file stems.
    """

    figure: str
    inputs: tuple
    out: str
    title: str = None
    xlabel: str = None
    ylabel: str = None

    def __post_init__(self):
        if self.figure not in _DRAWERS:
            raise FigureError(
                "unknown figure %r; expected one of %s"
                % (self.figure, ", ".join(FIGURES))
            )
        object.__setattr__(self, "inputs", tuple(self.inputs))
        if not 1 <= len(self.inputs) <= 2:
            raise FigureError(
                "figures take one or two input tables, got %d" % len(self.inputs)
            )


def _output_metadata(path):
    suffix = path.rpartition(".")[2].lower()
    if suffix == "png":
        return {"Software": None}
    if suffix == "pdf":
        return {"Creator": None, "Producer": None, "CreationDate": None}
    if suffix == "svg":
        return {"Creator": None, "Date": None}
    return None


def render(recipe):
    """Render one figure recipe to its output image.

    Parameters
    ----------
    recipe : FigureRecipe
        Figure id, input table path(s), and output image path.

    Raises
    ------
    FigureError
        If an input table is empty, unreadable, or missing a column the
        figure needs, or if overlay inputs have mismatched category rows.
        Raised before the output file is created.
    OSError
        If the validated figure cannot be written to ``recipe.out``.
    """
    tables = [Table(path) for path in recipe.inputs]
    with matplotlib.rc_context(_RC):
        fig = plt.figure()
        try:
            _DRAWERS[recipe.figure](fig, tables)
            ax = fig.axes[0]
            if recipe.title is not None:
                ax.set_title(recipe.title)
            if recipe.xlabel is not None:
                ax.set_xlabel(recipe.xlabel)
            if recipe.ylabel is not None:
                ax.set_ylabel(recipe.ylabel)
            fig.tight_layout()
            fig.savefig(recipe.out, metadata=_output_metadata(recipe.out))
        finally:
            plt.close(fig)
