"""CSV loading for figure recipes.

Tables are read eagerly and validated before any drawing happens, so a bad
input never leaves a partially written image behind.  All problems with an
input file raise :class:`FigureError` with a message that names the file
and, for missing columns, the column.
"""

import csv
import os

import numpy as np


class FigureError(ValueError):
    """An input table cannot be used for the requested figure."""


class Table:
    """One CSV table: header, rows, and typed column access.

    Parameters
    ----------
    path : str
        CSV file with a header row.  Empty files and header-only files are
        rejected; figures need at least one data row.

    Attributes
    ----------
    path : str
        The file the table came from.
    label : str
        File stem, used as the legend label when two tables are overlaid.
    columns : list of str
        Header names in file order.
    rows : list of list of str
        Data rows as unparsed strings.
    """

    def __init__(self, path):
        self.path = path
        self.label = os.path.splitext(os.path.basename(path))[0]
        try:
            with open(path, newline="", encoding="utf-8") as fh:
                reader = csv.reader(fh)
                header = next(reader, None)
                rows = [row for row in reader if row]
        except OSError as exc:
            raise FigureError("cannot read %s: %s" % (path, exc)) from exc
        if header is None:
            raise FigureError("%s is empty" % path)
        if not rows:
            raise FigureError("%s has a header but no data rows" % path)
        self.columns = header
        self.rows = rows

    def has(self, name):
        return name in self.columns

    def require(self, names):
        """Raise FigureError naming any of ``names`` absent from the header."""
        missing = [name for name in names if name not in self.columns]
        if missing:
            raise FigureError(
                "%s is missing required column%s %s (found: %s)"
                % (
                    self.path,
                    "s" if len(missing) > 1 else "",
                    ", ".join(missing),
                    ", ".join(self.columns),
                )
            )

    def strings(self, name):
        """Column ``name`` as a list of strings."""
        self.require([name])
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]

    def floats(self, name):
        """Column ``name`` parsed as a float array."""
        values = self.strings(name)
        try:
            return np.array([float(v) for v in values], dtype=float)
        except ValueError:
            raise FigureError(
                "column %r of %s is not numeric" % (name, self.path)
            ) from None
