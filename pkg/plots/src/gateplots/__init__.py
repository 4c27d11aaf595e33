"""Figure rendering for CSV tables written by the ``sim`` command line.

Submodules:

* ``tables``   CSV loading with loud errors for missing columns
* ``figures``  the figure recipes and the ``render`` entry point
* ``cli``      the ``plot`` command
"""

__version__ = "0.1.0"
