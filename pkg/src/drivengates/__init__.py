"""Simulation of single-step multiqubit gates on Ising-coupled registers.

Submodules:

* ``linalg``     dense operators, embeddings, partial trace
* ``model``      device/drive descriptions, static Hamiltonian, frames
* ``evolution``  propagators, recurrence times, Lindblad integration
* ``gates``      ideal gate matrices and composite circuits
* ``fidelity``   trace/process fidelities and operator-norm error
* ``channels``   driven-gate channels and fast fidelity evaluation
* ``qec``        bit-flip and Steane encoding circuits
* ``synth``      circuit quantization, parameter search, golden table
* ``experiments``/``cli``  sweep runners and the ``sim`` command line
"""

__version__ = "0.1.0"
