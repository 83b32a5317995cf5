"""Entanglement asymmetry of monitored free-fermion quenches, postselected
on the no-loss trajectory.

Modules
-------
xy          momentum kernels of the pairing-chain protocol
ssh         momentum kernels of the dimerized-chain protocol
gaussian    correlation matrices, entropies, charged moments, asymmetry
ed          dense exact-diagonalization cross-check for small chains
quasiparticle  ballistic predictions and block-determinant asymptotics
analysis    crossing detection, decay-rate fits, restoration verdicts
cli         command-line front end and the CSV interchange format
"""

from . import errors, grids

__all__ = ["errors", "grids", "__version__"]

__version__ = "0.1.0"
