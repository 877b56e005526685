"""Discrete Green's identities and Wiener-Hopf kernels for lattice diffraction.

Modules
-------
lattice_core   domains, boundary classes, stencils, Green's identity
dispersion     lattice and continuous dispersion, root selection
wh_catalog     kernels and forcings of the canonical problems, analogy maps
direct_oracle  brute-force truncated lattice solves
wh_solver      scalar factorization and the half-plane solver
fem_appendix   finite-element derivation of the stencils
cli            command line interface
"""

from .errors import InvalidInput, LatticeWHError, NumericalFailure

__version__ = "0.1.0"

__all__ = ["InvalidInput", "LatticeWHError", "NumericalFailure", "__version__"]
