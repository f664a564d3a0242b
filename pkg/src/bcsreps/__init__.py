"""Gibbs states of the BCS Hamiltonian in three inequivalent representations.

Modules
-------
material
    SI inputs and the dimensionless groups derived from them.
fockring
    Exact finite Fock-space checks of the pairing transformation.
gap
    Gap equations, the film-phase spectrum and shell mode counting.
thermo
    Critical fields, specific heats and free-energy competition.
cli
    Command-line driver.
"""

from .errors import (ConfigError, ConsistencyError, DomainError, ModelViolationWarning,
                     NumericError, RenderError, SizeError)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ConsistencyError", "DomainError", "ModelViolationWarning",
    "NumericError", "RenderError", "SizeError", "__version__",
]
