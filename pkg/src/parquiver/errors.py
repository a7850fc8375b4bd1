"""Exception types shared across the package.

DomainError covers invalid mathematical input (bad series strings, weights
off the lattice, non-dominant vertices, ill-formed parameter files).
NumericFailure covers floating-point breakdown in the gradient flow.
The command line maps DomainError to exit code 2 and NumericFailure to 3.
"""


class DomainError(ValueError):
    """Input is outside the mathematical domain of the operation."""


class NumericFailure(RuntimeError):
    """A numeric routine produced NaN/overflow or otherwise broke down."""
