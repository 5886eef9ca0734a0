"""thetaval: certified arbitrary-precision verification of explicit values
of Ramanujan's theta function phi(q) = sum q^(n^2).

The package evaluates theta functions, modular quantities and exact
closed forms as midpoint-radius balls with certified error bounds, and
ships a catalog of explicit identities (classical Gamma-function values,
the n = 3..45 quotients, the 13/27/63 values, Yi's h-quotient values,
and the completed lost-notebook evaluation of phi(e^(-7 pi sqrt 7)))
that is verified to better than one hundred decimal digits.
"""

__version__ = "0.1.0"

from .precision import Ball, PrecCtx
from .qseries import QPoint

__all__ = ["Ball", "PrecCtx", "QPoint", "__version__"]
