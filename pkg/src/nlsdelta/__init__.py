"""Standing waves of the cubic Schrodinger equation with a periodic point defect.

Subpackages by concern: elliptic (special functions), delta_op (the
point-interaction operator), wave (profile construction), linops
(linearized operators), stability (slope + index classification),
evolve (split-step time integration), cli (command-line surface).
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    AdmissibilityError,
    InconclusiveError,
    NlsDeltaError,
    NumericsError,
)
