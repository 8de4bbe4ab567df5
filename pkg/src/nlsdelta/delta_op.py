"""The periodic point-interaction operator -d^2/dx^2 + gamma*delta(x) on [-L, L].

The formal delta potential is realized as the self-adjoint extension of
the periodic Laplacian whose domain carries the derivative jump
condition

    zeta'(0+) - zeta'(0-) = gamma * zeta(0).

This module provides the exact objects of that construction -- the
deficiency element, the extension-parameter map gamma(theta), the
resolvent kernel, and the transcendental eigenvalue equations with their
closed-form eigenfunctions -- together with a symmetric finite-difference
discretization used as an oracle and as the evolution backbone.

All closed forms are stated in the literature on the cell [-pi, pi]; the
substitution x -> (pi/L) x (under which gamma rescales by L/pi) carries
them to a general half-period L, and is already applied in every formula
below.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from .errors import AdmissibilityError, NumericsError
from .rootfind import bisect

__all__ = [
    "EigenKind",
    "DeltaOperator",
    "DeltaEigenpair",
    "theta_norm_constant",
    "deficiency_element",
    "strength_from_theta",
    "resolvent_kernel",
    "negative_eigenvalue",
    "positive_eigenvalues",
    "integer_sine_eigenpairs",
    "full_spectrum",
    "periodic_grid",
    "sample_grid",
    "discretize",
    "spectrum_rows",
]

# beta = sqrt(i) with positive real part; governs the deficiency element.
_BETA = complex(1.0, 1.0) / math.sqrt(2.0)

# Relative guard band used when shrinking root brackets away from cot poles.
_BRACKET_EPS = 1e-12


class EigenKind(str, Enum):
    NEGATIVE_BOUND_STATE = "negative_bound_state"
    INTERIOR_ROOT = "interior_root"
    INTEGER_SINE = "integer_sine"


@dataclass(frozen=True)
class DeltaOperator:
    """Point-interaction operator of strength ``gamma`` on [-L, L].

    The gamma = +infinity extension (periodic Dirichlet-at-0 case, whose
    spectrum is exactly the integer-sine lattice) is requested with
    ``dirichlet=True``; ``gamma`` is ignored in that case.
    """

    gamma: float
    halfperiod: float
    dirichlet: bool = False

    def __post_init__(self) -> None:
        if not self.halfperiod > 0.0:
            raise AdmissibilityError(f"halfperiod must be positive, got {self.halfperiod!r}")
        if not self.dirichlet and not math.isfinite(self.gamma):
            raise AdmissibilityError(
                "infinite strength must be requested via the dirichlet flag"
            )


@dataclass(frozen=True)
class DeltaEigenpair:
    eigenvalue: float
    kind: EigenKind
    x: NDArray[np.float64]
    samples: NDArray[np.float64]

    @property
    def parity(self) -> str:
        # negative bound state and interior roots are even in x, the
        # integer sines odd; this is exact for the closed forms.
        return "odd" if self.kind is EigenKind.INTEGER_SINE else "even"


def periodic_grid(halfperiod: float, n: int) -> NDArray[np.float64]:
    """Uniform periodic grid x_j = -L + j*h, j = 0..n-1, h = 2L/n.

    n must be even so that a node lands exactly on the defect at x = 0
    (index n//2).
    """
    if n % 2 != 0:
        raise ValueError(f"periodic grid size must be even, got n={n}")
    h = 2.0 * halfperiod / n
    return -halfperiod + h * np.arange(n)


def sample_grid(halfperiod: float, n: int) -> NDArray[np.float64]:
    """Endpoint-inclusive uniform grid with n intervals on [-L, L], n even."""
    if n % 2 != 0:
        raise ValueError(f"sample grid size must be even, got n={n}")
    return np.linspace(-halfperiod, halfperiod, n + 1)


def theta_norm_constant(halfperiod: float) -> float:
    """Squared L2 norm of the raw (unnormalized) deficiency element.

    Closed form (sqrt2/4)(sinh(sqrt2 L) + sin(sqrt2 L)) / (cosh(sqrt2 L)
    - cos(sqrt2 L)); at L = pi this is the normalization constant theta
    of the self-adjoint extension parametrization.
    """
    s = math.sqrt(2.0) * halfperiod
    return (math.sqrt(2.0) / 4.0) * (math.sinh(s) + math.sin(s)) / (math.cosh(s) - math.cos(s))


def deficiency_element(
    halfperiod: float, n: int = 2048
) -> tuple[NDArray[np.float64], NDArray[np.complex128]]:
    """Normalized deficiency element g_{-i} sampled on [-L, L].

    g solves A* g = -i g away from the defect, where A is the periodic
    Laplacian restricted to functions vanishing at 0.  Closed form:

        g(x) = cosh(beta (|x| - L)) / (2 beta sinh(beta L)),
        beta = (1 + i)/sqrt(2),

    normalized by the closed-form constant ``theta_norm_constant`` so
    that ||g|| = 1 in L2(-L, L).
    """
    if not halfperiod > 0.0:
        raise AdmissibilityError(f"halfperiod must be positive, got {halfperiod!r}")
    x = sample_grid(halfperiod, n)
    arg = _BETA * (np.abs(x) - halfperiod)
    g = np.cosh(arg) / (2.0 * _BETA * cmath.sinh(_BETA * halfperiod))
    g = g / math.sqrt(theta_norm_constant(halfperiod))
    return x, g


def strength_from_theta(theta: float) -> float:
    """Extension strength gamma(theta) for theta in [0, 2*pi).

    gamma(theta) = -4 |sinh(beta pi)|^2 cos(theta/2)
                   / [sinh(sqrt2 pi) cos(theta/2 - pi/4)
                      + sin(sqrt2 pi) sin(theta/2 - pi/4)]

    sweeps all of R as theta varies, with a pole (the gamma = +infinity
    Dirichlet extension) at the unique zero theta_0 of the denominator;
    the pole is reported as math.inf.
    """
    if not 0.0 <= theta < 2.0 * math.pi:
        raise AdmissibilityError(f"theta={theta!r} outside [0, 2*pi)")
    s = math.sqrt(2.0) * math.pi
    # |sinh(beta*pi)|^2 = (cosh(sqrt2 pi) - cos(sqrt2 pi)) / 2
    mod2 = 0.5 * (math.cosh(s) - math.cos(s))
    half = 0.5 * theta
    denom = math.sinh(s) * math.cos(half - math.pi / 4.0) + math.sin(s) * math.sin(
        half - math.pi / 4.0
    )
    if denom == 0.0:
        return math.inf
    return -4.0 * mod2 * math.cos(half) / denom


def resolvent_kernel(
    k: complex, x, halfperiod: float
) -> complex | NDArray[np.complex128]:
    """Integral kernel J_k of the free periodic resolvent on [-L, L].

        J_k(x) = 2L * cosh(i k (|x| - L)) / (2 i k sinh(i k L))

    satisfies -J'' - k^2 J = 0 away from 0 and the derivative jump
    J'(0+) - J'(0-) = -2L.  Singular on the lattice k = n*pi/L (where
    sinh(i k L) vanishes), reported as an admissibility error.
    """
    L = halfperiod
    k = complex(k)
    ik = 1j * k
    denom = 2.0 * ik * cmath.sinh(ik * L)
    if abs(denom) < 1e-12 * max(1.0, abs(ik * L)):
        raise AdmissibilityError(
            f"resolvent kernel singular: k={k!r} lies on the lattice n*pi/L"
        )
    xa = np.abs(np.asarray(x, dtype=float))
    out = 2.0 * L * np.cosh(ik * (xa - L)) / denom
    return complex(out) if np.isscalar(x) else np.asarray(out)


def negative_eigenvalue(gamma: float, halfperiod: float, n: int = 2048) -> DeltaEigenpair:
    """The unique negative eigenvalue -mu^2 for attractive strength gamma < 0.

    mu > 0 solves gamma = -2 mu tanh(mu L); the eigenfunction
    cosh(mu (|x| - L)) is strictly positive and even.
    """
    if not gamma < 0.0:
        raise AdmissibilityError(
            f"negative eigenvalue exists only for gamma < 0, got gamma={gamma!r}"
        )
    L = halfperiod

    def f(mu: float) -> float:
        return 2.0 * mu * math.tanh(mu * L) + gamma

    hi = max(1.0 / L, -gamma)
    while f(hi) < 0.0:
        hi *= 2.0
    mu = bisect(f, 0.0, hi, xtol=1e-15 * max(1.0, hi))
    x = sample_grid(L, n)
    psi = np.cosh(mu * (np.abs(x) - L))
    psi /= math.sqrt(np.trapezoid(psi * psi, x))
    return DeltaEigenpair(-mu * mu, EigenKind.NEGATIVE_BOUND_STATE, x, psi)


def _root_bracket(j: int, gamma: float, L: float) -> tuple[float, float]:
    # cot(kappa L) = 2 kappa / gamma has exactly one root per half-lattice
    # cell: ((j-1/2) pi, j pi)/L for gamma < 0, ((j-1) pi, (j-1/2) pi)/L
    # for gamma > 0, j = 1, 2, ...
    if gamma < 0.0:
        lo, hi = (j - 0.5) * math.pi, j * math.pi
    else:
        lo, hi = (j - 1.0) * math.pi, (j - 0.5) * math.pi
    pad = _BRACKET_EPS * max(1.0, hi)
    return (lo + pad) / L, (hi - pad) / L


def positive_eigenvalues(
    gamma: float, halfperiod: float, count: int, n: int = 2048
) -> list[DeltaEigenpair]:
    """The first ``count`` positive eigenvalues kappa_j^2 from cot(kappa L) = 2 kappa / gamma.

    The roots interleave with the integer-sine lattice (j pi/L)^2: below
    it for gamma < 0, above it for gamma > 0.  Eigenfunctions are the
    even kernels cos(kappa_j (|x| - L)).
    """
    if gamma == 0.0:
        raise AdmissibilityError("gamma=0 is the free Laplacian; no interior roots")
    if count < 1:
        raise AdmissibilityError(f"count must be >= 1, got {count}")
    L = halfperiod
    x = sample_grid(L, n)
    pairs: list[DeltaEigenpair] = []
    for j in range(1, count + 1):
        lo, hi = _root_bracket(j, gamma, L)

        def f(kappa: float) -> float:
            return 1.0 / math.tan(kappa * L) - 2.0 * kappa / gamma

        try:
            kappa = bisect(f, lo, hi, xtol=1e-15 * max(1.0, hi))
        except NumericsError as exc:  # pragma: no cover - cot is monotone on the bracket
            raise NumericsError(
                f"failed to bracket interior root j={j} for gamma={gamma}: {exc}"
            ) from exc
        v = np.cos(kappa * (np.abs(x) - L))
        v /= math.sqrt(np.trapezoid(v * v, x))
        pairs.append(DeltaEigenpair(kappa * kappa, EigenKind.INTERIOR_ROOT, x, v))
    return pairs


def integer_sine_eigenpairs(
    halfperiod: float, count: int, n: int = 2048
) -> list[DeltaEigenpair]:
    """Eigenpairs ((j pi/L)^2, sin(j pi x / L)) common to every extension.

    These odd eigenfunctions vanish at the defect, so they are blind to
    gamma; for the Dirichlet (+infinity) extension they are the entire
    spectrum.
    """
    L = halfperiod
    x = sample_grid(L, n)
    pairs = []
    for j in range(1, count + 1):
        v = np.sin(j * math.pi * x / L)
        v /= math.sqrt(np.trapezoid(v * v, x))
        pairs.append(DeltaEigenpair((j * math.pi / L) ** 2, EigenKind.INTEGER_SINE, x, v))
    return pairs


def full_spectrum(op: DeltaOperator, count: int, n: int = 2048) -> list[DeltaEigenpair]:
    """Lowest ``count`` eigenpairs of the operator, sorted ascending.

    Merges the negative bound state (gamma < 0 only), the interior-root
    family, and the integer sines.  For gamma = 0 the interior roots
    degenerate onto the sine lattice and the pure Laplacian eigenvalues
    {0} union {(j pi/L)^2 doubly} are returned instead.
    """
    if op.dirichlet:
        return integer_sine_eigenpairs(op.halfperiod, count, n)
    L = op.halfperiod
    if op.gamma == 0.0:
        x = sample_grid(L, n)
        const = DeltaEigenpair(
            0.0, EigenKind.INTERIOR_ROOT, x, np.full(n + 1, 1.0 / math.sqrt(2.0 * L))
        )
        cosines = []
        for j in range(1, count + 1):
            v = np.cos(j * math.pi * x / L)
            v /= math.sqrt(np.trapezoid(v * v, x))
            cosines.append(DeltaEigenpair((j * math.pi / L) ** 2, EigenKind.INTERIOR_ROOT, x, v))
        pairs = [const] + cosines + integer_sine_eigenpairs(L, count, n)
    else:
        pairs = positive_eigenvalues(op.gamma, L, count, n) + integer_sine_eigenpairs(
            L, count, n
        )
        if op.gamma < 0.0:
            pairs.append(negative_eigenvalue(op.gamma, L, n))
    pairs.sort(key=lambda p: p.eigenvalue)
    return pairs[:count]


def discretize(op: DeltaOperator, n: int) -> NDArray[np.float64]:
    """Symmetric finite-difference matrix of -d^2/dx^2 + gamma*delta on the periodic grid.

    Standard second-order (2, -1) stencil with periodic wrap; the delta
    is collocated as gamma/h at the node x = 0 (index n//2), which keeps
    the matrix symmetric and converges at first order to the exact
    transcendental eigenvalues.
    """
    if op.dirichlet:
        raise AdmissibilityError("the Dirichlet (+infinity) extension has no gamma/h matrix")
    if n < 64:
        raise AdmissibilityError(f"grid too coarse for discretize: n={n} < 64")
    if n % 2 != 0:
        raise AdmissibilityError(f"grid size must be even, got n={n}")
    h = 2.0 * op.halfperiod / n
    m = np.zeros((n, n))
    idx = np.arange(n)
    m[idx, idx] = 2.0 / h**2
    m[idx, (idx + 1) % n] = -1.0 / h**2
    m[idx, (idx - 1) % n] = -1.0 / h**2
    m[n // 2, n // 2] += op.gamma / h
    return m


def spectrum_rows(pairs: list[DeltaEigenpair]) -> list[tuple[float, str, str]]:
    """Flatten eigenpairs to (eigenvalue, kind, parity) rows for CSV export."""
    return [(p.eigenvalue, p.kind.value, p.parity) for p in pairs]
