"""Dnoidal-peak standing-wave profiles with a point defect at x = 0.

A standing wave u(x,t) = e^{i omega t} phi(x) of

    i u_t + u_xx + Z delta(x) u + |u|^2 u = 0,   x in [-L, L] periodic,

has a real profile solving -phi'' + omega phi - phi^3 = 0 away from 0
together with the corner condition phi'(0+) - phi'(0-) = -Z phi(0).
Away from the defect the profile rides the classical dnoidal orbit

    2 (phi')^2 = (eta1^2 - phi^2)(phi^2 - eta2^2),
    eta1^2 + eta2^2 = 2 omega,

and the defect is absorbed by a shifted argument:

    phi(x)  = eta1 * dn(eta1 |x|/sqrt2 + a; k)   (Z > 0, peak at 0),
    zeta(x) = eta1 * dn(eta1 |x|/sqrt2 - a; k)   (Z < 0, trough at 0),

with modulus k^2 = (eta1^2 - eta2^2)/eta1^2.  The free parameter eta2
is pinned down by requiring the minimal period to equal the cell length
2L.  The peak map T_-(eta2) (Z>0) is strictly decreasing; the trough map
T_+(eta2) (Z<0) is observed numerically to dip below its endpoint limit
T1 before rising back to it, so the solve targets the decreasing branch
where the root is unique (see solve_eta2).

Existence thresholds: the period maps range over (T0(omega,Z), inf)
resp. (T1(omega,Z), inf), so a wave of period 2L exists iff 2L exceeds
the corresponding threshold (together with omega > Z^2/4).  The separate
small-defect continuation condition omega > pi^2/(2 L^2) is computed and
reported as a diagnostic flag, but deliberately does not veto
construction: profiles at moderate Z exist well below it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.typing import NDArray

from . import elliptic
from .errors import AdmissibilityError, NumericsError
from .rootfind import bisect

__all__ = [
    "SignBranch",
    "WaveParams",
    "WaveProfile",
    "theta_admissible",
    "lambda_scale",
    "phi_at_zero",
    "period_minus",
    "period_plus",
    "classic_period",
    "threshold_T0",
    "threshold_T1",
    "period_threshold",
    "solve_eta2",
    "build_profile",
    "solitary_profile",
    "solitary_limit_check",
]

_SQRT2 = math.sqrt(2.0)

# Bracket shrink factor for the eta2 bisection, relative to theta(omega, Z).
_ETA2_BRACKET_EPS = 1e-12

# Maximum allowed |T - 2L| after the period solve.  The bisection runs
# at machine xtol; this guard only has to sit above the evaluation
# noise of the period map near its root.
PERIOD_RESIDUAL_TOL = 5e-12


class SignBranch(str, Enum):
    PLUS_SHIFT = "plus_shift"    # Z > 0, peak at the defect
    MINUS_SHIFT = "minus_shift"  # Z < 0, trough at the defect
    CLASSIC = "classic"          # Z = 0, plain dnoidal


@dataclass(frozen=True)
class WaveParams:
    """Parameter triple (omega, Z, L) of a standing wave with period 2L."""

    omega: float
    z: float
    halfperiod: float

    def __post_init__(self) -> None:
        if not self.halfperiod > 0.0:
            raise AdmissibilityError(f"halfperiod must be positive, got {self.halfperiod!r}")
        if not self.omega > self.z**2 / 4.0:
            raise AdmissibilityError(
                f"omega={self.omega!r} violates omega > Z^2/4 = {self.z ** 2 / 4.0!r}"
            )

    @property
    def small_z_continuation_ok(self) -> bool:
        """Whether omega > pi^2/(2 L^2), the hypothesis under which the
        wave family continues down to Z = 0 (and the Z = 0 dnoidal of
        period 2L exists at all)."""
        return self.omega > math.pi**2 / (2.0 * self.halfperiod**2)


def theta_admissible(omega: float, z: float) -> float:
    """Upper end theta(omega, Z) of the admissible eta2 interval (0, theta)."""
    disc = omega - z**2 / 8.0
    if disc <= 0.0:
        raise AdmissibilityError(f"omega={omega!r} too small for |Z|={abs(z)!r}")
    return -(_SQRT2 / 4.0) * abs(z) + math.sqrt(disc)


def lambda_scale(omega: float, z: float) -> float:
    """The companion scale lambda(omega, Z) = +sqrt2/4 |Z| + sqrt(omega - Z^2/8)."""
    disc = omega - z**2 / 8.0
    if disc <= 0.0:
        raise AdmissibilityError(f"omega={omega!r} too small for |Z|={abs(z)!r}")
    return (_SQRT2 / 4.0) * abs(z) + math.sqrt(disc)


def _eta1_sq(eta2: float, omega: float) -> float:
    return 2.0 * omega - eta2**2


def _modulus(eta2: float, omega: float) -> float:
    # k^2 = (eta1^2 - eta2^2)/eta1^2 = (2 omega - 2 eta2^2)/(2 omega - eta2^2)
    e1sq = _eta1_sq(eta2, omega)
    return math.sqrt((e1sq - eta2**2) / e1sq)


def _check_eta2(eta2: float, omega: float, z: float) -> float:
    th = theta_admissible(omega, z)
    if not 0.0 < eta2 < th or (z == 0.0 and not eta2 < math.sqrt(omega)):
        raise AdmissibilityError(
            f"eta2={eta2!r} outside the admissible interval (0, {th!r}) "
            f"for omega={omega!r}, Z={z!r}"
        )
    return th


def phi_at_zero(eta2: float, omega: float, z: float) -> float:
    """Defect value Phi(eta2, omega, Z) = phi(0) on the physical branch.

    Root of (Z^2/4) Phi^2 = F(Phi)/2 with
    F(t) = (eta1^2 - t^2)(t^2 - eta2^2); the larger root

        Phi^2 = [(2 omega - Z^2/2) + sqrt((2 omega - Z^2/2)^2
                  - 4 eta2^2 (2 omega - eta2^2))] / 2

    is the one compatible with the peak/trough geometry.
    """
    _check_eta2(eta2, omega, z)
    b = 2.0 * omega - z**2 / 2.0
    disc = b * b - 4.0 * eta2**2 * _eta1_sq(eta2, omega)
    if disc < 0.0:
        raise AdmissibilityError(
            f"negative discriminant at eta2={eta2!r}, omega={omega!r}, Z={z!r}"
        )
    return math.sqrt(0.5 * (b + math.sqrt(disc)))


def _shift(eta2: float, omega: float, z: float) -> float:
    """Argument shift a = dn^{-1}(Phi/eta1; k) in [0, K(k)]."""
    if z == 0.0:
        return 0.0
    eta1 = math.sqrt(_eta1_sq(eta2, omega))
    k = _modulus(eta2, omega)
    return elliptic.inverse_dn(phi_at_zero(eta2, omega, z) / eta1, k)


def period_minus(eta2: float, omega: float, z: float) -> float:
    """Minimal period T_- = 2 sqrt2/eta1 * [K(k) - a] of the Z > 0 peak profile.

    Strictly decreasing in eta2, diverging as eta2 -> 0 and tending to
    the threshold T0(omega, Z) as eta2 -> theta(omega, Z).
    """
    _check_eta2(eta2, omega, z)
    eta1 = math.sqrt(_eta1_sq(eta2, omega))
    k = _modulus(eta2, omega)
    return (2.0 * _SQRT2 / eta1) * (elliptic.complete_K(k) - _shift(eta2, omega, z))


def period_plus(eta2: float, omega: float, z: float) -> float:
    """Minimal period T_+ = 2 sqrt2/eta1 * [K(k) + a] of the Z < 0 trough profile.

    Diverges as eta2 -> 0 and tends to T1(omega, Z) as eta2 -> theta,
    but is *not* monotone: it passes through an interior minimum below
    T1 before climbing back (cross-checked against direct ODE
    integration of the profile equation).  Only the initial decreasing
    branch is used by solve_eta2.
    """
    _check_eta2(eta2, omega, z)
    eta1 = math.sqrt(_eta1_sq(eta2, omega))
    k = _modulus(eta2, omega)
    return (2.0 * _SQRT2 / eta1) * (elliptic.complete_K(k) + _shift(eta2, omega, z))


def classic_period(eta2: float, omega: float) -> float:
    """Minimal period of the classical (Z = 0) dnoidal wave, 2 sqrt2 K(k)/eta1."""
    return period_minus(eta2, omega, 0.0)


def _k0_a0(omega: float, z: float) -> tuple[float, float]:
    lam = lambda_scale(omega, z)
    k0_sq = _SQRT2 * abs(z) * math.sqrt(omega - z**2 / 8.0) / lam**2
    k0 = math.sqrt(k0_sq)
    a0 = elliptic.inverse_dn(math.sqrt(omega - z**2 / 4.0) / lam, k0)
    return k0, a0


def threshold_T0(omega: float, z: float) -> float:
    """Existence threshold T0(omega, Z) = lim_{eta2->theta} T_-(eta2).

        T0 = 2 sqrt2/lambda * [K(k0) - a0],
        k0^2 = sqrt2 |Z| sqrt(omega - Z^2/8) / lambda^2,
        dn(a0; k0) = sqrt(omega - Z^2/4) / lambda.

    Decreasing in omega and -> 0 as omega -> inf.  The map is
    discontinuous at Z = 0: expanding dn(a0; k0) for small |Z| gives
    sin^2 a0 -> 1/2, i.e. a0 -> pi/4, hence T0 -> sqrt2 pi/(2 sqrt omega)
    as Z -> 0, which is *half* the classical dnoidal threshold
    sqrt2 pi/sqrt(omega) returned at Z = 0 exactly.
    """
    if not omega > z**2 / 4.0:
        raise AdmissibilityError(f"omega={omega!r} violates omega > Z^2/4")
    if z == 0.0:
        return _SQRT2 * math.pi / math.sqrt(omega)
    k0, a0 = _k0_a0(omega, z)
    return (2.0 * _SQRT2 / lambda_scale(omega, z)) * (elliptic.complete_K(k0) - a0)


def threshold_T1(omega: float, z: float) -> float:
    """Existence threshold for the trough branch: T1 = T0 + 4 sqrt2 a0 / lambda.

    Like T0 this is discontinuous at Z = 0: a0 -> pi/4 as Z -> 0, so
    T1 -> (3/2) sqrt2 pi/sqrt(omega), above the classical threshold
    returned at Z = 0 exactly.
    """
    if not omega > z**2 / 4.0:
        raise AdmissibilityError(f"omega={omega!r} violates omega > Z^2/4")
    if z == 0.0:
        return _SQRT2 * math.pi / math.sqrt(omega)
    k0, a0 = _k0_a0(omega, z)
    return (2.0 * _SQRT2 / lambda_scale(omega, z)) * (elliptic.complete_K(k0) + a0)


def period_threshold(omega: float, z: float) -> float:
    """The threshold relevant to the sign of Z (T0 for Z >= 0, T1 for Z < 0)."""
    return threshold_T0(omega, z) if z >= 0.0 else threshold_T1(omega, z)


def solve_eta2(params: WaveParams) -> float:
    """The eta2 with minimal period equal to the cell length 2L.

    Bisection on the initial decreasing branch of the period map, where
    the root is unique; raises an admissibility error (reporting the
    threshold) when 2L does not exceed it.  For Z < 0 the trough map
    additionally dips below T1 near its upper end (see period_plus), so
    requiring 2L > T1 keeps the solve on the decreasing branch; waves
    on the short rising branch are deliberately not constructed.
    """
    omega, z, L = params.omega, params.z, params.halfperiod
    target = 2.0 * L
    thresh = period_threshold(omega, z)
    if not target > thresh:
        kind = "T0" if z >= 0.0 else "T1"
        raise AdmissibilityError(
            f"no wave of period 2L={target!r}: requires 2L > {kind}(omega,Z)={thresh!r}"
        )
    period = period_minus if z >= 0.0 else period_plus
    upper = theta_admissible(omega, z) if z != 0.0 else math.sqrt(omega)
    eps = _ETA2_BRACKET_EPS * upper

    def f(eta2: float) -> float:
        return period(eta2, omega, z) - target

    # period decreasing: f > 0 near 0 (divergence), f < 0 near theta.
    hi = upper - eps
    if f(hi) > 0.0:
        # target barely above the threshold; the root hugs the upper end.
        raise NumericsError(
            f"period solve lost its bracket at eta2={hi!r} (2L={target!r} too close "
            f"to the threshold {thresh!r})"
        )
    # Walk the lower end down geometrically until the period exceeds the
    # target; K(k) diverges only logarithmically as eta2 -> 0, so this
    # stays far away from the k = 1 evaluation cutoff.
    lo = 0.5 * upper
    while f(lo) <= 0.0:
        lo *= 0.5
        if lo < eps:
            raise NumericsError(
                f"period solve could not bracket below eta2={eps!r} "
                f"(omega={omega!r}, Z={z!r}, 2L={target!r})"
            )
    eta2 = bisect(f, lo, hi, xtol=1e-16 * upper)
    resid = abs(period(eta2, omega, z) - target)
    if resid > PERIOD_RESIDUAL_TOL:
        raise NumericsError(
            f"period residual {resid!r} exceeds {PERIOD_RESIDUAL_TOL} at eta2={eta2!r}"
        )
    return eta2


@dataclass(frozen=True)
class WaveProfile:
    """A constructed standing-wave profile with its solved parameters.

    ``x``/``samples`` hold the profile on an endpoint-inclusive uniform
    grid over [-L, L] with nodes at 0 and +-L; ``evaluate`` and
    ``derivative`` give the closed form at arbitrary points (the
    derivative at x = 0 returns the right-sided value).
    """

    params: WaveParams
    eta1: float
    eta2: float
    k: float
    a: float
    phi0: float
    sign_branch: SignBranch
    x: NDArray[np.float64]
    samples: NDArray[np.float64]

    @property
    def shift_sign(self) -> float:
        return {SignBranch.PLUS_SHIFT: 1.0, SignBranch.MINUS_SHIFT: -1.0, SignBranch.CLASSIC: 0.0}[
            self.sign_branch
        ]

    def evaluate(self, xs) -> NDArray[np.float64]:
        u = self.eta1 * np.abs(np.asarray(xs, dtype=float)) / _SQRT2 + self.shift_sign * self.a
        return self.eta1 * np.asarray(elliptic.jacobi_dn(u, self.k))

    def derivative(self, xs) -> NDArray[np.float64]:
        """Closed-form phi'(x); uses dn' = -k^2 sn cn and the |x| chain rule."""
        xs = np.asarray(xs, dtype=float)
        u = self.eta1 * np.abs(xs) / _SQRT2 + self.shift_sign * self.a
        sn, cn, _ = elliptic.jacobi_sn_cn_dn(u, self.k)
        sgn = np.where(xs >= 0.0, 1.0, -1.0)
        return -(self.eta1**2 / _SQRT2) * self.k**2 * np.asarray(sn) * np.asarray(cn) * sgn

    def norm_h1_squared(self) -> float:
        """Trapezoid H1 norm squared, integral of phi^2 + (phi')^2."""
        d = self.derivative(self.x)
        return float(
            np.trapezoid(self.samples**2, self.x) + np.trapezoid(d**2, self.x)
        )

    def diagnostics(self) -> dict:
        """Residuals of the defining identities, computed numerically.

        - pde_residual: max |-phi'' + omega phi - phi^3| on interior
          nodes away from 0 and the endpoints, 5-point centered
          differences (the 3-point stencil's roundoff floor
          eps*phi/h^2 sits above 1e-5 at the frequencies of interest,
          masking the construction error this residual measures);
        - jump_residual: |phi'(0+) + (Z/2) phi(0)| from 5-point
          one-sided stencils at the defect;
        - endpoint_residual: |phi(+-L) - eta2| (trough value is attained
          at the cell edge on both branches);
        - quadrature_residual: max |(phi')^2 - F(phi)/2| with the
          closed-form derivative;
        - derivative_symmetry: |phi'(0+) + phi'(0-)| (stencil).
        """
        x, phi = self.x, self.samples
        h = x[1] - x[0]
        omega, z = self.params.omega, self.params.z
        n0 = len(x) // 2  # defect node
        second = (
            -phi[:-4] + 16.0 * phi[1:-3] - 30.0 * phi[2:-2] + 16.0 * phi[3:-1] - phi[4:]
        ) / (12.0 * h**2)
        pde = -second + omega * phi[2:-2] - phi[2:-2] ** 3
        interior = np.ones(len(pde), dtype=bool)
        interior[n0 - 4 : n0 + 1] = False  # stencils touching the corner
        fwd = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / (12.0 * h)
        dplus = float(fwd @ phi[n0 : n0 + 5])
        dminus = -float(fwd @ phi[n0 : n0 - 5 : -1])
        dphi = self.derivative(x)
        quad = dphi**2 - 0.5 * (self.eta1**2 - phi**2) * (phi**2 - self.eta2**2)
        return {
            "pde_residual": float(np.max(np.abs(pde[interior]))),
            "jump_residual": float(abs(dplus + 0.5 * z * self.phi0)),
            "endpoint_residual": float(
                max(abs(phi[0] - self.eta2), abs(phi[-1] - self.eta2))
            ),
            "quadrature_residual": float(np.max(np.abs(quad))),
            "derivative_symmetry": float(abs(dplus + dminus)),
            "small_z_continuation_ok": self.params.small_z_continuation_ok,
        }


def build_profile(params: WaveParams, n: int = 4096) -> WaveProfile:
    """Construct the standing-wave profile of period 2L at (omega, Z, L).

    Solves the period equation for eta2, assembles the closed form on an
    (n+1)-point grid (n a power of two >= 128), and validates the
    structural invariants before returning.
    """
    if n < 128 or n & (n - 1) != 0:
        raise AdmissibilityError(f"grid size must be a power of two >= 128, got n={n}")
    omega, z = params.omega, params.z
    if z > 0.0:
        branch = SignBranch.PLUS_SHIFT
    elif z < 0.0:
        branch = SignBranch.MINUS_SHIFT
    else:
        branch = SignBranch.CLASSIC
    eta2 = solve_eta2(params)
    eta1 = math.sqrt(_eta1_sq(eta2, omega))
    k = _modulus(eta2, omega)
    a = _shift(eta2, omega, z)
    phi0 = phi_at_zero(eta2, omega, z) if z != 0.0 else eta1
    x = sample_grid_for(params, n)
    profile = WaveProfile(params, eta1, eta2, k, a, phi0, branch, x, np.empty(0))
    samples = profile.evaluate(x)
    profile = WaveProfile(params, eta1, eta2, k, a, phi0, branch, x, samples)
    _validate(profile)
    return profile


def sample_grid_for(params: WaveParams, n: int) -> NDArray[np.float64]:
    return np.linspace(-params.halfperiod, params.halfperiod, n + 1)


def _validate(p: WaveProfile) -> None:
    omega, z = p.params.omega, p.params.z
    if abs(p.eta1**2 + p.eta2**2 - 2.0 * omega) > 1e-10 * (1.0 + 2.0 * omega):
        raise NumericsError("eta1^2 + eta2^2 = 2 omega violated")
    if not p.eta1 - p.eta2 > abs(z) / _SQRT2:
        raise NumericsError("separation eta1 - eta2 > |Z|/sqrt2 violated")
    if z != 0.0 and not p.eta2 < p.phi0 < p.eta1:
        raise NumericsError("defect value phi(0) escaped (eta2, eta1)")
    if not 0.0 <= p.a <= elliptic.complete_K(p.k):
        raise NumericsError("shift a escaped [0, K(k)]")
    lo, hi = float(np.min(p.samples)), float(np.max(p.samples))
    if lo < p.eta2 - 1e-9 * p.eta1 or hi > p.eta1 * (1.0 + 1e-12):
        raise NumericsError("profile escaped the band [eta2, eta1]")


def solitary_profile(omega: float, z: float, xs) -> NDArray[np.float64]:
    """The solitary (infinite-period) limit profile sqrt(2 omega) sech(sqrt(omega)|x| + b).

    b = atanh(Z/(2 sqrt(omega))); this is the eta2 -> 0 limit of the
    periodic family at fixed (omega, Z).
    """
    if not omega > z**2 / 4.0:
        raise AdmissibilityError(f"omega={omega!r} violates omega > Z^2/4")
    b = math.atanh(z / (2.0 * math.sqrt(omega)))
    xs = np.asarray(xs, dtype=float)
    return math.sqrt(2.0 * omega) / np.cosh(math.sqrt(omega) * np.abs(xs) + b)


def solitary_limit_check(
    omega: float,
    z: float,
    eta2_ladder: tuple[float, ...] = (1e-2, 1e-3, 1e-4, 1e-5),
    window: float = 1.0,
    n: int = 2048,
) -> dict:
    """Convergence report of the free-period profiles to the sech limit.

    For each eta2 in the (decreasing) ladder, evaluates the dnoidal-peak
    closed form on |x| <= window and reports the shift a(eta2) and the
    sup distance to ``solitary_profile``; the shifts must approach
    atanh(Z/(2 sqrt omega)) and the sup errors must decrease.
    """
    if not omega > z**2 / 4.0:
        raise AdmissibilityError(f"omega={omega!r} violates omega > Z^2/4")
    xs = np.linspace(-window, window, n + 1)
    target = solitary_profile(omega, z, xs)
    a_limit = math.atanh(z / (2.0 * math.sqrt(omega)))
    shifts, sups = [], []
    for eta2 in eta2_ladder:
        eta1 = math.sqrt(_eta1_sq(eta2, omega))
        k = _modulus(eta2, omega)
        a = _shift(eta2, omega, z)
        u = eta1 * np.abs(xs) / _SQRT2 + math.copysign(1.0, z) * a if z != 0.0 else eta1 * np.abs(xs) / _SQRT2
        phi = eta1 * np.asarray(elliptic.jacobi_dn(u, k))
        shifts.append(a)
        sups.append(float(np.max(np.abs(phi - target))))
    return {
        "eta2_ladder": list(eta2_ladder),
        "shift_values": shifts,
        "shift_limit": a_limit,
        "sup_errors": sups,
        "monotone_decreasing": all(b < a for a, b in zip(sups, sups[1:])),
    }
