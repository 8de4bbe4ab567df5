"""Jacobi elliptic functions and Legendre elliptic integrals.

Thin, validated wrappers around scipy.special with the conventions used
throughout this package: the *modulus* k (not the parameter m = k^2) is
always the argument, the degenerate circular (k = 0) and hyperbolic
(k = 1) limits are handled explicitly, and dn admits a bisection-based
inverse on the fundamental quarter period [0, K(k)].

Conventions
-----------
    sn(u; 0) = sin u,   sn(u; 1) = tanh u
    cn(u; 0) = cos u,   cn(u; 1) = sech u
    dn(u; 0) = 1,       dn(u; 1) = sech u

and dn is strictly decreasing from 1 to k' = sqrt(1 - k^2) on [0, K(k)].
"""

from __future__ import annotations

import math
from typing import Union

import numpy as np
from numpy.typing import NDArray
from scipy import special

__all__ = [
    "K_ONE_CUTOFF",
    "INVERSE_DN_TOL",
    "complement",
    "complete_K",
    "complete_E",
    "incomplete_F",
    "incomplete_E",
    "jacobi_sn_cn_dn",
    "jacobi_dn",
    "inverse_dn",
]

ArrayLike = Union[float, NDArray[np.float64]]

# Moduli closer to 1 than this are routed to the hyperbolic branch.
K_ONE_CUTOFF = 1e-12

# Absolute bisection tolerance (in u) for inverse_dn.  Tight enough
# that quantities assembled from the inverse (e.g. minimal periods)
# carry residuals at the 1e-13 level or below.
INVERSE_DN_TOL = 1e-15


def _check_modulus(k: float, allow_one: bool = True) -> float:
    k = float(k)
    if not 0.0 <= k <= 1.0 or (not allow_one and k >= 1.0):
        upper = "1" if allow_one else "1)"
        raise ValueError(f"modulus k={k!r} outside [0, {upper}]")
    return k


def complement(k: float) -> float:
    """Complementary modulus k' = sqrt(1 - k^2), computed stably near k = 1."""
    k = _check_modulus(k)
    return math.sqrt((1.0 - k) * (1.0 + k))


def complete_K(k: float) -> float:
    """Complete elliptic integral of the first kind K(k).

    Diverges logarithmically as k -> 1; raises for k within
    ``K_ONE_CUTOFF`` of 1 rather than returning a huge finite value.
    """
    k = _check_modulus(k)
    if k >= 1.0 - K_ONE_CUTOFF:
        raise ValueError(f"K(k) diverges as k -> 1 (got k={k!r})")
    return float(special.ellipk(k * k))


def complete_E(k: float) -> float:
    """Complete elliptic integral of the second kind E(k); E(0) = pi/2, E(1) = 1."""
    k = _check_modulus(k)
    return float(special.ellipe(k * k))


def incomplete_F(phi: ArrayLike, k: float) -> ArrayLike:
    """Incomplete elliptic integral of the first kind F(phi; k).

    For k = 1 this is the inverse Gudermannian atanh(sin phi), finite only
    for |phi| < pi/2.
    """
    k = _check_modulus(k)
    if k >= 1.0 - K_ONE_CUTOFF:
        s = np.sin(phi)
        if np.any(np.abs(s) >= 1.0):
            raise ValueError("F(phi; 1) diverges for |phi| >= pi/2")
        out = np.arctanh(s)
    else:
        out = special.ellipkinc(phi, k * k)
    return float(out) if np.isscalar(phi) else np.asarray(out)


def incomplete_E(phi: ArrayLike, k: float) -> ArrayLike:
    """Incomplete elliptic integral of the second kind E(phi; k) = ∫_0^phi sqrt(1 - k^2 sin^2 t) dt."""
    k = _check_modulus(k)
    if k >= 1.0 - K_ONE_CUTOFF:
        out = np.sin(phi)
    else:
        out = special.ellipeinc(phi, k * k)
    return float(out) if np.isscalar(phi) else np.asarray(out)


def jacobi_sn_cn_dn(
    u: ArrayLike, k: float
) -> tuple[ArrayLike, ArrayLike, ArrayLike]:
    """Jacobi elliptic functions (sn, cn, dn) of argument u and modulus k.

    The hyperbolic branch (tanh, sech, sech) is taken for k within
    ``K_ONE_CUTOFF`` of 1.
    """
    k = _check_modulus(k)
    if k >= 1.0 - K_ONE_CUTOFF:
        sn = np.tanh(u)
        sech = 1.0 / np.cosh(u)
        cn, dn = sech, sech.copy() if isinstance(sech, np.ndarray) else sech
    else:
        sn, cn, dn, _ = special.ellipj(u, k * k)
    if np.isscalar(u):
        return float(sn), float(cn), float(dn)
    return np.asarray(sn), np.asarray(cn), np.asarray(dn)


def jacobi_dn(u: ArrayLike, k: float) -> ArrayLike:
    """Jacobi dn alone; see jacobi_sn_cn_dn."""
    return jacobi_sn_cn_dn(u, k)[2]


def inverse_dn(y: float, k: float) -> float:
    """Inverse of dn(.; k) on the quarter period [0, K(k)].

    Solves dn(u; k) = y by bisection to absolute tolerance
    ``INVERSE_DN_TOL`` in u; dn is strictly decreasing from dn(0) = 1 to
    dn(K) = k' so the root is unique.  On the hyperbolic branch the
    closed form arccosh(1/y) is used instead.

    Parameters
    ----------
    y : target value, must lie in [k', 1].
    k : modulus in [0, 1].
    """
    k = _check_modulus(k)
    y = float(y)
    if k >= 1.0 - K_ONE_CUTOFF:
        if not 0.0 < y <= 1.0:
            raise ValueError(f"inverse_dn target y={y!r} outside (0, 1] at k=1")
        return float(np.arccosh(1.0 / y))
    kp = complement(k)
    if not kp <= y <= 1.0:
        raise ValueError(f"inverse_dn target y={y!r} outside [k', 1] = [{kp!r}, 1]")
    lo, hi = 0.0, complete_K(k)
    # dn decreasing: dn(lo) = 1 >= y, dn(hi) = k' <= y.
    while hi - lo > INVERSE_DN_TOL:
        mid = 0.5 * (lo + hi)
        if jacobi_dn(mid, k) >= y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
