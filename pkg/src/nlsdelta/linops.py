"""Linearized operators around a standing-wave profile.

Linearizing the stationary equation about a real profile phi splits the
Hessian of the action into two self-adjoint operators on the periodic
cell with the defect jump condition (strength gamma = -Z):

    L1 = -d^2/dx^2 + omega - 3 phi^2   (acts on the real part)
    L2 = -d^2/dx^2 + omega -   phi^2   (acts on the imaginary part)

This module assembles their symmetric finite-difference matrices on top
of delta_op.discretize, diagonalizes them, counts negative eigenvalues
with an explicit ambiguity band (never guessing through near-zero
modes), provides a grid-refinement diagnostic for kernel triviality, and
cross-checks the machinery against the one Hill equation whose relevant
eigenvalue is known in closed form (the n=2 Lame equation, second
periodic eigenvalue 4 + k^2 with eigenfunction sn*cn).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import eigh

from . import elliptic
from .delta_op import DeltaOperator, discretize, periodic_grid
from .errors import AdmissibilityError, InconclusiveError, NumericsError
from .wave import WaveParams, WaveProfile, build_profile

__all__ = [
    "Which",
    "Parity",
    "LinearizedOperator",
    "Spectrum",
    "PARITY_TOL",
    "negative_band",
    "assemble",
    "spectrum",
    "count_negative",
    "kernel_diagnostic",
    "second_eigen_slope",
    "beta_closed_form",
    "lame_check",
]

# Reflection residual above which an eigenvector is labelled neither
# even nor odd.  Simple eigenvalues always classify well below this;
# the mixed label flags discretization-degenerate pairs.
PARITY_TOL = 1e-6


class Which(str, Enum):
    """Which linearized operator: L1 carries -3 phi^2, L2 carries -phi^2."""

    L1 = "L1"
    L2 = "L2"

    @property
    def coefficient(self) -> float:
        return 3.0 if self is Which.L1 else 1.0


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"


def negative_band(halfperiod: float, omega: float, n: int) -> float:
    """Half-width tau of the zero-classification band, 10*h*(1+omega).

    Calibrated so the exact zero modes (the L2 ground state, the Z=0
    L1 translation mode), which the first-order defect collocation
    smears to O(h), land inside the band while true negative
    eigenvalues stay well outside it on the usual grid ladder.
    """
    return 10.0 * (2.0 * halfperiod / n) * (1.0 + omega)


@dataclass(frozen=True)
class LinearizedOperator:
    """Assembled symmetric discretization of L1 or L2 about a profile."""

    which: Which
    profile: WaveProfile
    matrix: NDArray[np.float64]
    x: NDArray[np.float64]

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def h(self) -> float:
        return 2.0 * self.profile.params.halfperiod / self.n


@dataclass(frozen=True)
class Spectrum:
    """Lowest eigenpairs of a linearized operator, parity-labelled.

    ``vectors[:, i]`` is the grid eigenfunction of ``eigenvalues[i]``,
    orthonormal in the Euclidean inner product.  ``n_negative`` counts
    eigenvalues below -tau and ``kernel_candidates`` collects those
    with |lambda| < tau, tau = ``band``.
    """

    eigenvalues: NDArray[np.float64]
    vectors: NDArray[np.float64]
    parities: tuple[Parity, ...]
    band: float

    @property
    def n_negative(self) -> int:
        return int(np.sum(self.eigenvalues < -self.band))

    @property
    def kernel_candidates(self) -> NDArray[np.float64]:
        lam = self.eigenvalues
        return lam[np.abs(lam) < self.band]


def assemble(profile: WaveProfile, which: Which, n: int) -> LinearizedOperator:
    """Symmetric matrix of the linearized operator on the periodic grid.

    The defect Laplacian block comes from delta_op.discretize with
    gamma = -Z (the linearization inherits the profile's jump
    condition); the potential omega - c*phi^2 is sampled exactly from
    the closed-form profile at the operator's own grid nodes.
    """
    if n < 256:
        raise AdmissibilityError(f"linearized assembly needs n >= 256, got n={n}")
    params = profile.params
    op = DeltaOperator(gamma=-params.z, halfperiod=params.halfperiod)
    x = periodic_grid(params.halfperiod, n)
    phi = profile.evaluate(x)
    m = discretize(op, n)
    diag = params.omega - which.coefficient * phi**2
    m[np.arange(n), np.arange(n)] += diag
    return LinearizedOperator(which=which, profile=profile, matrix=m, x=x)


def _parity_of(v: NDArray[np.float64], tol: float = PARITY_TOL) -> Parity:
    n = v.shape[0]
    refl = v[(n - np.arange(n)) % n]
    norm = float(np.linalg.norm(v))
    even_res = float(np.linalg.norm(v - refl)) / norm
    odd_res = float(np.linalg.norm(v + refl)) / norm
    if even_res < tol and even_res <= odd_res:
        return Parity.EVEN
    if odd_res < tol:
        return Parity.ODD
    return Parity.MIXED


def spectrum(op: LinearizedOperator, m: int) -> Spectrum:
    """Lowest m eigenpairs by dense symmetric eigensolve, parity-labelled."""
    if not 0 < m <= op.n:
        raise AdmissibilityError(f"requested {m} eigenpairs of an n={op.n} operator")
    try:
        lam, vec = eigh(op.matrix, subset_by_index=(0, m - 1))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - defensive
        raise NumericsError(f"eigensolve failed: {exc}") from exc
    params = op.profile.params
    band = negative_band(params.halfperiod, params.omega, op.n)
    parities = tuple(_parity_of(vec[:, i]) for i in range(m))
    return Spectrum(eigenvalues=lam, vectors=vec, parities=parities, band=band)


def _expected_kernel_modes(op: LinearizedOperator) -> int:
    # L2 always has the profile itself as a zero mode; L1 has the
    # translation mode phi' only in the defect-free case Z = 0.
    if op.which is Which.L2:
        return 1
    return 1 if op.profile.params.z == 0.0 else 0


def count_negative(op: LinearizedOperator) -> int:
    """Number of eigenvalues below the ambiguity band -tau, tau = 10h(1+omega).

    Eigenvalues inside [-tau, tau] are tolerated only up to the number
    of analytically expected zero modes (one for L2, one for L1 at
    Z = 0, none otherwise); any surplus means the count would be a
    guess at this resolution and raises InconclusiveError instead.
    """
    spec = spectrum(op, min(op.n, 8))
    surplus = len(spec.kernel_candidates) - _expected_kernel_modes(op)
    if surplus > 0:
        raise InconclusiveError(
            f"{surplus} unexpected eigenvalue(s) inside the zero band "
            f"[-{spec.band:.3e}, {spec.band:.3e}] of {op.which.value}; "
            "refine the grid to classify"
        )
    return spec.n_negative


def kernel_diagnostic(
    profile_params: WaveParams,
    n_ladder: Sequence[int] = (512, 1024, 2048),
    which: Which = Which.L1,
) -> dict:
    """Grid-refinement evidence for (non-)triviality of the L1 kernel.

    For each n in the ladder the smallest |eigenvalue| above the counted
    negatives is recorded.  A trivial kernel (Z != 0) shows up as
    convergence of this gap to a strictly positive limit; the Z = 0
    control, whose kernel genuinely contains the translation mode,
    converges to 0 instead.
    """
    gaps: list[float] = []
    counts: list[int] = []
    for n in n_ladder:
        profile = build_profile(profile_params, n=max(4096, n))
        op = assemble(profile, which, n)
        spec = spectrum(op, min(op.n, 8))
        neg = spec.n_negative
        gaps.append(float(np.min(np.abs(spec.eigenvalues[neg:]))))
        counts.append(neg)
    positive_limit = gaps[-1] > 2.0 * negative_band(
        profile_params.halfperiod, profile_params.omega, n_ladder[-1]
    )
    return {
        "n_ladder": list(n_ladder),
        "gaps": gaps,
        "negative_counts": counts,
        "positive_limit": positive_limit,
    }


def beta_closed_form(omega: float, halfperiod: float, n: int = 8192) -> float:
    """Closed-form first-order eigenvalue slope at the defect-free wave.

    beta = (phi^4(0) - omega*phi^2(0)) / ||phi'||^2 evaluated at the
    Z = 0 dnoidal wave; positive because the peak value phi(0) = eta1
    exceeds sqrt(omega).
    """
    profile = build_profile(WaveParams(omega, 0.0, halfperiod), n=n)
    phi0 = profile.phi0
    xs = profile.x
    dphi = profile.derivative(xs)
    norm_dphi_sq = float(np.trapezoid(dphi**2, xs))
    return (phi0**4 - omega * phi0**2) / norm_dphi_sq


def second_eigen_slope(
    omega: float,
    halfperiod: float,
    z_ladder: Sequence[float] = (4e-3, 2e-3, 1e-3),
    n: int = 2048,
) -> dict:
    """Ladder estimate of beta = lim_{Z->0} Pi(Z)/Z for the second L1 eigenvalue.

    Pi(Z) is the eigenvalue branch continuing the Z = 0 translation
    kernel mode; it is read off as the second-lowest L1 eigenvalue at
    +/-Z and differenced centrally, with one Richardson level across the
    (geometric) ladder.  Requires omega > pi^2/(2 L^2) so that the Z = 0
    wave and its small-Z continuation exist.
    """
    if not omega > math.pi**2 / (2.0 * halfperiod**2):
        raise AdmissibilityError(
            f"second_eigen_slope needs omega > pi^2/(2L^2) = "
            f"{math.pi**2 / (2.0 * halfperiod**2)!r}, got omega={omega!r}"
        )
    if not all(a > b > 0.0 for a, b in zip(z_ladder, z_ladder[1:])):
        raise AdmissibilityError(f"z_ladder must be decreasing positive, got {z_ladder!r}")

    def second_eigenvalue(z: float) -> float:
        profile = build_profile(WaveParams(omega, z, halfperiod), n=max(4096, n))
        op = assemble(profile, Which.L1, n)
        lam, _ = eigh(op.matrix, subset_by_index=(0, 1))
        return float(lam[1])

    estimates = [
        (second_eigenvalue(z) - second_eigenvalue(-z)) / (2.0 * z) for z in z_ladder
    ]
    # One Richardson level over the last pair, assuming ratio-2 steps
    # (central differencing is O(Z^2) in the step).
    r = z_ladder[-2] / z_ladder[-1]
    beta_extrap = (r**2 * estimates[-1] - estimates[-2]) / (r**2 - 1.0)
    diffs = [abs(b - beta_extrap) for b in estimates]
    converging = all(d2 <= d1 or d2 < 1e-12 for d1, d2 in zip(diffs, diffs[1:]))
    pi_sign_ok = all(
        second_eigenvalue(z) > 0.0 > second_eigenvalue(-z) for z in (z_ladder[-1],)
    )
    return {
        "z_ladder": list(z_ladder),
        "estimates": estimates,
        "beta": beta_extrap,
        "beta_closed_form": beta_closed_form(omega, halfperiod),
        "converging": converging,
        "pi_sign_pattern_ok": pi_sign_ok,
    }


def lame_check(k: float, n: int) -> dict:
    """Cross-check the eigensolver on the n=2 Lame equation.

    Discretizes -Phi'' + 6 k^2 sn^2(x; k) Phi = lambda Phi with periodic
    boundary conditions on [0, 2K(k)] and reports the first three
    eigenvalues (all simple there), the error of the second one against
    its closed form 4 + k^2, and the overlap of its eigenvector with
    sn*cn.
    """
    if not 0.0 < k < 1.0:
        raise AdmissibilityError(f"lame_check needs modulus in (0, 1), got k={k!r}")
    if n < 64:
        raise AdmissibilityError(f"lame_check grid too coarse: n={n}")
    period = 2.0 * elliptic.complete_K(k)
    h = period / n
    x = h * np.arange(n)
    idx = np.arange(n)
    m = np.zeros((n, n))
    m[idx, idx] = 2.0 / h**2
    m[idx, (idx + 1) % n] = -1.0 / h**2
    m[idx, (idx - 1) % n] = -1.0 / h**2
    sn, cn, _ = elliptic.jacobi_sn_cn_dn(x, k)
    m[idx, idx] += 6.0 * k**2 * sn**2
    lam, vec = eigh(m, subset_by_index=(0, 2))
    target = 4.0 + k**2
    ref = sn * cn
    v1 = vec[:, 1]
    overlap = abs(float(v1 @ ref)) / (np.linalg.norm(v1) * np.linalg.norm(ref))
    return {
        "eigenvalues": [float(v) for v in lam],
        "second_eigenvalue": float(lam[1]),
        "target": target,
        "error": abs(float(lam[1]) - target),
        "overlap": float(overlap),
        "gaps": [float(lam[1] - lam[0]), float(lam[2] - lam[1])],
        "h": h,
    }
