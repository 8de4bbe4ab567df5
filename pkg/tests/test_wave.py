"""Tests for standing-wave construction.

The closed-form construction is cross-checked against the profile ODE
(via finite differences and the first-integral identity), direct ODE
integration of the minimal period, and the documented monotonicity
structure of the solved parameters.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlsdelta import wave
from nlsdelta.errors import AdmissibilityError
from nlsdelta.wave import WaveParams, build_profile

SQRT2 = math.sqrt(2.0)

# points with a healthy admissibility margin for property tests
ADMISSIBLE = [
    (8.0, 1.0, 0.5),
    (20.0, 1.0, 0.5),
    (20.0, 2.0, 0.5),
    (20.0, -1.0, 1.0),
    (30.0, -2.0, 1.0),
    (8.0, 0.0, 1.0),
]


class TestParams:
    def test_frequency_floor(self):
        with pytest.raises(AdmissibilityError):
            WaveParams(0.2, 1.0, 0.5)
        WaveParams(0.26, 1.0, 0.5)  # just above Z^2/4

    def test_continuation_flag_reported_not_enforced(self):
        # omega below pi^2/(2 L^2): construction may still succeed for
        # Z > 0, with the small-Z continuation flag off.
        p = WaveParams(8.0, 1.0, 0.5)
        assert not p.small_z_continuation_ok
        build_profile(p, n=256)

    def test_phi_at_zero_solves_quartic(self):
        # Phi^2 is a root of X^2 - (2 omega - Z^2/2) X + eta2^2 (2 omega - eta2^2).
        omega, z = 20.0, 1.5
        theta = wave.theta_admissible(omega, z)
        for eta2 in (0.3 * theta, 0.8 * theta):
            phi2 = wave.phi_at_zero(eta2, omega, z) ** 2
            b = 2.0 * omega - z**2 / 2.0
            c = eta2**2 * (2.0 * omega - eta2**2)
            assert phi2**2 - b * phi2 + c == pytest.approx(0.0, abs=1e-8 * phi2**2)


class TestPeriodMapsAndThresholds:
    def test_peak_map_decreasing(self):
        omega, z = 20.0, 1.0
        theta = wave.theta_admissible(omega, z)
        grid = np.linspace(0.05, 0.95, 19) * theta
        vals = [wave.period_minus(e, omega, z) for e in grid]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_peak_map_tends_to_threshold(self):
        omega, z = 20.0, 1.0
        theta = wave.theta_admissible(omega, z)
        t0 = wave.threshold_T0(omega, z)
        gap_far = wave.period_minus(0.99 * theta, omega, z) - t0
        gap_near = wave.period_minus(0.9999 * theta, omega, z) - t0
        assert gap_far > gap_near > 0.0 or abs(gap_near) < 1e-6

    def test_trough_map_dips_below_endpoint_limit(self):
        # The documented non-monotonicity: an interior value below T1.
        omega, z = 20.0, -1.0
        theta = wave.theta_admissible(omega, z)
        t1 = wave.threshold_T1(omega, z)
        interior = min(
            wave.period_plus(f * theta, omega, z) for f in np.linspace(0.5, 0.99, 20)
        )
        assert interior < t1

    def test_threshold_ordering(self):
        for omega, z in ((20.0, 1.0), (10.0, -2.0)):
            assert wave.threshold_T0(omega, z) < wave.threshold_T1(omega, z)

    def test_threshold_decreasing_in_omega(self):
        vals = [wave.threshold_T0(w, 1.0) for w in (6.0, 10.0, 20.0, 40.0)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_small_z_limits(self):
        # T0 -> (1/2) sqrt2 pi/sqrt(omega), T1 -> (3/2) sqrt2 pi/sqrt(omega):
        # both differ from the classical threshold returned at Z = 0.
        for omega in (4.0, 9.0, 16.0):
            classic = SQRT2 * math.pi / math.sqrt(omega)
            t0 = wave.threshold_T0(omega, 1e-6)
            t1 = wave.threshold_T1(omega, -1e-6)
            assert t0 == pytest.approx(0.5 * classic, rel=1e-3)
            assert t1 == pytest.approx(1.5 * classic, rel=1e-3)
            assert wave.threshold_T0(omega, 0.0) == pytest.approx(classic)

    def test_threshold_anchor_frequency(self):
        # the unit-cell threshold frequency for Z=1 sits near 5.12
        from nlsdelta.rootfind import bisect

        w0 = bisect(lambda w: wave.threshold_T0(w, 1.0) - 1.0, 3.0, 8.0)
        assert w0 == pytest.approx(5.1226, abs=1e-3)


class TestSolveEta2:
    @pytest.mark.parametrize("omega,z,L", ADMISSIBLE)
    def test_period_residual(self, omega, z, L):
        params = WaveParams(omega, z, L)
        eta2 = wave.solve_eta2(params)
        period = wave.period_minus if z >= 0.0 else wave.period_plus
        assert period(eta2, omega, z) == pytest.approx(2.0 * L, abs=1e-12)

    def test_inadmissible_reports_threshold(self):
        with pytest.raises(AdmissibilityError, match="T1"):
            wave.solve_eta2(WaveParams(20.0, -1.0, 0.5))
        with pytest.raises(AdmissibilityError, match="T0"):
            wave.solve_eta2(WaveParams(4.0, 1.0, 0.2))


class TestProfile:
    @pytest.mark.parametrize("omega,z,L", ADMISSIBLE)
    def test_invariants_and_residuals(self, omega, z, L):
        p = build_profile(WaveParams(omega, z, L), n=8192)
        assert p.eta1**2 + p.eta2**2 == pytest.approx(2.0 * omega, rel=1e-12)
        assert p.eta1 - p.eta2 > abs(z) / SQRT2
        assert p.eta2 < p.phi0 < p.eta1 or z == 0.0
        d = p.diagnostics()
        # residual scales like (h * omega)^2; the tight absolute bound
        # lives in the acceptance harness at its own resolution
        h = 2.0 * L / 8192
        assert d["pde_residual"] < 50.0 * (h * omega) ** 2
        assert d["jump_residual"] < 100.0 * h**2 * (1.0 + abs(z) * p.phi0) * omega
        assert d["endpoint_residual"] < 1e-10
        assert d["quadrature_residual"] < 1e-10
        assert d["derivative_symmetry"] < 1e-10

    def test_branch_selection(self):
        peak = build_profile(WaveParams(20.0, 1.0, 0.5), n=512)
        trough = build_profile(WaveParams(20.0, -1.0, 1.0), n=512)
        classic = build_profile(WaveParams(8.0, 0.0, 1.0), n=512)
        # peak waves decrease away from the defect, trough waves increase
        assert peak.samples.max() == pytest.approx(peak.phi0, rel=1e-12)
        assert trough.samples.max() > trough.phi0
        assert classic.a == 0.0

    def test_power_of_two_grid_enforced(self):
        with pytest.raises(AdmissibilityError):
            build_profile(WaveParams(8.0, 1.0, 0.5), n=300)
        with pytest.raises(AdmissibilityError):
            build_profile(WaveParams(8.0, 1.0, 0.5), n=64)

    def test_jump_sign_follows_defect_sign(self):
        for z in (1.0, -1.0):
            L = 0.5 if z > 0 else 1.0
            p = build_profile(WaveParams(20.0, z, L), n=2048)
            h = 1e-6
            dplus = (p.evaluate(np.array([h]))[0] - p.phi0) / h
            assert dplus == pytest.approx(-0.5 * z * p.phi0, rel=1e-4)

    @given(
        omega=st.floats(min_value=6.0, max_value=40.0),
        z=st.floats(min_value=0.05, max_value=2.0),
    )
    @settings(max_examples=20, deadline=None)
    def test_property_peak_branch(self, omega, z):
        # Z > 0 peak waves on the unit cell exist whenever 2L > T0.
        if wave.threshold_T0(omega, z) >= 1.0:
            return
        p = build_profile(WaveParams(omega, z, 0.5), n=1024)
        d = p.diagnostics()
        assert d["endpoint_residual"] < 1e-9
        assert d["quadrature_residual"] < 1e-8


class TestParameterMonotonicity:
    def test_omega_family_structure(self):
        # For omega large: eta2(omega) decreasing, k(omega) increasing,
        # a(omega) decreasing.  (eta2 is measurably *not* monotone near
        # the admissibility threshold -- it rises before turning over --
        # so the range here starts past the turning point.)
        z, L = 1.0, 0.5
        profiles = [build_profile(WaveParams(w, z, L), n=256) for w in (16.0, 20.0, 25.0, 30.0)]
        eta2s = [p.eta2 for p in profiles]
        ks = [p.k for p in profiles]
        shifts = [p.a for p in profiles]
        assert all(a > b for a, b in zip(eta2s, eta2s[1:]))
        assert all(a < b for a, b in zip(ks, ks[1:]))
        assert all(a > b for a, b in zip(shifts, shifts[1:]))

    def test_shift_vanishes_at_large_omega(self):
        z, L = 1.0, 0.5
        shifts = [build_profile(WaveParams(w, z, L), n=256).a for w in (10.0, 40.0, 160.0)]
        assert shifts[0] > shifts[1] > shifts[2]
        assert shifts[2] < 0.05

    def test_small_z_continuity_of_profiles(self):
        # fixed (omega, L) admissible for Z = 0: profiles converge to the
        # classical dnoidal wave as Z decreases to 0.
        omega, L = 25.0, 0.5
        base = build_profile(WaveParams(omega, 0.0, L), n=1024)
        gaps = []
        for z in (0.2, 0.05, 0.01):
            p = build_profile(WaveParams(omega, z, L), n=1024)
            gaps.append(np.abs(p.samples - base.samples).max())
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[-1] < 0.05


class TestSolitaryLimit:
    def test_shift_and_window_convergence(self):
        rep = wave.solitary_limit_check(4.0, 1.0)
        assert rep["monotone_decreasing"]
        assert abs(rep["shift_values"][-1] - rep["shift_limit"]) < 1e-4

    def test_solitary_profile_closed_form(self):
        omega, z = 4.0, 1.0
        xs = np.array([-1.0, 0.0, 0.7])
        vals = wave.solitary_profile(omega, z, xs)
        s = math.atanh(z / (2.0 * math.sqrt(omega)))
        ref = math.sqrt(2.0 * omega) / np.cosh(math.sqrt(omega) * np.abs(xs) + s)
        assert vals == pytest.approx(ref, rel=1e-12)
