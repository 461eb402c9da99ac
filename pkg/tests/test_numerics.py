import math

import numpy as np
import pytest

from lenscoupled import (
    ConvergenceError,
    DomainError,
    QuadratureSpec,
    azimuthal_identity_residual,
    bessel_j,
    integrate_polar,
)
from conftest import bessel_series


class TestBessel:
    def test_at_zero(self):
        assert bessel_j(0, 0.0) == 1.0
        assert bessel_j(1, 0.0) == 0.0
        assert bessel_j(2, 0.0) == 0.0

    def test_first_zero_of_j0(self):
        # Locate the first root by bisection on the independent series.
        lo, hi = 2.0, 3.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if bessel_series(0, lo) * bessel_series(0, mid) <= 0.0:
                hi = mid
            else:
                lo = mid
        root = 0.5 * (lo + hi)
        assert abs(root - 2.404825557695773) < 1e-12
        assert abs(bessel_j(0, root)) < 1e-10

    @pytest.mark.parametrize("order", [0, 1, 2])
    def test_against_series(self, order):
        for x in [0.1, 0.5, 1.0, 2.7, 5.0, 10.0, 17.3, 25.0]:
            assert abs(bessel_j(order, x) - bessel_series(order, x)) < 1e-12

    def test_recurrence(self):
        # J0(x) + J2(x) = (2/x) J1(x)
        for x in np.geomspace(0.1, 100.0, 60):
            lhs = bessel_j(0, x) + bessel_j(2, x)
            rhs = 2.0 / x * bessel_j(1, x)
            assert abs(lhs - rhs) < 1e-10

    def test_large_argument_accuracy(self):
        # envelope check near |x| = 1e3 against the high-precision oracle
        import mpmath
        for x in [500.0, 999.5]:
            with mpmath.workdps(40):
                ref = float(mpmath.besselj(0, x))
            assert abs(bessel_j(0, x) - ref) < 1e-12

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            bessel_j(3, 1.0)
        with pytest.raises(DomainError):
            bessel_j(0, math.nan)
        with pytest.raises(DomainError):
            bessel_j(1, math.inf)


class TestQuadratureSpec:
    def test_validation(self):
        with pytest.raises(DomainError):
            QuadratureSpec(rel_tol=0.0)
        with pytest.raises(DomainError):
            QuadratureSpec(abs_tol=-1.0)
        with pytest.raises(DomainError):
            QuadratureSpec(max_refinements=0)


class TestIntegratePolar:
    def test_closed_form_mixed_kernel(self):
        # antiderivative of sin(t)(1 + cos^2 t) is -cos t - cos^3 t / 3
        val = integrate_polar(lambda t: np.sin(t) * (1 + np.cos(t) ** 2),
                              math.pi / 3)
        exact = (1 - 0.5) + (1 - 0.125) / 3.0
        assert abs(val - exact) < 1e-9

    def test_zero_kernel(self):
        assert integrate_polar(lambda t: np.zeros_like(t), math.pi / 3) == 0.0

    def test_sin_cubed(self):
        val = integrate_polar(lambda t: np.sin(t) ** 3, math.pi / 2)
        assert abs(val - 2.0 / 3.0) < 1e-9

    def test_complex_kernel(self):
        # int_0^a exp(i t) dt = (exp(i a) - 1) / i
        a = math.pi / 2
        val = integrate_polar(lambda t: np.exp(1j * t), a)
        assert abs(val - (np.exp(1j * a) - 1.0) / 1j) < 1e-10

    def test_deterministic(self):
        def kernel(t):
            return np.sin(t) ** 2 * np.exp(1j * 40.0 * np.cos(t))
        a = integrate_polar(kernel, math.pi / 2, phase_scale=40.0)
        b = integrate_polar(kernel, math.pi / 2, phase_scale=40.0)
        assert a == b

    def test_oscillatory_converges_to_reference(self):
        # amplitude of I4-type kernel at large axial phase vs tight run
        def kernel(t):
            return np.sin(t) ** 3 * np.exp(1j * 120.0 * np.cos(t))
        spec = QuadratureSpec(rel_tol=1e-9, abs_tol=1e-13)
        tight = QuadratureSpec(rel_tol=1e-13, abs_tol=1e-15, max_refinements=14)
        a = integrate_polar(kernel, math.pi / 2, spec, phase_scale=120.0)
        b = integrate_polar(kernel, math.pi / 2, tight, phase_scale=120.0)
        assert abs(a - b) <= 10 * max(1e-9 * abs(a), 1e-13)

    def test_convergence_error_carries_estimates(self):
        spec = QuadratureSpec(rel_tol=1e-15, abs_tol=1e-18, max_refinements=1)
        with pytest.raises(ConvergenceError) as err:
            integrate_polar(lambda t: np.exp(1j * 300.0 * np.cos(t)),
                            math.pi / 2, spec)
        assert err.value.last is not None
        assert err.value.previous is not None

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            integrate_polar(lambda t: t, 0.0)
        with pytest.raises(DomainError):
            integrate_polar(lambda t: t, 2.0)
        with pytest.raises(DomainError):
            integrate_polar(lambda t: np.full_like(t, np.nan), 1.0)


class TestAzimuthalIdentity:
    def test_trivial_point(self):
        assert azimuthal_identity_residual(0, 0.0, 0.0) < 1e-10

    @pytest.mark.parametrize("n,x,phi", [(1, 3.7, 0.4), (2, 10.0, 1.1)])
    def test_quoted_points(self, n, x, phi):
        assert azimuthal_identity_residual(n, x, phi) <= 1e-8

    def test_random_grid(self, rng):
        for _ in range(100):
            n = int(rng.integers(0, 3))
            x = float(rng.uniform(0.0, 20.0))
            phi = float(rng.uniform(-math.pi, math.pi))
            assert azimuthal_identity_residual(n, x, phi) <= 1e-8
