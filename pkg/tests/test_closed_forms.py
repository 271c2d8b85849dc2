import math

import numpy as np
import pytest

from moyal_qmm.closed_forms import (
    log_z_free_polytope_route,
    log_z_weak_coupling,
    log_z_weak_coupling_epsilon,
    meijer_factor,
    q0_term,
    quartic_gaussian_log_integral,
)
from moyal_qmm.eigen_integrals import EigenvalueVector, vandermonde
from moyal_qmm.free_theory import log_z_free_product
from moyal_qmm.model import Coupling, DegenerateSpectrumError, KineticSpectrum, spectrum_from_epsilons


class TestFreePolytopeRoute:
    def test_symmetric_point_equals_product(self):
        sp = spectrum_from_epsilons(1.5, [0.0] * 6)
        a = log_z_free_product(sp).log_mag
        b = log_z_free_polytope_route(1.5, [0.0] * 6).log_mag
        assert abs(a - b) <= 1e-12

    def test_leading_coefficient_difference(self):
        # the polytope route differs from the exact value at order eps^3 with
        # coefficient 1/12 per sum(eps^3): profile (2d,-d,-d) has sum = 6 d^3
        ratios = []
        for d in (1e-2, 3e-3, 1e-3):
            eps = np.array([2 * d, -d, -d])
            gap = (
                log_z_free_polytope_route(1.0, eps).log_mag
                - log_z_free_product(spectrum_from_epsilons(1.0, eps)).log_mag
            )
            ratios.append(gap / d**3)
        assert ratios[-1] == pytest.approx(0.5, rel=2e-2)
        # converging toward 1/2 from above (the eps^4 difference is positive)
        assert abs(ratios[2] - 0.5) < abs(ratios[1] - 0.5) < abs(ratios[0] - 0.5)

    def test_gap_order_for_odd_symmetric_profile(self):
        # with sum(eps^3) = 0 the residual difference is the eps^4 term, 1/8 * sum(eps^4)
        for d in (1e-2, 1e-3):
            eps = np.array([d, -d, d, -d])
            gap = (
                log_z_free_polytope_route(1.0, eps).log_mag
                - log_z_free_product(spectrum_from_epsilons(1.0, eps)).log_mag
            )
            assert gap == pytest.approx((1 / 8) * 4 * d**4, rel=0.05)


class TestWeakCoupling:
    def test_symmetric_closed_form(self):
        n, xi, g = 7, 2.0, 0.03
        s = KineticSpectrum([xi] * n)
        got = log_z_weak_coupling(s, Coupling(g)).log_mag
        expected = (
            0.5 * math.log((n - 1) / n)
            + (n / 2) * math.log(math.pi / xi)
            + (n * (n - 1) / 2) * math.log(math.pi / (2 * xi))
            - 3 * g * n / (4 * xi**2)
        )
        assert got == pytest.approx(expected, abs=1e-12)

    def test_g0_offset_from_free_product(self):
        n, xi = 5, 1.0
        s = KineticSpectrum([xi] * n)
        got = log_z_weak_coupling(s, Coupling(0.0)).log_mag
        free = log_z_free_product(s).log_mag
        assert got - free == pytest.approx(0.5 * math.log((n - 1) / n), abs=1e-12)

    def test_linear_g_dependence(self):
        s = KineticSpectrum([1.0, 1.3, 2.2])
        slope_expected = -float(np.sum(0.75 / s.e**2))
        for form in (
            lambda g: log_z_weak_coupling(s, Coupling(g)).log_mag,
            lambda g: log_z_weak_coupling_epsilon(s.xi, s.eps_tilde, Coupling(g)).log_mag,
        ):
            slope = (form(0.02) - form(0.0)) / 0.02
            assert slope == pytest.approx(slope_expected, rel=1e-12)
        # shift example: N=2, e=(1,1), g=0.01
        s2 = KineticSpectrum([1.0, 1.0])
        d = log_z_weak_coupling(s2, Coupling(0.01)).log_mag - log_z_weak_coupling(
            s2, Coupling(0.0)
        ).log_mag
        assert d == pytest.approx(-2 * 3 * 0.01 / 4, abs=1e-14)

    def test_ratio_between_forms_at_symmetric_point(self):
        for n in (2, 4, 9):
            xi, g = 1.4, 0.05
            s = KineticSpectrum([xi] * n)
            w20 = log_z_weak_coupling(s, Coupling(g)).log_mag
            w21 = log_z_weak_coupling_epsilon(xi, [0.0] * n, Coupling(g)).log_mag
            assert w20 - w21 == pytest.approx(0.5 * math.log((n - 1) / n), abs=1e-12)

    def test_epsilon_form_exact_at_symmetric_free_point(self):
        n, xi = 6, 0.9
        s = KineticSpectrum([xi] * n)
        w21 = log_z_weak_coupling_epsilon(xi, [0.0] * n, Coupling(0.0)).log_mag
        assert w21 == log_z_free_product(s).log_mag

    def test_epsilon_form_disagrees_with_free_expansion(self):
        # the deviation series starts at eps^3; the true value has (N-2)/8 sum eps^2
        n = 8
        rng = np.random.default_rng(1)
        eps = rng.uniform(-1, 1, n)
        eps -= eps.mean()
        eps *= 0.05 / np.max(np.abs(eps))
        w21 = log_z_weak_coupling_epsilon(1.0, eps, Coupling(0.0)).log_mag
        free = log_z_free_product(spectrum_from_epsilons(1.0, eps)).log_mag
        gap = w21 - free
        predicted = -(n - 2) / 8 * float(np.sum(eps**2))
        assert gap == pytest.approx(predicted, rel=0.1)
        assert abs(gap) > 1e-4


class TestQ0:
    def test_n2_value_and_sign(self):
        q = q0_term(KineticSpectrum([1.0, 2.0]))
        expected = math.sqrt(math.pi) * 0.5 * math.sqrt(1.5) * (2 / 1.5) * 0.5
        assert q.sign == -1
        assert math.exp(q.log_mag) == pytest.approx(expected, rel=1e-12)

    def test_reciprocal_vandermonde_identity(self):
        rng = np.random.default_rng(23)
        for n in (2, 3, 4, 5, 6):
            e = np.sort(rng.uniform(0.5, 3.0, n))
            while np.min(np.diff(e)) < 1e-3:
                e = np.sort(rng.uniform(0.5, 3.0, n))
            lhs = vandermonde(EigenvalueVector(1.0 / e))
            binom = n * (n - 1) // 2
            rhs = vandermonde(EigenvalueVector(e))
            rhs = rhs * rhs.from_log((1.0 - n) * float(np.sum(np.log(e))), sign=(-1) ** binom)
            assert lhs.sign == rhs.sign
            assert lhs.log_mag == pytest.approx(rhs.log_mag, abs=1e-10)

    def test_scaling_exponent(self):
        e = [1.0, 2.0, 3.5]
        c = 1.7
        q1 = q0_term(KineticSpectrum(e))
        q2 = q0_term(KineticSpectrum([c * x for x in e]))
        assert (q2.log_mag - q1.log_mag) / math.log(c) == pytest.approx(-0.5, abs=1e-10)

    def test_degenerate_signal(self):
        with pytest.raises(DegenerateSpectrumError):
            q0_term(KineticSpectrum([1.0, 1.0]))


class TestQuarticIntegral:
    def test_g0_exact(self):
        exact, approx = quartic_gaussian_log_integral(2.0, 0.0)
        assert exact == pytest.approx(0.5 * math.log(math.pi / 2.0), abs=1e-12)
        assert approx == pytest.approx(exact, abs=1e-12)

    def test_error_scales_quadratically(self):
        errs = []
        for g in (0.005, 0.01, 0.02):
            exact, approx = quartic_gaussian_log_integral(1.0, g)
            errs.append(abs(exact - approx))
        assert errs[2] / errs[0] == pytest.approx(16.0, rel=0.3)

    def test_large_xi_regime(self):
        exact, approx = quartic_gaussian_log_integral(10.0, 1.0)
        assert abs(exact - approx) <= 1e-3


class TestMeijerFactor:
    def test_values(self):
        assert meijer_factor(2).to_float() == pytest.approx(1.0)
        assert meijer_factor(3).to_float() == pytest.approx(4.0)
        assert meijer_factor(4).to_float() == pytest.approx(32.0)

    def test_requires_n2(self):
        with pytest.raises(ValueError):
            meijer_factor(1)
