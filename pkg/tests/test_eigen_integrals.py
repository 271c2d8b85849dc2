import math
from itertools import product

import numpy as np
import pytest

from moyal_qmm.eigen_integrals import (
    EigenvalueVector,
    HermitianSample,
    McEstimate,
    log_z_eigen_quadrature,
    log_z_matrix_mc,
    pv_kernel_check,
    sample_hermitian,
    vandermonde,
    vandermonde_limit_check,
    vandermonde_ratio,
    wick_first_order,
)
from moyal_qmm.free_theory import log_z_free_product
from moyal_qmm.model import Coupling, DegenerateSpectrumError, KineticSpectrum, PvRegulator


def brute_force_wick(e):
    """<tr X^4> by explicit enumeration of the three pairings of the trace."""
    e = np.asarray(e, dtype=float)
    n = e.size

    def cov(a, b, c, d):
        return (1.0 if (a == d and b == c) else 0.0) / (e[a] + e[b])

    total = 0.0
    for i, j, k, l in product(range(n), repeat=4):
        f = [(i, j), (j, k), (k, l), (l, i)]
        total += (
            cov(*f[0], *f[1]) * cov(*f[2], *f[3])
            + cov(*f[0], *f[2]) * cov(*f[1], *f[3])
            + cov(*f[0], *f[3]) * cov(*f[1], *f[2])
        )
    return total


class TestVandermonde:
    def test_examples(self):
        assert vandermonde(EigenvalueVector([1, 2, 3])).to_float() == pytest.approx(2.0)
        v = vandermonde(EigenvalueVector([2, 1]))
        assert v.sign == -1 and v.log_mag == pytest.approx(0.0)
        assert vandermonde(EigenvalueVector([1, 1, 5])).is_zero

    def test_ratio_examples(self):
        assert vandermonde_ratio(EigenvalueVector([1, 2])).to_float() == pytest.approx(1 / 3)
        assert vandermonde_ratio(EigenvalueVector([1, 2, 3])).to_float() == pytest.approx(1 / 30)

    def test_ratio_pole_signal(self):
        with pytest.raises(ZeroDivisionError):
            vandermonde_ratio(EigenvalueVector([-1.0, 1.0]))

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_ratio_identity(self, n):
        # ratio(lam) * Delta(lam^2) = Delta(lam)^2
        rng = np.random.default_rng(n)
        for _ in range(50):
            lam = rng.uniform(0.2, 3.0, n) * rng.choice([-1.0, 1.0], n)
            if np.min(np.abs(lam[:, None] + lam[None, :])) < 1e-3:
                continue
            lhs = vandermonde_ratio(EigenvalueVector(lam)) * vandermonde(
                EigenvalueVector(lam**2)
            )
            rhs = vandermonde(EigenvalueVector(lam)).pow_int(2)
            assert lhs.sign == rhs.sign
            assert lhs.log_mag == pytest.approx(rhs.log_mag, abs=1e-10)


class TestQuadrature:
    def test_n1_plain_gaussian(self):
        val = log_z_eigen_quadrature(KineticSpectrum([1.0]), Coupling(0.0), 80)
        assert val.log_mag == pytest.approx(0.5 * math.log(math.pi), abs=1e-10)

    @pytest.mark.parametrize("e", [[1.0, 2.0], [0.6, 2.7]])
    def test_n2_free_agreement(self, e):
        q = log_z_eigen_quadrature(KineticSpectrum(e), Coupling(0.0), 80)
        f = log_z_free_product(KineticSpectrum(e))
        assert abs(q.log_mag - f.log_mag) <= 1e-6

    def test_n3_free_agreement(self):
        s = KineticSpectrum([0.8, 1.7, 2.9])
        q = log_z_eigen_quadrature(s, Coupling(0.0), 96)
        f = log_z_free_product(s)
        assert abs(q.log_mag - f.log_mag) <= 1e-4

    def test_coupled_vs_mc(self):
        s = KineticSpectrum([1.0, 2.0])
        g = Coupling(0.05)
        q = log_z_eigen_quadrature(s, g, 160)
        mc = log_z_matrix_mc(s, g, 400_000, seed=9)
        assert abs(q.log_mag - mc.mean) <= 3 * mc.std_error

    def test_n4_free_agreement(self):
        s = KineticSpectrum([0.7, 1.3, 2.1, 2.9])
        q = log_z_eigen_quadrature(s, Coupling(0.0), 48)
        f = log_z_free_product(s)
        assert abs(q.log_mag - f.log_mag) <= 1e-5

    def test_rejects_large_n(self):
        with pytest.raises(ValueError):
            log_z_eigen_quadrature(KineticSpectrum([1, 2, 3, 4, 5]), Coupling(0.0), 16)

    def test_rejects_degenerate_spectrum(self):
        with pytest.raises(DegenerateSpectrumError):
            log_z_eigen_quadrature(KineticSpectrum([1.0, 1.0]), Coupling(0.0), 32)

    def test_integrand_extends_continuously(self):
        # at lam_1 = -lam_2 + eta the determinant's column collision cancels
        # the ratio pole; the product tends to a finite limit
        e = np.array([1.0, 2.0])
        lam2 = 0.8
        limit = 4 * lam2**2 * (e[0] - e[1]) * math.exp(-(e[0] + e[1]) * lam2**2)

        def integrand(l1, l2):
            ratio = (l2 - l1) / (l2 + l1)
            det = math.exp(-e[0] * l1**2 - e[1] * l2**2) - math.exp(
                -e[0] * l2**2 - e[1] * l1**2
            )
            return ratio * det

        values = [integrand(-lam2 + eta, lam2) for eta in (1e-3, 1e-4, 1e-5, 1e-6)]
        errors = [abs(v - limit) for v in values]
        assert errors == sorted(errors, reverse=True)
        assert errors[-1] <= 1e-5 * abs(limit)


class TestMatrixMc:
    def test_g0_exact(self):
        s = KineticSpectrum([0.9, 1.4, 2.2])
        est = log_z_matrix_mc(s, Coupling(0.0), 1000, seed=3)
        assert est.mean == log_z_free_product(s).log_mag
        assert est.std_error == 0.0

    def test_deterministic_given_seed(self):
        s = KineticSpectrum([1.0, 2.0])
        a = log_z_matrix_mc(s, Coupling(0.02), 120_000, seed=42)
        b = log_z_matrix_mc(s, Coupling(0.02), 120_000, seed=42)
        assert a == b
        c = log_z_matrix_mc(s, Coupling(0.02), 120_000, seed=43)
        assert c.mean != a.mean

    def test_sampler_covariances(self):
        s = KineticSpectrum([1.0, 3.0])
        rng = np.random.Generator(np.random.Philox(key=7))
        x = sample_hermitian(s, rng, 200_000)
        var_diag = np.var(x[:, 0, 0].real)
        assert var_diag == pytest.approx(1.0 / (2 * 1.0), rel=0.02)
        var_off = np.var(x[:, 0, 1].real)
        assert var_off == pytest.approx(1.0 / (2 * (1.0 + 3.0)), rel=0.02)

    def test_small_g_slope_matches_wick(self):
        # (log Z_free - log Z) / g -> <tr X^4> as g -> 0
        s = KineticSpectrum([1.0, 1.0])
        g = 1e-3
        est = log_z_matrix_mc(s, Coupling(g), 600_000, seed=11)
        slope = (log_z_free_product(s).log_mag - est.mean) / g
        target = wick_first_order(s)
        assert target == pytest.approx((2 * 8 + 2) / 4.0)  # (2N^3+N)/(4 xi^2)
        assert abs(slope - target) <= 3 * est.std_error / g + 0.05 * target


class TestWick:
    def test_n1_quartic_moment(self):
        assert wick_first_order(KineticSpectrum([2.0])) == pytest.approx(3 / 16)

    @pytest.mark.parametrize("n", [2, 3])
    def test_symmetric_closed_form_and_brute_force(self, n):
        xi = 1.7
        s = KineticSpectrum([xi] * n)
        val = wick_first_order(s)
        assert val == pytest.approx((2 * n**3 + n) / (4 * xi**2), rel=1e-13)
        assert val == pytest.approx(brute_force_wick(s.e), rel=1e-13)

    def test_brute_force_random_spectra(self):
        rng = np.random.default_rng(17)
        for n in (2, 3):
            e = rng.uniform(0.5, 3.0, n)
            assert wick_first_order(KineticSpectrum(e)) == pytest.approx(
                brute_force_wick(np.sort(e)), rel=1e-12
            )

    def test_quadrature_derivative(self):
        # d/dg log Z at g = 0 equals -<tr X^4>; centered stencil {0, 2h}
        s = KineticSpectrum([1.0, 2.0])
        h = 1e-4
        f0 = log_z_eigen_quadrature(s, Coupling(0.0), 160).log_mag
        f2 = log_z_eigen_quadrature(s, Coupling(2 * h), 160).log_mag
        slope = (f2 - f0) / (2 * h)
        assert abs(slope + wick_first_order(s)) / wick_first_order(s) <= 1e-3


class TestPvKernel:
    def test_examples(self):
        assert pv_kernel_check(1.0, PvRegulator(1e-6)) == pytest.approx(1.0, abs=1e-11)
        assert pv_kernel_check(0.0, PvRegulator(0.3)) == 0.0

    def test_quadratic_convergence(self):
        errs = [abs(pv_kernel_check(0.5, PvRegulator(eps)) - 2.0) for eps in (1e-2, 1e-3, 1e-4)]
        assert errs[0] / errs[1] == pytest.approx(100.0, rel=0.05)
        assert errs[1] / errs[2] == pytest.approx(100.0, rel=0.05)


class TestVandermondeLimit:
    def test_n1_is_one(self):
        for delta in (0.5, 1e-3):
            assert vandermonde_limit_check(EigenvalueVector([2.3]), delta).to_float() == 1.0

    def test_richardson_order2(self):
        v = EigenvalueVector([0.0, 1.0])
        target = vandermonde(v).to_float()
        defects = []
        for delta in (4e-2, 2e-2, 1e-2):
            r = vandermonde_limit_check(v, delta).to_float()
            defects.append(abs(r / target - 1.0))
        assert defects[0] / defects[1] == pytest.approx(4.0, rel=0.05)
        assert defects[1] / defects[2] == pytest.approx(4.0, rel=0.05)

    def test_n3_convergence_order(self):
        rng = np.random.default_rng(3)
        lam = rng.uniform(-2.0, 2.0, 3)
        target = vandermonde(EigenvalueVector(lam)).to_float()
        d1 = abs(vandermonde_limit_check(EigenvalueVector(lam), 1e-3).to_float() / target - 1)
        d2 = abs(vandermonde_limit_check(EigenvalueVector(lam), 5e-4).to_float() / target - 1)
        assert d1 / d2 == pytest.approx(4.0, rel=0.15)

    def test_n6_convergence_above_precision_floor(self):
        # at N=6 the determinant scales as delta^15, so deltas must stay
        # above the double-precision floor; O(delta^2) still holds there
        rng = np.random.default_rng(77)
        lam = rng.uniform(-2.0, 2.0, 6)
        target = vandermonde(EigenvalueVector(lam)).to_float()
        d1 = abs(vandermonde_limit_check(EigenvalueVector(lam), 0.2).to_float() / target - 1)
        d2 = abs(vandermonde_limit_check(EigenvalueVector(lam), 0.1).to_float() / target - 1)
        assert d1 / d2 == pytest.approx(4.0, rel=0.1)

    def test_size_limit(self):
        with pytest.raises(ValueError):
            vandermonde_limit_check(EigenvalueVector(list(range(1, 9))), 1e-3)


class TestAuxTypes:
    def test_hermitian_sample_matrix(self):
        s = HermitianSample(
            diag=np.array([1.0, 2.0]),
            offdiag_re=np.array([0.5]),
            offdiag_im=np.array([0.25]),
        )
        x = s.matrix()
        assert np.allclose(x, x.conj().T)
        assert x[0, 1] == pytest.approx(0.5 + 0.25j)

    def test_mc_estimate_validation(self):
        with pytest.raises(ValueError):
            McEstimate(mean=0.0, std_error=-1.0, n_samples=10, seed=0)
        with pytest.raises(ValueError):
            McEstimate(mean=0.0, std_error=0.0, n_samples=0, seed=0)
