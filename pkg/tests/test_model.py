import numpy as np
import pytest
from hypothesis import given, strategies as st

from moyal_qmm.model import (
    Coupling,
    DegenerateSpectrumError,
    KineticSpectrum,
    PvRegulator,
    epsilons_from_spectrum,
    spectrum_from_epsilons,
    spectrum_from_json_doc,
)


class TestKineticSpectrum:
    def test_sorted_and_derived(self):
        s = KineticSpectrum([3.0, 1.0, 2.0])
        assert list(s.e) == [1.0, 2.0, 3.0]
        assert s.n == 3
        assert s.xi == pytest.approx(2.0)
        assert s.min_gap == pytest.approx(1.0)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            KineticSpectrum([1.0, -2.0])
        with pytest.raises(ValueError):
            KineticSpectrum([0.0])

    def test_degeneracy_flag(self):
        assert KineticSpectrum([1.0, 1.0]).is_degenerate
        assert not KineticSpectrum([1.0, 2.0]).is_degenerate
        with pytest.raises(DegenerateSpectrumError):
            KineticSpectrum([2.0, 2.0]).require_distinct("test")

    def test_single_eigenvalue(self):
        s = KineticSpectrum([1.5])
        assert s.min_gap == np.inf
        assert not s.is_degenerate
        assert s.eps_tilde == pytest.approx([0.0])


class TestConversions:
    def test_symmetric_point(self):
        s = spectrum_from_epsilons(2.0, [0.0, 0.0, 0.0])
        assert list(s.e) == [2.0, 2.0, 2.0]

    def test_direct_substitution(self):
        s = spectrum_from_epsilons(1.0, [0.1, -0.1])
        assert np.allclose(np.sort(s.e), [0.9, 1.1])

    def test_epsilons_from_spectrum_examples(self):
        xi, eps = epsilons_from_spectrum(KineticSpectrum([2.0, 2.0, 2.0]))
        assert xi == 2.0 and np.allclose(eps, 0.0)
        xi, eps = epsilons_from_spectrum(KineticSpectrum([1.0, 3.0]))
        assert xi == 2.0 and np.allclose(eps, [-0.5, 0.5])
        xi, eps = epsilons_from_spectrum(KineticSpectrum([1.0, 2.0, 3.0]))
        assert xi == 2.0 and np.allclose(eps, [-0.5, 0.0, 0.5])

    def test_rejects_bad_deviations(self):
        with pytest.raises(ValueError):
            spectrum_from_epsilons(1.0, [0.2, 0.2])  # nonzero sum
        with pytest.raises(ValueError):
            spectrum_from_epsilons(1.0, [-1.5, 1.5])  # nonpositive eigenvalue

    @given(
        st.lists(st.floats(min_value=-0.45, max_value=0.45), min_size=2, max_size=8),
        st.floats(min_value=0.1, max_value=10.0),
    )
    def test_roundtrip(self, raw, xi):
        eps = np.asarray(raw) - np.mean(raw)
        s = spectrum_from_epsilons(xi, eps)
        xi2, eps2 = epsilons_from_spectrum(s)
        s2 = spectrum_from_epsilons(xi2, eps2)
        assert np.allclose(s.e, s2.e, rtol=1e-12)
        assert xi2 == pytest.approx(xi, rel=1e-12)
        assert abs(float(np.sum(eps2))) <= 1e-12 * s.n

    def test_scale_covariance(self):
        s = KineticSpectrum([0.7, 1.9, 2.4])
        xi1, eps1 = epsilons_from_spectrum(s)
        s2 = KineticSpectrum(3.0 * s.e)
        xi2, eps2 = epsilons_from_spectrum(s2)
        assert xi2 == pytest.approx(3.0 * xi1, rel=1e-14)
        assert np.allclose(eps1, eps2, atol=1e-14)


class TestJsonForms:
    def test_e_form(self):
        s = spectrum_from_json_doc({"e": [2.0, 1.0]})
        assert list(s.e) == [1.0, 2.0]

    def test_eps_form(self):
        s = spectrum_from_json_doc({"xi": 2.0, "eps_tilde": [-0.25, 0.25]})
        assert np.allclose(s.e, [1.5, 2.5])

    def test_exactly_one_form(self):
        with pytest.raises(ValueError):
            spectrum_from_json_doc({"e": [1.0], "xi": 1.0, "eps_tilde": [0.0]})
        with pytest.raises(ValueError):
            spectrum_from_json_doc({"xi": 1.0})
        with pytest.raises(ValueError):
            spectrum_from_json_doc({})


class TestAuxTypes:
    def test_coupling(self):
        assert Coupling(0.0).g == 0.0
        with pytest.raises(ValueError):
            Coupling(-0.1)

    def test_regulator(self):
        assert PvRegulator(1e-6).eps == 1e-6
        with pytest.raises(ValueError):
            PvRegulator(0.0)
