import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest
from scipy import stats

from scring import twoslit as ts
from scring.constants import CONST
from scring.ringcore import flux_quantum

PHI0_E = flux_quantum(CONST.e_charge)


def setup(flux_ratio=0.0, envelope="uniform", **kw):
    base = dict(slit_separation=1e-6, screen_distance=1.0, slit_width=2e-7,
                particle_mass=CONST.m_electron, particle_speed=1e6,
                enclosed_flux=flux_ratio * PHI0_E, envelope=envelope)
    base.update(kw)
    return ts.InterferenceSetup(**base)


class TestSetup:
    @pytest.mark.parametrize("kw", [
        {"slit_width": 2e-6}, {"slit_width": 0.0}, {"screen_distance": 0.0},
        {"particle_speed": 0.0}, {"particle_mass": -1.0}, {"particle_charge": 0.0},
        {"envelope": "gaussian"},
    ])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            setup(**kw)

    def test_far_field_flag(self):
        assert setup().far_field
        assert not setup(screen_distance=1e-6).far_field
        with pytest.warns(RuntimeWarning, match="far-field"):
            ts.pattern(setup(screen_distance=1e-6), -1e-6, 1e-6, 11)

    def test_fringe_period(self):
        s = setup()
        assert s.fringe_period == s.wavelength * s.screen_distance / s.slit_separation


class TestWavelength:
    def test_fullerene(self):
        assert ts.de_broglie_wavelength(1.4e-24, 100.0) == pytest.approx(4.73290725e-12, rel=1e-8)

    def test_speed_doubling(self):
        assert ts.de_broglie_wavelength(1e-26, 200.0) == pytest.approx(ts.de_broglie_wavelength(1e-26, 100.0) / 2, rel=1e-15)

    def test_ring_ladder_consistency(self):
        # electron moving at the first permitted velocity of a 1 um ring
        assert ts.de_broglie_wavelength(CONST.m_electron, 115.7676359638892) == pytest.approx(2 * math.pi * 1e-6, rel=1e-9)

    def test_invalid(self):
        with pytest.raises(ValueError):
            ts.de_broglie_wavelength(0.0, 1.0)


class TestPhaseAndIntensity:
    def test_phase_examples(self):
        assert ts.phase_difference(setup(), 0.0) == 0.0
        assert ts.phase_difference(setup(0.5), 0.0) == pytest.approx(math.pi, rel=1e-15)
        s = setup()
        assert ts.phase_difference(s, s.fringe_period) == pytest.approx(2 * math.pi, rel=1e-15)

    def test_intensity_extremes(self):
        s = setup()
        assert ts.intensity(s, 0.0) == 4.0
        assert ts.intensity(s, 0.5 * s.fringe_period) == pytest.approx(0.0, abs=1e-15)
        assert ts.intensity(setup(0.5), 0.0) == pytest.approx(0.0, abs=1e-15)

    @given(k=st.integers(-50, 50), f=st.floats(-3, 3))
    def test_flux_periodicity_exact(self, k, f):
        y = np.linspace(-2e-3, 2e-3, 257)
        a = ts.intensity(setup(f), y)
        b = ts.intensity(setup(f + k), y)
        assert np.max(np.abs(a - b)) <= 1e-12

    def test_one_quantum_bitwise(self):
        y = np.linspace(-2e-3, 2e-3, 2001)
        assert np.array_equal(ts.intensity(setup(0.0), y), ts.intensity(setup(1.0), y))

    @given(f=st.floats(-5, 5), y=st.floats(-1e-2, 1e-2))
    def test_non_negative(self, f, y):
        assert ts.intensity(setup(f, envelope="single-slit"), y) >= 0
        assert ts.intensity(setup(f), y) >= 0

    def test_visibility(self):
        s = setup(0.3)
        y = np.linspace(0, s.fringe_period, 100001)
        p = ts.intensity(s, y)
        assert (p.max() - p.min()) / (p.max() + p.min()) == pytest.approx(1.0, abs=1e-9)

    def test_single_slit_envelope(self):
        s = setup(envelope="single-slit")
        first_zero = s.wavelength * s.screen_distance / s.slit_width
        assert ts.intensity(s, first_zero) == pytest.approx(0.0, abs=1e-30)
        assert ts.intensity(s, 0.0) == 4.0


class TestPattern:
    def test_invalid(self):
        with pytest.raises(ValueError):
            ts.pattern(setup(), 0, 1, 1)
        with pytest.raises(ValueError):
            ts.pattern(setup(), 1, 0, 10)

    def test_symmetric_at_zero_flux(self):
        p = ts.pattern(setup(), -2e-3, 2e-3, 2001)
        assert np.allclose(p.intensity, p.intensity[::-1], atol=1e-12)

    def test_half_quantum_swaps_extrema(self):
        s0, s1 = setup(0.0), setup(0.5)
        period = s0.fringe_period
        maxima = np.arange(-5, 6) * period
        minima = maxima + period / 2
        assert np.allclose(ts.intensity(s0, maxima), 4) and np.allclose(ts.intensity(s1, maxima), 0, atol=1e-12)
        assert np.allclose(ts.intensity(s0, minima), 0, atol=1e-12) and np.allclose(ts.intensity(s1, minima), 4)

    def test_flux_shift(self):
        p = ts.pattern(setup(0.25), -1e-3, 1e-3, 11)
        assert p.flux_shift == pytest.approx(0.25 * p.fringe_period, rel=1e-15)

    @given(f=st.floats(0, 1))
    def test_translation_uniform(self, f):
        s = setup(f)
        y = np.linspace(-2e-3, 2e-3, 1001)
        shifted = ts.intensity(setup(0.0), y + f * s.fringe_period)
        assert np.max(np.abs(ts.intensity(s, y) - shifted)) <= 1e-12 * 4

    def test_envelope_shifts_only_fringes(self):
        f = 0.3
        s = setup(f, envelope="single-slit")
        s0 = setup(0.0, envelope="single-slit")
        y = np.linspace(-2e-3, 2e-3, 501)
        amp2 = np.sinc(s.slit_width * y / (s.wavelength * s.screen_distance)) ** 2
        fringe0 = ts.intensity(setup(0.0), y + f * s.fringe_period) / 2
        assert np.allclose(ts.intensity(s, y), 2 * amp2 * fringe0, atol=1e-12)
        assert not np.allclose(ts.intensity(s, y), ts.intensity(s0, y + f * s.fringe_period), atol=1e-6)


class TestSampler:
    def test_deterministic(self):
        p = ts.pattern(setup(0.2), -1e-3, 1e-3, 501)
        assert np.array_equal(ts.sample_detections(p, 1000, 7), ts.sample_detections(p, 1000, 7))
        assert not np.array_equal(ts.sample_detections(p, 1000, 7), ts.sample_detections(p, 1000, 8))

    def test_invalid(self):
        p = ts.pattern(setup(), -1e-3, 1e-3, 11)
        with pytest.raises(ValueError):
            ts.sample_detections(p, 0)
        zero = ts.Pattern(y=p.y, intensity=np.zeros_like(p.y), fringe_period=1.0, flux_shift=0.0)
        with pytest.raises(ValueError, match="zero"):
            ts.sample_detections(zero, 10)

    def test_delta_like(self):
        y = np.linspace(0, 1, 11)
        f = np.zeros(11)
        f[4] = 1.0
        p = ts.Pattern(y=y, intensity=f, fringe_period=1.0, flux_shift=0.0)
        s = ts.sample_detections(p, 5000, 0)
        # the linear interpolant is non-zero only on the two cells touching y[4]
        assert np.all((s > y[3]) & (s < y[5]))

    def test_uniform_ks(self):
        y = np.linspace(-1.0, 1.0, 11)
        p = ts.Pattern(y=y, intensity=np.ones_like(y), fringe_period=1.0, flux_shift=0.0)
        s = ts.sample_detections(p, 100000, 1)
        res = ts.ks_uniform(s, -1.0, 1.0)
        crit = stats.kstwo.ppf(0.99, s.size)
        assert res.statistic < crit and res.pvalue > 0.01

    def test_fringe_chi_square(self):
        p = ts.pattern(setup(0.25), -2e-3, 2e-3, 2001)
        s = ts.sample_detections(p, 100000, 1)
        stat, dof, pval = ts.chi_square_fit(p, s)
        assert dof > 10 and pval > 0.01

    def test_chi_square_rejects_wrong_pattern(self):
        p = ts.pattern(setup(0.25), -2e-3, 2e-3, 2001)
        wrong = ts.pattern(setup(0.0), -2e-3, 2e-3, 2001)
        s = ts.sample_detections(wrong, 100000, 1)
        assert ts.chi_square_fit(p, s)[2] < 1e-6

    def test_empirical_cdf_converges(self):
        p = ts.pattern(setup(0.1, envelope="single-slit"), -2e-3, 2e-3, 4001)
        s = np.sort(ts.sample_detections(p, 100000, 3))
        model = ts._cdf_at(p, s)
        ecdf = np.arange(1, s.size + 1) / s.size
        assert np.max(np.abs(ecdf - model)) < stats.kstwo.ppf(0.99, s.size)

    def test_cdf_helpers_agree_at_nodes(self):
        p = ts.pattern(setup(0.4), -1e-3, 1e-3, 301)
        assert np.allclose(ts._cdf_at(p, p.y), ts.pattern_cdf(p), atol=1e-14)
        assert ts.pattern_cdf(p)[-1] == pytest.approx(1.0, abs=1e-15)
