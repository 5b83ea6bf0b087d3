import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mqshbc.constants import C0, EPS0, MU0, TWO_PI
from mqshbc.dielectrics import (ColeColeModel, ColeColeTerm, InterpolatedPermittivityModel,
                                InterpolationDomain, OutOfBandWarning, Regime, classify_regime,
                                evaluate_cole_cole, evaluate_interpolated, skin_depth, wavelength)
from mqshbc.errors import FrequencyRangeError, InvariantViolation

BAND = np.logspace(3, 10, 200)


def vacuum():
    return ColeColeModel("vacuum", 1.0, (), 0.0)


class TestColeCole:
    @pytest.mark.parametrize("key,f", [("muscle_1MHz", 1e6), ("muscle_100MHz", 100e6)])
    def test_muscle_spot_values(self, muscle, goldens, key, f):
        p = evaluate_cole_cole(muscle, f)
        assert p.eps_real == pytest.approx(goldens[key]["eps_real"], rel=1e-10)
        assert p.sigma_eff == pytest.approx(goldens[key]["sigma_eff"], rel=1e-10)

    def test_muscle_447MHz(self, muscle, goldens):
        g = goldens["muscle_447MHz"]
        p = evaluate_cole_cole(muscle, 447e6)
        assert p.eps_real == pytest.approx(57, rel=0.05)
        assert p.wavelength_lossless == pytest.approx(0.089, rel=0.10)
        assert p.wavelength_lossless == pytest.approx(g["wavelength_lossless"], rel=1e-10)
        assert p.skin_depth == pytest.approx(g["skin_depth"], rel=1e-10)

    def test_dispersion_free_model(self):
        m = ColeColeModel("flat", 7.5, [(0.0, 1e-9, 0.0)], 0.0)
        p = evaluate_cole_cole(m, np.array([1e3, 1e6, 1e9]))
        assert np.all(p.eps_real == 7.5)
        assert np.all(p.sigma_eff == 0.0)
        assert np.all(np.isinf(p.skin_depth))

    def test_nonpositive_frequency_rejected(self, muscle):
        for f in (0.0, -1.0, [1e6, 0.0]):
            with pytest.raises(FrequencyRangeError):
                evaluate_cole_cole(muscle, f)

    def test_out_of_band_warns_but_evaluates(self, muscle):
        with pytest.warns(OutOfBandWarning):
            p = evaluate_cole_cole(muscle, 100.0)
        assert np.isfinite(p.eps_real)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            evaluate_cole_cole(muscle, 1e3)
            evaluate_cole_cole(muscle, 1e10)

    @pytest.mark.parametrize("field,kwargs", [
        ("eps_inf", dict(eps_inf=0.5)),
        ("sigma_ionic", dict(sigma_ionic=-1.0)),
        ("term.1.alpha", dict(terms=[(1.0, 1e-9, 1.2)])),
        ("term.1.tau", dict(terms=[(1.0, 0.0, 0.1)])),
        ("term.1.delta_eps", dict(terms=[(-1.0, 1e-9, 0.1)])),
    ])
    def test_invariants_name_field(self, field, kwargs):
        args = dict(tissue_name="x", eps_inf=4.0, terms=(), sigma_ionic=0.1)
        args.update(kwargs)
        with pytest.raises(InvariantViolation) as err:
            ColeColeModel(**args)
        assert err.value.field == field

    def test_shipped_tissues_monotone_and_positive(self, tissue_db):
        for model in tissue_db.values():
            p = evaluate_cole_cole(model, BAND)
            assert np.all(np.diff(p.eps_real) <= 0.0), model.tissue_name
            assert np.all(np.diff(p.sigma_eff) >= 0.0), model.tissue_name
            assert np.all(p.eps_real >= 1.0) and np.all(p.sigma_eff > 0.0)
            for arr in (p.wavelength_lossless, p.wavelength_lossy, p.skin_depth):
                assert np.all(arr > 0.0)

    def test_wavelength_identity(self, tissue_db):
        for model in tissue_db.values():
            p = evaluate_cole_cole(model, BAND)
            assert np.allclose(p.wavelength_lossless * BAND * np.sqrt(p.eps_real) / C0, 1.0,
                               rtol=1e-9, atol=0)

    def test_lossy_shorter_than_lossless(self, tissue_db):
        for model in tissue_db.values():
            p = evaluate_cole_cole(model, BAND)
            assert np.all(p.wavelength_lossy <= p.wavelength_lossless)

    def test_low_loss_wavelengths_agree(self):
        # tiny conductivity: loss tangent well below 0.01
        m = ColeColeModel("low-loss", 40.0, (), 1e-4)
        f = np.logspace(8, 10, 20)
        p = evaluate_cole_cole(m, f)
        tan = p.sigma_eff / (TWO_PI * f * EPS0 * p.eps_real)
        assert np.all(tan < 0.01)
        assert np.allclose(p.wavelength_lossy, p.wavelength_lossless, rtol=0.01)

    def test_mu_r_override(self, muscle):
        p1 = evaluate_cole_cole(muscle, 1e8)
        p4 = evaluate_cole_cole(muscle, 1e8, mu_r=4.0)
        assert p1.mu_r == 1.0
        assert p4.wavelength_lossless == pytest.approx(p1.wavelength_lossless / 2, rel=1e-12)

    def test_concurrent_evaluation_is_pure(self, muscle):
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(4) as pool:
            results = list(pool.map(lambda f: float(evaluate_cole_cole(muscle, f).eps_real), BAND))
        assert results == [float(evaluate_cole_cole(muscle, f).eps_real) for f in BAND]


class TestWavelengthAndSkinDepth:
    def test_free_space(self):
        assert wavelength(vacuum(), 300e6) == pytest.approx(C0 / 300e6, rel=1e-15)
        assert wavelength(vacuum(), 299792458.0) == pytest.approx(1.0, rel=1e-15)
        assert wavelength(vacuum(), 300e6, "lossy") == wavelength(vacuum(), 300e6)

    def test_bad_variant(self, muscle):
        with pytest.raises(ValueError):
            wavelength(muscle, 1e6, "bogus")

    def test_lambda_one_metre_crossing(self, muscle, goldens):
        from scipy.optimize import brentq

        f_star = brentq(lambda f: wavelength(muscle, f) - 1.0, 1e6, 1e9, xtol=1e-6, rtol=1e-14)
        assert 30e6 <= f_star <= 150e6
        assert f_star == pytest.approx(goldens["muscle_lambda_1m_crossing"], rel=1e-9)

    def test_lossless_medium_infinite_skin_depth(self):
        assert np.all(np.isinf(skin_depth(vacuum(), np.array([1e3, 1e9]))))

    def test_good_conductor_limit(self):
        m = ColeColeModel("conductor", 1.0, (), 5.0)
        f = np.array([1e3, 1e5, 1e6])
        assert np.all(5.0 / (TWO_PI * f * EPS0) > 100)
        assert np.allclose(skin_depth(m, f), np.sqrt(2.0 / (TWO_PI * f * MU0 * 5.0)), rtol=0.01)

    def test_muscle_447MHz_skin_depth(self, muscle, goldens):
        # about 5.1 cm: just above the 1-5 cm bracket quoted for this example
        assert skin_depth(muscle, 447e6) == pytest.approx(goldens["muscle_447MHz"]["skin_depth"], rel=1e-10)


class TestInterpolated:
    def test_endpoints_exact(self, muscle):
        for domain in InterpolationDomain:
            m = InterpolatedPermittivityModel.from_cole_cole(muscle, domain=domain)
            assert evaluate_interpolated(m, m.f_low).eps_real == m.eps_low
            assert evaluate_interpolated(m, m.f_high).eps_real == m.eps_high

    def test_anchors_match_cole_cole(self, muscle, goldens):
        m = InterpolatedPermittivityModel.from_cole_cole(muscle)
        assert m.interpolation_domain is InterpolationDomain.LINEAR
        assert m.eps_low == pytest.approx(goldens["interpolated_muscle"]["eps_low"], rel=1e-10)
        assert m.eps_high == pytest.approx(goldens["interpolated_muscle"]["eps_high"], rel=1e-10)

    def test_out_of_range(self, muscle):
        m = InterpolatedPermittivityModel.from_cole_cole(muscle)
        for f in (5.0, 11e6):
            with pytest.raises(FrequencyRangeError):
                evaluate_interpolated(m, f)

    def test_eight_cm_crossing(self, muscle, goldens):
        from scipy.optimize import brentq

        m = InterpolatedPermittivityModel.from_cole_cole(muscle)
        f = brentq(lambda x: wavelength(m, x) - 0.08, 1e5, 9.9e6, xtol=1e-6, rtol=1e-14)
        assert 100e3 <= f <= 10e6
        assert f == pytest.approx(goldens["interpolated_muscle"]["crossing_8cm"], rel=1e-8)

    def test_deviation_direction(self, muscle):
        m = InterpolatedPermittivityModel.from_cole_cole(muscle)
        f = np.logspace(5, 7, 100)
        ip = evaluate_interpolated(m, f)
        cc = evaluate_cole_cole(muscle, f)
        higher = ip.eps_real > cc.eps_real
        assert np.any(higher)
        assert np.all(ip.wavelength_lossless[higher] <= cc.wavelength_lossless[higher])

    def test_log_domain_is_monotone(self, muscle):
        m = InterpolatedPermittivityModel.from_cole_cole(muscle, domain="linear-in-log-frequency")
        eps = evaluate_interpolated(m, np.logspace(1, 7, 50)).eps_real
        assert np.all(np.diff(eps) < 0)

    def test_sigma_sources(self, muscle):
        companion = InterpolatedPermittivityModel.from_cole_cole(muscle)
        const = InterpolatedPermittivityModel.from_cole_cole(muscle, sigma="constant", sigma_constant=0.0)
        assert evaluate_interpolated(companion, 1e6).sigma_eff == pytest.approx(
            evaluate_cole_cole(muscle, 1e6).sigma_eff)
        p = evaluate_interpolated(const, np.array([1e3, 1e6]))
        assert np.all(p.sigma_eff == 0.0) and np.all(np.isinf(p.skin_depth))
        with pytest.raises(ValueError):
            InterpolatedPermittivityModel.from_cole_cole(muscle, sigma="table")

    def test_invariants(self):
        with pytest.raises(InvariantViolation):
            InterpolatedPermittivityModel(10.0, 10e6, 5.0, 10.0)
        with pytest.raises(InvariantViolation):
            InterpolatedPermittivityModel(0.5, 10.0, 5.0, 10e6)


class TestRegime:
    def test_muscle_1MHz(self, muscle):
        # lambda = 7.0 m: MQS for a 0.5 m limb, transitional for 1 m under the 10x rule
        p = evaluate_cole_cole(muscle, 1e6)
        assert classify_regime(p, 0.5) is Regime.MQS
        assert classify_regime(p, 1.0) is Regime.TRANSITIONAL
        assert classify_regime(p, 1.0, mqs_factor=5.0) is Regime.MQS

    def test_muscle_447MHz_arm(self, muscle):
        # lambda = 8.90 cm is just above the 8 cm arm: not EM under the 1x rule
        p = evaluate_cole_cole(muscle, 447e6)
        assert classify_regime(p, 0.08) is Regime.TRANSITIONAL
        assert classify_regime(p, 0.09) is Regime.EM

    def test_boundaries_inclusive(self):
        class P:
            wavelength_lossless = np.array([10.0, 1.0, 5.0])

        labels = classify_regime(P, 1.0)
        assert list(labels) == [Regime.MQS, Regime.EM, Regime.TRANSITIONAL]
        assert str(labels[0]) == "MQS"

    def test_configurable_thresholds(self, muscle):
        p = evaluate_cole_cole(muscle, 447e6)
        assert classify_regime(p, 0.08, em_factor=1.2) is Regime.EM

    def test_bad_dimension(self, muscle):
        with pytest.raises(ValueError):
            classify_regime(evaluate_cole_cole(muscle, 1e6), 0.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(1.0, 100.0), st.floats(0.0, 1e5), st.floats(1e-12, 1e-3), st.floats(0.0, 0.9),
       st.floats(0.0, 10.0))
def test_physical_models_have_non_increasing_permittivity(eps_inf, de, tau, alpha, sigma):
    model = ColeColeModel("random", eps_inf, [ColeColeTerm(de, tau, alpha)], sigma)
    p = evaluate_cole_cole(model, BAND)
    assert np.all(p.eps_real >= 1.0)
    assert np.all(np.diff(p.eps_real) <= 1e-12 * p.eps_real[1:])
