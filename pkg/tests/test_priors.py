import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pihl.numerics import QuadratureSpec, integrate_adaptive
from pihl.priors import (
    CombPrior,
    KaiserPrior,
    RectPrior,
    SmearedRectPrior,
    comb_from_samples,
    kaiser_density,
    kaiser_normalization,
    kaiser_normalization_asymptote,
    kaiser_normalization_bessel,
    kaiser_normalization_series,
    kaiser_series_terms,
    kaiser_survival,
    kaiser_tail_mass,
    kaiser_tail_mass_bound,
    kaiser_total_mass,
    kaiser_transform,
    bandwidth_excess,
    log_kaiser_normalization,
    prior_from_json,
    smeared_density,
    smeared_outside_mass,
)


@pytest.fixture(scope="module")
def kaiser():
    return KaiserPrior.create(2.0, 8.0)


@pytest.fixture(scope="module")
def smeared():
    return SmearedRectPrior.create(2.0, 64.0, 1.0)


class TestRect:
    def test_density(self):
        p = RectPrior(0.5, center=1.0)
        assert p.density(1.2) == pytest.approx(2.0)
        assert p.density(1.3) == 0.0
        assert p.support == (0.75, 1.25)

    def test_integrates_to_one(self):
        p = RectPrior(0.7)
        assert integrate_adaptive(p.density, -0.35, 0.35) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_zero_width(self):
        with pytest.raises(ValueError):
            RectPrior(0.0)


class TestComb:
    def test_from_samples_normalizes(self):
        p = comb_from_samples(0.5, [(0, 1.0), (1, 3.0), (-2, 4.0)])
        assert p.total_mass() == pytest.approx(1.0, abs=1e-15)
        assert p.density(0.5) == pytest.approx(2 * 3 / 8)
        assert p.density(0.26) == pytest.approx(2 * 3 / 8)
        assert p.density(0.24) == pytest.approx(2 * 1 / 8)
        assert p.density(5.0) == 0.0

    def test_merges_duplicate_cells(self):
        p = comb_from_samples(1.0, [(0, 1.0), (0, 1.0)])
        assert p.weights == ((0, 1.0),)

    def test_support(self):
        p = comb_from_samples(1.0, [(-1, 1.0), (2, 1.0)])
        assert p.support == (-1.5, 2.5)

    def test_validation(self):
        with pytest.raises(ValueError):
            CombPrior(1.0, ((0, 0.5),))
        with pytest.raises(ValueError):
            comb_from_samples(1.0, [(0, -1.0), (1, 2.0)])
        with pytest.raises(ValueError):
            comb_from_samples(1.0, [(0, 0.0)])

    def test_array_density_shape(self):
        p = comb_from_samples(1.0, [(0, 1.0)])
        assert p.density(np.zeros((3, 2))).shape == (3, 2)


class TestKaiserNormalization:
    @pytest.mark.parametrize("alpha", [2.0, 3.0, 4.5, 6.0])
    def test_ratio_to_asymptote(self, alpha):
        r = kaiser_normalization(alpha) / kaiser_normalization_asymptote(alpha)
        assert 0.9 < r < 1.0

    @pytest.mark.parametrize("alpha", [3.0, 4.0, 6.0])
    def test_series_agrees(self, alpha):
        assert kaiser_normalization(alpha) / kaiser_normalization_series(alpha) == pytest.approx(1.0, abs=1e-4)

    def test_series_terms_shrink(self):
        t = kaiser_series_terms(3.0)
        assert t.shape == (6,)
        assert np.all(np.diff(t) < 0)

    def test_series_domain(self):
        with pytest.raises(ValueError):
            kaiser_normalization_series(0.5)

    def test_independent_of_bandwidth(self):
        base = log_kaiser_normalization(2.5)
        for L in (0.3, 7.0, 1e3):
            assert log_kaiser_normalization(2.5, L=L) == pytest.approx(base, rel=1e-10)

    def test_log_space_for_large_alpha(self):
        # N_alpha ~ exp(-4 pi alpha) underflows far before log N_alpha is in trouble
        lg = log_kaiser_normalization(60.0)
        assert math.isfinite(lg)
        assert lg == pytest.approx(math.log(kaiser_normalization_series(60.0)), rel=1e-6)

    def test_bessel_form_is_finite(self):
        assert kaiser_normalization_bessel(3.0) > 0

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            kaiser_normalization(0.0)


class TestKaiserDensity:
    def test_requires_normalization(self):
        with pytest.raises(ValueError):
            kaiser_density(KaiserPrior(2.0, 8.0), 0.0)

    def test_peak_is_finite_for_large_alpha(self):
        p = KaiserPrior.create(20.0, 10.0)
        assert np.isfinite(p.density(0.0)) and p.density(0.0) > 0

    def test_even(self, kaiser):
        phi = np.linspace(0, 5, 41)
        assert np.allclose(kaiser.density(phi), kaiser.density(-phi), rtol=0, atol=0)

    def test_nonnegative_random(self, kaiser, rng):
        phi = rng.uniform(-50 * kaiser.core_halfwidth, 50 * kaiser.core_halfwidth, 10_000)
        assert np.all(kaiser.density(phi) >= 0)

    @pytest.mark.parametrize("alpha", [1.0, 1.5])
    def test_continuity_at_core_edge(self, alpha):
        p = KaiserPrior.create(alpha, 8.0)
        c = p.core_halfwidth
        inner, outer = p.density(c * (1 - 1e-8)), p.density(c * (1 + 1e-8))
        assert abs(inner - outer) < 1e-6 * max(inner, outer)

    @pytest.mark.parametrize("alpha", [2.0, 6.0, 20.0])
    def test_jump_across_edge_is_the_slope(self, alpha):
        # relative change over (1 +- s) c is (8/3) pi^2 alpha^2 s to first order
        p = KaiserPrior.create(alpha, 8.0)
        c, s = p.core_halfwidth, 1e-8
        inner, outer = p.density(c * (1 - s)), p.density(c * (1 + s))
        assert (inner - outer) / outer == pytest.approx(8 / 3 * math.pi**2 * alpha**2 * s, rel=1e-3)

    def test_edge_value(self, kaiser):
        # both branches reach N L at the core edge
        assert kaiser.density(kaiser.core_halfwidth) == pytest.approx(kaiser.normalization * kaiser.L, rel=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(0.1, 20.0), st.floats(-2.0, 2.0))
    def test_scale_covariance(self, c, phi):
        base = KaiserPrior.create(2.0, 8.0)
        scaled = KaiserPrior(2.0, 8.0 * c, base.log_norm)
        assert scaled.density(phi / c) == pytest.approx(c * base.density(phi), rel=1e-12, abs=1e-300)

    def test_total_mass(self, kaiser):
        assert kaiser_total_mass(kaiser) == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("alpha,L", [(1.0, 1.0), (3.0, 40.0), (5.0, 2.0)])
    def test_total_mass_more(self, alpha, L):
        assert kaiser_total_mass(KaiserPrior.create(alpha, L)) == pytest.approx(1.0, abs=1e-6)

    def test_tail_mass_below_bound(self, kaiser):
        tail = kaiser_tail_mass(kaiser)
        assert 0 < tail <= kaiser_tail_mass_bound(kaiser.alpha)

    def test_survival_monotone(self, kaiser):
        c = kaiser.core_halfwidth
        vals = [kaiser_survival(kaiser, c * x) for x in (1.0, 2.0, 10.0, 60.0)]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        with pytest.raises(ValueError):
            kaiser_survival(kaiser, 0.5 * c)


class TestKaiserTransform:
    def test_zero_frequency_is_mass(self, kaiser):
        assert kaiser_transform(kaiser, 0.0) == pytest.approx(1.0, abs=1e-8)

    def test_vanishes_outside_band(self):
        p = KaiserPrior.create(2.0, 8.0)
        assert bandwidth_excess(p, 1e-10) < 1e-8

    def test_nonzero_inside_band(self, kaiser):
        vals = kaiser_transform(kaiser, np.array([0.5, 1.0, 2.0]))
        assert np.all(vals > 1e-6)

    def test_grid_must_be_outside(self, kaiser):
        with pytest.raises(ValueError):
            bandwidth_excess(kaiser, nus=[1.0])


class TestSmeared:
    def test_constructor_guard(self):
        with pytest.raises(ValueError, match="core width nonpositive"):
            SmearedRectPrior.create(2.0, 8.0, 1.0)

    def test_flat_in_the_middle(self, smeared):
        assert smeared_density(smeared, 0.0) == pytest.approx(1 / (2 * smeared.inner_halfwidth), rel=1e-6)

    def test_nonnegative_and_even(self, smeared, rng):
        phi = rng.uniform(-1.5, 1.5, 200)
        d = smeared.density(phi)
        assert np.all(d >= 0)
        assert np.allclose(d, smeared.density(-phi), rtol=1e-9, atol=1e-14)

    def test_integrates_to_one(self, smeared):
        spec = QuadratureSpec(abs_tol=1e-9, rel_tol=1e-9)
        c = smeared.kaiser.core_halfwidth
        h = smeared.inner_halfwidth
        total = integrate_adaptive(
            lambda x: smeared.density(x), -h - 6 * c, h + 6 * c, spec, points=[-h - c, -h + c, h - c, h + c]
        )
        # everything beyond 6 core widths is below the outside-mass figure
        assert total == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("alpha,L,delta", [(2.0, 64.0, 1.0), (2.0, 32.0, 2.0), (3.0, 100.0, 0.5)])
    def test_outside_mass_below_tail_bound(self, alpha, L, delta):
        p = SmearedRectPrior.create(alpha, L, delta)
        out = smeared_outside_mass(p)
        assert 0 < out <= kaiser_tail_mass_bound(alpha)


class TestJson:
    @pytest.mark.parametrize(
        "prior",
        [
            RectPrior(0.4, 0.1),
            comb_from_samples(0.5, [(0, 1.0), (2, 1.0)]),
        ],
    )
    def test_roundtrip_simple(self, prior):
        back = prior_from_json(json.loads(json.dumps(prior.to_json())))
        assert back == prior

    def test_roundtrip_kaiser(self, kaiser):
        back = prior_from_json(json.loads(json.dumps(kaiser.to_json())))
        assert back.density(0.1) == pytest.approx(kaiser.density(0.1), rel=1e-14)

    def test_roundtrip_smeared(self, smeared):
        back = prior_from_json(smeared.to_json())
        assert back.delta == smeared.delta and back.L == smeared.L

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            prior_from_json({"kind": "gauss"})
