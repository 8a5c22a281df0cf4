import cmath
import json
import math

import numpy as np
import pytest

from pihl.bounds import BoundInputs, GeneratorSpectrum, bound2
from pihl.estimation import (
    CSV_COLUMNS,
    MeasurementReport,
    ProbeState,
    above_crossover,
    cost_coefficients,
    cost_matrix,
    covariant_mse,
    noon_state,
    optimal_probe,
    outcome_density,
    sample_outcome,
    scaling_sweep,
    sine_state,
    two_level_embedding,
    uniform_state,
)
from pihl.numerics import QuadratureSpec, integrate_adaptive


def random_state(rng, n):
    c = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    return ProbeState.normalized(c)


def quadrature_mse(state):
    spec = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-12)
    pts = np.linspace(-math.pi, math.pi, 4 * state.n + 3)[1:-1]
    return integrate_adaptive(lambda t: t**2 * outcome_density(state, t), -math.pi, math.pi, spec, points=pts)


class TestProbeState:
    def test_normalization_enforced(self):
        with pytest.raises(ValueError):
            ProbeState(np.array([1.0, 1.0]))
        with pytest.raises(ValueError):
            ProbeState(np.array([1.0]))

    def test_immutable(self):
        s = uniform_state(3)
        with pytest.raises(ValueError):
            s.amplitudes[0] = 0

    def test_json_roundtrip(self, rng):
        s = random_state(rng, 5)
        back = ProbeState.from_json(json.loads(json.dumps(s.to_json())))
        assert np.array_equal(back.amplitudes, s.amplitudes)
        assert s.to_json()["n"] == 5

    def test_json_length_mismatch(self):
        with pytest.raises(ValueError):
            ProbeState.from_json({"n": 3, "re": [1.0, 0.0], "im": [0.0, 0.0]})


class TestCostMatrix:
    def test_coefficients(self):
        a = cost_coefficients(3)
        assert a == pytest.approx([math.pi**2 / 3, -2.0, 0.5, -2 / 9])

    def test_dense_toeplitz(self):
        m = cost_matrix(4).dense()
        assert np.array_equal(m, m.T)
        assert m[1, 3] == m[0, 2]

    def test_coefficients_are_fourier_moments(self):
        for k in range(4):
            val = integrate_adaptive(lambda t: t**2 * np.cos(k * t), -math.pi, math.pi) / (2 * math.pi)
            assert cost_coefficients(3)[k] == pytest.approx(val, rel=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 5, 9, 16])
    def test_matches_quadrature(self, n, rng):
        s = random_state(rng, n)
        assert covariant_mse(s) == pytest.approx(quadrature_mse(s), abs=1e-8)

    def test_outcome_density_normalized(self, rng):
        s = random_state(rng, 6)
        total = integrate_adaptive(lambda t: outcome_density(s, t), -math.pi, math.pi)
        assert total == pytest.approx(1.0, abs=1e-12)


class TestSymmetries:
    @pytest.mark.parametrize("n", [1, 4, 11])
    def test_global_phase(self, n, rng):
        s = random_state(rng, n)
        for angle in rng.uniform(0, 2 * math.pi, 5):
            t = ProbeState(s.amplitudes * cmath.exp(1j * angle))
            assert covariant_mse(t) == pytest.approx(covariant_mse(s), abs=1e-14)

    @pytest.mark.parametrize("n", [1, 4, 11])
    def test_reflection(self, n, rng):
        s = random_state(rng, n)
        t = ProbeState(s.amplitudes[::-1].copy())
        assert covariant_mse(t) == pytest.approx(covariant_mse(s), abs=1e-14)


class TestOptimalProbe:
    def test_n1(self):
        _, mse = optimal_probe(1)
        assert mse == pytest.approx(math.pi**2 / 3 - 2, rel=1e-14)

    @pytest.mark.parametrize("n", [1, 3, 10, 50, 200])
    def test_positive_amplitudes(self, n):
        s, _ = optimal_probe(n)
        assert np.all(s.amplitudes.real > 0)
        assert np.all(s.amplitudes.imag == 0)

    @pytest.mark.parametrize("n", [1, 2, 5, 20, 60])
    def test_dominates_reference_states(self, n):
        s, mse = optimal_probe(n)
        assert mse == pytest.approx(covariant_mse(s), rel=1e-12)
        for other in (sine_state(n), noon_state(n), uniform_state(n)):
            assert mse <= covariant_mse(other) + 1e-14

    @pytest.mark.parametrize("n", [1, 5, 40, 200])
    def test_holevo_envelope(self, n):
        # sine-state Holevo variance 2 - 2 cos(pi/(n+2)) is a lower envelope
        _, mse = optimal_probe(n)
        assert mse >= 2 - 2 * math.cos(math.pi / (n + 2))

    def test_scaled_error_approaches_pi_from_below(self):
        ns = [10, 50, 100, 200]
        scaled = [n * math.sqrt(optimal_probe(n)[1]) for n in ns]
        assert all(b > a for a, b in zip(scaled, scaled[1:]))
        assert all(v < math.pi for v in scaled)
        assert scaled[-1] / math.pi == pytest.approx(1.0, abs=0.01)

    def test_saturation(self):
        _, mse = optimal_probe(200)
        assert abs(200**2 * mse / math.pi**2 - 1) < 0.05

    def test_sine_state_close_to_optimal(self):
        _, opt = optimal_probe(100)
        sine = covariant_mse(sine_state(100))
        assert 0 < (sine - opt) / opt < 2e-3

    def test_prior_only_ceiling(self):
        for n in (30, 100, 300):
            assert optimal_probe(n)[1] <= math.pi**2 / 3


class TestNoon:
    @pytest.mark.parametrize("n", [1, 2, 3, 10, 51])
    def test_closed_form(self, n):
        s = noon_state(n)
        expected = math.pi**2 / 3 + 2 * (-1) ** n / n**2
        assert covariant_mse(s) == pytest.approx(expected, abs=1e-12)
        assert quadrature_mse(s) == pytest.approx(expected, abs=1e-8)

    def test_never_heisenberg(self):
        for n in range(3, 200):
            assert covariant_mse(noon_state(n)) > 3.0


class TestSampling:
    def test_deterministic(self):
        s = sine_state(8)
        assert sample_outcome(s, 0.3, seed=7) == sample_outcome(s, 0.3, seed=7)
        assert np.array_equal(sample_outcome(s, 0.3, 7, 10), sample_outcome(s, 0.3, 7, 10))

    def test_range(self):
        x = sample_outcome(uniform_state(4), 1.0, seed=1, size=1000)
        assert np.all((x >= 1 - math.pi) & (x <= 1 + math.pi))

    def test_monte_carlo_matches_mse(self):
        s = sine_state(20)
        phi = 0.4
        x = sample_outcome(s, phi, seed=12345, size=100_000)
        sq = (x - phi) ** 2
        se = sq.std(ddof=1) / math.sqrt(sq.size)
        assert abs(sq.mean() - covariant_mse(s)) < 3 * se


class TestSweep:
    def test_rows(self):
        rows = scaling_sweep([1, 2, 30])
        assert rows[0].bound2_delta1 is None
        assert rows[2].bound2_delta1 == pytest.approx(bound2(BoundInputs(30.0, 1.0)))
        assert not any(r.sandwich_violation for r in rows)

    def test_csv_row(self):
        r = MeasurementReport(4, 0.25, 0.1)
        assert dict(zip(CSV_COLUMNS, r.csv_row())) == {
            "n": 4, "mse": 0.25, "rmse": 0.5, "n_rmse": 2.0, "bound2_delta1": 0.1,
        }

    def test_violation_flag(self):
        assert MeasurementReport(4, 0.25, 0.3).sandwich_violation

    def test_validation(self):
        with pytest.raises(ValueError):
            scaling_sweep([])
        with pytest.raises(ValueError):
            scaling_sweep([0, 3])

    def test_above_crossover(self):
        assert above_crossover(27) and not above_crossover(26)

    def test_two_level_embedding(self):
        assert two_level_embedding(GeneratorSpectrum(0.0, 2.0)) == 0.25
