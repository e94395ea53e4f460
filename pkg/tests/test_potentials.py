"""Closed-form potential, wavefunction, and their analytic identities."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bsecsim import (
    BsecParams,
    PiecewiseSegment,
    PotentialKind,
    PotentialModel,
    eval_bsec_wavefunction,
    eval_potential,
    sample_on_grid,
    u_factor,
)
from bsecsim.potentials import bsec_wavefunction_derivative

P11 = BsecParams(1.0, 1.0)
M11 = PotentialModel.bsec(P11)

params_st = st.builds(
    BsecParams,
    e_bsec=st.floats(0.1, 20.0),
    c=st.floats(0.05, 5.0),
)


class TestParams:
    def test_k_is_sqrt_energy(self):
        assert BsecParams(4.0, 1.0).k == 2.0

    @pytest.mark.parametrize("e", [0.0, -1.0, float("nan"), float("inf")])
    def test_bad_energy_rejected(self, e):
        with pytest.raises(ValueError):
            BsecParams(e, 1.0)

    def test_zero_c_rejected(self):
        with pytest.raises(ValueError, match="free"):
            BsecParams(1.0, 0.0)

    def test_negative_c_normalized(self):
        assert BsecParams(1.0, -2.0).c == 2.0


class TestModelConstruction:
    def test_segment_in_positive_region_rejected(self):
        with pytest.raises(ValueError):
            PiecewiseSegment(-1.0, 0.5, 1.0)

    def test_segment_reversed_rejected(self):
        with pytest.raises(ValueError):
            PiecewiseSegment(-1.0, -2.0, 1.0)

    def test_overlapping_segments_rejected(self):
        segs = [PiecewiseSegment(-4.0, -2.0, 1.0), PiecewiseSegment(-3.0, -1.0, 0.5)]
        with pytest.raises(ValueError, match="overlap"):
            PotentialModel.composite(P11, segs)

    def test_touching_segments_allowed(self):
        segs = [PiecewiseSegment(-4.0, -2.0, 1.0), PiecewiseSegment(-2.0, -1.0, 0.5)]
        model = PotentialModel.composite(P11, segs)
        assert model.left_edge == -4.0

    def test_free_takes_no_params(self):
        with pytest.raises(ValueError):
            PotentialModel(PotentialKind.FREE, P11)


class TestUFactor:
    def test_at_origin(self):
        assert u_factor(0.0, P11) == 1.0

    def test_at_quarter_period(self):
        assert u_factor(np.pi / 2.0, P11) == pytest.approx(1.0 + np.pi / 4.0, abs=1e-14)

    def test_at_half_period(self):
        assert u_factor(np.pi, P11) == pytest.approx(1.0 + np.pi / 2.0, abs=1e-14)

    def test_negative_position_rejected(self):
        with pytest.raises(ValueError):
            u_factor(-0.5, P11)


class TestPotential:
    def test_zero_on_negative_axis(self):
        assert eval_potential(-5.0, M11) == 0.0

    def test_zero_at_wavefunction_knot(self):
        assert abs(eval_potential(np.pi, M11)) < 1e-12

    def test_quarter_period_value(self):
        expected = 2.0 / (1.0 + np.pi / 4.0) ** 2
        assert eval_potential(np.pi / 2.0, M11) == pytest.approx(expected, rel=1e-12)

    def test_free_model_is_zero(self):
        x = np.linspace(-10.0, 10.0, 101)
        assert np.all(eval_potential(x, PotentialModel.free()) == 0.0)

    def test_composite_segment_sum(self):
        segs = [PiecewiseSegment(-4.0, -2.0, 0.5), PiecewiseSegment(-2.0, -1.0, -0.25)]
        model = PotentialModel.composite(P11, segs)
        assert eval_potential(-3.0, model) == 0.5
        assert eval_potential(-1.5, model) == -0.25
        assert eval_potential(-2.0, model) == -0.25  # shared endpoint counted once
        assert eval_potential(-5.0, model) == 0.0
        assert eval_potential(1.0, model) == eval_potential(1.0, M11)

    def test_knot_coincidence(self):
        # wavefunction nodes and potential zeros coincide at n*pi/k
        for p in (P11, BsecParams(10.0, 1.0), BsecParams(2.7, 1.3)):
            model = PotentialModel.bsec(p)
            nodes = np.arange(1, 21) * np.pi / p.k
            assert np.all(np.abs(eval_potential(nodes, model)) < 1e-12)
            assert np.all(np.abs(eval_bsec_wavefunction(nodes, p)) < 1e-12)

    def test_matches_numerically_differentiated_form(self):
        # V agrees with -2 d/dx (u'/u) by central differences, second order
        from bsecsim.potentials import _u_terms

        def log_deriv(x, h):
            up_p, u_p = _u_terms(x + h, P11)[1], _u_terms(x + h, P11)[0]
            up_m, u_m = _u_terms(x - h, P11)[1], _u_terms(x - h, P11)[0]
            return -2.0 * (up_p / u_p - up_m / u_m) / (2.0 * h)

        x = np.linspace(0.3, 20.0, 197)
        v = eval_potential(x, M11)
        err_h = np.max(np.abs(log_deriv(x, 1e-3) - v))
        err_h2 = np.max(np.abs(log_deriv(x, 5e-4) - v))
        assert err_h < 1e-5
        assert err_h / err_h2 > 3.0


class TestWavefunction:
    def test_node_at_origin(self):
        assert eval_bsec_wavefunction(0.0, P11) == 0.0

    def test_quarter_period_value(self):
        assert eval_bsec_wavefunction(np.pi / 2.0, P11) == pytest.approx(
            1.0 / (1.0 + np.pi / 4.0), rel=1e-12
        )

    def test_free_sine_branch(self):
        assert eval_bsec_wavefunction(-np.pi / 2.0, P11) == pytest.approx(-1.0, rel=1e-12)

    def test_branches_match_at_origin(self):
        # value and first derivative continuous across x = 0
        h = 1e-6
        for p in (P11, BsecParams(7.0, 0.6)):
            left = eval_bsec_wavefunction(-h, p)
            right = eval_bsec_wavefunction(h, p)
            assert abs(left + right) < 1e-10  # odd-looking near 0: psi ~ c*x
            d_left = (eval_bsec_wavefunction(0.0, p) - left) / h
            d_right = (right - eval_bsec_wavefunction(0.0, p)) / h
            assert d_left == pytest.approx(d_right, abs=1e-5)

    def test_exact_derivative_helper(self):
        x = np.linspace(-5.0, 30.0, 301)
        h = 1e-6
        fd = (eval_bsec_wavefunction(x + h, P11) - eval_bsec_wavefunction(x - h, P11)) / (2 * h)
        assert np.max(np.abs(fd - bsec_wavefunction_derivative(x, P11))) < 1e-8


class TestSampling:
    def test_inclusive_endpoints(self):
        x, v = sample_on_grid(lambda xx: eval_potential(xx, M11), -5.0, 30.0, 701)
        assert len(x) == len(v) == 701
        assert x[0] == -5.0 and x[-1] == 30.0
        assert np.all(v[x < 0.0] == 0.0)

    def test_empty_range_rejected(self):
        with pytest.raises(ValueError):
            sample_on_grid(lambda xx: eval_bsec_wavefunction(xx, P11), 0.0, 0.0, 10)

    def test_too_few_points_rejected(self):
        with pytest.raises(ValueError):
            sample_on_grid(lambda xx: xx, 0.0, 1.0, 1)

    def test_free_model_samples_zero(self):
        _, v = sample_on_grid(lambda xx: eval_potential(xx, PotentialModel.free()), -3.0, 3.0, 11)
        assert np.all(v == 0.0)


class TestAnalyticProperties:
    @settings(max_examples=25, deadline=None)
    @given(params_st)
    def test_denominator_monotone_and_bounded(self, p):
        x = np.linspace(0.0, 60.0 / p.k, 4001)
        u = u_factor(x, p)
        assert np.all(u >= 1.0 - 1e-14)
        assert np.all(np.diff(u) >= -1e-12 * np.max(u))

    @settings(max_examples=25, deadline=None)
    @given(params_st)
    def test_slope_at_origin_equals_c(self, p):
        h = 1e-4 / p.k
        slope = (eval_bsec_wavefunction(h, p) - eval_bsec_wavefunction(-h, p)) / (2.0 * h)
        assert slope == pytest.approx(p.c, rel=1e-6, abs=1e-9)

    @settings(max_examples=15, deadline=None)
    @given(params_st)
    def test_schrodinger_residual_second_order(self, p):
        model = PotentialModel.bsec(p)

        def residual(h):
            x = np.arange(-400, 2400) * h  # spans both sides of the origin
            psi = eval_bsec_wavefunction(x, p)
            lap = (psi[2:] - 2.0 * psi[1:-1] + psi[:-2]) / (h * h)
            v = eval_potential(x[1:-1], model)
            return np.max(np.abs(-lap + v * psi[1:-1] - p.e_bsec * psi[1:-1]))

        h = 0.02 / p.k
        r1, r2 = residual(h), residual(h / 2.0)
        assert r1 < 0.05 * p.e_bsec * p.c
        assert r1 / r2 > 3.0

    def test_normalization_identity(self):
        # trapezoid integral of psi^2 equals the closed form 1 - 1/u(X)
        for X in (10.0, 100.0, 1000.0):
            x = np.linspace(0.0, X, int(X / 0.002) + 1)
            integral = np.trapezoid(eval_bsec_wavefunction(x, P11) ** 2, x)
            assert abs(integral - (1.0 - 1.0 / u_factor(X, P11))) < 1e-7

    @settings(max_examples=20, deadline=None)
    @given(params_st)
    def test_asymptotic_decay_bounds(self, p):
        k, c = p.k, p.c
        model = PotentialModel.bsec(p)
        x_lo = 50.0 * max(1.0, 2.0 * k * k / (c * c), 1.0 / k)
        x = np.linspace(x_lo, 40.0 * x_lo, 2001)
        assert np.all(np.abs(eval_potential(x, model)) * x <= 4.0 * k + 4.0 / x)
        assert np.all(np.abs(eval_bsec_wavefunction(x, p)) * x <= 3.0 * k / c)
