import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixedcat import decoherence as dc
from mixedcat import fock
from mixedcat.gaussian import polar_integrate
from mixedcat.states import MqsParams, PhasePoint, decomposition_weight, linear_entropy, mixed_norm

TWO_OVER_PI = 2 / math.pi


class TestDampDyadic:
    def test_diagonal_keeps_weight(self):
        coef, a, b = dc.damp_dyadic(1.3 - 0.2j, 1.3 - 0.2j, 0.4)
        assert coef == pytest.approx(1.0, abs=1e-15)
        assert complex(a) == pytest.approx(math.sqrt(0.4) * (1.3 - 0.2j))
        assert a == b

    def test_identity_at_kappa_one(self):
        coef, a, b = dc.damp_dyadic(2.0, -1j, 1.0)
        assert coef == 1.0
        assert (complex(a), complex(b)) == (2.0, -1j)

    @pytest.mark.parametrize("alpha, kappa", [(1.0, 0.5), (3.0, 0.9), (30.0, 0.999)])
    def test_cat_coherence(self, alpha, kappa):
        coef, _, _ = dc.damp_dyadic(alpha, -alpha, kappa)
        assert coef.real == pytest.approx(math.exp(-2 * (1 - kappa) * alpha**2), rel=1e-12)
        assert coef.imag == 0.0

    @pytest.mark.parametrize("kappa", [0.0, -0.1, 1.01])
    def test_domain(self, kappa):
        with pytest.raises(ValueError):
            dc.damp_dyadic(1.0, 1.0, kappa)

    def test_accepts_phase_points(self):
        coef, _, _ = dc.damp_dyadic(PhasePoint(1.0), PhasePoint(-1.0), 0.5)
        assert coef.real == pytest.approx(math.exp(-1.0))


class TestEvolve:
    def test_initial(self):
        e = dc.evolve(MqsParams(2.0, 3.0), 0.0)
        assert (e.kappa, e.alpha_prime, e.v_prime) == (1.0, 2.0, 3.0)

    def test_half_life(self):
        e = dc.evolve(MqsParams(2.0, 3.0), math.log(2))
        assert e.kappa == pytest.approx(0.5, rel=1e-15)
        assert e.alpha_prime == pytest.approx(2 / math.sqrt(2), rel=1e-15)
        assert e.v_prime == pytest.approx(2.0, rel=1e-15)

    def test_norm_constant(self):
        p = MqsParams(1.0, 2.0)
        expected = 2 - 2 * math.exp(-1.0) / 2
        assert dc.evolve(p, 0.0).norm_t == pytest.approx(expected, rel=1e-14)
        assert dc.evolve(p, 3.0).norm_t == dc.evolve(p, 0.0).norm_t

    @pytest.mark.parametrize("gt", [-1e-3, float("nan"), float("inf")])
    def test_bad_time(self, gt):
        with pytest.raises(ValueError):
            dc.evolve(MqsParams(1.0), gt)


class TestWignerOrigin:
    @pytest.mark.parametrize("alpha", [1, 2, 5, 10, 30, 50, 100])
    @pytest.mark.parametrize("V", [1, 3, 10, 1e3, 1e4])
    def test_initial_value(self, alpha, V):
        assert dc.wigner_origin(MqsParams(alpha, V), 0.0) == pytest.approx(-TWO_OVER_PI, abs=1e-12)

    @pytest.mark.parametrize("alpha, V", [(1.0, 1.0), (2.0, 3.0), (30.0, 1e3)])
    def test_vacuum_limit(self, alpha, V):
        assert dc.wigner_origin(MqsParams(alpha, V), 60.0) == pytest.approx(TWO_OVER_PI, abs=1e-12)

    @given(st.floats(0.2, 40.0), st.floats(0.0, 2.0))
    def test_pure_cat_dyadics(self, alpha, gt):
        assert dc.wigner_origin(MqsParams(alpha), gt) == pytest.approx(
            dc.pure_cat_wigner_origin(alpha, gt), abs=1e-12)

    def test_array_input_is_elementwise(self):
        p = MqsParams(30.0, 1e3)
        grid = dc.time_grid(1e-5, 1.0, 50)
        whole = dc.wigner_origin(p, grid)
        parts = np.array([dc.wigner_origin(p, t) for t in grid])
        assert np.array_equal(whole, parts)

    def test_large_parameters_finite(self):
        w = dc.wigner_origin(MqsParams(100.0, 1e4), dc.time_grid(1e-5, 1.0, 200))
        assert np.all(np.isfinite(w))
        assert np.all(np.abs(w) <= TWO_OVER_PI + 1e-12)

    @pytest.mark.parametrize("gt", [0.05, 0.1, 0.3, 0.7])
    def test_against_oracle(self, fock_states, gt):
        p, _, rho = fock_states[(2.0, 3.0)]
        damped = fock.amplitude_damping_channel(rho, math.exp(-gt))
        assert dc.wigner_origin(p, gt) == pytest.approx(fock.parity_wigner_origin(damped), abs=1e-8)

    def test_legacy_limits_only(self, fock_states):
        # the older form meets both end points but not the oracle in between
        p, _, rho = fock_states[(2.0, 3.0)]
        assert dc.wigner_origin_legacy(p, 0.0) == pytest.approx(-TWO_OVER_PI, abs=1e-12)
        assert dc.wigner_origin_legacy(p, 60.0) == pytest.approx(TWO_OVER_PI, abs=1e-12)
        damped = fock.amplitude_damping_channel(rho, math.exp(-0.3))
        assert abs(dc.wigner_origin_legacy(p, 0.3) - fock.parity_wigner_origin(damped)) > 1e-3


class TestWigner:
    @pytest.mark.parametrize("alpha, V, gt", [(2.0, 3.0, 0.1), (3.0, 1.0, 0.0), (30.0, 1e3, 1e-3)])
    def test_origin_consistency(self, alpha, V, gt):
        p = MqsParams(alpha, V)
        assert dc.wigner(p, gt, 0j) == pytest.approx(dc.wigner_origin(p, gt), abs=1e-12)

    @pytest.mark.parametrize("alpha, V", [(2.0, 1.0), (3.0, 5.0)])
    def test_far_field(self, alpha, V):
        assert abs(dc.wigner(MqsParams(alpha, V), 0.2, 5 * alpha)) < 1e-12

    def test_fringe_by_averaging(self):
        p = MqsParams(2.0, 3.0)
        eta = np.array([0.0, 0.3j, 0.5 + 0.7j, -1.1 + 0.2j])
        lobes_only = dc.wigner(p, 0.2, eta) - dc.wigner_fringe_by_averaging(p, 0.2, eta)
        ap, vp = dc.evolve(p, 0.2).alpha_prime, dc.evolve(p, 0.2).v_prime
        expected = mixed_norm(p) * 2 / (math.pi * vp) * (
            np.exp(-2 * np.abs(eta - ap) ** 2 / vp) + np.exp(-2 * np.abs(eta + ap) ** 2 / vp))
        assert np.allclose(lobes_only, expected, atol=1e-14)

    def test_pure_lobe_center_against_oracle(self):
        p = MqsParams(2.0)
        rho = fock.cat_fock(2.0, 60).projector()
        assert dc.wigner(p, 0.0, 2.0) == pytest.approx(fock.fock_wigner(rho, 2.0), abs=1e-8)

    @pytest.mark.parametrize("eta", [2.0 / math.sqrt(math.e), 0.4 + 0.25j, -0.8j])
    def test_evolved_against_oracle(self, fock_states, eta):
        p, _, rho = fock_states[(2.0, 3.0)]
        gt = 0.1
        damped = fock.amplitude_damping_channel(rho, math.exp(-gt))
        assert dc.wigner(p, gt, eta) == pytest.approx(fock.fock_wigner(damped, eta), abs=1e-8)

    @pytest.mark.parametrize("alpha, V, gt", [(2.0, 3.0, 0.1), (3.0, 1.0, 0.0), (5.0, 2.0, 0.5)])
    def test_normalized(self, alpha, V, gt):
        p = MqsParams(alpha, V)
        half = alpha + 8 * math.sqrt(V)
        x = np.arange(-half, half + 1e-9, 0.05)
        w = dc.wigner(p, gt, x[:, None] + 1j * x[None, :])
        assert np.trapezoid(np.trapezoid(w, x, axis=1), x) == pytest.approx(1.0, abs=1e-6)


class TestMinScan:
    @pytest.mark.parametrize("alpha, V, gt", [(2.0, 3.0, 0.1), (3.0, 1.0, 0.05), (2.0, 5.0, 0.3)])
    def test_minimum_at_origin(self, alpha, V, gt):
        res = dc.wigner_min_scan(MqsParams(alpha, V), gt)
        assert abs(complex(res.argmin)) <= res.step + 1e-12

    def test_initial_pure(self):
        res = dc.wigner_min_scan(MqsParams(3.0), 0.0)
        assert res.min_value == pytest.approx(-TWO_OVER_PI, abs=1e-12)
        assert complex(res.argmin) == 0

    def test_fully_decohered(self):
        assert dc.wigner_min_scan(MqsParams(2.0, 3.0), 5.0).min_value >= 0

    def test_step_limit(self):
        with pytest.raises(ValueError):
            dc.wigner_min_scan(MqsParams(2.0), 0.1, step=0.1)


class TestDecayMixture:
    @pytest.mark.parametrize("alpha, V", [(1.0, 1.0), (2.0, 3.0), (30.0, 1e3), (100.0, 1e4)])
    def test_initial(self, alpha, V):
        assert dc.decay_mixture(MqsParams(alpha, V), 0.0) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("alpha", [0.5, 2.0, 30.0])
    def test_pure_limit(self, alpha):
        grid = dc.time_grid(1e-5, 1e-1, 40)
        c = dc.decay_mixture(MqsParams(alpha), grid)
        assert np.max(np.abs(c - np.exp(-2 * alpha**2 * grid))) < 1e-12

    @pytest.mark.parametrize("gt", [1e-4, 5e-4, 1e-3, 3e-3, 1e-2])
    def test_against_direct_quadrature(self, gt):
        p = MqsParams(30.0, 1e3)
        r_max = p.alpha + 14 * math.sqrt(p.spread)
        direct = polar_integrate(
            lambda b: decomposition_weight(p, b) * np.exp(-2 * np.abs(b) ** 2 * gt),
            r_max, points=[1.0, p.alpha])
        assert dc.decay_mixture(p, gt) == pytest.approx(direct, abs=1e-8)

    def test_decreasing_in_unit_interval(self):
        c = dc.decay_mixture(MqsParams(30.0, 1e3), dc.time_grid(1e-6, 1.0, 300))
        assert np.all(np.diff(c) < 0)
        assert np.all((c > 0) & (c <= 1))

    def test_single_crossing(self):
        p = MqsParams(30.0, 1e3)
        grid = dc.time_grid(1e-7, 1e-2, 4000)
        diff = dc.decay_mixture(p, grid) - dc.single_decay(p.alpha, grid)
        signs = np.sign(diff[diff != 0])
        assert signs[0] < 0 < signs[-1]
        assert np.count_nonzero(np.diff(signs)) == 1


class TestCrossover:
    def test_identical_params(self):
        with pytest.raises(dc.NoCrossoverError):
            dc.crossover_time(MqsParams(30.0), MqsParams(30.0))

    def test_bad_bracket(self):
        with pytest.raises(ValueError):
            dc.crossover_time(MqsParams(30.0), MqsParams(30.0, 1e3), bracket=(1e-2, 1e-4))

    def test_root_is_a_sign_change(self):
        pure, mixed = MqsParams(30.0), MqsParams(30.0, 1e3)
        t = dc.crossover_time(pure, mixed, tol=1e-9)
        d = lambda s: dc.wigner_origin(pure, s) - dc.wigner_origin(mixed, s)  # noqa: E731
        assert d(t - 1e-8) * d(t + 1e-8) < 0

    def test_large_alpha_exists(self):
        t = dc.crossover_time(MqsParams(100.0), MqsParams(100.0, 1e4), bracket=(1e-5, 1e-2))
        assert 1e-5 < t < 1e-2


class TestEvolvedObservables:
    @pytest.mark.parametrize("alpha, V", [(2.0, 3.0), (30.0, 1e3), (1.0, 1.0)])
    def test_purity_initial(self, alpha, V):
        p = MqsParams(alpha, V)
        assert dc.evolved_linear_entropy(p, 0.0) == pytest.approx(linear_entropy(p), abs=1e-12)

    @pytest.mark.parametrize("gt", [0.05, 0.3, 0.7])
    def test_entropy_against_oracle(self, fock_states, gt):
        p, _, rho = fock_states[(2.5, 5.0)]
        damped = fock.amplitude_damping_channel(rho, math.exp(-gt))
        assert dc.evolved_linear_entropy(p, gt) == pytest.approx(fock.fock_linear_entropy(damped), abs=1e-8)

    def test_vacuum_is_pure(self):
        assert abs(dc.evolved_linear_entropy(MqsParams(2.0, 3.0), 60.0)) < 1e-12

    def test_photon_decay(self):
        p = MqsParams(30.0, 1e3)
        assert dc.evolved_mean_photon(p, 0.5) == pytest.approx(
            math.exp(-0.5) * dc.evolved_mean_photon(p, 0.0), rel=1e-15)


class TestFirstTimeAbove:
    def test_monotone_in_alpha(self):
        times = [dc.first_time_above(MqsParams(a), -0.01) for a in (20, 30, 50)]
        assert times[0] > times[1] > times[2]

    def test_no_crossing(self):
        with pytest.raises(dc.NoCrossoverError):
            dc.first_time_above(MqsParams(2.0), -0.9)


class TestGridsAndCurves:
    def test_log_grid(self):
        g = dc.time_grid(1e-5, 1.0, 400)
        assert g.size == 400 and g[0] == 1e-5 and g[-1] == pytest.approx(1.0, rel=1e-15)

    @pytest.mark.parametrize("args", [(0.0, 1.0, 10, "log"), (1.0, 0.5, 10, "lin"),
                                      (0.0, 1.0, 1, "lin"), (0.0, 1.0, 5, "cubic")])
    def test_grid_errors(self, args):
        with pytest.raises(ValueError):
            dc.time_grid(*args)

    def test_curve_validation(self):
        p = MqsParams(2.0)
        with pytest.raises(ValueError):
            dc.Curve("W0_pure", p, [0.1, 0.1], [1.0, 2.0])
        with pytest.raises(ValueError):
            dc.Curve("W0_pure", p, [0.1, 0.2], [1.0, float("nan")])
        with pytest.raises(ValueError):
            dc.Curve("entropy", p, [0.1, 0.2], [1.0, 2.0])

    def test_w0_curve_quantity(self):
        grid = dc.time_grid(0.0, 1.0, 5, "lin")
        assert dc.w0_curve(MqsParams(30.0), grid).quantity == "W0_pure"
        curve = dc.w0_curve(MqsParams(30.0, 1e3), grid, form="legacy")
        assert curve.quantity == "W0_mixed" and curve.meta["form"] == "legacy"


@settings(max_examples=25, deadline=None)
@given(st.floats(0.5, 60.0), st.floats(1.0, 1e4), st.floats(0.0, 3.0))
def test_wigner_origin_bounded(alpha, V, gt):
    w = dc.wigner_origin(MqsParams(alpha, V), gt)
    assert -TWO_OVER_PI - 1e-12 <= w <= TWO_OVER_PI + 1e-12
