"""Coefficient construction, the discriminant surface, and momentum branches."""

import numpy as np
import pytest
from pytest import approx

from tuberupture.invariant import (
    CubicPoly,
    InvariantModel,
    coefficients,
    disc_cubic_coeffs,
    disc_value,
    exponential_source,
    invariant_value,
    numeric_source,
    p_branches,
    reference_constant,
    taylor_source,
)
from tuberupture.odekit import integrate_y
from tuberupture.perturbation import Params, PositivityError, YState, y_exponential

RNG = np.random.default_rng(777)

K_DEFAULT = 7.0 / 96.0  # z0^2 + (2/3) z0^3 at z0 = 1/4, y0 = 1


class TestCoefficients:
    def test_initial_values(self, params):
        c = coefficients(y_exponential(0.0, params), params)
        assert c.a1 == approx(0.0, abs=1e-16)
        assert c.a2 == approx(0.04)
        assert c.a3 == approx(1.0)
        assert c.a4 == approx(0.0, abs=1e-16)
        assert c.a5 == approx(1.0)
        assert c.a6 == approx(2.0 / 3.0)

    def test_quarter_period_driver_terms(self, params):
        c = coefficients(y_exponential(np.pi / 2, params), params)
        assert c.a1 == approx(params.epsilon / 2)
        assert c.a2 == approx(0.0, abs=1e-16)

    def test_unforced_coefficients_constant(self):
        p = Params(epsilon=0.0, y0=2.0)
        ts = np.linspace(0, 40, 100)
        c = coefficients(y_exponential(ts, p), p)
        assert np.all(c.a1 == 0.0)
        assert np.all(c.a2 == 0.0)
        assert np.all(c.a3 == 2.0)
        assert np.all(c.a4 == 0.0)
        assert np.all(c.a5 == 2.0)
        assert np.allclose(c.a6, (2 / 3) * 2.0 ** -1.5, rtol=1e-15)

    def test_rejects_nonpositive_y(self, params):
        bad = YState(t=0.0, y=0.0, dy=0.0, d2y=0.0, d3y=0.0)
        with pytest.raises(PositivityError):
            coefficients(bad, params)

    @pytest.mark.parametrize("source_name", ["exp", "numeric"])
    def test_structural_identities_by_finite_differences(self, params, source_name):
        # a1 = -a2', a4 = -a5', a3 = a5 + a5''/2
        if source_name == "exp":
            source = exponential_source(params)
        else:
            tr = integrate_y(params, 10 * np.pi, 1e-13, 1e-13, method="dop853")
            source = numeric_source(tr, params)
        h = 0.01
        ts = np.arange(0.1, 10 * np.pi - 0.1, 0.037)
        ts = ts[(ts > 2 * h) & (ts < 10 * np.pi - 2 * h)]
        stencil = np.array([-2, -1, 0, 1, 2]) * h
        vals = [coefficients(source(ts + dt), params) for dt in stencil]
        d1 = lambda f: (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h)  # noqa: E731
        d2 = lambda f: (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)  # noqa: E731

        a2_prime = d1([np.asarray(v.a2) for v in vals])
        a5_prime = d1([np.asarray(v.a5) for v in vals])
        a5_second = d2([np.asarray(v.a5) for v in vals])
        mid = vals[2]
        assert np.max(np.abs(np.asarray(mid.a1) + a2_prime)) < 1e-7
        assert np.max(np.abs(np.asarray(mid.a4) + a5_prime)) < 1e-7
        assert np.max(np.abs(np.asarray(mid.a3) - (np.asarray(mid.a5) + a5_second / 2))) < 1e-7


class TestReferenceConstant:
    def test_standard_value(self, params):
        assert reference_constant(params) == approx(K_DEFAULT, rel=1e-15)

    def test_zero_amplitude(self):
        assert reference_constant(Params(z0=0.0)) == 0.0

    def test_independent_of_epsilon(self):
        # A1(0) = 0 and y(0) = y0 regardless of the driver strength
        assert reference_constant(Params(epsilon=0.0)) == approx(K_DEFAULT, rel=1e-15)

    def test_same_for_all_sources(self, params):
        tr = integrate_y(params, 1.0, 1e-12, 1e-12)
        for src in (exponential_source(params), taylor_source(params),
                    numeric_source(tr, params)):
            assert reference_constant(params, src) == approx(K_DEFAULT, rel=1e-12)


class TestInvariantValue:
    def test_zero_at_initial_point(self, exp_model, params):
        c0 = exp_model.coefficients_at(0.0)
        assert invariant_value(params.z0, 0.0, c0, exp_model.K) == approx(0.0, abs=1e-18)

    def test_origin_gives_minus_K(self, exp_model):
        c = exp_model.coefficients_at(13.7)
        assert invariant_value(0.0, 0.0, c, exp_model.K) == -exp_model.K

    def test_conserved_along_coupled_trajectory(self, exp_model, params,
                                                coupled_trajectory_20pi):
        from tuberupture.odekit import sample

        tr = coupled_trajectory_20pi
        ts = np.linspace(0, tr.t_end, 2001)
        states = sample(tr, ts)
        model = InvariantModel.numeric(params, tr)
        residual = model.invariant_at(states[:, 3], states[:, 4], ts)
        assert np.max(np.abs(residual)) <= 1e-6 * abs(model.K)


class TestDiscValue:
    def test_initial_point_value(self, exp_model, params):
        # the A5 bracket vanishes at (z0, 0) by the definition of K
        c0 = exp_model.coefficients_at(0.0)
        assert disc_value(params.z0, c0, exp_model.K) == approx(0.0016, rel=1e-12)

    def test_matches_horner_of_cubic(self, exp_model):
        ts = RNG.uniform(0, 400 * np.pi, 1000)
        zs = RNG.uniform(-2, 2, 1000)
        c = exp_model.coefficients_at(ts)
        direct = disc_value(zs, c, exp_model.K)
        horner = disc_cubic_coeffs(c, exp_model.K)(zs)
        # relative to the term magnitude: near the zeros of Disc both routes
        # cancel, so the quotient with the tiny result itself is meaningless
        scale = (c.a2 + c.a4 * zs) ** 2 + 4 * np.abs(c.a5) * (
            np.abs(c.a6 * zs ** 3) + np.abs(c.a3 * zs ** 2)
            + np.abs(c.a1 * zs) + abs(exp_model.K))
        assert np.max(np.abs(direct - horner) / scale) < 1e-12

    def test_autonomous_value_at_minus_one(self):
        p = Params(epsilon=0.0)
        model = InvariantModel.exponential(p)
        c = model.coefficients_at(8.23)
        # -4 (1/3 - K) = -25/24 for K = 7/96
        assert disc_value(-1.0, c, model.K) == approx(-25.0 / 24.0, rel=1e-14)


class TestDiscCubicCoeffs:
    def test_autonomous_coefficients(self):
        model = InvariantModel.exponential(Params(epsilon=0.0))
        P = model.disc_cubic_at(5.5)
        assert P.a == approx(-8.0 / 3.0, rel=1e-15)
        assert P.b == approx(-4.0, rel=1e-15)
        assert P.c == approx(0.0, abs=1e-16)
        assert P.d == approx(4 * K_DEFAULT, rel=1e-15)

    def test_driven_coefficients_at_origin(self, exp_model):
        P = exp_model.disc_cubic_at(0.0)
        assert P.a == approx(-8.0 / 3.0, rel=1e-14)
        assert P.b == approx(-4.0, rel=1e-14)
        assert P.c == approx(0.0, abs=1e-16)
        assert P.d == approx(0.04 ** 2 + 4 * K_DEFAULT, rel=1e-14)

    def test_leading_coefficient_negative_on_scan_grid(self, exp_model):
        ts = np.arange(0, 400 * np.pi, np.pi / 50)
        P = exp_model.disc_cubic_at(ts)
        assert np.all(P.a < 0)


class TestPBranches:
    def test_initial_point_on_surface(self, exp_model, params):
        c0 = exp_model.coefficients_at(0.0)
        branches = p_branches(params.z0, c0, exp_model.K)
        assert len(branches) == 2
        assert min(abs(b) for b in branches) == approx(0.0, abs=1e-15)

    def test_empty_outside_surface(self, exp_model):
        c = exp_model.coefficients_at(0.0)
        assert disc_value(1.5, c, exp_model.K) < 0
        assert p_branches(1.5, c, exp_model.K) == ()

    def test_branches_satisfy_invariant(self, exp_model):
        residual_max = 0.0
        for _ in range(300):
            t = RNG.uniform(0, 100 * np.pi)
            z = RNG.uniform(-1.5, 1.0)
            c = exp_model.coefficients_at(t)
            for p in p_branches(z, c, exp_model.K):
                residual = invariant_value(z, p, c, exp_model.K)
                residual_max = max(residual_max, abs(residual))
        assert residual_max <= 1e-10

    def test_branches_coincide_at_disc_root(self, exp_model, params):
        # locate z* with Disc(z*, 0) = 0 by bisection, in (z0, 1]; at the
        # last representable z inside the band the branch split bottoms out
        # at sqrt(slope * ulp) ~ 1e-8, hence the 2e-8 bound
        c = exp_model.coefficients_at(0.0)
        lo, hi = params.z0, 1.0
        assert disc_value(lo, c, exp_model.K) > 0 > disc_value(hi, c, exp_model.K)
        while True:
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            if disc_value(mid, c, exp_model.K) > 0:
                lo = mid
            else:
                hi = mid
        branches = p_branches(lo, c, exp_model.K)
        assert len(branches) == 2
        assert abs(branches[1] - branches[0]) < 2e-8

    def test_requires_positive_a5(self, exp_model):
        from dataclasses import replace

        c = replace(exp_model.coefficients_at(0.0), a5=-1.0)
        with pytest.raises(ValueError):
            p_branches(0.1, c, exp_model.K)


class TestCubicPoly:
    def test_horner_evaluation(self):
        P = CubicPoly(2.0, -3.0, 0.5, 1.0)
        z = 1.7
        assert P(z) == approx(2 * z ** 3 - 3 * z ** 2 + 0.5 * z + 1.0, rel=1e-15)
        assert P.deriv(z) == approx(6 * z ** 2 - 6 * z + 0.5, rel=1e-15)


class TestInvariantModel:
    def test_factories_set_name_and_K(self, params):
        m = InvariantModel.exponential(params)
        assert m.name == "exp2"
        assert m.K == approx(K_DEFAULT, rel=1e-15)
        t = InvariantModel.taylor(params)
        assert t.name == "taylor2"

    def test_sources_never_mixed(self, params):
        # taylor and exponential models disagree away from t = 0
        me = InvariantModel.exponential(params)
        mt = InvariantModel.taylor(params)
        t = 95.0
        assert me.coefficients_at(t).a3 != mt.coefficients_at(t).a3
