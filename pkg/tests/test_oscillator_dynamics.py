import cmath
import math

import numpy as np
import pytest

from sqbath.bath_kernels import BathSpec
from sqbath.errors import ConfigurationError, DomainError, UnsupportedRegimeError
from sqbath.gaussian_state import CovarianceState, SqueezeParam
from sqbath.oscillator_dynamics import (
    OscillatorSpec,
    QuadratureConfig,
    chi_hadamard,
    covariance_evolution,
    covariance_integral_parts,
    d2_fourier,
    f_aux,
    fdot_aux,
    fundamental_solutions,
    g_aux,
    massive_roots,
    ns_st_split,
)
from sqbath.quadrature import omega_coth_half_beta, plain_quad

GROUND = CovarianceState(xx=0.5, pp=0.5, xp=0.0)


def stationary_xx_oracle(spec, beta, cutoff):
    """Late-time <chi^2>: (8 pi gamma / m) int dmu 2 |d2~|^2, eta = 0."""

    def kern(w):
        return (
            omega_coth_half_beta(w, beta)
            / (8 * math.pi**2)
            * 2.0
            * np.abs(d2_fourier(spec, w)) ** 2
        )

    val, _ = plain_quad(kern, 0.0, cutoff, rel_tol=1e-11, abs_tol=1e-14)
    return 8.0 * math.pi * spec.gamma / spec.m * val


class TestFundamentalSolutions:
    def test_initial_conditions(self, spec):
        assert fundamental_solutions(spec, 0.0) == (1.0, 0.0, 0.0, 1.0)

    def test_sine_zero(self):
        spec = OscillatorSpec.from_resonance(1.0, 1.0, 0.1)
        d1, d2, _, _ = fundamental_solutions(spec, math.pi)
        assert abs(d2) < 1e-15
        assert abs(d1 - (-math.exp(-0.1 * math.pi))) < 1e-14

    def test_wronskian_abel_identity(self):
        spec = OscillatorSpec.from_resonance(1.0, 1.3, 0.2)
        for t in (0.0, 0.5, 3.0, 20.0):
            d1, d2, d1d, d2d = fundamental_solutions(spec, t)
            assert abs(d1 * d2d - d1d * d2 - math.exp(-2 * 0.2 * t)) < 1e-10
        d1, _, _, _ = fundamental_solutions(spec, 3.0)
        w3 = fundamental_solutions(spec, 3.0)
        assert abs(w3[0] * w3[3] - w3[2] * w3[1] - 0.3011942119122021) < 1e-12

    def test_overdamped_rejected(self):
        with pytest.raises(UnsupportedRegimeError):
            OscillatorSpec(m=1.0, omega_r=0.5, gamma=0.6)

    def test_negative_time_rejected(self, spec):
        with pytest.raises(DomainError):
            fundamental_solutions(spec, -0.1)


class TestMassiveRoots:
    def test_massless_limit(self):
        r = massive_roots(0.1, 1.0, 0.0)
        assert r.upsilon == 0.1
        assert r.varpi == 1.0

    def test_small_mass_expansion(self):
        # exact root against the O(m_f^2) expansion: the decay rate comes
        # DOWN toward the threshold, Upsilon = g[1 - m^2/(2(W^2+g^2))]
        g, om = 0.1, 1.0
        for mf in (0.02, 0.05, 0.1):
            r = massive_roots(g, om, mf)
            ups = g * (1.0 - mf**2 / (2 * (om**2 + g**2)))
            varpi = om - g**2 * mf**2 / (2 * om * (om**2 + g**2))
            assert abs(r.upsilon - ups) < 2.0 * g * mf**4
            assert abs(r.varpi - varpi) < 2.0 * g * mf**4

    def test_root_solves_characteristic_equation(self):
        g, om, mf = 0.2, 1.1, 0.3
        r = massive_roots(g, om, mf)
        z = r.root
        residual = z * z + (om**2 + g**2) - 2 * g * cmath.sqrt(z * z + mf * mf)
        assert abs(residual) < 1e-12

    def test_conjugate_branches(self):
        up = massive_roots(0.1, 1.0, 0.05, branch=+1)
        dn = massive_roots(0.1, 1.0, 0.05, branch=-1)
        assert abs(up.root - dn.root.conjugate()) < 1e-14
        assert up.upsilon == dn.upsilon and up.varpi == dn.varpi

    def test_large_mass_rejected(self):
        with pytest.raises(UnsupportedRegimeError):
            massive_roots(0.1, 1.0, 1.0)

    def test_massive_pair_wronskian(self):
        # the memory-dressed local pair obeys the Abel identity with the
        # dressed decay rate: d1 d2' - d1' d2 = e^{-2 Upsilon t}
        from sqbath.oscillator_dynamics import _fundamental, _Response

        roots = massive_roots(0.1, 1.0, 0.3)
        resp = _Response(roots.upsilon, roots.varpi)
        for t in (0.0, 0.7, 5.0, 25.0):
            d1, d2, d1d, d2d = _fundamental(resp, t)
            expected = math.exp(-2.0 * roots.upsilon * t)
            assert abs(d1 * d2d - d1d * d2 - expected) < 1e-10


class TestAuxiliaryFunctions:
    def test_f_vanishes_at_zero_time(self, spec):
        for w in (0.1, 1.0, 7.3):
            assert abs(f_aux(spec, 0.0, w)) < 1e-15

    def test_late_time_modulus(self, spec):
        w = 0.7
        t = 200.0
        assert abs(abs(f_aux(spec, t, w)) - abs(d2_fourier(spec, w))) < 1e-8

    def test_brute_force_convolution(self, spec):
        # (gamma, Omega, omega, t) = (0.1, 1, 0.7, 5)
        t, w = 5.0, 0.7
        s = np.linspace(0.0, t, 200_001)
        _, d2, _, _ = fundamental_solutions(spec, t - s)
        oracle = np.trapezoid(d2 * np.exp(-1j * w * s), s)
        assert abs(f_aux(spec, t, w) - oracle) < 1e-8

    def test_fdot_identity_and_finite_difference(self, spec):
        t = 5.0
        for w in (0.4, 0.7, 2.0):
            lhs = fdot_aux(spec, t, w)
            rhs = -1j * w * d2_fourier(spec, w) * cmath.exp(-1j * w * t) * g_aux(
                spec, t, w
            )
            assert abs(lhs - rhs) < 1e-14
            h = 1e-5
            fd = (f_aux(spec, t + h, w) - f_aux(spec, t - h, w)) / (2 * h)
            assert abs(fd - lhs) < 1e-6

    def test_g_zero_frequency_flagged(self, spec):
        with pytest.raises(DomainError):
            g_aux(spec, 1.0, 0.0)
        # the product w*g is finite there: fdot handles it
        assert abs(fdot_aux(spec, 1.0, 0.0) + fundamental_solutions(spec, 1.0)[2] * d2_fourier(spec, 0.0)) < 1e-14


class TestD2Fourier:
    def test_static_and_resonant_values(self, spec):
        assert d2_fourier(spec, 0.0) == pytest.approx(1.0 / spec.omega_r**2)
        at_res = d2_fourier(spec, spec.omega_r)
        assert abs(at_res - 1j / (2 * spec.gamma * spec.omega_r)) < 1e-14

    def test_dissipation_identity_pointwise(self, spec):
        w = np.linspace(-30.0, 30.0, 4001)
        d = d2_fourier(spec, w)
        lhs = 2.0 * spec.gamma * w * np.abs(d) ** 2
        assert np.max(np.abs(lhs - d.imag)) < 1e-14

    def test_discrete_transform_oracle(self, spec):
        t = np.linspace(0.0, 400.0, 2**18 + 1)
        _, d2, _, _ = fundamental_solutions(spec, t)
        val = np.trapezoid(d2 * np.exp(1j * 0.5 * t), t)
        assert abs(val - d2_fourier(spec, 0.5)) < 1e-4


class TestCovarianceEvolution:
    def test_time_zero_returns_init(self, spec, quad, bath_squeezed):
        init = CovarianceState(xx=2.0, pp=1.0, xp=0.0)
        out = covariance_evolution(spec, bath_squeezed, init, 0.0, quad)
        assert out == init

    def test_unregulated_pp_rejected(self, spec, bath_thermal):
        with pytest.raises(ConfigurationError):
            covariance_evolution(spec, bath_thermal, GROUND, 1.0, QuadratureConfig())

    def test_late_time_thermal_against_stationary_oracle(self, spec, quad, bath_thermal):
        t = 30.0 / spec.gamma
        cov = covariance_evolution(spec, bath_thermal, GROUND, t, quad)
        oracle = stationary_xx_oracle(spec, bath_thermal.beta, quad.cutoff)
        assert abs(cov.xx / oracle - 1.0) < 1e-3

    def test_cosh_boost(self, spec, quad, bath_thermal, bath_squeezed):
        t = 30.0 / spec.gamma
        xx0 = covariance_evolution(spec, bath_thermal, GROUND, t, quad).xx
        xx1 = covariance_evolution(spec, bath_squeezed, GROUND, t, quad).xx
        assert abs(xx1 / xx0 / math.cosh(2.0) - 1.0) < 1e-3

    def test_theta_independence_late(self, spec, quad):
        t = 30.0 / spec.gamma
        covs = [
            covariance_evolution(
                spec,
                BathSpec(beta=0.3, squeeze=SqueezeParam(1.0, theta)),
                GROUND,
                t,
                quad,
            )
            for theta in (0.0, 2.0)
        ]
        assert abs(covs[0].xx / covs[1].xx - 1.0) < 1e-3
        assert abs(covs[0].pp / covs[1].pp - 1.0) < 1e-3

    def test_temperature_monotonicity(self, spec, quad):
        t = 30.0 / spec.gamma
        xx = [
            covariance_evolution(spec, BathSpec(beta=b), GROUND, t, quad).xx
            for b in (10.0, 1.0, 0.3)
        ]
        assert xx[0] < xx[1] < xx[2]

    def test_uncertainty_bound_along_trajectory(self, spec, quad, bath_squeezed):
        init = CovarianceState(xx=2.0, pp=1.0, xp=0.0)
        for t in (0.5, 2.0, 5.0, 12.0, 40.0):
            cov = covariance_evolution(spec, bath_squeezed, init, t, quad)
            assert cov.uncertainty >= 0.25 - 1e-9

    def test_double_time_integral_oracle(self, spec):
        # oracle: Simpson^2 over the bath Hadamard function against the
        # fundamental-solution windows; regulated by epsilon = 0.1 so the
        # kernel is resolvable on the grid.  Checks the frequency-domain
        # route at small t.
        import mpmath as mp

        beta, eps, theta, eta = 1.0, 0.1, 0.9, 0.6
        quad = QuadratureConfig(epsilon=eps, rel_tol=1e-10, abs_tol=1e-14)
        bath = BathSpec(beta=beta, squeeze=SqueezeParam(eta, theta))
        t = 4.0
        n = 1280  # Simpson needs even interval count
        s = np.linspace(0.0, t, n + 1)

        def closed(big_t, phase=0.0):
            z = mp.mpc(eps, -float(big_t))
            val = mp.e ** (-1j * mp.mpf(phase)) * (
                1 / z**2 + 2 / mp.mpf(beta) ** 2 * mp.zeta(2, 1 + z / beta)
            )
            return float(mp.re(val)) / (8 * math.pi**2)

        diffs = s[:, None] - s[None, :]
        sums = s[:, None] + s[None, :]
        uniq_d = np.unique(np.round(diffs, 12))
        uniq_s = np.unique(np.round(sums, 12))
        stat_map = {d: 2.0 * closed(abs(d)) for d in uniq_d}
        ns_map = {v: 2.0 * closed(v, theta) for v in uniq_s}
        g_stat = np.vectorize(lambda d: stat_map[round(d, 12)])(diffs)
        g_ns = np.vectorize(lambda v: ns_map[round(v, 12)])(sums)
        g_h = math.cosh(2 * eta) * g_stat - math.sinh(2 * eta) * g_ns

        wts = np.ones(n + 1)
        wts[1:-1:2], wts[2:-1:2] = 4.0, 2.0
        wts *= (s[1] - s[0]) / 3.0
        d1, d2, d1d, d2d = fundamental_solutions(spec, t - s)
        e_sq = 8 * math.pi * spec.gamma * spec.m
        w_x = wts * d2
        w_p = wts * d2d
        xx_oracle = (e_sq / spec.m**2) * (w_x @ g_h @ w_x)
        pp_oracle = e_sq * (w_p @ g_h @ w_p)
        xp_oracle = (e_sq / spec.m) * (w_x @ g_h @ w_p)

        i_xx, i_pp, i_xp = covariance_integral_parts(spec, bath, t, quad)
        assert abs(i_xx / xx_oracle - 1.0) < 1e-4
        assert abs(i_pp / pp_oracle - 1.0) < 1e-4
        assert abs(i_xp / xp_oracle - 1.0) < 1e-4


class TestNsStSplit:
    def test_zero_time(self, spec, quad, bath_squeezed):
        i_ns, i_st = ns_st_split(spec, bath_squeezed, 0.0, quad)
        assert abs(i_ns) < 1e-10
        assert abs(i_st) < 1e-10

    def test_ratio_decays(self, spec, quad, bath_squeezed):
        i_ns, i_st = ns_st_split(spec, bath_squeezed, 15.0 / spec.gamma, quad)
        assert abs(i_ns) / i_st < 1e-2

    def test_stationary_plateau_theta_independent(self, spec, quad):
        vals = []
        for theta in (0.0, math.pi / 6, math.pi / 2):
            bath = BathSpec(beta=0.3, squeeze=SqueezeParam(1.0, theta))
            _, i_st = ns_st_split(spec, bath, 12.0 / spec.gamma, quad)
            vals.append(i_st)
        assert max(vals) - min(vals) < 1e-6 * vals[0]
        _, late = ns_st_split(
            spec, BathSpec(beta=0.3, squeeze=SqueezeParam(1.0, 0.0)), 30.0 / spec.gamma, quad
        )
        assert abs(late / vals[0] - 1.0) < 1e-4

    def test_parametric_bath_rejected(self, spec, quad, bath_parametric):
        with pytest.raises(DomainError):
            ns_st_split(spec, bath_parametric, 1.0, quad)


class TestChiHadamard:
    def test_symmetry(self, spec, quad, bath_squeezed):
        a = chi_hadamard(spec, bath_squeezed, 6.0, 3.5, quad)
        b = chi_hadamard(spec, bath_squeezed, 3.5, 6.0, quad)
        assert abs(a.stationary - b.stationary) < 1e-9
        assert abs(a.nonstationary - b.nonstationary) < 1e-9

    def test_coincident_matches_covariance_integral(self, spec, quad, bath_squeezed):
        t = 7.0
        kv = chi_hadamard(spec, bath_squeezed, t, t, quad)
        i_xx, _, _ = covariance_integral_parts(spec, bath_squeezed, t, quad)
        assert abs(kv.total / i_xx - 1.0) < 1e-8

    def test_late_time_reduces_to_boosted_thermal(self, spec, quad):
        # stationary part -> cosh 2eta * thermal correlation of t - t';
        # the nonstationary remnant dies off polynomially (~sin(theta)/t)
        # and is already down at the 1e-4 level here
        tau = 1.3
        t = 35.0 / spec.gamma
        bath = BathSpec(beta=0.3, squeeze=SqueezeParam(1.0, 0.8))
        kv = chi_hadamard(spec, bath, t + tau, t, quad)
        thermal = chi_hadamard(spec, BathSpec(beta=0.3), t + tau, t, quad)
        assert abs(kv.stationary / (math.cosh(2.0) * thermal.stationary) - 1.0) < 1e-6
        assert abs(kv.nonstationary) < 1e-3 * abs(kv.stationary)
        assert abs(kv.total / (math.cosh(2.0) * thermal.total) - 1.0) < 1e-3
