"""
Energy exchange between detector and bath, and the oscillator FDR.

The power fed into the detector by the bath fluctuations, P_xi, and the
power dissipated back through the damping force, P_gamma, individually
approach constants once transients have relaxed; their sum vanishes.
The balance is checked at finite late times, together with the decay
classes of the nonstationary contributions: covariance nonstationarity
dies off exponentially on the relaxation time, while the oscillating
remnants in P_xi (the J integrals) die off only polynomially, t^-2 for
the thermal part and t^-3 for the vacuum part.

The fluctuation-dissipation relation is assembled on its
positive-frequency branch and extended evenly, so both sides are even in
omega and the relation holds on symmetric grids:

    hadamard side     = coth(b|w|/2) cosh(2 eta_kappa) Im G_R(|w|)-form,
    dissipation side  = sgn(w) coth(bw/2) cosh(2 eta_kappa) Im G_R(w).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .bath_kernels import BathSpec, SqueezeSpectrum
from .errors import DomainError, EstimationError
from .gaussian_state import CovarianceState
from .oscillator_dynamics import (
    OscillatorSpec,
    QuadratureConfig,
    _bath_mix,
    _d2_tilde,
    _fundamental,
    _KernelPieces,
    _pp_term_lists,
    _resp,
    _sum_fourier_terms,
    effective_response,
)
from .quadrature import (
    bessel_j1,
    coth_half_beta,
    fourier_quad,
    omega_coth_half_beta,
    plain_quad,
)

__all__ = [
    "FluxReport",
    "FdrReport",
    "power_in",
    "power_out",
    "flux_report",
    "jn_falloff",
    "jn_integral",
    "fdr_oscillator",
    "gamma_kernel_check",
    "bessel_tail_endpoint_integral",
]


@dataclass(frozen=True)
class FluxReport:
    """Sampled powers and their late-time balance.

    ``balance_residual`` is |P_xi + P_gamma| / |P_gamma| at the last
    sampled time, after a stationarity pre-check.
    """

    times: np.ndarray
    p_xi: np.ndarray
    p_gamma: np.ndarray
    balance_residual: float


@dataclass(frozen=True)
class FdrReport:
    """Both sides of the oscillator FDR on a frequency grid."""

    omegas: np.ndarray
    hadamard_side: np.ndarray
    dissipation_side: np.ndarray
    max_rel_deviation: float


def power_in(
    spec: OscillatorSpec, bath: BathSpec, t: float, quad: QuadratureConfig
) -> float:
    """Power delivered to the detector by the bath fluctuations.

    P_xi(t) = 8 pi gamma int (dw/2pi)(w/4pi) coth(bw/2) {
        cosh 2eta  2 Re[e^{+iwt} f'(t;w)]
      - sinh 2eta  2 Re[e^{-iwt} e^{i theta} f'(t;w)] }

    The stationary integrand approaches 2 w Im d2~(w), which falls off
    only like 1/w against the thermal weight, so a regulator is required.
    """
    if t < 0:
        raise DomainError("power_in requires t >= 0")
    if t == 0.0:
        return 0.0
    quad.require_regulator("the injected power P_xi")
    resp, _ = effective_response(spec, bath)
    mix = _bath_mix(bath, quad)

    _, _, Ad, Bd = _fundamental(resp, t)
    base = mix.base

    def d_tilde(w):
        return _d2_tilde(resp, w)

    def es1(w):
        d = d_tilde(w)
        return (mix.shc(w) + 1j * mix.shs(w)) * d

    terms = [
        # stationary: 2 w Im D + 2 Re(D Cd) cos wt - 2 Im(D Cd) sin wt
        (lambda w: base(w) * mix.ch2(w) * 2.0 * w * d_tilde(w).imag, 0.0, "cos"),
        (
            lambda w: base(w)
            * mix.ch2(w)
            * 2.0
            * (-Ad * d_tilde(w).real - w * Bd * d_tilde(w).imag),
            t,
            "cos",
        ),
        (
            lambda w: base(w)
            * mix.ch2(w)
            * (-2.0)
            * (-Ad * d_tilde(w).imag + w * Bd * d_tilde(w).real),
            t,
            "sin",
        ),
        # nonstationary: -2 Re[Es1 (-i w e^{-2iwt} + Cd e^{-iwt})]
        (lambda w: base(w) * (-2.0) * w * es1(w).imag, 2.0 * t, "cos"),
        (lambda w: base(w) * 2.0 * w * es1(w).real, 2.0 * t, "sin"),
        (
            lambda w: base(w)
            * (-2.0)
            * (-Ad * es1(w).real - w * Bd * es1(w).imag),
            t,
            "cos",
        ),
        (
            lambda w: base(w)
            * (-2.0)
            * (-Ad * es1(w).imag + w * Bd * es1(w).real),
            t,
            "sin",
        ),
    ]
    total = _sum_fourier_terms(terms, mix.lower, quad)
    return 8.0 * math.pi * spec.gamma * total


def momentum_dispersion_driven(
    spec: OscillatorSpec, bath: BathSpec, t: float, quad: QuadratureConfig
) -> float:
    """Bath-driven part of <p^2(t)> (no initial-condition terms)."""
    quad.require_regulator("the momentum dispersion <p^2>")
    resp, _ = effective_response(spec, bath)
    mix = _bath_mix(bath, quad)
    pieces = _KernelPieces(resp, mix)
    stat, nonstat = _pp_term_lists(pieces, t)
    e_sq = 8.0 * math.pi * spec.gamma * spec.m
    return e_sq * _sum_fourier_terms(stat + nonstat, mix.lower, quad)


def power_out(
    spec: OscillatorSpec,
    bath: BathSpec,
    t: float,
    quad: QuadratureConfig,
    init: CovarianceState | None = None,
) -> float:
    """Power dissipated back into the bath through the damping force.

    P_gamma(t) = -(2 Gamma / m) <p^2(t)> with Gamma the local damping
    rate of the detector response: gamma for a massless bath, Upsilon
    for the memory-dressed massive case (the local reduction of the
    nonlocal dissipation kernel).  With ``init`` the homogeneous decay
    of the initial momentum dispersion is included; by default only the
    bath-driven part enters.
    """
    if t < 0:
        raise DomainError("power_out requires t >= 0")
    if spec.gamma == 0.0:
        return 0.0
    resp, gamma_damp = effective_response(spec, bath)
    pp = momentum_dispersion_driven(spec, bath, t, quad) if t > 0 else 0.0
    if init is not None:
        _, _, d1_dot, d2_dot = _fundamental(resp, t)
        pp += (
            (spec.m * d1_dot) ** 2 * init.xx
            + d2_dot**2 * init.pp
            + 2.0 * spec.m * d1_dot * d2_dot * init.xp
        )
    return -(2.0 * gamma_damp / spec.m) * pp


def flux_report(
    spec: OscillatorSpec,
    bath: BathSpec,
    times,
    quad: QuadratureConfig,
    init: CovarianceState | None = None,
    late_time_factor: float = 30.0,
    stationarity_rtol: float = 1e-4,
    enforce_late_time: bool = True,
) -> FluxReport:
    """Sample P_xi and P_gamma over a time grid and check the balance.

    The balance residual is evaluated at the last grid point, which must
    lie past ``late_time_factor`` relaxation times and pass a
    stationarity pre-check |dP_gamma/dt| < stationarity_rtol * |P_gamma|
    (both configurable).
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2 or np.any(np.diff(times) <= 0):
        raise DomainError("times must be a strictly increasing grid")
    _, gamma_damp = effective_response(spec, bath)
    if enforce_late_time and gamma_damp > 0:
        t_min = late_time_factor / gamma_damp
        if times[-1] < t_min:
            raise DomainError(
                f"late-time balance requires t >= {t_min:.3g} "
                f"(= {late_time_factor}/Gamma); grid ends at {times[-1]:.3g}"
            )
    p_xi = np.array([power_in(spec, bath, t, quad) for t in times])
    p_gamma = np.array(
        [power_out(spec, bath, t, quad, init=init) for t in times]
    )
    if enforce_late_time:
        dt = times[-1] - times[-2]
        rate = abs(p_gamma[-1] - p_gamma[-2]) / dt
        if rate > stationarity_rtol * abs(p_gamma[-1]):
            raise DomainError(
                "stationarity pre-check failed: |dP_gamma/dt| = "
                f"{rate:.3e} exceeds {stationarity_rtol:.1e} |P_gamma|"
            )
    residual = abs(p_xi[-1] + p_gamma[-1]) / abs(p_gamma[-1])
    return FluxReport(
        times=times, p_xi=p_xi, p_gamma=p_gamma, balance_residual=float(residual)
    )


# ---------------------------------------------------------------------------
# late-time falloff of the oscillating power remnants

_MEASURE_NORM = 1.0 / (8.0 * math.pi**2)


def jn_integral(
    spec: OscillatorSpec,
    beta: float,
    n: int,
    t: float,
    epsilon: float = 1e-2,
    rel_tol: float = 1e-9,
    abs_tol: float = 1e-14,
    subtract_pole: bool = True,
) -> complex:
    """Oscillating remnant J(t) = int (dw/2pi)(w/4pi) W(w) (-iw) d2~ e^{-2iwt}.

    ``n = 0`` is the vacuum piece of the coth expansion, regulated by
    e^{-epsilon w}.  ``n >= 1`` carries the summed thermal remainder
    W(w) = sum_{j>=n} e^{-j beta w} = e^{-n beta w} / (1 - e^{-beta w});
    the t^-2 (thermal) / t^-3 (vacuum) falloff classes concern the
    resummed series, a single Boltzmann term alone decays like vacuum.

    The exact integral also carries the residue of the response pole at
    w = Omega - i gamma, an e^{-2 gamma t} transient that the
    exponential-integral closed form of the late-time analysis discards.
    ``subtract_pole`` (default) removes it analytically, leaving the
    algebraically decaying part whose exponent the falloff fit targets;
    pass False for the raw integral.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    if n >= 1 and (not beta > 0 or math.isinf(beta)):
        raise DomainError("thermal terms need finite beta > 0")
    resp = _resp(spec)

    if n == 0:
        if epsilon <= 0:
            raise DomainError("vacuum term requires an epsilon regulator")

        def wfac(w):
            # w^2 e^{-eps w}
            return w * w * math.exp(-epsilon * w)
    else:
        def wfac(w):
            # w^2 e^{-n b w} / (1 - e^{-b w}); series patch keeps the
            # integrable ~ w/beta endpoint NaN-free for the panel rules
            u = beta * w
            if u < 1e-6:
                return (w / beta) * math.exp(-n * u) / (1.0 - 0.5 * u + u * u / 6.0)
            return w * w * math.exp(-n * u) / (-math.expm1(-u))

    def h_re(w):
        return wfac(w) * _d2_tilde(resp, w).real

    def h_im(w):
        return wfac(w) * _d2_tilde(resp, w).imag

    # the envelope decays exponentially; truncate where it reaches e^-45
    scale = epsilon if n == 0 else n * beta
    upper = 45.0 / scale
    opts = dict(rel_tol=rel_tol, abs_tol=abs_tol, limit=4000)
    freq = 2.0 * t
    x = (
        fourier_quad(h_re, freq, "cos", 0.0, upper, **opts)[0]
        + fourier_quad(h_im, freq, "sin", 0.0, upper, **opts)[0]
    )
    y = (
        fourier_quad(h_im, freq, "cos", 0.0, upper, **opts)[0]
        - fourier_quad(h_re, freq, "sin", 0.0, upper, **opts)[0]
    )
    # J = -i (X + iY) / (8 pi^2)
    value = complex(y * _MEASURE_NORM, -x * _MEASURE_NORM)

    if subtract_pole:
        # rotating int_0^inf to the negative imaginary axis sweeps the
        # fourth quadrant, which contains the single response pole
        # w+ = Omega - i gamma with residue -1/(2 Omega); the swept term
        # is the e^{-2 gamma t} transient absent from the closed form
        w_plus = complex(resp.Omega, -resp.gamma)
        if n == 0:
            w_pole = cmath.exp(-epsilon * w_plus)
        else:
            w_pole = cmath.exp(-n * beta * w_plus) / (1.0 - cmath.exp(-beta * w_plus))
        pole = (
            w_plus * w_plus * w_pole * cmath.exp(-2j * w_plus * t)
            / (8.0 * math.pi * resp.Omega)
        )
        value -= pole
    return value


def jn_falloff(
    spec: OscillatorSpec,
    beta: float,
    n: int,
    t_list,
    epsilon: float = 1e-2,
) -> float:
    """Fitted decay exponent of log|J_n(t)| against log t.

    The fit window must span at least one decade; expect roughly -2 for
    thermal terms (n >= 1) and -3 for the vacuum term (n = 0).
    """
    t_arr = np.asarray(t_list, dtype=float)
    if t_arr.size < 4:
        raise EstimationError("need at least 4 sample times for the fit")
    if np.any(t_arr <= 0):
        raise DomainError("sample times must be positive")
    if np.max(t_arr) < 10.0 * np.min(t_arr):
        raise EstimationError(
            "fit window too narrow: t_list must span at least one decade"
        )
    mags = np.array(
        [abs(jn_integral(spec, beta, n, t, epsilon=epsilon)) for t in t_arr]
    )
    if np.any(mags == 0.0):
        raise EstimationError("J_n vanished within quadrature accuracy")
    slope, _ = np.polyfit(np.log(t_arr), np.log(mags), 1)
    return float(slope)


# ---------------------------------------------------------------------------
# fluctuation-dissipation relation of the oscillator


def _cosh2eta_of_kappa(bath: BathSpec, kappa):
    if isinstance(bath.squeeze, SqueezeSpectrum):
        return np.cosh(2.0 * bath.squeeze.eta_at(kappa))
    return np.full_like(np.asarray(kappa, dtype=float), bath.constant_squeeze().cosh2eta)


def fdr_oscillator(
    spec: OscillatorSpec, bath: BathSpec, omega_grid
) -> FdrReport:
    """Both sides of the detector FDR on a frequency grid.

    Massless baths use the closed forms

        hadamard     = (2 gamma / m) cosh 2eta |d2~(w)|^2 [|w| coth(b|w|/2)]
        dissipation  = sgn(w) coth(bw/2) cosh 2eta Im d2~(w form) / m

    evaluated on the positive branch and extended evenly.  Parametric
    baths carry cosh 2eta_kappa with kappa = sqrt(w^2 - m_i^2) and the
    dressed response G_R(w) = (1/m)/(w_r^2 - w^2 - 2 i gamma kappa);
    frequencies at or below the mass threshold are dropped from the grid.
    """
    omegas = np.asarray(omega_grid, dtype=float)
    if omegas.ndim != 1 or omegas.size == 0:
        raise DomainError("omega grid must be a nonempty 1-d array")
    beta = bath.beta

    if isinstance(bath.squeeze, SqueezeSpectrum) or bath.mass_i > 0:
        mask = np.abs(omegas) > bath.mass_i * (1.0 + 1e-12)
        omegas = omegas[mask]
        if omegas.size == 0:
            raise DomainError("no grid frequencies above the mass threshold")
        aw = np.abs(omegas)
        kappa = np.sqrt(aw * aw - bath.mass_i**2)
        ch2 = _cosh2eta_of_kappa(bath, kappa)
        denom = spec.omega_r**2 - omegas**2 - 2j * spec.gamma * kappa
        g_r = (1.0 / spec.m) / denom
        im_gr0 = kappa / (4.0 * math.pi)
        e_sq = 8.0 * math.pi * spec.gamma * spec.m
        coth_abs = coth_half_beta(aw, beta)
        hadamard = e_sq * coth_abs * ch2 * np.abs(g_r) ** 2 * im_gr0
        # sgn(w) coth(bw/2) Im G_R(w) = coth(b|w|/2) Im G_R(|w|); Im G_R
        # of the dressed denominator above is positive for w > 0.
        dissipation = coth_abs * ch2 * np.abs(g_r.imag)
    else:
        sq = bath.constant_squeeze()
        ch2 = sq.cosh2eta
        aw = np.abs(omegas)
        d = _d2_tilde(_resp(spec), aw)
        weighted = omega_coth_half_beta(aw, beta)  # |w| coth(b|w|/2), even
        hadamard = (2.0 * spec.gamma / spec.m) * ch2 * np.abs(d) ** 2 * weighted
        # at w = 0 the product coth * Im d2~ has a finite limit equal to
        # the hadamard side (Im d2~ = 2 gamma w |d2~|^2); patch it there
        safe = aw > 1e-12 * spec.omega_r
        coth_abs = coth_half_beta(np.where(safe, aw, 1.0), beta)
        dissipation = np.where(
            safe, ch2 * coth_abs * d.imag / spec.m, hadamard
        )

    scale = np.maximum(np.abs(dissipation), np.abs(hadamard))
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(scale > 0, np.abs(hadamard - dissipation) / scale, 0.0)
    return FdrReport(
        omegas=omegas,
        hadamard_side=hadamard,
        dissipation_side=dissipation,
        max_rel_deviation=float(np.max(rel)),
    )


# ---------------------------------------------------------------------------
# memory-kernel contact check


def bessel_tail_endpoint_integral(mass: float, delta: float) -> float:
    """int_0^delta (m/u) J1(m u) du, the s -> t endpoint contribution."""
    if mass < 0:
        raise DomainError("mass must be nonnegative")
    if delta <= 0:
        raise DomainError("delta must be positive")
    if mass == 0.0:
        return 0.0

    def kernel(u):
        if u == 0.0:
            return 0.5 * mass * mass
        return (mass / u) * bessel_j1(mass * u)

    val, _ = plain_quad(kernel, 0.0, delta, rel_tol=1e-10, abs_tol=1e-16)
    return val


def gamma_kernel_check(
    mass: float,
    t_range: float = 10.0,
    delta_final: float = 5e-8,
) -> float:
    """Residual of the vanishing endpoint limit of the memory kernel.

    The non-contact (Bessel tail) part of the dissipation kernel must not
    contribute to the frequency renormalization: its integral over a
    shrinking window [t - delta, t] tends to zero.  Returns
    |int_0^delta (m/u) J1(m u) du| at the final window size, after
    confirming the full integral over [0, t_range] is finite.
    """
    if mass < 0:
        raise DomainError("mass must be nonnegative")
    if mass == 0.0:
        return 0.0
    if t_range <= 0:
        raise DomainError("t_range must be positive")
    # full tail integral stays finite (closed form: m(1 - J0 - ...) bounded)
    full = bessel_tail_endpoint_integral(mass, t_range)
    if not math.isfinite(full):
        raise DomainError("memory tail integral did not stay finite")
    return abs(bessel_tail_endpoint_integral(mass, delta_final))
