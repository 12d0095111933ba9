"""
Internal dynamics of the detector oscillator.

Fundamental solutions of the damped equation of motion, the auxiliary
response functions f(t; w) and g(t; w), the covariance-matrix evolution
driven by squeezed-thermal or parametric baths, the stationary /
nonstationary split of the displacement dispersion, and the two-time
Hadamard function of the displacement operator.

All spectral integrals are evaluated in closed form in the frequency
domain: the response enters only through

    f(t; w) = d2~(w) [e^{-iwt} - d1(t) + i w d2(t)],
    d2~(w)  = 1 / (w_r^2 - w^2 - 2 i gamma w),

so every covariance component is a short sum of Fourier integrals with
smooth kernels (the double time-integral form survives only as a test
oracle).  Fourier convention: g~(w) = int dt g(t) e^{+iwt}.

For a massive (parametric) bath the equation of motion acquires a Bessel
memory term; for field masses small against the resonance it reduces to a
local equation with shifted decay rate Upsilon and frequency varpi, the
roots of z^2 + w_r^2 - 2 gamma sqrt(z^2 + m_f^2) = 0 continued from the
massless damped pair.  The full nonlocal convolution is out of scope.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .bath_kernels import BathSpec, KernelValue, SqueezeSpectrum
from .errors import (
    ConvergenceError,
    DomainError,
    UnsupportedRegimeError,
)
from .gaussian_state import CovarianceState
from .quadrature import (
    QuadratureConfig,
    coth_half_beta,
    cusp_head,
    fourier_quad,
    omega_coth_half_beta,
)

__all__ = [
    "OscillatorSpec",
    "MassiveOscParams",
    "QuadratureConfig",
    "fundamental_solutions",
    "massive_roots",
    "f_aux",
    "g_aux",
    "fdot_aux",
    "d2_fourier",
    "covariance_evolution",
    "covariance_integral_parts",
    "ns_st_split",
    "chi_hadamard",
    "chi_hadamard_components",
    "effective_response",
]


@dataclass(frozen=True)
class OscillatorSpec:
    """Detector oscillator: mass, physical frequency, damping constant.

    gamma = e^2 / (8 pi m) encodes the field coupling e.  Only the
    underdamped regime omega_r > gamma is supported, so the resonance
    frequency Omega = sqrt(omega_r^2 - gamma^2) is real.
    """

    m: float
    omega_r: float
    gamma: float = 0.0
    omega_b: float | None = None  # bare frequency, bookkeeping only

    def __post_init__(self):
        if self.m <= 0:
            raise DomainError("oscillator mass must be positive")
        if self.omega_r <= 0:
            raise DomainError("physical frequency must be positive")
        if self.gamma < 0:
            raise DomainError("damping constant must be nonnegative")
        if self.gamma >= self.omega_r:
            raise UnsupportedRegimeError(
                f"overdamped oscillator (gamma = {self.gamma} >= omega_r = "
                f"{self.omega_r}) is not supported"
            )

    @property
    def Omega(self) -> float:
        """Resonance frequency sqrt(omega_r^2 - gamma^2)."""
        return math.sqrt(self.omega_r**2 - self.gamma**2)

    @property
    def coupling(self) -> float:
        """Field coupling e with gamma = e^2 / (8 pi m)."""
        return math.sqrt(8.0 * math.pi * self.gamma * self.m)

    @classmethod
    def from_resonance(cls, m: float, Omega: float, gamma: float) -> "OscillatorSpec":
        """Build a spec from the resonance frequency instead of omega_r."""
        return cls(m=m, omega_r=math.hypot(Omega, gamma), gamma=gamma)


@dataclass(frozen=True)
class MassiveOscParams:
    """Local reduction of the detector response in a massive bath.

    ``root`` is the characteristic root z = -Upsilon + i varpi of the
    memory-dressed equation; solutions decay like e^{-Upsilon t} and
    oscillate at varpi.  The massless limit is (gamma, Omega).
    """

    upsilon: float
    varpi: float
    root: complex

    def __post_init__(self):
        if self.upsilon < 0 or self.varpi <= 0:
            raise UnsupportedRegimeError(
                "massive-bath root must decay (Upsilon >= 0) and oscillate "
                "(varpi > 0)"
            )


class _Response(NamedTuple):
    """Decay rate and oscillation frequency of the local d1, d2 pair."""

    gamma: float
    Omega: float

    @property
    def omega_sq(self) -> float:
        return self.gamma**2 + self.Omega**2


def _resp(spec: OscillatorSpec) -> _Response:
    return _Response(spec.gamma, spec.Omega)


def _fundamental(resp: _Response, t):
    g, om = resp.gamma, resp.Omega
    t = np.asarray(t, dtype=float)
    env = np.exp(-g * t)
    s, c = np.sin(om * t), np.cos(om * t)
    d1 = env * (c + (g / om) * s)
    d2 = env * s / om
    d1_dot = -env * (resp.omega_sq / om) * s
    d2_dot = env * (c - (g / om) * s)
    return d1, d2, d1_dot, d2_dot


def fundamental_solutions(spec: OscillatorSpec, t):
    """Homogeneous solutions d1, d2 and their derivatives at time t >= 0.

    d1 = e^{-gt}[cos Wt + (g/W) sin Wt], d2 = e^{-gt} sin(Wt)/W with
    W = Omega; the Wronskian d1 d2' - d1' d2 equals e^{-2 gamma t}.
    Accepts scalar or array t.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise DomainError("fundamental solutions are defined for t >= 0")
    out = _fundamental(_resp(spec), t_arr)
    if np.ndim(t) == 0:
        return tuple(float(x) for x in out)
    return out


def massive_roots(
    gamma: float, Omega: float, mass_f: float, branch: int = +1
) -> MassiveOscParams:
    """Characteristic root of the detector in a massive bath.

    Solves z^2 + (Omega^2 + gamma^2) - 2 gamma sqrt(z^2 + mass_f^2) = 0 by
    Newton iteration from the massless root -gamma + i Omega (branch = -1
    starts from the conjugate).  The square-root branch is the analytic
    continuation that reproduces the massless damped pair, which fixes the
    sign ambiguity in the closed-form radical.  Requires mass_f < Omega;
    at or beyond the resonance the continuation is ambiguous.
    """
    if Omega <= 0:
        raise DomainError("Omega must be positive")
    if gamma < 0:
        raise DomainError("gamma must be nonnegative")
    if mass_f < 0:
        raise DomainError("mass_f must be nonnegative")
    if mass_f >= Omega:
        raise UnsupportedRegimeError(
            f"mass_f = {mass_f} >= Omega = {Omega}: small-mass local "
            "reduction is not valid"
        )
    if branch not in (+1, -1):
        raise DomainError("branch must be +1 or -1")

    omega_r_sq = Omega * Omega + gamma * gamma
    z = complex(-gamma, branch * Omega)
    if mass_f > 0.0 and gamma > 0.0:
        msq = mass_f * mass_f
        for _ in range(60):
            s = cmath.sqrt(z * z + msq)
            f = z * z + omega_r_sq - 2.0 * gamma * s
            df = 2.0 * z - 2.0 * gamma * z / s
            step = f / df
            z = z - step
            if abs(step) < 1e-15 * max(1.0, abs(z)):
                break
        else:
            raise ConvergenceError(
                "massive-root Newton iteration did not converge",
                partial_value=z,
            )
        residual = abs(z * z + omega_r_sq - 2.0 * gamma * cmath.sqrt(z * z + msq))
        if residual > 1e-10 * omega_r_sq:
            raise ConvergenceError(
                f"massive root residual {residual:.3e} too large", partial_value=z
            )
    return MassiveOscParams(upsilon=-z.real, varpi=abs(z.imag), root=z)


# ---------------------------------------------------------------------------
# auxiliary response functions


def _d2_tilde(resp: _Response, omega):
    omega = np.asarray(omega, dtype=float)
    return 1.0 / (resp.omega_sq - omega**2 - 2j * resp.gamma * omega)


def d2_fourier(spec: OscillatorSpec, omega):
    """Fourier transform d2~(w) = 1 / (w_r^2 - w^2 - 2 i gamma w).

    Satisfies 2 gamma w |d2~|^2 = Im d2~ pointwise, the identity behind
    the late-time energy balance.
    """
    out = _d2_tilde(_resp(spec), omega)
    return complex(out) if np.ndim(omega) == 0 else out


def _f_aux(resp: _Response, t: float, omega):
    d1, d2, _, _ = _fundamental(resp, t)
    omega = np.asarray(omega, dtype=float)
    return _d2_tilde(resp, omega) * (
        np.exp(-1j * omega * t) - d1 + 1j * omega * d2
    )


def _fdot_aux(resp: _Response, t: float, omega):
    _, _, d1_dot, d2_dot = _fundamental(resp, t)
    omega = np.asarray(omega, dtype=float)
    return _d2_tilde(resp, omega) * (
        -1j * omega * np.exp(-1j * omega * t) - d1_dot + 1j * omega * d2_dot
    )


def f_aux(spec: OscillatorSpec, t: float, omega):
    """Response integral f(t; w) = int_0^t d2(t-s) e^{-iws} ds, closed form.

    Equals d2~(w)[e^{-iwt} - d1(t) + i w d2(t)]; vanishes at t = 0 and
    tends to d2~(w) e^{-iwt} once the homogeneous solutions have decayed.
    """
    if t < 0:
        raise DomainError("f(t; w) is defined for t >= 0")
    out = _f_aux(_resp(spec), t, omega)
    return complex(out) if np.ndim(omega) == 0 else out


def fdot_aux(spec: OscillatorSpec, t: float, omega):
    """Time derivative of f(t; w), also in closed form (no 1/w pole)."""
    if t < 0:
        raise DomainError("f(t; w) is defined for t >= 0")
    out = _fdot_aux(_resp(spec), t, omega)
    return complex(out) if np.ndim(omega) == 0 else out


def g_aux(spec: OscillatorSpec, t: float, omega):
    """g(t; w) = 1 - i e^{+iwt} d1'(t)/w - d2'(t) e^{+iwt}.

    Defined so that f' = -i w d2~(w) e^{-iwt} g identically.  g itself has
    a genuine 1/w pole at w = 0 (only the combination w g is finite
    there), so zero frequency is rejected; use :func:`fdot_aux`, which is
    regular, when the product is what is needed.
    """
    if t < 0:
        raise DomainError("g(t; w) is defined for t >= 0")
    omega_arr = np.asarray(omega, dtype=float)
    if np.any(omega_arr == 0.0):
        raise DomainError(
            "g(t; w) has a removable 1/w pole only inside the product w g; "
            "evaluate fdot_aux at w = 0 instead"
        )
    _, _, d1_dot, d2_dot = _fundamental(_resp(spec), t)
    phase = np.exp(1j * omega_arr * t)
    out = 1.0 - 1j * phase * d1_dot / omega_arr - d2_dot * phase
    return complex(out) if np.ndim(omega) == 0 else out


def effective_response(
    spec: OscillatorSpec, bath: BathSpec
) -> tuple[_Response, float]:
    """Local response parameters of the detector in the given bath.

    Returns ``((decay rate, oscillation frequency), damping rate)``: the
    massless pair (gamma, Omega) for a massless bath, the memory-dressed
    (Upsilon, varpi) for a massive one.  The damping rate is what enters
    the dissipated power -2 m Gamma <chi'^2>.
    """
    if bath.mass_f == 0.0:
        return _resp(spec), spec.gamma
    roots = massive_roots(spec.gamma, spec.Omega, bath.mass_f)
    return _Response(roots.upsilon, roots.varpi), roots.upsilon


# ---------------------------------------------------------------------------
# spectral mix of the bath as seen by the detector integrals

_MEASURE_NORM = 1.0 / (8.0 * math.pi**2)


class _SpectralMix(NamedTuple):
    """Measure and squeeze weights of the bath integrals over w.

    base(w) carries the isotropic measure, the thermal factor and the
    regulator; ch2 / shc / shs are cosh 2eta, sinh 2eta cos(theta),
    sinh 2eta sin(theta), constant or mode-dependent.
    """

    lower: float
    base: Callable
    ch2: Callable
    shc: Callable
    shs: Callable


def _bath_mix(bath: BathSpec, quad: QuadratureConfig) -> _SpectralMix:
    beta = bath.beta

    if isinstance(bath.squeeze, SqueezeSpectrum):
        spectrum = bath.squeeze
        spectrum.check_resolution(quad, bath.mass_i)
        mass_i = bath.mass_i

        if mass_i == 0.0:
            def base(w):
                return _MEASURE_NORM * omega_coth_half_beta(w, beta) * quad.damping(w)

            def eta_of(w):
                return spectrum.eta_at(np.asarray(w, dtype=float))

            def theta_of(w):
                return spectrum.theta_at(np.asarray(w, dtype=float))
        else:
            def base(w):
                w = np.asarray(w, dtype=float)
                kappa = np.sqrt(np.maximum(w * w - mass_i * mass_i, 0.0))
                return _MEASURE_NORM * kappa * coth_half_beta(w, beta) * quad.damping(w)

            def eta_of(w):
                w = np.asarray(w, dtype=float)
                kappa = np.sqrt(np.maximum(w * w - mass_i * mass_i, 0.0))
                return spectrum.eta_at(kappa)

            def theta_of(w):
                w = np.asarray(w, dtype=float)
                kappa = np.sqrt(np.maximum(w * w - mass_i * mass_i, 0.0))
                return spectrum.theta_at(kappa)

        return _SpectralMix(
            lower=mass_i,
            base=base,
            ch2=lambda w: np.cosh(2.0 * eta_of(w)),
            shc=lambda w: np.sinh(2.0 * eta_of(w)) * np.cos(theta_of(w)),
            shs=lambda w: np.sinh(2.0 * eta_of(w)) * np.sin(theta_of(w)),
        )

    if not bath.is_massless:
        raise DomainError(
            "constant-squeeze dynamics is implemented for massless baths; "
            "massive baths require a parametric squeeze spectrum"
        )
    sq = bath.constant_squeeze()
    ch2 = sq.cosh2eta
    shc = sq.sinh2eta * math.cos(sq.theta)
    shs = sq.sinh2eta * math.sin(sq.theta)

    def base(w):
        return _MEASURE_NORM * omega_coth_half_beta(w, beta) * quad.damping(w)

    def const(value):
        return lambda w: np.full_like(np.asarray(w, dtype=float), value)

    return _SpectralMix(
        lower=0.0, base=base, ch2=const(ch2), shc=const(shc), shs=const(shs)
    )


def _sum_fourier_terms(terms, lower, quad: QuadratureConfig) -> float:
    """Sum integrals of kernel(w) * {1, cos, sin}(freq w) over the domain.

    A positive lower limit marks a mass threshold whose sqrt cusp is
    handled by a plain-rule head interval.
    """
    upper = quad.upper()
    total = 0.0
    for kernel, freq, kind in terms:
        val, _ = fourier_quad(
            kernel,
            freq,
            kind,
            lower,
            upper,
            rel_tol=quad.rel_tol,
            abs_tol=quad.abs_tol,
            limit=quad.max_subdivisions,
            head=cusp_head(lower, abs(freq)),
        )
        total += val
    return total


class _KernelPieces:
    """Shared spectral building blocks |D|^2, Re/Im of the squeezed D^2.

    E(w) = sinh 2eta(w) e^{i theta(w)} D^2(w) folds the nonstationary bath
    weight into the response; S(w) = cosh 2eta(w) |D(w)|^2 the stationary
    one.
    """

    def __init__(self, resp: _Response, mix: _SpectralMix):
        self.resp = resp
        self.mix = mix

    def Dsq_abs(self, w):
        d = _d2_tilde(self.resp, w)
        return (d * d.conjugate()).real

    def S(self, w):
        return self.mix.ch2(w) * self.Dsq_abs(w)

    def E(self, w):
        d = _d2_tilde(self.resp, w)
        d2 = d * d
        return (self.mix.shc(w) + 1j * self.mix.shs(w)) * d2

    def E_re(self, w):
        return self.E(w).real

    def E_im(self, w):
        return self.E(w).imag


def _xx_term_lists(pieces: _KernelPieces, t: float):
    """(stationary, nonstationary) Fourier terms of the f (x) f integral."""
    resp, mix = pieces.resp, pieces.mix
    A, B, _, _ = _fundamental(resp, t)
    base = mix.base

    stationary = [
        (lambda w: base(w) * 2.0 * pieces.S(w) * (1.0 + A * A + (w * B) ** 2), 0.0, "cos"),
        (lambda w: base(w) * (-4.0 * A) * pieces.S(w), t, "cos"),
        (lambda w: base(w) * (-4.0 * B) * w * pieces.S(w), t, "sin"),
    ]
    nonstationary = [
        (
            lambda w: base(w)
            * (-2.0)
            * (pieces.E_re(w) * (A * A - (w * B) ** 2) + pieces.E_im(w) * 2.0 * A * B * w),
            0.0,
            "cos",
        ),
        (lambda w: base(w) * 4.0 * (A * pieces.E_re(w) + B * w * pieces.E_im(w)), t, "cos"),
        (lambda w: base(w) * 4.0 * (A * pieces.E_im(w) - B * w * pieces.E_re(w)), t, "sin"),
        (lambda w: base(w) * (-2.0) * pieces.E_re(w), 2.0 * t, "cos"),
        (lambda w: base(w) * (-2.0) * pieces.E_im(w), 2.0 * t, "sin"),
    ]
    return stationary, nonstationary


def _pp_term_lists(pieces: _KernelPieces, t: float):
    """Fourier terms of the f' (x) f' integral (momentum dispersion)."""
    resp, mix = pieces.resp, pieces.mix
    _, _, Ad, Bd = _fundamental(resp, t)
    base = mix.base

    stationary = [
        (
            lambda w: base(w) * 2.0 * pieces.S(w) * (w * w + Ad * Ad + (w * Bd) ** 2),
            0.0,
            "cos",
        ),
        (lambda w: base(w) * (-4.0 * Bd) * w * w * pieces.S(w), t, "cos"),
        (lambda w: base(w) * (4.0 * Ad) * w * pieces.S(w), t, "sin"),
    ]
    nonstationary = [
        (
            lambda w: base(w)
            * (-2.0)
            * (pieces.E_re(w) * (Ad * Ad - (w * Bd) ** 2) + pieces.E_im(w) * 2.0 * Ad * Bd * w),
            0.0,
            "cos",
        ),
        (
            lambda w: base(w) * 4.0 * w * (Ad * pieces.E_im(w) - Bd * w * pieces.E_re(w)),
            t,
            "cos",
        ),
        (
            lambda w: base(w) * (-4.0) * w * (Ad * pieces.E_re(w) + Bd * w * pieces.E_im(w)),
            t,
            "sin",
        ),
        (lambda w: base(w) * 2.0 * w * w * pieces.E_re(w), 2.0 * t, "cos"),
        (lambda w: base(w) * 2.0 * w * w * pieces.E_im(w), 2.0 * t, "sin"),
    ]
    return stationary, nonstationary


def _xp_term_lists(pieces: _KernelPieces, t: float):
    """Fourier terms of the symmetrized f (x) f' integral."""
    resp, mix = pieces.resp, pieces.mix
    A, B, Ad, Bd = _fundamental(resp, t)
    base = mix.base

    stationary = [
        (
            lambda w: base(w) * 2.0 * pieces.S(w) * (A * Ad + w * w * B * Bd),
            0.0,
            "cos",
        ),
        (lambda w: base(w) * (-2.0) * pieces.S(w) * (Ad + w * w * B), t, "cos"),
        (lambda w: base(w) * 2.0 * w * (A - Bd) * pieces.S(w), t, "sin"),
    ]
    nonstationary = [
        (
            lambda w: base(w)
            * (-2.0)
            * (
                pieces.E_re(w) * (A * Ad - w * w * B * Bd)
                + pieces.E_im(w) * w * (A * Bd + Ad * B)
            ),
            0.0,
            "cos",
        ),
        (
            lambda w: base(w)
            * (-2.0)
            * (pieces.E_re(w) * (-Ad + w * w * B) - pieces.E_im(w) * w * (A + Bd)),
            t,
            "cos",
        ),
        (
            lambda w: base(w)
            * (-2.0)
            * (pieces.E_im(w) * (-Ad + w * w * B) + pieces.E_re(w) * w * (A + Bd)),
            t,
            "sin",
        ),
        (lambda w: base(w) * (-2.0) * w * pieces.E_im(w), 2.0 * t, "cos"),
        (lambda w: base(w) * 2.0 * w * pieces.E_re(w), 2.0 * t, "sin"),
    ]
    return stationary, nonstationary


def covariance_integral_parts(
    spec: OscillatorSpec,
    bath: BathSpec,
    t: float,
    quad: QuadratureConfig,
) -> tuple[float, float, float]:
    """Bath-driven integral parts of (xx, pp, xp) at time t.

    The initial-condition terms are excluded; what remains is the double
    time integral of the bath Hadamard function against the fundamental
    solutions, reduced to frequency-domain Fourier integrals.
    """
    if t < 0:
        raise DomainError("covariance evolution requires t >= 0")
    if t == 0.0:
        return 0.0, 0.0, 0.0
    quad.require_regulator("the momentum dispersion <p^2>")
    resp, _ = effective_response(spec, bath)
    mix = _bath_mix(bath, quad)
    pieces = _KernelPieces(resp, mix)

    e_sq = 8.0 * math.pi * spec.gamma * spec.m
    m = spec.m

    stat, nonstat = _xx_term_lists(pieces, t)
    i_xx = (e_sq / m**2) * _sum_fourier_terms(stat + nonstat, mix.lower, quad)
    stat, nonstat = _pp_term_lists(pieces, t)
    i_pp = e_sq * _sum_fourier_terms(stat + nonstat, mix.lower, quad)
    stat, nonstat = _xp_term_lists(pieces, t)
    i_xp = (e_sq / m) * _sum_fourier_terms(stat + nonstat, mix.lower, quad)
    return i_xx, i_pp, i_xp


def covariance_evolution(
    spec: OscillatorSpec,
    bath: BathSpec,
    init: CovarianceState,
    t: float,
    quad: QuadratureConfig,
) -> CovarianceState:
    """Covariance matrix of the detector at time t.

    Homogeneous propagation of the initial second moments plus the
    bath-driven integrals, evaluated in the frequency domain.  The
    momentum dispersion is logarithmically UV divergent, so the
    quadrature config must carry a regulator; its value is quoted with
    the cutoff in mind.
    """
    if t < 0:
        raise DomainError("covariance evolution requires t >= 0")
    if t == 0.0:
        return init
    i_xx, i_pp, i_xp = covariance_integral_parts(spec, bath, t, quad)
    resp, _ = effective_response(spec, bath)
    m = spec.m
    d1, d2, d1_dot, d2_dot = _fundamental(resp, t)
    xx = d1 * d1 * init.xx + (d2 / m) ** 2 * init.pp + 2.0 * d1 * d2 * init.xp / m
    pp = (
        (m * d1_dot) ** 2 * init.xx
        + d2_dot * d2_dot * init.pp
        + 2.0 * m * d1_dot * d2_dot * init.xp
    )
    xp = (
        m * d1 * d1_dot * init.xx
        + d2 * d2_dot * init.pp / m
        + (d1 * d2_dot + d1_dot * d2) * init.xp
    )
    return CovarianceState(
        xx=float(xx + i_xx), pp=float(pp + i_pp), xp=float(xp + i_xp)
    )


def ns_st_split(
    spec: OscillatorSpec, bath: BathSpec, t: float, quad: QuadratureConfig
) -> tuple[float, float]:
    """Nonstationary and stationary integrals feeding <chi^2(t)>.

    I_NS = -int (dw/2pi)(w/4pi) coth(bw/2) 2 Re[f^2(t;w) e^{i theta}],
    I_ST = +int (dw/2pi)(w/4pi) coth(bw/2) 2 |f(t;w)|^2.

    The squeeze magnitude prefactors (sinh/cosh 2eta) are deliberately
    not included: the split isolates the temporal behavior.  Massless
    constant-squeeze baths only.
    """
    if t < 0:
        raise DomainError("ns_st_split requires t >= 0")
    if bath.is_parametric or not bath.is_massless:
        raise DomainError("ns_st_split is defined for massless constant-squeeze baths")
    theta = bath.constant_squeeze().theta
    resp = _resp(spec)

    # unit-weight mix: ch2 = 1, sinh 2eta -> 1 with the bath's angle
    def base(w):
        return _MEASURE_NORM * omega_coth_half_beta(w, bath.beta) * quad.damping(w)

    def const(value):
        return lambda w: np.full_like(np.asarray(w, dtype=float), value)

    unit_mix = _SpectralMix(
        lower=0.0,
        base=base,
        ch2=const(1.0),
        shc=const(math.cos(theta)),
        shs=const(math.sin(theta)),
    )
    pieces = _KernelPieces(resp, unit_mix)
    stat, nonstat = _xx_term_lists(pieces, t)
    i_st = _sum_fourier_terms(stat, 0.0, quad)
    i_ns = _sum_fourier_terms(nonstat, 0.0, quad)
    return i_ns, i_st


def chi_hadamard_components(
    spec: OscillatorSpec,
    beta: float,
    theta: float,
    t: float,
    t_prime: float,
    quad: QuadratureConfig,
    resp: _Response | None = None,
) -> tuple[float, float]:
    """Unit-weight stationary / nonstationary parts of G_H^(chi)(t, t').

    stationary    = int dmu 2 Re[f(t) f*(t')]
    nonstationary = -int dmu 2 Re[f(t) f(t') e^{i theta}]

    with dmu = (dw/2pi)(w/4pi) coth(bw/2).  The cosh/sinh 2eta weights
    and the e^2/m^2 prefactor are left to the caller, which lets figure
    code factor them out.
    """
    if t < 0 or t_prime < 0:
        raise DomainError("two-time Hadamard requires t, t' >= 0")
    resp = resp if resp is not None else _resp(spec)
    A, B, _, _ = _fundamental(resp, t)
    A2, B2, _, _ = _fundamental(resp, t_prime)

    def base(w):
        return _MEASURE_NORM * omega_coth_half_beta(w, beta) * quad.damping(w)

    def Dsq(w):
        d = _d2_tilde(resp, w)
        return (d * d.conjugate()).real

    ct, st = math.cos(theta), math.sin(theta)

    def E_re(w):
        d = _d2_tilde(resp, w)
        d2 = d * d
        return ct * d2.real - st * d2.imag

    def E_im(w):
        d = _d2_tilde(resp, w)
        d2 = d * d
        return ct * d2.imag + st * d2.real

    stationary_terms = [
        (lambda w: base(w) * 2.0 * Dsq(w), t - t_prime, "cos"),
        (lambda w: base(w) * 2.0 * Dsq(w) * (A * A2 + w * w * B * B2), 0.0, "cos"),
        (lambda w: base(w) * (-2.0 * A2) * Dsq(w), t, "cos"),
        (lambda w: base(w) * (-2.0 * B2) * w * Dsq(w), t, "sin"),
        (lambda w: base(w) * (-2.0 * A) * Dsq(w), t_prime, "cos"),
        (lambda w: base(w) * (-2.0 * B) * w * Dsq(w), t_prime, "sin"),
    ]
    nonstationary_terms = [
        (lambda w: base(w) * (-2.0) * E_re(w), t + t_prime, "cos"),
        (lambda w: base(w) * (-2.0) * E_im(w), t + t_prime, "sin"),
        (
            lambda w: base(w)
            * (-2.0)
            * (E_re(w) * (A * A2 - w * w * B * B2) + E_im(w) * w * (A * B2 + A2 * B)),
            0.0,
            "cos",
        ),
        (lambda w: base(w) * 2.0 * (A2 * E_re(w) + B2 * w * E_im(w)), t, "cos"),
        (lambda w: base(w) * 2.0 * (A2 * E_im(w) - B2 * w * E_re(w)), t, "sin"),
        (lambda w: base(w) * 2.0 * (A * E_re(w) + B * w * E_im(w)), t_prime, "cos"),
        (lambda w: base(w) * 2.0 * (A * E_im(w) - B * w * E_re(w)), t_prime, "sin"),
    ]
    stationary = _sum_fourier_terms(stationary_terms, 0.0, quad)
    nonstationary = _sum_fourier_terms(nonstationary_terms, 0.0, quad)
    return stationary, nonstationary


def chi_hadamard(
    spec: OscillatorSpec,
    bath: BathSpec,
    t: float,
    t_prime: float,
    quad: QuadratureConfig,
) -> KernelValue:
    """Bath-driven part of the displacement Hadamard function G_H^(chi).

    The initial-condition terms (exponentially small past the relaxation
    time) are not included.  At t = t' the total reproduces the integral
    part of <chi^2(t)>; for t, t' >> 1/gamma the stationary part depends
    on t - t' only and the total approaches cosh 2eta times the thermal
    correlation.
    """
    if bath.is_parametric or not bath.is_massless:
        raise DomainError("chi_hadamard is implemented for massless constant baths")
    sq = bath.constant_squeeze()
    stationary, nonstationary = chi_hadamard_components(
        spec, bath.beta, sq.theta, t, t_prime, quad
    )
    pref = 8.0 * math.pi * spec.gamma / spec.m
    return KernelValue(
        stationary=pref * sq.cosh2eta * stationary,
        nonstationary=pref * sq.sinh2eta * nonstationary,
    )
