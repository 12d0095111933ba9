"""
Two-point functions of the free bath field.

Hadamard (noise) kernels of squeezed-thermal and parametrically squeezed
baths at the detector position, the retarded (dissipation) kernel of the
massive field with its Bessel memory tail, and the bath-level
fluctuation-dissipation relation.

The coincident-point Hadamard kernels are UV divergent and must be called
with an active regulator.  Delta-function contact parts of retarded
kernels are never sampled numerically: they are returned as symbolic tags
and consumed analytically by the detector dynamics (local damping plus
frequency renormalization).

Conventions: frequencies carry the initial field mass, w_i = sqrt(k^2 +
m_i^2); k integrals are performed in w_i above threshold, which removes
the Jacobian singularity at k = 0.  Fourier transforms follow
g~(w) = int dt g(t) e^{+i w t}.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import (
    BelowThresholdError,
    CausalityError,
    DomainError,
    ResolutionError,
)
from .gaussian_state import SqueezeParam
from .quadrature import (
    QuadratureConfig,
    bessel_j1,
    coth_half_beta,
    cusp_head,
    fourier_quad,
    omega_coth_half_beta,
)

__all__ = [
    "KernelValue",
    "SqueezeSpectrum",
    "BathSpec",
    "DELTA_PRIME_CONTACT",
    "RetardedMassive",
    "hadamard_massless_coincident",
    "retarded_massive",
    "hadamard_parametric",
    "bath_fdr",
    "coth_expansion",
    "save_spectrum_csv",
    "load_spectrum_csv",
]

SPECTRUM_CSV_HEADER = ("k", "eta_k", "theta_k")


@dataclass(frozen=True)
class KernelValue:
    """Stationary / nonstationary split of a two-point function."""

    stationary: float
    nonstationary: float

    @property
    def total(self) -> float:
        return self.stationary + self.nonstationary


class SqueezeSpectrum:
    """Mode-dependent squeeze parameters eta(k), theta(k) on a k grid.

    Samples are interpolated with monotone cubics (PCHIP); above the last
    grid point the squeeze magnitude extrapolates to zero (high modes are
    barely excited by a finite-energy process), below the first point it
    is held at the first sample.  The angle is interpolated after phase
    unwrapping.
    """

    def __init__(self, k, eta, theta=None):
        k = np.asarray(k, dtype=float)
        eta = np.asarray(eta, dtype=float)
        theta = (
            np.zeros_like(k) if theta is None else np.asarray(theta, dtype=float)
        )
        if k.ndim != 1 or k.size < 2:
            raise DomainError("spectrum needs a 1-d grid with at least 2 points")
        if k.shape != eta.shape or k.shape != theta.shape:
            raise DomainError("k, eta, theta must have matching shapes")
        if np.any(k <= 0) or np.any(np.diff(k) <= 0):
            raise DomainError("k grid must be positive and strictly ascending")
        if not (np.all(np.isfinite(eta)) and np.all(np.isfinite(theta))):
            raise DomainError("spectrum samples must be finite")
        if np.any(eta < 0):
            raise DomainError("eta(k) must be nonnegative")
        self.k = k
        self.eta = eta
        self.theta = theta
        self._eta_interp = PchipInterpolator(k, eta, extrapolate=False)
        self._theta_interp = PchipInterpolator(
            k, np.unwrap(theta), extrapolate=False
        )

    def eta_at(self, k):
        k = np.asarray(k, dtype=float)
        out = self._eta_interp(np.clip(k, self.k[0], self.k[-1]))
        out = np.where(k > self.k[-1], 0.0, out)
        return np.maximum(out, 0.0)

    def theta_at(self, k):
        k = np.asarray(k, dtype=float)
        out = self._theta_interp(np.clip(k, self.k[0], self.k[-1]))
        return np.where(k > self.k[-1], 0.0, out)

    def check_resolution(
        self, quad: QuadratureConfig | None = None, mass_i: float = 0.0
    ) -> None:
        """Fail if the grid would truncate significant squeezing.

        A spectrum still sizeable at its largest k is acceptable when the
        quadrature regulator suppresses all frequencies beyond the grid,
        otherwise the zero extrapolation would cut a cliff into the
        integrands.
        """
        if self.k.size < 8:
            raise ResolutionError("squeeze spectrum grid has fewer than 8 points")
        peak = float(np.max(self.eta))
        if peak == 0.0 or self.eta[-1] <= 1e-2 * peak:
            return
        if quad is not None:
            w_max = math.hypot(float(self.k[-1]), mass_i)
            if quad.cutoff is not None and quad.cutoff <= w_max:
                return
            if quad.epsilon * w_max >= 30.0:
                return
        raise ResolutionError(
            "squeeze spectrum is not resolved: eta at the largest k is "
            f"{self.eta[-1]:.3e} (> 1% of the peak {peak:.3e}); extend the "
            "k grid (or regulate below it) so the zero extrapolation is "
            "harmless"
        )


@dataclass(frozen=True)
class BathSpec:
    """Scalar-field bath: temperature, squeeze configuration, mass profile.

    ``squeeze`` is ``None`` (plain thermal), a :class:`SqueezeParam`
    (mode-independent constant) or a :class:`SqueezeSpectrum`
    (parametric process).  ``beta = inf`` is the zero-temperature bath.
    """

    beta: float
    squeeze: SqueezeParam | SqueezeSpectrum | None = None
    mass_i: float = 0.0
    mass_f: float = 0.0

    def __post_init__(self):
        if not self.beta > 0:
            raise DomainError("inverse temperature must be positive")
        if self.mass_i < 0 or self.mass_f < 0:
            raise DomainError("field masses must be nonnegative")

    @property
    def is_parametric(self) -> bool:
        return isinstance(self.squeeze, SqueezeSpectrum)

    @property
    def is_massless(self) -> bool:
        return self.mass_i == 0.0 and self.mass_f == 0.0

    def constant_squeeze(self) -> SqueezeParam:
        if isinstance(self.squeeze, SqueezeSpectrum):
            raise DomainError("bath carries a squeeze spectrum, not a constant")
        return self.squeeze if self.squeeze is not None else SqueezeParam(0.0, 0.0)


# ---------------------------------------------------------------------------
# coincident-point Hadamard kernels

_MEASURE_NORM = 1.0 / (8.0 * math.pi**2)  # (dw/2pi)(w/4pi) -> w dw / 8 pi^2


def _massless_base(beta: float, quad: QuadratureConfig):
    def base(w):
        return _MEASURE_NORM * omega_coth_half_beta(w, beta) * quad.damping(w)

    return base


def _massive_base(beta: float, mass_i: float, quad: QuadratureConfig):
    if mass_i == 0.0:
        return _massless_base(beta, quad)

    def base(w):
        w = np.asarray(w, dtype=float)
        kappa = np.sqrt(np.maximum(w * w - mass_i * mass_i, 0.0))
        return (
            _MEASURE_NORM * kappa * coth_half_beta(w, beta) * quad.damping(w)
        )

    return base


def hadamard_massless_coincident(
    bath: BathSpec, t: float, t_prime: float, quad: QuadratureConfig
) -> KernelValue:
    """Hadamard function of the massless squeezed thermal field at x = 0.

    stationary  = cosh 2eta  int (dw/2pi)(w/4pi) coth(bw/2) 2cos w(t-t')
    nonstationary = -sinh 2eta int (dw/2pi)(w/4pi) coth(bw/2) 2cos(w(t+t') - theta)

    UV divergent at coincidence: the quadrature config must carry a hard
    cutoff or an exponential regulator.
    """
    if t < 0 or t_prime < 0:
        raise DomainError("kernel times must be >= 0")
    if not bath.is_massless:
        raise DomainError("hadamard_massless_coincident requires a massless bath")
    sq = bath.constant_squeeze()
    quad.require_regulator("the coincident-point Hadamard kernel")

    base = _massless_base(bath.beta, quad)
    upper = quad.upper()
    opts = dict(rel_tol=quad.rel_tol, abs_tol=quad.abs_tol, limit=quad.max_subdivisions)

    stat_cos, _ = fourier_quad(base, t - t_prime, "cos", 0.0, upper, **opts)
    stationary = sq.cosh2eta * 2.0 * stat_cos

    ns_cos, _ = fourier_quad(base, t + t_prime, "cos", 0.0, upper, **opts)
    ns_sin, _ = fourier_quad(base, t + t_prime, "sin", 0.0, upper, **opts)
    # cos(w(t+t') - theta) = cos(w(t+t')) cos(theta) + sin(w(t+t')) sin(theta)
    nonstationary = -sq.sinh2eta * 2.0 * (
        math.cos(sq.theta) * ns_cos + math.sin(sq.theta) * ns_sin
    )
    return KernelValue(stationary=stationary, nonstationary=nonstationary)


DELTA_PRIME_CONTACT = "delta_prime_contact"


class RetardedMassive(NamedTuple):
    """Retarded kernel of the massive field at coincident spatial points.

    ``contact`` tags the -(1/2pi) theta(tau) delta'(tau) part, which is
    consumed analytically (local damping + frequency renormalization) and
    never sampled; ``tail`` is the smooth memory part
    -(1/4pi)(m/tau) J1(m tau).
    """

    contact: str
    tail: float


def retarded_massive(tau: float, mass: float) -> RetardedMassive:
    """Smooth memory part of the massive retarded kernel at separation tau.

    The massless limit removes the Bessel tail entirely, reproducing the
    purely local kernel of the massless-bath equation of motion.
    """
    if tau <= 0:
        raise CausalityError("retarded kernel requires tau > 0")
    if mass < 0:
        raise DomainError("mass must be nonnegative")
    if mass == 0.0:
        return RetardedMassive(DELTA_PRIME_CONTACT, 0.0)
    tail = -(mass / (4.0 * math.pi * tau)) * bessel_j1(mass * tau)
    return RetardedMassive(DELTA_PRIME_CONTACT, float(tail))


def hadamard_parametric(
    bath: BathSpec, t: float, t_prime: float, quad: QuadratureConfig
) -> KernelValue:
    """Hadamard function of the parametric bath for t, t' past the process.

    Times are measured from the end of the parametric process.  The
    isotropic k integral is performed in w_i = sqrt(k^2 + m_i^2) above
    threshold, with stationary weight coth(b w_i/2) cosh 2eta_k and
    nonstationary weight -coth(b w_i/2) sinh 2eta_k cos(w_i(t+t') -
    theta_k).
    """
    if t < 0 or t_prime < 0:
        raise DomainError("kernel times must be >= 0 (origin at the process end)")
    if not isinstance(bath.squeeze, SqueezeSpectrum):
        raise DomainError("hadamard_parametric requires a squeeze spectrum")
    spectrum = bath.squeeze
    spectrum.check_resolution(quad, bath.mass_i)
    quad.require_regulator("the coincident-point Hadamard kernel")

    base = _massive_base(bath.beta, bath.mass_i, quad)
    mass_i = bath.mass_i

    def kappa(w):
        w = np.asarray(w, dtype=float)
        return np.sqrt(np.maximum(w * w - mass_i * mass_i, 0.0))

    def ch2(w):
        return np.cosh(2.0 * spectrum.eta_at(kappa(w)))

    def sh2(w):
        return np.sinh(2.0 * spectrum.eta_at(kappa(w)))

    def theta(w):
        return spectrum.theta_at(kappa(w))

    a = mass_i
    upper = quad.upper()
    opts = dict(rel_tol=quad.rel_tol, abs_tol=quad.abs_tol, limit=quad.max_subdivisions)

    stat, _ = fourier_quad(
        lambda w: base(w) * ch2(w), t - t_prime, "cos", a, upper,
        head=cusp_head(a, abs(t - t_prime)), **opts
    )
    ns_cos, _ = fourier_quad(
        lambda w: base(w) * sh2(w) * np.cos(theta(w)), t + t_prime, "cos", a, upper,
        head=cusp_head(a, t + t_prime), **opts
    )
    ns_sin, _ = fourier_quad(
        lambda w: base(w) * sh2(w) * np.sin(theta(w)), t + t_prime, "sin", a, upper,
        head=cusp_head(a, t + t_prime), **opts
    )
    return KernelValue(
        stationary=2.0 * stat, nonstationary=-2.0 * (ns_cos + ns_sin)
    )


def bath_fdr(omega: float, bath: BathSpec) -> tuple[float, float]:
    """Both sides of the bath-level fluctuation-dissipation relation.

    lhs: stationary Hadamard transform (kappa/4pi) coth(b|w|/2) cosh 2eta_kappa,
    kappa = sqrt(w^2 - m_i^2).
    rhs: sgn(w) coth(bw/2) cosh 2eta_kappa Im G_R0 with Im G_R0 = kappa/4pi
    on the positive-frequency branch, so both sides are even in w.

    Below the threshold |w| <= m_i the retarded transform has no imaginary
    part and the relation is empty; such frequencies are rejected.
    """
    aw = abs(omega)
    if aw <= bath.mass_i:
        raise BelowThresholdError(
            f"|omega| = {aw} is at or below the field-mass threshold {bath.mass_i}"
        )
    kappa = math.sqrt(omega * omega - bath.mass_i * bath.mass_i)
    if isinstance(bath.squeeze, SqueezeSpectrum):
        ch2 = float(np.cosh(2.0 * bath.squeeze.eta_at(kappa)))
    else:
        ch2 = bath.constant_squeeze().cosh2eta
    coth_abs = float(coth_half_beta(aw, bath.beta))
    im_gr0 = kappa / (4.0 * math.pi)

    lhs = im_gr0 * coth_abs * ch2
    sgn = 1.0 if omega > 0 else -1.0
    coth_signed = sgn * float(coth_half_beta(omega, bath.beta))
    rhs = coth_signed * ch2 * im_gr0
    return lhs, rhs


def coth_expansion(x: float, n_max: int) -> float:
    """Partial geometric expansion coth(x) ~ 1 + 2 sum_{n<=n_max} e^{-2nx}.

    In the thermal variable x = beta w / 2 the terms are the Boltzmann
    factors e^{-n beta w}.  Converges geometrically; x <= 0 diverges.
    """
    if x <= 0:
        raise DomainError("coth expansion diverges for x <= 0")
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    if n_max == 0:
        return 1.0
    r = math.exp(-2.0 * x)
    if r == 0.0:
        return 1.0
    return 1.0 + 2.0 * r * (1.0 - r**n_max) / (1.0 - r)


# ---------------------------------------------------------------------------
# spectrum exchange format: CSV with header k,eta_k[,theta_k]


def save_spectrum_csv(spectrum: SqueezeSpectrum, path) -> None:
    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(SPECTRUM_CSV_HEADER)
        for k, eta, theta in zip(spectrum.k, spectrum.eta, spectrum.theta):
            writer.writerow([f"{k:.16e}", f"{eta:.16e}", f"{theta:.16e}"])


def load_spectrum_csv(path) -> SqueezeSpectrum:
    path = Path(path)
    with path.open("r", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or header[0].strip() != "k":
            raise DomainError(f"{path}: expected a header row starting with 'k'")
        rows = [row for row in reader if row]
    if not rows:
        raise DomainError(f"{path}: no spectrum samples")
    data = np.array([[float(cell) for cell in row] for row in rows])
    if data.shape[1] == 2:
        return SqueezeSpectrum(data[:, 0], data[:, 1])
    if data.shape[1] == 3:
        return SqueezeSpectrum(data[:, 0], data[:, 1], data[:, 2])
    raise DomainError(f"{path}: expected 2 or 3 columns, got {data.shape[1]}")
