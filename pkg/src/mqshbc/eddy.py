"""Eddy-current attenuation of an axial AC magnetic field in a tissue cylinder.

An infinite homogeneous cylinder of radius ``b`` sits in a uniform axial
field ``H_0``.  The axial field diffuses inward as::

    H_z(r)   = H_0 I0(g r) / I0(g b)
    J_phi(r) = -H_0 g I1(g r) / I0(g b)
    g^2      = j w mu0 (sigma_eff + j w eps0 eps')     (displacement term optional)

This is an analytic trend surrogate for how tissue conductivity attenuates
magnetic coupling, not a field solution of a body model.  Results are per unit
``H_0`` (1 A/m).

With the displacement term the cylinder is a lossy dielectric resonator and
``|H_z(0)|`` can exceed ``H_0`` above ~100 MHz in muscle; it is therefore off
by default, leaving the pure diffusion (eddy-current) problem.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .constants import EPS0, MU0, TWO_PI
from .dielectrics import evaluate_cole_cole
from .errors import ConsistencyError, FrequencyRangeError, NumericalError, ValidationError
from .special import bessel_i

LOW_FREQUENCY_LIMIT = 0.3  # |g b| below which the leading-order current is valid
QUAD_RTOL = 1e-10
MIN_SAMPLES = 16
MONOTONE_BAND = (1e4, 1e9)


@dataclass(frozen=True)
class CylinderModel:
    """Homogeneous tissue cylinder.

    Parameters
    ----------
    radius : float
        Cylinder (arm) radius b in metres.
    tissue : ColeColeModel
    sigma_override : float, optional
        Replaces the effective conductivity (``0`` removes all conduction).
    displacement : bool
        Include ``j w eps0 eps'`` in the propagation constant.
    """

    radius: float
    tissue: object
    sigma_override: float = None
    displacement: bool = False

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValidationError(f"cylinder radius must be positive, got {self.radius!r}")
        if self.sigma_override is not None and not self.sigma_override >= 0.0:
            raise ValidationError(f"sigma_override must be >= 0, got {self.sigma_override!r}")

    def material(self, frequency):
        """(sigma_eff, eps_real) at ``frequency``."""
        props = evaluate_cole_cole(self.tissue, frequency)
        sigma = props.sigma_eff if self.sigma_override is None else np.full_like(
            np.asarray(props.sigma_eff, dtype=float), self.sigma_override)
        return sigma, props.eps_real

    def gamma(self, frequency):
        """Complex diffusion constant ``g`` (1/m), Re g >= 0."""
        sigma, eps = self.material(frequency)
        w = TWO_PI * np.asarray(frequency, dtype=float)
        admittivity = sigma + (1j * w * EPS0 * eps if self.displacement else 0.0)
        return np.sqrt(1j * w * MU0 * admittivity)


@dataclass(frozen=True)
class EddyResult:
    frequency: float
    transmission_on_axis: float
    radii: np.ndarray
    current_density: np.ndarray
    power_per_length: float


def _edge_ratio(gamma, r, b, order):
    """I_order(g r) / I0(g b) without overflow."""
    inner = bessel_i(gamma * np.asarray(r, dtype=float), order, scaled=True)[order]
    edge = bessel_i(gamma * b, 0, scaled=True)[0]
    return inner / edge * np.exp(gamma.real * (np.asarray(r, dtype=float) - b))


def _conduction_current(g, sigma, eps, w, r, b, displacement):
    total = -g * _edge_ratio(g, r, b, 1)
    if displacement:
        total = total * sigma / (sigma + 1j * w * EPS0 * eps)
    return total


def current_density(cyl, frequency, r):
    """Conduction current density J_phi (A/m^2 per A/m of H_0), complex.

    Equals the total curl-H current without the displacement term; with it,
    the conduction share ``sigma / (sigma + j w eps)`` is returned.
    """
    sigma, eps = (float(x) for x in cyl.material(frequency))
    if sigma == 0.0:
        return np.zeros(np.shape(r), dtype=complex)[()]
    g = complex(cyl.gamma(frequency))
    return _conduction_current(g, sigma, eps, TWO_PI * frequency, r, cyl.radius, cyl.displacement)[()]


def axial_field(cyl, frequency, r):
    """H_z(r) / H_0, complex."""
    g = complex(cyl.gamma(frequency))
    return _edge_ratio(g, r, cyl.radius, 0)[()]


def _power(cyl, frequency, sigma, eps, g):
    b = cyl.radius
    w = TWO_PI * frequency

    def integrand(r):
        j = complex(_conduction_current(g, sigma, eps, w, r, b, cyl.displacement))
        return (j.real**2 + j.imag**2) / (2.0 * sigma) * TWO_PI * r

    depth = 1.0 / g.real if g.real > 0 else math.inf
    breaks = [b - k * depth for k in (1.0, 3.0, 10.0, 30.0) if b - k * depth > 0.0]
    value, _ = quad(integrand, 0.0, b, epsabs=0.0, epsrel=QUAD_RTOL, limit=400, points=breaks or None)
    return value


def field_profile(cyl, frequency, samples=64):
    """Transmission, sampled current profile and dissipated power.

    Parameters
    ----------
    cyl : CylinderModel
    frequency : float
        Hz, positive.
    samples : int
        Number of radii (uniform on [0, b]) in the returned profile; >= 16.

    Returns
    -------
    EddyResult
        ``current_density`` holds ``|J_phi|``; ``power_per_length`` is the
        time-averaged loss per metre of cylinder per (A/m)^2 of ``H_0``.
    """
    if not frequency > 0.0:
        raise FrequencyRangeError(f"frequency must be positive, got {frequency!r}")
    if samples < MIN_SAMPLES:
        raise ValidationError(f"need at least {MIN_SAMPLES} samples, got {samples!r}")
    sigma, eps = (float(x) for x in cyl.material(frequency))
    radii = np.linspace(0.0, cyl.radius, samples)
    if sigma == 0.0 and not cyl.displacement:
        return EddyResult(frequency, 1.0, radii, np.zeros(samples), 0.0)
    g = complex(cyl.gamma(frequency))
    transmission = float(abs(axial_field(cyl, frequency, 0.0)))
    profile = np.abs(np.atleast_1d(current_density(cyl, frequency, radii)))
    power = _power(cyl, frequency, sigma, eps, g) if sigma > 0.0 else 0.0
    if not (math.isfinite(transmission) and math.isfinite(power) and np.all(np.isfinite(profile))):
        raise NumericalError(f"non-finite eddy solution at f = {frequency!r} Hz")
    return EddyResult(frequency, transmission, radii, profile, power)


def transmission(cyl, frequency):
    """|H_z(0) / H_0| for scalar or array frequencies (no profile, no power)."""
    g = np.asarray(cyl.gamma(frequency), dtype=complex)
    edge = bessel_i(g * cyl.radius, 0, scaled=True)[0]
    return (np.exp(-g.real * cyl.radius) / np.abs(edge))[()]


def low_frequency_current(cyl, frequency, r):
    """Leading-order |J_phi| = sigma w mu0 r / 2 for |g b| < 0.3."""
    g = complex(cyl.gamma(frequency))
    if abs(g) * cyl.radius >= LOW_FREQUENCY_LIMIT:
        raise FrequencyRangeError(
            f"|g b| = {abs(g) * cyl.radius:.3g} outside the low-frequency limit; use field_profile")
    sigma, _ = cyl.material(frequency)
    return float(sigma) * TWO_PI * frequency * MU0 * np.asarray(r, dtype=float)[()] / 2.0


def attenuation_sweep(cyl, f_grid, samples=64):
    """``field_profile`` over an increasing frequency grid.

    For the diffusion model, transmission must not increase and dissipated
    power must not decrease with frequency inside 10 kHz - 1 GHz; a violation
    raises ``ConsistencyError``.
    """
    f = np.asarray(f_grid, dtype=float)
    if f.ndim != 1 or not np.all(np.diff(f) > 0):
        raise ValidationError("frequency grid must be one-dimensional and strictly increasing")
    results = [field_profile(cyl, float(x), samples) for x in f]
    if not cyl.displacement:
        inside = [r for r in results if MONOTONE_BAND[0] <= r.frequency <= MONOTONE_BAND[1]]
        t = np.array([r.transmission_on_axis for r in inside])
        p = np.array([r.power_per_length for r in inside])
        if np.any(np.diff(t) > 1e-12 * t[1:]) or np.any(np.diff(p) < -1e-9 * p[1:]):
            raise ConsistencyError("eddy transmission/power not monotone in frequency")
    return results
