"""Dielectric dispersion of body tissues and derived propagation quantities.

Tissues are described by a multi-term Cole-Cole model::

    eps(w) = eps_inf + sum_n d_eps_n / (1 + (j w tau_n)**(1 - alpha_n)) + sigma_i / (j w eps0)

All loss (ionic and dielectric) is folded into one effective conductivity,
``sigma_eff = sigma_i + w eps0 eps''``, while ``eps_real`` carries only the
real part.  Every routine accepts scalar or array frequencies.
"""

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from .constants import BAND_MAX, BAND_MIN, C0, EPS0, MU0, TWO_PI
from .errors import FrequencyRangeError, InvariantViolation, ValidationError


class OutOfBandWarning(UserWarning):
    """Evaluation outside the band the tissue parameters were fitted for."""


class Regime(str, enum.Enum):
    MQS = "MQS"
    TRANSITIONAL = "transitional"
    EM = "EM"

    def __str__(self):
        return self.value


class InterpolationDomain(str, enum.Enum):
    LINEAR = "linear-in-frequency"
    LOG = "linear-in-log-frequency"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ColeColeTerm:
    delta_eps: float
    tau: float
    alpha: float


@dataclass(frozen=True)
class ColeColeModel:
    """Cole-Cole dispersion parameters for one tissue.

    Parameters
    ----------
    tissue_name : str
    eps_inf : float
        Relative permittivity at infinite frequency.
    terms : tuple of ColeColeTerm
        Dispersion terms (delta_eps, tau in seconds, alpha in [0, 1)).
    sigma_ionic : float
        Static ionic conductivity (S/m).
    """

    tissue_name: str
    eps_inf: float
    terms: tuple = ()
    sigma_ionic: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(ColeColeTerm(*t) if not isinstance(t, ColeColeTerm) else t
                                                for t in self.terms))
        if not self.eps_inf >= 1.0:
            raise InvariantViolation("eps_inf", f"must be >= 1, got {self.eps_inf!r}")
        if not self.sigma_ionic >= 0.0:
            raise InvariantViolation("sigma_ionic", f"must be >= 0, got {self.sigma_ionic!r}")
        for n, term in enumerate(self.terms, start=1):
            if not term.delta_eps >= 0.0:
                raise InvariantViolation(f"term.{n}.delta_eps", f"must be >= 0, got {term.delta_eps!r}")
            if not term.tau > 0.0:
                raise InvariantViolation(f"term.{n}.tau", f"must be > 0, got {term.tau!r}")
            if not 0.0 <= term.alpha < 1.0:
                raise InvariantViolation(f"term.{n}.alpha", f"must lie in [0, 1), got {term.alpha!r}")

    def with_sigma(self, sigma_ionic):
        """Copy with a different ionic conductivity."""
        return ColeColeModel(self.tissue_name, self.eps_inf, self.terms, sigma_ionic)

    def complex_permittivity(self, frequency):
        """Dielectric part eps' - j eps'' (ionic conductivity excluded)."""
        omega = TWO_PI * np.asarray(frequency, dtype=float)
        eps = np.full(omega.shape, self.eps_inf, dtype=complex)
        for term in self.terms:
            if term.delta_eps:
                eps = eps + term.delta_eps / (1.0 + (1j * omega * term.tau) ** (1.0 - term.alpha))
        return eps


@dataclass(frozen=True)
class PropagationProperties:
    """Material and plane-wave quantities at one frequency (or an array of them).

    ``skin_depth`` is ``inf`` where ``sigma_eff`` vanishes.
    """

    frequency: np.ndarray
    eps_real: np.ndarray
    eps_imag: np.ndarray
    sigma_eff: np.ndarray
    wavelength_lossless: np.ndarray
    wavelength_lossy: np.ndarray
    skin_depth: np.ndarray
    mu_r: float = 1.0


@dataclass(frozen=True)
class InterpolatedPermittivityModel:
    """Permittivity interpolated between two anchor frequencies.

    Replicates a tissue table that fills the band below ``f_high`` by straight
    interpolation between its end points.  Conductivity comes either from a
    companion Cole-Cole model (``sigma_model``) or from ``sigma_constant``.
    """

    eps_low: float
    f_low: float
    eps_high: float
    f_high: float
    interpolation_domain: InterpolationDomain = InterpolationDomain.LINEAR
    sigma_model: ColeColeModel = field(default=None)
    sigma_constant: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "interpolation_domain", InterpolationDomain(self.interpolation_domain))
        if not 0.0 < self.f_low < self.f_high:
            raise InvariantViolation("f_low", f"need 0 < f_low < f_high, got {self.f_low!r}, {self.f_high!r}")
        if not self.eps_low >= 1.0:
            raise InvariantViolation("eps_low", f"must be >= 1, got {self.eps_low!r}")
        if not self.eps_high >= 1.0:
            raise InvariantViolation("eps_high", f"must be >= 1, got {self.eps_high!r}")
        if not self.sigma_constant >= 0.0:
            raise InvariantViolation("sigma_constant", f"must be >= 0, got {self.sigma_constant!r}")

    @classmethod
    def from_cole_cole(cls, model, f_low=10.0, f_high=10e6, domain=InterpolationDomain.LINEAR,
                       sigma="cole-cole", sigma_constant=0.0):
        """Anchor the interpolation at the Cole-Cole values of ``model``.

        ``sigma`` selects the conductivity source: ``"cole-cole"`` (companion
        model) or ``"constant"`` (``sigma_constant``).
        """
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OutOfBandWarning)
            lo = evaluate_cole_cole(model, f_low)
            hi = evaluate_cole_cole(model, f_high)
        if sigma not in ("cole-cole", "constant"):
            raise ValidationError(f"sigma source must be 'cole-cole' or 'constant', got {sigma!r}")
        return cls(float(lo.eps_real), f_low, float(hi.eps_real), f_high, domain,
                   model if sigma == "cole-cole" else None, sigma_constant)

    def eps_real(self, frequency):
        f = np.asarray(frequency, dtype=float)
        if self.interpolation_domain is InterpolationDomain.LINEAR:
            t = (f - self.f_low) / (self.f_high - self.f_low)
        else:
            t = np.log(f / self.f_low) / np.log(self.f_high / self.f_low)
        # weighted form keeps both end points exact
        return (1.0 - t) * self.eps_low + t * self.eps_high


def _check_frequency(frequency, warn_band=True):
    f = np.asarray(frequency, dtype=float)
    if not np.all(f > 0.0) or not np.all(np.isfinite(f)):
        raise FrequencyRangeError(f"frequency must be positive and finite, got {frequency!r}")
    if warn_band and (np.any(f < BAND_MIN) or np.any(f > BAND_MAX)):
        warnings.warn(f"frequency outside the supported band [{BAND_MIN:g}, {BAND_MAX:g}] Hz",
                      OutOfBandWarning, stacklevel=3)
    return f


def propagation_constant(frequency, eps_real, sigma_eff, mu_r=1.0):
    """Complex propagation constant alpha + j beta of a lossy medium (1/m)."""
    omega = TWO_PI * np.asarray(frequency, dtype=float)
    eps_real = np.asarray(eps_real, dtype=float)
    loss_tangent = np.asarray(sigma_eff, dtype=float) / (omega * EPS0 * eps_real)
    return 1j * omega * np.sqrt(MU0 * mu_r * EPS0 * eps_real) * np.sqrt(1.0 - 1j * loss_tangent)


def _properties(f, eps_real, eps_imag, sigma_eff, mu_r):
    eps_real = np.asarray(eps_real, dtype=float)
    sigma_eff = np.asarray(sigma_eff, dtype=float)
    gamma = propagation_constant(f, eps_real, sigma_eff, mu_r)
    with np.errstate(divide="ignore"):
        skin = np.where(sigma_eff > 0.0, 1.0 / gamma.real, np.inf)
    lossless = C0 / (f * np.sqrt(eps_real * mu_r))
    # sigma_eff = 0 gives beta exactly equal to the lossless wavenumber
    lossy = np.where(sigma_eff > 0.0, TWO_PI / gamma.imag, lossless)
    return PropagationProperties(
        frequency=f[()], eps_real=eps_real[()], eps_imag=np.asarray(eps_imag, dtype=float)[()],
        sigma_eff=sigma_eff[()], wavelength_lossless=lossless[()], wavelength_lossy=lossy[()],
        skin_depth=skin[()], mu_r=mu_r,
    )


def evaluate_cole_cole(model, frequency, mu_r=1.0):
    """Evaluate a Cole-Cole tissue model.

    Parameters
    ----------
    model : ColeColeModel
    frequency : float or array_like
        Frequency in Hz; must be positive.  Values outside 1 kHz - 10 GHz
        emit an ``OutOfBandWarning``.
    mu_r : float
        Relative permeability (tissues are non-magnetic; 1 by default).

    Returns
    -------
    PropagationProperties
    """
    f = _check_frequency(frequency)
    eps = model.complex_permittivity(f)
    eps_imag = -eps.imag
    sigma_eff = model.sigma_ionic + TWO_PI * f * EPS0 * eps_imag
    return _properties(f, eps.real, eps_imag, sigma_eff, mu_r)


def evaluate_interpolated(model, frequency, mu_r=1.0):
    """Evaluate an ``InterpolatedPermittivityModel`` inside its anchor range."""
    f = _check_frequency(frequency, warn_band=False)
    if np.any(f < model.f_low) or np.any(f > model.f_high):
        raise FrequencyRangeError(
            f"frequency outside interpolation range [{model.f_low:g}, {model.f_high:g}] Hz")
    eps_real = model.eps_real(f)
    if model.sigma_model is not None:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OutOfBandWarning)
            companion = evaluate_cole_cole(model.sigma_model, f)
        eps_imag, sigma_eff = companion.eps_imag, companion.sigma_eff
    else:
        eps_imag = np.zeros_like(f)
        sigma_eff = np.full_like(f, model.sigma_constant)
    return _properties(f, eps_real, eps_imag, sigma_eff, mu_r)


def wavelength(model, frequency, variant="lossless", mu_r=1.0):
    """In-tissue wavelength (m): ``c/(f sqrt(eps'))`` or ``2 pi / beta``."""
    if variant not in ("lossless", "lossy"):
        raise ValueError(f"variant must be 'lossless' or 'lossy', got {variant!r}")
    props = _evaluate_any(model, frequency, mu_r)
    return props.wavelength_lossless if variant == "lossless" else props.wavelength_lossy


def skin_depth(model, frequency, mu_r=1.0):
    """Skin depth 1/alpha (m); ``inf`` for a loss-free medium."""
    return _evaluate_any(model, frequency, mu_r).skin_depth


def _evaluate_any(model, frequency, mu_r):
    if isinstance(model, InterpolatedPermittivityModel):
        return evaluate_interpolated(model, frequency, mu_r)
    return evaluate_cole_cole(model, frequency, mu_r)


def classify_regime(props, body_dimension, mqs_factor=10.0, em_factor=1.0):
    """Label the coupling regime from the lossless in-tissue wavelength.

    MQS when ``wavelength >= mqs_factor * body_dimension``, EM when
    ``wavelength <= em_factor * body_dimension``, transitional otherwise.
    Returns a ``Regime`` for scalar input, an object array of them otherwise.
    """
    if not body_dimension > 0.0:
        raise ValueError(f"body_dimension must be positive, got {body_dimension!r}")
    lam = np.asarray(props.wavelength_lossless, dtype=float)
    labels = np.empty(lam.shape, dtype=object)
    # element-wise assignment keeps the enum (np.full would coerce it to str)
    labels[...] = Regime.TRANSITIONAL
    labels[lam <= em_factor * body_dimension] = Regime.EM
    labels[lam >= mqs_factor * body_dimension] = Regime.MQS
    return labels[()] if labels.ndim == 0 else labels
