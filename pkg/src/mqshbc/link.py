"""Coupled-inductor link: loop currents, voltage gain and S21.

A source of EMF ``Vi`` behind ``Z_S`` drives the transmitter inductance
``L_tx``; the receiver inductance ``L_rx`` is closed by ``Z_L`` and coupled
through the mutual inductance ``M``.  In phasor form::

    I_tx = Vi / (Z_S + w^2 M^2 / (j w L_rx + Z_L) + j w L_tx)
    I_rx = j w M I_tx / (j w L_rx + Z_L)
    Vo/Vi = j w M Z_L / ((j w L_tx + Z_S)(j w L_rx + Z_L) + w^2 M^2)

Every evaluation function accepts scalar or array frequencies.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .constants import TWO_PI
from .errors import ConventionError, InvariantViolation, SingularityError, ValidationError

DEFAULT_Z0 = 50.0
# output impedance of a practical buffer standing in for "Z_S -> 0"
DEFAULT_LOW_SOURCE_RESISTANCE = 1.0


class TerminationKind(str, enum.Enum):
    RESISTIVE = "resistive"
    COMPLEX = "complex"
    CAPACITIVE = "capacitive"
    OPEN = "open"


class Case(str, enum.Enum):
    VNA_50 = "vna_50"
    LOW_SOURCE = "low_source"
    CAPACITIVE_LOAD = "capacitive_load"
    LOW_SOURCE_CAPACITIVE_LOAD = "low_source_capacitive_load"


@dataclass(frozen=True)
class Termination:
    """Source or load impedance.

    resistive: ``R``; complex: ``R + jX``; capacitive: ``1/(j w C)``;
    open: infinite impedance.
    """

    kind: TerminationKind
    resistance: float = 0.0
    reactance: float = 0.0
    capacitance: float = None

    def __post_init__(self):
        object.__setattr__(self, "kind", TerminationKind(self.kind))
        if not self.resistance >= 0.0:
            raise InvariantViolation("resistance", f"must be >= 0, got {self.resistance!r}")
        if self.kind is TerminationKind.CAPACITIVE and not (self.capacitance or 0.0) > 0.0:
            raise InvariantViolation("capacitance", f"must be > 0, got {self.capacitance!r}")

    @classmethod
    def resistive(cls, resistance):
        return cls(TerminationKind.RESISTIVE, resistance)

    @classmethod
    def complex(cls, resistance, reactance):
        return cls(TerminationKind.COMPLEX, resistance, reactance)

    @classmethod
    def capacitive(cls, capacitance):
        return cls(TerminationKind.CAPACITIVE, capacitance=capacitance)

    @classmethod
    def open(cls):
        return cls(TerminationKind.OPEN)

    def impedance(self, frequency):
        f = np.asarray(frequency, dtype=float)
        if self.kind is TerminationKind.RESISTIVE:
            z = np.full(f.shape, self.resistance, dtype=complex)
        elif self.kind is TerminationKind.COMPLEX:
            z = np.full(f.shape, complex(self.resistance, self.reactance))
        elif self.kind is TerminationKind.CAPACITIVE:
            z = 1.0 / (1j * TWO_PI * f * self.capacitance)
        else:
            z = np.full(f.shape, complex(np.inf, 0.0))
        return z


@dataclass(frozen=True)
class LinkModel:
    """Two coupled inductors with their terminations."""

    l_tx: float
    l_rx: float
    mutual: float
    source: Termination
    load: Termination

    def __post_init__(self):
        if not self.l_tx > 0.0:
            raise InvariantViolation("l_tx", f"must be > 0, got {self.l_tx!r}")
        if not self.l_rx > 0.0:
            raise InvariantViolation("l_rx", f"must be > 0, got {self.l_rx!r}")
        if self.mutual**2 > self.l_tx * self.l_rx * (1.0 + 1e-12):
            raise InvariantViolation("mutual", f"M^2 exceeds L_tx L_rx (M = {self.mutual!r})")
        if self.source.kind is TerminationKind.OPEN:
            raise InvariantViolation("source", "an open source delivers no current")

    def with_mutual(self, mutual):
        return LinkModel(self.l_tx, self.l_rx, mutual, self.source, self.load)

    def swapped(self):
        """Receiver and transmitter exchanged (with their terminations)."""
        return LinkModel(self.l_rx, self.l_tx, self.mutual, self.load, self.source)


@dataclass(frozen=True)
class FrequencyResponse:
    frequencies: np.ndarray
    gain: np.ndarray
    tx_current: np.ndarray
    rx_current: np.ndarray
    s21: np.ndarray = None

    def __post_init__(self):
        f = np.asarray(self.frequencies)
        if not (np.all(f > 0) and np.all(np.diff(f) > 0)):
            raise ValidationError("frequencies must be positive and strictly increasing")
        n = f.shape
        for name in ("gain", "tx_current", "rx_current", "s21"):
            arr = getattr(self, name)
            if arr is not None and np.shape(arr) != n:
                raise ValidationError(f"{name} has shape {np.shape(arr)}, expected {n}")


def _omega(frequency):
    f = np.asarray(frequency, dtype=float)
    if not np.all(f > 0.0):
        raise ValidationError(f"frequency must be positive, got {frequency!r}")
    return f, TWO_PI * f


def _determinant(link, f, w, zs, zl):
    """(Z_S + j w L_tx)(Z_L + j w L_rx) + w^2 M^2, checked for singularity."""
    a = zs + 1j * w * link.l_tx
    b = zl + 1j * w * link.l_rx
    coupling = (w * link.mutual) ** 2
    det = a * b + coupling
    bad = np.abs(det) <= 1e-13 * (np.abs(a) * np.abs(b) + coupling)
    if np.any(bad):
        raise SingularityError(float(np.atleast_1d(f)[np.argmax(np.atleast_1d(bad))]))
    return det


def currents(link, frequency):
    """Loop currents per volt of source EMF.

    Returns ``(tx_current, rx_current)``.  The closed form is the common
    denominator of the two harmonic solutions, so it stays finite when the
    receiver loop alone is resonant.  An open load carries no current.
    """
    f, w = _omega(frequency)
    zs = link.source.impedance(f)
    if link.load.kind is TerminationKind.OPEN:
        a = zs + 1j * w * link.l_tx
        if np.any(a == 0):
            raise SingularityError(float(np.atleast_1d(f)[0]))
        return (1.0 / a)[()], np.zeros_like(a)[()]
    zl = link.load.impedance(f)
    det = _determinant(link, f, w, zs, zl)
    return ((zl + 1j * w * link.l_rx) / det)[()], (1j * w * link.mutual / det)[()]


def voltage_gain(link, frequency):
    """Complex voltage transfer ``Vo/Vi`` across the load."""
    f, w = _omega(frequency)
    zs = link.source.impedance(f)
    if link.load.kind is TerminationKind.OPEN:
        # Z_L -> infinity limit
        return (1j * w * link.mutual / (zs + 1j * w * link.l_tx))[()]
    zl = link.load.impedance(f)
    det = _determinant(link, f, w, zs, zl)
    return (1j * w * link.mutual * zl / det)[()]


# Closed forms for the four termination cases.

def gain_matched(frequency, l, mutual, z0):
    """Identical coils, ``Z_S = Z_L = Z_0``."""
    w = TWO_PI * np.asarray(frequency, dtype=float)
    return 1j * w * mutual * z0 / ((1j * w * l + z0) ** 2 + (w * mutual) ** 2)


def gain_low_source(frequency, l_tx, l_rx, mutual, r_load):
    """Ideal voltage drive, ``Z_S = 0``, resistive load."""
    w = TWO_PI * np.asarray(frequency, dtype=float)
    return 1j * w * mutual * r_load / (1j * w * l_tx * (1j * w * l_rx + r_load) + (w * mutual) ** 2)


def gain_capacitive_load(frequency, l_tx, l_rx, mutual, c_load, r_source):
    """Resistive source, purely capacitive load ``C_L``."""
    w = TWO_PI * np.asarray(frequency, dtype=float)
    return 1j * w * mutual / (
        (1.0 - w**2 * l_rx * c_load) * (1j * w * l_tx + r_source) + 1j * w**3 * c_load * mutual**2)


def gain_low_source_capacitive_load(frequency, l_tx, l_rx, mutual, c_load):
    """Ideal voltage drive into a capacitively loaded receiver."""
    w = TWO_PI * np.asarray(frequency, dtype=float)
    return 1j * w * mutual / (
        1j * w * l_tx * (1.0 - w**2 * l_rx * c_load) + 1j * w**3 * c_load * mutual**2)


def specialize(link, case, z0=DEFAULT_Z0, source_resistance=DEFAULT_LOW_SOURCE_RESISTANCE,
               load_capacitance=None):
    """Re-terminate ``link`` for one of the four measurement configurations.

    Parameters
    ----------
    link : LinkModel
        Supplies ``l_tx``, ``l_rx`` and ``mutual``; its terminations are replaced.
    case : Case or str
        ``vna_50``: Z_S = Z_L = z0.  ``low_source``: Z_S = source_resistance,
        Z_L = z0.  ``capacitive_load``: Z_S = z0, Z_L = 1/(j w C_L).
        ``low_source_capacitive_load``: both substitutions.
    source_resistance : float
        Buffer output resistance for the low-source cases; 0 gives the ideal
        voltage drive.
    load_capacitance : float
        ``C_L`` (F); required for the capacitive cases.
    """
    case = Case(case)
    low = case in (Case.LOW_SOURCE, Case.LOW_SOURCE_CAPACITIVE_LOAD)
    capacitive = case in (Case.CAPACITIVE_LOAD, Case.LOW_SOURCE_CAPACITIVE_LOAD)
    if capacitive and load_capacitance is None:
        raise ValidationError(f"case {case.value!r} needs a load capacitance")
    source = Termination.resistive(source_resistance if low else z0)
    load = Termination.capacitive(load_capacitance) if capacitive else Termination.resistive(z0)
    return LinkModel(link.l_tx, link.l_rx, link.mutual, source, load)


def peak_frequency_approx(l, z0):
    """Small-coupling peak of the matched response, ``Z_0 / (2 pi L)``."""
    if not (l > 0.0 and z0 > 0.0):
        raise ValidationError("inductance and reference impedance must be positive")
    return z0 / (TWO_PI * l)


def resonance_frequency(l, c):
    """LC resonance ``1 / (2 pi sqrt(L C))``."""
    if not (l > 0.0 and c > 0.0):
        raise ValidationError("inductance and capacitance must be positive")
    return 1.0 / (TWO_PI * math.sqrt(l * c))


def infer_load_capacitance(f_res, l):
    """Capacitance that resonates with ``l`` at ``f_res``."""
    if not (f_res > 0.0 and l > 0.0):
        raise ValidationError("frequency and inductance must be positive")
    return 1.0 / ((TWO_PI * f_res) ** 2 * l)


def s21_from_gain(gain, source, load):
    """S21 = 2 Vo/Vi for a source EMF behind Z_S = Z_0 into Z_L = Z_0.

    Only defined when both terminations are the same positive resistance;
    anything else raises ``ConventionError`` (use the raw gain instead).
    """
    ok = (source.kind is TerminationKind.RESISTIVE and load.kind is TerminationKind.RESISTIVE
          and source.resistance > 0.0 and source.resistance == load.resistance)
    if not ok:
        raise ConventionError("S21 needs equal resistive source and load references; "
                              "use voltage_gain for other terminations")
    return 2.0 * np.asarray(gain)[()]


def s21(link, frequency):
    """Transmission coefficient of the link between matched reference ports."""
    return s21_from_gain(voltage_gain(link, frequency), link.source, link.load)


def frequency_response(link, frequencies):
    """Gain, currents and (when defined) S21 over a frequency grid."""
    f = np.asarray(frequencies, dtype=float)
    gain = np.atleast_1d(voltage_gain(link, f))
    itx, irx = (np.atleast_1d(x) for x in currents(link, f))
    try:
        s = s21_from_gain(gain, link.source, link.load)
    except ConventionError:
        s = None
    return FrequencyResponse(f, gain, itx, irx, s)


def log_grid(fmin, fmax, points):
    if not (0.0 < fmin < fmax) or points < 2:
        raise ValidationError("need 0 < fmin < fmax and at least 2 points")
    return np.logspace(math.log10(fmin), math.log10(fmax), int(points))


def find_peak(func, fmin, fmax, points=400):
    """Frequency maximising ``|func(f)|`` on [fmin, fmax].

    A log-spaced scan locates the best bracket, then bounded Brent
    minimisation in log-frequency refines it.
    """
    grid = log_grid(fmin, fmax, points)
    mag = np.abs(np.atleast_1d(func(grid)))
    i = int(np.argmax(mag))
    lo = math.log10(grid[max(i - 1, 0)])
    hi = math.log10(grid[min(i + 1, len(grid) - 1)])
    res = minimize_scalar(lambda x: -abs(complex(np.asarray(func(10.0**x)))),
                          bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    return float(10.0 ** res.x)


def peak_frequency(link, fmin=1e3, fmax=1e10):
    """Numerical argmax of ``|voltage_gain|``."""
    return find_peak(lambda f: voltage_gain(link, f), fmin, fmax)
