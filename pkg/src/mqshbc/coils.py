"""Self and mutual inductance of circular wire loops.

Loops are thin filaments: the wire radius only enters the self-inductance.
Mutual inductance is available in closed form for coaxial loops (Maxwell's
elliptic-integral formula) and for arbitrary placement by quadrature of the
Neumann double line integral.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .constants import MU0
from .errors import ConsistencyError, GeometryError, ThinWireError, ValidationError
from .special import ellipke

THIN_WIRE_LIMIT = 0.1
DEFAULT_SEGMENTS = 256
_SMALL_K = 1e-2


class AccuracyWarning(UserWarning):
    """Quadrature did not settle between N and 2N segments."""


def _as_vector(v, name):
    arr = np.asarray(v, dtype=float).reshape(-1)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise GeometryError(f"{name} must be a finite 3-vector, got {v!r}")
    return arr


@dataclass(frozen=True, eq=False)
class Loop:
    """Circular loop of ``turns`` coincident turns.

    Parameters
    ----------
    radius : float
        Ring radius (m).
    wire_radius : float
        Conductor radius (m); must be smaller than ``radius``.
    turns : int
    center : array_like, shape (3,)
    axis : array_like, shape (3,)
        Unit normal (right-hand rule sets the current direction).
    """

    radius: float
    wire_radius: float
    turns: int = 1
    center: tuple = (0.0, 0.0, 0.0)
    axis: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        center = _as_vector(self.center, "center")
        axis = _as_vector(self.axis, "axis")
        object.__setattr__(self, "center", tuple(center))
        object.__setattr__(self, "axis", tuple(axis))
        if not self.radius > 0.0:
            raise GeometryError(f"radius must be positive, got {self.radius!r}")
        if not 0.0 < self.wire_radius < self.radius:
            raise GeometryError(f"need 0 < wire_radius < radius, got {self.wire_radius!r}")
        if int(self.turns) != self.turns or self.turns < 1:
            raise GeometryError(f"turns must be a positive integer, got {self.turns!r}")
        if abs(np.linalg.norm(axis) - 1.0) > 1e-9:
            raise GeometryError(f"axis must have unit norm, got |axis| = {np.linalg.norm(axis)!r}")

    def moved(self, center=None, axis=None):
        """Copy of the loop at a new position and/or orientation."""
        return Loop(self.radius, self.wire_radius, self.turns,
                    self.center if center is None else center,
                    self.axis if axis is None else axis)

    def basis(self):
        """Orthonormal (u, v) spanning the loop plane, with u x v = axis."""
        n = np.array(self.axis)
        ref = np.eye(3)[np.argmin(np.abs(n))]
        u = np.cross(n, ref)
        u /= np.linalg.norm(u)
        return u, np.cross(n, u)

    def discretize(self, segments):
        """Midpoints and tangent vectors ``dl`` of ``segments`` equal arcs."""
        phi = 2.0 * np.pi * (np.arange(segments) + 0.5) / segments
        u, v = self.basis()
        c, s = np.cos(phi)[:, None], np.sin(phi)[:, None]
        points = np.array(self.center) + self.radius * (c * u + s * v)
        dl = (2.0 * np.pi * self.radius / segments) * (-s * u + c * v)
        return points, dl


def _min_distance(tx, rx):
    """Closest approach of the two filament circles."""
    p1, _ = tx.discretize(180)
    p2, _ = rx.discretize(180)
    d = np.linalg.norm(p1[:, None, :] - p2[None, :, :], axis=-1)
    i, j = np.unravel_index(np.argmin(d), d.shape)
    u1, v1 = tx.basis()
    u2, v2 = rx.basis()
    c1, c2 = np.array(tx.center), np.array(rx.center)

    def dist(x):
        a = c1 + tx.radius * (math.cos(x[0]) * u1 + math.sin(x[0]) * v1)
        b = c2 + rx.radius * (math.cos(x[1]) * u2 + math.sin(x[1]) * v2)
        return float(np.linalg.norm(a - b))

    start = 2.0 * np.pi * (np.array([i, j]) + 0.5) / 180
    res = minimize(dist, start, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-14})
    return min(res.fun, float(d[i, j]))


@dataclass(frozen=True, eq=False)
class CoilPair:
    """Transmitter and receiver loop; rejects loops whose wires touch or cross."""

    tx: Loop
    rx: Loop

    def __post_init__(self):
        gap = self.min_distance() - (self.tx.wire_radius + self.rx.wire_radius)
        if gap <= 0.0:
            raise GeometryError(f"loops intersect (surface gap {gap:.3g} m)")

    @property
    def _offset_vector(self):
        return np.array(self.rx.center) - np.array(self.tx.center)

    @property
    def separation(self):
        """Centre distance along the transmitter axis (m)."""
        return abs(float(np.dot(self._offset_vector, self.tx.axis)))

    @property
    def lateral_offset(self):
        """Centre distance perpendicular to the transmitter axis (m)."""
        r = self._offset_vector
        return float(np.linalg.norm(r - np.dot(r, self.tx.axis) * np.array(self.tx.axis)))

    @property
    def is_coaxial(self):
        parallel = abs(abs(float(np.dot(self.tx.axis, self.rx.axis))) - 1.0) < 1e-12
        scale = max(self.tx.radius, self.rx.radius)
        return parallel and self.lateral_offset <= 1e-12 * scale

    def min_distance(self):
        if self.is_coaxial:
            return math.hypot(self.tx.radius - self.rx.radius, self.separation)
        return _min_distance(self.tx, self.rx)

    def swapped(self):
        return CoilPair(self.rx, self.tx)


def self_inductance(loop, internal_factor=0.0):
    """Self-inductance of a thin circular loop (H).

    ``mu0 N^2 R (ln(8R/a) - 2 + Y/4)`` with internal-inductance factor ``Y``:
    0 when skin effect expels the internal flux (the default), 1 at DC.
    """
    if not internal_factor >= 0.0:
        raise ValidationError(f"internal-inductance factor must be >= 0, got {internal_factor!r}")
    ratio = loop.wire_radius / loop.radius
    if ratio >= THIN_WIRE_LIMIT:
        raise ThinWireError(f"thin-wire formula needs a/R < {THIN_WIRE_LIMIT}, got {ratio:.4g}")
    return MU0 * loop.turns**2 * loop.radius * (
        math.log(8.0 / ratio) - 2.0 + 0.25 * internal_factor)


def mutual_coaxial(r1, r2, d):
    """Mutual inductance of two coaxial single-turn filaments (H).

    Maxwell's formula::

        M = mu0 sqrt(R1 R2) ((2/k - k) K(k) - (2/k) E(k)),
        k^2 = 4 R1 R2 / ((R1 + R2)^2 + d^2)

    with K, E from the AGM.  For k < 0.01 the cancellation-free series
    ``pi k^3 / 16 (1 + 3k^2/4 + 75k^4/128 + 245k^6/512)`` is used instead.

    Raises
    ------
    GeometryError
        For coincident filaments (d = 0 and R1 = R2), where M diverges.
    """
    if not (r1 > 0.0 and r2 > 0.0):
        raise GeometryError(f"radii must be positive, got {r1!r}, {r2!r}")
    d = abs(d)
    if d == 0.0 and r1 == r2:
        raise GeometryError("coincident filaments: mutual inductance diverges")
    k2 = 4.0 * r1 * r2 / ((r1 + r2) ** 2 + d * d)
    k = math.sqrt(k2)
    scale = MU0 * math.sqrt(r1 * r2)
    if k < _SMALL_K:
        return scale * math.pi * k**3 / 16.0 * (
            1.0 + k2 * (0.75 + k2 * (75.0 / 128.0 + k2 * 245.0 / 512.0)))
    K, E = ellipke(k)
    return scale * ((2.0 / k - k) * K - (2.0 / k) * E)


def _neumann_sum(tx, rx, segments):
    p1, dl1 = tx.discretize(segments)
    p2, dl2 = rx.discretize(segments)
    rows = []
    chunk = max(1, 2_000_000 // segments)
    for start in range(0, segments, chunk):
        sl = slice(start, start + chunk)
        dist = np.linalg.norm(p1[sl, None, :] - p2[None, :, :], axis=-1)
        rows.append(((dl1[sl] @ dl2.T) / dist).sum(axis=1))
    # fixed-order compensated sum keeps results bitwise reproducible
    total = math.fsum(np.concatenate(rows))
    return MU0 / (4.0 * math.pi) * tx.turns * rx.turns * total


def mutual_neumann(pair, segments=DEFAULT_SEGMENTS, check=True):
    """Mutual inductance of two arbitrarily placed loops (H), signed.

    Midpoint quadrature of the Neumann integral
    ``mu0/(4 pi) oint oint dl1 . dl2 / |r1 - r2|`` using ``segments`` points
    per loop.  For smooth closed loops the rule converges geometrically.
    With ``check`` the result is compared against ``2 * segments`` and an
    ``AccuracyWarning`` is issued when they differ by more than 1 %.
    """
    if segments < 64:
        raise ValueError(f"need at least 64 segments, got {segments!r}")
    m = _neumann_sum(pair.tx, pair.rx, segments)
    if check:
        fine = _neumann_sum(pair.tx, pair.rx, 2 * segments)
        # absolute floor covers geometries where M vanishes by symmetry
        floor = 1e-9 * MU0 * math.sqrt(pair.tx.radius * pair.rx.radius) * pair.tx.turns * pair.rx.turns
        if abs(fine - m) > 0.01 * abs(fine) + floor:
            warnings.warn(f"Neumann quadrature unconverged: {m!r} vs {fine!r} at 2x segments",
                          AccuracyWarning, stacklevel=2)
    return m


def mutual_inductance(pair, segments=DEFAULT_SEGMENTS):
    """Closed form for coaxial pairs, Neumann quadrature otherwise."""
    if pair.is_coaxial:
        sign = math.copysign(1.0, float(np.dot(pair.tx.axis, pair.rx.axis)))
        return sign * pair.tx.turns * pair.rx.turns * mutual_coaxial(
            pair.tx.radius, pair.rx.radius, pair.separation)
    return mutual_neumann(pair, segments)


def coupling_coefficient(pair, internal_factor=0.0, segments=DEFAULT_SEGMENTS):
    """k = M / sqrt(L_tx L_rx); |k| <= 1 is enforced."""
    m = mutual_inductance(pair, segments)
    k = m / math.sqrt(self_inductance(pair.tx, internal_factor) * self_inductance(pair.rx, internal_factor))
    if abs(k) > 1.0 + 1e-6:
        raise ConsistencyError(f"coupling coefficient {k!r} exceeds 1")
    return k


def demagnetizing_factor(length_to_diameter):
    """Axial demagnetizing factor of a spheroid with the given aspect ratio."""
    m = float(length_to_diameter)
    if not m > 0.0:
        raise ValueError(f"aspect ratio must be positive, got {m!r}")
    if abs(m - 1.0) < 1e-6:
        return 1.0 / 3.0
    if m > 1.0:
        root = math.sqrt(m * m - 1.0)
        return (m / root * math.log(m + root) - 1.0) / (m * m - 1.0)
    root = math.sqrt(1.0 - m * m)
    return (1.0 - m / root * math.acos(m)) / (1.0 - m * m)


def rod_core_scaling(mu_r, length_to_diameter):
    """Effective-permeability multiplier of a magnetic rod core.

    ``mu_eff = mu_r / (1 + D (mu_r - 1))`` with the prolate-spheroid
    demagnetizing factor ``D``.  This is a trend model for how a high-mu
    body would enhance coupling (multiply M by it), not a field solution;
    it saturates at ``1/D`` for large ``mu_r``.
    """
    if not mu_r >= 1.0:
        raise ValueError(f"mu_r must be >= 1, got {mu_r!r}")
    D = demagnetizing_factor(length_to_diameter)
    return mu_r / (1.0 + D * (mu_r - 1.0))
