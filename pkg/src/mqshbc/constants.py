"""Physical constants (SI, CODATA 2018)."""

import math

C0 = 299792458.0  # speed of light in vacuum (m/s)
MU0 = 1.25663706212e-6  # vacuum permeability (H/m)
EPS0 = 8.8541878128e-12  # vacuum permittivity (F/m)

TWO_PI = 2.0 * math.pi

# band covered by the tissue models without warnings (Hz)
BAND_MIN = 1e3
BAND_MAX = 1e10

# 14 AWG solid conductor radius (m)
AWG14_RADIUS = 0.8137e-3
