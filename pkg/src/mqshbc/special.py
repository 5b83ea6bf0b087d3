"""Special functions: complete elliptic integrals and modified Bessel functions.

Elliptic integrals use the arithmetic-geometric mean; the modified Bessel
functions of complex argument combine the power series, Miller's backward
recurrence and the large-argument Hankel expansion.

References
----------
Abramowitz & Stegun, 17.6 (AGM) and 9.6-9.7 (modified Bessel functions).
DLMF 10.25.2 (series), 10.35.5 (generating-function sum), 10.40.5 (asymptotics).
"""

import math

import numpy as np

AGM_RTOL = 1e-15

# |z| at or above which the asymptotic expansion is used
BESSEL_ASYMPTOTIC_SWITCH = 20.0
# the power series loses about (|z| - Re z) / ln(10) digits to cancellation
_SERIES_CANCELLATION_LIMIT = 6.0


def ellipke(k):
    """Complete elliptic integrals K(k) and E(k) by the AGM iteration.

    Parameters
    ----------
    k : float
        Modulus, 0 <= k < 1 (note: modulus, not the parameter m = k**2).

    Returns
    -------
    (K, E) : tuple of float
    """
    k = float(k)
    if not 0.0 <= k < 1.0:
        raise ValueError(f"elliptic modulus must lie in [0, 1), got {k!r}")
    a = 1.0
    b = math.sqrt((1.0 - k) * (1.0 + k))
    c = k
    # E = K * (1 - sum 2**(n-1) c_n**2), c_0 = k
    csum = 0.5 * c * c
    weight = 0.5
    for _ in range(64):
        if abs(a - b) <= AGM_RTOL * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        weight *= 2.0
        csum += weight * c * c
    else:  # pragma: no cover - AGM converges quadratically
        raise ArithmeticError("AGM iteration did not converge")
    K = math.pi / (2.0 * a)
    return K, K * (1.0 - csum)


def ellipk(k):
    """Complete elliptic integral of the first kind, modulus ``k``."""
    return ellipke(k)[0]


def ellipe(k):
    """Complete elliptic integral of the second kind, modulus ``k``."""
    return ellipke(k)[1]


def _series(z, order_max):
    """Power series for I_0..I_order_max at 1-D complex ``z``."""
    q = 0.25 * z * z
    out = []
    half = 0.5 * z
    for n in range(order_max + 1):
        term = half**n / math.factorial(n)
        total = term.copy()
        k = 0
        while True:
            k += 1
            term = term * q / (k * (k + n))
            total = total + term
            if np.all(np.abs(term) <= 1e-17 * np.abs(total)) or k > 400:
                break
        out.append(total)
    return out


def _miller(z, order_max):
    """Backward recurrence normalised by exp(z) = I_0 + 2 sum_k I_k."""
    start = int(np.max(np.abs(z))) + 40
    i_next = np.zeros_like(z)
    i_cur = np.full_like(z, 1e-30)
    norm = np.zeros_like(z)
    kept = [None] * (order_max + 1)
    for n in range(start, 0, -1):
        # I_{n-1} = (2n/z) I_n + I_{n+1}
        i_prev = (2.0 * n / z) * i_cur + i_next
        norm = norm + 2.0 * i_cur
        if n <= order_max:
            kept[n] = i_cur
        i_next, i_cur = i_cur, i_prev
        big = np.abs(i_cur) > 1e250
        if np.any(big):
            scale = np.where(big, 1e-250, 1.0)
            i_cur, i_next, norm = i_cur * scale, i_next * scale, norm * scale
            kept = [v * scale if v is not None else None for v in kept]
    kept[0] = i_cur
    norm = norm + i_cur
    factor = np.exp(z) / norm
    return [v * factor for v in kept]


def _asymptotic(z, order_max, scaled=False):
    """Hankel expansion valid for 0 <= arg z <= pi/2 (DLMF 10.40.5)."""
    pref = 1.0 / np.sqrt(2.0 * np.pi * z)
    out = []
    for n in range(order_max + 1):
        mu = 4.0 * n * n
        grow = np.ones_like(z)
        decay = np.ones_like(z)
        coef = 1.0
        zk = np.ones_like(z)
        last = np.full(z.shape, np.inf)
        for k in range(1, 60):
            coef *= (mu - (2 * k - 1) ** 2) / (k * 8.0)
            zk = zk * z
            term = coef / zk
            mag = np.abs(term)
            # stop at the smallest term of the divergent series
            active = mag < last
            if not np.any(active):
                break
            grow = np.where(active, grow + (-1) ** k * term, grow)
            decay = np.where(active, decay + term, decay)
            last = np.where(active, mag, 0.0)
            if np.all(mag < 1e-17):
                break
        phase = np.exp(1j * (n + 0.5) * np.pi)
        if scaled:
            # factor out exp(Re z)
            out.append(pref * (np.exp(1j * z.imag) * grow + np.exp(-z - z.real) * phase * decay))
        else:
            out.append(pref * (np.exp(z) * grow + np.exp(-z) * phase * decay))
    return out


def bessel_i(z, order_max=2, scaled=False):
    """Modified Bessel functions I_0 .. I_order_max of complex argument.

    Parameters
    ----------
    z : complex or array_like of complex
    order_max : int
        Highest order returned (0, 1 or 2 are what the package needs).
    scaled : bool
        Return ``I_n(z) * exp(-|Re z|)``, which stays finite for large ``|Re z|``.

    Returns
    -------
    list of ndarray
        ``[I_0(z), ..., I_order_max(z)]``, each shaped like ``z``.
    """
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    flat = z.ravel()
    # fold into the first quadrant: I_n(-z) = (-1)^n I_n(z), I_n(z*) = I_n(z)*
    neg = flat.real < 0
    w = np.where(neg, -flat, flat)
    conj = w.imag < 0
    w = np.where(conj, np.conj(w), w)

    results = [np.empty_like(w) for _ in range(order_max + 1)]
    mag = np.abs(w)
    zero = mag == 0.0
    asym = mag >= BESSEL_ASYMPTOTIC_SWITCH
    series = ~asym & ~zero & ((mag - w.real) <= _SERIES_CANCELLATION_LIMIT)
    miller = ~asym & ~zero & ~series
    for mask, kernel in ((series, _series), (miller, _miller)):
        if np.any(mask):
            vals = kernel(w[mask], order_max)
            damp = np.exp(-w[mask].real) if scaled else 1.0
            for n in range(order_max + 1):
                results[n][mask] = vals[n] * damp
    if np.any(asym):
        vals = _asymptotic(w[asym], order_max, scaled)
        for n in range(order_max + 1):
            results[n][asym] = vals[n]
    for n in range(order_max + 1):
        results[n][zero] = 1.0 if n == 0 else 0.0
        r = np.where(conj, np.conj(results[n]), results[n])
        if n % 2:
            r = np.where(neg, -r, r)
        results[n] = r.reshape(shape)
    return results


def bessel_i0(z):
    """I_0(z) for complex ``z``."""
    return bessel_i(z, 0)[0]


def bessel_i1(z):
    """I_1(z) for complex ``z``."""
    return bessel_i(z, 1)[1]


def bessel_i1_prime(z):
    """Derivative I_1'(z) = (I_0(z) + I_2(z)) / 2."""
    i0, _, i2 = bessel_i(z, 2)
    return 0.5 * (i0 + i2)
