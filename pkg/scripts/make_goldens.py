"""Regenerate tests/data/goldens.json from independent reference computations.

Nothing here imports the package: every value is recomputed with mpmath
(arbitrary precision elliptic and Bessel functions, explicit 2x2 complex
solves, bisection and golden-section searches) or with a straight-chord
polygon discretisation of the Neumann double integral extrapolated with
Richardson's rule.  The resulting numbers are frozen and the test-suite
compares the package against them.

Run:  python scripts/make_goldens.py   (takes about a minute)
"""

import json
from pathlib import Path

import mpmath as mp
import numpy as np

mp.mp.dps = 30

MU0 = mp.mpf("1.25663706212e-6")
EPS0 = mp.mpf("8.8541878128e-12")
C0 = mp.mpf(299792458)
R_RING = mp.mpf("0.05")
A_WIRE = mp.mpf("0.8137e-3")
L_ANCHOR = mp.mpf("260e-9")
Z0 = mp.mpf(50)

# Gabriel et al. (1996) four-term Cole-Cole parameters for muscle
MUSCLE = dict(
    eps_inf=4.0, sigma=0.2,
    terms=[(50.0, 7.234e-12, 0.1), (7000.0, 353.678e-9, 0.1),
           (1.2e6, 318.310e-6, 0.1), (2.5e7, 2.274e-3, 0.0)],
)


# --- coils ----------------------------------------------------------------

def self_inductance(R, a):
    return MU0 * R * (mp.log(8 * R / a) - 2)


def mutual_coaxial(r1, r2, d):
    m = 4 * r1 * r2 / ((r1 + r2) ** 2 + d**2)
    k = mp.sqrt(m)
    return MU0 * mp.sqrt(r1 * r2) * ((2 / k - k) * mp.ellipk(m) - 2 / k * mp.ellipe(m))


def _polygon_mutual(r, d, offset, n):
    """Neumann sum over two n-gons inscribed in the rings (chord midpoints)."""
    phi = 2 * np.pi * np.arange(n + 1) / n
    v1 = np.stack([r * np.cos(phi), r * np.sin(phi), np.zeros_like(phi)], axis=1)
    v2 = v1 + np.array([offset, 0.0, d])
    mid1, dl1 = 0.5 * (v1[1:] + v1[:-1]), v1[1:] - v1[:-1]
    mid2, dl2 = 0.5 * (v2[1:] + v2[:-1]), v2[1:] - v2[:-1]
    total = 0.0
    for s in range(0, n, 512):
        dist = np.linalg.norm(mid1[s:s + 512, None, :] - mid2[None, :, :], axis=-1)
        total += float(((dl1[s:s + 512] @ dl2.T) / dist).sum())
    return 1e-7 * total


def polygon_mutual(r, d, offset, n=2048):
    """Richardson extrapolation of the O(1/n^2) polygon rule."""
    coarse = _polygon_mutual(r, d, offset, n)
    fine = _polygon_mutual(r, d, offset, 2 * n)
    return (4 * fine - coarse) / 3


# --- link -----------------------------------------------------------------

def gain(f, l_tx, l_rx, m, zs, zl):
    """Solve the two mesh equations for the load voltage per volt of EMF."""
    w = 2 * mp.pi * f
    a = mp.matrix([[zs + 1j * w * l_tx, -1j * w * m], [-1j * w * m, zl + 1j * w * l_rx]])
    i = mp.lu_solve(a, mp.matrix([1, 0]))
    # sign convention: receiver current defined to flow into Z_L
    return i[1] * zl


def db(x):
    return float(20 * mp.log10(abs(x)))


def golden_max(fun, lo, hi, tol=mp.mpf("1e-14")):
    """Golden-section maximisation in log10 space."""
    g = (mp.sqrt(5) - 1) / 2
    a, b = mp.log10(lo), mp.log10(hi)
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = fun(10**c), fun(10**d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = fun(10**c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = fun(10**d)
    return 10 ** ((a + b) / 2)


# --- dielectrics ------------------------------------------------------------

def cole_cole(f, p=MUSCLE):
    w = 2 * mp.pi * f
    eps = mp.mpf(p["eps_inf"])
    for de, tau, alpha in p["terms"]:
        eps += de / (1 + (1j * w * tau) ** (1 - mp.mpf(alpha)))
    eps_r, eps_i = mp.re(eps), -mp.im(eps)
    sigma = p["sigma"] + w * EPS0 * eps_i
    return eps_r, sigma


def lam_lossless(f, eps_r):
    return C0 / (f * mp.sqrt(eps_r))


def skin_depth(f, eps_r, sigma):
    w = 2 * mp.pi * f
    gamma = 1j * w * mp.sqrt(MU0 * EPS0 * eps_r) * mp.sqrt(1 - 1j * sigma / (w * EPS0 * eps_r))
    return 1 / mp.re(gamma)


def bisect(fun, lo, hi, log=True):
    flo = fun(lo)
    for _ in range(200):
        mid = mp.sqrt(lo * hi) if log else (lo + hi) / 2
        fm = fun(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


# --- eddy -----------------------------------------------------------------

def eddy_transmission(f, b, sigma):
    g = mp.sqrt(1j * 2 * mp.pi * f * MU0 * sigma)
    return float(abs(1 / mp.besseli(0, g * b)))


def eddy_power(f, b, sigma):
    """Poynting flux into the cylinder per unit length, per (A/m)^2 of H_0."""
    g = mp.sqrt(1j * 2 * mp.pi * f * MU0 * sigma)
    ratio = mp.besseli(1, g * b) / mp.besseli(0, g * b)
    return float(mp.pi * b * mp.re(g * ratio / sigma))


def main():
    out = {}
    out["self_inductance_ring"] = float(self_inductance(R_RING, A_WIRE))

    distances = [0.02, 0.05, 0.1, 0.2, 0.5, 1.0]
    out["mutual_coaxial"] = {
        "r": 0.05, "distances": distances,
        "elliptic": [float(mutual_coaxial(R_RING, R_RING, mp.mpf(d))) for d in distances],
        "polygon": [polygon_mutual(0.05, d, 0.0) for d in distances],
    }
    a1 = mp.mpf("1e-3")
    out["self_inductance_ring_1mm"] = {
        "closed_form": float(self_inductance(R_RING, a1)),
        # two coplanar filaments one wire radius apart approximate the loop
        "filament_pair": float(mutual_coaxial(R_RING, R_RING - a1, mp.mpf(0))),
    }
    out["mutual_far_field_20R"] = float(mutual_coaxial(R_RING, R_RING, 20 * R_RING))

    m10 = mutual_coaxial(R_RING, R_RING, mp.mpf("0.1"))
    out["peak_matched"] = {
        "approx": float(Z0 / (2 * mp.pi * L_ANCHOR)),
        "numeric": float(golden_max(lambda f: abs(gain(f, L_ANCHOR, L_ANCHOR, m10, Z0, Z0)),
                                    mp.mpf(1e6), mp.mpf(1e9))),
        "mutual": float(m10),
    }
    w31 = 2 * mp.pi * mp.mpf(31e6)
    a = mp.matrix([[Z0 + 1j * w31 * L_ANCHOR, -1j * w31 * m10], [-1j * w31 * m10, Z0 + 1j * w31 * L_ANCHOR]])
    i = mp.lu_solve(a, mp.matrix([1, 0]))
    out["anchored_currents_31MHz"] = {"tx": [float(mp.re(i[0])), float(mp.im(i[0]))],
                                      "rx": [float(mp.re(i[1])), float(mp.im(i[1]))]}
    c80 = 1 / ((2 * mp.pi * 80e6) ** 2 * L_ANCHOR)
    out["load_capacitance_80MHz"] = float(c80)

    # termination family at selected frequencies (fig7b scenario)
    freqs = [float(x) for x in np.logspace(5, 9, 41)]
    family = {}
    for name, zs, zl in (("vna_50", Z0, None), ("low_source", mp.mpf(1), None),
                         ("capacitive_load", Z0, "C"), ("low_source_capacitive_load", mp.mpf(1), "C")):
        vals = []
        for f in freqs:
            load = Z0 if zl is None else 1 / (1j * 2 * mp.pi * f * c80)
            vals.append(db(gain(mp.mpf(f), L_ANCHOR, L_ANCHOR, m10, zs, load)))
        family[name] = vals
    out["termination_family"] = {"frequencies": freqs, "gain_db": family}

    # distance sweep at 30 MHz (fig9a-mqs scenario)
    dgrid = [float(x) for x in np.logspace(-1, 0, 46)]
    out["distance_sweep"] = {
        "frequency": 30e6, "distances": dgrid,
        "gain_db": [db(gain(mp.mpf(30e6), L_ANCHOR, L_ANCHOR, mutual_coaxial(R_RING, R_RING, mp.mpf(d)),
                            Z0, Z0)) for d in dgrid],
    }

    # distance x offset surface (fig9b scenario)
    dist = [float(x) for x in np.linspace(0.1, 0.5, 5)]
    offs = [float(x) for x in np.linspace(0.0, 0.2, 11)]
    mutual, gains = [], []
    for d in dist:
        for o in offs:
            m = polygon_mutual(0.05, d, o)
            mutual.append(m)
            gains.append(db(gain(mp.mpf(30e6), L_ANCHOR, L_ANCHOR, mp.mpf(m), Z0, Z0)))
    out["offset_surface"] = {"frequency": 30e6, "distances": dist, "offsets": offs,
                             "mutual": mutual, "gain_db": gains}

    # muscle dielectrics
    er447, s447 = cole_cole(mp.mpf(447e6))
    out["muscle_447MHz"] = {
        "eps_real": float(er447), "sigma_eff": float(s447),
        "wavelength_lossless": float(lam_lossless(447e6, er447)),
        "skin_depth": float(skin_depth(mp.mpf(447e6), er447, s447)),
    }
    out["muscle_lambda_1m_crossing"] = float(bisect(
        lambda f: lam_lossless(f, cole_cole(f)[0]) - 1, mp.mpf(1e6), mp.mpf(1e9)))
    eps_low, eps_high = cole_cole(mp.mpf(10))[0], cole_cole(mp.mpf(10e6))[0]

    def interp_lambda(f):
        t = (f - 10) / (mp.mpf(10e6) - 10)
        return lam_lossless(f, (1 - t) * eps_low + t * eps_high)

    out["interpolated_muscle"] = {
        "eps_low": float(eps_low), "eps_high": float(eps_high),
        "crossing_8cm": float(bisect(lambda f: interp_lambda(f) - mp.mpf("0.08"),
                                     mp.mpf(1e5), mp.mpf(9.9e6))),
    }

    for f in (1e6, 100e6):
        er, sg = cole_cole(mp.mpf(f))
        out[f"muscle_{int(f / 1e6)}MHz"] = {"eps_real": float(er), "sigma_eff": float(sg)}

    b = mp.mpf("0.04")
    eddy = {}
    for f in (1e6, 447e6):
        _, sigma = cole_cole(mp.mpf(f))
        eddy[str(f)] = {"sigma_eff": float(sigma), "transmission": eddy_transmission(mp.mpf(f), b, sigma),
                        "power": eddy_power(mp.mpf(f), b, sigma)}
    eddy["crossover_0.9"] = float(bisect(
        lambda f: eddy_transmission(f, b, cole_cole(f)[1]) - mp.mpf("0.9"), mp.mpf(1e6), mp.mpf(1e9)))
    out["eddy_muscle_b4cm"] = eddy

    path = Path(__file__).resolve().parents[1] / "tests" / "data" / "goldens.json"
    path.write_text(json.dumps(out, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
