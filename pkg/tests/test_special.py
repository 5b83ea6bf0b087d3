import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sp

from mqshbc.special import bessel_i, bessel_i0, bessel_i1, bessel_i1_prime, ellipe, ellipk, ellipke


@pytest.mark.parametrize("k", [0.0, 1e-8, 0.1, 0.5, 0.9, 0.999, 0.999999])
def test_elliptic_against_mpmath(k):
    K, E = ellipke(k)
    with mpmath.workdps(30):
        m = mpmath.mpf(k) ** 2  # 1 - m must not be perturbed near k = 1
        K_ref, E_ref = float(mpmath.ellipk(m)), float(mpmath.ellipe(m))
    assert K == pytest.approx(K_ref, rel=1e-13)
    assert E == pytest.approx(E_ref, rel=1e-13)
    assert ellipk(k) == K and ellipe(k) == E


@pytest.mark.parametrize("k", [-0.1, 1.0, 1.5])
def test_elliptic_rejects_bad_modulus(k):
    with pytest.raises(ValueError):
        ellipke(k)


def _grid():
    mag = np.concatenate([np.linspace(0.01, 60.0, 97), [0.3, 5.0, 19.99, 20.0, 20.01, 150.0, 600.0]])
    ang = np.linspace(-np.pi, np.pi, 37)
    return (mag[:, None] * np.exp(1j * ang[None, :])).ravel()


@pytest.mark.parametrize("order", [0, 1, 2])
def test_bessel_matches_scipy_scaled(order):
    z = _grid()
    ours = bessel_i(z, 2, scaled=True)[order]
    ref = sp.ive(order, z)  # also scaled by exp(-|Re z|)
    err = np.abs(ours - ref) / np.maximum(np.abs(ref), 1e-300)
    assert err.max() < 1e-12


def test_bessel_unscaled_moderate_arguments():
    z = _grid()
    z = z[np.abs(z.real) < 300]
    for n in range(3):
        ref = sp.iv(n, z)
        assert np.allclose(bessel_i(z, 2)[n], ref, rtol=1e-12, atol=0)


def test_bessel_high_precision_spot_values():
    for z in (0.5 + 0.5j, 3 + 4j, 14 + 14j, 0.001j, 25 - 25j, -8 + 0.1j):
        for n in range(3):
            with mpmath.workdps(40):
                ref = complex(mpmath.besseli(n, z))
            assert abs(complex(bessel_i(z, 2)[n]) - ref) <= 1e-13 * abs(ref)


def test_bessel_zero_and_shape():
    out = bessel_i(np.zeros((2, 3)), 2)
    assert out[0].shape == (2, 3)
    assert np.all(out[0] == 1.0) and np.all(out[1] == 0.0) and np.all(out[2] == 0.0)
    assert bessel_i0(0.0) == 1.0
    assert bessel_i1(0.0) == 0.0


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 40.0), st.floats(-np.pi, np.pi))
def test_derivative_recurrence(r, theta):
    """I1'(z) = I0(z) - I1(z)/z."""
    z = r * np.exp(1j * theta)
    lhs = bessel_i1_prime(z)
    rhs = bessel_i0(z) - bessel_i1(z) / z
    assert abs(lhs - rhs) <= 1e-10 * max(abs(rhs), abs(bessel_i0(z)))


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 50.0), st.floats(-50.0, 50.0))
def test_conjugate_and_reflection_symmetry(x, y):
    z = complex(x, y)
    a = bessel_i(z, 1, scaled=True)
    b = bessel_i(np.conj(z), 1, scaled=True)
    c = bessel_i(-z, 1, scaled=True)
    assert abs(a[0] - np.conj(b[0])) <= 1e-14 * abs(a[0])
    assert abs(a[1] + c[1]) <= 1e-14 * max(abs(a[1]), 1e-300)
