"""Special-function wrappers against an independent mpmath oracle.

The oracle evaluates J by its power series in 40-digit mpmath arithmetic and
Y/K through mpmath's own implementations, which share no code with the
scipy-backed module under test.
"""

import mpmath as mp
import numpy as np
import pytest

from plateig import specfun

mp.mp.dps = 40


def j_series(n, z):
    """Power series sum_m (-1)^m (z/2)^(2m+n) / (m! (m+n)!)."""
    z = mp.mpmathify(z)
    total = mp.mpc(0)
    for m in range(90):
        total += (-1) ** m * (z / 2) ** (2 * m + n) / (mp.factorial(m) * mp.factorial(m + n))
    return complex(total)


# frozen from the series oracle above at 40 digits
J0_AT_1 = 0.76519768655796655145
J1_AT_2_5 = 0.49709410246427403801
J5_AT_7_3 = 0.31370617089730907746
J0_AT_3_2J = -1.2492348796074221964 - 0.94798379205773477611j
K1_AT_1 = 0.60190723019723457474
K3_AT_2_7 = 0.19407111796105779645
H0_AT_1_5 = 0.51182767173591812875 + 0.38244892379775884396j


def test_bessel_j_frozen_values():
    assert specfun.bessel_j(0, 1.0) == pytest.approx(J0_AT_1, rel=1e-13)
    assert specfun.bessel_j(1, 2.5) == pytest.approx(J1_AT_2_5, rel=1e-13)
    assert specfun.bessel_j(5, 7.3) == pytest.approx(J5_AT_7_3, rel=1e-13)
    got = specfun.bessel_j(0, 3.0 + 2.0j)
    assert got == pytest.approx(J0_AT_3_2J, rel=1e-13)


def test_bessel_j_against_series_random_points():
    rng = np.random.default_rng(42)
    for _ in range(25):
        n = int(rng.integers(0, 12))
        z = complex(rng.uniform(0.05, 15), rng.uniform(-3, 3))
        want = j_series(n, z)
        got = complex(specfun.bessel_j(n, z))
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_bessel_k_frozen_values():
    assert specfun.bessel_k(1, 1.0) == pytest.approx(K1_AT_1, rel=1e-13)
    assert specfun.bessel_k(3, 2.7) == pytest.approx(K3_AT_2_7, rel=1e-13)


def test_hankel_frozen_value():
    assert complex(specfun.hankel1(0, 1.5)) == pytest.approx(H0_AT_1_5, rel=1e-13)


def test_hankel_against_mpmath_complex():
    rng = np.random.default_rng(3)
    for _ in range(15):
        n = int(rng.integers(0, 8))
        z = complex(rng.uniform(0.1, 10), rng.uniform(0.0, 4))
        want = complex(mp.hankel1(n, mp.mpc(z.real, z.imag)))
        got = complex(specfun.hankel1(n, z))
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_wronskian_identity():
    # J_n(x) Y_n'(x) - J_n'(x) Y_n(x) = 2/(pi x)
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(0, 11))
        x = float(rng.uniform(0.05, 30))
        j = specfun.bessel_j(n, x)
        jp = specfun.bessel_j_deriv(n, x)
        h = specfun.hankel1(n, x)
        hp = specfun.hankel1_deriv(n, x)
        y, yp = h.imag, hp.imag
        assert j * yp - jp * y == pytest.approx(2 / (np.pi * x), rel=1e-10)


def test_k_identity_links_hankel_and_k():
    # H^(1)_n(ix) = (2/pi) i^(-n-1) K_n(x)
    rng = np.random.default_rng(5)
    for _ in range(30):
        n = int(rng.integers(0, 11))
        x = float(rng.uniform(0.05, 10))
        lhs = complex(specfun.hankel1(n, 1j * x + 0j))
        rhs = (2 / np.pi) * 1j ** (-n - 1) * specfun.bessel_k(n, x)
        assert abs(lhs - rhs) <= 1e-10 * abs(rhs)


def test_derivative_recurrences_match_finite_differences():
    z = 3.0 + 0.5j
    h = 1e-6
    for n in (0, 1, 4):
        fd = (specfun.hankel1(n, z + h) - specfun.hankel1(n, z - h)) / (2 * h)
        assert complex(specfun.hankel1_deriv(n, z)) == pytest.approx(complex(fd), rel=1e-8)
        fd = (specfun.bessel_j(n, z + h) - specfun.bessel_j(n, z - h)) / (2 * h)
        assert complex(specfun.bessel_j_deriv(n, z)) == pytest.approx(complex(fd), rel=1e-8)


def test_conjugate_symmetry_of_j():
    z = 2.2 + 1.3j
    assert complex(specfun.bessel_j(2, np.conj(z))) == pytest.approx(
        np.conj(complex(specfun.bessel_j(2, z))), rel=1e-13
    )


def test_bessel_k_decay_and_positivity():
    x = np.linspace(0.2, 12, 60)
    vals = specfun.bessel_k(2, x)
    assert np.all(vals > 0)
    assert np.all(np.diff(vals) < 0)


def test_k_recurrence_residual():
    # K_(n-1)(x) - K_(n+1)(x) = -2n/x K_n(x)
    x, n = 2.0, 5
    lhs = specfun.bessel_k(n - 1, x) - specfun.bessel_k(n + 1, x)
    rhs = -2 * n / x * specfun.bessel_k(n, x)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_kernels01_matches_generic_paths():
    rng = np.random.default_rng(9)
    r = rng.uniform(0.05, 2.5, size=40)
    for tau in (1.7, 1j * 2.3, 1.2 + 0.8j):
        j0, j1, h0, h1 = specfun.kernels01(tau, r)
        for got, order, fn in ((j0, 0, specfun.bessel_j), (j1, 1, specfun.bessel_j),
                               (h0, 0, specfun.hankel1), (h1, 1, specfun.hankel1)):
            want = fn(order, tau * r + 0j)
            assert np.max(np.abs(got - want)) <= 1e-12 * max(1.0, np.max(np.abs(want)))


def test_domain_errors():
    with pytest.raises(specfun.SpecialFunctionDomainError):
        specfun.bessel_j(-1, 1.0)
    with pytest.raises(specfun.SpecialFunctionDomainError):
        specfun.bessel_j(specfun.MAX_ORDER + 1, 1.0)
    with pytest.raises(specfun.SpecialFunctionDomainError):
        specfun.bessel_j(0, 250.0)
    with pytest.raises(specfun.SpecialFunctionDomainError):
        specfun.hankel1(0, 0.0)
    with pytest.raises(specfun.SpecialFunctionDomainError):
        specfun.hankel1(0, -2.0)
    with pytest.raises(specfun.SpecialFunctionDomainError):
        specfun.bessel_k(1, -1.0)
    with pytest.raises(specfun.SpecialFunctionDomainError):
        specfun.kernels01(0.0, np.array([1.0]))
    with pytest.raises(specfun.SpecialFunctionDomainError):
        specfun.kernels01(2.0, np.array([0.0, 1.0]))
    with pytest.raises(specfun.SpecialFunctionDomainError):
        specfun.kernels01(-1.0 - 1.0j, np.array([1.0]))
