"""Series solution for plane-wave scattering by a perfectly conducting sphere.

Two independent routes to the amplitude functions ``S1, S2`` are provided:
one from spherical Bessel functions and the angular recurrences, one from
Riccati-Bessel functions and associated Legendre functions. The far-field
amplitude follows the ``exp(-i omega t)`` convention used throughout, for a
unit plane wave ``p exp(ik d.x)``:
``E_sc ~ exp(ikr)/r * A`` with ``A = (cos(phi) S2 theta_hat - sin(phi) S1 phi_hat) / (-ik)``
in the frame where ``d`` is the polar axis and ``p`` the ``phi = 0`` direction.
"""

import numpy as np
from scipy import special


def n_terms(x):
    """Series length: at least ``ceil(x) + 10``, extended with the Wiscombe bound."""
    return int(max(np.ceil(x) + 10, x + 4 * x ** (1 / 3) + 2 + 10))


def pec_coefficients(x, nmax=None):
    """``a_n = psi_n'(x) / xi_n'(x)`` and ``b_n = psi_n(x) / xi_n(x)``, ``n = 1..nmax``."""
    nmax = nmax or n_terms(x)
    n = np.arange(1, nmax + 1)
    j, dj = special.spherical_jn(n, x), special.spherical_jn(n, x, derivative=True)
    y, dy = special.spherical_yn(n, x), special.spherical_yn(n, x, derivative=True)
    psi = x * j
    dpsi = j + x * dj
    xi = x * (j + 1j * y)
    dxi = (j + 1j * y) + x * (dj + 1j * dy)
    return dpsi / dxi, psi / xi


def angular_functions(mu, nmax):
    """``pi_n`` and ``tau_n`` at ``mu = cos(theta)`` by upward recurrence, shape (nmax, len(mu))."""
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    pi = np.zeros((nmax + 1, mu.size))
    tau = np.zeros((nmax + 1, mu.size))
    pi[1] = 1.0
    tau[1] = mu
    for n in range(2, nmax + 1):
        pi[n] = (2 * n - 1) / (n - 1) * mu * pi[n - 1] - n / (n - 1) * pi[n - 2]
        tau[n] = n * mu * pi[n] - (n + 1) * pi[n - 1]
    return pi[1:], tau[1:]


def amplitude_functions(x, theta):
    """``S1(theta), S2(theta)`` of a PEC sphere with size parameter ``x = ka``."""
    nmax = n_terms(x)
    a, b = pec_coefficients(x, nmax)
    n = np.arange(1, nmax + 1)
    c = ((2 * n + 1) / (n * (n + 1)))[:, None]
    pi, tau = angular_functions(np.cos(theta), nmax)
    s1 = (c * (a[:, None] * pi + b[:, None] * tau)).sum(axis=0)
    s2 = (c * (a[:, None] * tau + b[:, None] * pi)).sum(axis=0)
    return s1, s2


def amplitude_functions_legendre(x, theta):
    """Second route: Riccati-Bessel functions and ``P_n^1`` from ``lpmv``."""
    nmax = n_terms(x)
    psi, dpsi = special.riccati_jn(nmax, x)
    chi, dchi = special.riccati_yn(nmax, x)
    # riccati_yn returns x y_n(x); xi = psi + i chi with the y-based chi
    xi, dxi = psi + 1j * chi, dpsi + 1j * dchi
    a = dpsi[1:] / dxi[1:]
    b = psi[1:] / xi[1:]
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    mu = np.cos(theta)
    s = np.sin(theta)
    s1 = np.zeros(theta.size, dtype=complex)
    s2 = np.zeros(theta.size, dtype=complex)
    safe = np.where(np.abs(s) < 1e-8, 1e-8, s)
    for n in range(1, nmax + 1):
        # lpmv includes the Condon-Shortley phase; P_n^1 = -lpmv(1, n, mu)
        p1 = -special.lpmv(1, n, mu)
        p1m = -special.lpmv(1, n - 1, mu) if n > 1 else np.zeros_like(mu)
        pin = p1 / safe
        # dP_n^1/dtheta from (1 - mu^2) dP/dmu = n mu P_n^1 - (n + 1) P_{n-1}^1
        taun = (n * mu * p1 - (n + 1) * p1m) / safe
        pole = np.abs(s) < 1e-8
        if np.any(pole):
            sgn = np.sign(mu[pole]) ** (n + 1)
            pin[pole] = sgn * n * (n + 1) / 2
            taun[pole] = np.sign(mu[pole]) ** n * n * (n + 1) / 2
        c = (2 * n + 1) / (n * (n + 1))
        s1 += c * (a[n - 1] * pin + b[n - 1] * taun)
        s2 += c * (a[n - 1] * taun + b[n - 1] * pin)
    return s1, s2


def _local_frame(direction, polarization, rhat):
    d = np.asarray(direction, dtype=float)
    p = np.asarray(polarization, dtype=float)
    q = np.cross(d, p)
    rhat = np.atleast_2d(rhat)
    cz, cx, cy = rhat @ d, rhat @ p, rhat @ q
    theta = np.arccos(np.clip(cz, -1, 1))
    phi = np.arctan2(cy, cx)
    st, ct, sp, cp = np.sin(theta), np.cos(theta), np.sin(phi), np.cos(phi)
    th_hat = (ct * cp)[:, None] * p + (ct * sp)[:, None] * q - st[:, None] * d
    ph_hat = -sp[:, None] * p + cp[:, None] * q
    return theta, phi, th_hat, ph_hat


def mie_far_field(radius, k, direction, polarization, rhat, route="recurrence"):
    """Far-field amplitude vectors (D, 3) of a PEC sphere centred at the origin."""
    theta, phi, th_hat, ph_hat = _local_frame(direction, polarization, rhat)
    fn = amplitude_functions if route == "recurrence" else amplitude_functions_legendre
    s1, s2 = fn(k * radius, theta)
    return ((np.cos(phi) * s2)[:, None] * th_hat - (np.sin(phi) * s1)[:, None] * ph_hat) / (-1j * k)


def mie_reference(radius, ctx, wave, directions, route="recurrence"):
    """Bistatic RCS (dBsm) of a PEC sphere for ``wave`` at unit directions (D, 3)."""
    k = getattr(ctx, "wavenumber", ctx)
    a = mie_far_field(radius, k, wave.direction, wave.polarization, directions, route)
    return 10 * np.log10(4 * np.pi * np.sum(np.abs(a) ** 2, axis=1))


def extinction_cross_section(radius, k):
    """``(2 pi / k^2) sum (2n+1) Re(a_n + b_n)``, equal to ``4 pi / k^2 Re S(0)`` by the optical theorem."""
    a, b = pec_coefficients(k * radius)
    n = np.arange(1, len(a) + 1)
    return 2 * np.pi / k**2 * np.sum((2 * n + 1) * (a + b).real)


def mie_surface_current(radius, k, direction, polarization, points):
    """Total ``n x H`` on the sphere (``H = curl E / ik``, outward normal) at surface points (P, 3)."""
    x = k * radius
    nmax = n_terms(x)
    a, b = pec_coefficients(x, nmax)
    pts = np.atleast_2d(points)
    rhat = pts / np.linalg.norm(pts, axis=1)[:, None]
    theta, phi, th_hat, ph_hat = _local_frame(direction, polarization, rhat)
    pi, tau = angular_functions(np.cos(theta), nmax)
    n = np.arange(1, nmax + 1)[:, None]
    en = (1j**n) * (2 * n + 1) / (n * (n + 1))
    j = special.spherical_jn(n, x)
    dj = special.spherical_jn(n, x, derivative=True)
    h = j + 1j * special.spherical_yn(n, x)
    dh = dj + 1j * special.spherical_yn(n, x, derivative=True)
    # (rho z)'/rho at rho = x
    dj_r = (j + x * dj) / x
    dh_r = (h + x * dh) / x
    sp, cp = np.sin(phi), np.cos(phi)
    # tangential (theta, phi) parts of M_e1n and N_o1n
    me1_t = lambda z: -sp * pi * z
    me1_p = lambda z: -cp * tau * z
    no1_t = lambda dz: sp * tau * dz
    no1_p = lambda dz: cp * pi * dz
    h_t = (-en * (me1_t(j) + 1j * no1_t(dj_r)) + en * (1j * b[:, None] * no1_t(dh_r) + a[:, None] * me1_t(h))).sum(axis=0)
    h_p = (-en * (me1_p(j) + 1j * no1_p(dj_r)) + en * (1j * b[:, None] * no1_p(dh_r) + a[:, None] * me1_p(h))).sum(axis=0)
    # r x theta_hat = phi_hat, r x phi_hat = -theta_hat
    return h_t[:, None] * ph_hat - h_p[:, None] * th_hat
