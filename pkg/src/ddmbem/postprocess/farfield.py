"""Radiation integrals, bistatic RCS and the ``rcs.csv`` writer."""

import csv
from dataclasses import dataclass

import numpy as np

from ..bem.quadrature import triangle_rule
from ..excitation import spherical_basis


@dataclass(frozen=True)
class FarFieldPattern:
    """Far-field amplitude ``A`` per direction, ``E ~ exp(ikr)/r * A(r_hat)``.

    ``theta_deg, phi_deg`` are kept when the directions came from angles.
    """

    directions: np.ndarray
    E_far: np.ndarray
    theta_deg: np.ndarray = None
    phi_deg: np.ndarray = None

    def __add__(self, other):
        if not np.array_equal(self.directions, other.directions):
            raise ValueError("patterns sampled at different directions")
        return FarFieldPattern(self.directions, self.E_far + other.E_far, self.theta_deg, self.phi_deg)


def directions_from_angles(theta_deg, phi_deg):
    r, _, _ = spherical_basis(theta_deg, phi_deg)
    return r


def bistatic_cut(n=181, phi_deg=0.0):
    """Directions ``theta = 0..180`` deg in the plane ``phi = phi_deg``; returns (theta, phi, directions)."""
    theta = np.linspace(0.0, 180.0, n)
    phi = np.full(n, float(phi_deg))
    return theta, phi, directions_from_angles(theta, phi)


def _radiation_integral(space, coeffs, k, rhat, order, rotate=False, chunk=64):
    """``int f(y) exp(-ik r_hat.y) dy`` for the RWG field ``f`` (or ``n x f``)."""
    bary, w = triangle_rule(order)
    pts, vals = space.evaluate(coeffs, bary)
    if rotate:
        vals = np.cross(space.support_normals[:, None, :], vals)
    y = pts.reshape(-1, 3)
    fw = (vals * (w[None, :, None] * space.support_areas[:, None, None])).reshape(-1, 3)
    out = np.empty((len(rhat), 3), dtype=complex)
    for s in range(0, len(rhat), chunk):
        ph = np.exp(-1j * k * (rhat[s : s + chunk] @ y.T))
        out[s : s + chunk] = ph @ fw
    return out


def far_field(k, directions, electric=(), magnetic=(), order=4, theta_deg=None, phi_deg=None):
    """Far field of ``E = T j - K m`` for surface currents given as RWG coefficients.

    Parameters
    ----------
    k : float or WaveContext
    directions : (D, 3) unit vectors
    electric : iterable of ``(space, coeffs)``
        Electric currents ``j = n x H``.
    magnetic : iterable of ``(space, coeffs)``
        Tangential fields ``E``; the magnetic current ``n x E`` uses the
        space's normal.
    order : int
        Points per triangle of the regular rule.

    ``A = (ik / 4 pi) [U_perp + r_hat x V]`` with ``U = int j exp(-ik r_hat.y)``
    and ``V = int (n x E) exp(-ik r_hat.y)``.
    """
    k = getattr(k, "wavenumber", k)
    rhat = np.atleast_2d(np.asarray(directions, dtype=float))
    if np.any(np.abs(np.linalg.norm(rhat, axis=1) - 1) > 1e-10):
        raise ValueError("directions must be unit vectors")
    u = np.zeros((len(rhat), 3), dtype=complex)
    v = np.zeros((len(rhat), 3), dtype=complex)
    for space, c in electric:
        u += _radiation_integral(space, c, k, rhat, order)
    for space, c in magnetic:
        v += _radiation_integral(space, c, k, rhat, order, rotate=True)
    u_perp = u - np.sum(u * rhat, axis=1)[:, None] * rhat
    a = 1j * k / (4 * np.pi) * (u_perp + np.cross(rhat, v))
    return FarFieldPattern(rhat, a, theta_deg, phi_deg)


def rcs(pattern):
    """Bistatic RCS ``10 log10(4 pi |A|^2)`` in dBsm (unit incident amplitude)."""
    a = getattr(pattern, "E_far", pattern)
    with np.errstate(divide="ignore"):
        return 10 * np.log10(4 * np.pi * np.sum(np.abs(a) ** 2, axis=-1))


def write_rcs_csv(path, theta_deg, phi_deg, rcs_dbsm):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["theta_deg", "phi_deg", "rcs_dbsm"])
        for t, p, r in zip(theta_deg, phi_deg, rcs_dbsm):
            wr.writerow([f"{t:.15g}", f"{p:.15g}", f"{r:.15g}"])


def ddm_far_field(system, traces, k, directions, order=4, **angles):
    """Total scattered far field of a solved interface problem.

    Sum of the plus-side field (current ``u+`` and the interface field
    ``E``, both on the plus shell) and the field of the metallized-interface
    current ``w``.
    """
    maps = system.maps
    return far_field(
        k,
        directions,
        electric=[(maps.plus_space, traces["plus_current"] + system.short_cut)],
        magnetic=[(maps.sigma_space, traces["sigma_E"])],
        order=order,
        **angles,
    )
