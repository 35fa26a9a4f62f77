"""Incident plane waves and their Galerkin load vectors on RWG spaces."""

from dataclasses import dataclass

import numpy as np

from .bem.kernel import WaveContext
from .bem.quadrature import QuadratureRule, collapsed_gauss


def spherical_basis(theta_deg, phi_deg):
    """Unit vectors ``r, theta, phi`` for angles in degrees (broadcasting), each (..., 3)."""
    t = np.radians(np.asarray(theta_deg, dtype=float))
    p = np.radians(np.asarray(phi_deg, dtype=float))
    st, ct, sp, cp = np.sin(t), np.cos(t), np.sin(p), np.cos(p)
    r = np.stack([st * cp, st * sp, ct], axis=-1)
    th = np.stack([ct * cp, ct * sp, -st], axis=-1)
    ph = np.stack([-sp, cp, np.zeros_like(t)], axis=-1)
    return r, th, ph


@dataclass(frozen=True)
class PlaneWave:
    """``E_inc = amplitude * p exp(ik d.x)`` and ``H_inc = (1/ik) curl E_inc = amplitude * (d x p) exp(ik d.x)``."""

    direction: np.ndarray
    polarization: np.ndarray
    ctx: WaveContext
    amplitude: complex = 1.0

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float)
        p = np.asarray(self.polarization, dtype=float)
        if d.shape != (3,) or p.shape != (3,):
            raise ValueError("direction and polarization must be 3-vectors")
        if abs(np.linalg.norm(d) - 1) > 1e-12 or abs(np.linalg.norm(p) - 1) > 1e-12:
            raise ValueError("direction and polarization must be unit vectors")
        if abs(d @ p) > 1e-12:
            raise ValueError("polarization must be orthogonal to direction")
        object.__setattr__(self, "direction", d)
        object.__setattr__(self, "polarization", p)

    @classmethod
    def from_angles(cls, theta_deg, phi_deg, pol, ctx, amplitude=1.0):
        """Wave travelling along ``r_hat(theta, phi)``, polarized along ``theta_hat`` or ``phi_hat``."""
        r, th, ph = spherical_basis(theta_deg, phi_deg)
        if pol not in ("theta", "phi"):
            raise ValueError("pol must be 'theta' or 'phi'")
        return cls(r, th if pol == "theta" else ph, ctx, amplitude)

    @property
    def k(self):
        return self.ctx.wavenumber

    def _phase(self, x):
        return self.amplitude * np.exp(1j * self.k * (np.asarray(x, dtype=float) @ self.direction))

    def eval_E_inc(self, x):
        return self._phase(x)[..., None] * self.polarization

    def eval_H_inc(self, x):
        return self._phase(x)[..., None] * np.cross(self.direction, self.polarization)


def _load(space, field, quad, rotate):
    quad = quad or QuadratureRule()
    bary, w = collapsed_gauss(quad.load_order)
    v = space.support_vertices
    pts = np.einsum("qk,tkd->tqd", bary, v)
    f = field(pts)
    if rotate:
        f = np.cross(space.support_normals[:, None, :], f)
    rel = pts[:, None, :, :] - v[:, :, None, :]  # (T, a, Q, 3)
    loc = np.einsum("taqd,tqd,q->ta", rel, f, w) * (space.local_coef * space.support_areas[:, None])
    keep = space.local_dof >= 0
    out = np.zeros(space.dof_count, dtype=complex)
    np.add.at(out, space.local_dof[keep], loc[keep])
    return out


def project_tangential_E(space, wave, quad=None):
    """``b_i = int E_inc . theta_i`` over the space's support."""
    return _load(space, wave.eval_E_inc, quad, rotate=False)


def project_rotated_H(space, wave, quad=None):
    """``c_i = int (n x H_inc) . theta_i`` with the space's normal."""
    return _load(space, wave.eval_H_inc, quad, rotate=True)
