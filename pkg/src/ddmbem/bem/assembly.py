"""Dense Galerkin matrices of the boundary operators on RWG spaces."""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .kernel import WaveContext
from .quadrature import QuadratureRule, collapsed_gauss, sauter_schwab, triangle_rule


class OperatorKind(Enum):
    SINGLE_LAYER_T = "T"
    DOUBLE_LAYER_KN = "Kn"
    MASS = "mass"


@dataclass(frozen=True, eq=False)
class BoundaryOperatorMatrix:
    """Dense matrix ``data[i, j] = <A theta_j, theta_i>`` on ``space``.

    ``columns`` lists the trial basis functions kept when only part of the
    matrix was assembled (``None`` for all of them); ``wavenumber`` is
    ``None`` for the mass matrix.
    """

    kind: OperatorKind
    space: object
    data: np.ndarray
    columns: np.ndarray = None
    wavenumber: float = None

    @property
    def shape(self):
        return self.data.shape

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)


def _wavenumber(ctx):
    k = float(getattr(ctx, "wavenumber", ctx))
    if not k > 0:
        raise ValueError("wavenumber must be positive")
    return k


class _Geometry:
    """Per-triangle arrays of a space, laid out for the compiled loops."""

    def __init__(self, space, quad, dof=None):
        mesh = space.mesh
        self.idx = np.ascontiguousarray(mesh.triangles[space.support], dtype=np.int64)
        v = np.ascontiguousarray(space.support_vertices, dtype=float)
        self.v = v
        self.dof = np.ascontiguousarray(space.local_dof if dof is None else dof, dtype=np.int64)
        self.coef = np.ascontiguousarray(space.local_coef, dtype=float)
        self.cen = v.mean(axis=1)
        area = space.support_areas
        e = np.linalg.norm(v[:, [1, 2, 0]] - v[:, [2, 0, 1]], axis=2)
        self.rad = e.prod(axis=1) / (4 * area)
        self.nrm = np.ascontiguousarray(space.support_normals, dtype=float)
        b, w = triangle_rule(quad.regular_order)
        self.reg = np.ascontiguousarray(np.einsum("qk,tkd->tqd", b, v))
        self.regw = np.ascontiguousarray(np.outer(area, w))
        b, w = collapsed_gauss(quad.near_order)
        self.near = np.ascontiguousarray(np.einsum("qk,tkd->tqd", b, v))
        self.nearw = np.ascontiguousarray(np.outer(area, w))

    def args(self):
        return (self.idx, self.v, self.dof, self.coef, self.cen, self.rad, self.reg, self.regw, self.near, self.nearw)


def assemble_T(space, ctx, quad=None):
    """Single-layer operator ``T``.

    ``<T u, v> = (1/ik) [k^2 int int g(x,y) u(y).v(x) - int int g(x,y) div u(y) div v(x)]``,
    with ``g = -exp(ikr) / (4 pi r)``.
    """
    quad = quad or QuadratureRule()
    k = _wavenumber(ctx)
    geo = _Geometry(space, quad)
    n = space.dof_count
    out = np.zeros((n, n), dtype=np.complex128)
    s = quad.singular_order
    _kernels.assemble_single_layer(
        out, k, True, *geo.args(), *geo.args(),
        sauter_schwab("identical", s), sauter_schwab("edge", s), sauter_schwab("vertex", s),
        float(quad.near_threshold),
    )
    return BoundaryOperatorMatrix(OperatorKind.SINGLE_LAYER_T, space, out, wavenumber=k)


def assemble_mass(space):
    """Gram matrix ``int theta_i . theta_j``, exact (degree-2 integrand, 3-point rule)."""
    b, w = triangle_rule(3)
    v = space.support_vertices
    pts = np.einsum("qk,tkd->tqd", b, v)
    rel = pts[:, None, :, :] - v[:, :, None, :]  # (T, a, Q, 3)
    loc = np.einsum("taqd,tbqd,q->tab", rel, rel, w) * space.support_areas[:, None, None]
    loc *= space.local_coef[:, :, None] * space.local_coef[:, None, :]
    dof = space.local_dof
    rows = np.broadcast_to(dof[:, :, None], loc.shape)
    cols = np.broadcast_to(dof[:, None, :], loc.shape)
    keep = (rows >= 0) & (cols >= 0)
    n = space.dof_count
    out = np.zeros((n, n))
    np.add.at(out, (rows[keep], cols[keep]), loc[keep])
    return BoundaryOperatorMatrix(OperatorKind.MASS, space, out)


def assemble_Kn(space, ctx, quad=None, columns=None, mass=None):
    """``(1/2 Id + K (n x))`` on a closed shell, ``n`` the space's normal.

    ``K`` is the principal value of ``u -> curl int g(x,y) u(y) dy``, so the
    double-layer entry is ``int int theta_i(x) . [grad_x g x (n(y) x theta_j(y))]``.
    ``columns`` restricts the trial functions (the interface block is all the
    admittance needs). ``mass`` may pass a precomputed mass matrix.
    """
    quad = quad or QuadratureRule()
    k = _wavenumber(ctx)
    n = space.dof_count
    if columns is None:
        cols = np.arange(n)
        trial_dof = space.local_dof
    else:
        cols = np.asarray(columns, dtype=np.int64)
        if cols.ndim != 1 or (len(cols) and (cols.min() < 0 or cols.max() >= n)):
            raise ValueError("columns out of range")
        remap = np.full(n + 1, -1, dtype=np.int64)
        remap[cols] = np.arange(len(cols))
        trial_dof = remap[space.local_dof]  # local_dof == -1 hits the sentinel slot
    test = _Geometry(space, quad)
    trial = _Geometry(space, quad, dof=trial_dof)
    used = np.flatnonzero((trial_dof >= 0).any(axis=1))
    sub = [a[used] for a in trial.args()]
    out = np.zeros((n, len(cols)), dtype=np.complex128)
    s = quad.singular_order
    _kernels.assemble_double_layer(
        out, k, *test.args(), *sub, np.ascontiguousarray(trial.nrm[used]),
        sauter_schwab("edge", s), sauter_schwab("vertex", s), float(quad.near_threshold),
    )
    m = assemble_mass(space).data if mass is None else np.asarray(mass)
    out += 0.5 * m[:, cols]
    return BoundaryOperatorMatrix(OperatorKind.DOUBLE_LAYER_KN, space, out, None if columns is None else cols, k)


def assemble_TSigma(maps, ctx, quad=None):
    """Single-layer matrix on the interface alone, from the interface triangles only."""
    return assemble_T(maps.sigma_space, ctx, quad)


def dump_matrix(matrix, path):
    """Write ``n:u64`` then ``n*n`` complex entries ``(f64 re, f64 im)`` row-major, little-endian."""
    a = np.asarray(getattr(matrix, "data", matrix))
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    with open(path, "wb") as fh:
        fh.write(np.uint64(a.shape[0]).astype("<u8").tobytes())
        fh.write(np.ascontiguousarray(a, dtype="<c16").tobytes())


def load_matrix(path):
    raw = open(path, "rb").read()
    if len(raw) < 8:
        raise ValueError("truncated matrix file")
    n = int(np.frombuffer(raw[:8], dtype="<u8")[0])
    if len(raw) != 8 + 16 * n * n:
        raise ValueError(f"matrix file size does not match n = {n}")
    return np.frombuffer(raw[8:], dtype="<c16").reshape(n, n).copy()
