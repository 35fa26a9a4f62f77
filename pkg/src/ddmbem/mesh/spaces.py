"""RWG (Rao-Wilton-Glisson) spaces on triangle subsets and the interface extension/restriction maps."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core import MeshError, SurfaceMesh, directed_edges


@dataclass(frozen=True, eq=False)
class RwgSpace:
    """Lowest-order div-conforming edge elements on a set of mesh triangles.

    Basis function ``i`` lives on the two triangles adjacent to edge ``i``:
    ``l/(2A+) (x - p+)`` on the plus triangle and ``l/(2A-) (p- - x)`` on the
    minus one, where ``p+-`` are the vertices opposite the edge. Edges on the
    boundary of an open support carry no unknown.

    The plus triangle of an edge ``(a, b)`` with ``a < b`` is the one that
    traverses it from ``a`` to ``b``; with orientation shared across spaces
    this makes basis functions on a common edge identical in every space.

    Attributes
    ----------
    support : (T,) int
        Mesh triangle indices forming the support.
    normal_sign : +1 or -1
        The unit normal used by operators on this space is
        ``normal_sign * mesh.normals``.
    edges : (N, 2) int
        Vertex pairs, sorted.
    tri_plus, tri_minus : (N,) int
        Mesh triangle indices.
    lengths : (N,) float
    local_dof : (T, 3) int
        Unknown attached to local edge ``a`` (opposite local vertex ``a``) of
        each support triangle, ``-1`` if none.
    local_coef : (T, 3) float
        ``+-l / (2A)`` for the same local edges (0 if none).
    """

    mesh: SurfaceMesh
    support: np.ndarray
    normal_sign: int
    edges: np.ndarray
    tri_plus: np.ndarray
    tri_minus: np.ndarray
    lengths: np.ndarray
    local_dof: np.ndarray
    local_coef: np.ndarray

    @property
    def dof_count(self):
        return len(self.edges)

    def __len__(self):
        return len(self.edges)

    @cached_property
    def support_vertices(self):
        """(T, 3, 3) vertex coordinates of the support triangles."""
        return self.mesh.vertices[self.mesh.triangles[self.support]]

    @cached_property
    def support_normals(self):
        return self.normal_sign * self.mesh.normals[self.support]

    @cached_property
    def support_areas(self):
        return self.mesh.areas[self.support]

    def divergence(self):
        """(T, 3) piecewise-constant surface divergence of each local basis function."""
        return 2.0 * self.local_coef

    def evaluate(self, coeffs, points_bary):
        """Evaluate ``sum_i coeffs[i] * theta_i`` at barycentric points on each support triangle.

        Returns ``(points (T, Q, 3), values (T, Q, 3))``.
        """
        coeffs = np.asarray(coeffs)
        v = self.support_vertices
        pts = np.einsum("qk,tkd->tqd", points_bary, v)
        c = np.where(self.local_dof >= 0, coeffs[np.maximum(self.local_dof, 0)], 0) * self.local_coef
        vals = np.einsum("ta,tqd->tqd", c, pts) - np.einsum("ta,tad->td", c, v)[:, None, :]
        return pts, vals


def _edge_keys(triangles, n_vertices):
    d = directed_edges(triangles)
    lo = np.minimum(d[..., 0], d[..., 1])
    hi = np.maximum(d[..., 0], d[..., 1])
    return lo * n_vertices + hi, d[..., 0] < d[..., 1]


def rwg_space(mesh, support, normal_sign=1, leading=None):
    """Build the RWG space on the mesh triangles ``support``.

    ``leading`` is an optional ``(K, 2)`` array of vertex pairs that must be
    numbered first, in that order (all must be interior to the support).
    """
    support = np.asarray(support, dtype=np.int64)
    tris = mesh.triangles[support]
    nv = len(mesh.vertices)
    keys, forward = _edge_keys(tris, nv)
    flat = keys.ravel()
    uniq, inverse, counts = np.unique(flat, return_inverse=True, return_counts=True)
    if np.any(counts > 2):
        raise MeshError("edge shared by more than two triangles in one space")
    interior = counts == 2

    # order: leading edges first, then the remaining interior edges by key
    interior_keys = uniq[interior]
    if leading is not None and len(leading):
        lead = np.asarray(leading, dtype=np.int64)
        lead_keys = lead.min(axis=1) * nv + lead.max(axis=1)
        pos = np.searchsorted(uniq, lead_keys)
        if np.any(pos >= len(uniq)) or np.any(uniq[np.minimum(pos, len(uniq) - 1)] != lead_keys) or not np.all(interior[pos]):
            raise MeshError("leading edges must be interior edges of the support")
        rest = np.setdiff1d(interior_keys, lead_keys, assume_unique=True)
        ordered = np.concatenate([lead_keys, rest])
    else:
        ordered = interior_keys
    n = len(ordered)
    dof_of_key = np.full(len(uniq), -1, dtype=np.int64)
    dof_of_key[np.searchsorted(uniq, ordered)] = np.arange(n)

    local_dof = dof_of_key[inverse].reshape(-1, 3)
    flat_fwd = forward.ravel()
    slot = np.flatnonzero(local_dof.ravel() >= 0)
    dof = local_dof.ravel()[slot]
    tri_local = support[slot // 3]
    plus_mask = flat_fwd[slot]
    tri_plus = np.empty(n, dtype=np.int64)
    tri_minus = np.empty(n, dtype=np.int64)
    tri_plus[dof[plus_mask]] = tri_local[plus_mask]
    tri_minus[dof[~plus_mask]] = tri_local[~plus_mask]
    if np.bincount(dof[plus_mask], minlength=n).max(initial=1) != 1 or np.bincount(dof[~plus_mask], minlength=n).min(initial=1) != 1:
        raise MeshError("inconsistent orientation within space support")

    edges = np.stack([ordered // nv, ordered % nv], axis=1)
    lengths = np.linalg.norm(mesh.vertices[edges[:, 0]] - mesh.vertices[edges[:, 1]], axis=1)
    sign = np.where(forward, 1.0, -1.0)
    areas = mesh.areas[support]
    elen = np.where(local_dof >= 0, lengths[np.maximum(local_dof, 0)], 0.0) if n else np.zeros(local_dof.shape)
    local_coef = np.where(local_dof >= 0, sign * elen / (2 * areas[:, None]), 0.0)
    return RwgSpace(mesh, support, int(normal_sign), edges, tri_plus, tri_minus, lengths, local_dof, local_coef)


def _canonical(triangles):
    """Rotate each triangle so its smallest vertex index comes first (orientation kept)."""
    t = np.asarray(triangles)
    k = np.argmin(t, axis=1)
    idx = (k[:, None] + np.arange(3)[None, :]) % 3
    return np.take_along_axis(t, idx, axis=1)


@dataclass(frozen=True, eq=False)
class InterfaceMaps:
    """RWG spaces on the interface and on both closed shells, with the index maps between them.

    ``embed_plus[i]`` is the index in ``plus_space`` of interface basis
    function ``i`` (likewise for minus). Extension pads by zero; restriction
    extracts those entries.
    """

    mesh: SurfaceMesh
    sigma_space: RwgSpace
    plus_space: RwgSpace
    minus_space: RwgSpace
    embed_plus: np.ndarray
    embed_minus: np.ndarray

    @property
    def n_interface(self):
        return self.sigma_space.dof_count

    def space(self, side):
        return self.plus_space if side == "plus" else self.minus_space

    def embedding(self, side):
        if side == "plus":
            return self.embed_plus
        if side == "minus":
            return self.embed_minus
        raise ValueError(f"unknown side {side!r}")

    def extend(self, coeffs, side):
        coeffs = np.asarray(coeffs)
        if coeffs.shape[0] != self.n_interface:
            raise ValueError(f"length mismatch: got {coeffs.shape[0]}, interface has {self.n_interface}")
        out = np.zeros((self.space(side).dof_count,) + coeffs.shape[1:], dtype=coeffs.dtype)
        out[self.embedding(side)] = coeffs
        return out

    def restrict(self, coeffs, side):
        coeffs = np.asarray(coeffs)
        n = self.space(side).dof_count
        if coeffs.shape[0] != n:
            raise ValueError(f"length mismatch: got {coeffs.shape[0]}, {side} shell has {n}")
        return coeffs[self.embedding(side)]

    @cached_property
    def shells_coincide(self):
        """True when both shells are the same oriented surface with identical numbering (thin sheets, fictitious spheres)."""
        t = self.mesh.triangles
        a = _canonical(t[self.plus_space.support])
        b = _canonical(t[self.minus_space.support])
        if a.shape != b.shape:
            return False
        a = a[np.lexsort(a.T[::-1])]
        b = b[np.lexsort(b.T[::-1])]
        return bool(np.array_equal(a, b)) and np.array_equal(self.plus_space.edges, self.minus_space.edges)


def build_spaces(mesh):
    """Interface space on the ``SIGMA`` triangles and both shell spaces, interface edges numbered first."""
    sig = mesh.region_triangles(2)
    sigma_space = rwg_space(mesh, sig, normal_sign=1)
    if sigma_space.dof_count == 0:
        raise MeshError("interface has no interior edges (N = 0)")
    plus = rwg_space(mesh, mesh.shell_triangles("plus"), normal_sign=1, leading=sigma_space.edges)
    minus = rwg_space(mesh, mesh.shell_triangles("minus"), normal_sign=-1, leading=sigma_space.edges)
    n = sigma_space.dof_count
    embed = np.arange(n)
    for space in (plus, minus):
        same = np.array_equal(space.tri_plus[:n], sigma_space.tri_plus) and np.array_equal(space.tri_minus[:n], sigma_space.tri_minus)
        if not same:
            raise MeshError("interface basis functions differ between interface and shell spaces")
    return InterfaceMaps(mesh, sigma_space, plus, minus, embed, embed.copy())
