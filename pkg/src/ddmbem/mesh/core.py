"""Tagged triangle surface meshes and their validation."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

MIN_TRIANGLE_AREA = 1e-14


class MeshError(ValueError):
    """Raised when a surface mesh violates one of its structural invariants."""


class Region(enum.IntEnum):
    """Per-triangle tag of a partitioned scatterer surface."""

    GD_PLUS = 0
    GD_MINUS = 1
    SIGMA = 2


#: file tag <-> region
TAGS = {"GDP": Region.GD_PLUS, "GDM": Region.GD_MINUS, "SIG": Region.SIGMA}
TAG_NAMES = {v: k for k, v in TAGS.items()}


def triangle_areas(vertices, triangles):
    p = vertices[triangles]
    return 0.5 * np.linalg.norm(np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]), axis=1)


def directed_edges(triangles):
    """Directed edges (F, 3, 2) with edge ``a`` opposite local vertex ``a``."""
    t = np.asarray(triangles)
    return np.stack(
        [t[:, [1, 2]], t[:, [2, 0]], t[:, [0, 1]]],
        axis=1,
    )


def check_closed_shell(triangles, name="shell"):
    """Check that a triangle set is a closed, consistently oriented 2-manifold.

    Every undirected edge must appear in exactly two triangles, once in
    each direction.
    """
    if len(triangles) == 0:
        raise MeshError(f"{name}: shell not closed (no triangles)")
    d = directed_edges(triangles).reshape(-1, 2)
    lo = np.minimum(d[:, 0], d[:, 1])
    hi = np.maximum(d[:, 0], d[:, 1])
    forward = d[:, 0] < d[:, 1]
    keys = lo.astype(np.int64) * (int(hi.max()) + 1) + hi
    uniq, inverse, counts = np.unique(keys, return_inverse=True, return_counts=True)
    if np.any(counts != 2):
        raise MeshError(f"{name}: shell not closed ({np.sum(counts != 2)} edges not shared by exactly 2 triangles)")
    n_forward = np.bincount(inverse, weights=forward, minlength=len(uniq))
    if np.any(n_forward != 1):
        raise MeshError(f"{name}: inconsistent orientation ({np.sum(n_forward != 1)} edges)")


def signed_volume(vertices, triangles):
    p = vertices[triangles]
    return np.einsum("ij,ij->i", p[:, 0], np.cross(p[:, 1], p[:, 2])).sum() / 6.0


def euler_characteristic(triangles):
    t = np.asarray(triangles)
    d = directed_edges(t).reshape(-1, 2)
    edges = np.unique(np.sort(d, axis=1), axis=0)
    return len(np.unique(t)) - len(edges) + len(t)


@dataclass(frozen=True, eq=False)
class SurfaceMesh:
    """Triangulated scatterer surface split into ``GD_PLUS``, ``GD_MINUS`` and ``SIGMA`` triangles.

    Triangles are stored so that their right-hand normal points out of the
    bounded region enclosed by each shell. The exterior shell is
    ``GD_PLUS + SIGMA`` and the cavity shell is ``GD_MINUS + SIGMA``; the
    normal pointing into the exterior domain is the stored one, the normal
    pointing into the cavity is its opposite.

    A zero-thickness metallic sheet appears twice, once tagged ``GD_PLUS``
    and once ``GD_MINUS``, sharing vertices and orientation.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    regions: np.ndarray
    name: str = field(default="mesh", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", np.ascontiguousarray(self.vertices, dtype=float))
        object.__setattr__(self, "triangles", np.ascontiguousarray(self.triangles, dtype=np.int64))
        object.__setattr__(self, "regions", np.ascontiguousarray(self.regions, dtype=np.int8))
        for a in (self.vertices, self.triangles, self.regions):
            a.setflags(write=False)

    @property
    def n_triangles(self):
        return len(self.triangles)

    @cached_property
    def areas(self):
        return triangle_areas(self.vertices, self.triangles)

    @cached_property
    def normals(self):
        p = self.vertices[self.triangles]
        n = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
        return n / np.linalg.norm(n, axis=1)[:, None]

    @cached_property
    def centroids(self):
        return self.vertices[self.triangles].mean(axis=1)

    def region_triangles(self, *regions):
        return np.flatnonzero(np.isin(self.regions, [int(r) for r in regions]))

    def shell_triangles(self, side):
        """Triangle indices of the closed boundary of the exterior (``"plus"``) or cavity (``"minus"``) domain."""
        if side == "plus":
            return self.region_triangles(Region.GD_PLUS, Region.SIGMA)
        if side == "minus":
            return self.region_triangles(Region.GD_MINUS, Region.SIGMA)
        raise ValueError(f"unknown side {side!r}")

    def validate(self):
        """Check every structural invariant; raise :class:`MeshError` on the first violation."""
        v, t = self.vertices, self.triangles
        if v.ndim != 2 or v.shape[1] != 3:
            raise MeshError("vertices must be an (V, 3) array")
        if t.ndim != 2 or t.shape[1] != 3:
            raise MeshError("triangles must be an (F, 3) array")
        if len(self.regions) != len(t):
            raise MeshError("one region tag per triangle required")
        if len(t) and (t.min() < 0 or t.max() >= len(v)):
            raise MeshError("triangle vertex index out of range")
        bad = ~np.isin(self.regions, [int(r) for r in Region])
        if np.any(bad):
            raise MeshError(f"unknown region tag {self.regions[bad][0]}")
        small = np.flatnonzero(self.areas <= MIN_TRIANGLE_AREA)
        if len(small):
            raise MeshError(f"degenerate triangle {small[0]} (area {self.areas[small[0]]:.3e} m^2)")
        if not np.any(self.regions == Region.SIGMA):
            raise MeshError("no SIGMA triangles")
        for side in ("plus", "minus"):
            idx = self.shell_triangles(side)
            check_closed_shell(t[idx], name=f"{side} shell")
            if signed_volume(v, t[idx]) <= 0:
                raise MeshError(f"{side} shell: inconsistent orientation (normals point inward)")
        return self

    def summary(self):
        counts = {TAG_NAMES[r]: int(np.sum(self.regions == r)) for r in Region}
        return f"{self.name}: {len(self.vertices)} vertices, {self.n_triangles} triangles {counts}"
