"""Mesh generators for the benchmark geometries: spheres, hollow spheres and open boxes."""

import numpy as np

from .core import MeshError, Region, SurfaceMesh


def _tag(triangles, is_sigma):
    """Tag triangles: SIGMA where ``is_sigma``, the rest duplicated as a GD_PLUS/GD_MINUS sheet."""
    triangles = np.asarray(triangles)
    sig = triangles[is_sigma]
    gd = triangles[~is_sigma]
    tris = np.concatenate([sig, gd, gd])
    regions = np.concatenate(
        [
            np.full(len(sig), Region.SIGMA),
            np.full(len(gd), Region.GD_PLUS),
            np.full(len(gd), Region.GD_MINUS),
        ]
    )
    return tris, regions


def _icosahedron():
    t = (1 + 5**0.5) / 2
    v = np.array(
        [
            [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
            [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
            [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
        ],
        dtype=float,
    )
    f = np.array(
        [
            [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
            [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
            [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
            [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
        ]
    )
    return v / np.linalg.norm(v, axis=1)[:, None], f


def _subdivide(vertices, faces):
    verts = list(map(tuple, vertices))
    cache = {}

    def midpoint(i, j):
        key = (min(i, j), max(i, j))
        if key not in cache:
            m = (np.asarray(verts[i]) + np.asarray(verts[j])) / 2
            verts.append(tuple(m / np.linalg.norm(m)))
            cache[key] = len(verts) - 1
        return cache[key]

    out = []
    for a, b, c in faces:
        ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
        out += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
    return np.array(verts), np.array(out)


def generate_sphere(radius, refinement, cap_latitude_deg=None):
    """Icosphere of the given radius, subdivided ``refinement`` times.

    Without a cap every triangle is ``SIGMA`` (a fictitious sphere in free
    space). With ``cap_latitude_deg`` the triangles whose centroid lies above
    that latitude form the interface cap and the rest is a thin metallic
    sheet (a hollow sphere open at the top).
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if refinement < 0:
        raise ValueError("refinement must be >= 0")
    v, f = _icosahedron()
    for _ in range(int(refinement)):
        v, f = _subdivide(v, f)
    v = radius * v
    if cap_latitude_deg is None:
        tris, regions = f, np.full(len(f), Region.SIGMA)
        name = f"icosphere{refinement}"
    else:
        c = v[f].mean(axis=1)
        lat = np.degrees(np.arcsin(np.clip(c[:, 2] / np.linalg.norm(c, axis=1), -1, 1)))
        tris, regions = _tag(f, lat > cap_latitude_deg)
        name = f"hollow-icosphere{refinement}"
    return SurfaceMesh(v, tris, regions, name=name).validate()


def _uv_sphere(radius, n_lon, latitudes):
    """Latitude-longitude sphere; ``latitudes`` are the ring latitudes (deg) strictly between the poles, south to north."""
    lat = np.radians(np.asarray(latitudes, dtype=float))
    lon = 2 * np.pi * np.arange(n_lon) / n_lon
    rings = len(lat)
    south = np.array([[0.0, 0.0, -1.0]])
    north = np.array([[0.0, 0.0, 1.0]])
    ring_pts = np.stack(
        [
            np.cos(lat)[:, None] * np.cos(lon)[None, :],
            np.cos(lat)[:, None] * np.sin(lon)[None, :],
            np.repeat(np.sin(lat)[:, None], n_lon, axis=1),
        ],
        axis=-1,
    ).reshape(-1, 3)
    verts = radius * np.concatenate([south, ring_pts, north])

    def ring(r, j):
        return 1 + r * n_lon + (j % n_lon)

    s, n = 0, len(verts) - 1
    tris, band = [], []
    for j in range(n_lon):
        tris.append([s, ring(0, j + 1), ring(0, j)])
        band.append(0)
    for r in range(rings - 1):
        for j in range(n_lon):
            a, b = ring(r, j), ring(r, j + 1)
            c, d = ring(r + 1, j), ring(r + 1, j + 1)
            tris += [[a, b, d], [a, d, c]]
            band += [r + 1, r + 1]
    for j in range(n_lon):
        tris.append([n, ring(rings - 1, j), ring(rings - 1, j + 1)])
        band.append(rings)
    return verts, np.array(tris), np.array(band)


def generate_uv_sphere(radius, n_lon, n_bands):
    """Latitude-longitude sphere with ``n_lon`` meridians and ``n_bands`` equal latitude bands, all ``SIGMA``.

    It carries ``3 * n_lon * (n_bands - 1)`` RWG unknowns; ``(8, 8)`` gives
    168, ``(32, 33)`` gives 3072.
    """
    if radius <= 0 or n_lon < 3 or n_bands < 2:
        raise ValueError("need radius > 0, n_lon >= 3, n_bands >= 2")
    lats = np.linspace(-90, 90, n_bands + 1)[1:-1]
    v, f, _ = _uv_sphere(radius, n_lon, lats)
    return SurfaceMesh(v, f, np.full(len(f), Region.SIGMA), name=f"uvsphere{n_lon}x{n_bands}").validate()


HOLLOW_FAMILY = (12, 15, 20, 25, 30, 35)


def hollow_sphere(n, radius=1.0, cap_latitude_deg=45.0):
    """Sphere open above ``cap_latitude_deg``, from the ``hollow<n>`` family.

    ``2n`` meridians; the cap is split into ``n + 1`` latitude bands and the
    metallic part into ``5n`` bands. The interface carries ``6n^2 + 2n``
    unknowns and each closed shell ``36 n^2`` (``n = 12`` gives 888 / 5184).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    lower = np.linspace(-90.0, cap_latitude_deg, 5 * n + 1)[1:]
    upper = np.linspace(cap_latitude_deg, 90.0, n + 2)[1:-1]
    v, f, band = _uv_sphere(radius, 2 * n, np.concatenate([lower, upper]))
    tris, regions = _tag(f, band >= 5 * n)
    return SurfaceMesh(v, tris, regions, name=f"hollow{n}").validate()


_AXES = {"x": 0, "y": 1, "z": 2}


def generate_open_box(dimensions=(1.0, 1.0, 1.0), open_face=("x", 1), resolution=1 / 6):
    """Thin-walled box with one face removed and replaced by a flat ``SIGMA`` patch.

    Parameters
    ----------
    dimensions : 3 floats
        Edge lengths along x, y, z (m); the box spans ``[0, L]`` on each axis.
    open_face : (axis, side)
        Which face is open, e.g. ``("x", 1)`` for the face at ``x = Lx``.
    resolution : float
        Target edge length (m). Each axis gets ``ceil(L / resolution)``
        divisions; a face needs at least 2 along both of its axes.

    The five walls are a zero-thickness metallic sheet, stored once as
    ``GD_PLUS`` (outer side) and once as ``GD_MINUS`` (cavity side).
    """
    dims = np.asarray(dimensions, dtype=float)
    if dims.shape != (3,) or np.any(dims <= 0) or resolution <= 0:
        raise ValueError("need three positive dimensions and a positive resolution")
    axis, side = open_face
    axis = _AXES[axis] if isinstance(axis, str) else int(axis)
    side = 1 if side in (1, "+", "+1", "max") else 0
    m = np.ceil(dims / resolution - 1e-9).astype(int)
    if np.any(m < 2):
        raise MeshError(f"resolution {resolution} too coarse: fewer than 2 elements across a face")

    index = {}
    verts = []

    def vid(ijk):
        if ijk not in index:
            index[ijk] = len(verts)
            verts.append(np.array(ijk) / m * dims)
        return index[ijk]

    tris, sigma = [], []
    for a in range(3):
        b, c = (a + 1) % 3, (a + 2) % 3
        for s in (0, 1):
            for i in range(m[b]):
                for j in range(m[c]):
                    quad = []
                    for di, dj in ((0, 0), (1, 0), (1, 1), (0, 1)):
                        ijk = [0, 0, 0]
                        ijk[a] = s * m[a]
                        ijk[b] = i + di
                        ijk[c] = j + dj
                        quad.append(vid(tuple(ijk)))
                    p0, p1, p2, p3 = quad
                    # (b, c, a) is right-handed: counter-clockwise in (b, c) points along +a
                    pair = [[p0, p1, p2], [p0, p2, p3]] if (i + j) % 2 == 0 else [[p0, p1, p3], [p1, p2, p3]]
                    if s == 0:
                        pair = [t[::-1] for t in pair]
                    tris += pair
                    sigma += [a == axis and s == side] * 2
    tris, regions = _tag(np.array(tris), np.array(sigma))
    name = "open-box-{}x{}x{}".format(*m)
    return SurfaceMesh(np.array(verts), tris, regions, name=name).validate()


def box_resolution_for(target_dofs, side_length=1.0):
    """Resolution whose square-patch triangulation has the interior-edge count closest to ``target_dofs``."""
    best = min(range(2, 200), key=lambda m: abs(3 * m * m - 2 * m - target_dofs))
    return side_length / best
