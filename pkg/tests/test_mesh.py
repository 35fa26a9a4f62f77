import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ddmbem.mesh import (
    MeshError,
    Region,
    SurfaceMesh,
    build_spaces,
    euler_characteristic,
    generate_open_box,
    generate_sphere,
    generate_uv_sphere,
    hollow_sphere,
    load_mesh,
    parse_mesh,
    save_mesh,
    signed_volume,
)


def test_icosahedron_topology():
    m = generate_sphere(1.0, 0)
    assert m.n_triangles == 20
    maps = build_spaces(m)
    assert maps.n_interface == 30
    assert euler_characteristic(m.triangles) == 2


def test_artificial_sphere_all_sigma(sphere168, sphere168_maps):
    assert np.all(sphere168.regions == Region.SIGMA)
    n = sphere168_maps.n_interface
    assert n == 168
    assert sphere168_maps.plus_space.dof_count == n == sphere168_maps.minus_space.dof_count
    assert sorted(sphere168_maps.embed_plus) == list(range(n))
    assert sphere168_maps.shells_coincide


def test_sphere_3072_dof_count():
    assert 3 * 32 * 32 == 3072
    assert build_spaces(generate_uv_sphere(0.5, 32, 33)).n_interface == 3072


def test_hollow12_dof_counts():
    maps = build_spaces(hollow_sphere(12))
    assert maps.n_interface == 888
    assert maps.plus_space.dof_count == 5184 == maps.minus_space.dof_count


def test_capped_icosphere_tags_cap():
    m = generate_sphere(1.0, 2, cap_latitude_deg=45.0)
    c = m.centroids
    lat = np.degrees(np.arcsin(c[:, 2] / np.linalg.norm(c, axis=1)))
    sig = m.regions == Region.SIGMA
    assert np.all(lat[sig] > 45) and np.all(lat[~sig] <= 45)


@pytest.mark.parametrize("m", [generate_uv_sphere(1, 6, 5), hollow_sphere(3), generate_open_box(resolution=1 / 3)])
def test_shells_are_closed_spheres(m):
    for side in ("plus", "minus"):
        tri = m.triangles[m.shell_triangles(side)]
        assert euler_characteristic(tri) == 2
        assert signed_volume(m.vertices, tri) > 0


def test_open_box_partition():
    m = generate_open_box(resolution=1 / 6)
    maps = build_spaces(m)
    assert maps.n_interface == 3 * 36 - 12
    sig = m.centroids[m.regions == Region.SIGMA]
    assert np.allclose(sig[:, 0], 1.0)
    # zero-thickness walls: same triangles on both sides
    gp = m.triangles[m.regions == Region.GD_PLUS]
    gm = m.triangles[m.regions == Region.GD_MINUS]
    assert np.array_equal(gp, gm)
    assert maps.shells_coincide


def test_open_box_too_coarse():
    with pytest.raises(MeshError, match="too coarse"):
        generate_open_box(resolution=1.0)


def test_rim_edges_excluded_from_interface():
    m = generate_open_box(resolution=1 / 3)
    maps = build_spaces(m)
    regions = m.regions
    both_sigma = (regions[maps.sigma_space.tri_plus] == Region.SIGMA) & (regions[maps.sigma_space.tri_minus] == Region.SIGMA)
    assert np.all(both_sigma)
    # rim edges: in the shell but not on the interface
    p = maps.plus_space
    rim = (regions[p.tri_plus] == Region.SIGMA) != (regions[p.tri_minus] == Region.SIGMA)
    assert rim.sum() == 4 * 3
    assert np.all(np.arange(p.dof_count)[rim] >= maps.n_interface)


def test_square_patch_not_closed():
    text = "ddm-mesh 1\nvertices 4\n0 0 0\n1 0 0\n1 1 0\n0 1 0\ntriangles 2\n0 1 2 SIG\n0 2 3 SIG\n"
    with pytest.raises(MeshError, match="shell not closed"):
        parse_mesh(text)


def test_degenerate_triangle_rejected():
    m = generate_sphere(1.0, 0)
    v = m.vertices.copy()
    t = m.triangles
    v[t[0, 1]] = v[t[0, 0]]
    with pytest.raises(MeshError, match="degenerate"):
        SurfaceMesh(v, t, m.regions).validate()


def test_inconsistent_orientation_rejected():
    m = generate_sphere(1.0, 1)
    t = m.triangles.copy()
    t[3] = t[3, ::-1]
    with pytest.raises(MeshError, match="orientation"):
        SurfaceMesh(m.vertices, t, m.regions).validate()


def test_unknown_tag_rejected():
    text = "ddm-mesh 1\nvertices 3\n0 0 0\n1 0 0\n0 1 0\ntriangles 1\n0 1 2 XYZ\n"
    with pytest.raises(MeshError):
        parse_mesh(text)


def test_bad_header_rejected():
    with pytest.raises(MeshError, match="parse error"):
        parse_mesh("mesh 2\n")


def test_file_round_trip(tmp_path):
    m = generate_open_box(resolution=1 / 3)
    path = tmp_path / "box.msh"
    save_mesh(m, path)
    text = path.read_text()
    assert text.startswith("ddm-mesh 1")
    back = load_mesh(path)
    assert np.allclose(back.vertices, m.vertices)
    assert np.array_equal(back.triangles, m.triangles)
    assert np.array_equal(back.regions, m.regions)


def test_comments_ignored():
    m = generate_sphere(1.0, 0)
    lines = ["ddm-mesh 1", "# icosahedron", f"vertices {len(m.vertices)}"]
    lines += [" ".join(repr(float(c)) for c in p) + "  # point" for p in m.vertices]
    lines += [f"triangles {m.n_triangles}"] + [f"{a} {b} {c} SIG" for a, b, c in m.triangles]
    assert parse_mesh("\n".join(lines)).n_triangles == 20


def test_interface_needs_interior_edges():
    # a single SIGMA triangle closing a tetrahedron has no interior edges
    v = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], float)
    t = np.array([[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]])
    r = np.array([Region.GD_PLUS] * 3 + [Region.SIGMA])
    # minus shell is the sigma triangle alone: not closed
    with pytest.raises(MeshError):
        SurfaceMesh(v, t, r).validate()
    r2 = np.array([Region.GD_PLUS, Region.GD_PLUS, Region.GD_PLUS, Region.SIGMA])
    t_full = np.concatenate([t, t[:3]])
    r_full = np.concatenate([r2, [Region.GD_MINUS] * 3])
    m = SurfaceMesh(v, t_full, r_full).validate()
    with pytest.raises(MeshError, match="N = 0"):
        build_spaces(m)


def test_divergence_telescopes(sphere168_maps):
    for space in (sphere168_maps.plus_space, generate_open_box_space()):
        flux = space.divergence() * space.support_areas[:, None]
        total = np.zeros(space.dof_count)
        keep = space.local_dof >= 0
        np.add.at(total, space.local_dof[keep], flux[keep])
        assert np.allclose(total, 0, atol=1e-12)


def generate_open_box_space():
    return build_spaces(generate_open_box(resolution=1 / 3)).minus_space


def test_rwg_normal_continuity():
    space = build_spaces(generate_uv_sphere(1, 6, 5)).plus_space
    mesh = space.mesh
    bary_edge = {0: [0.0, 0.5, 0.5], 1: [0.5, 0.0, 0.5], 2: [0.5, 0.5, 0.0]}
    for i in range(0, space.dof_count, 7):
        vals = []
        for tri in (space.tri_plus[i], space.tri_minus[i]):
            loc = np.flatnonzero(space.support == tri)[0]
            a = int(np.flatnonzero(space.local_dof[loc] == i)[0])
            c = np.zeros(space.dof_count)
            c[i] = 1.0
            pts, f = space.evaluate(c, np.array([bary_edge[a]]))
            v = space.support_vertices[loc]
            e = v[(a + 2) % 3] - v[(a + 1) % 3]
            n_edge = np.cross(e, mesh.normals[tri])
            n_edge /= np.linalg.norm(n_edge)
            vals.append(f[loc, 0] @ n_edge)
        # outward edge normals of the two triangles are opposite: flux out of one enters the other
        assert abs(vals[0] + vals[1]) < 1e-12
        assert abs(vals[0] - 1.0) < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_restrict_extend_identity(seed):
    maps = build_spaces(generate_open_box(resolution=1 / 3))
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(maps.n_interface) + 1j * rng.standard_normal(maps.n_interface)
    for side in ("plus", "minus"):
        assert np.array_equal(maps.restrict(maps.extend(v, side), side), v)
        w = rng.standard_normal(maps.space(side).dof_count)
        pw = maps.extend(maps.restrict(w, side), side)
        assert np.array_equal(maps.extend(maps.restrict(pw, side), side), pw)


def test_extend_unit_vector_and_gd_support():
    maps = build_spaces(generate_open_box(resolution=1 / 3))
    e = np.zeros(maps.n_interface)
    e[0] = 1
    x = maps.extend(e, "plus")
    assert x.sum() == 1 and x[maps.embed_plus[0]] == 1
    w = np.zeros(maps.plus_space.dof_count)
    w[maps.n_interface:] = 1.0
    assert not maps.restrict(w, "plus").any()
    with pytest.raises(ValueError, match="length mismatch"):
        maps.extend(np.zeros(3), "plus")
    with pytest.raises(ValueError, match="length mismatch"):
        maps.restrict(np.zeros(3), "minus")
