import numpy as np
import pytest

from ddmbem.bem import (
    OperatorKind,
    QuadratureRule,
    WaveContext,
    assemble_Kn,
    assemble_mass,
    assemble_T,
    assemble_TSigma,
    dump_matrix,
    green_gradient,
    green_kernel,
    load_matrix,
    triangle_rule,
)
from ddmbem.mesh import build_spaces, generate_open_box, generate_uv_sphere

K = 2 * np.pi * 68e6 / 299_792_458.0


@pytest.fixture(scope="module")
def space():
    return build_spaces(generate_uv_sphere(0.5, 8, 8)).plus_space


@pytest.fixture(scope="module")
def T(space):
    return assemble_T(space, WaveContext.from_wavenumber(K))


@pytest.fixture(scope="module")
def Kn(space):
    return assemble_Kn(space, K)


def _basis(space, i, npts):
    """Quadrature points, weights, values and divergence of basis ``i`` on its two triangles."""
    b, w = triangle_rule(npts)
    c = np.zeros(space.dof_count)
    c[i] = 1.0
    pts, vals = space.evaluate(c, b)
    on = np.flatnonzero((space.local_dof == i).any(axis=1))
    div = np.where(space.local_dof == i, space.divergence(), 0).sum(axis=1)
    wts = np.outer(space.support_areas, w)
    nrm = space.support_normals
    return pts[on].reshape(-1, 3), wts[on].ravel(), vals[on].reshape(-1, 3), np.repeat(div[on], len(w)), np.repeat(nrm[on], len(w), axis=0)


def _far_pair(space):
    cen = space.mesh.centroids
    a = cen[space.tri_plus]
    d = np.linalg.norm(a[:, None] - a[None], axis=2)
    i, j = np.unravel_index(np.argmax(d), d.shape)
    return i, j


@pytest.mark.parametrize("npts", [4, 7])
def test_T_far_entry_brute_force(space, T, npts):
    i, j = _far_pair(space)
    xi, wi, fi, di, _ = _basis(space, i, npts)
    yj, wj, fj, dj, _ = _basis(space, j, npts)
    g = green_kernel(xi[:, None], yj[None], K) * np.outer(wi, wj)
    ref = (K**2 * np.einsum("ab,ad,bd->", g, fi, fj) - np.einsum("ab,a,b->", g, di, dj)) / (1j * K)
    tol = 1e-12 if npts == 4 else 1e-3
    assert abs(T.data[i, j] - ref) < tol * abs(ref)


@pytest.mark.parametrize("npts", [4, 7])
def test_Kn_far_entry_brute_force(space, Kn, npts):
    i, j = _far_pair(space)
    xi, wi, fi, _, _ = _basis(space, i, npts)
    yj, wj, fj, _, nj = _basis(space, j, npts)
    grad = green_gradient(xi[:, None], yj[None], K)
    m = np.cross(nj, fj)
    ref = np.einsum("ad,abd,a,b->", fi, np.cross(grad, m[None]), wi, wj)
    tol = 1e-12 if npts == 4 else 1e-3
    assert abs(Kn.data[i, j] - ref) < tol * abs(ref)


def test_mass_closed_form(space):
    M = assemble_mass(space)
    assert M.kind is OperatorKind.MASS
    # int_T (x - p_a).(x - p_b) = A [(c - p_a).(c - p_b) + sum_k |v_k - c|^2 / 12]
    ref = np.zeros_like(M.data)
    for t, v in enumerate(space.support_vertices):
        c = v.mean(axis=0)
        A = space.support_areas[t]
        second = np.sum((v - c) ** 2) / 12
        for a in range(3):
            for b in range(3):
                ia, ib = space.local_dof[t, a], space.local_dof[t, b]
                if ia < 0 or ib < 0:
                    continue
                val = A * ((c - v[a]) @ (c - v[b]) + second)
                ref[ia, ib] += space.local_coef[t, a] * space.local_coef[t, b] * val
    assert np.allclose(M.data, ref, rtol=1e-12, atol=1e-15)
    w = np.linalg.eigvalsh(M.data)
    assert w.min() > 0
    assert np.allclose(M.data, M.data.T)


def test_T_symmetric(T):
    assert T.kind is OperatorKind.SINGLE_LAYER_T
    assert np.allclose(T.data, T.data.T, rtol=0, atol=1e-13 * abs(T.data).max())
    assert T.wavenumber == pytest.approx(K)


def test_Kn_sides_sum_to_mass():
    maps = build_spaces(generate_uv_sphere(0.5, 8, 8))
    kp = assemble_Kn(maps.plus_space, K).data
    km = assemble_Kn(maps.minus_space, K).data
    M = assemble_mass(maps.plus_space).data
    assert np.abs(kp + km - M).max() < 1e-12 * np.abs(M).max()


def test_Kn_columns_match_full(space, Kn):
    cols = np.array([3, 17, 100])
    part = assemble_Kn(space, K, columns=cols)
    assert np.array_equal(part.columns, cols)
    assert np.allclose(part.data, Kn.data[:, cols], rtol=0, atol=1e-14)
    with pytest.raises(ValueError, match="columns"):
        assemble_Kn(space, K, columns=[space.dof_count])


def test_self_convergence_under_refined_quadrature(space, T, Kn):
    fine = QuadratureRule().refined()
    T2 = assemble_T(space, K, fine).data
    K2 = assemble_Kn(space, K, fine).data
    assert np.linalg.norm(T.data - T2) < 1e-3 * np.linalg.norm(T2)
    assert np.linalg.norm(Kn.data - K2) < 1e-3 * np.linalg.norm(K2)


def test_TSigma_is_interface_block_on_artificial_sphere(T):
    maps = build_spaces(generate_uv_sphere(0.5, 8, 8))
    ts = assemble_TSigma(maps, K)
    assert np.allclose(ts.data, T.data)


def test_TSigma_on_open_interface():
    maps = build_spaces(generate_open_box(resolution=1 / 3))
    ts = assemble_TSigma(maps, 2.0)
    assert ts.shape == (maps.n_interface,) * 2
    assert ts.space is maps.sigma_space


def test_negative_wavenumber_rejected(space):
    with pytest.raises(ValueError):
        assemble_T(space, -1.0)


def test_dump_round_trip(tmp_path, T):
    p = tmp_path / "t.bin"
    dump_matrix(T, p)
    raw = p.read_bytes()
    assert len(raw) == 8 + 16 * T.shape[0] ** 2
    assert np.array_equal(load_matrix(p), T.data)
    p.write_bytes(raw[:-3])
    with pytest.raises(ValueError):
        load_matrix(p)
    with pytest.raises(ValueError):
        dump_matrix(np.zeros((2, 3)), p)
