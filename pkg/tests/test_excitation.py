import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ddmbem.bem import QuadratureRule, WaveContext
from ddmbem.excitation import PlaneWave, project_rotated_H, project_tangential_E, spherical_basis
from ddmbem.mesh import build_spaces, generate_uv_sphere

CTX = WaveContext.from_mhz(100.0)
angles = st.tuples(st.floats(0, 180), st.floats(0, 360), st.sampled_from(["theta", "phi"]))


@settings(max_examples=30, deadline=None)
@given(angles)
def test_plane_wave_is_transverse_and_satisfies_curl(a):
    theta, phi, pol = a
    w = PlaneWave.from_angles(theta, phi, pol, CTX)
    assert abs(w.direction @ w.polarization) < 1e-12
    x = np.array([0.3, -0.1, 0.7])
    # H = (1/ik) curl E by central differences
    h = 1e-6
    J = np.stack([(w.eval_E_inc(x + h * e) - w.eval_E_inc(x - h * e)) / (2 * h) for e in np.eye(3)])  # J[j, i] = dE_i/dx_j
    curl = np.array([J[1, 2] - J[2, 1], J[2, 0] - J[0, 2], J[0, 1] - J[1, 0]])
    assert np.allclose(curl / (1j * CTX.k), w.eval_H_inc(x), atol=1e-6)


def test_spherical_basis_orthonormal():
    r, t, p = spherical_basis(np.array([10.0, 95.0]), np.array([30.0, 200.0]))
    for u, v in ((r, t), (t, p), (r, p)):
        assert np.allclose(np.sum(u * v, axis=-1), 0)
    assert np.allclose(np.cross(r, t), p)


def test_from_angles_direction():
    w = PlaneWave.from_angles(180, 0, "theta", CTX)
    assert np.allclose(w.direction, [0, 0, -1])
    assert np.allclose(w.polarization, [-1, 0, 0])


def test_validation():
    with pytest.raises(ValueError):
        PlaneWave([0, 0, 1.0], [0, 0, 1.0], CTX)
    with pytest.raises(ValueError):
        PlaneWave([0, 0, 2.0], [1.0, 0, 0], CTX)
    with pytest.raises(ValueError):
        PlaneWave.from_angles(0, 0, "x", CTX)


def test_loads_match_dense_quadrature():
    space = build_spaces(generate_uv_sphere(1.0, 6, 5)).plus_space
    w = PlaneWave.from_angles(40, 20, "phi", CTX)
    b = project_tangential_E(space, w)
    fine = project_tangential_E(space, w, QuadratureRule(load_order=14))
    assert np.allclose(b, fine, rtol=0, atol=1e-9 * np.abs(fine).max())
    # a constant field reduces to the mass-matrix style integral int theta_i . p, exact at any order
    k0 = WaveContext.from_wavenumber(1e-12)
    w0 = PlaneWave([0, 0, 1.0], [1.0, 0, 0], k0)
    b0 = project_tangential_E(space, w0, QuadratureRule(load_order=1))
    ref = np.zeros(space.dof_count, dtype=complex)
    for t, v in enumerate(space.support_vertices):
        c = v.mean(axis=0)
        for a in range(3):
            i = space.local_dof[t, a]
            if i >= 0:
                ref[i] += space.local_coef[t, a] * space.support_areas[t] * (c - v[a])[0]
    assert np.allclose(b0, ref, atol=1e-12)


def test_rotated_H_uses_space_normal():
    maps = build_spaces(generate_uv_sphere(1.0, 6, 5))
    w = PlaneWave.from_angles(60, 0, "theta", CTX)
    cp = project_rotated_H(maps.plus_space, w)
    cm = project_rotated_H(maps.minus_space, w)
    assert np.allclose(cp, -cm)
