import numpy as np
import pytest

from ddmbem.admittance import (
    AdmittanceOperator,
    InnerSolver,
    ResonanceError,
    ShellSolver,
    assemble_shells,
    build_admittance,
)
from ddmbem.bem import WaveContext, assemble_mass, assemble_T, assemble_TSigma
from ddmbem.mesh import build_spaces, generate_uv_sphere

CTX = WaveContext.from_mhz(68.0)


@pytest.fixture(scope="module")
def shells(sphere168_maps):
    return assemble_shells(sphere168_maps, CTX)


def test_minus_side_reuses_plus_when_shells_coincide(sphere168_maps, shells):
    assert shells.solvers["minus"] is shells.solvers["plus"]
    M = shells.mass["plus"]
    assert np.allclose(shells.kn["plus"] + shells.kn["minus"], M, atol=1e-14)


def test_neumann_gap_identity(sphere168_maps, shells, rng):
    # [M]^-1 [T_S] (A+ + A-) = Id when both shells are the whole interface
    maps = sphere168_maps
    ap = build_admittance(maps, CTX, side="plus", shells=shells)
    am = build_admittance(maps, CTX, side="minus", shells=shells)
    ts = assemble_TSigma(maps, CTX).data
    M = assemble_mass(maps.sigma_space).data
    v = rng.standard_normal(maps.n_interface) + 1j * rng.standard_normal(maps.n_interface)
    w = np.linalg.solve(M, ts @ (ap(v) + am(v)))
    assert np.linalg.norm(w - v) < 1e-10 * np.linalg.norm(v)


def test_admittance_is_linear(sphere168_maps, shells, rng):
    ap = build_admittance(sphere168_maps, CTX, side="plus", shells=shells)
    n = ap.n
    u, v = rng.standard_normal(n), rng.standard_normal(n) * 1j
    a, b = 0.3 - 2j, 1.7
    assert np.allclose(ap(a * u + b * v), a * ap(u) + b * ap(v))
    assert not ap(np.zeros(n)).any()


def test_shell_current_solves_efie(sphere168_maps, shells, rng):
    maps = sphere168_maps
    ap = build_admittance(maps, CTX, side="plus", shells=shells)
    v = rng.standard_normal(maps.n_interface)
    u = ap.shell_current(v)
    T = assemble_T(maps.plus_space, CTX).data
    assert np.allclose(T @ u, shells.kn["plus"] @ v)
    assert np.allclose(ap(v), maps.restrict(u, "plus"))
    with pytest.raises(ValueError, match="length"):
        ap.shell_current(np.ones(3))


def test_gmres_inner_solver_matches_direct(sphere168_maps, shells, rng):
    maps = sphere168_maps
    it = assemble_shells(maps, CTX, inner=InnerSolver("gmres", 1e-11))
    v = rng.standard_normal(maps.n_interface)
    a = build_admittance(maps, CTX, side="plus", shells=shells)(v)
    b = build_admittance(maps, CTX, side="plus", shells=it)(v)
    assert np.linalg.norm(a - b) < 1e-8 * np.linalg.norm(a)
    assert it.solvers["plus"].inner_iterations


def test_inner_solver_validation():
    with pytest.raises(ValueError):
        InnerSolver("cholesky")
    with pytest.raises(ValueError):
        build_admittance(build_spaces(generate_uv_sphere(0.5, 4, 3)), CTX, side="up")


def test_resonance_detected(sphere168_maps):
    # first interior resonance of this sphere mesh (located by an rcond scan)
    with pytest.raises(ResonanceError, match="resonance") as err:
        assemble_shells(sphere168_maps, WaveContext.from_mhz(272.6842217785198))
    assert err.value.rcond < 1e-4


def test_no_false_resonance_off_resonance(sphere168_maps):
    solver = assemble_shells(sphere168_maps, WaveContext.from_mhz(200.0)).solvers["plus"]
    assert solver.rcond > 0


def test_singular_matrix_raises():
    from ddmbem.bem.assembly import BoundaryOperatorMatrix, OperatorKind

    T = BoundaryOperatorMatrix(OperatorKind.SINGLE_LAYER_T, None, np.ones((5, 5), complex), wavenumber=1.0)
    with pytest.raises(ResonanceError):
        ShellSolver(T)
