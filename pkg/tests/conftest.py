import numpy as np
import pytest

from ddmbem.bem import QuadratureRule, WaveContext
from ddmbem.ddm import build_system
from ddmbem.excitation import PlaneWave
from ddmbem.mesh import build_spaces, generate_open_box, generate_uv_sphere


@pytest.fixture(scope="session")
def sphere168():
    return generate_uv_sphere(0.5, 8, 8)


@pytest.fixture(scope="session")
def sphere168_maps(sphere168):
    return build_spaces(sphere168)


@pytest.fixture(scope="session")
def sphere168_system(sphere168_maps):
    ctx = WaveContext.from_mhz(68.0)
    wave = PlaneWave.from_angles(180, 0, "theta", ctx)
    return build_system(sphere168_maps, ctx, wave, QuadratureRule())


@pytest.fixture(scope="session")
def box4():
    return generate_open_box(resolution=1 / 4)


@pytest.fixture(scope="session")
def box4_system(box4):
    ctx = WaveContext.from_mhz(100.0)
    wave = PlaneWave.from_angles(90, 180, "theta", ctx)
    return build_system(build_spaces(box4), ctx, wave)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
