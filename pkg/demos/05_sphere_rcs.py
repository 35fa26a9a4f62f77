# %% [markdown]
# # Monolithic EFIE against the sphere series solution
#
# PEC sphere, radius 0.5 m, k = 2 rad/m (ka = 1).

# %%
import numpy as np

from ddmbem.bem import WaveContext
from ddmbem.excitation import PlaneWave
from ddmbem.mesh import generate_uv_sphere
from ddmbem.postprocess import bistatic_cut, mie_far_field, monolithic_efie, rcs

ctx = WaveContext.from_wavenumber(2.0)
wave = PlaneWave.from_angles(180, 0, "theta", ctx)
theta, phi, dirs = bistatic_cut(181)
ref = rcs(mie_far_field(0.5, 2.0, wave.direction, wave.polarization, dirs))

# %%
for n in (8, 12, 16):
    sol = monolithic_efie(generate_uv_sphere(0.5, n, n), ctx, wave, directions=dirs)
    err = np.abs(sol.rcs_dbsm - ref)
    print(f"{sol.space.dof_count:5d} unknowns: max RCS error {err.max():.3f} dB")

# %%
for t in range(0, 181, 20):
    print(f"theta {t:3d}: EFIE {sol.rcs_dbsm[t]:7.2f}   series {ref[t]:7.2f} dBsm")
