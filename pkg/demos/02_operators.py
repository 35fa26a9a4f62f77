# %% [markdown]
# # Boundary operators and the discrete identity behind the preconditioner
#
# On a fictitious sphere both sides are free space. The sum of the two
# admittances is then the inverse of the single-layer operator, so
# `[M]^-1 [T_S] (A+ + A-)` should be the identity matrix.

# %%
import numpy as np

from ddmbem.admittance import assemble_shells, build_admittance
from ddmbem.bem import WaveContext, assemble_mass, assemble_T, assemble_TSigma
from ddmbem.linalg import arnoldi_ritz
from ddmbem.mesh import build_spaces, generate_uv_sphere

maps = build_spaces(generate_uv_sphere(0.5, 8, 8))
ctx = WaveContext.from_mhz(68.0)

# %% [markdown]
# ## Matrices

# %%
T = assemble_T(maps.plus_space, ctx).data
M = assemble_mass(maps.plus_space).data
print("T complex-symmetric:", np.abs(T - T.T).max() / np.abs(T).max())
print("mass condition number:", np.linalg.cond(M))

# %% [markdown]
# ## Admittances and the identity

# %%
shells = assemble_shells(maps, ctx)
ap = build_admittance(maps, ctx, side="plus", shells=shells)
am = build_admittance(maps, ctx, side="minus", shells=shells)
ts = assemble_TSigma(maps, ctx).data
op = np.linalg.solve(M, ts @ (ap.to_dense() + am.to_dense()))
print("|| M^-1 T_S (A+ + A-) - I || =", np.linalg.norm(op - np.eye(maps.n_interface)))

# %%
rng = np.random.default_rng(0)
ritz = arnoldi_ritz(op, rng.standard_normal(maps.n_interface), 30)
print("Ritz values:", np.round(ritz, 10))

# %% [markdown]
# Without the mass inverse (variant Y1) the spectrum is that of `[M]`,
# spread over an order of magnitude:

# %%
ev = np.linalg.eigvals(ts @ (ap.to_dense() + am.to_dense()))
print("spectrum of T_S (A+ + A-): |lambda| in", np.abs(ev).min(), np.abs(ev).max())
