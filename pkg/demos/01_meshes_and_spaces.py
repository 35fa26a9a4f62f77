# %% [markdown]
# # Meshes, RWG spaces and interface maps
#
# A scatterer surface is split into three tagged regions: metal seen from
# outside (GDP), metal seen from the cavity (GDM) and the fictitious
# interface (SIG). Each side's closed shell gets its own RWG space; the
# interface space is embedded into both.

# %%
import numpy as np

from ddmbem.mesh import build_spaces, generate_open_box, generate_uv_sphere, hollow_sphere, save_mesh

# %% [markdown]
# ## Fictitious sphere: no metal at all

# %%
sphere = generate_uv_sphere(0.5, 8, 8)
maps = build_spaces(sphere)
print(sphere.summary())
print("interface unknowns:", maps.n_interface, " shells:", maps.plus_space.dof_count, maps.minus_space.dof_count)
print("both shells are the same surface:", maps.shells_coincide)

# %% [markdown]
# ## Open box: thin metal walls and a flat opening
#
# The walls are stored twice, once per side. Edges on the rim of the
# opening belong to the shells but carry no interface unknown.

# %%
box = generate_open_box(resolution=1 / 6)
bmaps = build_spaces(box)
print(box.summary())
print("interface:", bmaps.n_interface, " plus shell:", bmaps.plus_space.dof_count)

# %%
v = np.arange(bmaps.n_interface, dtype=float)
ext = bmaps.extend(v, "plus")
print("extension pads with zeros:", np.count_nonzero(ext), "of", ext.size)
print("restrict(extend(v)) == v:", np.array_equal(bmaps.restrict(ext, "plus"), v))

# %% [markdown]
# ## Hollow spheres
#
# `hollow_sphere(n)` has `6n^2 + 2n` interface and `36n^2` shell unknowns.

# %%
for n in (3, 6, 12):
    m = build_spaces(hollow_sphere(n))
    print(f"hollow{n}: interface {m.n_interface}, shells {m.plus_space.dof_count}")

# %%
save_mesh(box, "open_box.msh")
print(open("open_box.msh").read().splitlines()[:4])
