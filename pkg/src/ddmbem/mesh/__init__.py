"""Surface meshes, generators, RWG spaces and interface maps."""

from .core import MeshError, Region, SurfaceMesh, euler_characteristic, signed_volume
from .generate import (
    HOLLOW_FAMILY,
    box_resolution_for,
    generate_open_box,
    generate_sphere,
    generate_uv_sphere,
    hollow_sphere,
)
from .io import load_mesh, parse_mesh, save_mesh
from .spaces import InterfaceMaps, RwgSpace, build_spaces, rwg_space

__all__ = [
    "HOLLOW_FAMILY",
    "InterfaceMaps",
    "MeshError",
    "Region",
    "RwgSpace",
    "SurfaceMesh",
    "box_resolution_for",
    "build_spaces",
    "euler_characteristic",
    "generate_open_box",
    "generate_sphere",
    "generate_uv_sphere",
    "hollow_sphere",
    "load_mesh",
    "parse_mesh",
    "rwg_space",
    "save_mesh",
    "signed_volume",
]
