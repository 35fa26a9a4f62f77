"""Far fields, RCS, the sphere series solution and monolithic EFIE references."""

from .farfield import (
    FarFieldPattern,
    bistatic_cut,
    ddm_far_field,
    directions_from_angles,
    far_field,
    rcs,
    write_rcs_csv,
)
from .mie import mie_far_field, mie_reference, mie_surface_current
from .monolithic import MonolithicSolution, metal_triangles, monolithic_efie

__all__ = [
    "FarFieldPattern",
    "MonolithicSolution",
    "bistatic_cut",
    "ddm_far_field",
    "directions_from_angles",
    "far_field",
    "metal_triangles",
    "mie_far_field",
    "mie_reference",
    "mie_surface_current",
    "monolithic_efie",
    "rcs",
    "write_rcs_csv",
]
