"""Reader and writer for the line-oriented ``ddm-mesh 1`` format.

::

    ddm-mesh 1
    # comment
    vertices 4
    0.0 0.0 0.0
    ...
    triangles 4
    0 2 1 SIG
    ...

Indices are 0-based; tags are ``GDP``, ``GDM`` or ``SIG``.
"""

from pathlib import Path

import numpy as np

from .core import TAG_NAMES, TAGS, MeshError, SurfaceMesh

HEADER = "ddm-mesh 1"


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_mesh(text, name="mesh"):
    lines = list(_content_lines(text))
    if not lines or lines[0][1] != HEADER:
        raise MeshError(f"parse error: expected header {HEADER!r}")
    pos = 1

    def section(keyword):
        nonlocal pos
        if pos >= len(lines):
            raise MeshError(f"parse error: missing '{keyword}' section")
        lineno, line = lines[pos]
        parts = line.split()
        if len(parts) != 2 or parts[0] != keyword:
            raise MeshError(f"parse error at line {lineno}: expected '{keyword} <count>'")
        try:
            count = int(parts[1])
        except ValueError:
            raise MeshError(f"parse error at line {lineno}: bad count {parts[1]!r}") from None
        body = lines[pos + 1 : pos + 1 + count]
        if len(body) != count:
            raise MeshError(f"parse error: '{keyword}' section truncated")
        pos += 1 + count
        return body

    vertices = np.empty((0, 3))
    body = section("vertices")
    try:
        vertices = np.array([[float(x) for x in line.split()] for _, line in body], dtype=float).reshape(-1, 3)
    except ValueError as exc:
        raise MeshError(f"parse error in vertices: {exc}") from None
    if any(len(line.split()) != 3 for _, line in body):
        raise MeshError("parse error: vertex lines need exactly 3 coordinates")

    tris, regions = [], []
    for lineno, line in section("triangles"):
        parts = line.split()
        if len(parts) != 4:
            raise MeshError(f"parse error at line {lineno}: expected 'i j k TAG'")
        try:
            tris.append([int(p) for p in parts[:3]])
        except ValueError:
            raise MeshError(f"parse error at line {lineno}: bad vertex index") from None
        if parts[3] not in TAGS:
            raise MeshError(f"unknown region tag {parts[3]!r} at line {lineno}")
        regions.append(TAGS[parts[3]])
    if pos != len(lines):
        raise MeshError(f"parse error at line {lines[pos][0]}: trailing content")
    mesh = SurfaceMesh(vertices, np.array(tris, dtype=np.int64).reshape(-1, 3), np.array(regions), name=name)
    return mesh.validate()


def load_mesh(path):
    """Read and validate a mesh file."""
    path = Path(path)
    return parse_mesh(path.read_text(), name=path.stem)


def format_mesh(mesh):
    out = [HEADER, f"# {mesh.summary()}", f"vertices {len(mesh.vertices)}"]
    out += [f"{x!r} {y!r} {z!r}" for x, y, z in mesh.vertices.tolist()]
    out.append(f"triangles {mesh.n_triangles}")
    out += [f"{i} {j} {k} {TAG_NAMES[r]}" for (i, j, k), r in zip(mesh.triangles.tolist(), mesh.regions.tolist())]
    return "\n".join(out) + "\n"


def save_mesh(mesh, path):
    Path(path).write_text(format_mesh(mesh))
