"""Surface-of-revolution tessellation and Wavefront OBJ export."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument
from .profiles import POLE_TOL, ProfileCurve


@dataclass(frozen=True)
class Mesh:
    vertices: np.ndarray  # (V, 3)
    faces: np.ndarray  # (F, 3) int indices
    generated_by: tuple  # (n_profile, n_angle)

    @property
    def euler_characteristic(self) -> int:
        edges = set()
        for tri in self.faces:
            for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
                edges.add((min(a, b), max(a, b)))
        return len(self.vertices) - len(edges) + len(self.faces)

    @property
    def area(self) -> float:
        v = self.vertices
        p0, p1, p2 = v[self.faces[:, 0]], v[self.faces[:, 1]], v[self.faces[:, 2]]
        return float(np.linalg.norm(np.cross(p1 - p0, p2 - p0), axis=1).sum() / 2.0)


def tessellate(curve: ProfileCurve, n_angle: int) -> Mesh:
    """Revolve the profile into a triangle mesh; pole endpoints become fans."""
    if n_angle < 3:
        raise InvalidArgument("need n_angle >= 3")
    phi = 2 * np.pi * np.arange(n_angle) / n_angle
    cos_p, sin_p = np.cos(phi), np.sin(phi)

    pole_start = curve.rho[0] < POLE_TOL
    pole_end = curve.rho[-1] < POLE_TOL
    ring_idx = range(1 if pole_start else 0, curve.n - 1 if pole_end else curve.n)

    vertices = []
    index_of_ring = {}
    if pole_start:
        vertices.append((curve.x0[0], 0.0, 0.0))
    for i in ring_idx:
        index_of_ring[i] = len(vertices)
        for c, s in zip(cos_p, sin_p):
            vertices.append((curve.x0[i], curve.rho[i] * c, curve.rho[i] * s))
    if pole_end:
        end_pole = len(vertices)
        vertices.append((curve.x0[-1], 0.0, 0.0))

    faces = []
    rings = list(ring_idx)
    if pole_start:
        base = index_of_ring[rings[0]]
        for j in range(n_angle):
            faces.append((0, base + j, base + (j + 1) % n_angle))
    for r0, r1 in zip(rings[:-1], rings[1:]):
        b0, b1 = index_of_ring[r0], index_of_ring[r1]
        for j in range(n_angle):
            jn = (j + 1) % n_angle
            faces.append((b0 + j, b1 + j, b1 + jn))
            faces.append((b0 + j, b1 + jn, b0 + jn))
    if pole_end:
        base = index_of_ring[rings[-1]]
        for j in range(n_angle):
            faces.append((base + j, end_pole, base + (j + 1) % n_angle))

    return Mesh(
        vertices=np.asarray(vertices, dtype=float),
        faces=np.asarray(faces, dtype=np.int64),
        generated_by=(curve.n - 1, n_angle),
    )


def write_obj(mesh: Mesh, path, header_params: dict | None = None):
    """Write the mesh as OBJ text: 17-significant-digit vertices, 1-based faces."""
    lines = ["# pmcglue surface-of-revolution mesh"]
    params = dict(header_params or {})
    params.setdefault("n_profile", mesh.generated_by[0])
    params.setdefault("n_angle", mesh.generated_by[1])
    for key in sorted(params):
        lines.append(f"# {key} = {params[key]}")
    for v in mesh.vertices:
        lines.append(f"v {v[0]:.17g} {v[1]:.17g} {v[2]:.17g}")
    for f in mesh.faces:
        lines.append(f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}")
    text = "\n".join(lines) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text
