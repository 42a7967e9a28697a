"""Surface meshes in R^3 and a plain OBJ writer.

Embeddings: Euclidean points are used directly; SL(2)/SU(2) goes to the
Poincare ball through the hyperboloid; SL(2)/SL(2,R) goes through the
Hermitian model of de Sitter space to R^3 by ``direction * exp(t)`` where
``x0 = sinh t``; other models use the first three normal-chart coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import meancurv as MC
from .homspace import HomogeneousModel, normal_chart

EMBEDDING_NOTES = {
    "euclidean": "R^n coordinates (first three)",
    "hyperbolic-ball": "Herm+ det 1 -> hyperboloid x = (tr h/2, Re h01, Im h01, (h00-h11)/2) -> ball x/(1+x0)",
    "desitter": "R -> X = i J R^{-T} (Hermitian, det -1) -> x -> unit spatial direction * exp(asinh x0)",
    "chart": "first three normal-chart coordinates at the grid centre",
}


@dataclass
class MeshData:
    vertices: np.ndarray          # (V, 3)
    faces: np.ndarray             # (F, 3) zero-based
    scalars: dict                 # name -> (V,)
    embedding: str


def _minkowski(X):
    """Coordinates of a Hermitian 2x2 matrix ``[[x0+x3, x1+i x2], [x1-i x2, x0-x3]]``."""
    return np.array([(X[0, 0] + X[1, 1]).real / 2, X[0, 1].real, X[0, 1].imag, (X[0, 0] - X[1, 1]).real / 2])


def embedding_kind(model: HomogeneousModel) -> str:
    G = model.group
    if model.abelian:
        return "euclidean"
    if G.n == 2 and G.group_kind == "sl" and model.kind == "hermpos":
        return "hyperbolic-ball"
    if G.n == 2 and G.group_kind == "sl" and model.kind == "realstruct":
        return "desitter"
    return "chart"


def embed(model: HomogeneousModel, p, kind: str, chart=None) -> np.ndarray:
    if kind == "euclidean":
        v = np.zeros(3)
        v[: min(3, len(p))] = np.asarray(p)[:3]
        return v
    if kind == "hyperbolic-ball":
        x = _minkowski(p)
        return x[1:] / (1 + x[0])
    if kind == "desitter":
        J = np.array([[0, 1], [-1, 0]])
        x = _minkowski(1j * J @ np.linalg.inv(p).T)
        r = np.linalg.norm(x[1:])
        return x[1:] / r * np.exp(np.arcsinh(x[0]))
    c = chart.inverse(p)
    v = np.zeros(3)
    v[: min(3, len(c))] = c[:3]
    return v


def build_mesh(curve, model: HomogeneousModel, resolution: int, inset: float = 0.1) -> MeshData:
    Z = curve.domain.grid(resolution, inset=inset)
    kind = embedding_kind(model)
    chart = None
    if kind == "chart":
        chart = normal_chart(model, model.project(curve(Z[resolution // 2, resolution // 2])))
    ny, nx = Z.shape
    V = np.zeros((ny, nx, 3))
    names = ("lambda2", "gHH", "H_scalar")
    S = {k: np.zeros((ny, nx)) for k in names}
    for iy in range(ny):
        for ix in range(nx):
            z = Z[iy, ix]
            s = MC.project_immersion(curve, model, z)
            p = s.p if not model.kind == "torus" else np.log(np.abs(np.diag(s.jet.f)))
            V[iy, ix] = embed(model, p, kind, chart)
            rec = MC.check_corollaries(s)
            S["lambda2"][iy, ix] = s.lambda2
            S["gHH"][iy, ix] = rec["gHH"]
            S["H_scalar"][iy, ix] = rec["H_scalar"] if rec["H_scalar"] is not None else np.sqrt(abs(rec["gHH"]))
    idx = np.arange(ny * nx).reshape(ny, nx)
    faces = []
    for iy in range(ny - 1):
        for ix in range(nx - 1):
            a, b, c, d = idx[iy, ix], idx[iy, ix + 1], idx[iy + 1, ix + 1], idx[iy + 1, ix]
            faces += [(a, b, c), (a, c, d)]
    return MeshData(V.reshape(-1, 3), np.array(faces, dtype=int), {k: v.ravel() for k, v in S.items()}, kind)


def write_obj(mesh: MeshData, path, header: str = "") -> None:
    if not np.all(np.isfinite(mesh.vertices)):
        raise ValueError("mesh has non-finite vertices")
    names = sorted(mesh.scalars)
    with open(path, "w") as fh:
        for line in header.splitlines():
            fh.write(f"# {line}\n")
        fh.write(f"# embedding: {mesh.embedding} ({EMBEDDING_NOTES[mesh.embedding]})\n")
        fh.write(f"# vertices {len(mesh.vertices)} faces {len(mesh.faces)}\n")
        fh.write("# scalars " + " ".join(names) + "\n")
        for v in mesh.vertices:
            fh.write("v {:.10g} {:.10g} {:.10g}\n".format(*v))
        for i in range(len(mesh.vertices)):
            fh.write("#s " + " ".join(f"{mesh.scalars[k][i]:.10g}" for k in names) + "\n")
        for f in mesh.faces:
            fh.write("f {} {} {}\n".format(*(f + 1)))


def read_obj(path) -> MeshData:
    verts, faces, rows, names, emb = [], [], [], [], "chart"
    with open(path) as fh:
        for line in fh:
            if line.startswith("v "):
                verts.append([float(x) for x in line.split()[1:4]])
            elif line.startswith("f "):
                faces.append([int(x) - 1 for x in line.split()[1:4]])
            elif line.startswith("#s "):
                rows.append([float(x) for x in line.split()[1:]])
            elif line.startswith("# scalars"):
                names = line.split()[2:]
            elif line.startswith("# embedding:"):
                emb = line.split()[2]
    rows = np.array(rows).reshape(len(rows), len(names))
    return MeshData(np.array(verts), np.array(faces, dtype=int), {k: rows[:, i] for i, k in enumerate(names)}, emb)
