"""Minimal surfaces in R^3 from null holomorphic curves in C^3.

Enneper's surface and the catenoid: the mean curvature vanishes because the
bracket of an abelian algebra is zero, the tension-field oracle agrees, and
the catenoid's puncture loop carries the imaginary period that closes it up.
"""
import numpy as np

from nullcurve import corpus
from nullcurve import meancurv as MC
from nullcurve import oracle as O
from nullcurve import weierstrass as W
from nullcurve.mesh import build_mesh, write_obj

enneper = corpus.get("enneper")
model, curve = enneper.model, enneper.curve

# conformal factor and mean curvature at a few points
for z in enneper.sample_points:
    s = MC.project_immersion(curve, model, z)
    H = MC.mean_curvature_bracket(s)
    print(f"z = {z:+.2f}  lambda2 = {s.lambda2:.6f}  |H| = {np.linalg.norm(H):.1e}  "
          f"conformal residual = {s.conformal_residual:.1e}")

# independent check: tension field of the surface on a 12 x 12 interior grid
field = O.ChartMetricField(model, model.project(curve(0)))
spacing = 0.1
off = (np.arange(14) - 6.5) * spacing
phi = np.array([[field.coords(model.project(curve(complex(x, y)))) for x in off] for y in off])
H, L2 = O.tension_mean_curvature(phi, field, spacing)
print("oracle max |H| on the grid:", np.abs(H).max())

# catenoid: the circle |z| = 1 has period (0, 0, 2 pi i), so Re of the primitive is single valued
cat = corpus.get("catenoid-annulus")
P = W.line_integral(cat.beta, W.PathSpec.circle(0, 1.0, -np.pi))
print("catenoid period:", np.round(P, 10))
conn = W.build_Bphi(W.reference_lift_curve(cat.curve, cat.model), cat.model)
print("translation part of the loop holonomy:",
      np.round(W.translation_part(conn, W.PathSpec.circle(0, 1.0, -np.pi), 1000), 8))

mesh = build_mesh(curve, model, 30)
write_obj(mesh, "enneper.obj", header="Enneper surface")
print(f"wrote enneper.obj: {len(mesh.vertices)} vertices, {len(mesh.faces)} faces")
