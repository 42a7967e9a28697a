"""Constant mean curvature one: the horosphere in H^3 and its de Sitter cousin.

For a null curve f into SL(2,C) the projected surface has mean curvature
vector [alpha_x, alpha_y] / lambda2.  Here we compare that bracket with the
divergence form, with the tension field in a normal chart, and read off the
curvature identity g(H, H) = -K.
"""
import numpy as np

from nullcurve import corpus
from nullcurve import meancurv as MC
from nullcurve import oracle as O

np.set_printoptions(precision=6, suppress=True)

for name in ("horosphere", "desitter-null"):
    e = corpus.get(name)
    print(f"== {name} ({e.group.name})")
    for z in e.sample_points:
        s = MC.project_immersion(e.curve, e.model, z)
        Hb = MC.mean_curvature_bracket(s)
        Hm = MC.mean_curvature_maurer(e.curve, e.model, z)
        rec = MC.check_corollaries(s)
        print(f"z = {z:+.2f}  lambda2 = {s.lambda2:.3f}  g(H,H) = {rec['gHH']:+.6f}  K = {rec['K']:+.6f}  "
              f"H_scalar = {rec['H_scalar']:.6f}  |bracket - divergence| = {np.linalg.norm(Hb - Hm):.1e}")
    print("H in the frame of the curve:\n", MC.mean_curvature_bracket(s))

    # the oracle only knows the metric of the symmetric space
    z = e.sample_points[1]
    phi = lambda w: e.model.project(e.curve(w))
    field = O.ChartMetricField(e.model, phi(z))
    for spacing in (0.02, 0.01, 0.005):
        Ho, _ = O.oracle_mean_curvature(phi, field, z, spacing)
        g0 = field.metric(np.zeros(3))
        print(f"  oracle spacing {spacing}: g(H,H) = {Ho @ g0 @ Ho:+.6f}")
