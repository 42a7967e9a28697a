"""Recovering a holomorphic lift from a surface.

Start from the horosphere, forget the holomorphic curve and keep only a
smooth lift twisted by a gauge.  The connection built from it is flat, and
transporting along L-shaped paths gives back the holomorphic curve up to a
constant right factor in SU(2).
"""
import numpy as np

from nullcurve import corpus
from nullcurve import weierstrass as W
from nullcurve.liealg import frob

e = corpus.get("horosphere")
G, model = e.group, e.model
B = G.h_basis
gauge = W.chart_exp_gauge(0 * B[0], 0.5 * B[0], 0.25 * B[1], 0.15 * B[2])
f0 = W.gauge_curve(e.curve, gauge)
conn = W.build_Bphi(f0, model, phi=lambda z: model.project(e.curve(z)))

Z = e.domain.grid(5, inset=0.2)
print("max flatness residual:", max(W.flatness_residual(conn, z) for z in Z.ravel()))

FL, FR = W.lift_on_grid(f0, conn, 0j, Z)
print("x-first vs y-first paths:", np.abs(FL - FR).max())

F = np.array([e.curve(z) for z in Z.ravel()])
h0, res = W.fit_right_translation(FL.reshape(-1, 2, 2), F)
print("fitted right factor:\n", np.round(h0, 8))
print("fit residual:", res, " unitarity defect:", frob(h0 @ h0.conj().T - np.eye(2)))

loop = W.PathSpec.circle(0, 0.6)
for N in (64, 128, 256):
    print(f"holonomy of a small circle, N = {N}: |h - I| = {frob(W.holonomy(conn, loop, N) - np.eye(2)):.2e}")
