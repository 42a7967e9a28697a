"""Mean curvature of the projection of a holomorphic curve.

Two independent routes are provided:

* ``mean_curvature_bracket``: the pointwise bracket ``[alpha_x, alpha_y] / lambda2``;
* ``mean_curvature_maurer``: the divergence form
  ``(d_x alpha_x + d_y alpha_y + [theta_x, alpha_x] + [theta_y, alpha_y]) / (2 lambda2)``
  evaluated by central differences of the frame fields.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import CurveJet, FrameValues, HoloCurve, frame_field, pullback_frames
from .errors import NotImmersion, OutOfDomain, WrongDimension
from .homspace import (HomogeneousModel, algebra_to_tangent, bracket_TM, curvature_R, metric_eval,
                       sectional_K, tangent_basis)
from .liealg import bracket, form_eval, frob, orientation_sign

IMMERSION_TOL = 1e-10
H_MAURER = 1e-4


@dataclass(frozen=True, eq=False)
class ImmersionSample:
    z: complex
    p: np.ndarray
    dphix: np.ndarray
    dphiy: np.ndarray
    lambda2: float
    frames: FrameValues
    conformal_residual: float
    jet: CurveJet
    model: HomogeneousModel


def project_immersion(curve: HoloCurve, model: HomogeneousModel, z, strict: bool = True) -> ImmersionSample:
    """Projected jet at ``z``; ``strict=False`` keeps non-space-like samples (signed lambda2) for diagnostics."""
    G = model.group
    jet = curve.jet(z)
    fr = pullback_frames(G, jet)
    f = jet.f
    p = model.project(f)
    finv = np.linalg.inv(f)
    dphix = model.push(f, finv @ jet.dfx)
    dphiy = model.push(f, finv @ jet.dfy)
    gxx = form_eval(G, fr.alpha_x, fr.alpha_x, check=False)
    gyy = form_eval(G, fr.alpha_y, fr.alpha_y, check=False)
    gxy = form_eval(G, fr.alpha_x, fr.alpha_y, check=False)
    scale = 1.0 + frob(fr.alpha_x) ** 2 + frob(fr.alpha_y) ** 2
    if abs(gxx) < IMMERSION_TOL * scale or (strict and gxx < 0):
        raise NotImmersion(f"conformal factor {gxx:.3e} vanishes at z = {complex(z)}")
    return ImmersionSample(complex(z), p, dphix, dphiy, gxx, fr,
                           abs(gxx - gyy) + abs(gxy), jet, model)


def mean_curvature_bracket(sample: ImmersionSample):
    """``[alpha_x, alpha_y] / lambda2`` in the frame of the curve's own lift."""
    fr = sample.frames
    return bracket(fr.alpha_x, fr.alpha_y) / sample.lambda2


def mean_curvature_tangent(sample: ImmersionSample):
    """Model-tangent mean curvature ``[dphi_x, dphi_y]_TM / lambda2``."""
    return bracket_TM(sample.model, sample.p, sample.dphix, sample.dphiy) / sample.lambda2


def frame_to_tangent(sample: ImmersionSample, Z):
    """Model tangent represented by the h-element ``Z`` in the curve's frame."""
    return algebra_to_tangent(sample.model, sample.jet.f, Z)


def mean_curvature_maurer(curve: HoloCurve, model: HomogeneousModel, z, h: float = H_MAURER, strict: bool = True):
    z = complex(z)
    if not curve.domain.contains(z, margin=2 * h):
        raise OutOfDomain(f"{z} is closer than 2h to the chart boundary")
    G = model.group
    F = frame_field(curve)
    c = F(z)
    lam2 = form_eval(G, c.alpha_x, c.alpha_x, check=False)
    if abs(lam2) < IMMERSION_TOL * (1 + frob(c.alpha_x) ** 2) or (strict and lam2 < 0):
        raise NotImmersion(f"conformal factor vanishes at z = {z}")
    dax = (F(z + h).alpha_x - F(z - h).alpha_x) / (2 * h)
    day = (F(z + 1j * h).alpha_y - F(z - 1j * h).alpha_y) / (2 * h)
    return (dax + day + bracket(c.theta_x, c.alpha_x) + bracket(c.theta_y, c.alpha_y)) / (2 * lam2)


def gauss_normal(sample: ImmersionSample, orientation: int = 1):
    """Unit normal to the image plane in h (|g| = 1), positively oriented after (alpha_x, alpha_y).

    ``orientation=-1`` uses the opposite orientation of the chart.
    """
    G = sample.model.group
    if G.dim != 3:
        raise WrongDimension("Gauss normal needs dim h = 3")
    fr = sample.frames
    gram = G.gram_matrix
    A = np.array([G.coords(fr.alpha_x), G.coords(fr.alpha_y)]) @ gram
    _, _, vt = np.linalg.svd(A)
    eta = G.from_coords(vt[-1])
    eta = eta / np.sqrt(abs(form_eval(G, eta, eta, check=False)))
    if orientation_sign(G, fr.alpha_x, fr.alpha_y, eta) * orientation < 0:
        eta = -eta
    return eta


def scalar_mean_curvature(sample: ImmersionSample, orientation: int = 1) -> float:
    """Component of H along the oriented Gauss normal (dim-3 simple targets)."""
    G = sample.model.group
    eta = gauss_normal(sample, orientation)
    H = mean_curvature_bracket(sample)
    return form_eval(G, H, eta, check=False) / form_eval(G, eta, eta, check=False)


def check_corollaries(sample: ImmersionSample) -> dict:
    """Residuals of g(H,H) = -K, lambda2 [H, w] = R(dphi_x, dphi_y) w and H_scalar = sqrt|K|."""
    m, p = sample.model, sample.p
    G = m.group
    Htan = mean_curvature_tangent(sample)
    gHH = metric_eval(m, p, Htan, Htan)
    K = sectional_K(m, p, sample.dphix, sample.dphiy)
    r2 = 0.0
    for w in tangent_basis(m, p):
        lhs = sample.lambda2 * bracket_TM(m, p, Htan, w)
        rhs = curvature_R(m, p, sample.dphix, sample.dphiy, w)
        r2 = max(r2, frob(lhs - rhs))
    rec = {"gHH": gHH, "K": K, "r1": abs(gHH + K), "r2": r2, "H_scalar": None, "r3": None}
    if G.dim == 3 and not m.abelian:
        hs = scalar_mean_curvature(sample)
        rec["H_scalar"] = hs
        rec["r3"] = abs(hs - np.sqrt(abs(K)))
    elif m.abelian:
        rec["H_scalar"] = float(np.sqrt(abs(gHH)))
        rec["r3"] = abs(rec["H_scalar"] - np.sqrt(abs(K)))
    return rec
