"""Parametrised maps from a planar chart into a matrix group G.

A curve is represented by its jets ``(f, df/dx, df/dy)`` at chart points
``z = x + iy``.  The Maurer-Cartan pullback ``f^{-1} df`` is split into the
connection part ``theta`` and the tensorial part ``alpha``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import OutOfDomain, SingularGroupElement
from .liealg import RealFormGroup, bracket, form_eval, formC_eval, frob, split

H_FD = 1e-5


@dataclass(frozen=True)
class ChartDomain:
    """Rectangle, annulus sector (``xb`` = radii, ``yb`` = angles) or punctured rectangle."""

    kind: str = "rectangle"
    xb: tuple = (-1.0, 1.0)
    yb: tuple = (-1.0, 1.0)
    excluded: tuple = ()

    def __post_init__(self):
        if self.kind not in ("rectangle", "annulus-sector", "punctured-rectangle"):
            raise ValueError(f"unknown chart kind {self.kind!r}")
        if not (self.xb[0] < self.xb[1] and self.yb[0] < self.yb[1]):
            raise ValueError("empty chart interior")
        if self.kind == "annulus-sector" and self.xb[0] <= 0:
            raise ValueError("annulus radii must be positive")
        for p in self.excluded:
            if not self._inside_bounds(complex(p), 0.0):
                raise ValueError(f"excluded point {p} lies outside the chart")

    def _inside_bounds(self, z, margin):
        if self.kind == "annulus-sector":
            r, t = abs(z), np.angle(z)
            return (self.xb[0] + margin <= r <= self.xb[1] - margin
                    and self.yb[0] + margin / max(r, 1e-300) <= t <= self.yb[1] - margin / max(r, 1e-300))
        return (self.xb[0] + margin <= z.real <= self.xb[1] - margin
                and self.yb[0] + margin <= z.imag <= self.yb[1] - margin)

    def contains(self, z, margin: float = 0.0) -> bool:
        z = complex(z)
        if not self._inside_bounds(z, margin):
            return False
        return all(abs(z - p) > margin for p in self.excluded)

    def grid(self, nx: int, ny: int | None = None, inset: float = 0.1) -> np.ndarray:
        """``nx x ny`` points covering the chart, kept ``inset`` (relative) away from its boundary."""
        ny = nx if ny is None else ny
        u = np.linspace(0.0, 1.0, nx)
        v = np.linspace(0.0, 1.0, ny)
        a0, a1 = self.xb
        b0, b1 = self.yb
        s = a0 + (a1 - a0) * (inset + (1 - 2 * inset) * u)
        t = b0 + (b1 - b0) * (inset + (1 - 2 * inset) * v)
        S, T = np.meshgrid(s, t, indexing="xy")
        if self.kind == "annulus-sector":
            Z = S * np.exp(1j * T)
        else:
            Z = S + 1j * T
        if self.excluded:
            keep = np.ones(Z.shape, dtype=bool)
            for p in self.excluded:
                keep &= np.abs(Z - p) > 1e-6
            Z = np.where(keep, Z, np.nan)
        return Z


@dataclass(frozen=True)
class CurveJet:
    z: complex
    f: np.ndarray
    dfx: np.ndarray
    dfy: np.ndarray


@dataclass(frozen=True)
class FrameValues:
    theta_x: np.ndarray
    theta_y: np.ndarray
    alpha_x: np.ndarray
    alpha_y: np.ndarray


@dataclass(frozen=True, eq=False)
class HoloCurve:
    """A map from a chart into ``group`` given by a jet evaluator."""

    domain: ChartDomain
    evaluator: Callable[[complex], CurveJet]
    group: RealFormGroup
    name: str = ""
    numeric: bool = False
    value: Callable | None = field(default=None, repr=False)

    def jet(self, z) -> CurveJet:
        z = complex(z)
        if not self.domain.contains(z):
            raise OutOfDomain(f"{z} is outside the chart of {self.name or 'curve'}")
        return self.evaluator(z)

    def __call__(self, z):
        if self.value is not None:
            return self.value(complex(z))
        return self.jet(z).f

    @classmethod
    def from_holomorphic(cls, f, fprime, domain, group, name=""):
        """Closed-form holomorphic curve: ``df/dx = f'``, ``df/dy = i f'``."""

        def ev(z):
            d = np.asarray(fprime(z), dtype=complex)
            return CurveJet(z, np.asarray(f(z), dtype=complex), d, 1j * d)

        return cls(domain, ev, group, name, value=lambda z: np.asarray(f(z), dtype=complex))

    @classmethod
    def from_map(cls, f, domain, group, name="", h_fd: float = H_FD):
        """Numeric curve: jets by central differences of ``f`` with step ``h_fd``."""

        def ev(z):
            fx = (np.asarray(f(z + h_fd)) - np.asarray(f(z - h_fd))) / (2 * h_fd)
            fy = (np.asarray(f(z + 1j * h_fd)) - np.asarray(f(z - 1j * h_fd))) / (2 * h_fd)
            return CurveJet(z, np.asarray(f(z), dtype=complex), fx, fy)

        return cls(domain, ev, group, name, numeric=True, value=lambda z: np.asarray(f(z), dtype=complex))


def _inverse(f):
    if np.linalg.cond(f) > 1e12:
        raise SingularGroupElement("group element is numerically singular")
    return np.linalg.inv(f)


def maurer_cartan(jet: CurveJet):
    """``(f^{-1} df/dx, f^{-1} df/dy)``."""
    finv = _inverse(jet.f)
    return finv @ jet.dfx, finv @ jet.dfy


def pullback_frames(G: RealFormGroup, jet: CurveJet) -> FrameValues:
    ex, ey = maurer_cartan(jet)
    tx, ax = split(G, ex)
    ty, ay = split(G, ey)
    return FrameValues(tx, ty, ax, ay)


def holomorphy_residual(G: RealFormGroup, jet: CurveJet) -> float:
    fr = pullback_frames(G, jet)
    return frob(fr.alpha_y + fr.theta_x) + frob(fr.theta_y - fr.alpha_x)


def isotropy_residual(G: RealFormGroup, jet: CurveJet) -> float:
    """|g^C(Q, Q)| for the Wirtinger derivative pullback ``Q = f^{-1} df/dz``."""
    ex, ey = maurer_cartan(jet)
    Q = 0.5 * (ex - 1j * ey)
    return abs(formC_eval(G, Q, Q))


def spacelike_margin(G: RealFormGroup, jet: CurveJet) -> float:
    fr = pullback_frames(G, jet)
    return form_eval(G, fr.alpha_x, fr.alpha_x, check=False) + form_eval(G, fr.alpha_y, fr.alpha_y, check=False)


def is_degenerate(jet: CurveJet, tol: float = 1e-14) -> bool:
    return frob(jet.dfx) + frob(jet.dfy) <= tol * (1 + frob(jet.f))


def conformality_split(G: RealFormGroup, fr: FrameValues):
    """``(|g(ax,ax) - g(ay,ay)|, |g(ax,ay)|)``: the two real isotropy equations for holomorphic jets."""
    gxx = form_eval(G, fr.alpha_x, fr.alpha_x, check=False)
    gyy = form_eval(G, fr.alpha_y, fr.alpha_y, check=False)
    gxy = form_eval(G, fr.alpha_x, fr.alpha_y, check=False)
    return abs(gxx - gyy), abs(gxy)


def frame_field(curve: HoloCurve):
    G = curve.group
    return lambda z: pullback_frames(G, curve.jet(z))


def dtheta_residual(curve: HoloCurve, z, h: float = 1e-4) -> float:
    """Norm of d(theta_f)(d/dx, d/dy) by central differences."""
    z = complex(z)
    if not curve.domain.contains(z, margin=2 * h):
        raise OutOfDomain(f"{z} is closer than 2h to the chart boundary")
    F = frame_field(curve)
    dx_ty = (F(z + h).theta_y - F(z - h).theta_y) / (2 * h)
    dy_tx = (F(z + 1j * h).theta_x - F(z - 1j * h).theta_x) / (2 * h)
    return frob(dx_ty - dy_tx)


def alpha_alpha_residual(G: RealFormGroup, jet: CurveJet) -> float:
    """``||[ax, ay] - [tx, ty]||``; vanishes for holomorphic jets."""
    fr = pullback_frames(G, jet)
    return frob(bracket(fr.alpha_x, fr.alpha_y) - bracket(fr.theta_x, fr.theta_y))
