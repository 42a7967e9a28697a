"""Reverse direction: from an immersion back to a holomorphic lift.

Given a smooth reference lift ``f0`` of an immersion, the connection
``a = theta + J alpha`` (``a_x = theta_x + alpha_y``, ``a_y = theta_y - alpha_x``)
is flat exactly when the immersion has the prescribed mean curvature, and
``f = f0 h`` with ``dh = -a h`` is then holomorphic.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curves import ChartDomain, CurveJet, HoloCurve, holomorphy_residual, pullback_frames
from .errors import NotALift, NotFlat, OpenPath, OutOfDomain, StepCountTooSmall
from .homspace import HomogeneousModel
from .liealg import RealFormGroup, bracket, expm_derivative, frob, matrix_exp, split

H_FD = 1e-4
STEP_LIMIT = 0.5
MIN_STEPS = 64
MAX_STEPS = 10 ** 6


# -- connection data -------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class LocalConnectionData:
    """An h-valued 1-form ``a = a_x dx + a_y dy`` on a chart; ``values(z) -> (a_x, a_y)``."""

    domain: ChartDomain
    group: RealFormGroup
    values: Callable
    frames: Callable | None = None   # frames of the reference lift, when built from one

    def a_x(self, z):
        return self.values(complex(z))[0]

    def a_y(self, z):
        return self.values(complex(z))[1]

    def real_form_residual(self, z) -> float:
        ax, ay = self.values(complex(z))
        return self.group.real_form_residual(ax) + self.group.real_form_residual(ay)


def zero_connection(domain, group):
    n = group.n
    Z = np.zeros((n, n), dtype=complex)
    return LocalConnectionData(domain, group, lambda z: (Z, Z))


def constant_connection(domain, group, ax, ay):
    ax, ay = np.asarray(ax, dtype=complex), np.asarray(ay, dtype=complex)
    return LocalConnectionData(domain, group, lambda z: (ax, ay))


def _require_interior(domain, z, h):
    if domain is not None and not domain.contains(z, margin=2 * h):
        raise OutOfDomain(f"{z} is closer than 2h to the chart boundary")


# -- ZSys ------------------------------------------------------------------------
def zsys_residual(G: RealFormGroup, theta_hat, alpha_hat, z, h: float = H_FD, domain=None):
    """``(r1, r2)`` for chart 1-forms given as ``z -> (x-component, y-component)``."""
    z = complex(z)
    _require_interior(domain, z, h)
    tx, ty = theta_hat(z)
    ax, ay = alpha_hat(z)
    d_alpha = (alpha_hat(z + h)[1] - alpha_hat(z - h)[1]) / (2 * h) \
        - (alpha_hat(z + 1j * h)[0] - alpha_hat(z - 1j * h)[0]) / (2 * h)
    d_theta = (theta_hat(z + h)[1] - theta_hat(z - h)[1]) / (2 * h) \
        - (theta_hat(z + 1j * h)[0] - theta_hat(z - 1j * h)[0]) / (2 * h)
    r1 = frob(d_alpha + bracket(tx, ay) - bracket(ty, ax))
    r2 = frob(d_theta + bracket(tx, ty) - bracket(ax, ay))
    return r1, r2


def zsys_residual_nd(G: RealFormGroup, forms, c, h: float = H_FD):
    """ZSys residuals on R^k: ``forms(c) -> (thetas, alphas)`` (k components each); max over pairs."""
    c = np.asarray(c, dtype=float)
    k = len(c)
    th, al = forms(c)
    dth, dal = [], []
    for j in range(k):
        e = np.zeros(k)
        e[j] = h
        tp, ap = forms(c + e)
        tm, am = forms(c - e)
        dth.append([(tp[i] - tm[i]) / (2 * h) for i in range(k)])
        dal.append([(ap[i] - am[i]) / (2 * h) for i in range(k)])
    r1 = r2 = 0.0
    for j in range(k):
        for l in range(j + 1, k):
            da = dal[j][l] - dal[l][j]
            dt = dth[j][l] - dth[l][j]
            r1 = max(r1, frob(da + bracket(th[j], al[l]) - bracket(th[l], al[j])))
            r2 = max(r2, frob(dt + bracket(th[j], th[l]) - bracket(al[j], al[l])))
    return r1, r2


@dataclass(frozen=True, eq=False)
class LocalSection:
    """``c -> gamma0 exp(i sum c_j E_j) gauge(c)``, a local section of G -> G/H.

    ``gauge(c) = exp(sum_j c_j Y_j + sum_j c_j^2 W_j)`` with ``Y_j, W_j`` in h.
    """

    group: RealFormGroup
    gamma0: np.ndarray
    E: np.ndarray
    Y: np.ndarray | None = None
    W: np.ndarray | None = None

    def _gauge_exponent(self, c):
        n = self.group.n
        if self.Y is None:
            return np.zeros((n, n), dtype=complex), [np.zeros((n, n), dtype=complex)] * len(c)
        Xg = np.tensordot(c, self.Y, axes=(0, 0)) + np.tensordot(c ** 2, self.W, axes=(0, 0))
        return Xg, [self.Y[j] + 2 * c[j] * self.W[j] for j in range(len(c))]

    def __call__(self, c):
        c = np.asarray(c, dtype=float)
        X = 1j * np.tensordot(c, self.E, axes=(0, 0))
        Xg, _ = self._gauge_exponent(c)
        return self.gamma0 @ matrix_exp(X) @ matrix_exp(Xg)

    def maurer_cartan(self, c):
        """Exact ``tau^{-1} d_j tau`` for each coordinate (Frechet derivatives of expm)."""
        c = np.asarray(c, dtype=float)
        X = 1j * np.tensordot(c, self.E, axes=(0, 0))
        Xg, dXg = self._gauge_exponent(c)
        eX, eg = matrix_exp(X), matrix_exp(Xg)
        eXi, egi = np.linalg.inv(eX), np.linalg.inv(eg)
        out = []
        for j in range(len(c)):
            d_main = eXi @ expm_derivative(X, 1j * self.E[j])
            d_gauge = egi @ expm_derivative(Xg, dXg[j])
            out.append(egi @ d_main @ eg + d_gauge)
        return out

    def forms(self, c):
        eta = self.maurer_cartan(c)
        pairs = [split(self.group, e) for e in eta]
        return [p[0] for p in pairs], [p[1] for p in pairs]


def random_section(G: RealFormGroup, rng, gauged: bool = False, scale: float = 0.5) -> LocalSection:
    gamma0 = matrix_exp(G.random_g(rng, scale))
    E, _ = G.orthonormal_basis()
    if not gauged:
        return LocalSection(G, gamma0, E)
    Y = np.array([G.random_h(rng, scale) for _ in range(G.dim)])
    W = np.array([G.random_h(rng, scale) for _ in range(G.dim)])
    return LocalSection(G, gamma0, E, Y, W)


def gauge_forms(G: RealFormGroup, forms, gauge):
    """Gauge-transformed form data; ``gauge(c) -> (h, [d_j h])`` with h in H."""

    def new(c):
        th, al = forms(c)
        hc, dh = gauge(c)
        hi = np.linalg.inv(hc)
        return ([hi @ t @ hc + hi @ d for t, d in zip(th, dh)], [hi @ a @ hc for a in al])

    return new


def exp_gauge(G: RealFormGroup, Y, W):
    """Gauge ``c -> exp(sum c_j Y_j + sum c_j^2 W_j)`` with its exact partial derivatives."""

    def gauge(c):
        c = np.asarray(c, dtype=float)
        Xg = np.tensordot(c, Y, axes=(0, 0)) + np.tensordot(c ** 2, W, axes=(0, 0))
        return matrix_exp(Xg), [expm_derivative(Xg, Y[j] + 2 * c[j] * W[j]) for j in range(len(c))]

    return gauge


def random_gauge(G: RealFormGroup, rng, size: float = 0.5):
    """Sampled gauge ``exp(sum c_j Y_j + c_j^2 W_j)`` whose generators all have Frobenius norm ``size``."""
    def draw():
        Y = G.random_h(rng)
        return size * Y / frob(Y)
    return exp_gauge(G, np.array([draw() for _ in range(G.dim)]), np.array([draw() for _ in range(G.dim)]))


# -- smooth lifts and B_phi ------------------------------------------------------------
def gauge_curve(curve: HoloCurve, gauge, name: str = "") -> HoloCurve:
    """``f h`` for a smooth H-valued ``gauge(z) -> (h, h_x, h_y)``."""

    def ev(z):
        j = curve.jet(z)
        hz, hx, hy = gauge(z)
        return CurveJet(z, j.f @ hz, j.dfx @ hz + j.f @ hx, j.dfy @ hz + j.f @ hy)

    return HoloCurve(curve.domain, ev, curve.group, name or f"{curve.name}*gauge", numeric=True)


def chart_exp_gauge(X0, Xx, Xy, Xxy=None):
    """Gauge ``z -> exp(X0 + x Xx + y Xy + x y Xxy)`` with exact derivatives."""
    Xxy = np.zeros_like(X0) if Xxy is None else Xxy

    def gauge(z):
        x, y = z.real, z.imag
        X = X0 + x * Xx + y * Xy + x * y * Xxy
        return matrix_exp(X), expm_derivative(X, Xx + y * Xxy), expm_derivative(X, Xy + x * Xxy)

    return gauge


def reference_lift_curve(curve: HoloCurve, model: HomogeneousModel, name: str = "") -> HoloCurve:
    """The model's canonical lift of ``phi = project(curve)``, with jets via ``lift_jet``."""

    def ev(z):
        j = curve.jet(z)
        f = j.f
        finv = np.linalg.inv(f)
        if model.abelian:
            p = np.log(np.abs(np.diag(f)))
            dpx = model.push(f, finv @ j.dfx)
            dpy = model.push(f, finv @ j.dfy)
        else:
            p = model.project(f)
            dpx = model.point_derivative_from_tangent(p, model.push(f, finv @ j.dfx))
            dpy = model.point_derivative_from_tangent(p, model.push(f, finv @ j.dfy))
        gamma, gx, gy = model.lift_jet(p, dpx, dpy)
        return CurveJet(z, gamma, gx, gy)

    return HoloCurve(curve.domain, ev, curve.group, name or f"{curve.name}-reference", numeric=True)


def build_Bphi(f0: HoloCurve, model: HomogeneousModel, phi=None, samples=None, tol: float = 1e-8):
    """Connection ``a = theta + J alpha`` of a smooth reference lift ``f0``.

    If ``phi`` (a map z -> model point) is given, ``project(f0)`` is compared with it on ``samples``.
    """
    G = model.group
    if phi is not None:
        pts = samples if samples is not None else f0.domain.grid(3).ravel()
        for z in pts:
            if np.isnan(z):
                continue
            q = model.project(f0.jet(z).f)
            if not model.same_point(q, phi(z), tol):
                raise NotALift(f"project(f0) differs from phi at z = {complex(z)}")

    def frames(z):
        return pullback_frames(G, f0.jet(z))

    def values(z):
        fr = frames(z)
        return fr.theta_x + fr.alpha_y, fr.theta_y - fr.alpha_x

    return LocalConnectionData(f0.domain, G, values, frames)


def flatness_residual(conn: LocalConnectionData, z, h: float = H_FD) -> float:
    """``|| d_x a_y - d_y a_x + [a_x, a_y] ||`` by central differences."""
    z = complex(z)
    _require_interior(conn.domain, z, h)
    ax, ay = conn.values(z)
    d = (conn.values(z + h)[1] - conn.values(z - h)[1]) / (2 * h) \
        - (conn.values(z + 1j * h)[0] - conn.values(z - 1j * h)[0]) / (2 * h)
    return frob(d + bracket(ax, ay))


def flatness_residual_closed(conn: LocalConnectionData, z, h: float = H_FD) -> float:
    """Equivalent form ``|| 2[alpha_x, alpha_y] - (d_x alpha_x + d_y alpha_y + [theta_x, alpha_x] + [theta_y, alpha_y]) ||``."""
    if conn.frames is None:
        raise ValueError("closed form needs the frames of a reference lift")
    z = complex(z)
    _require_interior(conn.domain, z, h)
    F = conn.frames
    c = F(z)
    dax = (F(z + h).alpha_x - F(z - h).alpha_x) / (2 * h)
    day = (F(z + 1j * h).alpha_y - F(z - 1j * h).alpha_y) / (2 * h)
    div = dax + day + bracket(c.theta_x, c.alpha_x) + bracket(c.theta_y, c.alpha_y)
    return frob(2 * bracket(c.alpha_x, c.alpha_y) - div)


# -- paths -----------------------------------------------------------------------
@dataclass(frozen=True)
class PathPiece:
    kind: str                  # "segment" or "arc"
    params: tuple              # segment: (z0, z1); arc: (center, radius, angle0, angle1)

    def point(self, t):
        if self.kind == "segment":
            z0, z1 = self.params
            return z0 + t * (z1 - z0)
        c, r, a0, a1 = self.params
        return c + r * np.exp(1j * (a0 + t * (a1 - a0)))

    def velocity(self, t):
        if self.kind == "segment":
            z0, z1 = self.params
            return z1 - z0
        c, r, a0, a1 = self.params
        return 1j * (a1 - a0) * r * np.exp(1j * (a0 + t * (a1 - a0)))

    @property
    def length(self) -> float:
        if self.kind == "segment":
            return abs(self.params[1] - self.params[0])
        return abs(self.params[1] * (self.params[3] - self.params[2]))

    def reversed(self):
        if self.kind == "segment":
            return PathPiece("segment", self.params[::-1])
        c, r, a0, a1 = self.params
        return PathPiece("arc", (c, r, a1, a0))


@dataclass(frozen=True)
class PathSpec:
    """Piecewise-smooth path; each piece is parametrised over [0, 1]."""

    pieces: tuple
    steps: int | None = None

    @staticmethod
    def segment(z0, z1, steps=None):
        return PathSpec((PathPiece("segment", (complex(z0), complex(z1))),), steps)

    @staticmethod
    def polyline(points, steps=None):
        pts = [complex(p) for p in points]
        return PathSpec(tuple(PathPiece("segment", (a, b)) for a, b in zip(pts[:-1], pts[1:])), steps)

    @staticmethod
    def circle(center, radius, angle0=0.0, turns=1.0, steps=None):
        a1 = angle0 + 2 * np.pi * turns
        return PathSpec((PathPiece("arc", (complex(center), float(radius), float(angle0), float(a1))),), steps)

    @staticmethod
    def l_path(z0, z1, x_first=True, steps=None):
        z0, z1 = complex(z0), complex(z1)
        corner = complex(z1.real, z0.imag) if x_first else complex(z0.real, z1.imag)
        return PathSpec.polyline([z0, corner, z1], steps)

    def __add__(self, other: "PathSpec"):
        if abs(self.end - other.start) > 1e-10:
            raise OpenPath("concatenated paths do not meet")
        steps = None if self.steps is None or other.steps is None else self.steps + other.steps
        return PathSpec(self.pieces + other.pieces, steps)

    def reversed(self):
        return PathSpec(tuple(p.reversed() for p in self.pieces[::-1]), self.steps)

    @property
    def start(self):
        return self.pieces[0].point(0.0)

    @property
    def end(self):
        return self.pieces[-1].point(1.0)

    @property
    def length(self) -> float:
        return sum(p.length for p in self.pieces)

    @property
    def closed(self) -> bool:
        return abs(self.end - self.start) <= 1e-10

    def check_inside(self, domain: ChartDomain, samples: int = 64):
        for piece in self.pieces:
            for t in np.linspace(0, 1, samples):
                z = piece.point(t)
                if not domain.contains(z):
                    raise OutOfDomain(f"path leaves the chart at {z}")


def _piece_field(conn, piece):
    def A(t):
        ax, ay = conn.values(piece.point(t))
        v = piece.velocity(t)
        return ax * v.real + ay * v.imag
    return A


def _default_steps(conn, piece) -> int:
    if piece.length == 0:
        return 1
    amax = max(frob(_piece_field(conn, piece)(t)) for t in np.linspace(0, 1, 17)) / piece.length
    return int(min(max(np.ceil(50 * piece.length * amax), MIN_STEPS), MAX_STEPS))


def _piece_steps(conn, path):
    if path.steps is None:
        return [_default_steps(conn, p) for p in path.pieces]
    total = sum(p.length for p in path.pieces) or 1.0
    if len(path.pieces) == 1:
        return [int(path.steps)]
    return [max(1, int(round(path.steps * p.length / total))) for p in path.pieces]


def _rk4(A, h0, N):
    dt = 1.0 / N
    h = h0
    for i in range(N):
        t = i * dt
        k1m = A(t)
        k2m = A(t + dt / 2)
        k4m = A(t + dt)
        if max(frob(k1m), frob(k2m), frob(k4m)) * dt > STEP_LIMIT:
            raise StepCountTooSmall(f"per-step norm exceeds {STEP_LIMIT} with N = {N}")
        k1 = -k1m @ h
        k2 = -k2m @ (h + dt / 2 * k1)
        k3 = -k2m @ (h + dt / 2 * k2)
        k4 = -k4m @ (h + dt * k3)
        h = h + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return h


def parallel_transport(conn: LocalConnectionData, path: PathSpec, steps=None):
    """Solve ``dh/dt = -a(z'(t)) h``, ``h(0) = I`` by classical RK4; returns ``h(1)``."""
    if steps is not None:
        path = PathSpec(path.pieces, steps)
    h = np.eye(conn.group.n, dtype=complex)
    for piece, N in zip(path.pieces, _piece_steps(conn, path)):
        h = _rk4(_piece_field(conn, piece), h, N)
    return h


def additive_transport(conn: LocalConnectionData, path: PathSpec, steps=None):
    """``-integral of a`` along the path (Simpson, same nodes as RK4); for abelian h this is the log of the transport.

    ``exp`` forgets multiples of ``2 pi i``; this keeps them.
    """
    if steps is not None:
        path = PathSpec(path.pieces, steps)
    total = np.zeros((conn.group.n, conn.group.n), dtype=complex)
    for piece, N in zip(path.pieces, _piece_steps(conn, path)):
        A = _piece_field(conn, piece)
        dt = 1.0 / N
        for i in range(N):
            t = i * dt
            total -= dt / 6 * (A(t) + 4 * A(t + dt / 2) + A(t + dt))
    return total


def holonomy(conn: LocalConnectionData, loop: PathSpec, steps=None):
    if not loop.closed:
        raise OpenPath(f"loop endpoints differ by {abs(loop.end - loop.start):.3e}")
    return parallel_transport(conn, loop, steps)


def translation_part(conn: LocalConnectionData, loop: PathSpec, steps=None):
    """Real vector ``v`` with holonomy ``exp(i diag v)`` (abelian groups), including 2 pi multiples."""
    if not loop.closed:
        raise OpenPath(f"loop endpoints differ by {abs(loop.end - loop.start):.3e}")
    return np.real(np.diag(additive_transport(conn, loop, steps)) / 1j)


# -- holomorphic lift -------------------------------------------------------------
FLAT_TOL = 1e-4


def lift_at(f0: HoloCurve, conn: LocalConnectionData, z0, z, x_first=True, steps=None):
    """``f0(z) h(z)`` with ``h`` transported from ``z0`` along an axis-parallel L-path."""
    path = PathSpec.l_path(z0, z, x_first)
    h = parallel_transport(conn, path, steps)
    return f0.jet(z).f @ h


def holomorphic_lift(f0: HoloCurve, conn: LocalConnectionData, z0, grid=None, steps=None,
                     flat_tol: float = FLAT_TOL, name: str = "") -> HoloCurve:
    """Numeric holomorphic curve ``f = f0 h``, ``dh = -a h``, ``h(z0) = I``."""
    dom = f0.domain
    if dom.kind != "rectangle":
        raise OutOfDomain("holomorphic lifts are built on simply connected rectangle charts only")
    if not dom.contains(z0):
        raise OutOfDomain(f"base point {z0} is outside the chart")
    pts = dom.grid(5).ravel() if grid is None else np.asarray(grid).ravel()
    for z in pts:
        if dom.contains(z, margin=2 * H_FD):
            r = flatness_residual(conn, z)
            if r > flat_tol:
                raise NotFlat(f"flatness residual {r:.3e} at z = {complex(z)}")

    def value(z):
        return lift_at(f0, conn, z0, z, True, steps)

    return HoloCurve.from_map(value, dom, f0.group, name or f"{f0.name}-lift", h_fd=1e-4)


def lift_on_grid(f0, conn, z0, Z, steps=None):
    """Lifts along both L-paths at every point of ``Z``; returns ``(F_L, F_reversed_L)``."""
    Z = np.asarray(Z)
    n = conn.group.n
    FL = np.zeros(Z.shape + (n, n), dtype=complex)
    FR = np.zeros_like(FL)
    for idx in np.ndindex(Z.shape):
        FL[idx] = lift_at(f0, conn, z0, Z[idx], True, steps)
        FR[idx] = lift_at(f0, conn, z0, Z[idx], False, steps)
    return FL, FR


def fit_right_translation(F_lift, F_ref):
    """Least-squares constant ``h0`` with ``F_lift ~ F_ref h0``; returns ``(h0, sup residual)``."""
    A = np.asarray(F_ref).reshape(-1, *F_ref.shape[-2:])
    B = np.asarray(F_lift).reshape(-1, *F_lift.shape[-2:])
    lhs = np.einsum("kji,kjl->il", A.conj(), A)
    rhs = np.einsum("kji,kjl->il", A.conj(), B)
    h0 = np.linalg.solve(lhs, rhs)
    res = max(frob(b - a @ h0) for a, b in zip(A, B))
    return h0, res


def lift_holomorphy_residual(lift: HoloCurve, Z) -> float:
    return max(holomorphy_residual(lift.group, lift.jet(z)) for z in np.asarray(Z).ravel())


# -- periods ---------------------------------------------------------------------
def line_integral(beta, path: PathSpec, nodes: int = 10_000):
    """Composite 10-point Gauss-Legendre quadrature of ``beta(z) dz`` along ``path``."""
    xg, wg = np.polynomial.legendre.leggauss(10)
    xg, wg = (xg + 1) / 2, wg / 2
    total = 0
    panels = max(1, nodes // (10 * len(path.pieces)))
    for piece in path.pieces:
        edges = np.linspace(0, 1, panels + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            for x, w in zip(a + (b - a) * xg, (b - a) * wg):
                total = total + np.asarray(beta(piece.point(x)), dtype=complex) * piece.velocity(x) * w
    return np.asarray(total)


def lattice_distance(v, lattice) -> float:
    """Distance from ``v`` to the lattice spanned by the rows of ``lattice`` (Babai rounding)."""
    B = np.asarray(lattice, dtype=float).T
    k = np.linalg.solve(B, v)
    return float(np.linalg.norm(v - B @ np.round(k)))


def torus_periods(beta, generators, lattice, z0=0j, nodes: int = 10_000):
    """Periods of ``beta`` along the segments ``z0 -> z0 + w`` and their distance to ``lattice + i R^n``."""
    out = []
    for w in generators:
        P = line_integral(beta, PathSpec.segment(z0, z0 + w), nodes)
        out.append({"generator": complex(w), "period": P, "membership_residual": lattice_distance(P.real, lattice)})
    return out
