"""Concrete models of M = G/H.

Points and tangent vectors are plain numpy arrays whose meaning depends on the
model kind:

==============  ===============================  =====================================
kind            point                            tangent at p
==============  ===============================  =====================================
euclidean       real n-vector                    real n-vector
torus           real n-vector reduced mod Lambda real n-vector
hermpos         positive Hermitian h = S S^*     chi = h^{-1} u, u Hermitian
realstruct      R with R conj(R) = I (v -> R v̄)  T anti-commuting with R (v -> T v̄)
coset           a representative gamma           X in i h (left-trivialised)
==============  ===============================  =====================================

All tangent computations go through the same three model primitives:
``push`` (differential of the projection on left-trivialised vectors),
``horizontal`` (its inverse on ``i h``) and ``canonical_lift``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (ChartBranchFailure, DegeneratePlane, LogBranchFailure, NoLiftBranch,
                     SingularGroupElement)
from .liealg import (RealFormGroup, bracket, form_eval, frob, matrix_exp, matrix_log,
                     matrix_sqrt, split)

MODEL_KINDS = ("euclidean", "torus", "hermpos", "realstruct", "coset")


def _inv(S):
    if np.linalg.cond(S) > 1e12:
        raise SingularGroupElement("group element is numerically singular")
    return np.linalg.inv(S)


def alpha_part(G: RealFormGroup, X):
    return split(G, X)[1]


@dataclass(frozen=True, eq=False)
class HomogeneousModel:
    kind: str
    group: RealFormGroup

    def __post_init__(self):
        G = self.group
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.kind == "euclidean" and G.group_kind != "abelian":
            raise ValueError("euclidean model needs the abelian group")
        if self.kind == "torus" and (G.group_kind != "abelian" or G.lattice is None):
            raise ValueError("torus model needs the abelian group with a lattice")
        if self.kind == "hermpos" and G.sigma_kind != "antihermitian":
            raise ValueError("hermpos model needs sigma(X) = -X^*")
        if self.kind == "realstruct" and G.sigma_kind != "conjugation":
            raise ValueError("realstruct model needs sigma(X) = conj(X)")

    @property
    def abelian(self) -> bool:
        return self.kind in ("euclidean", "torus")

    # -- points ----------------------------------------------------------------
    def reduce(self, v):
        """Nearest-lattice-point reduction (Babai rounding on the generators)."""
        if self.kind != "torus":
            return v
        B = self.group.lattice.T
        k = np.linalg.solve(B, v)
        return v - B @ np.round(k)

    def project(self, S):
        S = np.asarray(S, dtype=complex)
        if self.abelian:
            d = np.diag(S)
            if np.any(np.abs(d) == 0):
                raise SingularGroupElement("zero diagonal entry")
            return self.reduce(np.log(np.abs(d)))
        if self.kind == "hermpos":
            h = S @ S.conj().T
            return 0.5 * (h + h.conj().T)
        if self.kind == "realstruct":
            return S @ _inv(np.conj(S))
        return S.copy()

    def base_point(self):
        return self.project(np.eye(self.group.n))

    def point_residual(self, p) -> float:
        if self.kind == "hermpos":
            w = np.linalg.eigvalsh(0.5 * (p + p.conj().T))
            return frob(p - p.conj().T) + (0.0 if w.min() > 0 else np.inf)
        if self.kind == "realstruct":
            return frob(p @ np.conj(p) - np.eye(len(p)))
        return 0.0

    def point_difference(self, p, q):
        d = np.asarray(p) - np.asarray(q)
        return self.reduce(d) if self.kind == "torus" else d

    def same_point(self, p, q, tol=1e-8) -> bool:
        if self.kind == "coset":
            return self.group.group_residual(_inv(q) @ p) < tol
        return frob(self.point_difference(p, q)) < tol * (1 + frob(q))

    def flatten(self, p) -> list:
        """Flat real array used in reports."""
        a = np.asarray(p)
        if np.iscomplexobj(a):
            return [float(x) for x in np.concatenate([a.real.ravel(), a.imag.ravel()])]
        return [float(x) for x in a.ravel()]

    # -- lifts ---------------------------------------------------------------
    def canonical_lift(self, p):
        n = self.group.n
        if self.abelian:
            return np.diag(np.exp(np.asarray(p, dtype=complex)))
        try:
            if self.kind == "hermpos":
                return matrix_sqrt(p, hermitian=True)
            if self.kind == "realstruct":
                return matrix_sqrt(p)
        except LogBranchFailure as exc:
            raise NoLiftBranch(str(exc)) from exc
        return np.asarray(p, dtype=complex).reshape(n, n)

    def lift_jet(self, p, dpx, dpy):
        """Canonical lift and its partial derivatives along a point jet."""
        gamma = self.canonical_lift(p)
        if self.abelian:
            return gamma, gamma @ np.diag(dpx), gamma @ np.diag(dpy)
        if self.kind in ("hermpos", "realstruct"):
            # gamma^2 = p  =>  gamma dgamma + dgamma gamma = dp
            dx = scipy.linalg.solve_sylvester(gamma, gamma, np.asarray(dpx, dtype=complex))
            dy = scipy.linalg.solve_sylvester(gamma, gamma, np.asarray(dpy, dtype=complex))
            return gamma, dx, dy
        return gamma, np.asarray(dpx, dtype=complex), np.asarray(dpy, dtype=complex)

    # -- tangents ----------------------------------------------------------------
    def push(self, gamma, X):
        """Differential of ``project`` at ``gamma`` applied to ``gamma X``."""
        gamma = np.asarray(gamma, dtype=complex)
        if self.abelian:
            return np.real(np.diag(X)).copy()
        if self.kind == "hermpos":
            h = gamma @ gamma.conj().T
            u = gamma @ (X + X.conj().T) @ gamma.conj().T
            return _inv(h) @ u
        if self.kind == "realstruct":
            return gamma @ (X - np.conj(X)) @ _inv(np.conj(gamma))
        return -1j * alpha_part(self.group, X)

    def horizontal(self, gamma, chi):
        """The unique ``X`` in ``i h`` with ``push(gamma, X) = chi``."""
        gamma = np.asarray(gamma, dtype=complex)
        if self.abelian:
            return np.diag(np.asarray(chi, dtype=complex).real)
        if self.kind == "hermpos":
            h = gamma @ gamma.conj().T
            X = _inv(gamma) @ (h @ chi) @ _inv(gamma.conj().T) / 2
            return 0.5 * (X + X.conj().T)
        if self.kind == "realstruct":
            Y = _inv(gamma) @ chi @ np.conj(gamma) / 2j
            return 1j * Y.real
        return np.asarray(chi, dtype=complex)

    def tangent_from_point_derivative(self, p, dp):
        if self.kind == "hermpos":
            return _inv(p) @ dp
        if self.kind == "coset":
            return -1j * alpha_part(self.group, _inv(p) @ dp)
        return np.asarray(dp)

    def point_derivative_from_tangent(self, p, chi):
        if self.kind == "hermpos":
            return p @ chi
        if self.kind == "coset":
            return p @ chi
        return np.asarray(chi)

    def tangent_residual(self, p, chi) -> float:
        """Violation of the model's linear tangent constraints."""
        if self.kind == "hermpos":
            u = p @ chi
            return frob(u - u.conj().T)
        if self.kind == "realstruct":
            return frob(chi @ np.conj(p) + p @ np.conj(chi))
        if self.kind == "coset":
            return frob(split(self.group, chi)[0])
        return frob(np.imag(chi)) if np.iscomplexobj(chi) else 0.0

    # -- left action -------------------------------------------------------------
    def left_act(self, g, p):
        g = np.asarray(g, dtype=complex)
        if self.abelian:
            return self.reduce(p + np.log(np.abs(np.diag(g))))
        if self.kind == "hermpos":
            return g @ p @ g.conj().T
        if self.kind == "realstruct":
            return g @ p @ _inv(np.conj(g))
        return g @ p

    def left_act_tangent(self, g, p, chi):
        g = np.asarray(g, dtype=complex)
        if self.kind == "hermpos":
            return _inv(g.conj().T) @ chi @ g.conj().T
        if self.kind == "realstruct":
            return g @ chi @ _inv(np.conj(g))
        return np.array(chi, copy=True)


# -- operations ------------------------------------------------------------------
def project(model: HomogeneousModel, S):
    return model.project(S)


def lift_tangent(model: HomogeneousModel, p, chi):
    """``(gamma, w)`` with ``project(gamma) = p`` and ``w`` a horizontal vector over ``chi``."""
    gamma = model.canonical_lift(p)
    return gamma, gamma @ model.horizontal(gamma, chi)


def _alpha_of(model, gamma, chi):
    return alpha_part(model.group, model.horizontal(gamma, chi))


def metric_eval(model: HomogeneousModel, p, chi, chi2) -> float:
    gamma = model.canonical_lift(p)
    return form_eval(model.group, _alpha_of(model, gamma, chi), _alpha_of(model, gamma, chi2), check=False)


def tangent_to_algebra(model: HomogeneousModel, p, chi, gamma=None):
    """The h-element attached to ``chi`` through the lift ``gamma`` (canonical by default)."""
    gamma = model.canonical_lift(p) if gamma is None else gamma
    return _alpha_of(model, gamma, chi)


def algebra_to_tangent(model: HomogeneousModel, gamma, Z):
    """Inverse of :func:`tangent_to_algebra` at the lift ``gamma``."""
    return model.push(gamma, -1j * Z)


def bracket_TM(model: HomogeneousModel, p, chi, chi2):
    """Lie bracket on T_pM transported from h through the canonical lift."""
    gamma = model.canonical_lift(p)
    Z = bracket(_alpha_of(model, gamma, chi), _alpha_of(model, gamma, chi2))
    return algebra_to_tangent(model, gamma, Z)


def bracket_closed_form(model: HomogeneousModel, p, chi, chi2):
    """Closed-form brackets on Herm+(n) and on the space of real structures."""
    if model.kind == "hermpos":
        return 0.5j * bracket(chi, chi2)
    if model.kind == "realstruct":
        comm = chi @ np.conj(chi2) - chi2 @ np.conj(chi)
        return -0.5j * comm @ p
    if model.abelian:
        return np.zeros_like(chi)
    raise ValueError(f"no closed-form bracket for model {model.kind!r}")


def curvature_R(model: HomogeneousModel, p, u, v, w):
    return bracket_TM(model, p, bracket_TM(model, p, u, v), w)


PLANE_TOL = 1e-10


def sectional_K(model: HomogeneousModel, p, u, v) -> float:
    guu, gvv, guv = metric_eval(model, p, u, u), metric_eval(model, p, v, v), metric_eval(model, p, u, v)
    den = guu * gvv - guv ** 2
    if abs(den) <= PLANE_TOL * max(abs(guu * gvv), guv ** 2, 1e-300):
        raise DegeneratePlane("plane is degenerate for the metric")
    uv = bracket_TM(model, p, u, v)
    return -metric_eval(model, p, uv, uv) / den


def tangent_basis(model: HomogeneousModel, p):
    """A basis of T_pM (image of a g-orthonormal basis of h at the canonical lift)."""
    gamma = model.canonical_lift(p)
    E, _ = model.group.orthonormal_basis()
    return [algebra_to_tangent(model, gamma, e) for e in E]


class NormalChart:
    """Coordinates ``c -> project(gamma0 exp(i sum c_j E_j))`` with {E_j} g-orthonormal."""

    def __init__(self, model: HomogeneousModel, p0):
        self.model = model
        self.p0 = p0
        self.gamma0 = model.canonical_lift(p0)
        self.E, self.signs = model.group.orthonormal_basis()
        self.dim = len(self.E)

    def __call__(self, c):
        X = 1j * np.tensordot(np.asarray(c, dtype=float), self.E, axes=(0, 0))
        return self.model.project(self.gamma0 @ matrix_exp(X))

    def _coords_of(self, X):
        # X = i sum c_j E_j, E_j orthonormal for g
        Z = -1j * X
        G = self.model.group
        cz = G.coords(0.5 * (Z + G.sigma(Z)))
        C = np.array([G.coords(e) for e in self.E]).T
        return np.linalg.solve(C, cz)

    def inverse(self, p):
        m = self.model
        g0 = self.gamma0
        try:
            if m.abelian:
                d = m.point_difference(p, self.p0)
                X = np.diag(d.astype(complex))
            elif m.kind == "hermpos":
                inner = _inv(g0) @ p @ _inv(g0.conj().T)
                X = 0.5 * matrix_log(inner, hermitian=True)
            elif m.kind == "realstruct":
                inner = _inv(g0) @ p @ np.conj(g0)
                X = 0.5 * matrix_log(inner)
            else:
                raise ChartBranchFailure("coset model has no chart inverse")
        except LogBranchFailure as exc:
            raise ChartBranchFailure(str(exc)) from exc
        return self._coords_of(X)


def normal_chart(model: HomogeneousModel, p0) -> NormalChart:
    return NormalChart(model, p0)


def metric_matrix(model: HomogeneousModel, p, tangents) -> np.ndarray:
    """Gram matrix ``[metric_eval(p, t_i, t_j)]``, lifting ``p`` only once."""
    gamma = model.canonical_lift(p)
    al = [_alpha_of(model, gamma, t) for t in tangents]
    k = len(al)
    M = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            M[i, j] = M[j, i] = form_eval(model.group, al[i], al[j], check=False)
    return M
