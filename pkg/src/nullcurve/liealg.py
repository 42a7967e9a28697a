"""Matrix Lie algebra kernel: real forms, invariant forms, exp/log.

A complex matrix group ``G`` together with an anti-linear involution ``sigma``
of its Lie algebra determines a real form ``h`` (the fixed set of ``sigma``).
Every algebra element splits as ``X = theta - i*alpha`` with both parts in
``h``; this is the pointwise content of the decomposition of the
Maurer-Cartan form used throughout the package.

Bracket-of-forms convention: for h-valued 1-forms,
``[l ^ m](U, V) = [l(U), m(V)] - [l(V), m(U)]``, hence
``1/2 [a ^ a](U, V) = [a(U), a(V)]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from .errors import LogBranchFailure, NotInRealForm, WrongDimension

GROUP_KINDS = ("sl", "gl", "abelian")
SIGMA_KINDS = ("antihermitian", "conjugation", "abelian_imag")

REAL_FORM_TOL = 1e-8
NONDEGENERACY_TOL = 1e-12


def bracket(a, b):
    return a @ b - b @ a


def frob(x) -> float:
    return float(np.linalg.norm(x))


@dataclass(frozen=True, eq=False)
class RealFormGroup:
    """A matrix group G with a real form H and a bilinear form g on Lie(H).

    ``trace_coeff`` selects g(a, b) = c Tr(ab); otherwise ``gram`` gives g in
    ``h_basis`` coordinates.  ``lattice`` (rows) is only meaningful for the
    abelian kind, where it encodes the real form Lambda + i R^n.
    """

    n: int
    group_kind: str
    sigma_kind: str
    h_basis: np.ndarray
    trace_coeff: float | None = None
    gram: np.ndarray | None = None
    lattice: np.ndarray | None = None
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.group_kind not in GROUP_KINDS:
            raise ValueError(f"unknown group kind {self.group_kind!r}")
        if self.sigma_kind not in SIGMA_KINDS:
            raise ValueError(f"unknown sigma kind {self.sigma_kind!r}")
        if (self.trace_coeff is None) == (self.gram is None):
            raise ValueError("give exactly one of trace_coeff / gram")
        basis = np.asarray(self.h_basis, dtype=complex)
        object.__setattr__(self, "h_basis", basis)
        if self.gram is not None:
            object.__setattr__(self, "gram", np.asarray(self.gram, dtype=float))
        if self.lattice is not None:
            if self.group_kind != "abelian":
                raise ValueError("a lattice requires the abelian group kind")
            object.__setattr__(self, "lattice", np.atleast_2d(np.asarray(self.lattice, dtype=float)))

    @property
    def dim(self) -> int:
        return len(self.h_basis)

    # -- involutions -------------------------------------------------------
    def sigma(self, X):
        """Anti-linear involution of the Lie algebra; its fixed set is h."""
        if self.sigma_kind == "conjugation":
            return np.conj(X)
        # antihermitian and abelian_imag share the same closed form
        return -np.conj(np.swapaxes(X, -1, -2))

    def group_sigma(self, S):
        """Involution of G whose fixed set contains the identity component of H."""
        if self.sigma_kind == "conjugation":
            return np.conj(S)
        return np.linalg.inv(np.conj(np.swapaxes(S, -1, -2)))

    def real_form_residual(self, X) -> float:
        return frob(X - self.sigma(X))

    def group_residual(self, h) -> float:
        """Distance of ``h`` from the fixed set of :meth:`group_sigma`."""
        return frob(self.group_sigma(h) - h)

    def membership_residual(self, S) -> float:
        """How far ``S`` is from lying in G (|det - 1| for SL, off-diagonal mass for abelian)."""
        S = np.asarray(S)
        if self.group_kind == "sl":
            return abs(np.linalg.det(S) - 1.0)
        if self.group_kind == "abelian":
            return frob(S - np.diag(np.diag(S)))
        return 0.0 if np.isfinite(np.linalg.cond(S)) and np.linalg.cond(S) < 1e14 else np.inf

    # -- coordinates -------------------------------------------------------
    @cached_property
    def _coord_pinv(self):
        k = self.dim
        flat = self.h_basis.reshape(k, -1).T
        stacked = np.vstack([flat.real, flat.imag])
        return np.linalg.pinv(stacked)

    def coords(self, X) -> np.ndarray:
        """Real coordinates of a sigma-fixed element in ``h_basis``."""
        flat = np.asarray(X, dtype=complex).reshape(-1)
        return self._coord_pinv @ np.concatenate([flat.real, flat.imag])

    def ccoords(self, X) -> np.ndarray:
        """Complex coordinates of any element of g = h + ih."""
        theta, alpha = split(self, X)
        return self.coords(theta) - 1j * self.coords(alpha)

    def from_coords(self, c) -> np.ndarray:
        return np.tensordot(np.asarray(c), self.h_basis, axes=(0, 0))

    @cached_property
    def gram_matrix(self) -> np.ndarray:
        if self.gram is not None:
            return self.gram
        B = self.h_basis
        G = self.trace_coeff * np.einsum("aij,bji->ab", B, B).real
        return 0.5 * (G + G.T)

    # -- convenience -------------------------------------------------------
    def random_h(self, rng, scale=1.0):
        return self.from_coords(scale * rng.standard_normal(self.dim))

    def random_g(self, rng, scale=1.0):
        return self.random_h(rng, scale) + 1j * self.random_h(rng, scale)

    def orthonormal_basis(self):
        """A g-orthogonal basis of h with |g(E, E)| = 1, and the signs g(E, E)."""
        w, v = np.linalg.eigh(self.gram_matrix)
        basis = np.array([self.from_coords(v[:, j] / np.sqrt(abs(w[j]))) for j in range(self.dim)])
        return basis, np.sign(w)


def split(G: RealFormGroup, X):
    """Return ``(theta, alpha)`` in h with ``X = theta - 1j * alpha``."""
    sX = G.sigma(X)
    return 0.5 * (X + sX), 0.5j * (X - sX)


def form_eval(G: RealFormGroup, a, b, check: bool = True) -> float:
    """The real bilinear form g on h."""
    if check:
        scale = 1.0 + frob(a) + frob(b)
        if G.real_form_residual(a) > REAL_FORM_TOL * scale or G.real_form_residual(b) > REAL_FORM_TOL * scale:
            raise NotInRealForm("argument is not sigma-fixed")
    if G.trace_coeff is not None:
        return float(G.trace_coeff * np.trace(a @ b).real)
    ca, cb = G.coords(a), G.coords(b)
    return float(ca @ G.gram_matrix @ cb)


def formC_eval(G: RealFormGroup, A, B) -> complex:
    """Complex-bilinear extension of g to g = h + ih."""
    if G.trace_coeff is not None:
        return complex(G.trace_coeff * np.trace(A @ B))
    return complex(G.ccoords(A) @ G.gram_matrix @ G.ccoords(B))


def _ad_matrix(G: RealFormGroup, X):
    """Matrix of ad_X on g in the complex basis ``h_basis``."""
    cols = [G.ccoords(bracket(X, E)) for E in G.h_basis]
    return np.array(cols).T


def killing_form(G: RealFormGroup, a, b):
    """Tr(ad_a ad_b), computed by brute force over a basis of g."""
    val = np.trace(_ad_matrix(G, a) @ _ad_matrix(G, b))
    if abs(val.imag) < 1e-12 * (1 + abs(val)):
        return float(val.real)
    return complex(val)


def killing_gram(G: RealFormGroup) -> np.ndarray:
    ads = [_ad_matrix(G, E) for E in G.h_basis]
    K = np.array([[np.trace(x @ y).real for y in ads] for x in ads])
    return 0.5 * (K + K.T)


def _reference_frame(G: RealFormGroup):
    cache = G._cache
    if "orientation_ref" not in cache:
        K = killing_gram(G)
        w, v = np.linalg.eigh(K)
        if np.all(w < 0):
            # compact case: any independent pair will do
            E1, E2 = G.h_basis[0], G.h_basis[1]
        else:
            pos = np.where(w > 0)[0]
            if len(pos) < 2:
                raise WrongDimension("Killing form admits no space-like plane")
            E1, E2 = G.from_coords(v[:, pos[-1]]), G.from_coords(v[:, pos[-2]])
        ref = np.array([G.coords(E1), G.coords(E2), G.coords(bracket(E1, E2))])
        cache["orientation_ref"] = (E1, E2, np.sign(np.linalg.det(ref)))
    return cache["orientation_ref"]


def reference_pair(G: RealFormGroup):
    E1, E2, _ = _reference_frame(G)
    return E1, E2


def orientation_sign(G: RealFormGroup, u, v, w) -> int:
    """Sign of (u, v, w) against the canonical orientation of a 3-dim simple h."""
    if G.dim != 3:
        raise WrongDimension(f"orientation needs dim h = 3, got {G.dim}")
    _, _, ref_sign = _reference_frame(G)
    M = np.array([G.coords(u), G.coords(v), G.coords(w)])
    d = np.linalg.det(M)
    scale = np.prod(np.linalg.norm(M, axis=1))
    if abs(d) <= 1e-12 * max(scale, 1e-300):
        return 0
    return int(np.sign(d) * ref_sign)


# -- exp / log ----------------------------------------------------------------
def matrix_exp(X):
    return scipy.linalg.expm(np.asarray(X, dtype=complex))


def expm_derivative(X, E):
    """Directional derivative d/dt exp(X + tE) at t = 0."""
    return scipy.linalg.expm_frechet(np.asarray(X, dtype=complex), np.asarray(E, dtype=complex), compute_expm=False)


def matrix_log(S, hermitian: bool = False):
    """Principal logarithm; ``hermitian=True`` uses the Herm+ branch."""
    S = np.asarray(S, dtype=complex)
    if hermitian:
        Sh = 0.5 * (S + S.conj().T)
        w, V = np.linalg.eigh(Sh)
        if np.any(w <= 0):
            raise LogBranchFailure("matrix is not positive definite")
        return (V * np.log(w)) @ V.conj().T
    w = np.linalg.eigvals(S)
    scale = max(1.0, float(np.max(np.abs(w))))
    bad = (np.abs(w.imag) <= 1e-12 * scale) & (w.real <= 1e-14 * scale)
    if np.any(bad):
        raise LogBranchFailure("eigenvalue on the closed negative real axis")
    return scipy.linalg.logm(S)


def matrix_sqrt(S, hermitian: bool = False):
    """Principal square root; for ``hermitian`` the positive-definite root."""
    S = np.asarray(S, dtype=complex)
    if hermitian:
        Sh = 0.5 * (S + S.conj().T)
        w, V = np.linalg.eigh(Sh)
        if np.any(w <= 0):
            raise LogBranchFailure("matrix is not positive definite")
        return (V * np.sqrt(w)) @ V.conj().T
    w = np.linalg.eigvals(S)
    scale = max(1.0, float(np.max(np.abs(w))))
    if np.any((np.abs(w.imag) <= 1e-12 * scale) & (w.real <= 1e-14 * scale)):
        raise LogBranchFailure("eigenvalue on the closed negative real axis")
    return scipy.linalg.sqrtm(S)


def Ad(h, X):
    return h @ X @ np.linalg.inv(h)


# -- standard real forms ---------------------------------------------------
def _E(n, j, k):
    m = np.zeros((n, n), dtype=complex)
    m[j, k] = 1.0
    return m


def _su_basis(n, with_center):
    basis = []
    if with_center:
        basis += [1j * _E(n, j, j) for j in range(n)]
    else:
        basis += [1j * (_E(n, j, j) - _E(n, j + 1, j + 1)) for j in range(n - 1)]
    for j in range(n):
        for k in range(j + 1, n):
            basis.append(_E(n, j, k) - _E(n, k, j))
            basis.append(1j * (_E(n, j, k) + _E(n, k, j)))
    return np.array(basis)


def _real_basis(n, with_center):
    basis = []
    if with_center:
        basis += [_E(n, j, j) for j in range(n)]
    else:
        basis += [_E(n, j, j) - _E(n, j + 1, j + 1) for j in range(n - 1)]
    basis += [_E(n, j, k) for j in range(n) for k in range(n) if j != k]
    return np.array(basis)


def sl_compact(n=2, trace_coeff=-2.0, name=None):
    """SL(n, C) with the compact real form SU(n)."""
    return RealFormGroup(n, "sl", "antihermitian", _su_basis(n, False), trace_coeff=trace_coeff,
                         name=name or f"SL({n},C)/SU({n})")


def sl_split(n=2, trace_coeff=2.0, name=None):
    """SL(n, C) with the split real form SL(n, R)."""
    return RealFormGroup(n, "sl", "conjugation", _real_basis(n, False), trace_coeff=trace_coeff,
                         name=name or f"SL({n},C)/SL({n},R)")


def gl_unitary(n, trace_coeff=-1.0, name=None):
    """GL(n, C) with the real form U(n)."""
    return RealFormGroup(n, "gl", "antihermitian", _su_basis(n, True), trace_coeff=trace_coeff,
                         name=name or f"GL({n},C)/U({n})")


def gl_real(n, trace_coeff=-1.0, name=None):
    """GL(n, C) with the real form GL(n, R)."""
    return RealFormGroup(n, "gl", "conjugation", _real_basis(n, True), trace_coeff=trace_coeff,
                         name=name or f"GL({n},C)/GL({n},R)")


def abelian(n, lattice=None, name=None):
    """C^n realised as diagonal matrices diag(exp v), real form i R^n (+ lattice).

    g is the standard inner product on i R^n, i.e. g(a, b) = -Tr(ab).
    """
    basis = np.array([1j * _E(n, j, j) for j in range(n)])
    return RealFormGroup(n, "abelian", "abelian_imag", basis, trace_coeff=-1.0, lattice=lattice,
                         name=name or (f"C^{n}/(Lambda+iR^{n})" if lattice is not None else f"C^{n}/iR^{n}"))


def check_real_form(G: RealFormGroup, rng, samples=10) -> dict:
    """Residuals of the structural invariants of ``G`` on random samples."""
    out = {"involution": 0.0, "antilinear": 0.0, "homomorphism": 0.0,
           "basis_fixed": 0.0, "symmetry": 0.0, "ad_invariance": 0.0, "Ad_invariance": 0.0}
    for _ in range(samples):
        X, Y = G.random_g(rng), G.random_g(rng)
        out["involution"] = max(out["involution"], frob(G.sigma(G.sigma(X)) - X))
        out["antilinear"] = max(out["antilinear"], frob(G.sigma(1j * X) + 1j * G.sigma(X)))
        out["homomorphism"] = max(out["homomorphism"],
                                  frob(G.sigma(bracket(X, Y)) - bracket(G.sigma(X), G.sigma(Y))))
    out["basis_fixed"] = max(G.real_form_residual(E) for E in G.h_basis)
    flat = G.h_basis.reshape(G.dim, -1)
    out["rank"] = int(np.linalg.matrix_rank(np.hstack([flat.real, flat.imag]), tol=1e-10))
    gm = G.gram_matrix
    out["symmetry"] = frob(gm - gm.T)
    out["min_singular"] = float(np.min(np.linalg.svd(gm, compute_uv=False)))
    for z in G.h_basis:
        for a in G.h_basis:
            for b in G.h_basis:
                r = abs(form_eval(G, bracket(z, a), b) + form_eval(G, a, bracket(z, b)))
                out["ad_invariance"] = max(out["ad_invariance"], r)
    for _ in range(samples):
        h = matrix_exp(G.random_h(rng, 0.7))
        a, b = G.random_h(rng), G.random_h(rng)
        r = abs(form_eval(G, Ad(h, a), Ad(h, b), check=False) - form_eval(G, a, b))
        out["Ad_invariance"] = max(out["Ad_invariance"], r)
    return out
