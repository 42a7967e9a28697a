"""Named closed-form null holomorphic curves with their expected invariants."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import liealg
from .curves import ChartDomain, HoloCurve
from .errors import UnknownEntry
from .homspace import HomogeneousModel

# how an expected value is known
SOURCES = ("identity", "hand", "oracle", "construction", "literature")


@dataclass(frozen=True)
class Expected:
    value: object
    source: str
    tol: float

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")


@dataclass(frozen=True, eq=False)
class CorpusEntry:
    name: str
    description: str
    model: HomogeneousModel
    curve: HoloCurve
    expected: dict
    sample_points: tuple
    beta: Callable | None = None      # abelian entries: holomorphic 1-form coefficients
    extras: dict = field(default_factory=dict)

    @property
    def group(self):
        return self.model.group

    @property
    def domain(self):
        return self.curve.domain


def _diag_exp_curve(F, dF, domain, G, name):
    """``f = diag(exp F)`` for an abelian primitive ``F``."""

    def f(z):
        return np.diag(np.exp(np.asarray(F(z), dtype=complex)))

    def fp(z):
        return f(z) @ np.diag(np.asarray(dF(z), dtype=complex))

    return HoloCurve.from_holomorphic(f, fp, domain, G, name)


def _enneper():
    G = liealg.abelian(3, name="C^3/iR^3")
    F = lambda z: (z / 2 - z ** 3 / 6, 1j * (z / 2 + z ** 3 / 6), z ** 2 / 2)
    dF = lambda z: ((1 - z ** 2) / 2, 1j * (1 + z ** 2) / 2, z)
    dom = ChartDomain("rectangle", (-1.0, 1.0), (-1.0, 1.0))
    curve = _diag_exp_curve(F, dF, dom, G, "enneper")
    exp = {
        "isotropy": Expected(0.0, "identity", 1e-8),
        "H": Expected(0.0, "oracle", 1e-6),
        "K": Expected(0.0, "identity", 1e-12),
        "lambda2@0": Expected(0.25, "hand", 1e-12),
    }
    return CorpusEntry("enneper", "Enneper minimal surface in R^3", HomogeneousModel("euclidean", G),
                       curve, exp, (0j, 0.3 + 0.2j, -0.5 + 0.4j), beta=dF)


def _catenoid():
    G = liealg.abelian(3, name="C^3/iR^3")
    dF = lambda z: ((1 / z ** 2 - 1) / 2, 1j * (1 / z ** 2 + 1) / 2, 1 / z)

    def f(z):
        return np.diag([np.exp((-1 / z - z) / 2), np.exp(1j * (-1 / z + z) / 2), z])

    def fp(z):
        return f(z) @ np.diag(np.asarray(dF(z), dtype=complex))

    dom = ChartDomain("annulus-sector", (0.5, 2.0), (-np.pi, np.pi))
    curve = HoloCurve.from_holomorphic(f, fp, dom, G, "catenoid-annulus")
    exp = {
        "isotropy": Expected(0.0, "identity", 1e-8),
        "H": Expected(0.0, "identity", 1e-12),
        "K": Expected(0.0, "identity", 1e-12),
        "puncture_period": Expected((0.0, 0.0, 2 * np.pi), "hand", 1e-5),
        "real_periods": Expected((0.0, 0.0, 0.0), "hand", 1e-8),
    }
    return CorpusEntry("catenoid-annulus", "catenoid on an annulus; the unit circle has an imaginary period",
                       HomogeneousModel("euclidean", G), curve, exp, (1.0 + 0j, 0.8j, -1.2 + 0.3j), beta=dF,
                       extras={"loop_radius": 1.0})


def _horosphere():
    G = liealg.sl_compact(2, trace_coeff=-2.0, name="SL(2,C)/SU(2)")
    dom = ChartDomain("rectangle", (-1.0, 1.0), (-1.0, 1.0))
    curve = HoloCurve.from_holomorphic(lambda z: np.array([[1, z], [0, 1]], dtype=complex),
                                       lambda z: np.array([[0, 1], [0, 0]], dtype=complex), dom, G, "horosphere")
    exp = {
        "lambda2": Expected(1.0, "hand", 1e-12),
        "H_frame": Expected(np.diag([0.5j, -0.5j]), "hand", 1e-12),
        "gHH": Expected(1.0, "hand", 1e-8),
        "K": Expected(-1.0, "hand", 1e-8),
        "H_scalar": Expected(1.0, "hand", 1e-8),
    }
    return CorpusEntry("horosphere", "horosphere in hyperbolic 3-space (CMC 1)", HomogeneousModel("hermpos", G),
                       curve, exp, (0j, 0.4 - 0.3j, -0.6 + 0.5j))


DS_A = np.array([[1, 1j], [1j, -1]], dtype=complex)


def _desitter():
    G = liealg.sl_split(2, trace_coeff=2.0, name="SL(2,C)/SL(2,R)")
    # well inside |z| < 1; the principal square-root lift degrades as eigenvalues of R approach -1
    dom = ChartDomain("rectangle", (-0.45, 0.45), (-0.45, 0.45))
    curve = HoloCurve.from_holomorphic(lambda z: np.eye(2) + z * DS_A, lambda z: DS_A, dom, G, "desitter-null")
    exp = {
        "lambda2": Expected(4.0, "hand", 1e-12),
        "H_frame": Expected(np.array([[0, -0.5], [0.5, 0]], dtype=complex), "hand", 1e-12),
        "gHH": Expected(-1.0, "hand", 1e-8),
        "K": Expected(1.0, "hand", 1e-8),
        "H_scalar": Expected(1.0, "hand", 1e-8),
    }
    return CorpusEntry("desitter-null", "space-like CMC-1 surface in de Sitter 3-space, f = exp(zA), A^2 = 0",
                       HomogeneousModel("realstruct", G), curve, exp, (0j, 0.3 + 0.2j, -0.4 - 0.35j))


def _hermpos3():
    G = liealg.gl_unitary(3, trace_coeff=-1.0, name="GL(3,C)/U(3)")
    rng = np.random.default_rng(20240603)
    N = np.triu(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)), k=1) * 0.6
    P = np.eye(3) + 0.3 * (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    A = P @ N @ np.linalg.inv(P)
    dom = ChartDomain("rectangle", (-1.0, 1.0), (-1.0, 1.0))
    # A^3 = 0, so exp(zA) is a quadratic polynomial
    A2 = A @ A
    curve = HoloCurve.from_holomorphic(lambda z: np.eye(3) + z * A + z * z * A2 / 2,
                                       lambda z: A + z * A2, dom, G, "hermpos-3")
    exp = {
        "isotropy": Expected(0.0, "identity", 1e-8),
        "bracket_closed_form": Expected(0.0, "literature", 1e-10),
        "H_vs_oracle": Expected(0.0, "oracle", 1e-3),
        # orbit of a one-parameter group: constant along the curve; confirmed by the chart oracle to 1e-4
        "gHH": Expected(1.7787738420, "oracle", 1e-9),
        "K": Expected(-1.7787738420, "oracle", 1e-9),
    }
    return CorpusEntry("hermpos-3", "nilpotent-direction curve in GL(3,C)/U(3)", HomogeneousModel("hermpos", G),
                       curve, exp, (0j, 0.3 + 0.4j, -0.5 - 0.2j), extras={"A": A})


RS_N = np.array([[1, 1j], [1j, -1]], dtype=complex) / 2
RS_B = 0.3


def _realstruct2():
    G = liealg.gl_real(2, trace_coeff=1.0, name="GL(2,C)/GL(2,R)")
    dom = ChartDomain("rectangle", (-0.7, 0.7), (-0.7, 0.7))
    # N^2 = 0, so exp(p(z) N) = I + p(z) N
    curve = HoloCurve.from_holomorphic(lambda z: np.eye(2) + (z + RS_B * z * z) * RS_N,
                                       lambda z: (1 + 2 * RS_B * z) * RS_N, dom, G, "realstruct-2")
    exp = {
        "isotropy": Expected(0.0, "identity", 1e-8),
        "bracket_closed_form": Expected(0.0, "literature", 1e-10),
        "H_vs_oracle": Expected(0.0, "oracle", 1e-3),
        "gHH": Expected(-2.0, "oracle", 1e-8),
        "K": Expected(2.0, "oracle", 1e-8),
        "lambda2@0": Expected(0.5, "hand", 1e-12),
    }
    return CorpusEntry("realstruct-2", "null curve in GL(2,C)/GL(2,R) (real structures on C^2)",
                       HomogeneousModel("realstruct", G), curve, exp, (0j, 0.3 + 0.4j, -0.5 - 0.2j))


TORUS_C = np.array([2 + 1j, -1 + 2j])
TORUS_TAU = 1j


def _flat_torus():
    G = liealg.abelian(2, lattice=np.eye(2), name="C^2/(iR^2 + Z^2)")
    dom = ChartDomain("rectangle", (-0.1, 1.1), (-0.1, 1.1))
    c = TORUS_C
    curve = _diag_exp_curve(lambda z: c * z, lambda z: c, dom, G, "flat-torus")
    exp = {
        "isotropy": Expected(0.0, "identity", 1e-8),
        "period_membership": Expected(0.0, "construction", 1e-10),
        "H": Expected(0.0, "identity", 1e-12),
    }
    return CorpusEntry("flat-torus", "linear flat torus C/(Z + tau Z) -> R^2/Z^2", HomogeneousModel("torus", G),
                       curve, exp, (0.2 + 0.3j, 0.5 + 0.5j, 0.9 + 0.1j), beta=lambda z: c,
                       extras={"tau": TORUS_TAU, "c": c})


_BUILDERS = {
    "enneper": _enneper,
    "catenoid-annulus": _catenoid,
    "horosphere": _horosphere,
    "desitter-null": _desitter,
    "hermpos-3": _hermpos3,
    "realstruct-2": _realstruct2,
    "flat-torus": _flat_torus,
}
_CACHE: dict = {}


def list_entries() -> list:
    return list(_BUILDERS)


def get(name: str) -> CorpusEntry:
    if name not in _BUILDERS:
        raise UnknownEntry(f"unknown corpus entry {name!r}; known: {', '.join(_BUILDERS)}")
    if name not in _CACHE:
        _CACHE[name] = _BUILDERS[name]()
    return _CACHE[name]
