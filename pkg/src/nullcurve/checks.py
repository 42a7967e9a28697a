"""The verification suite behind ``nullcurve verify``.

Every check produces records ``{check, z, residual, tolerance, pass}``; a record
passes when ``residual < tolerance`` (or ``residual <= 0`` when the tolerance is 0).
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
import os

import numpy as np

from . import curves as C
from . import meancurv as MC
from . import oracle as O
from . import weierstrass as W
from .errors import GeometryError
from .homspace import bracket_closed_form, bracket_TM
from .liealg import frob

SUITE_CHECKS = {
    "pointwise": ("nondegeneracy", "holomorphy", "isotropy", "spacelike", "dtheta"),
    "algebra": ("zsys", "bracket_closed_form"),
    "meancurv": ("mean_curvature", "corollaries", "expected"),
    "oracle": ("oracle",),
    "weierstrass": ("flatness", "holonomy"),
}
SUITE_CHECKS["quick"] = SUITE_CHECKS["pointwise"] + SUITE_CHECKS["algebra"] + SUITE_CHECKS["meancurv"]
SUITE_CHECKS["full"] = SUITE_CHECKS["quick"] + SUITE_CHECKS["oracle"] + SUITE_CHECKS["weierstrass"]


def _z(z):
    return None if z is None else [round(float(np.real(z)), 12), round(float(np.imag(z)), 12)]


def record(check, z, residual, tol, note=None):
    r = None if residual is None or not np.isfinite(residual) else float(residual)
    ok = r is not None and (r < tol if tol > 0 else r <= 0)
    rec = {"check": check, "z": _z(z), "residual": r, "tolerance": float(tol), "pass": bool(ok)}
    if note:
        rec["note"] = note
    return rec


def _points(curve, res, inset):
    Z = curve.domain.grid(res, inset=inset).ravel()
    return [complex(z) for z in Z if not np.isnan(z)]


def _map(fn, items):
    workers = min(4, os.cpu_count() or 1)
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(workers) as ex:
        return list(ex.map(fn, items))


def _safe(check, z, tol, fn):
    try:
        return fn()
    except GeometryError as exc:
        return [record(check, z, None, tol, f"{type(exc).__name__}: {exc}")]


class Suite:
    def __init__(self, cfg, entry, model, curve):
        self.cfg, self.entry, self.model, self.curve = cfg, entry, model, curve
        self.G = model.group
        self.tol = cfg.tolerances
        self.steps = cfg.steps
        self.rng = np.random.default_rng(cfg.seed)
        self.points = _points(curve, cfg.resolution, cfg.inset)

    # -- pointwise ----------------------------------------------------------------
    def nondegeneracy(self):
        s = np.linalg.svd(self.G.gram_matrix, compute_uv=False)
        return [record("nondegeneracy", None, -float(s.min()), self.tol["nondegeneracy"])]

    def _pointwise(self, name, fn):
        tol = self.tol[name]
        return [r for z in self.points for r in _safe(name, z, tol, lambda z=z: [record(name, z, fn(z), tol)])]

    def holomorphy(self):
        return self._pointwise("holomorphy", lambda z: C.holomorphy_residual(self.G, self.curve.jet(z)))

    def isotropy(self):
        return self._pointwise("isotropy", lambda z: C.isotropy_residual(self.G, self.curve.jet(z)))

    def spacelike(self):
        return self._pointwise("spacelike", lambda z: -C.spacelike_margin(self.G, self.curve.jet(z)))

    def dtheta(self):
        h = self.steps["dtheta"]
        return self._pointwise("dtheta", lambda z: C.dtheta_residual(self.curve, z, h))

    # -- algebra -----------------------------------------------------------------
    def zsys(self):
        G, h = self.G, self.steps["zsys"]
        out = []
        k = G.dim
        for i in range(5):
            sec = W.random_section(G, self.rng)
            c = 0.3 * self.rng.standard_normal(k)
            r1, r2 = W.zsys_residual_nd(G, sec.forms, c, h)
            out.append(record("zsys", None, max(r1, r2), self.tol["zsys"], f"section {i}"))
            base = (r1, r2)
            for j in range(4):
                g1, g2 = W.zsys_residual_nd(G, W.gauge_forms(G, sec.forms, W.random_gauge(G, self.rng)), c, h)
                out.append(record("zsys_gauge", None, max(abs(g1 - base[0]), abs(g2 - base[1])),
                                  self.tol["zsys_gauge"], f"section {i} gauge {j}"))
        return out

    def bracket_closed_form(self):
        m = self.model
        if m.kind not in ("hermpos", "realstruct"):
            return []
        out = []
        for z in self.points[:: max(1, len(self.points) // 10)]:
            p = m.project(self.curve.jet(z).f)
            gamma = m.canonical_lift(p)
            u, v = (m.push(gamma, 1j * self.G.random_h(self.rng)) for _ in range(2))
            dev = frob(bracket_TM(m, p, u, v) - bracket_closed_form(m, p, u, v)) / (1 + frob(u) * frob(v))
            out.append(record("bracket_closed_form", z, dev, self.tol["bracket_closed_form"]))
        return out

    # -- mean curvature ----------------------------------------------------------
    def _sample(self, z):
        return MC.project_immersion(self.curve, self.model, z, strict=False)

    def mean_curvature(self):
        h = self.steps["mean_curvature"]

        def one(z):
            def run():
                s = self._sample(z)
                Hb = MC.mean_curvature_bracket(s)
                Hm = MC.mean_curvature_maurer(self.curve, self.model, z, h, strict=False)
                Ht = MC.mean_curvature_tangent(s)
                Hf = MC.frame_to_tangent(s, Hb)
                return [record("mean_curvature_agreement", z, frob(Hb - Hm), self.tol["mean_curvature_agreement"]),
                        record("mean_curvature_model", z, frob(Ht - Hf) / (1 + frob(Ht)),
                               self.tol["mean_curvature_model"])]
            return _safe("mean_curvature_agreement", z, self.tol["mean_curvature_agreement"], run)

        return [r for rs in _map(one, self.points) for r in rs]

    def corollaries(self):
        def one(z):
            def run():
                rec = MC.check_corollaries(self._sample(z))
                out = [record("corollary_gHH_K", z, rec["r1"], self.tol["corollary_gHH_K"]),
                       record("corollary_R", z, rec["r2"], self.tol["corollary_R"])]
                if rec["r3"] is not None:
                    out.append(record("corollary_scalar", z, rec["r3"], self.tol["corollary_scalar"]))
                return out
            return _safe("corollary_gHH_K", z, self.tol["corollary_gHH_K"], run)

        return [r for rs in _map(one, self.points) for r in rs]

    def expected(self):
        if self.entry is None:
            return []
        exp = self.entry.expected
        out = []
        for z in self.points:
            def run(z=z):
                s = self._sample(z)
                recs = []
                vals = {"lambda2": lambda: s.lambda2,
                        "H_frame": lambda: MC.mean_curvature_bracket(s)}
                if any(k in exp for k in ("gHH", "K", "H_scalar")):
                    cor = MC.check_corollaries(s)
                    vals.update({"gHH": lambda: cor["gHH"], "K": lambda: cor["K"],
                                 "H_scalar": lambda: cor["H_scalar"]})
                for key, fn in vals.items():
                    if key in exp:
                        v = fn()
                        dev = np.inf if v is None else frob(np.asarray(v) - np.asarray(exp[key].value))
                        recs.append(record(f"expected_{key}", z, dev, exp[key].tol, exp[key].source))
                return recs
            out += _safe("expected", z, 1.0, run)
        return out

    # -- oracle --------------------------------------------------------------------
    def oracle(self):
        m, cur = self.model, self.curve
        ds, step = self.steps["surface"], self.steps["chart"]
        pts = _points(cur, self.cfg.oracle_resolution, self.cfg.inset) if self.cfg.oracle_resolution > 1 \
            else [self.points[len(self.points) // 2]]
        tol = self.tol["oracle"]

        def phi(z):
            return m.project(cur(z))

        out = []
        for z in pts:
            def run(z=z):
                field = O.ChartMetricField(m, phi(z), step)
                Ho, _ = O.oracle_mean_curvature(phi, field, z, ds)
                s = self._sample(z)
                hb = O.tangent_to_chart(field, np.zeros(field.dim), MC.frame_to_tangent(s, MC.mean_curvature_bracket(s)))
                return [record("oracle", z, np.linalg.norm(Ho - hb) / (1 + np.linalg.norm(hb)), tol)]
            out += _safe("oracle", z, tol, run)
        return out

    # -- weierstrass ---------------------------------------------------------------
    def flatness(self):
        m, cur = self.model, self.curve
        tol, h = self.tol["flatness"], self.steps["flatness"]
        f0 = W.reference_lift_curve(cur, m)
        conn = W.build_Bphi(f0, m)
        pts = _points(cur, max(4, self.cfg.oracle_resolution), self.cfg.inset)
        out = []
        for z in pts:
            def run(z=z):
                a, b = W.flatness_residual(conn, z, h), W.flatness_residual_closed(conn, z, h)
                return [record("flatness", z, a, tol, "direct"), record("flatness", z, b, tol, "closed form")]
            out += _safe("flatness", z, tol, run)
        return out

    def holonomy(self):
        m, cur = self.model, self.curve
        out = []
        try:
            conn = W.build_Bphi(W.reference_lift_curve(cur, m), m)
            for spec in default_loops(self.entry, cur, self.cfg.loops):
                loop = loop_from_spec(spec)
                hol = W.holonomy(conn, loop, spec.get("steps", 1000))
                want = spec.get("translation")
                if want is not None:
                    tr = W.translation_part(conn, loop, spec.get("steps", 1000))
                    out.append(record("holonomy", loop.start, float(np.max(np.abs(tr - np.asarray(want)))),
                                      self.tol["periods"], f"translation {spec.get('name', '')}"))
                else:
                    out.append(record("holonomy", loop.start, frob(hol - np.eye(self.G.n)), self.tol["holonomy"],
                                      f"contractible {spec.get('name', '')}"))
        except GeometryError as exc:
            out.append(record("holonomy", None, None, self.tol["holonomy"], f"{type(exc).__name__}: {exc}"))
        if self.entry is not None and self.entry.beta is not None:
            out += periods_records(self.entry, self.tol)
        return out

    def run(self, suite: str):
        recs = []
        for name in SUITE_CHECKS[suite]:
            recs += getattr(self, name)()
        return recs


def loop_from_spec(spec: dict) -> W.PathSpec:
    from .config import parse_complex
    kind = spec.get("kind", "polyline")
    if kind == "circle":
        return W.PathSpec.circle(parse_complex(spec.get("center", 0)), float(spec["radius"]),
                                 float(spec.get("angle0", 0.0)), float(spec.get("turns", 1.0)))
    if kind == "polyline":
        return W.PathSpec.polyline([parse_complex(p) for p in spec["points"]])
    raise ValueError(f"unknown loop kind {kind!r}")


def default_loops(entry, curve, configured):
    if configured:
        return configured
    dom = curve.domain
    if dom.kind == "annulus-sector":
        r = entry.extras.get("loop_radius", float(np.mean(dom.xb))) if entry is not None else float(np.mean(dom.xb))
        want = entry.expected.get("puncture_period") if entry is not None else None
        spec = {"name": "puncture", "kind": "circle", "center": 0, "radius": r, "angle0": -np.pi}
        if want is not None:
            spec["translation"] = list(want.value)
        return [spec]
    cx, cy = np.mean(dom.xb), np.mean(dom.yb)
    a = 0.25 * min(dom.xb[1] - dom.xb[0], dom.yb[1] - dom.yb[0])
    pts = [complex(cx - a, cy - a), complex(cx + a, cy - a), complex(cx + a, cy + a), complex(cx - a, cy + a),
           complex(cx - a, cy - a)]
    return [{"name": "square", "kind": "polyline", "points": [str(p) for p in pts]}]


def periods_records(entry, tol):
    out = []
    if "puncture_period" in entry.expected:
        r = entry.extras.get("loop_radius", 1.0)
        P = W.line_integral(entry.beta, W.PathSpec.circle(0, r, -np.pi), 10_000)
        out.append(record("periods", None, float(np.max(np.abs(P.imag - np.asarray(entry.expected["puncture_period"].value)))),
                          tol["periods"], "imaginary part of the puncture period"))
        out.append(record("real_periods", None, float(np.max(np.abs(P.real))), tol["real_periods"]))
    if "period_membership" in entry.expected:
        tau = entry.extras["tau"]
        for p in W.torus_periods(entry.beta, [1.0, tau], entry.group.lattice):
            out.append(record("lattice_membership", None, p["membership_residual"], tol["lattice_membership"],
                              f"generator {p['generator']}"))
    return out


def summarize(records):
    summ = {}
    for r in records:
        s = summ.setdefault(r["check"], {"count": 0, "failures": 0, "max_residual": None, "mean_residual": None,
                                          "_vals": []})
        s["count"] += 1
        s["failures"] += 0 if r["pass"] else 1
        if r["residual"] is not None:
            s["_vals"].append(r["residual"])
    for s in summ.values():
        v = s.pop("_vals")
        if v:
            s["max_residual"] = float(max(v))
            s["mean_residual"] = float(np.mean(v))
    return summ
