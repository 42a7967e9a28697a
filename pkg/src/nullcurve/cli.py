"""Command-line front end: ``nullcurve {verify,lift,holonomy,mesh,list-corpus}``.

Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error,
3 numerical failure (singular element, branch failure, ...).
"""
from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__, checks, config, corpus
from . import mesh as meshmod
from . import weierstrass as W
from .errors import ConfigError, GeometryError
from .liealg import frob

REPORT_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _matrix_json(M):
    M = np.asarray(M)
    return {"re": np.round(M.real, 14).tolist(), "im": np.round(M.imag, 14).tolist()}


def make_report(command, cfg, records, extra=None):
    body = {
        "report_version": REPORT_VERSION,
        "command": command,
        "package_version": __version__,
        "config": cfg.echo(),
        "records": records,
        "summary": checks.summarize(records),
        "all_pass": all(r["pass"] for r in records),
    }
    if extra:
        body.update(extra)
    return body


def report_text(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1, allow_nan=False)


def write_report(report, path, wall_time):
    out = dict(report)
    out["wall_time_s"] = round(wall_time, 3)
    text = report_text(out)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


# -- commands ------------------------------------------------------------------------
def cmd_verify(cfg):
    entry, model, curve = config.materialize(cfg)
    recs = checks.Suite(cfg, entry, model, curve).run(cfg.suite)
    return make_report("verify", cfg, recs)


def _default_gauge(G, scale):
    B = G.h_basis
    pick = lambda i: B[i % len(B)] * scale
    return W.chart_exp_gauge(0 * B[0], pick(0), 0.5 * pick(1), 0.3 * pick(2))


def cmd_lift(cfg):
    entry, model, curve = config.materialize(cfg)
    G = model.group
    tol = cfg.tolerances
    if curve.domain.kind != "rectangle":
        raise GeometryError("lift needs a rectangle chart")
    scale = float(cfg.lift.get("gauge_scale", 0.5))
    res = int(cfg.lift.get("resolution", 4))
    z0 = config.parse_complex(cfg.lift.get("basepoint", complex(np.mean(curve.domain.xb), np.mean(curve.domain.yb))))
    f0 = W.gauge_curve(curve, _default_gauge(G, scale)) if scale else W.reference_lift_curve(curve, model)
    conn = W.build_Bphi(f0, model, phi=lambda z: model.project(curve(z)))
    Z = curve.domain.grid(res, inset=max(cfg.inset, 0.2))
    recs = [checks.record("flatness", z, W.flatness_residual(conn, z, cfg.steps["flatness"]), tol["flatness"])
            for z in Z.ravel()]
    FL, FR = W.lift_on_grid(f0, conn, z0, Z)
    for z, a, b in zip(Z.ravel(), FL.reshape(-1, G.n, G.n), FR.reshape(-1, G.n, G.n)):
        recs.append(checks.record("lift_paths", z, frob(a - b), tol["lift_paths"]))
    F = np.array([curve(z) for z in Z.ravel()])
    h0, fit = W.fit_right_translation(FL.reshape(-1, G.n, G.n), F)
    recs.append(checks.record("lift_fit", None, fit, tol["lift_fit"]))
    lift = W.holomorphic_lift(f0, conn, z0, grid=Z)
    zc = Z[res // 2, res // 2]
    recs.append(checks.record("lift_holomorphy", zc, W.lift_holomorphy_residual(lift, [zc]), tol["lift_holomorphy"]))
    dump = {"basepoint": [z0.real, z0.imag],
            "points": [[float(z.real), float(z.imag)] for z in Z.ravel()],
            "lift": [_matrix_json(M) for M in FL.reshape(-1, G.n, G.n)],
            "fitted_right_translation": _matrix_json(h0)}
    return make_report("lift", cfg, recs, {"curve_dump": dump})


def cmd_holonomy(cfg):
    entry, model, curve = config.materialize(cfg)
    conn = W.build_Bphi(W.reference_lift_curve(curve, model), model)
    recs, loops = [], []
    for spec in checks.default_loops(entry, curve, cfg.loops):
        loop = checks.loop_from_spec(spec)
        steps = int(spec.get("steps", 1000))
        hol = W.holonomy(conn, loop, steps)
        item = {"name": spec.get("name", ""), "holonomy": _matrix_json(hol)}
        if model.abelian:
            tr = W.translation_part(conn, loop, steps)
            item["translation"] = [float(x) for x in np.round(tr, 12)]
        want = spec.get("translation")
        if want is not None and not model.abelian:
            raise ConfigError("loop translations are only defined for abelian models", "holonomy.loops")
        if want is not None:
            recs.append(checks.record("holonomy", loop.start, float(np.max(np.abs(tr - np.asarray(want)))),
                                      cfg.tolerances["periods"], "translation"))
        elif model.abelian:
            recs.append(checks.record("holonomy", loop.start, float(np.max(np.abs(tr))), cfg.tolerances["holonomy"]))
        else:
            recs.append(checks.record("holonomy", loop.start, frob(hol - np.eye(model.group.n)),
                                      cfg.tolerances["holonomy"]))
        loops.append(item)
    if entry is not None and entry.beta is not None:
        recs += checks.periods_records(entry, cfg.tolerances)
    return make_report("holonomy", cfg, recs, {"loops": loops})


def cmd_mesh(cfg, out_path):
    entry, model, curve = config.materialize(cfg)
    m = meshmod.build_mesh(curve, model, cfg.resolution, cfg.inset)
    path = cfg.mesh or out_path or "mesh.obj"
    meshmod.write_obj(m, path, header=f"nullcurve {__version__} mesh of {curve.name}")
    summary = {k: {"min": float(v.min()), "max": float(v.max())} for k, v in m.scalars.items()}
    return make_report("mesh", cfg, [], {"mesh": {"path": path, "vertices": len(m.vertices), "faces": len(m.faces),
                                                  "embedding": m.embedding, "scalars": summary}})


# -- entry point -----------------------------------------------------------------
def build_parser():
    p = argparse.ArgumentParser(prog="nullcurve", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("verify", "lift", "holonomy", "mesh"):
        s = sub.add_parser(name)
        s.add_argument("--config", help="TOML run configuration")
        s.add_argument("--entry", help="corpus entry (overrides the config)")
        s.add_argument("--out", help="output path (report, or mesh for the mesh command)")
        s.add_argument("--suite", help="check suite: " + ", ".join(config.SUITES))
        s.add_argument("--seed", type=int, help="seed for randomized sampling")
        s.add_argument("--resolution", type=int, help="grid resolution (overrides the config)")
    sub.add_parser("list-corpus")
    return p


def _config_from_args(args):
    cfg = config.load(args.config) if args.config else None
    if cfg is None:
        if not args.entry:
            raise ConfigError("give --config or --entry")
        cfg = config.RunConfig(entry=args.entry)
    if args.entry:
        cfg.entry = args.entry
    if args.suite:
        cfg.suite = args.suite
    if args.seed is not None:
        cfg.seed = args.seed
    if args.resolution is not None:
        cfg.resolution = args.resolution
    return config.validate(cfg)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list-corpus":
        for name in corpus.list_entries():
            print(f"{name:18s} {corpus.get(name).description}")
        return EXIT_OK
    t0 = time.perf_counter()
    try:
        cfg = _config_from_args(args)
        if args.command == "verify":
            rep = cmd_verify(cfg)
        elif args.command == "lift":
            rep = cmd_lift(cfg)
        elif args.command == "holonomy":
            rep = cmd_holonomy(cfg)
        else:
            rep = cmd_mesh(cfg, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GeometryError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    out = None if args.command == "mesh" else (args.out or cfg.report)
    text = write_report(rep, out, time.perf_counter() - t0)
    if out is None:
        print(text)
    fails = [k for k, s in rep["summary"].items() if s["failures"]]
    print(f"{args.command}: {'PASS' if rep['all_pass'] else 'FAIL'}"
          + (f" (failing: {', '.join(fails)})" if fails else ""), file=sys.stderr)
    return EXIT_OK if rep["all_pass"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
