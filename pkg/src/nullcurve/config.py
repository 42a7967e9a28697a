"""Run configuration: a single TOML file, validated with line/field diagnostics."""
from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field, replace

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import corpus, liealg
from .curves import ChartDomain, HoloCurve
from .errors import ConfigError, UnknownEntry
from .homspace import MODEL_KINDS, HomogeneousModel

DEFAULT_STEPS = {"mean_curvature": 1e-4, "dtheta": 1e-4, "zsys": 1e-4, "flatness": 1e-4,
                 "chart": 1e-3, "surface": 1e-2}
DEFAULT_TOLERANCES = {
    "holomorphy": 1e-8, "isotropy": 1e-8, "spacelike": 0.0, "nondegeneracy": 0.0,
    "dtheta": 1e-6, "zsys": 1e-6, "zsys_gauge": 1e-6, "mean_curvature_agreement": 1e-6,
    "mean_curvature_model": 1e-8, "corollary_gHH_K": 1e-8, "corollary_R": 1e-6,
    "corollary_scalar": 1e-8, "bracket_closed_form": 1e-10, "oracle": 1e-3, "flatness": 1e-6,
    "holonomy": 1e-6, "periods": 1e-5, "real_periods": 1e-8, "lattice_membership": 1e-10,
    "lift_paths": 1e-6, "lift_fit": 1e-4, "lift_holomorphy": 1e-4,
}
SUITES = ("full", "quick", "pointwise", "algebra", "meancurv", "oracle", "weierstrass")


@dataclass
class RunConfig:
    entry: str | None = None
    coefficients: list | None = None
    domain: dict | None = None
    group: dict = field(default_factory=dict)
    model: str | None = None
    resolution: int = 8
    oracle_resolution: int = 5
    inset: float = 0.1
    steps: dict = field(default_factory=lambda: dict(DEFAULT_STEPS))
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    suite: str = "full"
    seed: int = 0
    report: str | None = None
    mesh: str | None = None
    lift: dict = field(default_factory=dict)
    loops: list = field(default_factory=list)
    source_text: str = ""

    def echo(self) -> dict:
        return {
            "entry": self.entry, "coefficients": self.coefficients is not None, "domain": self.domain,
            "group": self.group, "model": self.model, "resolution": self.resolution,
            "oracle_resolution": self.oracle_resolution, "inset": self.inset,
            "steps": self.steps, "tolerances": self.tolerances, "suite": self.suite, "seed": self.seed,
            "lift": self.lift, "loops": self.loops,
        }


def _line_of(text: str, key: str):
    for i, line in enumerate(text.splitlines(), 1):
        if re.match(rf"\s*{re.escape(key)}\s*=", line):
            return i
    return None


def parse_complex(v, where="value"):
    if isinstance(v, (int, float, complex, np.number)):
        return complex(v)
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", "").replace("i", "j"))
        except ValueError:
            pass
    raise ConfigError(f"cannot read {v!r} as a complex number", field=where)


def parse_matrix(v, where="matrix"):
    try:
        return np.array([[parse_complex(x, where) for x in row] for row in v], dtype=complex)
    except TypeError as exc:
        raise ConfigError("matrix must be a list of rows", field=where) from exc


def validate(cfg: RunConfig) -> RunConfig:
    t = cfg.source_text
    if cfg.resolution < 4:
        raise ConfigError(f"resolution must be at least 4, got {cfg.resolution}", "grid.resolution",
                          _line_of(t, "resolution"))
    if cfg.oracle_resolution < 1:
        raise ConfigError("oracle_resolution must be positive", "grid.oracle_resolution",
                          _line_of(t, "oracle_resolution"))
    if not 0 <= cfg.inset < 0.5:
        raise ConfigError("inset must lie in [0, 0.5)", "grid.inset", _line_of(t, "inset"))
    for k, v in cfg.steps.items():
        if k not in DEFAULT_STEPS:
            raise ConfigError(f"unknown step {k!r}", f"steps.{k}", _line_of(t, k))
        if not 1e-8 < float(v) < 1e-1:
            raise ConfigError(f"step {k} = {v} outside (1e-8, 1e-1)", f"steps.{k}", _line_of(t, k))
    for k, v in cfg.tolerances.items():
        if k not in DEFAULT_TOLERANCES:
            raise ConfigError(f"unknown tolerance {k!r}", f"tolerances.{k}", _line_of(t, k))
        if float(v) < 0:
            raise ConfigError(f"tolerance {k} is negative", f"tolerances.{k}", _line_of(t, k))
    if cfg.suite not in SUITES:
        raise ConfigError(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITES)}", "suite",
                          _line_of(t, "suite"))
    if cfg.entry is None and cfg.coefficients is None:
        raise ConfigError("no curve: give curve.entry or curve.coefficients", "curve")
    if cfg.entry is not None and cfg.entry not in corpus.list_entries():
        raise ConfigError(f"unknown corpus entry {cfg.entry!r}", "curve.entry", _line_of(t, "entry"))
    if cfg.model is not None and cfg.model not in MODEL_KINDS:
        raise ConfigError(f"unknown model {cfg.model!r}", "model.kind", _line_of(t, "kind"))
    return cfg


def from_dict(d: dict, text: str = "") -> RunConfig:
    known = {"curve", "group", "model", "grid", "steps", "tolerances", "suite", "seed", "output", "lift",
             "holonomy"}
    for k in d:
        if k not in known:
            raise ConfigError(f"unknown section {k!r}", k, _line_of(text, k) or _line_of_section(text, k))
    cfg = RunConfig(source_text=text)
    curve = d.get("curve", {})
    cfg.entry = curve.get("entry")
    cfg.coefficients = curve.get("coefficients")
    cfg.domain = curve.get("domain")
    cfg.group = dict(d.get("group", {}))
    cfg.model = d.get("model", {}).get("kind")
    grid = d.get("grid", {})
    try:
        cfg.resolution = int(grid.get("resolution", cfg.resolution))
        cfg.oracle_resolution = int(grid.get("oracle_resolution", cfg.oracle_resolution))
        cfg.inset = float(grid.get("inset", cfg.inset))
        cfg.steps.update({k: float(v) for k, v in d.get("steps", {}).items()})
        cfg.tolerances.update({k: float(v) for k, v in d.get("tolerances", {}).items()})
        cfg.seed = int(d.get("seed", 0))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"non-numeric value: {exc}") from exc
    suite = d.get("suite", "full")
    cfg.suite = suite.get("name", "full") if isinstance(suite, dict) else suite
    out = d.get("output", {})
    cfg.report, cfg.mesh = out.get("report"), out.get("mesh")
    cfg.lift = dict(d.get("lift", {}))
    cfg.loops = list(d.get("holonomy", {}).get("loops", []))
    return validate(cfg)


def _line_of_section(text, name):
    for i, line in enumerate(text.splitlines(), 1):
        if re.match(rf"\s*\[+\s*{re.escape(name)}[\].]", line):
            return i
    return None


def load(path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    text = raw.decode("utf-8", errors="replace")
    try:
        d = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ConfigError(f"TOML syntax error: {exc}", line=int(m.group(1)) if m else None) from exc
    return from_dict(d, text)


# -- materialising the curve -----------------------------------------------------
def _build_group(spec: dict, base=None):
    """Group from an explicit description; missing fields default to ``base``."""
    if not spec:
        return base
    try:
        kind = spec.get("kind", base.group_kind if base is not None else None)
        sigma = spec.get("sigma", base.sigma_kind if base is not None else None)
        n = int(spec.get("n", base.n if base is not None else 2))
        c = spec.get("trace_coeff", base.trace_coeff if base is not None else None)
        if kind == "sl" and sigma == "antihermitian":
            return liealg.sl_compact(n, float(c if c is not None else -2.0))
        if kind == "sl" and sigma == "conjugation":
            return liealg.sl_split(n, float(c if c is not None else 2.0))
        if kind == "gl" and sigma == "antihermitian":
            return liealg.gl_unitary(n, float(c if c is not None else -1.0))
        if kind == "gl" and sigma == "conjugation":
            return liealg.gl_real(n, float(c if c is not None else -1.0))
        if kind == "abelian":
            lat = spec.get("lattice", None if base is None else base.lattice)
            return liealg.abelian(n, None if lat is None else np.asarray(lat, dtype=float))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad group description: {exc}", "group") from exc
    raise ConfigError(f"unsupported group kind/sigma {kind!r}/{sigma!r}", "group")


def _build_domain(spec):
    if spec is None:
        return ChartDomain()
    try:
        return ChartDomain(spec.get("kind", "rectangle"), tuple(spec.get("x", (-1, 1))), tuple(spec.get("y", (-1, 1))),
                           tuple(parse_complex(p, "curve.domain.excluded") for p in spec.get("excluded", ())))
    except ValueError as exc:
        raise ConfigError(str(exc), "curve.domain") from exc


def materialize(cfg: RunConfig):
    """``(entry_or_None, model, curve)`` described by the configuration."""
    if cfg.entry is not None:
        try:
            e = corpus.get(cfg.entry)
        except UnknownEntry as exc:
            raise ConfigError(str(exc), "curve.entry") from exc
        G = _build_group(cfg.group, e.group) if cfg.group else e.group
        model = HomogeneousModel(cfg.model or e.model.kind, G)
        curve = e.curve if G is e.group else replace(e.curve, group=G)
        return e, model, curve
    G = _build_group(cfg.group)
    if G is None:
        raise ConfigError("coefficient curves need a [group] section", "group")
    if cfg.model is None:
        raise ConfigError("coefficient curves need [model] kind", "model.kind")
    C = [parse_matrix(m, "curve.coefficients") for m in cfg.coefficients]
    if any(c.shape != (G.n, G.n) for c in C):
        raise ConfigError(f"coefficient matrices must be {G.n}x{G.n}", "curve.coefficients")
    f = lambda z: sum(c * z ** k for k, c in enumerate(C))
    fp = lambda z: sum((k * c * z ** (k - 1) for k, c in enumerate(C) if k > 0), np.zeros((G.n, G.n), complex))
    try:
        model = HomogeneousModel(cfg.model, G)
    except ValueError as exc:
        raise ConfigError(str(exc), "model.kind") from exc
    curve = HoloCurve.from_holomorphic(f, fp, _build_domain(cfg.domain), G, "coefficients")
    return None, model, curve
