import numpy as np
import pytest

from nullcurve import corpus, liealg
from nullcurve import meancurv as MC
from nullcurve.curves import ChartDomain, HoloCurve
from nullcurve.errors import NotImmersion, WrongDimension
from nullcurve.homspace import metric_eval
from nullcurve.liealg import frob

from conftest import interior_points


def sample(name, z):
    e = corpus.get(name)
    return MC.project_immersion(e.curve, e.model, z)


def test_horosphere_sample_at_origin():
    s = sample("horosphere", 0)
    assert frob(s.p - np.eye(2)) < 1e-15
    assert abs(s.lambda2 - 1) < 1e-14 and s.conformal_residual < 1e-10


def test_enneper_conformal_factor_at_origin():
    assert abs(sample("enneper", 0).lambda2 - 0.25) < 1e-14


def test_constant_curve_is_not_immersion():
    e = corpus.get("horosphere")
    const = HoloCurve.from_holomorphic(lambda z: np.eye(2), lambda z: np.zeros((2, 2)), e.domain, e.group)
    with pytest.raises(NotImmersion):
        MC.project_immersion(const, e.model, 0.1)
    with pytest.raises(NotImmersion):
        MC.mean_curvature_maurer(const, e.model, 0.1)


def test_bracket_examples():
    for z in (0, 0.4 - 0.3j):
        H = MC.mean_curvature_bracket(sample("horosphere", z))
        assert frob(H - np.diag([0.5j, -0.5j])) < 1e-12
    for z in (0, 0.3 + 0.2j):
        s = sample("desitter-null", z)
        assert abs(s.lambda2 - 4) < 1e-12
        assert frob(MC.mean_curvature_bracket(s) - np.array([[0, -0.5], [0.5, 0]])) < 1e-12
    for name in ("enneper", "catenoid-annulus", "flat-torus"):
        e = corpus.get(name)
        for z in e.sample_points:
            assert frob(MC.mean_curvature_bracket(MC.project_immersion(e.curve, e.model, z))) == 0


def test_maurer_agrees_with_bracket(entry):
    for z in interior_points(entry, 5):
        s = MC.project_immersion(entry.curve, entry.model, z)
        Hm = MC.mean_curvature_maurer(entry.curve, entry.model, z, 1e-4)
        assert frob(MC.mean_curvature_bracket(s) - Hm) < 1e-6


def test_maurer_constant_frame_curve():
    # exp(zA) has constant frames: only the bracket terms contribute
    e = corpus.get("horosphere")
    s = MC.project_immersion(e.curve, e.model, 0.2)
    fr = s.frames
    want = (liealg.bracket(fr.theta_x, fr.alpha_x) + liealg.bracket(fr.theta_y, fr.alpha_y)) / (2 * s.lambda2)
    assert frob(MC.mean_curvature_maurer(e.curve, e.model, 0.2) - want) < 1e-10


def test_model_and_frame_forms_agree(entry):
    for z in entry.sample_points:
        s = MC.project_immersion(entry.curve, entry.model, z)
        Ht = MC.mean_curvature_tangent(s)
        assert frob(Ht - MC.frame_to_tangent(s, MC.mean_curvature_bracket(s))) < 1e-8 * (1 + frob(Ht))


def test_frame_choice_independence(rng):
    e = corpus.get("hermpos-3")
    h0 = liealg.matrix_exp(e.group.random_h(rng))
    moved = HoloCurve.from_holomorphic(lambda z: e.curve(z) @ h0, lambda z: e.curve.jet(z).dfx @ h0,
                                       e.domain, e.group)
    z = 0.3 + 0.4j
    a, b = MC.project_immersion(e.curve, e.model, z), MC.project_immersion(moved, e.model, z)
    Ha, Hb = MC.mean_curvature_bracket(a), MC.mean_curvature_bracket(b)
    assert frob(Hb - liealg.Ad(np.linalg.inv(h0), Ha)) < 1e-10
    assert frob(MC.mean_curvature_tangent(a) - MC.mean_curvature_tangent(b)) < 1e-10


@pytest.mark.parametrize("name", ["horosphere", "hermpos-3", "desitter-null", "realstruct-2"])
def test_conformal_coordinate_independence(name):
    e = corpus.get(name)
    a = 0.8 + 0.6j
    f, fp = e.curve, lambda z: e.curve.jet(z).dfx
    sub = HoloCurve.from_holomorphic(lambda w: f(a * w), lambda w: a * fp(a * w),
                                     ChartDomain("rectangle", (-0.4, 0.4), (-0.4, 0.4)), e.group)
    z = 0.2 - 0.15j
    H1 = MC.mean_curvature_tangent(MC.project_immersion(e.curve, e.model, z))
    H2 = MC.mean_curvature_tangent(MC.project_immersion(sub, e.model, z / a))
    assert frob(H1 - H2) < 1e-8


def test_corollaries_horosphere_and_desitter():
    for name, gHH, K in (("horosphere", 1, -1), ("desitter-null", -1, 1)):
        rec = MC.check_corollaries(sample(name, 0.1 + 0.2j))
        assert abs(rec["gHH"] - gHH) < 1e-8 and abs(rec["K"] - K) < 1e-8
        assert rec["r1"] < 1e-8 and rec["r2"] < 1e-8 and rec["r3"] < 1e-8
        assert abs(rec["H_scalar"] - 1) < 1e-8


def test_corollaries_abelian():
    rec = MC.check_corollaries(sample("enneper", 0.3 + 0.2j))
    assert rec["gHH"] == 0 and rec["K"] == 0 and rec["H_scalar"] == 0
    assert rec["r1"] == 0 and rec["r2"] == 0


def test_corollaries_all_entries(entry):
    for z in interior_points(entry):
        rec = MC.check_corollaries(MC.project_immersion(entry.curve, entry.model, z))
        assert rec["r1"] < 1e-8 and rec["r2"] < 1e-6


def test_corpus_constants_match(entry):
    for z in entry.sample_points:
        rec = MC.check_corollaries(MC.project_immersion(entry.curve, entry.model, z))
        for key in ("gHH", "K", "H_scalar"):
            if key in entry.expected:
                assert abs(rec[key] - entry.expected[key].value) < entry.expected[key].tol, key


def test_orientation_flip():
    for name in ("horosphere", "desitter-null"):
        s = sample(name, 0.1j)
        assert abs(MC.scalar_mean_curvature(s, 1) - 1) < 1e-10
        assert abs(MC.scalar_mean_curvature(s, -1) + 1) < 1e-10


def test_gauss_normal_is_unit_and_orthogonal():
    s = sample("desitter-null", 0.2)
    G = s.model.group
    eta = MC.gauss_normal(s)
    assert abs(abs(liealg.form_eval(G, eta, eta)) - 1) < 1e-12
    for a in (s.frames.alpha_x, s.frames.alpha_y):
        assert abs(liealg.form_eval(G, eta, a)) < 1e-12


def test_gauss_normal_needs_dimension_three():
    with pytest.raises(WrongDimension):
        MC.gauss_normal(sample("hermpos-3", 0))


def test_gHH_matches_frame_value(entry):
    s = MC.project_immersion(entry.curve, entry.model, entry.sample_points[0])
    H = MC.mean_curvature_bracket(s)
    Ht = MC.mean_curvature_tangent(s)
    a = liealg.form_eval(entry.group, H, H, check=False)
    assert abs(a - metric_eval(entry.model, s.p, Ht, Ht)) < 1e-9 * (1 + abs(a))
