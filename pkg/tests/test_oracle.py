import numpy as np
import pytest

from nullcurve import corpus, liealg
from nullcurve import meancurv as MC
from nullcurve import oracle as O
from nullcurve.errors import NotConformal
from nullcurve.homspace import HomogeneousModel

H3 = HomogeneousModel("hermpos", liealg.sl_compact(2, -2.0))


def chart_grid(entry, field, center, n, spacing):
    phi = lambda z: entry.model.project(entry.curve(z))
    off = (np.arange(n) - (n - 1) / 2) * spacing
    return np.array([[field.coords(phi(center + dx + 1j * dy)) for dx in off] for dy in off])


def bracket_in_chart(entry, field, z):
    s = MC.project_immersion(entry.curve, entry.model, z)
    H = MC.frame_to_tangent(s, MC.mean_curvature_bracket(s))
    return O.tangent_to_chart(field, np.zeros(field.dim), H)


def test_flat_chart_has_no_christoffels():
    m = HomogeneousModel("euclidean", liealg.abelian(3))
    field = O.ChartMetricField(m, np.array([0.3, -0.1, 0.2]))
    assert np.allclose(field.metric(np.zeros(3)), np.eye(3), atol=1e-9)
    assert np.max(np.abs(O.christoffels(field, np.array([0.1, 0.2, -0.3])))) < 1e-9


def test_christoffel_symmetry_and_compatibility(rng):
    field = O.ChartMetricField(H3, H3.project(liealg.matrix_exp(H3.group.random_g(rng, 0.3))))
    c, h = 0.2 * rng.standard_normal(3), 1e-3
    Gam = O.christoffels(field, c)
    assert np.max(np.abs(Gam - Gam.transpose(0, 2, 1))) < 1e-10
    g = field.metric(c)
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        dg = (field.metric(c + e) - field.metric(c - e)) / (2 * h)
        res = dg - np.einsum("lj,lk->jk", Gam[:, i, :], g) - np.einsum("lk,jl->jk", Gam[:, i, :], g)
        assert np.max(np.abs(res)) < 1e-4


def test_normal_chart_metric_at_center(rng):
    # the chart is built from a g-orthonormal basis, so g(0) = diag(signs)
    for m in (H3, HomogeneousModel("realstruct", liealg.sl_split(2, 2.0))):
        field = O.ChartMetricField(m, m.base_point())
        assert np.allclose(field.metric(np.zeros(3)), np.diag(field.chart.signs), atol=1e-6)


def test_enneper_oracle_vanishes():
    e = corpus.get("enneper")
    field = O.ChartMetricField(e.model, e.model.project(e.curve(0)))
    phi = chart_grid(e, field, 0j, 22, 0.08)
    H, L2 = O.tension_mean_curvature(phi, field, 0.08)
    assert H.shape == (20, 20, 3)
    assert np.max(np.linalg.norm(H, axis=-1)) < 1e-6


def test_horosphere_oracle_norm():
    e = corpus.get("horosphere")
    for z in e.sample_points:
        phi = lambda w: e.model.project(e.curve(w))
        field = O.ChartMetricField(e.model, phi(z))
        Ho, lam2 = O.oracle_mean_curvature(phi, field, z)
        g0 = field.metric(np.zeros(3))
        assert abs(Ho @ g0 @ Ho - 1) < 1e-3
        assert abs(lam2 - 1) < 1e-3


def test_fattened_geodesic_is_rejected():
    field = O.ChartMetricField(H3, np.eye(2))
    s = 0.01
    off = np.arange(3) * s
    phi = np.array([[[x, 0.0, 0.0] for x in off] for _ in off])
    with pytest.raises(NotConformal):
        O.tension_mean_curvature(phi, field, s)


def test_grid_too_small():
    with pytest.raises(ValueError):
        O.tension_mean_curvature(np.zeros((2, 5, 3)), O.ChartMetricField(H3, np.eye(2)), 0.1)


def test_oracle_agrees_with_bracket(entry):
    phi = lambda w: entry.model.project(entry.curve(w))
    for z in entry.sample_points[:2]:
        field = O.ChartMetricField(entry.model, phi(z))
        Ho, _ = O.oracle_mean_curvature(phi, field, z)
        hb = bracket_in_chart(entry, field, z)
        assert np.linalg.norm(Ho - hb) / (1 + np.linalg.norm(hb)) < 1e-3


@pytest.mark.parametrize("name", ["horosphere", "hermpos-3", "desitter-null", "catenoid-annulus"])
def test_second_order_convergence(name):
    e = corpus.get(name)
    z = e.sample_points[1]
    phi = lambda w: e.model.project(e.curve(w))
    field = O.ChartMetricField(e.model, phi(z))
    hb = bracket_in_chart(e, field, z)
    d1, d2 = (np.linalg.norm(O.oracle_mean_curvature(phi, field, z, s)[0] - hb) for s in (0.02, 0.01))
    assert d1 / d2 >= 3


def test_tangent_to_chart_round_trip(rng):
    field = O.ChartMetricField(H3, np.eye(2))
    v = rng.standard_normal(3)
    _, fr = field.frame(np.zeros(3))
    chi = sum(a * t for a, t in zip(v, fr))
    assert np.allclose(O.tangent_to_chart(field, np.zeros(3), chi), v, atol=1e-10)
    assert abs(O.chart_norm(field, np.zeros(3), v) - np.linalg.norm(v)) < 1e-6
