"""Chart-based Riemannian mean curvature, used as independent ground truth.

Only ``metric_eval``-type evaluations and the normal chart of the model are used:
the metric is sampled in coordinates, Christoffel symbols come from finite
differences, and the mean curvature vector of a conformal surface is the
tension field divided by ``2 lambda2``.
"""
from __future__ import annotations

import numpy as np

from .errors import NotConformal, SingularMetric
from .homspace import HomogeneousModel, NormalChart, metric_matrix, normal_chart

CHART_STEP = 1e-3
SURFACE_STEP = 1e-2
CONFORMAL_TOL = 1e-4


class ChartMetricField:
    """Metric components ``g_ij(c)`` of a normal chart, by finite differences of the chart."""

    def __init__(self, model: HomogeneousModel, p0, step: float = CHART_STEP):
        self.model = model
        self.chart: NormalChart = normal_chart(model, p0)
        self.dim = self.chart.dim
        self.step = step
        self._cache: dict = {}

    def frame(self, c):
        """Coordinate vector fields ``d/dc_i`` at ``c`` as model tangents, and the point."""
        c = np.asarray(c, dtype=float)
        m, h = self.model, self.step
        p = self.chart(c)
        out = []
        for i in range(self.dim):
            e = np.zeros(self.dim)
            e[i] = h
            dp = m.point_difference(self.chart(c + e), self.chart(c - e)) / (2 * h)
            out.append(m.tangent_from_point_derivative(p, dp))
        return p, out

    def metric(self, c) -> np.ndarray:
        key = tuple(np.round(np.asarray(c, dtype=float), 14))
        if key not in self._cache:
            p, fr = self.frame(c)
            self._cache[key] = metric_matrix(self.model, p, fr)
        return self._cache[key]

    def coords(self, p):
        return self.chart.inverse(p)


def christoffels(field: ChartMetricField, c, h: float = CHART_STEP) -> np.ndarray:
    """``Gamma[k, i, j] = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)``."""
    c = np.asarray(c, dtype=float)
    k = field.dim
    g = field.metric(c)
    if abs(np.linalg.det(g)) < 1e-14 * max(1.0, np.abs(g).max()) ** k:
        raise SingularMetric("chart metric is singular")
    dg = np.empty((k, k, k))          # dg[l] = d_l g
    for l in range(k):
        e = np.zeros(k)
        e[l] = h
        dg[l] = (field.metric(c + e) - field.metric(c - e)) / (2 * h)
    # T[i, j, l] = d_i g_jl + d_j g_il - d_l g_ij
    T = dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0)
    return 0.5 * np.einsum("kl,ijl->kij", np.linalg.inv(g), T)


def tension_mean_curvature(phi, field: ChartMetricField, spacing: float, conformal_tol: float | None = None):
    """Mean curvature at the interior nodes of a chart-coordinate grid ``phi[iy, ix, k]``.

    Returns ``(H, lambda2)`` with ``H[iy, ix, k]`` over interior nodes.  The
    conformality guard is relative to lambda2 and by default allows for the
    O(spacing^2) truncation of the central differences.
    """
    if conformal_tol is None:
        conformal_tol = CONFORMAL_TOL + 10 * spacing ** 2
    phi = np.asarray(phi, dtype=float)
    ny, nx, k = phi.shape
    if ny < 3 or nx < 3:
        raise ValueError("need at least a 3x3 grid")
    H = np.zeros((ny - 2, nx - 2, k))
    L2 = np.zeros((ny - 2, nx - 2))
    s = spacing
    for iy in range(1, ny - 1):
        for ix in range(1, nx - 1):
            c = phi[iy, ix]
            px = (phi[iy, ix + 1] - phi[iy, ix - 1]) / (2 * s)
            py = (phi[iy + 1, ix] - phi[iy - 1, ix]) / (2 * s)
            lap = (phi[iy, ix + 1] + phi[iy, ix - 1] + phi[iy + 1, ix] + phi[iy - 1, ix] - 4 * c) / s ** 2
            g = field.metric(c)
            gxx, gyy, gxy = px @ g @ px, py @ g @ py, px @ g @ py
            lam2 = 0.5 * (gxx + gyy)
            if lam2 <= 0 or abs(gxx - gyy) + abs(gxy) > conformal_tol * max(lam2, 1e-300):
                raise NotConformal(f"conformality residual {abs(gxx - gyy) + abs(gxy):.3e} with lambda2 = {lam2:.3e}")
            Gam = christoffels(field, c, field.step)
            tau = lap + np.einsum("kij,i,j->k", Gam, px, px) + np.einsum("kij,i,j->k", Gam, py, py)
            H[iy - 1, ix - 1] = tau / (2 * lam2)
            L2[iy - 1, ix - 1] = lam2
    return H, L2


def surface_stencil(phi_map, field: ChartMetricField, z, spacing: float = SURFACE_STEP):
    """3x3 grid of chart coordinates of ``phi_map`` (z -> model point) around ``z``."""
    off = np.array([-1, 0, 1]) * spacing
    return np.array([[field.coords(phi_map(complex(z) + dx + 1j * dy)) for dx in off] for dy in off])


def oracle_mean_curvature(phi_map, field: ChartMetricField, z, spacing: float = SURFACE_STEP):
    """Chart components of the mean curvature vector at ``z`` and the conformal factor."""
    H, L2 = tension_mean_curvature(surface_stencil(phi_map, field, z, spacing), field, spacing)
    return H[0, 0], L2[0, 0]


def tangent_to_chart(field: ChartMetricField, c, chi) -> np.ndarray:
    """Chart components of a model tangent ``chi`` at chart point ``c`` (least squares on the frame)."""
    _, fr = field.frame(c)
    flat = lambda t: np.concatenate([np.real(t).ravel(), np.imag(t).ravel()])
    A = np.array([flat(t) for t in fr]).T
    sol, *_ = np.linalg.lstsq(A, flat(chi), rcond=None)
    return sol


def chart_norm(field: ChartMetricField, c, v) -> float:
    return float(np.sqrt(abs(v @ field.metric(c) @ v)))
