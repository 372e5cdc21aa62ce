import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from raygeom import charts as ch
from raygeom.curves import ChartCurve
from raygeom.errors import DomainError, UnsupportedError

from conftest import seeds

CHARTS = {
    "coherent": (ch.CoherentChart(), [(-1.5, 1.5), (-1.5, 1.5)]),
    "gaussian": (ch.GaussianChart(), [(-1.5, 1.5), (0.4, 2.5)]),
    "sphere2mode": (ch.TwoModeSphereChart(), [(0.3, 2.8), (-3.0, 3.0)]),
    "realsphere": (ch.RealSphereChart(4), [(0.3, 2.8), (0.3, 2.8), (-3.0, 3.0)]),
    "subspace": (ch.subspace_chart([1, 0, 0], [0, 1j, 0]), [(0.3, 2.8), (-3.0, 3.0)]),
}


def _point(box, seed):
    r = np.random.default_rng(seed)
    return np.array([r.uniform(lo, hi) for lo, hi in box])


each_chart = pytest.mark.parametrize("name", sorted(CHARTS))


def test_registry_lookup():
    assert ch.get_chart("gaussian").id == "gaussian"
    assert ch.get_chart("realsphere", d=5).n_params == 4
    with pytest.raises(UnsupportedError):
        ch.get_chart("torus")


@each_chart
@given(seed=seeds)
def test_kernel_matches_vectors(name, seed):
    chart, box = CHARTS[name]
    x, y = _point(box, seed), _point(box, seed + 1)
    u, v = chart.state_at(x).amplitudes, chart.state_at(y).amplitudes
    k = chart.kernel(chart.embed(x), chart.embed(y))
    assert abs(k - np.vdot(u, v)) < 1e-10


@each_chart
@given(seed=seeds)
def test_tangents_match_finite_differences(name, seed):
    chart, box = CHARTS[name]
    x = _point(box, seed)
    h = 1e-6
    for mu in range(chart.n_params):
        e = np.zeros(chart.n_params)
        e[mu] = h
        fd = (chart.state_at(x + e).amplitudes - chart.state_at(x - e).amplitudes) / (2 * h)
        assert np.max(np.abs(chart.tangent_at(x, mu) - fd)) < 1e-7


@each_chart
@given(seed=seeds)
def test_connection_and_gram_match_vectors(name, seed):
    chart, box = CHARTS[name]
    x = _point(box, seed)
    r = np.random.default_rng(seed)
    xd = r.normal(size=chart.n_params)
    psi = chart.state_at(x).amplitudes
    u = sum(xd[k] * chart.tangent_at(x, k) for k in range(chart.n_params))
    conn = chart.connection(x, xd)
    assert abs(conn - np.vdot(psi, u)) < 1e-10
    assert abs(conn.real) < 1e-10
    us = [chart.tangent_at(x, k) for k in range(chart.n_params)]
    us = [w - np.vdot(psi, w) * psi for w in us]
    q = np.array([[np.vdot(a, b) for b in us] for a in us])
    assert np.max(np.abs(chart.qgt(x) - q)) < 1e-10
    # closed-form metric agrees with the generic Gram route
    assert np.max(np.abs(chart.metric(x) - chart.metric_from_gram(x))) < 1e-12


@each_chart
@given(seed=seeds)
def test_metric_derivative_matches_finite_differences(name, seed):
    chart, box = CHARTS[name]
    x = _point(box, seed)
    dg = chart.metric_derivative(x)
    if dg is None:
        return
    h = 1e-5
    for k in range(chart.n_params):
        e = np.zeros(chart.n_params)
        e[k] = h
        fd = (chart.metric(x + e) - chart.metric(x - e)) / (2 * h)
        assert np.max(np.abs(dg[k] - fd)) < 1e-7 * max(1.0, np.max(np.abs(fd)))


def test_closed_form_metrics():
    assert np.allclose(ch.CoherentChart().metric([0.3, -0.7]), 0.5 * np.eye(2))
    assert np.allclose(ch.GaussianChart().metric([0.2, 0.5]), np.eye(2) / 2.0)
    th = 0.9
    assert np.allclose(ch.TwoModeSphereChart().metric([th, 1.0]),
                       np.diag([1.0, np.sin(th) ** 2]))
    s1, s2 = np.sin(0.7), np.sin(1.3)
    assert np.allclose(ch.RealSphereChart(4).metric([0.7, 1.3, 2.0]),
                       np.diag([1.0, s1 ** 2, (s1 * s2) ** 2]))


def _gauss(xi, q):
    a, b = xi
    return (b / np.pi) ** 0.25 * np.exp(0.5j * (a + 1j * b) * q * q)


@pytest.mark.parametrize("x,y", [([0.0, 1.0], [0.0, 1.0]), ([0.3, 0.7], [-0.5, 1.9]),
                                 ([1.2, 0.5], [1.2, 0.9])])
def test_gaussian_overlap_by_quadrature(x, y):
    def part(f):
        return quad(lambda q: f(np.conj(_gauss(x, q)) * _gauss(y, q)), -np.inf, np.inf,
                    epsabs=1e-13, epsrel=1e-13)[0]
    want = part(np.real) + 1j * part(np.imag)
    assert abs(ch.GaussianChart().overlap(x, y) - want) < 1e-10


@pytest.mark.parametrize("xi", [[0.0, 1.0], [0.7, 0.4]])
def test_gaussian_moments_by_quadrature(xi):
    norm = quad(lambda q: abs(_gauss(xi, q)) ** 2, -np.inf, np.inf)[0]
    q2 = quad(lambda q: q * q * abs(_gauss(xi, q)) ** 2, -np.inf, np.inf)[0]
    assert norm == pytest.approx(1.0, abs=1e-12)
    assert q2 == pytest.approx(1 / (2 * xi[1]), abs=1e-12)
    # grid realisation reproduces the same moment
    g = ch.GaussianChart()
    v = g.state_at(xi).amplitudes
    assert np.sum(g.q ** 2 * abs(v) ** 2) == pytest.approx(q2, abs=1e-10)


def test_coherent_vector_statistics():
    c = ch.CoherentChart()
    z = (0.8 - 0.5j)
    v = c.state_at([np.sqrt(2) * z.real, np.sqrt(2) * z.imag]).amplitudes
    n = np.arange(v.size)
    assert np.sum(n * abs(v) ** 2) == pytest.approx(abs(z) ** 2, abs=1e-12)
    # annihilation operator eigenvector
    av = np.sqrt(n[1:]) * v[1:]
    assert np.max(np.abs(av - z * v[:-1])) < 1e-12


@given(seeds)
def test_sphere_overlap_phase_is_triple_component(seed):
    chart = ch.TwoModeSphereChart()
    box = CHARTS["sphere2mode"][1]
    x, y = _point(box, seed), _point(box, seed + 3)
    n, m = chart.embed(x), chart.embed(y)
    assert abs(np.angle(chart.overlap(x, y)) - np.cross(n, m)[2]) < 1e-12


def test_domain_errors():
    g = ch.GaussianChart()
    with pytest.raises(DomainError) as ei:
        g.check_domain([[0.0, 1.0], [0.0, -1.0]])
    assert ei.value.where == 1
    with pytest.raises(DomainError):
        ch.chart_curve(g, ch.line([0.0, 1.0], [0.0, -1.0]), 11)
    with pytest.raises(DomainError):
        ch.TwoModeSphereChart().metric([0.0, 1.0])
    with pytest.raises(UnsupportedError):
        ch.subspace_chart([1, 0], [0, 1]).overlap([1.0, 0.0], [1.0, 0.5])


def test_path_json_roundtrip():
    p = ch.semicircle(0.1, 1.3, 0.2, 2.0)
    q = ch.Path.from_json(p.to_json())
    assert q == p
    s, t, dtds = q.grid(11)
    assert s[0] == pytest.approx(0.2) and t[-1] == pytest.approx(2.0)


@pytest.mark.parametrize("name,xa,xb", [
    ("coherent", [0.1, 0.2], [1.0, -0.5]),
    ("gaussian", [-0.4, 0.6], [0.9, 1.4]),
    ("gaussian", [0.3, 0.6], [0.3, 1.4]),
    ("sphere2mode", [0.7, 0.3], [2.1, 2.0]),
    ("realsphere", [0.3, 0.8, 1.0], [1.1, 0.4, 2.5]),
])
def test_null_family_joins_endpoints(name, xa, xb):
    chart = ch.get_chart(name)
    c = ch.chart_curve(chart, ch.null_phase_family(chart, xa, xb), 101)
    assert isinstance(c, ChartCurve)
    for k, x in ((0, xa), (-1, xb)):
        ov = np.vdot(c.vectors([k % c.n_nodes])[0], chart.state_at(x).amplitudes)
        assert abs(ov) == pytest.approx(1.0, abs=1e-10)


def test_gaussian_semicircle_centre_formula():
    p = ch.null_phase_family(ch.GaussianChart(), [-0.4, 0.6], [0.9, 1.4])
    c, R = p.params["c"], p.params["R"]
    assert np.hypot(-0.4 - c, 0.6) == pytest.approx(R)
    assert np.hypot(0.9 - c, 1.4) == pytest.approx(R)
