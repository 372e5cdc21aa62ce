"""Small worked examples with closed-form answers."""
import numpy as np
import pytest

from raygeom import bargmann as bg
from raygeom import charts as ch
from raygeom import curves as cv
from raygeom import nullphase as nph
from raygeom import riemann as rm
from raygeom import state_space as ss
from raygeom import symplectic as sy
from raygeom.acceptance import bloch_latitude, coherent_xi
from raygeom.errors import UndefinedPhaseError
from raygeom.state_space import wrap_phase

R2 = np.sqrt(2)
PSI0 = np.array([0.6, 0.8j, 0.0])


def test_inner_products_and_projectors():
    assert ss.inner_product([1, 0], [0, 1]) == 0
    assert ss.inner_product([1, 0], [1 / R2, 1 / R2]) == pytest.approx(1 / R2)
    assert ss.inner_product(PSI0, 1j * PSI0) == pytest.approx(1j)
    assert np.allclose(ss.project_to_ray([1, 0]).projector, np.diag([1, 0]))
    assert np.allclose(ss.project_to_ray(np.array([1, 1]) / R2).projector, 0.5)
    assert np.allclose(ss.project_to_ray(np.exp(1j * np.pi / 3) * np.array([1, 0])).projector,
                       np.diag([1, 0]))


def test_relative_phases():
    assert ss.pancharatnam_phase(PSI0, np.exp(0.7j) * PSI0) == pytest.approx(0.7)
    assert ss.pancharatnam_phase([1, 0], np.array([1, 1j]) / R2) == pytest.approx(0.0)
    assert ss.in_phase(PSI0, PSI0)
    assert not ss.in_phase(PSI0, np.exp(0.1j) * PSI0, tol=1e-6)
    c = nph.free_geodesic([1, 0, 0], [0.3, 0.5j, 0.2], 501)
    i, j = np.searchsorted(c.params, [0.1, 0.4])
    assert ss.in_phase(c.states[i], c.states[j])


def _pure_phase(nodes=201):
    s = np.linspace(0, 0.5, nodes)
    return cv.SampledCurve(s, np.exp(1j * s)[:, None] * PSI0, 1j * np.exp(1j * s)[:, None] * PSI0)


def test_phase_functionals_on_simple_curves():
    const = cv.SampledCurve(np.linspace(0, 1, 5), np.tile(PSI0, (5, 1)))
    assert cv.total_phase(const) == 0 and cv.dynamical_phase(const) == 0
    assert cv.curve_length(const) == pytest.approx(0.0, abs=1e-15)
    c = _pure_phase()
    assert cv.total_phase(c) == pytest.approx(0.5)
    assert cv.dynamical_phase(c) == pytest.approx(0.5, abs=1e-14)
    assert cv.curve_length(c) == pytest.approx(0.0, abs=1e-14)
    real = nph.free_geodesic([1, 0, 0], [0.5, 0.5, 0.1], 101)
    assert cv.dynamical_phase(real) == 0
    # Bloch equator: total 0, dynamical pi, geometric -pi (= pi on the branch)
    lat = bloch_latitude(np.pi / 2, 0, 2 * np.pi, 1001)
    assert cv.total_phase(lat) == pytest.approx(0.0, abs=1e-12)
    assert cv.dynamical_phase(lat) == pytest.approx(np.pi, abs=1e-10)
    assert abs(wrap_phase(cv.geometric_phase(lat) + np.pi)) < 1e-10
    with pytest.raises(ValueError):
        cv.SampledCurve([0.0, 1.0], [[1, 0], [1, 0.1]]).derivative()


def test_free_geodesic_length_is_endpoint_distance():
    c = nph.free_geodesic([1, 0], np.array([1, 1]) / R2, 1001)
    assert cv.curve_length(c) == pytest.approx(np.pi / 4, abs=1e-12)


def test_horizontal_lift_examples():
    k = np.arange(8)
    c = cv.SampledCurve(k / 7, np.exp(1j * k / 10)[:, None] * PSI0)
    h = cv.horizontal_lift(c)
    assert np.allclose(h.states, PSI0)
    real = nph.free_geodesic([1, 0, 0], [0.5, 0.5, 0.1], 21)
    assert np.allclose(cv.horizontal_lift(real).states, real.states)
    # lift of a null-phase curve: all pairwise overlaps real positive
    g = ch.chart_curve(ch.GaussianChart(), ch.semicircle(0.2, 1.2, 0.3, 2.5), 401)
    m = cv.horizontal_lift(g).overlap_matrix(np.arange(0, 401, 40))
    assert np.max(np.abs(np.angle(m))) < 1e-5


def test_composition_examples():
    a = np.array([1, 0])
    b = np.array([1, 1]) / R2
    c = np.array([1, 1j]) / R2
    g1 = nph.free_geodesic(a, b, 401)
    back = g1.reversed()
    assert abs(cv.phase_composition_defect(g1, back)) < 1e-12
    g2 = nph.free_geodesic(g1.states[-1], c, 401)
    d = cv.phase_composition_defect(g1, g2)
    assert d == pytest.approx(-np.pi / 4, abs=1e-10)
    assert bg.bargmann_invariant([a, b, c]) == pytest.approx((1 + 1j) / 4)


def test_coherent_bargmann_examples():
    co = ch.CoherentChart()
    tri = [coherent_xi(z) for z in (0, 1, 1j)]
    assert bg.bargmann_phase(tri, co) == pytest.approx(1.0)
    sq = [coherent_xi(z) for z in (0, 1, 1 + 1j, 1j)]
    assert bg.bargmann_phase(sq, co) == pytest.approx(2.0)
    assert bg.bargmann_phase([[1, 0], [0.3, 0.4j]]) == 0


def test_decomposition_with_repeated_vertex():
    r = np.random.default_rng(2)
    p1, p2, p4 = (ss.random_state(3, r).amplitudes for _ in range(3))
    v = [p1, p2, p1, p4]
    d = bg.decompose_into_triangles(v)
    assert abs(d.reconstructed - bg.bargmann_invariant(v)) < 1e-14
    assert abs(d.triangles[0] - abs(np.vdot(p1, p2)) ** 2) < 1e-14


def test_qubit_polygon_with_free_sides():
    v = [np.array([1, 0]), np.array([1, 1]) / R2, np.array([1, 1j]) / R2]
    res = bg.polygon_phase_check(v, "free", nodes=512)
    assert res.phi_g == pytest.approx(-np.pi / 4, abs=1e-6)


def test_bargmann_reality_examples():
    g = ch.chart_curve(ch.GaussianChart(), ch.semicircle(0.0, 1.0, 0.3, 2.8), 40)
    assert nph.bargmann_reality_test(g).real_nonnegative
    # theta = pi/2 is the equator, a great circle: null phase
    assert nph.bargmann_reality_test(bloch_latitude(np.pi / 2, 0.0, 2.0, 40)).real_nonnegative
    lat = bloch_latitude(np.pi / 3, 0.0, 2.0, 40)
    rep = nph.bargmann_reality_test(lat)
    assert not rep.real_nonnegative and rep.bargmann_triple_max_imag > 1e-3
    assert len(rep.witness) == 3


def test_open_to_closed_examples():
    g = nph.free_geodesic([1, 0, 0], [0.3, 0.5j, 0.2], 401)
    _, po, pc = nph.open_to_closed_reduction(g)
    assert abs(pc) < 1e-8 and abs(po) < 1e-8
    quarter = bloch_latitude(np.pi / 2, 0.0, np.pi / 2, 2001)
    closed, po, pc = nph.open_to_closed_reduction(quarter, "free", 2001, "simpson")
    assert abs(wrap_phase(po - pc)) < 1e-6
    # the equator is itself a geodesic, so the closing arc retraces it
    assert abs(pc) < 1e-6
    off = bloch_latitude(np.pi / 3, 0.0, np.pi / 2, 2001)
    closed, po, pc = nph.open_to_closed_reduction(off, "free", 2001, "simpson")
    assert abs(wrap_phase(po - pc)) < 1e-6 and abs(pc) > 1e-2
    loop = bloch_latitude(1.0, 0.0, 2 * np.pi, 1001)
    closed, po, pc = nph.open_to_closed_reduction(loop)
    assert closed is loop and po == pc


def test_analytic_overlap_phases():
    assert ch.analytic_overlap_phase(ch.CoherentChart(), [0, 0], coherent_xi(1 + 1j)) == 0
    ph = ch.analytic_overlap_phase(ch.GaussianChart(), [0, 1], [1, 1])
    assert ph == pytest.approx(0.5 * np.arctan(0.5), abs=1e-14)
    sp = ch.TwoModeSphereChart()
    k = sp.kernel(np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0]))
    assert np.angle(k) == pytest.approx(0.0, abs=1e-15)


def test_chart_curve_examples():
    co = ch.chart_curve(ch.CoherentChart(), ch.line([0.1, 0.3], [1.2, -0.4]), 201)
    assert nph.separability_test(co).separable
    sp = ch.TwoModeSphereChart()
    path = ch.null_phase_family(sp, [0.7, 0.3], [2.1, 2.0])
    c = ch.chart_curve(sp, path, 201)
    n = c.points
    # the curve lies on a line n2 = beta n1 + gamma in the 1-2 plane
    beta, gamma = np.polyfit(n[:, 0], n[:, 1], 1)
    assert np.max(np.abs(n[:, 1] - beta * n[:, 0] - gamma)) < 1e-12
    idx = np.arange(0, 201, 25)
    m = np.angle(c.overlap_matrix(idx))
    want = gamma * (n[idx, 0][:, None] - n[idx, 0][None, :])
    assert np.max(np.abs(m - want)) < 1e-12


def test_null_family_examples():
    ga = ch.GaussianChart()
    p = ch.null_phase_family(ga, [-1, 1], [1, 1])
    assert p.kind == "semicircle"
    assert p.params["c"] == pytest.approx(0.0) and p.params["R"] == pytest.approx(R2)
    assert ch.null_phase_family(ga, [0, 1], [0, 3]).kind == "line"
    sp = ch.TwoModeSphereChart()
    p = ch.null_phase_family(sp, [0, 0, 1], [1, 0, 0], native=True)
    pts = ch.chart_curve(sp, p, 50).points
    assert np.max(np.abs(pts[:, 1])) < 1e-12
    assert ch.null_phase_family(ga, [0.5, 1], [0.5, 1]).kind == "constant"


def test_metric_and_christoffel_examples():
    assert np.allclose(rm.induced_metric(ch.GaussianChart(), [0, 2]).g, np.eye(2) / 32)
    assert np.allclose(rm.induced_metric(ch.TwoModeSphereChart(), [np.pi / 3, 0]).g,
                       np.diag([1, 0.75]))
    g = rm.christoffel(ch.TwoModeSphereChart(), [np.pi / 4, 0.0])
    assert g[0, 1, 1] == pytest.approx(-0.5, abs=1e-6)
    assert g[1, 0, 1] == pytest.approx(1.0, abs=1e-6)


def test_geodesic_examples():
    co = ch.CoherentChart()
    sol = rm.geodesic_shoot(co, [0, 0], [1, 1], 1.0, 100)
    assert np.max(np.abs(sol.xi[:, 0] - sol.s)) < 1e-12
    assert np.max(np.abs(sol.xi[:, 1] - sol.s)) < 1e-12
    b = 0.7
    sol = rm.geodesic_shoot(ch.GaussianChart(), [0, 1], [0, b], 1.5, 300)
    assert np.max(np.abs(sol.xi[:, 0])) == 0
    assert np.max(np.abs(sol.xi[:, 1] - np.exp(b * sol.s))) < 1e-9
    sol = rm.geodesic_shoot(ch.GaussianChart(), [0, 1], [0, 1.0], 1.0, 300)
    assert np.allclose(np.sqrt(sol.conserved_speed), np.sqrt(1 / 8), atol=1e-12)

    sol = rm.geodesic_connect(ch.GaussianChart(), [-1, 1], [1, 1], steps=400)
    c, R, res = rm.fit_semicircle(sol.xi)
    assert c == pytest.approx(0, abs=1e-7) and R == pytest.approx(R2, abs=1e-7)
    sol = rm.geodesic_connect(ch.TwoModeSphereChart(), [np.pi / 2, 0], [np.pi / 2, np.pi / 3],
                              steps=200)
    assert sol.length == pytest.approx(np.pi / 3, abs=1e-9)
    assert np.max(np.abs(sol.xi[:, 0] - np.pi / 2)) < 1e-9
    sol = rm.geodesic_connect(co, [0, 0], [3, 4], steps=100)
    assert sol.length == pytest.approx(5 / R2, abs=1e-10)


def test_darboux_coordinate_examples():
    dc = sy.DarbouxChart(PSI0)
    a, b, g = dc.to_coords(PSI0)
    assert a == pytest.approx(0) and np.allclose(b, 0) and np.allclose(g, 0)
    a, b, g = dc.to_coords(np.exp(0.3j) * PSI0)
    assert a == pytest.approx(0.3) and np.allclose(b, 0) and np.allclose(g, 0)
    e1 = dc.basis[:, 0]
    a, b, g = dc.to_coords((PSI0 + e1) / R2)
    assert a == pytest.approx(0) and np.allclose(b, [1, 0]) and np.allclose(g, 0, atol=1e-15)


def test_one_form_and_area_examples():
    assert sy.one_form_A((0, [0.0], [0.0]), (1.0, [0.0], [0.0])) == 1.0
    assert sy.one_form_A((0, [1.0], [0.0]), (0.0, [0.0], [1.0])) == -0.5
    t = np.linspace(0, 2 * np.pi, 4001)
    b, g = np.cos(t)[:, None], np.sin(t)[:, None]
    lineA = sy.line_integral_A(t, (0 * t, b, g), (0 * t, -g, b))
    assert lineA == pytest.approx(-np.pi, abs=1e-9)
    assert sy.symplectic_area(np.zeros(5), np.zeros(5)) == 0
    r = 0.7
    area = sy.symplectic_area(r * b[:, 0], r * g[:, 0])
    back = sy.symplectic_area(r * b[::-1, 0], r * g[::-1, 0])
    assert back == pytest.approx(-area)
    loop = sy.DarbouxChart([1, 0]).curve(t, 0.0, r * b, r * g, 0.0, -r * g, r * b)
    assert cv.geometric_phase(loop) == pytest.approx(area, abs=1e-4)


def test_two_form_examples():
    assert sy.pullback_two_form(ch.GaussianChart(), [0.3, 2.0])[0, 1] == pytest.approx(1 / 32)
    th = 0.8
    w = sy.pullback_two_form(ch.TwoModeSphereChart(), [th, 0.1])
    assert w[0, 1] == pytest.approx(np.cos(th) * np.sin(th))
    assert np.allclose(sy.pullback_two_form(ch.RealSphereChart(5), [0.4, 1, 2, 0.3]), 0)
    assert not sy.isotropy_report(ch.GaussianChart(), [[0, 1], [1, 2]])["isotropic"]
    assert not sy.isotropy_report(ch.TwoModeSphereChart(), [[0.5, 0], [1, 1]])["isotropic"]


def test_orthogonal_inputs_error():
    with pytest.raises(UndefinedPhaseError):
        ss.pancharatnam_phase([1, 0], [0, 1])
    with pytest.raises(UndefinedPhaseError):
        nph.free_geodesic([1, 0], np.exp(0.4j) * np.array([0, 1]))
