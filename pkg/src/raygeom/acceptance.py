"""The acceptance catalogue: twelve numerical criteria with fixed tolerances.

Every criterion returns a list of :class:`Check` rows and passes only when
all of its rows pass.  Phases are compared modulo 2 pi.  Library
functions are reached through their modules so a test can patch them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bargmann as bg
from . import charts as ch
from . import curves as cv
from . import nullphase as nph
from . import riemann as rm
from . import symplectic as sy
from .state_space import random_state, wrap_phase


@dataclass(frozen=True)
class Check:
    name: str
    expected: float
    computed: float
    tol: float
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "expected": _num(self.expected),
                "computed": _num(self.computed), "tol": self.tol, "passed": self.passed}


def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, str):
        return x
    return float(x)


def within(name, expected, computed, tol, angle=False) -> Check:
    diff = wrap_phase(computed - expected) if angle else computed - expected
    return Check(name, float(expected), float(computed), tol, bool(abs(diff) < tol))


def below(name, computed, tol) -> Check:
    return Check(name, 0.0, float(computed), tol, bool(computed < tol))


def flag(name, expected, computed) -> Check:
    return Check(name, expected, computed, 0.0, bool(expected == computed))


@dataclass
class Criterion:
    id: int
    title: str
    tags: tuple
    fn: object

    def run(self, seed: int = 42) -> "CriterionResult":
        checks = self.fn(np.random.default_rng(seed + self.id))
        return CriterionResult(self.id, self.title, self.tags, checks)


@dataclass
class CriterionResult:
    id: int
    title: str
    tags: tuple
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"id": self.id, "title": self.title, "tags": list(self.tags),
                "passed": self.passed, "checks": [c.to_json() for c in self.checks]}


REGISTRY: list[Criterion] = []


def criterion(id, title, *tags):
    def deco(fn):
        REGISTRY.append(Criterion(id, title, tags, fn))
        return fn
    return deco


# ---------------------------------------------------------------- helpers

def random_pair(rng, dim, min_overlap=0.05):
    while True:
        a, b = random_state(dim, rng), random_state(dim, rng)
        if abs(np.vdot(a.amplitudes, b.amplitudes)) > min_overlap:
            return a.amplitudes, b.amplitudes


def bridge_curve(a, b, w, nodes=401):
    """Smooth curve of normalised (1-s) a + s b + s(1-s) w with exact tangents."""
    a, b, w = (np.asarray(x, dtype=complex) for x in (a, b, w))
    s = np.linspace(0.0, 1.0, nodes)[:, None]
    v = (1 - s) * a + s * b + s * (1 - s) * w
    vd = b - a + (1 - 2 * s) * w
    nv = np.linalg.norm(v, axis=1, keepdims=True)
    re = np.real(np.sum(v.conj() * vd, axis=1, keepdims=True))
    return cv.SampledCurve(s[:, 0], v / nv, vd / nv - v * re / nv ** 3)


def unit_perp(rng, w):
    x = rng.normal(size=3)
    x -= (x @ w) * w
    return x / np.linalg.norm(x)


def great_circle_with_k(rng, k):
    """Orthonormal a, b with (a x b)_3 = k."""
    phi = rng.uniform(0, 2 * np.pi)
    r = math.sqrt(1 - k * k)
    w = np.array([r * math.cos(phi), r * math.sin(phi), k])
    a = unit_perp(rng, w)
    return a, np.cross(w, a)


def random_sphere_point(rng, margin=0.2):
    th = rng.uniform(margin, np.pi - margin)
    ph = rng.uniform(0, 2 * np.pi)
    return np.array([th, ph])


def pair_phase_error(curve, model, stride=10):
    idx = np.arange(0, curve.n_nodes, stride)
    m = curve.overlap_matrix(idx)
    s = curve.params[idx]
    want = model(s[:, None], s[None, :])
    return float(np.max(np.abs(wrap_phase(np.angle(m) - want))))


def coherent_xi(z):
    return [math.sqrt(2) * z.real, math.sqrt(2) * z.imag]


# ---------------------------------------------------------------- criteria

@criterion(1, "free geodesics are null phase", "free", "nullphase")
def _c1(rng):
    worst_full = worst_win = 0.0
    for _ in range(100):
        a, b = random_pair(rng, 4)
        c = nph.free_geodesic(a, b, 1001)
        worst_full = max(worst_full, abs(cv.geometric_phase(c)))
        for _ in range(20):
            i0, i1 = sorted(rng.choice(c.n_nodes, size=2, replace=False))
            worst_win = max(worst_win, abs(cv.geometric_phase(c.window(i0, i1))))
    return [below("max |phi_g| full arcs", worst_full, 1e-8),
            below("max |phi_g| sub-windows", worst_win, 1e-8)]


@criterion(2, "polygon with free-geodesic sides: phi_g = -arg Delta_n", "free", "polygon",
           "bargmann")
def _c2(rng):
    out = []
    for n in (3, 4, 5):
        worst = 0.0
        for _ in range(4):
            verts = [random_state(4, rng) for _ in range(n)]
            res = bg.polygon_phase_check(verts, "free", nodes=2 ** 12, rule="trapezoid")
            worst = max(worst, abs(res.defect))
        out.append(below(f"n={n}: max |phi_g + arg Delta|", worst, 1e-6))
    return out


@criterion(3, "coherent triangle: phase fixed by the vertices", "coherent", "polygon")
def _c3(rng):
    chart = ch.CoherentChart(truncation=64)
    verts = [coherent_xi(z) for z in (0j, 1 + 0j, 1j)]
    null = bg.polygon_phase_check(verts, "null", chart=chart, nodes=512)
    free = bg.polygon_phase_check(verts, "free", chart=chart, nodes=512)
    return [within("phi_g straight sides", -1.0, null.phi_g, 1e-6, angle=True),
            within("-arg Delta_3", -1.0, null.minus_arg_delta, 1e-6, angle=True),
            within("phi_g free sides (Fock 64) vs straight", null.phi_g, free.phi_g, 1e-5,
                   angle=True)]


@criterion(4, "coherent chart: flat metric, straight geodesics, separable lines",
           "coherent", "riemann", "nullphase")
def _c4(rng):
    chart = ch.CoherentChart(truncation=64)
    pts = rng.uniform(-1.2, 1.2, size=(20, 2))
    g_an = max(np.max(np.abs(rm.induced_metric(chart, x).g - 0.5 * np.eye(2))) for x in pts)
    g_gram = float(np.max(np.abs(chart.metric_from_gram(pts) - 0.5 * np.eye(2))))
    g_vec = max(np.max(np.abs(rm.induced_metric(chart, x, "vector").g - 0.5 * np.eye(2)))
                for x in pts[:5])
    dev = 0.0
    for _ in range(5):
        x0, v0 = rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)
        sol = rm.geodesic_shoot(chart, x0, v0, 2.0, 1000)
        dev = max(dev, float(np.max(np.abs(sol.xi - (x0 + np.outer(sol.s, v0))))))
    z0 = complex(*rng.uniform(-1, 1, 2))
    z1 = complex(*rng.uniform(-1, 1, 2))
    p0, p1 = coherent_xi(z0), coherent_xi(z0 + z1)
    c = ch.chart_curve(chart, ch.line(p0, p1), 1001)
    sep = nph.separability_test(c)
    slope = (z0.conjugate() * z1).imag
    slope_err = pair_phase_error(c, lambda s, t: (t - s) * slope)
    return [below("analytic metric - delta/2", g_an, 1e-6),
            below("projected-Gram metric - delta/2", g_gram, 1e-6),
            below("truncated-vector metric - delta/2", g_vec, 1e-4),
            below("geodesic deviation from straight line", dev, 1e-8),
            below("line mixed partial", sep.mixed_partial_max, 1e-7),
            below("arg overlap - (s'-s) Im z0* z1", slope_err, 1e-8)]


def gaussian_metric_by_quadrature(xi):
    """Re(u_perp, u_perp) with every inner product done by numeric quadrature."""
    from scipy.integrate import quad
    a, b = xi
    psi = lambda q: (b / np.pi) ** 0.25 * np.exp(0.5j * (a + 1j * b) * q * q)
    u = [lambda q: 0.5j * q * q * psi(q),
         lambda q: 0.5 * (-q * q + 0.5 / b) * psi(q)]

    def ip(f, g):
        re = quad(lambda q: np.real(np.conj(f(q)) * g(q)), -np.inf, np.inf,
                  epsabs=1e-14, epsrel=1e-13)[0]
        im = quad(lambda q: np.imag(np.conj(f(q)) * g(q)), -np.inf, np.inf,
                  epsabs=1e-14, epsrel=1e-13)[0]
        return re + 1j * im

    c = [ip(psi, uk) for uk in u]
    g = np.empty((2, 2))
    for m in range(2):
        for n in range(2):
            g[m, n] = np.real(ip(u[m], u[n]) - np.conj(c[m]) * c[n])
    return g


@criterion(5, "Gaussian chart: Lobachevsky metric, geodesic families, null phase",
           "gaussian", "riemann", "nullphase", "polygon")
def _c5(rng):
    chart = ch.GaussianChart()
    out = []
    worst = 0.0
    for xi in ([0.0, 1.0], [0.7, 0.5], [-1.3, 2.0]):
        want = np.eye(2) / (8 * xi[1] ** 2)
        worst = max(worst, np.max(np.abs(gaussian_metric_by_quadrature(xi) - want)),
                    np.max(np.abs(rm.induced_metric(chart, xi).g - want)))
    out.append(below("metric vs 1/(8 xi2^2) (quadrature oracle)", worst, 1e-8))
    gworst = 0.0
    for x2 in (0.5, 1.0, 2.0):
        G = rm.christoffel(chart, [rng.uniform(-1, 1), x2])
        want = np.zeros((2, 2, 2))
        want[0, 0, 1] = want[0, 1, 0] = want[1, 1, 1] = -1 / x2
        want[1, 0, 0] = 1 / x2
        gworst = max(gworst, float(np.max(np.abs(G - want))))
    out.append(below("FD Christoffels vs -1/xi2 pattern", gworst, 1e-6))
    sol1 = rm.geodesic_shoot(chart, [0.3, 1.0], [0.0, 1.0], 2.0, 1000)
    _, r1 = rm.fit_vertical(sol1.xi)
    r1 = max(r1, float(np.max(np.abs(sol1.xi[:, 1] - np.exp(sol1.s)))))
    out.append(below("Type I fit residual", r1, 1e-6))
    r2 = 0.0
    for x0, v0 in (([0.0, 1.0], [1.0, 0.0]), ([0.4, 0.8], [0.5, 0.3])):
        sol2 = rm.geodesic_shoot(chart, x0, v0, 3.0, 1000)
        r2 = max(r2, rm.fit_semicircle(sol2.xi)[2])
    out.append(below("Type II fit residual", r2, 1e-6))
    c2 = ch.chart_curve(chart, ch.semicircle(0.3, 1.7, 0.2, 2.9), 1001)
    out.append(below("Type II arg overlap - (s-s')/4",
                     pair_phase_error(c2, lambda s, t: (s - t) / 4), 1e-8))
    c1 = ch.chart_curve(chart, ch.line([0.4, 0.3], [0.4, 3.0]), 1001)
    out.append(below("Type I |arg overlap|", pair_phase_error(c1, lambda s, t: 0 * s), 1e-10))
    verts = [[-0.8, 0.6], [0.9, 0.9], [0.1, 2.2]]
    tri = bg.polygon_phase_check(verts, "geodesic", chart=chart, nodes=1001)
    out.append(below("geodesic triangle |phi_g + arg Delta_3|", abs(tri.defect), 1e-5))
    return out


@criterion(6, "two-mode sphere: round metric, great circles vs latitude null curves",
           "sphere", "riemann", "nullphase")
def _c6(rng):
    chart = ch.TwoModeSphereChart(truncation=32)
    pts = np.array([random_sphere_point(rng) for _ in range(20)])
    want = np.zeros((20, 2, 2))
    want[:, 0, 0] = 1
    want[:, 1, 1] = np.sin(pts[:, 0]) ** 2
    g1 = float(np.max(np.abs(chart.metric_from_gram(pts) - want)))
    g2 = max(np.max(np.abs(rm.induced_metric(chart, x, "vector").g - w))
             for x, w in zip(pts[:5], want[:5]))
    out = [below("metric vs diag(1, sin^2)", g1, 1e-8),
           below("truncated-vector metric vs diag(1, sin^2)", g2, 1e-8)]
    err = 0.0
    verdicts = []
    ks = [1e-3, 1e-5, 1e-9, 0.0, 0.5, -0.3] + list(rng.uniform(-1, 1, 6))
    for k in ks:
        a, b = great_circle_with_k(rng, k)
        c = ch.chart_curve(chart, ch.great_circle(a, b, 0.0, 1.5), 1001)
        kk = np.cross(a, b)[2]
        err = max(err, pair_phase_error(c, lambda s, t: kk * np.sin(t - s)))
        rep = nph.separability_test(c)
        verdicts.append((rep.verdict == "fail") == (abs(kk) > 1e-6))
    out.append(below("great-circle arg overlap - (a x b)_3 sin(s'-s)", err, 1e-8))
    out.append(flag("separability fails iff |(a x b)_3| > 1e-6", True, all(verdicts)))
    lat_err, proj_err, lat_ok = 0.0, 0.0, True
    for _ in range(6):
        xa, xb = random_sphere_point(rng), random_sphere_point(rng)
        path = ch.null_phase_family(chart, xa, xb)
        c = ch.chart_curve(chart, path, 1001)
        m = np.cross(path.params["u"], path.params["v"])     # plane normal, horizontal
        d = float(m @ np.asarray(path.params["center"]))
        beta, gam = -m[0] / m[1], d / m[1]
        n1, n2 = c.points[:, 0], c.points[:, 1]
        proj_err = max(proj_err, float(np.max(np.abs(n2 - beta * n1 - gam))))
        idx = np.arange(0, c.n_nodes, 10)
        want = gam * (n1[idx][:, None] - n1[idx][None, :])
        got = np.angle(c.overlap_matrix(idx))
        lat_err = max(lat_err, float(np.max(np.abs(wrap_phase(got - want)))))
        lat_ok &= nph.check_null_phase(c).verdict == "pass"
    out.append(below("latitude projection off the line n2 = beta n1 + gamma", proj_err, 1e-10))
    out.append(below("latitude arg overlap - gamma (n1(s) - n1(s'))", lat_err, 1e-8))
    out.append(flag("latitude curves pass both tests", True, lat_ok))
    return out


@criterion(7, "fan decomposition of Delta_n", "bargmann")
def _c7(rng):
    worst = 0.0
    for _ in range(60):
        n = int(rng.integers(4, 9))
        v = [random_state(5, rng) for _ in range(n)]
        direct = bg.bargmann_invariant(v)
        dec = bg.decompose_into_triangles(v, anchor=int(rng.integers(n)))
        worst = max(worst, abs(dec.reconstructed - direct) / abs(direct))
    return [below("max relative reconstruction error", worst, 1e-10)]


def _chain(rng, states, dim, nodes=801):
    pieces = []
    for a, b in zip(states[:-1], states[1:]):
        w = 0.6 * (rng.normal(size=dim) + 1j * rng.normal(size=dim))
        b_lift = b * np.exp(1j * rng.uniform(0, 2 * np.pi))
        pieces.append(bridge_curve(a, b_lift, w, nodes))
    return pieces


@criterion(8, "additivity defects are Bargmann phases", "bargmann", "additivity")
def _c8(rng):
    w2 = w3 = wc = 0.0
    for _ in range(20):
        st = [random_state(3, rng).amplitudes for _ in range(3)]
        p = _chain(rng, st, 3)
        # junction states are the endpoints of the pieces themselves
        js = [p[0].states[0], p[0].states[-1], p[1].states[-1]]
        d = cv.phase_composition_defect(p[0], p[1], rule="simpson")
        w2 = max(w2, abs(wrap_phase(d + bg.bargmann_phase(js))))
        st = [random_state(3, rng).amplitudes for _ in range(4)]
        p = _chain(rng, st, 3)
        js = [p[0].states[0]] + [q.states[-1] for q in p]
        d = cv.chain_defect(p, rule="simpson")
        w3 = max(w3, abs(wrap_phase(d + bg.bargmann_phase(js))))
        a, b = random_state(3, rng).amplitudes, random_state(3, rng).amplitudes
        p = _chain(rng, [a, b, a], 3)
        loop = cv.concatenate(*p)
        d = wrap_phase(cv.geometric_phase(loop, "simpson")
                       - sum(cv.geometric_phase(q, "simpson") for q in p))
        wc = max(wc, abs(d))
    return [below("two-piece defect + B_3", w2, 1e-6),
            below("three-piece defect + B_4", w3, 1e-6),
            below("closed two-piece loop additivity", wc, 1e-8)]


def catalogue(rng):
    """(label, curve) pairs spanning the chart examples, null and not."""
    co, ga = ch.CoherentChart(), ch.GaussianChart()
    sp, rs = ch.TwoModeSphereChart(), ch.RealSphereChart(4)
    circle = ch.Path("circle", {"center": [0.0, 0.0], "u": [1.0, 0.0], "v": [0.0, 1.0],
                                "radius": 1.0}, 0.0, 2.0)
    a, b = great_circle_with_k(rng, 0.4)
    am, bm = great_circle_with_k(rng, 0.0)
    out = [
        ("coherent line", ch.chart_curve(co, ch.line([0.2, -0.4], [1.5, 0.9]), 501)),
        ("coherent circle", ch.chart_curve(co, circle, 501)),
        ("gaussian type I", ch.chart_curve(ga, ch.line([0.3, 0.5], [0.3, 2.5]), 501)),
        ("gaussian type II", ch.chart_curve(ga, ch.semicircle(-0.2, 1.3, 0.3, 2.6), 501)),
        ("gaussian horizontal", ch.chart_curve(ga, ch.line([-1.0, 1.0], [1.0, 1.0]), 501)),
        ("sphere great circle", ch.chart_curve(sp, ch.great_circle(a, b, 0, 1.4), 501)),
        ("sphere meridian", ch.chart_curve(sp, ch.great_circle(am, bm, 0, 1.4), 501)),
        ("sphere latitude theta=pi/3",
         ch.chart_curve(sp, ch.latitude(np.pi / 3, 0.0, 2.0), 501)),
        ("sphere null latitude", ch.chart_curve(
            sp, ch.null_phase_family(sp, [0.7, 0.3], [2.1, 2.0]), 501)),
        ("realsphere arc", ch.chart_curve(
            rs, ch.null_phase_family(rs, [0.3, 0.8, 1.0], [1.1, 0.4, 2.5]), 501)),
        ("free geodesic", nph.free_geodesic(*random_pair(rng, 3), 501)),
        ("bloch latitude theta=pi/3", bloch_latitude(np.pi / 3, 0.0, 2.0, 501)),
    ]
    return out


def bloch_latitude(theta, s0, s1, nodes):
    s = np.linspace(s0, s1, nodes)
    c, sn = math.cos(theta / 2), math.sin(theta / 2)
    st = np.stack([np.full_like(s, c) + 0j, np.exp(1j * s) * sn], axis=1)
    tan = np.stack([np.zeros_like(s) + 0j, 1j * np.exp(1j * s) * sn], axis=1)
    return cv.SampledCurve(s, st, tan)


def random_qubit_curves(rng, count):
    out = []
    for k in range(count):
        a, b = random_pair(rng, 2, 0.2)
        if k % 2:
            out.append(nph.free_geodesic(a, b, 201))
        else:
            w = rng.uniform(0.1, 1.0) * (rng.normal(size=2) + 1j * rng.normal(size=2))
            out.append(bridge_curve(a, b, w, 201))
    return out


@criterion(9, "separability and Bargmann reality agree", "nullphase")
def _c9(rng):
    agree_cat, agree_q = [], []
    for _, c in catalogue(rng):
        r = nph.check_null_phase(c)
        agree_cat.append(r.separable == r.real_nonnegative)
    for c in random_qubit_curves(rng, 200):
        r = nph.check_null_phase(c)
        agree_q.append(r.separable == r.real_nonnegative)
    return [within("catalogue agreement fraction", 1.0, np.mean(agree_cat), 1e-12),
            within("random qubit agreement fraction", 1.0, np.mean(agree_q), 1e-12)]


@criterion(10, "Darboux coordinates: area, one-form, metric spectrum",
           "symplectic", "bloch-latitude")
def _c10(rng):
    dc = sy.DarbouxChart([1.0, 0.0])
    r = 0.8
    t = np.linspace(0, 2 * np.pi, 1000)
    b, g = r * np.cos(t), r * np.sin(t)
    bd, gd = -r * np.sin(t), r * np.cos(t)
    loop = dc.curve(t, 0.0, b[:, None], g[:, None], 0.0, bd[:, None], gd[:, None])
    out = [within("Bloch loop phi_g vs symplectic area", sy.symplectic_area(b, g),
                  cv.geometric_phase(loop), 1e-4, angle=True)]
    lat = bloch_latitude(np.pi / 2, 0.0, 2 * np.pi, 1001)
    out.append(within("theta=pi/2 latitude loop phi_g", -np.pi, cv.geometric_phase(lat), 1e-6,
                      angle=True))
    worst = 0.0
    for _ in range(50):
        eta = rng.normal(size=6)
        eta *= rng.uniform(0.05, 1.9) ** 0.5 / np.linalg.norm(eta)
        q = eta @ eta
        ev = np.sort(np.linalg.eigvalsh(sy.local_metric_matrix(eta)))
        want = np.sort([1 / (1 - q / 2), 1 - q / 2, 1, 1, 1, 1])
        worst = max(worst, float(np.max(np.abs(ev - want))))
    out.append(below("g(eta) spectrum error", worst, 1e-10))
    dc3 = sy.DarbouxChart(random_state(3, rng))
    t = np.linspace(0, 2 * np.pi, 1001)
    al, ald = 0.7 * np.sin(2 * t), 1.4 * np.cos(2 * t)
    B = 0.4 * np.stack([np.cos(t), 0.5 * np.sin(2 * t)], 1)
    Bd = 0.4 * np.stack([-np.sin(t), np.cos(2 * t)], 1)
    G = 0.4 * np.stack([np.sin(t), 0.3 * np.cos(t)], 1)
    Gd = 0.4 * np.stack([np.cos(t), -0.3 * np.sin(t)], 1)
    c = dc3.curve(t, al, B, G, ald, Bd, Gd)
    out.append(within("loop integral of A vs dynamical phase",
                      cv.dynamical_phase(c), sy.line_integral_A(t, (al, B, G), (ald, Bd, Gd)),
                      1e-6))
    return out


def _random_coord_path(rng, xa, xb, closed=False, nodes=801):
    s = np.linspace(0, 1, nodes)
    m = len(xa)
    amp = rng.uniform(-0.3, 0.3, size=(3, m))
    bump = sum(np.outer(np.sin((j + 1) * np.pi * s), amp[j]) for j in range(3))
    dbump = sum(np.outer((j + 1) * np.pi * np.cos((j + 1) * np.pi * s), amp[j])
                for j in range(3))
    if closed:
        xi, xd = xa + bump, dbump
    else:
        xi = xa + np.outer(s, xb - xa) + bump
        xd = (xb - xa) + dbump
    return s, xi, xd


@criterion(11, "isotropic chart: phase depends on endpoints only", "realsphere", "isotropic")
def _c11(rng):
    chart = ch.RealSphereChart(4)
    dpair = dclosed = 0.0
    for _ in range(20):
        xa = rng.uniform(0.3, 2.8, 3)
        xb = rng.uniform(0.3, 2.8, 3)
        phases = []
        for _ in range(2):
            s, xi, xd = _random_coord_path(rng, xa, xb)
            phases.append(cv.geometric_phase(cv.ChartCurve.from_coordinates(chart, s, xi, xd)))
        dpair = max(dpair, abs(wrap_phase(phases[0] - phases[1])))
        s, xi, xd = _random_coord_path(rng, xa, xa, closed=True)
        dclosed = max(dclosed, abs(cv.geometric_phase(
            cv.ChartCurve.from_coordinates(chart, s, xi, xd))))
    return [below("shared endpoints |delta phi_g|", dpair, 1e-8),
            below("closed curves |phi_g|", dclosed, 1e-8)]


@criterion(12, "conserved speed along shot geodesics", "riemann", "conservation")
def _c12(rng):
    runs = [
        (ch.CoherentChart(), [0.2, -0.1], [1.0, 0.7], 3.0),
        (ch.GaussianChart(), [0.0, 1.0], [0.0, 1.0], 2.0),
        (ch.GaussianChart(), [0.0, 1.0], [1.0, 0.0], 3.0),
        (ch.GaussianChart(), [0.4, 0.8], [0.5, 0.3], 3.0),
        (ch.TwoModeSphereChart(), [1.0, 0.2], [0.3, 1.0], 3.0),
        (ch.RealSphereChart(4), [0.9, 1.2, 0.4], [0.3, -0.2, 0.5], 3.0),
    ]
    worst, orders = 0.0, []
    for chart, x0, v0, smax in runs:
        worst = max(worst, rm.geodesic_shoot(chart, x0, v0, smax, 1000).drift)
        d = [rm.geodesic_shoot(chart, x0, v0, smax, n).drift for n in (40, 80, 160)]
        if d[0] > 1e-11:
            orders.append(math.log2(d[0] / d[1]))
            orders.append(math.log2(d[1] / d[2]))
    return [below("max relative drift at 1000 steps", worst, 1e-8),
            within("observed order of drift reduction (min)", 4.0, min(orders), 0.6)]


def run_all(seed: int = 42, filter: str | None = None, jobs: int = 1):
    """Run the catalogue (optionally only criteria carrying ``filter`` as a tag)."""
    sel = [c for c in REGISTRY if filter is None or filter in c.tags
           or filter == str(c.id)]
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(jobs) as ex:
            return list(ex.map(lambda c: c.run(seed), sel))
    return [c.run(seed) for c in sel]
