"""Parametric families of states and paths through them.

A chart maps coordinates xi to a unit vector psi(xi; 0).  Internally every
chart works with a *native* point (the coordinates themselves for the
planar charts, a unit vector n for the sphere charts) because the closed
forms are simplest there.  Two layers are exposed:

* native: ``kernel``, ``native_connection``, ``native_perp_gram``,
  ``native_vectors``, ``native_tangent_vectors`` -- used by
  :class:`raygeom.curves.ChartCurve`;
* coordinate: ``state_at``, ``tangent_at``, ``overlap``, ``qgt``,
  ``metric`` -- used by the Riemannian and symplectic code.

Each family also has an explicit realisation (truncated Fock space, a
position grid, or plain real vectors) that is only used to cross-check
the closed forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curves import ChartCurve
from .errors import DomainError, UndefinedPhaseError, UnsupportedError
from .state_space import ORTHO_THRESHOLD, StateVector, as_array, wrap_phase

POLE_TOL = 1e-8


class Chart:
    """Base class.  Subclasses fill in the native layer."""

    id = "chart"
    n_params = 0
    has_analytic_overlap = True

    # coordinate <-> native
    def embed(self, xi):
        return np.asarray(xi, dtype=float)

    def embed_velocity(self, xi, xidot):
        return np.asarray(xidot, dtype=float)

    def contains(self, xi) -> bool:
        return bool(np.all(np.isfinite(xi)))

    def check_domain(self, xi):
        xi = np.asarray(xi, dtype=float)
        if xi.shape[-1] != self.n_params:
            raise DomainError(f"{self.id} chart takes {self.n_params} coordinates")
        pts = xi.reshape(-1, self.n_params)
        for k, p in enumerate(pts):
            if not self.contains(p):
                raise DomainError(f"point {p.tolist()} is outside the {self.id} chart",
                                  where=k)
        return xi

    # native layer
    def kernel(self, p, q):
        raise NotImplementedError

    def kernel_matrix(self, p, q):
        p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
        return self.kernel(p[:, None, :], q[None, :, :])

    def native_connection(self, p, v):
        raise NotImplementedError

    def native_perp_gram(self, p, v, w):
        raise NotImplementedError

    def native_speed2(self, p, v):
        return np.real(self.native_perp_gram(p, v, v))

    def native_vectors(self, p):
        raise NotImplementedError

    def native_tangent_vectors(self, p, v):
        raise NotImplementedError

    # coordinate layer
    def state_at(self, xi) -> StateVector:
        xi = self.check_domain(xi)
        return StateVector(self.native_vectors(self.embed(xi)[None])[0])

    def tangent_at(self, xi, mu: int) -> np.ndarray:
        """u_mu = d psi / d xi^mu in the explicit realisation."""
        xi = self.check_domain(xi)
        e = np.zeros(self.n_params)
        e[mu] = 1.0
        p = self.embed(xi)[None]
        v = self.embed_velocity(xi, e)[None]
        return self.native_tangent_vectors(p, v)[0]

    def overlap(self, xi, xi2) -> complex:
        if not self.has_analytic_overlap:
            raise UnsupportedError(f"{self.id} chart has no closed-form overlap")
        return complex(self.kernel(self.embed(xi), self.embed(xi2)))

    def connection(self, xi, xidot):
        """(psi, dpsi/ds) for coordinate velocity ``xidot``; purely imaginary."""
        return self.native_connection(self.embed(xi), self.embed_velocity(xi, xidot))

    def _basis_velocities(self, xi):
        eye = np.eye(self.n_params)
        return [self.embed_velocity(xi, np.broadcast_to(e, xi.shape)) for e in eye]

    def qgt(self, xi) -> np.ndarray:
        """Q_{mu nu} = (u_perp_mu, u_perp_nu), vectorised over leading axes."""
        xi = np.asarray(xi, dtype=float)
        p = self.embed(xi)
        vs = self._basis_velocities(xi)
        n = self.n_params
        q = np.empty(xi.shape[:-1] + (n, n), dtype=complex)
        for a in range(n):
            for b in range(n):
                q[..., a, b] = self.native_perp_gram(p, vs[a], vs[b])
        return q

    def metric(self, xi) -> np.ndarray:
        return self.metric_from_gram(xi)

    def metric_from_gram(self, xi) -> np.ndarray:
        """Re(u_perp_mu, u_perp_nu) assembled from the native Gram form."""
        return np.real(self.qgt(xi))

    def two_form(self, xi) -> np.ndarray:
        return np.imag(self.qgt(xi))

    def metric_derivative(self, xi):
        """dg[k, a, b] = d_k g_ab in closed form, or None when unavailable."""
        return None

    def describe(self) -> dict:
        return {"id": self.id, "n_params": self.n_params}


class _CoherentFamily(Chart):
    """Normalised multi-mode coherent states |z> with z linear in the native point."""

    modes = 1
    truncation = 64

    def z_of(self, p):
        raise NotImplementedError

    def kernel(self, p, q):
        z, w = self.z_of(p), self.z_of(q)
        e = np.sum(z.conj() * w - 0.5 * (np.abs(z) ** 2 + np.abs(w) ** 2), axis=-1)
        return np.exp(e)

    def native_connection(self, p, v):
        z, zd = self.z_of(p), self.z_of(v)
        return 1j * np.sum(np.imag(z.conj() * zd), axis=-1)

    def native_perp_gram(self, p, v, w):
        return np.sum(self.z_of(v).conj() * self.z_of(w), axis=-1)

    def _mode_vectors(self, z, zd=None):
        n = np.arange(self.truncation)
        ratio = np.ones(z.shape + (self.truncation,), dtype=complex)
        ratio[..., 1:] = z[..., None] / np.sqrt(n[1:])
        b = np.cumprod(ratio, axis=-1)          # z^n / sqrt(n!)
        env = np.exp(-0.5 * np.abs(z) ** 2)[..., None]
        vec = env * b
        if zd is None:
            return vec
        tan = np.zeros_like(vec)
        tan[..., 1:] = np.sqrt(n[1:]) * zd[..., None] * b[..., :-1]
        tan = env * tan - np.real(z.conj() * zd)[..., None] * vec
        return vec, tan

    def native_vectors(self, p):
        z = self.z_of(np.asarray(p, dtype=float))
        vecs = self._mode_vectors(z)
        out = vecs[..., 0, :]
        for k in range(1, self.modes):
            out = (out[..., :, None] * vecs[..., k, None, :]).reshape(out.shape[:-1] + (-1,))
        return out

    def native_tangent_vectors(self, p, v):
        z = self.z_of(np.asarray(p, dtype=float))
        zd = self.z_of(np.asarray(v, dtype=float))
        vecs, tans = self._mode_vectors(z, zd)
        out, dout = vecs[..., 0, :], tans[..., 0, :]
        for k in range(1, self.modes):
            shape = out.shape[:-1] + (-1,)
            dout = (dout[..., :, None] * vecs[..., k, None, :]
                    + out[..., :, None] * tans[..., k, None, :]).reshape(shape)
            out = (out[..., :, None] * vecs[..., k, None, :]).reshape(shape)
        return dout


class CoherentChart(_CoherentFamily):
    """Single-mode coherent states, z = (xi1 + i xi2)/sqrt(2).

    Metric 1/2 delta, flat; straight lines are null-phase geodesics.
    """

    id = "coherent"
    n_params = 2

    def __init__(self, truncation: int = 64):
        self.truncation = int(truncation)

    def z_of(self, p):
        p = np.asarray(p, dtype=float)
        return ((p[..., 0] + 1j * p[..., 1]) / math.sqrt(2.0))[..., None]

    def metric(self, xi):
        xi = np.asarray(xi, dtype=float)
        return np.broadcast_to(0.5 * np.eye(2), xi.shape[:-1] + (2, 2)).copy()

    def metric_derivative(self, xi):
        return np.zeros((2, 2, 2))


class TwoModeSphereChart(_CoherentFamily):
    """Two-mode coherent states |cos th, e^{i ph} sin th>, an S^2 worth of rays.

    Native point is the unit vector n, with z = (n3, n1 + i n2).
    """

    id = "sphere2mode"
    n_params = 2
    modes = 2

    def __init__(self, truncation: int = 32):
        self.truncation = int(truncation)

    def z_of(self, p):
        p = np.asarray(p, dtype=float)
        return np.stack([p[..., 2] + 0j, p[..., 0] + 1j * p[..., 1]], axis=-1)

    def embed(self, xi):
        xi = np.asarray(xi, dtype=float)
        th, ph = xi[..., 0], xi[..., 1]
        return np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1)

    def embed_velocity(self, xi, xidot):
        xi, xd = np.asarray(xi, dtype=float), np.asarray(xidot, dtype=float)
        th, ph = xi[..., 0], xi[..., 1]
        td, pd = xd[..., 0], xd[..., 1]
        return np.stack([
            np.cos(th) * np.cos(ph) * td - np.sin(th) * np.sin(ph) * pd,
            np.cos(th) * np.sin(ph) * td + np.sin(th) * np.cos(ph) * pd,
            -np.sin(th) * td,
        ], axis=-1)

    def metric(self, xi):
        xi = np.asarray(xi, dtype=float)
        if np.any(np.abs(np.sin(xi[..., 0])) < POLE_TOL):
            raise DomainError("metric is degenerate at the poles (sin theta ~ 0)")
        g = np.zeros(xi.shape[:-1] + (2, 2))
        g[..., 0, 0] = 1.0
        g[..., 1, 1] = np.sin(xi[..., 0]) ** 2
        return g

    def metric_derivative(self, xi):
        th = float(xi[0])
        dg = np.zeros((2, 2, 2))
        dg[0, 1, 1] = 2.0 * math.sin(th) * math.cos(th)
        return dg

    @staticmethod
    def coords_of(n) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        th = np.arccos(np.clip(n[..., 2], -1.0, 1.0))
        ph = np.mod(np.arctan2(n[..., 1], n[..., 0]), 2 * np.pi)
        return np.stack([th, ph], axis=-1)


class GaussianChart(Chart):
    """Centred Gaussians psi(q) = (xi2/pi)^{1/4} exp(i/2 (xi1 + i xi2) q^2).

    The rays form a Lobachevsky half plane with metric delta / (8 xi2^2).
    The explicit realisation samples psi on a uniform q grid.
    """

    id = "gaussian"
    n_params = 2

    def __init__(self, half_width: float = 16.0, points: int = 4097):
        self.q = np.linspace(-half_width, half_width, points)
        self.dq = self.q[1] - self.q[0]

    def contains(self, xi) -> bool:
        return bool(np.all(np.isfinite(xi)) and xi[1] > 0)

    def kernel(self, p, q):
        p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
        w = (p[..., 1] + q[..., 1]) - 1j * (q[..., 0] - p[..., 0])
        return (4.0 * p[..., 1] * q[..., 1]) ** 0.25 / np.sqrt(w)

    def native_connection(self, p, v):
        return 1j * v[..., 0] / (4.0 * p[..., 1])

    def metric(self, xi):
        xi = np.asarray(xi, dtype=float)
        return np.eye(2) / (8.0 * xi[..., 1, None, None] ** 2)

    def metric_derivative(self, xi):
        dg = np.zeros((2, 2, 2))
        dg[1] = -np.eye(2) / (4.0 * float(xi[1]) ** 3)
        return dg

    def native_perp_gram(self, p, v, w):
        cv = 0.5 * (1j * v[..., 0] - v[..., 1])
        cw = 0.5 * (1j * w[..., 0] - w[..., 1])
        return cv.conj() * cw / (2.0 * p[..., 1] ** 2)

    def wavefunction(self, xi, q=None):
        q = self.q if q is None else q
        xi = np.asarray(xi, dtype=float)
        a, b = xi[..., 0, None], xi[..., 1, None]
        return (b / np.pi) ** 0.25 * np.exp(0.5j * (a + 1j * b) * q ** 2)

    def native_vectors(self, p):
        return self.wavefunction(p) * np.sqrt(self.dq)

    def native_tangent_vectors(self, p, v):
        p, v = np.asarray(p, dtype=float), np.asarray(v, dtype=float)
        q2 = self.q ** 2
        psi = self.native_vectors(p)
        fac = (0.5j * q2 * v[..., 0, None]
               + 0.5 * (-q2 + 0.5 / p[..., 1, None]) * v[..., 1, None])
        return fac * psi


class RealSphereChart(Chart):
    """Real unit vectors in R^d in hyperspherical angles.

    All amplitudes are real, so the pulled-back two-form vanishes.
    """

    id = "realsphere"

    def __init__(self, d: int = 4):
        if d < 3:
            raise ValueError("real sphere chart needs ambient dimension >= 3")
        self.d = int(d)
        self.n_params = self.d - 1

    def embed(self, xi):
        xi = np.asarray(xi, dtype=float)
        s, c = np.sin(xi), np.cos(xi)
        ones = np.ones(xi.shape[:-1] + (1,))
        pre = np.cumprod(np.concatenate([ones, s], axis=-1), axis=-1)
        return np.concatenate([pre[..., :-1] * c, pre[..., -1:]], axis=-1)

    def embed_velocity(self, xi, xidot):
        xi = np.asarray(xi, dtype=float)
        xd = np.broadcast_to(np.asarray(xidot, dtype=float), xi.shape)
        s, c = np.sin(xi), np.cos(xi)
        m = self.n_params
        pre = np.ones(xi.shape[:-1])
        dpre = np.zeros(xi.shape[:-1])
        out = []
        for k in range(m):
            out.append(dpre * c[..., k] - pre * s[..., k] * xd[..., k])
            dpre = dpre * s[..., k] + pre * c[..., k] * xd[..., k]
            pre = pre * s[..., k]
        out.append(dpre)
        return np.stack(out, axis=-1)

    def metric(self, xi):
        xi = np.asarray(xi, dtype=float)
        s2 = np.sin(xi[..., :-1]) ** 2
        ones = np.ones(xi.shape[:-1] + (1,))
        diag = np.cumprod(np.concatenate([ones, s2], axis=-1), axis=-1)
        return diag[..., :, None] * np.eye(self.n_params)

    def metric_derivative(self, xi):
        # g = diag(1, s1^2, s1^2 s2^2, ...), s_j = sin xi_j
        xi = np.asarray(xi, dtype=float)
        m = self.n_params
        s2 = np.sin(xi) ** 2
        ds2 = np.sin(2 * xi)
        dg = np.zeros((m, m, m))
        for k in range(m):
            for j in range(k):
                dg[j, k, k] = ds2[j] * np.prod(np.delete(s2[:k], j))
        return dg

    def kernel(self, p, q):
        return np.sum(np.asarray(p) * np.asarray(q), axis=-1) + 0j

    def native_connection(self, p, v):
        return np.zeros(np.shape(p)[:-1], dtype=complex)

    def native_perp_gram(self, p, v, w):
        pv = np.sum(p * v, axis=-1)
        pw = np.sum(p * w, axis=-1)
        return np.sum(v * w, axis=-1) - pv * pw + 0j

    def native_vectors(self, p):
        return np.asarray(p, dtype=float) + 0j

    def native_tangent_vectors(self, p, v):
        return np.asarray(v, dtype=float) + 0j


class FunctionChart(Chart):
    """Chart from a user function xi -> vector, with an optional Jacobian.

    Without a Jacobian the tangents are central differences.  Everything is
    computed from explicit vectors, so there is no closed-form overlap.
    """

    id = "function"
    has_analytic_overlap = False

    def __init__(self, fn, n_params: int, jac=None, domain=None, step: float = 1e-6):
        self.fn = fn
        self.jac = jac
        self.domain = domain
        self.n_params = int(n_params)
        self.step = step

    def contains(self, xi) -> bool:
        ok = bool(np.all(np.isfinite(xi)))
        return ok and (self.domain is None or bool(self.domain(xi)))

    def _vec(self, xi):
        v = as_array(self.fn(np.asarray(xi, dtype=float)))
        return v / np.linalg.norm(v)

    def native_vectors(self, p):
        p = np.asarray(p, dtype=float)
        flat = p.reshape(-1, self.n_params)
        out = np.array([self._vec(x) for x in flat])
        return out.reshape(p.shape[:-1] + (-1,))

    def _jacobian(self, xi):
        if self.jac is not None:
            return np.asarray(self.jac(xi), dtype=complex)
        cols = []
        for k in range(self.n_params):
            e = np.zeros(self.n_params)
            e[k] = self.step
            cols.append((self._vec(xi + e) - self._vec(xi - e)) / (2 * self.step))
        return np.stack(cols, axis=-1)

    def native_tangent_vectors(self, p, v):
        p, v = np.asarray(p, dtype=float), np.asarray(v, dtype=float)
        v = np.broadcast_to(v, p.shape)
        fp, fv = p.reshape(-1, self.n_params), v.reshape(-1, self.n_params)
        out = np.array([self._jacobian(x) @ u for x, u in zip(fp, fv)])
        return out.reshape(p.shape[:-1] + (-1,))

    def kernel(self, p, q):
        a, b = self.native_vectors(p), self.native_vectors(q)
        return np.sum(a.conj() * b, axis=-1)

    def native_connection(self, p, v):
        psi = self.native_vectors(p)
        return np.sum(psi.conj() * self.native_tangent_vectors(p, v), axis=-1)

    def native_perp_gram(self, p, v, w):
        psi = self.native_vectors(p)
        uv = self.native_tangent_vectors(p, v)
        uw = self.native_tangent_vectors(p, w)
        cv = np.sum(psi.conj() * uv, axis=-1)
        cw = np.sum(psi.conj() * uw, axis=-1)
        return np.sum(uv.conj() * uw, axis=-1) - cv.conj() * cw


def subspace_chart(v1, v2) -> FunctionChart:
    """Bloch-angle chart on the rays of span{v1, v2} (v1, v2 orthonormal)."""
    v1, v2 = as_array(v1), as_array(v2)

    def fn(x):
        return math.cos(x[0] / 2) * v1 + np.exp(1j * x[1]) * math.sin(x[0] / 2) * v2

    def jac(x):
        d0 = -0.5 * math.sin(x[0] / 2) * v1 + 0.5 * np.exp(1j * x[1]) * math.cos(x[0] / 2) * v2
        d1 = 1j * np.exp(1j * x[1]) * math.sin(x[0] / 2) * v2
        return np.stack([d0, d1], axis=-1)

    ch = FunctionChart(fn, 2, jac=jac, domain=lambda x: 0 < x[0] < np.pi)
    ch.id = "subspace"
    return ch


_CHARTS = {
    "coherent": CoherentChart,
    "gaussian": GaussianChart,
    "sphere2mode": TwoModeSphereChart,
    "realsphere": RealSphereChart,
}


def get_chart(name: str, **kw) -> Chart:
    try:
        return _CHARTS[name](**kw)
    except KeyError:
        raise UnsupportedError(
            f"unknown chart {name!r}; choose from {', '.join(_CHARTS)}") from None


def analytic_overlap_phase(chart: Chart, xi, xi2) -> float:
    ov = chart.overlap(xi, xi2)
    if abs(ov) <= ORTHO_THRESHOLD:
        raise UndefinedPhaseError("overlap too small for a phase")
    return wrap_phase(np.angle(ov))


# ---------------------------------------------------------------- paths

@dataclass(frozen=True)
class Path:
    """Path through a chart, evaluated in native points.

    ``kind`` is one of ``line`` (native straight segment), ``semicircle``
    (centre c on the xi1 axis, radius R, angle t), ``circle`` (centre, two
    orthonormal directions, radius, angle t; covers great and small circles
    on spheres), ``coords`` (straight in chart coordinates), or ``constant``.
    The curve parameter runs over [t0, t1] when t0 < t1; otherwise it runs
    over [0, t0 - t1] while t decreases.
    """

    kind: str
    params: dict = field(default_factory=dict)
    t0: float = 0.0
    t1: float = 1.0

    def to_json(self) -> dict:
        def conv(v):
            return np.asarray(v).tolist() if isinstance(v, (np.ndarray, list, tuple)) else v
        return {"kind": self.kind, "params": {k: conv(v) for k, v in self.params.items()},
                "t0": self.t0, "t1": self.t1}

    @classmethod
    def from_json(cls, obj) -> "Path":
        return cls(obj["kind"], dict(obj.get("params", {})),
                   float(obj.get("t0", 0.0)), float(obj.get("t1", 1.0)))

    def grid(self, nodes: int):
        """(s, t, dt/ds) on ``nodes`` points."""
        if nodes < 2:
            raise ValueError("need at least two nodes")
        if self.t1 == self.t0:
            s = np.linspace(0.0, 1.0, nodes)
            return s, np.full(nodes, self.t0), 0.0
        if self.t1 > self.t0:
            s = np.linspace(self.t0, self.t1, nodes)
            return s, s, 1.0
        s = np.linspace(0.0, self.t0 - self.t1, nodes)
        return s, self.t0 - s, -1.0

    def native(self, chart: Chart, t):
        """Native points and d/dt at parameter values ``t``."""
        t = np.asarray(t, dtype=float)
        pr = self.params
        if self.kind in ("line", "constant"):
            a = np.asarray(pr["start"], dtype=float)
            b = np.asarray(pr.get("end", a), dtype=float)
            pts = a + t[:, None] * (b - a)
            return pts, np.broadcast_to(b - a, pts.shape).copy()
        if self.kind == "semicircle":
            c, R = float(pr["c"]), float(pr["R"])
            pts = np.stack([c + R * np.cos(t), R * np.sin(t)], axis=-1)
            vel = np.stack([-R * np.sin(t), R * np.cos(t)], axis=-1)
            return pts, vel
        if self.kind == "circle":
            c0 = np.asarray(pr["center"], dtype=float)
            u, v = np.asarray(pr["u"], dtype=float), np.asarray(pr["v"], dtype=float)
            r = float(pr.get("radius", 1.0))
            ct, st = np.cos(t)[:, None], np.sin(t)[:, None]
            return c0 + r * (ct * u + st * v), r * (-st * u + ct * v)
        if self.kind == "coords":
            a = np.asarray(pr["start"], dtype=float)
            b = np.asarray(pr["end"], dtype=float)
            xi = a + t[:, None] * (b - a)
            xd = np.broadcast_to(b - a, xi.shape)
            return chart.embed(xi), chart.embed_velocity(xi, xd)
        raise UnsupportedError(f"unknown path kind {self.kind!r}")


def line(start, end) -> Path:
    return Path("line", {"start": list(map(float, start)), "end": list(map(float, end))})


def semicircle(c: float, R: float, t0: float, t1: float) -> Path:
    return Path("semicircle", {"c": float(c), "R": float(R)}, float(t0), float(t1))


def great_circle(a, b, t0: float = 0.0, t1: float = np.pi / 2) -> Path:
    """a cos t + b sin t for orthonormal a, b."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return Path("circle", {"center": np.zeros_like(a).tolist(), "u": a.tolist(),
                           "v": b.tolist(), "radius": 1.0}, float(t0), float(t1))


def coordinate_line(start, end) -> Path:
    return Path("coords", {"start": list(map(float, start)), "end": list(map(float, end))})


def latitude(theta: float, phi0: float = 0.0, phi1: float = 2 * np.pi) -> Path:
    """Circle of constant polar angle on a sphere chart (in coordinates)."""
    return coordinate_line([theta, phi0], [theta, phi1])


def chart_curve(chart: Chart, path: Path, nodes: int = 1001) -> ChartCurve:
    s, t, dtds = path.grid(nodes)
    pts, vel = path.native(chart, t)
    vel = vel * dtds
    if isinstance(chart, GaussianChart):
        bad = np.flatnonzero(pts[:, 1] <= 0)
        if bad.size:
            raise DomainError(f"path leaves the half plane at s = {s[bad[0]]:.6g}",
                              where=float(s[bad[0]]))
    return ChartCurve(chart, s, pts, vel)


def _unit(x):
    return x / np.linalg.norm(x)


def null_phase_family(chart: Chart, xa, xb, *, native: bool = False) -> Path:
    """Catalogued null-phase connector between two chart points.

    Endpoints are coordinates unless ``native`` is set.
    """
    pa = np.asarray(xa, dtype=float) if native else chart.embed(chart.check_domain(xa))
    pb = np.asarray(xb, dtype=float) if native else chart.embed(chart.check_domain(xb))
    if np.allclose(pa, pb, rtol=0, atol=1e-14):
        return Path("constant", {"start": pa.tolist()}, 0.0, 0.0)

    if isinstance(chart, CoherentChart):
        return line(pa, pb)

    if isinstance(chart, GaussianChart):
        (a1, a2), (b1, b2) = pa, pb
        if abs(b1 - a1) <= 1e-14 * max(1.0, abs(a1)):
            return line(pa, pb)
        c = ((b1 ** 2 + b2 ** 2) - (a1 ** 2 + a2 ** 2)) / (2.0 * (b1 - a1))
        R = math.hypot(a1 - c, a2)
        return semicircle(c, R, math.atan2(a2, a1 - c), math.atan2(b2, b1 - c))

    if isinstance(chart, TwoModeSphereChart):
        # plane through both points, perpendicular to the 1-2 plane
        diff = pb - pa
        m = np.array([-diff[1], diff[0], 0.0])
        if np.linalg.norm(m) < 1e-12:
            m = np.array([-pa[1], pa[0], 0.0])
            if np.linalg.norm(m) < 1e-12:
                m = np.array([1.0, 0.0, 0.0])
        m = _unit(m)
        d = float(m @ pa)
        c0 = d * m
        r = math.sqrt(max(1.0 - d * d, 0.0))
        if r < 1e-12:
            raise UndefinedPhaseError("degenerate latitude circle")
        u = _unit(pa - c0)
        v = np.cross(m, u)
        w = pb - c0
        tb = math.atan2(float(w @ v), float(w @ u))
        return Path("circle", {"center": c0.tolist(), "u": u.tolist(),
                               "v": v.tolist(), "radius": r}, 0.0, tb)

    if isinstance(chart, RealSphereChart):
        if pa @ pb < 0:
            pb = -pb   # same ray, positive overlap
        c = float(np.clip(pa @ pb, -1.0, 1.0))
        perp = pb - c * pa
        if np.linalg.norm(perp) < 1e-14:
            return Path("constant", {"start": pa.tolist()}, 0.0, 0.0)
        return great_circle(pa, _unit(perp), 0.0, math.acos(c))

    raise UnsupportedError(f"no catalogued null-phase connector for {chart.id}")
