"""Induced metric, Christoffel symbols and constrained geodesics on a chart.

The geodesic equation xi'' + Gamma xi' xi' = 0 is integrated with
fixed-step RK4; two-point problems are solved by single shooting with a
Broyden update of the terminal-point Jacobian.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError

EPS_CBRT = np.finfo(float).eps ** (1.0 / 3.0)
COND_MAX = 1e12


@dataclass(frozen=True)
class MetricSample:
    xi: np.ndarray
    g: np.ndarray
    gamma: np.ndarray | None = None

    def __post_init__(self):
        g = np.asarray(self.g, dtype=float)
        if np.max(np.abs(g - g.T)) > 1e-12 * max(1.0, np.max(np.abs(g))):
            raise ValueError("metric sample is not symmetric")
        ev = np.linalg.eigvalsh(g)
        if ev[0] <= 0:
            raise DomainError(f"metric is not positive definite (min eigenvalue {ev[0]:.3e})")

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.g)


def _perp_gram(psi, us):
    """Gram matrix of the tangents projected orthogonally to psi."""
    u = np.stack(us)
    u = u - np.outer(u @ psi.conj(), psi)
    return u.conj() @ u.T


def induced_metric(chart, xi, realization: str = "analytic") -> MetricSample:
    """g_{mu nu} = Re(u_perp_mu, u_perp_nu).

    ``analytic`` uses the chart's closed forms; ``vector`` its explicit
    realisation with exact tangents; ``fd`` central differences of
    ``state_at``.
    """
    xi = chart.check_domain(np.asarray(xi, dtype=float))
    n = chart.n_params
    if realization == "analytic":
        g = chart.metric(xi)
    elif realization == "vector":
        psi = chart.state_at(xi).amplitudes
        g = np.real(_perp_gram(psi, [chart.tangent_at(xi, k) for k in range(n)]))
    elif realization == "fd":
        psi = chart.state_at(xi).amplitudes
        h = 1e-5
        us = []
        for k in range(n):
            e = np.zeros(n)
            e[k] = h
            us.append((chart.state_at(xi + e).amplitudes
                       - chart.state_at(xi - e).amplitudes) / (2 * h))
        g = np.real(_perp_gram(psi, us))
    else:
        raise ValueError(f"unknown realization {realization!r}")
    g = 0.5 * (g + g.T)
    ev = np.linalg.eigvalsh(g)
    if ev[0] <= 1e-14 * max(1.0, ev[-1]):
        raise DomainError(f"induced metric is rank deficient (min eigenvalue {ev[0]:.3e})")
    return MetricSample(xi, g)


def christoffel(chart, xi, h=None, method: str = "fd") -> np.ndarray:
    """Gamma[mu, nu, lam], symmetric in the lower pair.

    ``fd`` differentiates the metric by central differences with step
    eps^(1/3) max(1, |xi|); ``analytic`` uses the chart's closed-form metric
    derivative; ``auto`` prefers the latter when the chart has one.
    """
    xi = np.asarray(xi, dtype=float)
    n = xi.size
    dg = None
    if method in ("analytic", "auto"):
        dg = chart.metric_derivative(xi)
        if dg is None and method == "analytic":
            raise ValueError(f"{chart.id} chart has no closed-form metric derivative")
    if dg is None:
        if h is None:
            h = EPS_CBRT * np.maximum(1.0, np.abs(xi))
        h = np.broadcast_to(np.asarray(h, dtype=float), (n,))
        pts = np.concatenate([xi + np.diag(h), xi - np.diag(h), xi[None]])
        gs = chart.metric(pts)
        dg = (gs[:n] - gs[n:2 * n]) / (2 * h)[:, None, None]   # dg[k, a, b] = d_k g_ab
        g = gs[-1]
    else:
        g = chart.metric(xi)
    ginv = np.linalg.inv(g)
    if np.abs(g).sum(0).max() * np.abs(ginv).sum(0).max() > COND_MAX:
        raise DomainError("metric is near singular; Christoffel symbols unreliable")
    # lowered: G[s, nu, lam] = 1/2 (d_nu g_{s lam} + d_lam g_{s nu} - d_s g_{nu lam})
    low = 0.5 * (np.transpose(dg, (1, 0, 2)) + np.transpose(dg, (1, 2, 0)) - dg)
    gam = np.einsum("ms,snl->mnl", ginv, low)
    return 0.5 * (gam + np.transpose(gam, (0, 2, 1)))


@dataclass
class GeodesicSolution:
    s: np.ndarray
    xi: np.ndarray
    xidot: np.ndarray
    conserved_speed: np.ndarray
    exited: bool = False
    info: dict = field(default_factory=dict)

    @property
    def length(self) -> float:
        """Length in the induced metric (trapezoid on sqrt of the conserved speed)."""
        return float(np.trapezoid(np.sqrt(np.clip(self.conserved_speed, 0, None)), self.s))

    @property
    def drift(self) -> float:
        v = self.conserved_speed
        return float(np.max(np.abs(v - v[0])) / abs(v[0])) if v[0] != 0 else 0.0

    def to_csv_rows(self):
        n = self.xi.shape[1]
        head = ["s"] + [f"xi{k + 1}" for k in range(n)] + [f"xidot{k + 1}" for k in range(n)]
        yield head + ["conserved_speed"]
        for s, x, v, c in zip(self.s, self.xi, self.xidot, self.conserved_speed):
            yield [f"{t:.17g}" for t in (s, *x, *v, c)]


def _accel(chart, x, v, method):
    gam = christoffel(chart, x, method=method)
    return -np.einsum("mnl,n,l->m", gam, v, v)


def geodesic_shoot(chart, xi0, xidot0, s_max: float, steps: int = 1000,
                   method: str = "auto") -> GeodesicSolution:
    """RK4 integration from an initial point and velocity.

    When a stage leaves the chart the solution is cut at the last good node
    and ``exited`` is set.  ``method`` selects the Christoffel evaluation.
    """
    if steps < 16:
        raise ValueError("use at least 16 steps")
    x = chart.check_domain(np.asarray(xi0, dtype=float)).copy()
    v = np.asarray(xidot0, dtype=float).copy()
    h = s_max / steps
    xs, vs = [x.copy()], [v.copy()]
    exited = False

    def f(x, v):
        if not chart.contains(x):
            raise DomainError("left the chart")
        return v, _accel(chart, x, v, method)

    for _ in range(steps):
        try:
            k1x, k1v = f(x, v)
            k2x, k2v = f(x + 0.5 * h * k1x, v + 0.5 * h * k1v)
            k3x, k3v = f(x + 0.5 * h * k2x, v + 0.5 * h * k2v)
            k4x, k4v = f(x + h * k3x, v + h * k3v)
        except DomainError:
            exited = True
            break
        x = x + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        v = v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        if not (np.all(np.isfinite(x)) and chart.contains(x)):
            exited = True
            break
        xs.append(x.copy())
        vs.append(v.copy())
    xs, vs = np.array(xs), np.array(vs)
    s = h * np.arange(len(xs))
    g = chart.metric(xs)
    speed = np.einsum("imn,im,in->i", g, vs, vs)
    return GeodesicSolution(s, xs, vs, speed, exited, {"method": method})


def geodesic_connect(chart, xi_a, xi_b, steps: int = 1000, tol: float = 1e-8,
                     max_iter: int = 64, method: str = "auto") -> GeodesicSolution:
    """Two-point geodesic on s in [0, 1] by damped Broyden shooting."""
    xa = chart.check_domain(np.asarray(xi_a, dtype=float))
    xb = chart.check_domain(np.asarray(xi_b, dtype=float))
    n = xa.size

    def shoot(v):
        sol = geodesic_shoot(chart, xa, v, 1.0, steps, method)
        if sol.exited:
            return sol, None
        return sol, sol.xi[-1] - xb

    v = xb - xa
    sol, r = shoot(v)
    if r is None:
        raise ConvergenceError("initial shot left the chart", residual=np.inf)
    # finite-difference start for the Jacobian of the terminal map
    J = np.empty((n, n))
    dv = 1e-6 * max(1.0, float(np.linalg.norm(v)))
    for k in range(n):
        e = np.zeros(n)
        e[k] = dv
        _, rk = shoot(v + e)
        if rk is None:
            _, rk = shoot(v - e)
            J[:, k] = (r - rk) / dv
        else:
            J[:, k] = (rk - r) / dv
    best = float(np.linalg.norm(r))
    for it in range(max_iter):
        if best < tol:
            sol.info.update(iterations=it, residual=best)
            return sol
        step = -np.linalg.solve(J, r)
        lam = 1.0
        while True:
            sol_new, r_new = shoot(v + lam * step)
            if r_new is not None and np.linalg.norm(r_new) < best:
                break
            lam *= 0.5
            if lam < 1e-6:
                raise ConvergenceError(f"line search stalled, residual {best:.3e}",
                                       residual=best)
        dvec = lam * step
        dr = r_new - r
        J = J + np.outer(dr - J @ dvec, dvec) / (dvec @ dvec)
        v, r, sol = v + dvec, r_new, sol_new
        best = float(np.linalg.norm(r))
    if best < tol:
        sol.info.update(iterations=max_iter, residual=best)
        return sol
    raise ConvergenceError(f"no convergence in {max_iter} iterations, residual {best:.3e}",
                           residual=best)


def transverse_speed(chart, sol: GeodesicSolution, realization: str = "analytic"):
    """||xidot^mu u_perp_mu|| at every node."""
    p = chart.embed(sol.xi)
    vel = chart.embed_velocity(sol.xi, sol.xidot)
    if realization == "analytic":
        return np.sqrt(np.clip(chart.native_speed2(p, vel), 0, None))
    psi = chart.native_vectors(p)
    u = chart.native_tangent_vectors(p, vel)
    c = np.einsum("ij,ij->i", psi.conj(), u)
    perp = u - c[:, None] * psi
    return np.linalg.norm(perp, axis=1)


def geodesic_residual(chart, sol: GeodesicSolution) -> float:
    """Max |xi'' + Gamma xi' xi'| with xi'' from differencing xidot."""
    acc = np.gradient(sol.xidot, sol.s, axis=0, edge_order=2)
    res = [a + np.einsum("mnl,n,l->m", christoffel(chart, x, method="auto"), v, v)
           for a, x, v in zip(acc, sol.xi, sol.xidot)]
    return float(np.max(np.abs(res)))


def fit_semicircle(xi):
    """Least-squares circle centred on the xi1 axis: returns (c, R, max residual)."""
    xi = np.asarray(xi, dtype=float)
    x, y = xi[:, 0], xi[:, 1]
    A = np.stack([2 * x, np.ones_like(x)], axis=1)
    (c, k), *_ = np.linalg.lstsq(A, x ** 2 + y ** 2, rcond=None)
    R = float(np.sqrt(k + c ** 2))
    res = float(np.max(np.abs(np.hypot(x - c, y) - R)))
    return float(c), R, res


def fit_vertical(xi):
    """Vertical line fit: returns (xi1, max residual)."""
    x = np.asarray(xi, dtype=float)[:, 0]
    a = float(np.mean(x))
    return a, float(np.max(np.abs(x - a)))
