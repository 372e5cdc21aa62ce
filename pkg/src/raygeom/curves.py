"""Discretised curves of unit vectors and their phases.

Three curve flavours share one duck-typed interface:

* :class:`SampledCurve` -- explicit amplitudes per node, with analytic
  tangents or finite-difference tangents.
* :class:`ChartCurve` -- nodes are points of a parametric family (see
  :mod:`raygeom.charts`); overlaps and connection terms come from the
  family's closed forms, so no truncation enters the phases.
* :class:`PiecewiseCurve` -- consecutive pieces joined at common rays.

The phase functionals follow the kinematic definitions: total phase is the
argument of the endpoint overlap, dynamical phase is the integral of
Im(psi, dpsi/ds), geometric phase is their difference.
"""
from __future__ import annotations

import csv
import json

import numpy as np
from scipy.integrate import simpson

from .errors import DimensionMismatchError, UndefinedPhaseError
from .state_space import ORTHO_THRESHOLD, StateVector, as_array, wrap_phase

JUNCTION_TOL = 1e-10


def _check_params(params):
    params = np.asarray(params, dtype=float).reshape(-1)
    if params.size < 2:
        raise ValueError("a curve needs at least two nodes")
    if np.any(np.diff(params) <= 0):
        raise ValueError("curve parameters must be strictly increasing")
    return params


def _check_consecutive(ov):
    small = np.flatnonzero(np.abs(ov) <= ORTHO_THRESHOLD)
    if small.size:
        k = int(small[0])
        raise UndefinedPhaseError(
            f"consecutive nodes {k} and {k + 1} are orthogonal", witness=(k, k + 1))


class SampledCurve:
    """Curve given by explicit unit vectors at an increasing parameter grid.

    ``tangents`` (same shape as ``states``) switches the curve to analytic
    tangent mode; otherwise derivatives are taken by second-order finite
    differences (central inside, one-sided at the ends).
    """

    def __init__(self, params, states, tangents=None, *, check=True):
        self.params = _check_params(params)
        states = np.array([as_array(s) for s in states], dtype=complex)
        if states.ndim != 2 or states.shape[0] != self.params.size:
            raise DimensionMismatchError("need one state per parameter value")
        if states.shape[1] < 2:
            raise ValueError("state dimension must be >= 2")
        norms = np.linalg.norm(states, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-10:
            states = states / norms[:, None]
        self.states = states
        if tangents is not None:
            tangents = np.asarray(tangents, dtype=complex)
            if tangents.shape != states.shape:
                raise DimensionMismatchError("tangents must match states in shape")
        self.tangents = tangents
        if check:
            _check_consecutive(self.consecutive_overlaps())

    @property
    def tangent_mode(self) -> str:
        return "finite-difference" if self.tangents is None else "analytic"

    @property
    def n_nodes(self) -> int:
        return self.params.size

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def state(self, k: int) -> StateVector:
        return StateVector(self.states[k])

    def vectors(self, idx=None) -> np.ndarray:
        return self.states if idx is None else self.states[idx]

    def overlap(self, j: int, k: int) -> complex:
        return complex(np.vdot(self.states[j], self.states[k]))

    def consecutive_overlaps(self) -> np.ndarray:
        s = self.states
        return np.einsum("ij,ij->i", s[:-1].conj(), s[1:])

    def overlap_matrix(self, idx=None) -> np.ndarray:
        s = self.vectors(idx)
        return s.conj() @ s.T

    def triple_products(self, i, j, k) -> np.ndarray:
        """Tr(rho_i rho_j rho_k) for index arrays ``i, j, k``."""
        s = self.states
        a, b, c = s[i], s[j], s[k]
        return (np.einsum("ij,ij->i", a.conj(), b)
                * np.einsum("ij,ij->i", b.conj(), c)
                * np.einsum("ij,ij->i", c.conj(), a))

    def derivative(self) -> np.ndarray:
        if self.tangents is not None:
            return self.tangents
        if self.n_nodes < 3:
            raise ValueError("finite-difference tangents need at least 3 nodes")
        return np.gradient(self.states, self.params, axis=0, edge_order=2)

    def connection(self) -> np.ndarray:
        """(psi, dpsi/ds) at every node."""
        return np.einsum("ij,ij->i", self.states.conj(), self.derivative())

    def transverse_speed2(self) -> np.ndarray:
        # norm of the projected tangent; avoids cancellation in |d|^2 - |conn|^2
        d = self.derivative()
        conn = np.einsum("ij,ij->i", self.states.conj(), d)
        perp = d - conn[:, None] * self.states
        return np.einsum("ij,ij->i", perp.conj(), perp).real

    def window(self, i0: int, i1: int) -> "SampledCurve":
        """Nodes ``i0..i1`` inclusive."""
        sl = slice(i0, i1 + 1)
        tan = None if self.tangents is None else self.tangents[sl]
        return SampledCurve(self.params[sl], self.states[sl], tan, check=False)

    def with_phase(self, alpha, alpha_dot=None) -> "SampledCurve":
        """Multiply node k by exp(i alpha_k).

        Analytic tangents survive only when ``alpha_dot`` is supplied.
        """
        alpha = np.broadcast_to(np.asarray(alpha, dtype=float), self.params.shape)
        f = np.exp(1j * alpha)[:, None]
        tan = None
        if self.tangents is not None and alpha_dot is not None:
            ad = np.broadcast_to(np.asarray(alpha_dot, dtype=float), self.params.shape)
            tan = f * (self.tangents + 1j * ad[:, None] * self.states)
        return SampledCurve(self.params, f * self.states, tan, check=False)

    def reversed(self) -> "SampledCurve":
        p = -self.params[::-1]
        tan = None if self.tangents is None else -self.tangents[::-1]
        return SampledCurve(p, self.states[::-1], tan, check=False)

    def to_json(self) -> dict:
        obj = {
            "params": self.params.tolist(),
            "states": [StateVector(s).to_json() for s in self.states],
        }
        if self.tangents is not None:
            obj["tangents"] = {"re": self.tangents.real.tolist(),
                               "im": self.tangents.imag.tolist()}
        return obj

    @classmethod
    def from_json(cls, obj) -> "SampledCurve":
        if isinstance(obj, str):
            obj = json.loads(obj)
        states = [StateVector.from_json(s).amplitudes for s in obj["states"]]
        tan = None
        if "tangents" in obj:
            t = obj["tangents"]
            tan = np.asarray(t["re"], dtype=float) + 1j * np.asarray(t["im"], dtype=float)
        return cls(obj["params"], states, tan)

    @classmethod
    def from_function(cls, fn, params, dfn=None) -> "SampledCurve":
        """Sample ``fn(s)`` (and optionally its derivative ``dfn(s)``)."""
        params = _check_params(params)
        states = np.array([as_array(fn(s)) for s in params])
        tan = None if dfn is None else np.array([as_array(dfn(s)) for s in params])
        return cls(params, states, tan)


class ChartCurve:
    """Curve inside a parametric family, evaluated through closed forms.

    ``points`` and ``velocities`` are in the chart's native embedding (see
    :class:`raygeom.charts.Chart`); ``alpha`` is the lift phase so node k is
    exp(i alpha_k) psi(points_k).
    """

    tangent_mode = "analytic"

    def __init__(self, chart, params, points, velocities, alpha=None,
                 alpha_dot=None, *, check=True):
        self.chart = chart
        self.params = _check_params(params)
        n = self.params.size
        self.points = np.asarray(points, dtype=float).reshape(n, -1)
        self.velocities = np.asarray(velocities, dtype=float).reshape(n, -1)
        self.alpha = np.zeros(n) if alpha is None else np.array(
            np.broadcast_to(alpha, (n,)), dtype=float)
        self.alpha_dot = np.zeros(n) if alpha_dot is None else np.array(
            np.broadcast_to(alpha_dot, (n,)), dtype=float)
        if check:
            _check_consecutive(self.consecutive_overlaps())

    @classmethod
    def from_coordinates(cls, chart, params, xi, xidot, **kw) -> "ChartCurve":
        xi = np.asarray(xi, dtype=float)
        xidot = np.asarray(xidot, dtype=float)
        return cls(chart, params, chart.embed(xi), chart.embed_velocity(xi, xidot), **kw)

    @property
    def n_nodes(self) -> int:
        return self.params.size

    def _phase(self, j, k):
        return np.exp(1j * (self.alpha[k] - self.alpha[j]))

    def overlap(self, j: int, k: int) -> complex:
        return complex(self.chart.kernel(self.points[j], self.points[k]) * self._phase(j, k))

    def consecutive_overlaps(self) -> np.ndarray:
        k = self.chart.kernel(self.points[:-1], self.points[1:])
        return k * np.exp(1j * np.diff(self.alpha))

    def overlap_matrix(self, idx=None) -> np.ndarray:
        idx = np.arange(self.n_nodes) if idx is None else np.asarray(idx)
        p = self.points[idx]
        a = self.alpha[idx]
        return self.chart.kernel_matrix(p, p) * np.exp(1j * (a[None, :] - a[:, None]))

    def triple_products(self, i, j, k) -> np.ndarray:
        # lift phases cancel around a closed triangle
        kern = self.chart.kernel
        p = self.points
        return kern(p[i], p[j]) * kern(p[j], p[k]) * kern(p[k], p[i])

    def connection(self) -> np.ndarray:
        return (self.chart.native_connection(self.points, self.velocities)
                + 1j * self.alpha_dot)

    def transverse_speed2(self) -> np.ndarray:
        return self.chart.native_speed2(self.points, self.velocities)

    def vectors(self, idx=None) -> np.ndarray:
        """Explicit (possibly truncated) realisation of the nodes."""
        idx = slice(None) if idx is None else idx
        v = self.chart.native_vectors(self.points[idx])
        return np.exp(1j * self.alpha[idx])[:, None] * v

    @property
    def states(self) -> np.ndarray:
        return self.vectors()

    def state(self, k: int) -> StateVector:
        return StateVector(self.vectors([k])[0])

    def to_sampled(self) -> SampledCurve:
        """Materialise as explicit vectors with analytic tangents."""
        v = self.chart.native_vectors(self.points)
        t = self.chart.native_tangent_vectors(self.points, self.velocities)
        f = np.exp(1j * self.alpha)[:, None]
        tan = f * (t + 1j * self.alpha_dot[:, None] * v)
        return SampledCurve(self.params, f * v, tan, check=False)

    def window(self, i0: int, i1: int) -> "ChartCurve":
        sl = slice(i0, i1 + 1)
        return ChartCurve(self.chart, self.params[sl], self.points[sl],
                          self.velocities[sl], self.alpha[sl], self.alpha_dot[sl],
                          check=False)

    def with_phase(self, alpha, alpha_dot=None) -> "ChartCurve":
        if alpha_dot is None:
            raise ValueError("chart curves need alpha_dot to stay analytic")
        return ChartCurve(self.chart, self.params, self.points, self.velocities,
                          self.alpha + alpha, self.alpha_dot + alpha_dot, check=False)

    def reversed(self) -> "ChartCurve":
        return ChartCurve(self.chart, -self.params[::-1], self.points[::-1],
                          -self.velocities[::-1], self.alpha[::-1],
                          -self.alpha_dot[::-1], check=False)


class PiecewiseCurve:
    """Concatenation of curves whose end and start nodes share a ray.

    Each piece keeps its own tangents, so kinks at the junctions do not
    spoil the quadrature.  The lift is made continuous by rephasing each
    piece as a whole.
    """

    def __init__(self, pieces, *, tol=JUNCTION_TOL):
        pieces = list(pieces)
        if not pieces:
            raise ValueError("need at least one piece")
        self.pieces = pieces
        self.junction_phases = []
        for j, (a, b) in enumerate(zip(pieces[:-1], pieces[1:])):
            ov = node_overlap(a, a.n_nodes - 1, b, 0)
            if 1.0 - abs(ov) ** 2 > tol:
                raise ValueError(
                    f"pieces {j} and {j + 1} do not meet at a common ray "
                    f"(1 - Tr rho rho' = {1.0 - abs(ov) ** 2:.3e})")
            self.junction_phases.append(float(np.angle(ov)))

    @property
    def n_nodes(self) -> int:
        return sum(p.n_nodes for p in self.pieces)

    def __iter__(self):
        return iter(self.pieces)


def node_overlap(c1, i, c2, j) -> complex:
    """Inner product between node ``i`` of ``c1`` and node ``j`` of ``c2``."""
    if c1 is c2:
        return c1.overlap(i, j)
    ch1 = getattr(c1, "chart", None)
    if ch1 is not None and ch1 is getattr(c2, "chart", None):
        k = ch1.kernel(c1.points[i], c2.points[j])
        return complex(k * np.exp(1j * (c2.alpha[j] - c1.alpha[i])))
    return complex(np.vdot(c1.vectors([i])[0], c2.vectors([j])[0]))


def concatenate(*pieces) -> PiecewiseCurve:
    flat = []
    for p in pieces:
        flat.extend(p.pieces if isinstance(p, PiecewiseCurve) else [p])
    return PiecewiseCurve(flat)


def _integrate(y, x, rule):
    if rule == "trapezoid":
        return float(np.trapezoid(y, x))
    if rule == "simpson":
        return float(simpson(y, x=x))
    raise ValueError(f"unknown quadrature rule {rule!r}")


def total_phase(c) -> float:
    """arg(psi(start), psi(end)) along a continuous lift."""
    if isinstance(c, PiecewiseCurve):
        first, last = c.pieces[0], c.pieces[-1]
        ov = node_overlap(first, 0, last, last.n_nodes - 1)
        if abs(ov) <= ORTHO_THRESHOLD:
            raise UndefinedPhaseError("orthogonal endpoints: total phase undefined")
        # continuity rephasing of piece j+1 contributes -arg(last_j, first_{j+1})
        return wrap_phase(np.angle(ov) - sum(c.junction_phases))
    ov = c.overlap(0, c.n_nodes - 1)
    if abs(ov) <= ORTHO_THRESHOLD:
        raise UndefinedPhaseError("orthogonal endpoints: total phase undefined")
    return wrap_phase(np.angle(ov))


def dynamical_phase(c, rule: str = "trapezoid") -> float:
    """Im of the integral of (psi, dpsi/ds); accumulated without wrapping."""
    if isinstance(c, PiecewiseCurve):
        return sum(dynamical_phase(p, rule) for p in c.pieces)
    return _integrate(c.connection().imag, c.params, rule)


def geometric_phase(c, rule: str = "trapezoid") -> float:
    return wrap_phase(total_phase(c) - dynamical_phase(c, rule))


def curve_length(c, rule: str = "trapezoid") -> float:
    """Fubini-Study length."""
    if isinstance(c, PiecewiseCurve):
        return sum(curve_length(p, rule) for p in c.pieces)
    speed = np.sqrt(np.clip(c.transverse_speed2(), 0.0, None))
    return _integrate(speed, c.params, rule)


def horizontal_lift(c):
    """Discrete parallel transport: every consecutive pair made in phase.

    The first node is left alone.  With analytic tangents the new tangent is
    the horizontal one, d/ds psi + i alpha' psi with alpha' = -Im(psi, psi').
    """
    ov = c.consecutive_overlaps()
    _check_consecutive(ov)
    alpha = np.concatenate([[0.0], -np.cumsum(np.angle(ov))])
    if isinstance(c, ChartCurve):
        conn = c.connection()
        return ChartCurve(c.chart, c.params, c.points, c.velocities,
                          c.alpha + alpha, c.alpha_dot - conn.imag, check=False)
    if c.tangents is None:
        return c.with_phase(alpha)
    conn = c.connection()
    return c.with_phase(alpha, -conn.imag)


def phase_composition_defect(c12, c23, rule: str = "trapezoid") -> float:
    """phi_g[c12 then c23] - phi_g[c12] - phi_g[c23], wrapped.

    Equals minus the three-vertex Bargmann phase of the junction states.
    """
    joined = concatenate(c12, c23)
    return wrap_phase(geometric_phase(joined, rule) - geometric_phase(c12, rule)
                      - geometric_phase(c23, rule))


def chain_defect(pieces, rule: str = "trapezoid") -> float:
    """phi_g of the whole chain minus the sum of the pieces' phases."""
    joined = concatenate(*pieces)
    parts = sum(geometric_phase(p, rule) for p in pieces)
    return wrap_phase(geometric_phase(joined, rule) - parts)


def phase_table(c):
    """Accumulated (s, phi_tot, phi_dyn, phi_g) at every node of a single curve."""
    ov = np.array([c.overlap(0, k) for k in range(c.n_nodes)])
    tot = np.angle(ov)
    integrand = c.connection().imag
    steps = 0.5 * (integrand[1:] + integrand[:-1]) * np.diff(c.params)
    dyn = np.concatenate([[0.0], np.cumsum(steps)])
    return {"s": c.params, "phi_tot": tot, "phi_dyn": dyn,
            "phi_g": wrap_phase(tot - dyn)}


def write_phase_csv(c, fh) -> None:
    tab = phase_table(c)
    w = csv.writer(fh)
    w.writerow(["s", "phi_tot", "phi_dyn", "phi_g"])
    for row in zip(tab["s"], tab["phi_tot"], tab["phi_dyn"], tab["phi_g"]):
        w.writerow([f"{v:.17g}" for v in row])
