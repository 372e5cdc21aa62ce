"""Local Darboux coordinates on ray space and pulled-back two-forms.

Around a base vector psi0 with orthonormal complement {e_r}, every state
not orthogonal to psi0 is written uniquely as

    psi = exp(i alpha) (chi + sqrt(1 - |chi|^2) psi0),
    chi = sum_r (beta_r - i gamma_r) e_r / sqrt(2).

In these coordinates Im(psi, dpsi) = d alpha + 1/2 sum (gamma d beta - beta d gamma)
and the curvature two-form is constant, so areas reduce to boundary
integrals.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .curves import SampledCurve
from .errors import DomainError
from .state_space import ORTHO_THRESHOLD, StateVector, as_array

SQRT2 = np.sqrt(2.0)


def _complement(psi0: np.ndarray) -> np.ndarray:
    d = psi0.size
    m = np.column_stack([psi0, np.eye(d, dtype=complex)])
    q, _ = np.linalg.qr(m)
    q = q[:, :d]
    # QR fixes the first column up to a phase
    q[:, 0] *= np.vdot(q[:, 0], psi0) / abs(np.vdot(q[:, 0], psi0))
    return q[:, 1:]


@dataclass(frozen=True)
class DarbouxChart:
    base: np.ndarray
    basis: np.ndarray     # d x (d-1), columns e_r

    def __init__(self, base, basis=None):
        psi0 = as_array(base)
        psi0 = psi0 / np.linalg.norm(psi0)
        e = _complement(psi0) if basis is None else np.asarray(basis, dtype=complex)
        full = np.column_stack([psi0, e])
        if e.shape != (psi0.size, psi0.size - 1) or \
                np.max(np.abs(full.conj().T @ full - np.eye(psi0.size))) > 1e-12:
            raise ValueError("basis must be an orthonormal complement of the base state")
        object.__setattr__(self, "base", psi0)
        object.__setattr__(self, "basis", e)

    @property
    def n(self) -> int:
        return self.basis.shape[1]

    def rotated(self, u) -> "DarbouxChart":
        """Same base, basis e_r -> sum_s e_s U_sr for a unitary U."""
        return DarbouxChart(self.base, self.basis @ np.asarray(u, dtype=complex))

    def to_coords(self, psi):
        """(alpha, beta, gamma) of a state."""
        v = as_array(psi)
        v = v / np.linalg.norm(v)
        c0 = np.vdot(self.base, v)
        if abs(c0) <= ORTHO_THRESHOLD:
            raise DomainError("state is outside the chart (orthogonal to the base)")
        alpha = float(np.angle(c0))
        chi = np.exp(-1j * alpha) * (self.basis.conj().T @ v)
        return alpha, SQRT2 * chi.real, -SQRT2 * chi.imag

    def from_coords(self, alpha, beta, gamma) -> np.ndarray:
        """Vectorised over leading axes of ``beta``/``gamma``."""
        beta, gamma = np.asarray(beta, dtype=float), np.asarray(gamma, dtype=float)
        nrm = 0.5 * np.sum(beta ** 2 + gamma ** 2, axis=-1)
        if np.any(nrm >= 1.0):
            raise DomainError("coordinates outside the chart: 1/2 (beta^2 + gamma^2) >= 1")
        chi = (beta - 1j * gamma) / SQRT2
        psi = chi @ self.basis.T + np.sqrt(1.0 - nrm)[..., None] * self.base
        return np.exp(1j * np.asarray(alpha, dtype=float))[..., None] * psi

    def curve(self, t, alpha, beta, gamma, alpha_dot, beta_dot, gamma_dot) -> SampledCurve:
        """State-space curve with exact tangents from a coordinate path."""
        beta, gamma = np.atleast_2d(beta), np.atleast_2d(gamma)
        beta_dot, gamma_dot = np.atleast_2d(beta_dot), np.atleast_2d(gamma_dot)
        alpha = np.broadcast_to(alpha, np.shape(t))
        alpha_dot = np.broadcast_to(alpha_dot, np.shape(t))
        nrm = 0.5 * np.sum(beta ** 2 + gamma ** 2, axis=-1)
        root = np.sqrt(1.0 - nrm)
        dnrm = np.sum(beta * beta_dot + gamma * gamma_dot, axis=-1)
        chi = (beta - 1j * gamma) / SQRT2
        chid = (beta_dot - 1j * gamma_dot) / SQRT2
        phase = np.exp(1j * alpha)[:, None]
        inner = chi @ self.basis.T + root[:, None] * self.base
        dinner = chid @ self.basis.T + (-0.5 * dnrm / root)[:, None] * self.base
        psi = phase * inner
        dpsi = phase * dinner + 1j * alpha_dot[:, None] * psi
        return SampledCurve(t, psi, dpsi)

    def to_json(self) -> dict:
        return {"base": StateVector(self.base).to_json(),
                "basis": {"re": self.basis.real.tolist(), "im": self.basis.imag.tolist()}}

    @classmethod
    def from_json(cls, obj) -> "DarbouxChart":
        if isinstance(obj, str):
            obj = json.loads(obj)
        base = StateVector.from_json(obj["base"]).amplitudes
        basis = None
        if "basis" in obj:
            b = obj["basis"]
            basis = np.asarray(b["re"], dtype=float) + 1j * np.asarray(b["im"], dtype=float)
        return cls(base, basis)


def one_form_A(point, velocity) -> np.ndarray:
    """A = d alpha + 1/2 sum (gamma d beta - beta d gamma) on a tangent vector.

    ``point`` and ``velocity`` are (alpha, beta, gamma) triples; arrays with
    a leading node axis are evaluated node by node.
    """
    _, b, g = point
    ad, bd, gd = velocity
    b, g = np.asarray(b, dtype=float), np.asarray(g, dtype=float)
    bd, gd = np.asarray(bd, dtype=float), np.asarray(gd, dtype=float)
    return np.asarray(ad, dtype=float) + 0.5 * np.sum(g * bd - b * gd, axis=-1)


def line_integral_A(t, point, velocity) -> float:
    return float(np.trapezoid(one_form_A(point, velocity), t))


def symplectic_area(beta, gamma, t=None, beta_dot=None, gamma_dot=None,
                    tol: float = 1e-10) -> float:
    """Oriented area 1/2 sum_r closed-integral (beta_r d gamma_r - gamma_r d beta_r).

    This equals the geometric phase of the corresponding state-space loop
    and is minus the loop integral of A.  With velocities the integral is by
    trapezoid in ``t``; otherwise the polygon (shoelace) formula is used.
    """
    beta = np.asarray(beta, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    if beta.ndim == 1:
        beta, gamma = beta[:, None], gamma[:, None]
    gap = max(np.max(np.abs(beta[-1] - beta[0])), np.max(np.abs(gamma[-1] - gamma[0])))
    if gap > tol:
        raise ValueError(f"loop is not closed (endpoint gap {gap:.3e})")
    if beta_dot is not None:
        bd = np.asarray(beta_dot, dtype=float).reshape(beta.shape)
        gd = np.asarray(gamma_dot, dtype=float).reshape(gamma.shape)
        integrand = 0.5 * np.sum(beta * gd - gamma * bd, axis=-1)
        return float(np.trapezoid(integrand, t))
    return float(0.5 * np.sum(beta[:-1] * gamma[1:] - beta[1:] * gamma[:-1]))


def local_metric_matrix(eta) -> np.ndarray:
    """g(eta) = 1 + 1/2 eta eta^T / (1 - 1/2 eta^T eta) + 1/2 J eta eta^T J.

    ``eta`` stacks (beta, gamma).  The Fubini-Study line element in these
    coordinates is ds^2 = 1/2 deta^T g deta.
    """
    eta = np.asarray(eta, dtype=float)
    m = eta.size
    if m % 2:
        raise ValueError("eta must stack beta and gamma of equal length")
    q = float(eta @ eta)
    if q >= 2.0:
        raise DomainError("eta^T eta must be < 2")
    n = m // 2
    J = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
    return (np.eye(m) + 0.5 * np.outer(eta, eta) / (1.0 - 0.5 * q)
            + 0.5 * J @ np.outer(eta, eta) @ J)


def darboux_length(t, eta, eta_dot) -> float:
    """Fubini-Study length of a coordinate path, int sqrt(1/2 etadot^T g etadot)."""
    eta, eta_dot = np.atleast_2d(eta), np.atleast_2d(eta_dot)
    speed = [np.sqrt(0.5 * v @ local_metric_matrix(e) @ v) for e, v in zip(eta, eta_dot)]
    return float(np.trapezoid(speed, t))


def pullback_two_form(chart, xi, realization: str = "analytic") -> np.ndarray:
    """W_{mu nu} = Im(u_mu, u_nu) at a chart point.

    ``vector`` computes it from the explicit tangents without projecting;
    ``analytic`` uses the projected closed form.  The two agree because
    (psi, u_mu) is purely imaginary.
    """
    xi = chart.check_domain(np.asarray(xi, dtype=float))
    if realization == "analytic":
        w = chart.two_form(xi)
    elif realization == "vector":
        u = np.stack([chart.tangent_at(xi, k) for k in range(chart.n_params)])
        w = np.imag(u.conj() @ u.T)
    else:
        raise ValueError(f"unknown realization {realization!r}")
    if np.max(np.abs(w + w.T)) > 1e-12 * max(1.0, np.max(np.abs(w))):
        raise ArithmeticError("pulled-back two-form is not antisymmetric")
    return 0.5 * (w - w.T)


def isotropy_report(chart, samples, tol: float = 1e-10) -> dict:
    worst = 0.0
    for xi in np.atleast_2d(samples):
        worst = max(worst, float(np.max(np.abs(pullback_two_form(chart, xi)))))
    return {"isotropic": worst < tol, "max_entry": worst}


def two_form_closure_residual(chart, xi, h: float = 1e-4) -> float:
    """Max over index triples of the cyclic sum of derivatives of W."""
    xi = np.asarray(xi, dtype=float)
    n = xi.size
    dw = np.empty((n, n, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        dw[k] = (pullback_two_form(chart, xi + e) - pullback_two_form(chart, xi - e)) / (2 * h)
    cyc = dw + np.transpose(dw, (1, 2, 0)) + np.transpose(dw, (2, 0, 1))
    return float(np.max(np.abs(cyc)))
