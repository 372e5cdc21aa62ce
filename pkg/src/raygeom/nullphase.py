"""Free geodesics and null-phase certificates.

A curve is null phase when every connected portion of it has vanishing
geometric phase.  Two numerical certificates are offered:

* separability -- the pairwise phase arg(psi(s), psi(s')) must split as
  f(s') - f(s), so its mixed second derivative vanishes;
* Bargmann reality -- every three-point trace Tr(rho rho' rho'') must be
  real and non-negative.

They are independent computations of the same property and should agree.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.ndimage import binary_dilation

from .curves import (ChartCurve, PiecewiseCurve, SampledCurve, geometric_phase,
                     node_overlap)
from .errors import UndefinedPhaseError
from .state_space import ORTHO_THRESHOLD, as_array

TOL_IM = 1e-8
SEP_FLOOR = 1e-8
SEP_REL = 1e-12
MASK_THRESHOLD = 1e-6
MAX_SEP_NODES = 201
FULL_TRIPLES_MAX = 40
RANDOM_TRIPLES = 10_000


def free_geodesic(a, b, nodes: int = 1001) -> SampledCurve:
    """Shortest ray-space curve from ray(a) to ray(b), as a planar circular arc.

    ``b`` is rephased so (a, b') is real positive; the arc is
    a cos s + phi2 sin s with phi2 the normalised component of b' orthogonal
    to a, for s in [0, arccos (a, b')].
    """
    a, b = as_array(a), as_array(b)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    if nodes < 2:
        raise ValueError("need at least two nodes")
    ov = np.vdot(a, b)
    if abs(ov) <= ORTHO_THRESHOLD:
        raise UndefinedPhaseError("orthogonal rays: no free geodesic by this construction")
    b = b * np.exp(-1j * np.angle(ov))
    c = abs(ov)
    r = b - c * a
    nr = float(np.linalg.norm(r))
    if nr < 1e-14:
        s = np.linspace(0.0, 1.0, nodes)
        return SampledCurve(s, np.tile(a, (nodes, 1)), np.zeros((nodes, a.size), complex))
    phi2 = r / nr
    smax = math.atan2(nr, c)
    s = np.linspace(0.0, smax, nodes)
    cs, sn = np.cos(s)[:, None], np.sin(s)[:, None]
    return SampledCurve(s, cs * a + sn * phi2, -sn * a + cs * phi2)


@dataclass
class NullPhaseReport:
    mixed_partial_max: float | None = None
    tol_sep: float | None = None
    excluded_entries: int = 0
    bargmann_triple_max_imag: float | None = None
    bargmann_triple_min_real: float | None = None
    tol_im: float = TOL_IM
    triples_checked: int = 0
    separable: bool | None = None
    real_nonnegative: bool | None = None
    witness: tuple | None = None

    @property
    def verdict(self) -> str:
        flags = [f for f in (self.separable, self.real_nonnegative) if f is not None]
        if not flags:
            raise ValueError("empty report")
        return "pass" if all(flags) else "fail"

    def merge(self, other: "NullPhaseReport") -> "NullPhaseReport":
        out = NullPhaseReport(**asdict(self))
        for k, v in asdict(other).items():
            if v is not None and k not in ("tol_im",):
                setattr(out, k, v)
        if self.witness is not None and self.separable is False:
            out.witness = self.witness
        return out

    def to_json(self) -> dict:
        d = asdict(self)
        d["verdict"] = self.verdict
        if d["witness"] is not None:
            d["witness"] = [float(x) for x in d["witness"]]
        return d


def _subsample(n: int, m: int) -> np.ndarray:
    if n <= m:
        return np.arange(n)
    return np.unique(np.round(np.linspace(0, n - 1, m)).astype(int))


def separability_test(c, tol: float | None = None,
                      max_nodes: int = MAX_SEP_NODES) -> NullPhaseReport:
    """Mixed second difference of the pairwise phase matrix.

    The default tolerance sits a safe margin above the rounding noise that
    the h^-2 amplification produces: max(1e-8, 1e-12 max|P| / h^2).
    """
    idx = _subsample(c.n_nodes, max_nodes)
    if idx.size < 3:
        raise ValueError("separability test needs at least 3 nodes")
    s = c.params[idx]
    m = c.overlap_matrix(idx)
    mod = np.abs(m)
    j, k = np.unravel_index(np.argmin(mod), mod.shape)
    if mod[j, k] <= ORTHO_THRESHOLD:
        raise UndefinedPhaseError(
            f"orthogonal node pair at s = {s[j]:.6g}, s' = {s[k]:.6g}",
            witness=(float(s[j]), float(s[k])))
    phase = np.unwrap(np.angle(m), axis=1)
    d1 = np.gradient(phase, s, axis=1, edge_order=2)
    d2 = np.gradient(d1, s, axis=0, edge_order=2)
    mask = binary_dilation(mod < MASK_THRESHOLD, iterations=2)
    d2 = np.where(mask, 0.0, np.abs(d2))
    h = float(np.max(np.diff(s)))
    if tol is None:
        tol = max(SEP_FLOOR, SEP_REL * float(np.max(np.abs(phase))) / h ** 2)
    a, b = np.unravel_index(np.argmax(d2), d2.shape)
    worst = float(d2[a, b])
    ok = worst < tol
    return NullPhaseReport(
        mixed_partial_max=worst, tol_sep=float(tol), excluded_entries=int(mask.sum()),
        separable=ok, witness=None if ok else (float(s[a]), float(s[b])))


def _triples(n: int, seed: int):
    if n <= FULL_TRIPLES_MAX:
        g = np.arange(n)
        i, j, k = np.meshgrid(g, g, g, indexing="ij")
        return i.ravel(), j.ravel(), k.ravel()
    rng = np.random.default_rng(seed)
    t = rng.integers(0, n, size=(RANDOM_TRIPLES, 3))
    return t[:, 0], t[:, 1], t[:, 2]


def bargmann_reality_test(c, tol_im: float = TOL_IM, seed: int = 0) -> NullPhaseReport:
    """Tr(rho(s) rho(s') rho(s'')) over node triples.

    All triples when the curve has at most 40 nodes, else 10^4 random
    triples drawn with ``seed``.
    """
    i, j, k = _triples(c.n_nodes, seed)
    vals = c.triple_products(i, j, k)
    im, re = np.abs(vals.imag), vals.real
    max_im, min_re = float(im.max()), float(re.min())
    ok = max_im < tol_im and min_re > -tol_im
    witness = None
    if not ok:
        w = int(np.argmax(im)) if max_im >= tol_im else int(np.argmin(re))
        witness = (float(c.params[i[w]]), float(c.params[j[w]]), float(c.params[k[w]]))
    return NullPhaseReport(
        bargmann_triple_max_imag=max_im, bargmann_triple_min_real=min_re, tol_im=tol_im,
        triples_checked=int(i.size), real_nonnegative=ok, witness=witness)


def check_null_phase(c, tol_sep: float | None = None, tol_im: float = TOL_IM,
                     seed: int = 0) -> NullPhaseReport:
    """Run both certificates and merge them into one report."""
    sep = separability_test(c, tol_sep)
    bar = bargmann_reality_test(c, tol_im, seed)
    return sep.merge(bar)


def _connector(c_open, connector, nodes):
    last = c_open.n_nodes - 1
    if connector == "free":
        return free_geodesic(c_open.vectors([last])[0], c_open.vectors([0])[0], nodes)
    if connector == "null":
        from .charts import chart_curve, null_phase_family
        if not isinstance(c_open, ChartCurve):
            raise UndefinedPhaseError("in-chart connector needs a chart curve")
        path = null_phase_family(c_open.chart, c_open.points[last], c_open.points[0],
                                 native=True)
        return chart_curve(c_open.chart, path, nodes)
    if callable(connector):
        return connector(c_open)
    raise ValueError(f"unknown connector {connector!r}")


def open_to_closed_reduction(c_open, connector="free", nodes: int = 1001,
                             rule: str = "trapezoid"):
    """Close an open curve with a null-phase return path.

    Returns (closed curve, phi_g of the open curve, phi_g of the closed one);
    the two phases agree when the connector is null phase.
    """
    phi_open = geometric_phase(c_open, rule)
    last = c_open.n_nodes - 1
    ov = node_overlap(c_open, 0, c_open, last)
    if 1.0 - abs(ov) ** 2 < 1e-10:
        return c_open, phi_open, phi_open
    ret = _connector(c_open, connector, nodes)
    closed = PiecewiseCurve([c_open, ret])
    return closed, phi_open, geometric_phase(closed, rule)
