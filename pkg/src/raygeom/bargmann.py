"""Bargmann invariants and the polygon / geometric-phase connection."""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .curves import PiecewiseCurve, geometric_phase
from .errors import DimensionMismatchError, UndefinedPhaseError
from .state_space import ORTHO_THRESHOLD, as_array, wrap_phase

PHASE_THRESHOLD = 1e-12
REFINE_CAP = 2 ** 20


def vertex_array(vertices) -> np.ndarray:
    vs = [as_array(v) for v in vertices]
    if len(vs) < 2:
        raise ValueError("need at least two vertices")
    if len({v.size for v in vs}) != 1:
        raise DimensionMismatchError("vertices have different dimensions")
    arr = np.array(vs)
    return arr / np.linalg.norm(arr, axis=1, keepdims=True)


def _cyclic_overlaps(v: np.ndarray) -> np.ndarray:
    ov = np.einsum("ij,ij->i", v.conj(), np.roll(v, -1, axis=0))
    small = np.flatnonzero(np.abs(ov) <= ORTHO_THRESHOLD)
    if small.size:
        j = int(small[0])
        raise UndefinedPhaseError(
            f"consecutive vertices {j} and {(j + 1) % len(v)} are orthogonal",
            witness=(j, (j + 1) % len(v)))
    return ov


def _chart_cyclic_overlaps(chart, xs) -> np.ndarray:
    p = chart.embed(np.asarray(xs, dtype=float))
    ov = chart.kernel(p, np.roll(p, -1, axis=0))
    small = np.flatnonzero(np.abs(ov) <= ORTHO_THRESHOLD)
    if small.size:
        j = int(small[0])
        raise UndefinedPhaseError(f"consecutive vertices {j} and {(j + 1) % len(p)} "
                                  "are orthogonal", witness=(j, (j + 1) % len(p)))
    return ov


def bargmann_invariant(vertices, chart=None) -> complex:
    """(psi1, psi2)(psi2, psi3)...(psin, psi1).

    With ``chart`` the vertices are chart coordinates and the closed-form
    overlaps are used.
    """
    ov = (_chart_cyclic_overlaps(chart, vertices) if chart is not None
          else _cyclic_overlaps(vertex_array(vertices)))
    return complex(np.prod(ov))


def bargmann_trace(vertices) -> complex:
    """Tr(rho1 rho2 ... rhon), the same number computed from projectors."""
    v = vertex_array(vertices)
    rhos = [np.outer(x, x.conj()) for x in v]
    return complex(np.trace(reduce(np.matmul, rhos)))


def bargmann_phase(vertices, chart=None) -> float:
    delta = bargmann_invariant(vertices, chart)
    if abs(delta) <= PHASE_THRESHOLD:
        raise UndefinedPhaseError(f"|Delta| = {abs(delta):.3e}: phase undefined")
    return wrap_phase(np.angle(delta))


@dataclass(frozen=True)
class Decomposition:
    triangles: np.ndarray     # Delta_3(psi_a, psi_{j-1}, psi_j), j = 3..n
    pairs: np.ndarray         # Delta_2(psi_a, psi_{j-1}), j = 4..n
    reconstructed: complex
    anchor: int


def decompose_into_triangles(vertices, anchor: int = 0) -> Decomposition:
    """Fan triangulation of Delta_n about one anchor vertex.

    Delta_n = prod Delta_3(psi_a, psi_{j-1}, psi_j) / prod Delta_2(psi_a, psi_{j-1}).
    The result depends on the anchor even though Delta_n does not.
    """
    v = vertex_array(vertices)
    n = len(v)
    if n < 3:
        raise ValueError("decomposition needs at least three vertices")
    v = np.roll(v, -anchor, axis=0)
    _cyclic_overlaps(v)
    a = v[0]
    tri, pair = [], []
    for j in range(2, n):
        b, c = v[j - 1], v[j]
        tri.append(np.vdot(a, b) * np.vdot(b, c) * np.vdot(c, a))
    for j in range(3, n):
        d2 = abs(np.vdot(a, v[j - 1])) ** 2
        if d2 <= ORTHO_THRESHOLD ** 2:
            raise UndefinedPhaseError(
                f"vanishing denominator: vertices {anchor} and {(anchor + j - 1) % n} "
                "are orthogonal", witness=(anchor, (anchor + j - 1) % n))
        pair.append(d2)
    tri, pair = np.array(tri), np.array(pair, dtype=float)
    return Decomposition(tri, pair, complex(np.prod(tri) / np.prod(pair)), anchor)


@dataclass(frozen=True)
class PolygonResult:
    phi_g: float
    minus_arg_delta: float
    defect: float
    nodes_per_side: int
    connector: str

    def to_json(self) -> dict:
        return {"phi_g": self.phi_g, "minus_arg_delta": self.minus_arg_delta,
                "defect": self.defect, "nodes_per_side": self.nodes_per_side,
                "connector": self.connector}


def polygon_sides(vertices, connector: str = "free", chart=None, nodes: int = 512):
    """Closed polygon whose sides are free geodesics, chart null-phase curves,
    or constrained geodesics of the chart."""
    n = len(vertices)
    sides = []
    for j in range(n):
        a, b = vertices[j], vertices[(j + 1) % n]
        try:
            sides.append(_side(a, b, connector, chart, nodes))
        except Exception as exc:
            raise UndefinedPhaseError(
                f"no {connector} connector between vertices {j} and {(j + 1) % n}: {exc}",
                witness=(j, (j + 1) % n)) from exc
    return PiecewiseCurve(sides)


def _side(a, b, connector, chart, nodes):
    from .charts import chart_curve, null_phase_family
    from .nullphase import free_geodesic
    if connector == "free":
        if chart is not None:
            a, b = chart.state_at(a), chart.state_at(b)
        return free_geodesic(a, b, nodes)
    if chart is None:
        raise ValueError(f"{connector!r} connectors need a chart")
    if connector == "null":
        return chart_curve(chart, null_phase_family(chart, a, b), nodes)
    if connector == "geodesic":
        from .curves import ChartCurve
        from .riemann import geodesic_connect
        sol = geodesic_connect(chart, a, b, steps=nodes - 1)
        return ChartCurve.from_coordinates(chart, sol.s, sol.xi, sol.xidot)
    raise ValueError(f"unknown connector {connector!r}")


def polygon_phase_check(vertices, connector: str = "free", chart=None,
                        nodes: int = 512, refine: bool = False,
                        rule: str = "simpson") -> PolygonResult:
    """Compare phi_g of the closed polygon with -arg Delta_n.

    ``vertices`` are states, or chart coordinates when ``chart`` is given.
    With ``refine`` the side resolution doubles until the defect settles.
    """
    if chart is not None:
        rhs = -bargmann_phase(vertices, chart)
    else:
        rhs = -bargmann_phase(vertices)

    def run(m):
        loop = polygon_sides(vertices, connector, chart, m)
        phi = geometric_phase(loop, rule)
        return phi, wrap_phase(phi - rhs)

    phi, defect = run(nodes)
    if refine:
        while 2 * nodes <= REFINE_CAP:
            phi2, defect2 = run(2 * nodes)
            nodes *= 2
            settled = abs(defect2 - defect) < 1e-12
            phi, defect = phi2, defect2
            if settled:
                break
    return PolygonResult(phi, rhs, defect, nodes, connector)
