import numpy as np
import pytest
from hypothesis import given, strategies as st

from raygeom import bargmann as bg
from raygeom.charts import CoherentChart
from raygeom.errors import UndefinedPhaseError
from raygeom.state_space import wrap_phase

from conftest import dims, seeds, state_from_seed


def _verts(seed, n, d):
    return [state_from_seed(seed + 17 * k, d) for k in range(n)]


def _bloch(v):
    rho = np.outer(v, v.conj())
    return np.real([rho[0, 1] + rho[1, 0], 1j * (rho[0, 1] - rho[1, 0]), rho[0, 0] - rho[1, 1]])


def test_qubit_octant_triangle():
    v = [np.array([1, 0]), np.array([1, 1]) / np.sqrt(2), np.array([1, 1j]) / np.sqrt(2)]
    d = bg.bargmann_invariant(v)
    assert d == pytest.approx(0.25 + 0.25j)
    # +z, +x, +y span an octant: solid angle pi/2
    assert bg.bargmann_phase(v) == pytest.approx(np.pi / 4)


@given(seeds)
def test_qubit_phase_is_half_solid_angle(seed):
    v = _verts(seed, 3, 2)
    a, b, c = (_bloch(x) for x in v)
    # signed solid angle of the geodesic triangle (Van Oosterom - Strackee)
    omega = 2 * np.arctan2(a @ np.cross(b, c), 1 + a @ b + b @ c + c @ a)
    try:
        ph = bg.bargmann_phase(v)
    except UndefinedPhaseError:
        return
    assert abs(wrap_phase(ph - omega / 2)) < 1e-9


@given(seeds, st.integers(min_value=2, max_value=7), dims)
def test_trace_formula(seed, n, d):
    v = _verts(seed, n, d)
    assert abs(bg.bargmann_invariant(v) - bg.bargmann_trace(v)) < 1e-12


@given(seeds, st.integers(min_value=2, max_value=6), dims)
def test_rephasing_cyclic_and_reversal(seed, n, d):
    v = _verts(seed, n, d)
    delta = bg.bargmann_invariant(v)
    r = np.random.default_rng(seed).uniform(0, 2 * np.pi, size=n)
    assert abs(bg.bargmann_invariant([np.exp(1j * t) * x for t, x in zip(r, v)]) - delta) < 1e-12
    assert abs(bg.bargmann_invariant(v[1:] + v[:1]) - delta) < 1e-12
    assert abs(bg.bargmann_invariant(v[::-1]) - np.conj(delta)) < 1e-12


@given(seeds, dims)
def test_two_vertex_invariant_is_fidelity(seed, d):
    a, b = _verts(seed, 2, d)
    delta = bg.bargmann_invariant([a, b])
    assert abs(delta.imag) < 1e-15
    assert delta.real == pytest.approx(abs(np.vdot(a, b)) ** 2, abs=1e-14)


@given(seeds, st.integers(min_value=3, max_value=7), dims, st.data())
def test_fan_decomposition(seed, n, d, data):
    v = _verts(seed, n, d)
    anchor = data.draw(st.integers(min_value=0, max_value=n - 1))
    dec = bg.decompose_into_triangles(v, anchor)
    delta = bg.bargmann_invariant(v)
    assert abs(dec.reconstructed - delta) < 1e-12 * max(1.0, abs(delta)) + 1e-15
    assert len(dec.triangles) == n - 2 and len(dec.pairs) == max(n - 3, 0)


@given(seeds, st.integers(min_value=3, max_value=5), st.integers(min_value=2, max_value=4))
def test_free_polygon_phase(seed, n, d):
    v = _verts(seed, n, d)
    ov = [abs(np.vdot(v[j], v[(j + 1) % n])) for j in range(n)]
    if min(ov) < 0.05:
        return
    res = bg.polygon_phase_check(v, "free", nodes=64)
    assert abs(res.defect) < 1e-10


def test_coherent_triangle_null_sides():
    r2 = np.sqrt(2)
    res = bg.polygon_phase_check([[0, 0], [r2, 0], [0, r2]], "null",
                                 chart=CoherentChart(), nodes=256)
    assert res.phi_g == pytest.approx(-1.0, abs=1e-9)
    assert res.minus_arg_delta == pytest.approx(-1.0, abs=1e-12)


def test_chart_invariant_matches_vectors():
    ch = CoherentChart()
    pts = np.array([[0.1, 0.2], [1.0, -0.4], [-0.3, 0.9], [0.5, 0.5]])
    a = bg.bargmann_invariant(pts, chart=ch)
    b = bg.bargmann_invariant([ch.state_at(p).amplitudes for p in pts])
    assert abs(a - b) < 1e-12


def test_orthogonal_vertices():
    with pytest.raises(UndefinedPhaseError) as ei:
        bg.bargmann_phase([[1, 0], [0, 1], [1, 1]])
    assert ei.value.witness == (0, 1)
    with pytest.raises(UndefinedPhaseError):
        bg.bargmann_invariant([[1, 1], [1, 0], [0, 1]])
    with pytest.raises(UndefinedPhaseError):
        bg.decompose_into_triangles([[1, 0], [1, 1], [0, 1], [1, 1j]], anchor=0)
