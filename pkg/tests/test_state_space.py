import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from raygeom import state_space as ss
from raygeom.errors import DimensionMismatchError, UndefinedPhaseError

from conftest import angles, dims, seeds, state_from_seed


def test_wrap_phase_branch():
    assert ss.wrap_phase(np.pi) == np.pi
    assert ss.wrap_phase(-np.pi) == np.pi
    assert ss.wrap_phase(3 * np.pi / 2) == pytest.approx(-np.pi / 2)
    assert np.allclose(ss.wrap_phase([0.0, 2 * np.pi, 7.0]), [0.0, 0.0, 7.0 - 2 * np.pi])


@given(st.floats(min_value=-50, max_value=50, allow_nan=False))
def test_wrap_phase_range_and_congruence(x):
    y = ss.wrap_phase(x)
    assert -np.pi < y <= np.pi
    k = (x - y) / (2 * np.pi)
    assert abs(k - round(k)) < 1e-9


def test_state_vector_normalises_and_records_norm():
    s = ss.StateVector([3, 4j])
    assert s.norm_factor == pytest.approx(5.0)
    assert np.allclose(s.amplitudes, [0.6, 0.8j])
    with pytest.raises(ValueError):
        ss.StateVector([0, 0])
    with pytest.raises(ValueError):
        ss.StateVector([1.0])


def test_state_json_roundtrip(tmp_path):
    s = ss.random_state(4, np.random.default_rng(1))
    p = tmp_path / "s.json"
    ss.write_state(s, p)
    t = ss.read_state(p)
    assert np.array_equal(s.amplitudes, t.amplitudes)
    assert json.loads(p.read_text())["dim"] == 4
    with pytest.raises(DimensionMismatchError):
        ss.StateVector.from_json({"dim": 3, "re": [1, 0], "im": [0, 0]})


def test_inner_product_convention():
    a = np.array([1j, 0])
    b = np.array([1, 0])
    # conjugate-linear in the first slot
    assert ss.inner_product(a, b) == pytest.approx(-1j)
    with pytest.raises(DimensionMismatchError):
        ss.inner_product([1, 0], [1, 0, 0])


def test_orthogonal_pair_has_no_phase():
    with pytest.raises(UndefinedPhaseError):
        ss.pancharatnam_phase([1, 0], [0, 1])


def test_ray_projector_and_distance():
    r = ss.project_to_ray(ss.StateVector([1, 1j]))
    assert r.dim == 2
    assert r.distance(r) == pytest.approx(0.0, abs=1e-15)
    assert r.distance(ss.project_to_ray([1, -1j])) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        ss.Ray(np.eye(2))


@given(seeds, seeds, dims, angles, angles)
def test_phase_rephasing_covariance(s1, s2, d, a, b):
    u, v = state_from_seed(s1, d), state_from_seed(s2, d)
    if abs(np.vdot(u, v)) < 1e-6:
        return
    base = ss.pancharatnam_phase(u, v)
    got = ss.pancharatnam_phase(np.exp(1j * a) * u, np.exp(1j * b) * v)
    assert abs(ss.wrap_phase(got - (base + b - a))) < 1e-10


@given(seeds, dims)
def test_ray_is_phase_invariant(seed, d):
    u = state_from_seed(seed, d)
    p1 = ss.project_to_ray(u).projector
    p2 = ss.project_to_ray(np.exp(0.7j) * u).projector
    assert np.max(np.abs(p1 - p2)) < 1e-14


def test_in_phase():
    assert ss.in_phase([1, 1], [2, 1])
    assert not ss.in_phase([1, 1], [1j, 1j])
