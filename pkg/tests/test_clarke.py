import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clarkeframe import (
    ArcParameters,
    ConstraintError,
    DimensionError,
    GeometryError,
    RobotGeometry,
    arc_to_clarke,
    clarke_modulus_argument,
    clarke_to_arc,
    clarke_to_joints,
    interop_transfer,
    joints_to_clarke,
    make_clarke_matrix,
)

finite = st.floats(min_value=-0.05, max_value=0.05, allow_nan=False)


def encode_by_loop(rho, psi):
    """Oracle: the defining sums written out term by term."""
    n = len(psi)
    re = sum(2.0 / n * r * math.cos(p) for r, p in zip(rho, psi))
    im = sum(2.0 / n * r * math.sin(p) for r, p in zip(rho, psi))
    return re, im


def test_clarke_matrix_n4_quadrants():
    geom = RobotGeometry(n=4, l=0.07, d=0.01, psi=[0, math.pi / 2, math.pi, 3 * math.pi / 2])
    mp, _ = make_clarke_matrix(geom)
    np.testing.assert_allclose(mp, 0.5 * np.array([[1, 0, -1, 0], [0, 1, 0, -1]]), atol=1e-15)


def test_inverse_matrix_n3_unit_circle():
    _, inv = make_clarke_matrix(RobotGeometry(n=3, l=0.07, d=0.01))
    s = math.sqrt(3) / 2
    np.testing.assert_allclose(inv, [[1, 0], [-0.5, s], [-0.5, -s]], atol=1e-15)


@pytest.mark.parametrize("n", range(3, 13))
def test_right_inverse_and_transpose(n):
    geom = RobotGeometry(n=n, l=0.07, d=0.01)
    mp, inv = make_clarke_matrix(geom)
    assert mp.shape == (2, n) and inv.shape == (n, 2)
    np.testing.assert_allclose(mp @ inv, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(mp.T, (2.0 / n) * inv, atol=1e-12)


def test_unequal_but_symmetric_angles_accepted():
    # two interleaved squares rotated against each other
    psi = [0, math.pi / 2, math.pi, 3 * math.pi / 2, 0.3, 0.3 + math.pi / 2, 0.3 + math.pi, 0.3 + 3 * math.pi / 2]
    geom = RobotGeometry(n=8, l=0.07, d=0.01, psi=psi)
    mp, inv = make_clarke_matrix(geom)
    np.testing.assert_allclose(mp @ inv, np.eye(2), atol=1e-12)


@pytest.mark.parametrize(
    "kwargs, fragment",
    [
        (dict(n=2, l=0.07, d=0.01), "n must be"),
        (dict(n=4, l=0.0, d=0.01), "segment length"),
        (dict(n=4, l=0.07, d=-1.0), "joint distance"),
        (dict(n=4, l=0.07, d=0.01, psi=[0, 1, 2]), "expected n"),
        (dict(n=3, l=0.07, d=0.01, psi=[0, 1, 2]), "sum(cos psi) = 0"),
        (dict(n=4, l=0.07, d=0.01, psi=[0, 0.1, math.pi, math.pi + 0.1]), "sum(cos psi * sin psi) = 0"),
    ],
)
def test_geometry_validation(kwargs, fragment):
    with pytest.raises(GeometryError, match=fragment.replace("(", r"\(").replace(")", r"\)").replace("*", r"\*")):
        RobotGeometry(**kwargs)


def test_joints_to_clarke_examples():
    g4 = RobotGeometry(n=4, l=0.07, d=0.01)
    np.testing.assert_allclose(joints_to_clarke([1e-3, 0, -1e-3, 0], g4), [1e-3, 0], atol=1e-18)
    np.testing.assert_array_equal(joints_to_clarke(np.zeros(4), g4), [0, 0])
    g3 = RobotGeometry(n=3, l=0.07, d=0.01)
    h = math.sqrt(3) / 2 * 1e-3
    np.testing.assert_allclose(joints_to_clarke([0, h, -h], g3), [0, 1e-3], atol=1e-15)


@pytest.mark.parametrize("n", [3, 5, 7, 12])
def test_encoder_matches_loop_oracle(n, rng):
    geom = RobotGeometry(n=n, l=0.07, d=0.01)
    rho = clarke_to_joints(rng.uniform(-0.02, 0.02, 2), geom)
    np.testing.assert_allclose(joints_to_clarke(rho, geom), encode_by_loop(rho, geom.psi), atol=1e-15)


def test_joints_to_clarke_errors():
    g4 = RobotGeometry(n=4, l=0.07, d=0.01)
    with pytest.raises(DimensionError):
        joints_to_clarke([0.0, 0.0, 0.0], g4)
    with pytest.raises(ConstraintError):
        joints_to_clarke([1e-3, 1e-3, 0, 0], g4)
    # unchecked encoding projects the violation away
    np.testing.assert_allclose(joints_to_clarke([1e-3, 1e-3, 0, 0], g4, check=False), [5e-4, 5e-4], atol=1e-18)


def test_clarke_to_joints_examples():
    g4 = RobotGeometry(n=4, l=0.07, d=0.01)
    np.testing.assert_allclose(clarke_to_joints([1, 0], g4), [1, 0, -1, 0], atol=1e-15)
    g3 = RobotGeometry(n=3, l=0.07, d=0.01)
    np.testing.assert_allclose(clarke_to_joints([1, 0], g3), [1, -0.5, -0.5], atol=1e-15)
    np.testing.assert_array_equal(clarke_to_joints([0, 0], g3), np.zeros(3))


def test_modulus_argument_examples():
    mod, arg = clarke_modulus_argument([3e-3, 4e-3])
    assert mod == pytest.approx(5e-3, abs=1e-15)
    assert arg == pytest.approx(math.atan2(4, 3), abs=1e-12)
    assert arg == pytest.approx(0.92730, abs=1e-5)
    assert clarke_modulus_argument([0.007, 0]) == (0.007, 0.0)
    assert clarke_modulus_argument([0.0, 0.0]) == (0.0, 0.0)
    # argument is in [-pi, pi)
    assert clarke_modulus_argument([-1.0, 0.0])[1] == -math.pi


def test_modulus_identity_n4_example():
    g4 = RobotGeometry(n=4, l=0.07, d=0.01)
    rho = np.array([1.0, 0, -1.0, 0])
    mod, _ = clarke_modulus_argument(joints_to_clarke(rho, g4))
    assert mod == pytest.approx(math.sqrt(2 / 4) * np.linalg.norm(rho), abs=1e-12)
    assert mod == pytest.approx(1.0, abs=1e-12)


def test_arc_to_clarke_examples(demo_geometry):
    np.testing.assert_allclose(arc_to_clarke(ArcParameters(10.0, 0.0, demo_geometry.l), demo_geometry), [0.007, 0], atol=1e-15)
    np.testing.assert_array_equal(arc_to_clarke(ArcParameters(0.0, 1.3, demo_geometry.l), demo_geometry), [0.0, 0.0])
    arc = ArcParameters.from_bending_angle(2 * math.pi, math.pi / 2, demo_geometry.l)
    np.testing.assert_allclose(arc_to_clarke(arc, demo_geometry), [0, 0.06283185307179587], atol=1e-15)


def test_clarke_to_arc_examples(demo_geometry):
    arc = clarke_to_arc([0.007, 0], demo_geometry)
    assert arc.kappa == pytest.approx(10.0, rel=1e-12)
    assert arc.theta == 0.0
    assert arc.phi == pytest.approx(0.7, rel=1e-12)
    straight = clarke_to_arc([0, 0], demo_geometry)
    assert (straight.kappa, straight.phi, straight.theta) == (0.0, 0.0, 0.0)
    up = clarke_to_arc([0, 0.007], demo_geometry)
    assert up.theta == pytest.approx(math.pi / 2, abs=1e-15)
    assert up.phi == pytest.approx(0.7, rel=1e-12)


def test_phi_is_l_times_kappa(demo_geometry):
    arc = clarke_to_arc([0.003, -0.011], demo_geometry)
    assert arc.phi == demo_geometry.l * arc.kappa


def test_interop_examples():
    g4 = RobotGeometry(n=4, l=0.07, d=0.01)
    g3 = RobotGeometry(n=3, l=0.07, d=0.01)
    np.testing.assert_allclose(interop_transfer([1e-3, 0, -1e-3, 0], g4, g3), [1e-3, -5e-4, -5e-4], atol=1e-15)
    rho = clarke_to_joints([2e-3, -1e-3], g4)
    np.testing.assert_allclose(interop_transfer(rho, g4, g4), rho, atol=1e-15)
    np.testing.assert_array_equal(interop_transfer(np.zeros(4), g4, g3), np.zeros(3))
    with pytest.raises(DimensionError):
        interop_transfer(np.zeros(5), g4, g3)


@settings(max_examples=200, deadline=None)
@given(st.integers(3, 12), finite, finite)
def test_round_trip_and_constraint(n, re, im):
    geom = RobotGeometry(n=n, l=0.07, d=0.01)
    rho = clarke_to_joints([re, im], geom)
    assert abs(rho.sum()) <= 1e-12
    np.testing.assert_allclose(joints_to_clarke(rho, geom), [re, im], atol=1e-12)
    mod, _ = clarke_modulus_argument(np.array([re, im]))
    assert math.sqrt(2 / n) * np.linalg.norm(rho) == pytest.approx(mod, abs=1e-12)
    arc = clarke_to_arc([re, im], geom)
    np.testing.assert_allclose(arc_to_clarke(arc, geom), [re, im], atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(4, 12), st.lists(finite, min_size=12, max_size=12))
def test_projection_idempotent(n, values):
    geom = RobotGeometry(n=n, l=0.07, d=0.01)
    q = np.array(values[:n])
    q -= q.mean()
    once = clarke_to_joints(joints_to_clarke(q, geom), geom)
    twice = clarke_to_joints(joints_to_clarke(once, geom), geom)
    np.testing.assert_allclose(twice, once, atol=1e-12)
    assert abs(once.sum()) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 12), finite, finite, finite, finite, finite, finite)
def test_linearity(n, a, b, r1, i1, r2, i2):
    geom = RobotGeometry(n=n, l=0.07, d=0.01)
    q1 = clarke_to_joints([r1, i1], geom)
    q2 = clarke_to_joints([r2, i2], geom)
    lhs = joints_to_clarke(a * q1 + b * q2, geom)
    rhs = a * joints_to_clarke(q1, geom) + b * joints_to_clarke(q2, geom)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_stacked_inputs(demo_geometry, rng):
    c = rng.uniform(-0.01, 0.01, (7, 2))
    rho = clarke_to_joints(c, demo_geometry)
    assert rho.shape == (7, 5)
    np.testing.assert_allclose(joints_to_clarke(rho, demo_geometry), c, atol=1e-15)
    mod, arg = clarke_modulus_argument(c)
    assert mod.shape == arg.shape == (7,)
