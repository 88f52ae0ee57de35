import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polcombine.errors import DomainError
from polcombine.geometry import (
    TABLE1_RX,
    TABLE1_TX,
    Attitude,
    GeodeticPosition,
    attitude_matrix,
    body_to_ground,
    elevation_angle,
    ground_distance,
    path_geometry,
)

import oracles

angles = st.floats(-180, 180, allow_nan=False)


def test_elevation_angle_trivial():
    assert elevation_angle(100.0, 100.0, 1000.0) == 0.0
    assert elevation_angle(1500.0, 500.0, 1000.0) == pytest.approx(math.pi / 4, abs=1e-15)


def test_elevation_angle_rejects_nonpositive_distance():
    with pytest.raises(DomainError):
        elevation_angle(10, 0, 0)
    with pytest.raises(DomainError):
        elevation_angle(10, 0, -5)


def test_elevation_angle_table1():
    d = ground_distance(TABLE1_TX, TABLE1_RX)
    dh = TABLE1_TX.altitude_m - TABLE1_RX.altitude_m
    assert dh == pytest.approx(711.0984, abs=1e-9)
    # atan of the central-angle oracle distance, computed separately
    assert elevation_angle(dh, 0.0, d) == pytest.approx(0.014280756732, abs=1e-11)


@given(st.floats(-5000, 5000), st.floats(1, 1e6))
def test_elevation_angle_is_odd(dh, d):
    assert elevation_angle(dh, 0.0, d) == pytest.approx(-elevation_angle(-dh, 0.0, d), abs=1e-15)


def test_ground_distance_examples():
    p = GeodeticPosition(12.3, -45.6, 100.0)
    assert ground_distance(p, p) == 0.0
    one_deg = ground_distance(GeodeticPosition(0, 0), GeodeticPosition(1, 0))
    assert one_deg == pytest.approx(111194.926645, abs=1e-5)
    assert ground_distance(TABLE1_TX, TABLE1_RX) == pytest.approx(49790.782956, abs=1e-5)


@settings(max_examples=200)
@given(st.floats(-90, 90), st.floats(-180, 180), st.floats(-90, 90), st.floats(-180, 180))
def test_ground_distance_matches_central_angle_oracle(la1, lo1, la2, lo2):
    got = ground_distance(GeodeticPosition(la1, lo1), GeodeticPosition(la2, lo2))
    assert got == pytest.approx(oracles.central_angle_distance(la1, lo1, la2, lo2), abs=1e-4)


def test_antipodal_distance():
    d = ground_distance(GeodeticPosition(0, 0), GeodeticPosition(0, 180))
    assert d == pytest.approx(math.pi * 6_371_000.0, rel=1e-12)


def test_position_validation():
    with pytest.raises(DomainError):
        GeodeticPosition(91, 0)
    with pytest.raises(DomainError):
        GeodeticPosition(0, 181)
    with pytest.raises(DomainError):
        GeodeticPosition(0, 0, float("inf"))


def test_attitude_normalization():
    att = Attitude(190.0, -180.0, 540.0)
    assert (att.yaw_deg, att.pitch_deg, att.roll_deg) == (-170.0, 180.0, 180.0)
    with pytest.raises(DomainError):
        Attitude(float("nan"), 0, 0)


def test_body_to_ground_examples():
    v = np.array([0.3, -1.2, 2.0])
    np.testing.assert_array_equal(body_to_ground(Attitude(), v), v)
    np.testing.assert_allclose(body_to_ground(Attitude(90, 0, 0), [1, 0, 0]), [0, 1, 0], atol=1e-15)


def test_rotation_order_is_z_x_y():
    # roll first (about y), then pitch (about x), then yaw (about z)
    v = body_to_ground(Attitude(90, 90, 0), [0, 0, 1])
    # Rx(90) z -> -y, Rz(90) -y -> x
    np.testing.assert_allclose(v, [1, 0, 0], atol=1e-15)


def test_rotations_orthonormal():
    rng = np.random.default_rng(1)
    for yaw, pitch, roll in rng.uniform(-180, 180, size=(1000, 3)):
        r = attitude_matrix(Attitude(yaw, pitch, roll))
        np.testing.assert_allclose(r.T @ r, np.eye(3), atol=1e-12)


@given(angles, angles, angles, st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=3))
def test_body_to_ground_preserves_norm(yaw, pitch, roll, v):
    out = body_to_ground(Attitude(yaw, pitch, roll), v)
    assert np.linalg.norm(out) == pytest.approx(np.linalg.norm(v), rel=1e-12, abs=1e-12)


def test_two_ray_degenerate_and_symmetric():
    g = path_geometry(1000.0, 50.0, 0.0)
    assert g.refl_length == g.los_length
    assert g.delay_diff_s == 0.0
    g = path_geometry(1000.0, 30.0, 30.0)
    assert g.refl_length == pytest.approx(math.sqrt(1000.0 ** 2 + 4 * 30.0 ** 2), rel=1e-15)
    assert g.theta_e == 0.0


def test_two_ray_rejects_bad_inputs():
    for args in ((0.0, 10.0, 10.0), (100.0, 0.0, 10.0), (100.0, 10.0, -1.0)):
        with pytest.raises(DomainError):
            path_geometry(*args)


def test_two_ray_table1_delay():
    d = ground_distance(TABLE1_TX, TABLE1_RX)
    h_t, h_r = 711.0984 + 10.0, 10.0
    g = path_geometry(d, h_t, h_r)
    # frozen from the specular-point oracle (tests/oracles.py)
    assert g.delay_diff_s == pytest.approx(9.660716098934e-10, rel=1e-9)
    refl = oracles.reflected_length_via_specular_point(d, h_t, h_r)
    assert g.refl_length == pytest.approx(refl, rel=1e-13)


@settings(max_examples=200)
@given(st.floats(1.0, 1e5), st.floats(0.1, 1e4), st.floats(0.0, 1e3), angles, angles, angles)
def test_two_ray_invariants(d, h_t, h_r, yaw, pitch, roll):
    g = path_geometry(d, h_t, h_r, Attitude(yaw, pitch, roll))
    assert g.refl_length >= g.los_length
    assert g.delay_diff_s >= 0
    for v in (g.los_departure, g.refl_departure, g.refl_arrival, g.los_departure_body,
              g.refl_departure_body, g.los_arrival_rx, g.refl_arrival_rx):
        assert abs(np.linalg.norm(v) - 1) < 1e-12
    # rotating into the body frame keeps the angle between the two departures
    assert g.los_departure_body @ g.refl_departure_body == pytest.approx(
        g.los_departure @ g.refl_departure, abs=1e-12
    )
    assert g.grazing_angle == pytest.approx(math.atan((h_t + h_r) / d), rel=1e-14)


def test_los_arrives_along_x_prime():
    g = path_geometry(20_000.0, 800.0, 15.0)
    np.testing.assert_allclose(g.los_arrival_rx, [1, 0, 0], atol=1e-15)
