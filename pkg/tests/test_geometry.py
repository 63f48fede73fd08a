"""Vector geometry: directions, delays, Doppler, frames, and Jacobians."""

import numpy as np
import pytest

from pebsim.constants import SPEED_OF_LIGHT
from pebsim.errors import DegenerateGeometry, GimbalWarning, InvalidInput
from pebsim.geometry import (
    AngleTuple,
    angles_from_direction,
    as_point,
    departure_angles,
    direction_from_angles,
    doppler_shift,
    los_direction,
    orientation_frame_from_boresight,
    position_jacobians,
    propagation_delay,
    validate_orientation_frame,
)


def test_as_point_rejects_bad_shapes_and_nonfinite():
    with pytest.raises(InvalidInput):
        as_point([1.0, 2.0])
    with pytest.raises(InvalidInput):
        as_point([[1.0, 2.0, 3.0]])
    with pytest.raises(InvalidInput):
        as_point([1.0, np.nan, 3.0])


def test_los_direction_is_unit_and_points_at_target():
    u = los_direction([0.0, 0.0, 0.0], [3.0, 4.0, 0.0])
    np.testing.assert_allclose(u, [0.6, 0.8, 0.0], rtol=0, atol=1e-15)
    assert np.isclose(np.linalg.norm(u), 1.0, rtol=1e-14)


def test_los_direction_degenerate_pair_raises():
    with pytest.raises(DegenerateGeometry):
        los_direction([1.0, 1.0, 1.0], [1.0, 1.0, 1.0 + 1e-12])


def test_propagation_delay_frozen_600km():
    # 600e3 / 299792458 evaluated in extended precision
    tau = propagation_delay([0.0, 0.0, 0.0], [0.0, 0.0, 600.0e3])
    assert np.isclose(tau, 2.0013845711889123e-3, rtol=1e-12)


def test_propagation_delay_degenerate_raises():
    with pytest.raises(DegenerateGeometry):
        propagation_delay([0.0, 0.0, 0.0], [0.0, 0.0, 0.0])


def test_doppler_sign_convention_approach_positive():
    # radial approach at 7561.8 m/s on a 28 GHz carrier:
    # nu = fc/c * v = 28e9 * 7561.8 / 299792458
    sat = [0.0, 0.0, 600.0e3]
    user = [0.0, 0.0, 0.0]
    vel = [0.0, 0.0, -7561.8]
    nu = doppler_shift(sat, vel, user, 28.0e9)
    assert np.isclose(nu, 706256.5930194281, rtol=1e-12)
    assert doppler_shift(sat, [0.0, 0.0, 7561.8], user, 28.0e9) < 0
    assert np.isclose(doppler_shift(sat, [100.0, 0.0, 0.0], user, 28.0e9), 0.0, atol=1e-12)


def test_doppler_requires_positive_carrier():
    with pytest.raises(InvalidInput):
        doppler_shift([0.0, 0.0, 1.0e3], [0.0, 0.0, -1.0], [0.0, 0.0, 0.0], 0.0)


def test_angle_direction_roundtrip():
    rng = np.random.default_rng(3)
    for _ in range(200):
        v = rng.standard_normal(3)
        v /= np.linalg.norm(v)
        if abs(v[2]) > 0.999:
            continue
        ang = angles_from_direction(v)
        assert -np.pi < ang.azimuth <= np.pi
        assert -np.pi / 2 <= ang.elevation <= np.pi / 2
        np.testing.assert_allclose(direction_from_angles(ang), v, atol=1e-12)


def test_angles_at_boresight_pole_warn_and_pin_azimuth():
    with pytest.warns(GimbalWarning):
        ang = angles_from_direction(np.array([0.0, 0.0, 1.0]))
    assert ang.azimuth == 0.0
    assert np.isclose(ang.elevation, np.pi / 2)


def test_departure_angles_identity_frame_hand_case():
    ang = departure_angles([0.0, 0.0, 0.0], np.eye(3), [1.0, 1.0, 0.0])
    assert np.isclose(ang.azimuth, np.pi / 4, rtol=1e-12)
    assert np.isclose(ang.elevation, 0.0, atol=1e-12)


def test_validate_orientation_frame_contracts():
    validate_orientation_frame(np.eye(3))
    with pytest.raises(InvalidInput):
        validate_orientation_frame(np.eye(3) * 1.001)
    left_handed = np.diag([1.0, 1.0, -1.0])
    with pytest.raises(InvalidInput):
        validate_orientation_frame(left_handed)
    with pytest.raises(InvalidInput):
        validate_orientation_frame(np.eye(2))


def test_orientation_frame_from_boresight_properties():
    rng = np.random.default_rng(11)
    for _ in range(50):
        b = rng.standard_normal(3)
        if np.linalg.norm(b) < 1e-3:
            continue
        frame = orientation_frame_from_boresight(b)
        validate_orientation_frame(frame)
        np.testing.assert_allclose(frame[:, 2], b / np.linalg.norm(b), atol=1e-12)
    # local x is horizontal (perpendicular to global up) for a wall normal
    frame = orientation_frame_from_boresight([-1.0, 0.0, 0.0])
    assert np.isclose(frame[2, 0], 0.0, atol=1e-15)
    # boresight parallel to the reference up falls back to the x reference
    frame = orientation_frame_from_boresight([0.0, 0.0, 1.0])
    validate_orientation_frame(frame)
    with pytest.raises(InvalidInput):
        orientation_frame_from_boresight([0.0, 0.0, 0.0])


def _fd_jacobians(sat_pos, sat_vel, frame, user, carrier_hz, ris_pos=None, ris_frame=None, h=1e-4):
    """Central differences of the raw observables, for comparison."""
    cols = {"delay": [], "az": [], "el": [], "dopp": []}
    for axis in range(3):
        vals = []
        for sign in (1.0, -1.0):
            p = np.array(user, dtype=float)
            p[axis] += sign * h
            if ris_pos is None:
                tau = propagation_delay(sat_pos, p)
                ang = departure_angles(sat_pos, frame, p)
                nu = doppler_shift(sat_pos, sat_vel, p, carrier_hz)
            else:
                tau = propagation_delay(sat_pos, ris_pos) + propagation_delay(ris_pos, p)
                ang = departure_angles(ris_pos, ris_frame, p)
                nu = 0.0
            vals.append((tau, ang.azimuth, ang.elevation, nu))
        for key, i in (("delay", 0), ("az", 1), ("el", 2), ("dopp", 3)):
            cols[key].append((vals[0][i] - vals[1][i]) / (2.0 * h))
    return {k: np.array(v) for k, v in cols.items()}


def test_position_jacobians_direct_path_match_finite_differences():
    # short range keeps the float64 finite differences themselves accurate
    sat = np.array([800.0, -300.0, 1200.0])
    vel = np.array([40.0, 25.0, -10.0])
    frame = orientation_frame_from_boresight([-0.4, 0.3, -0.8])
    user = np.array([12.0, -5.0, 1.5])
    jac = position_jacobians(sat, vel, frame, user, 28.0e9)
    fd = _fd_jacobians(sat, vel, frame, user, 28.0e9)
    np.testing.assert_allclose(jac.d_delay, fd["delay"], rtol=1e-6)
    np.testing.assert_allclose(jac.d_sat_azimuth, fd["az"], rtol=1e-5)
    np.testing.assert_allclose(jac.d_sat_elevation, fd["el"], rtol=1e-5)
    np.testing.assert_allclose(jac.d_doppler, fd["dopp"], rtol=1e-5)
    assert np.allclose(jac.d_ris_azimuth, 0.0)
    assert np.allclose(jac.d_ris_elevation, 0.0)
    # delay gradient magnitude is 1/c along the satellite-user direction
    assert np.isclose(np.linalg.norm(jac.d_delay), 1.0 / SPEED_OF_LIGHT, rtol=1e-12)


def test_position_jacobians_relayed_path_match_finite_differences():
    sat = np.array([500.0, 900.0, 2000.0])
    vel = np.array([70.0, 0.0, 0.0])
    sat_frame = orientation_frame_from_boresight([-0.2, -0.5, -0.8])
    ris = np.array([5.0, 0.0, 2.5])
    ris_frame = orientation_frame_from_boresight([-0.9, 0.1, 0.2])
    user = np.array([-9.0, 2.0, 1.5])
    jac = position_jacobians(sat, vel, sat_frame, user, 28.0e9, ris_pos=ris, ris_frame=ris_frame)
    fd = _fd_jacobians(sat, vel, sat_frame, user, 28.0e9, ris_pos=ris, ris_frame=ris_frame)
    np.testing.assert_allclose(jac.d_delay, fd["delay"], rtol=1e-6)
    np.testing.assert_allclose(jac.d_ris_azimuth, fd["az"], rtol=1e-5)
    np.testing.assert_allclose(jac.d_ris_elevation, fd["el"], rtol=1e-5)
    # the satellite leg does not move with the user
    assert np.allclose(jac.d_sat_azimuth, 0.0)
    assert np.allclose(jac.d_sat_elevation, 0.0)
    assert np.allclose(jac.d_doppler, 0.0)


def test_position_jacobians_warn_near_pole():
    frame = orientation_frame_from_boresight([0.0, 0.0, -1.0])
    with pytest.warns(GimbalWarning):
        position_jacobians(
            np.array([0.0, 0.0, 1.0e5]),
            np.array([10.0, 0.0, 0.0]),
            frame,
            np.array([1e-4, 0.0, 0.0]),
            28.0e9,
        )
