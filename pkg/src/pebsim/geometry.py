"""Vector geometry between satellites, reflecting surfaces, and users.

All positions live in a local east-north-up frame whose origin sits on the
ground at the scenario center. Directions are unit 3-vectors; orientation
frames are right-handed 3x3 matrices whose columns are the local x/y/z axes
expressed in global coordinates (boresight along local z).

Angle convention inside a frame: azimuth = atan2(y', x') in (-pi, pi],
elevation = asin(z') in [-pi/2, pi/2]. The boresight direction has
elevation +pi/2 and azimuth defined as 0.
"""

from __future__ import annotations

import warnings
from typing import NamedTuple

import numpy as np

from .constants import SPEED_OF_LIGHT
from .errors import DegenerateGeometry, GimbalWarning, InvalidInput

MIN_SEPARATION_M = 1e-9
GIMBAL_MARGIN_RAD = 1e-6


class AngleTuple(NamedTuple):
    """Azimuth/elevation pair, radians."""

    azimuth: float
    elevation: float


def as_point(value, name: str = "point") -> np.ndarray:
    """Coerce to a finite float64 3-vector."""
    arr = np.asarray(value, dtype=float)
    if arr.shape != (3,):
        raise InvalidInput(f"{name} must be a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} must be finite")
    return arr


def los_direction(origin, target) -> np.ndarray:
    """Unit vector pointing from `origin` toward `target`.

    Raises
    ------
    DegenerateGeometry
        If the points are closer than 1e-9 m.
    """
    origin = as_point(origin, "origin")
    target = as_point(target, "target")
    diff = target - origin
    dist = float(np.linalg.norm(diff))
    if dist < MIN_SEPARATION_M:
        raise DegenerateGeometry(f"points are {dist:.3e} m apart")
    return diff / dist


def propagation_delay(origin, target) -> float:
    """One-way free-space propagation delay in seconds."""
    origin = as_point(origin, "origin")
    target = as_point(target, "target")
    dist = float(np.linalg.norm(target - origin))
    if dist < MIN_SEPARATION_M:
        raise DegenerateGeometry(f"points are {dist:.3e} m apart")
    return dist / SPEED_OF_LIGHT


def doppler_shift(sat_pos, sat_vel, target, carrier_hz: float) -> float:
    """Doppler shift of the carrier observed at `target`, Hz.

    Sign convention: a satellite approaching the target produces a
    positive shift. Equivalently nu = -(fc/c) * d(range)/dt, which for
    u = los_direction(sat_pos, target) evaluates to (fc/c) * (v . u).
    """
    if carrier_hz <= 0:
        raise InvalidInput("carrier frequency must be positive")
    vel = as_point(sat_vel, "sat_vel")
    u = los_direction(sat_pos, target)
    return float(carrier_hz / SPEED_OF_LIGHT * np.dot(vel, u))


def direction_from_angles(angles: AngleTuple) -> np.ndarray:
    """Unit vector in frame coordinates from azimuth/elevation."""
    az, el = float(angles[0]), float(angles[1])
    ce = np.cos(el)
    return np.array([ce * np.cos(az), ce * np.sin(az), np.sin(el)])


def angles_from_direction(u_local: np.ndarray) -> AngleTuple:
    """Azimuth/elevation of a unit vector expressed in frame coordinates."""
    x, y, z = float(u_local[0]), float(u_local[1]), float(u_local[2])
    el = float(np.arcsin(np.clip(z, -1.0, 1.0)))
    az = float(np.arctan2(y, x))
    if az <= -np.pi:  # normalize to (-pi, pi]
        az = np.pi
    if abs(el) > np.pi / 2 - GIMBAL_MARGIN_RAD:
        warnings.warn(
            "departure direction within 1e-6 rad of boresight pole; "
            "azimuth is ill-conditioned",
            GimbalWarning,
            stacklevel=2,
        )
        if abs(z) >= 1.0 or (x == 0.0 and y == 0.0):
            az = 0.0
    return AngleTuple(az, el)


def departure_angles(src, src_frame: np.ndarray, dst) -> AngleTuple:
    """Azimuth/elevation of `dst` as seen from `src` in `src`'s frame.

    Parameters
    ----------
    src : (3,) array
        Anchor position, global coordinates.
    src_frame : (3, 3) array
        Orientation frame of the anchor; columns are local axes in
        global coordinates, boresight = third column.
    dst : (3,) array
        Target position, global coordinates.

    Returns
    -------
    AngleTuple
        Azimuth in (-pi, pi], elevation in [-pi/2, pi/2]. A
        GimbalWarning is emitted when |elevation| > pi/2 - 1e-6.
    """
    u = los_direction(src, dst)
    u_local = np.asarray(src_frame, dtype=float).T @ u
    return angles_from_direction(u_local)


def validate_orientation_frame(frame, tol: float = 1e-10) -> np.ndarray:
    """Check a 3x3 matrix is right-handed orthonormal within `tol`."""
    mat = np.asarray(frame, dtype=float)
    if mat.shape != (3, 3):
        raise InvalidInput(f"orientation frame must be 3x3, got {mat.shape}")
    err = float(np.max(np.abs(mat.T @ mat - np.eye(3))))
    if err > tol:
        raise InvalidInput(f"frame not orthonormal (deviation {err:.3e})")
    if abs(float(np.linalg.det(mat)) - 1.0) > tol:
        raise InvalidInput("frame must be right-handed (det +1)")
    return mat


def orientation_frame_from_boresight(boresight, reference_up=(0.0, 0.0, 1.0)) -> np.ndarray:
    """Build a deterministic right-handed frame with local z along `boresight`.

    The local x axis is chosen perpendicular to the reference up vector
    (horizontal for wall-mounted panels); when the boresight is nearly
    parallel to the reference, global x is used as reference instead.
    """
    z_axis = as_point(boresight, "boresight")
    norm = float(np.linalg.norm(z_axis))
    if norm < MIN_SEPARATION_M:
        raise InvalidInput("boresight must be a nonzero vector")
    z_axis = z_axis / norm
    ref = as_point(reference_up, "reference_up")
    if abs(float(np.dot(ref, z_axis))) > 0.99 * float(np.linalg.norm(ref)):
        ref = np.array([1.0, 0.0, 0.0])
    x_axis = np.cross(ref, z_axis)
    x_axis = x_axis / np.linalg.norm(x_axis)
    y_axis = np.cross(z_axis, x_axis)
    return np.column_stack([x_axis, y_axis, z_axis])


def _angle_gradients(anchor, frame, user):
    """Gradients of the anchor-frame departure angles w.r.t. user position.

    Returns (d_az/dp, d_el/dp), each a (3,) vector. Chain:
    u = (p - a)/r, u' = R^T u, az = atan2(u'_y, u'_x), el = asin(u'_z);
    du/dp = (I - u u^T)/r is the tangent projector, so the unconstrained
    gradients of atan2/asin compose correctly.
    """
    anchor = as_point(anchor, "anchor")
    user = as_point(user, "user")
    diff = user - anchor
    r = float(np.linalg.norm(diff))
    if r < MIN_SEPARATION_M:
        raise DegenerateGeometry("anchor and user coincide")
    u = diff / r
    R = np.asarray(frame, dtype=float)
    du_dp = (np.eye(3) - np.outer(u, u)) / r
    m = R.T @ du_dp  # rows: du'_k / dp
    u_local = R.T @ u
    x, y, z = u_local
    rho2 = x * x + y * y
    if rho2 < GIMBAL_MARGIN_RAD**2:
        warnings.warn(
            "angle gradients requested within 1e-6 rad of boresight pole",
            GimbalWarning,
            stacklevel=2,
        )
    d_az = (-y * m[0] + x * m[1]) / max(rho2, np.finfo(float).tiny)
    cos_el = np.sqrt(max(1.0 - z * z, np.finfo(float).tiny))
    d_el = m[2] / cos_el
    return d_az, d_el


class PathJacobians(NamedTuple):
    """Derivatives of one path's observables w.r.t. user position (3,).

    Entries that do not apply to the path kind are zero vectors: a
    relayed path has no Doppler and its satellite-side departure angles
    are fixed by the satellite-surface geometry; a direct path has no
    surface-side angles.
    """

    d_delay: np.ndarray
    d_sat_azimuth: np.ndarray
    d_sat_elevation: np.ndarray
    d_ris_azimuth: np.ndarray
    d_ris_elevation: np.ndarray
    d_doppler: np.ndarray


def position_jacobians(
    sat_pos,
    sat_vel,
    sat_frame,
    user,
    carrier_hz: float,
    ris_pos=None,
    ris_frame=None,
) -> PathJacobians:
    """Observable gradients w.r.t. user position for one propagation path.

    Direct path (`ris_pos` is None): delay gradient u^T/c with u pointing
    satellite -> user; satellite departure-angle gradients; Doppler
    gradient (fc/c) (I - u u^T) v / r.

    Relayed path: delay gradient u^T/c with u pointing surface -> user;
    surface departure-angle gradients; zero satellite-angle and Doppler
    gradients (the satellite leg does not move with the user).
    """
    zero = np.zeros(3)
    if ris_pos is None:
        u = los_direction(sat_pos, user)
        d_delay = u / SPEED_OF_LIGHT
        d_az, d_el = _angle_gradients(sat_pos, sat_frame, user)
        r = float(np.linalg.norm(as_point(user) - as_point(sat_pos)))
        vel = as_point(sat_vel, "sat_vel")
        d_dopp = (carrier_hz / SPEED_OF_LIGHT) * ((vel - np.dot(vel, u) * u) / r)
        return PathJacobians(d_delay, d_az, d_el, zero, zero, d_dopp)
    u = los_direction(ris_pos, user)
    d_delay = u / SPEED_OF_LIGHT
    d_az, d_el = _angle_gradients(ris_pos, ris_frame, user)
    return PathJacobians(d_delay, zero, zero, d_az, d_el, zero)
