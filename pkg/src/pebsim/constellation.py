"""Random satellite constellations on a spherical shell above a local origin.

Satellites are placed on the sphere of radius (earth radius + altitude)
around the Earth center, which sits at (0, 0, -R_e) in the local frame.
Azimuth and elevation seen from the origin are drawn uniformly (elevation
above a visibility mask), the speed is the circular orbital speed at that
altitude, and the velocity direction is uniform in the local tangent plane
of the orbital sphere. Each satellite consumes exactly three uniform
draws, so a draw of k satellites is a prefix of a draw of k+1 with the
same seed (nested draws).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import EARTH_MU_M3_S2, EARTH_RADIUS_M
from .errors import InvalidAltitude, InvalidMask
from .geometry import orientation_frame_from_boresight

EARTH_CENTER = np.array([0.0, 0.0, -EARTH_RADIUS_M])

DEFAULT_ELEVATION_MASK_RAD = np.deg2rad(10.0)


def circular_orbital_speed(altitude_m: float) -> float:
    """Speed of a circular orbit at the given altitude, m/s."""
    if altitude_m <= 0:
        raise InvalidAltitude(f"altitude must be positive, got {altitude_m}")
    return float(np.sqrt(EARTH_MU_M3_S2 / (EARTH_RADIUS_M + altitude_m)))


@dataclass(frozen=True)
class ConstellationSpec:
    """Parameters of one constellation draw."""

    count: int
    altitude_m: float
    elevation_mask_rad: float = DEFAULT_ELEVATION_MASK_RAD
    rng_seed: int = 0

    def __post_init__(self):
        if self.count < 1:
            raise InvalidMask(f"count must be >= 1, got {self.count}")
        if self.altitude_m <= 0:
            raise InvalidAltitude(f"altitude must be positive, got {self.altitude_m}")
        if not 0.0 <= self.elevation_mask_rad < np.pi / 2:
            raise InvalidMask(
                f"elevation mask must lie in [0, pi/2), got {self.elevation_mask_rad}"
            )


@dataclass(frozen=True)
class SatelliteState:
    """One satellite: position, velocity, and transmit-array orientation.

    The array frame's boresight (local z) points at the scenario origin;
    the panel is a rows x cols grid at half-wavelength spacing.
    """

    satellite_id: int
    position_m: np.ndarray
    velocity_mps: np.ndarray
    array_frame: np.ndarray
    array_rows: int = 8
    array_cols: int = 8

    @property
    def n_elements(self) -> int:
        return self.array_rows * self.array_cols


def slant_range(elevation_rad: float, altitude_m: float) -> float:
    """Distance from the origin to the orbital sphere along a given elevation."""
    re = EARTH_RADIUS_M
    rs = re + altitude_m
    s = np.sin(elevation_rad)
    return float(-re * s + np.sqrt(rs * rs - re * re * (1.0 - s * s)))


def _tangent_basis(radial: np.ndarray):
    ref = np.array([0.0, 0.0, 1.0])
    if abs(float(np.dot(ref, radial))) > 0.99:
        ref = np.array([1.0, 0.0, 0.0])
    e1 = np.cross(ref, radial)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(radial, e1)
    return e1, e2


def draw_constellation(spec: ConstellationSpec, array_rows: int = 8, array_cols: int = 8):
    """Draw `spec.count` satellites; deterministic in `spec.rng_seed`.

    Returns
    -------
    list[SatelliteState]
    """
    rng = np.random.default_rng(np.random.SeedSequence(spec.rng_seed))
    speed = circular_orbital_speed(spec.altitude_m)
    sats = []
    for idx in range(spec.count):
        az = rng.uniform(0.0, 2.0 * np.pi)
        el = rng.uniform(spec.elevation_mask_rad, np.pi / 2)
        psi = rng.uniform(0.0, 2.0 * np.pi)
        u = np.array([np.cos(el) * np.cos(az), np.cos(el) * np.sin(az), np.sin(el)])
        pos = slant_range(el, spec.altitude_m) * u
        radial = pos - EARTH_CENTER
        radial /= np.linalg.norm(radial)
        e1, e2 = _tangent_basis(radial)
        vel = speed * (np.cos(psi) * e1 + np.sin(psi) * e2)
        frame = orientation_frame_from_boresight(-pos)
        sats.append(
            SatelliteState(
                satellite_id=idx,
                position_m=pos,
                velocity_mps=vel,
                array_frame=frame,
                array_rows=array_rows,
                array_cols=array_cols,
            )
        )
    return sats


def elevation_angle(sat_pos, ground_pos) -> float:
    """Elevation of a satellite above the local horizontal plane, radians."""
    diff = np.asarray(sat_pos, dtype=float) - np.asarray(ground_pos, dtype=float)
    u = diff / np.linalg.norm(diff)
    return float(np.arcsin(np.clip(u[2], -1.0, 1.0)))
