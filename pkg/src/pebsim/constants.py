"""Physical constants used across the simulator.

Values are CODATA / IERS conventional; the speed of light and Boltzmann
constant are exact by definition.
"""

SPEED_OF_LIGHT = 299_792_458.0
"""Speed of light in vacuum, m/s (exact)."""

EARTH_RADIUS_M = 6_371_000.0
"""Mean Earth radius, m."""

EARTH_MU_M3_S2 = 3.986004418e14
"""Standard gravitational parameter of Earth, m^3/s^2."""

BOLTZMANN_J_PER_K = 1.380649e-23
"""Boltzmann constant, J/K (exact)."""
