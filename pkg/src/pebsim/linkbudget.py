"""Deterministic link budgets: spreading loss, penetration loss, noise.

Amplitudes are linear field ratios relative to a 1 W reference, so a
budget whose gain list contains the transmit power (in dB re 1 W) yields
the received signal amplitude in sqrt-watts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .constants import BOLTZMANN_J_PER_K, SPEED_OF_LIGHT
from .errors import InvalidInput, MissingBuildingClass

DEFAULT_O2I_LOSS_DB = 20.0


def dbm_to_watts(power_dbm: float) -> float:
    """dBm to watts; -inf maps to 0 W."""
    if power_dbm == float("-inf"):
        return 0.0
    return 10.0 ** ((power_dbm - 30.0) / 10.0)


def watts_to_dbm(power_w: float) -> float:
    if power_w <= 0:
        raise InvalidInput("power must be positive to express in dBm")
    return 10.0 * math.log10(power_w) + 30.0


def free_space_path_loss(distance_m: float, carrier_hz: float) -> float:
    """Free-space path loss 20*log10(4 pi d f / c), dB.

    Raises
    ------
    InvalidInput
        If distance or frequency is non-positive.
    """
    if distance_m <= 0:
        raise InvalidInput(f"distance must be positive, got {distance_m}")
    if carrier_hz <= 0:
        raise InvalidInput(f"carrier frequency must be positive, got {carrier_hz}")
    return 20.0 * math.log10(4.0 * math.pi * distance_m * carrier_hz / SPEED_OF_LIGHT)


def noise_power_per_subcarrier(
    subcarrier_spacing_hz: float,
    noise_figure_db: float = 7.0,
    antenna_temperature_k: float = 290.0,
) -> float:
    """Thermal noise power in one subcarrier band, watts: k_B T B NF."""
    if subcarrier_spacing_hz <= 0:
        raise InvalidInput("subcarrier spacing must be positive")
    if antenna_temperature_k <= 0:
        raise InvalidInput("antenna temperature must be positive")
    return (
        BOLTZMANN_J_PER_K
        * antenna_temperature_k
        * subcarrier_spacing_hz
        * 10.0 ** (noise_figure_db / 10.0)
    )


@dataclass(frozen=True)
class BudgetConfig:
    """Scenario-wide link budget settings."""

    tx_power_dbm: float = 55.0
    sat_antenna_gain_dbi: float = 0.0
    noise_figure_db: float = 7.0
    antenna_temperature_k: float = 290.0
    polarization_loss_db: float = 0.0
    o2i_loss_db: dict = field(default_factory=lambda: {"default": DEFAULT_O2I_LOSS_DB})

    def __post_init__(self):
        for cls, loss in self.o2i_loss_db.items():
            if loss < 0:
                raise InvalidInput(f"O2I loss for class {cls!r} must be >= 0")

    @property
    def tx_power_w(self) -> float:
        return dbm_to_watts(self.tx_power_dbm)


def o2i_penetration_loss(
    indoor: bool, building_class: str = "default", config: BudgetConfig | None = None
) -> float:
    """Outdoor-to-indoor penetration loss, dB. Zero for outdoor users."""
    if not indoor:
        return 0.0
    table = (config or BudgetConfig()).o2i_loss_db
    if building_class not in table:
        raise MissingBuildingClass(f"no O2I loss configured for class {building_class!r}")
    return float(table[building_class])


@dataclass(frozen=True)
class PathBudget:
    """Audited budget of one propagation path.

    The linear amplitude must equal the dB aggregate within 1e-9 dB.
    """

    fspl_db: tuple
    gains_db: tuple
    o2i_db: float
    rx_amplitude_linear: float

    def __post_init__(self):
        agg = sum(self.gains_db) - sum(self.fspl_db) - self.o2i_db
        if self.rx_amplitude_linear > 0:
            back = 20.0 * math.log10(self.rx_amplitude_linear)
            if abs(back - agg) > 1e-9:
                raise InvalidInput(
                    f"budget inconsistent: amplitude {back:.12f} dB vs aggregate {agg:.12f} dB"
                )

    @property
    def aggregate_db(self) -> float:
        return sum(self.gains_db) - sum(self.fspl_db) - self.o2i_db


def path_amplitude(legs, gains_db=(), o2i_db: float = 0.0) -> PathBudget:
    """Budget for a path made of free-space legs plus flat gains/losses.

    Parameters
    ----------
    legs : iterable of (distance_m, carrier_hz)
        Free-space legs traversed in sequence; their FSPL multiplies.
    gains_db : iterable of float
        Flat gains in dB (transmit power re 1 W, antenna gains,
        negated polarization loss, ...).
    o2i_db : float
        Penetration loss, dB.

    Returns
    -------
    PathBudget
        With `rx_amplitude_linear` = 10^(aggregate_db / 20).
    """
    fspl = tuple(free_space_path_loss(d, f) for d, f in legs)
    gains = tuple(float(g) for g in gains_db)
    agg = sum(gains) - sum(fspl) - o2i_db
    amp = 10.0 ** (agg / 20.0)
    return PathBudget(fspl_db=fspl, gains_db=gains, o2i_db=o2i_db, rx_amplitude_linear=amp)
