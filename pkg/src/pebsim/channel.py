"""Downlink OFDM observation model over direct and surface-relayed paths.

Observation mean for user position p, transmission t, subcarrier n:

    mu[t, n] = sum_p  g_p * B[p, t] * exp(-j 2 pi f_n tau_p) * exp(+j 2 pi nu_p t T)

where f_n = (n - (N-1)/2) * df is the baseband subcarrier frequency,
g_p is the path's complex gain treated by the estimator as a free
unknown (its true value is the unit-magnitude carrier phase
exp(-j 2 pi fc tau_p)), and B[p, t] is the known per-transmission
coefficient: link-budget amplitude, pilot scale, satellite beamforming
inner product, and for relayed paths the surface coefficient inner
product (branch amplitude, phase profile, amplifier gain). Putting the
amplitude in the known factor makes the Fisher information scale
linearly with transmit power and vanish with it; the position bound is
unaffected because rescaling a nuisance coordinate leaves the Schur
complement unchanged. The amplitude is a frozen constant, not a
function of the user position: all position information flows through
delays, Doppler, and departure angles. Geometry is frozen across
transmissions; Doppler appears only in the phase ramp of direct paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .constants import SPEED_OF_LIGHT
from .errors import BranchUnsupported, InvalidInput, InvalidScenario
from .geometry import (
    AngleTuple,
    PathJacobians,
    angles_from_direction,
    as_point,
    departure_angles,
    los_direction,
    position_jacobians,
    validate_orientation_frame,
)
from .linkbudget import BudgetConfig, PathBudget, o2i_penetration_loss, path_amplitude

RIS_MODES = ("reflect_only", "active_reflect", "star", "active_star")

REFLECT = "reflect"
REFRACT = "refract"


@dataclass(frozen=True)
class WaveformConfig:
    """OFDM downlink waveform parameters."""

    carrier_hz: float = 28.0e9
    bandwidth_hz: float = 300.0e6
    n_subcarriers: int = 3000
    n_transmissions: int = 5
    symbol_period_s: Optional[float] = None

    def __post_init__(self):
        if self.carrier_hz <= 0:
            raise InvalidInput("carrier frequency must be positive")
        if self.bandwidth_hz <= 0:
            raise InvalidInput("bandwidth must be positive")
        if self.n_subcarriers < 1:
            raise InvalidInput("need at least one subcarrier")
        if self.n_transmissions < 1:
            raise InvalidInput("need at least one transmission")
        if self.symbol_period_s is not None and self.symbol_period_s < 1.0 / self.subcarrier_spacing_hz:
            raise InvalidInput("symbol period must be >= 1 / subcarrier spacing")

    @property
    def subcarrier_spacing_hz(self) -> float:
        return self.bandwidth_hz / self.n_subcarriers

    @property
    def symbol_period(self) -> float:
        if self.symbol_period_s is not None:
            return self.symbol_period_s
        return 1.0 / self.subcarrier_spacing_hz

    def baseband_frequencies(self) -> np.ndarray:
        n = np.arange(self.n_subcarriers, dtype=float)
        return (n - (self.n_subcarriers - 1) / 2.0) * self.subcarrier_spacing_hz


@dataclass(frozen=True)
class RisPanel:
    """One reconfigurable surface panel.

    `phase_profiles` holds the unit-modulus element coefficients applied
    per transmission, shape (n_transmissions, rows*cols). `amplitude_gain`
    is the uniform amplifier gain (1.0 for passive modes); it is filled in
    when the scenario is realized because it depends on the incident
    satellite power.
    """

    panel_id: int
    position_m: np.ndarray
    frame: np.ndarray
    rows: int
    cols: int
    mode: str
    epsilon: float = 1.0
    supply_power_dbm: float = 0.0
    phase_profiles: Optional[np.ndarray] = None
    amplitude_gain: float = 1.0
    building_index: Optional[int] = None
    spacing_wavelengths: float = 0.5

    def __post_init__(self):
        if self.mode not in RIS_MODES:
            raise InvalidInput(f"unknown surface mode {self.mode!r}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise InvalidInput(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if self.rows < 1 or self.cols < 1:
            raise InvalidInput("panel grid must be at least 1x1")
        validate_orientation_frame(self.frame)
        if self.phase_profiles is not None:
            prof = np.asarray(self.phase_profiles)
            if prof.ndim != 2 or prof.shape[1] != self.n_elements:
                raise InvalidInput(
                    f"phase profiles must have shape (T, {self.n_elements}), got {prof.shape}"
                )
            if np.max(np.abs(np.abs(prof) - 1.0)) > 1e-12:
                raise InvalidInput("phase profile entries must be unit modulus")

    @property
    def n_elements(self) -> int:
        return self.rows * self.cols

    @property
    def is_active(self) -> bool:
        return self.mode in ("active_reflect", "active_star")

    @property
    def has_refract_branch(self) -> bool:
        return self.mode in ("star", "active_star")


def _grid_offsets(rows: int, cols: int):
    r = np.repeat(np.arange(rows, dtype=float), cols)
    c = np.tile(np.arange(cols, dtype=float), rows)
    return r, c


def array_response_from_direction(
    rows: int, cols: int, u_local: np.ndarray, spacing_wavelengths: float = 0.5
) -> np.ndarray:
    """Planar-array response for a unit direction in the array frame.

    Element (r, c) contributes phase 2 pi s (r * u_y' + c * u_x');
    elements are indexed row-major, rows stepping along the local y axis
    and columns along the local x axis. Only the in-plane components of
    the direction enter, so directions behind the panel (u_z' < 0) are
    handled naturally.
    """
    r, c = _grid_offsets(rows, cols)
    phase = 2.0 * np.pi * spacing_wavelengths * (r * u_local[1] + c * u_local[0])
    return np.exp(1j * phase)


def array_response(
    rows: int, cols: int, angles: AngleTuple, spacing_wavelengths: float = 0.5
) -> np.ndarray:
    """Planar-array response for given azimuth/elevation in the array frame.

    Returns
    -------
    (rows*cols,) complex ndarray
        Unit-modulus element responses; all ones at boresight.
    """
    az, el = float(angles[0]), float(angles[1])
    ce = math.cos(el)
    u_local = np.array([ce * math.cos(az), ce * math.sin(az), math.sin(el)])
    return array_response_from_direction(rows, cols, u_local, spacing_wavelengths)


def array_response_gradient(
    rows: int, cols: int, angles: AngleTuple, spacing_wavelengths: float = 0.5
):
    """Derivatives of the array response w.r.t. azimuth and elevation."""
    az, el = float(angles[0]), float(angles[1])
    a = array_response(rows, cols, AngleTuple(az, el), spacing_wavelengths)
    r, c = _grid_offsets(rows, cols)
    dux_daz = -math.cos(el) * math.sin(az)
    duy_daz = math.cos(el) * math.cos(az)
    dux_del = -math.sin(el) * math.cos(az)
    duy_del = -math.sin(el) * math.sin(az)
    scale = 2.0 * np.pi * spacing_wavelengths
    d_az = 1j * scale * (r * duy_daz + c * dux_daz) * a
    d_el = 1j * scale * (r * duy_del + c * dux_del) * a
    return d_az, d_el


def random_beamformer(length: int, rng: np.random.Generator) -> np.ndarray:
    """Unit-norm random-phase beamformer: entries exp(j phi)/sqrt(length)."""
    if length < 1:
        raise InvalidInput("beamformer length must be >= 1")
    phases = rng.uniform(0.0, 2.0 * np.pi, size=length)
    return np.exp(1j * phases) / math.sqrt(length)


def random_phase_profile(length: int, rng: np.random.Generator) -> np.ndarray:
    """Unit-modulus random element coefficients for a surface panel."""
    phases = rng.uniform(0.0, 2.0 * np.pi, size=length)
    return np.exp(1j * phases)


def active_gain(incident_power_w: float, supply_power_dbm: float) -> float:
    """Uniform per-element amplitude gain of an active surface.

    A = sqrt((P_incident + P_supply) / P_incident), so the re-radiated
    power equals the impinging power plus the supply power. P_incident
    is the total signal power impinging on the panel, aggregated over
    elements, for the strongest satellite leg.
    """
    if incident_power_w <= 0:
        raise InvalidInput("incident power must be positive")
    supply_w = 10.0 ** ((supply_power_dbm - 30.0) / 10.0) if supply_power_dbm != float("-inf") else 0.0
    return math.sqrt((incident_power_w + supply_w) / incident_power_w)


def star_coefficients(panel: RisPanel, branch: str, transmission: int) -> np.ndarray:
    """Element coefficients of one branch for one transmission.

    Reflected amplitude is epsilon, refracted sqrt(1 - epsilon^2), so the
    two branches split the (amplified) incident power as epsilon^2 to
    1 - epsilon^2. Panels without a refraction branch only reflect.
    """
    if branch not in (REFLECT, REFRACT):
        raise InvalidInput(f"unknown branch {branch!r}")
    if branch == REFRACT and not panel.has_refract_branch:
        raise BranchUnsupported(f"mode {panel.mode!r} has no refraction branch")
    if panel.phase_profiles is None:
        raise InvalidScenario("panel has no phase profiles assigned")
    if not 0 <= transmission < panel.phase_profiles.shape[0]:
        raise InvalidInput(f"transmission index {transmission} out of range")
    if branch == REFLECT:
        amp = panel.epsilon
    else:
        amp = math.sqrt(max(0.0, 1.0 - panel.epsilon**2))
    return amp * panel.amplitude_gain * panel.phase_profiles[transmission]


@dataclass(frozen=True)
class PropagationPath:
    """One resolved propagation path to the user."""

    kind: str  # "los" or "via_ris"
    satellite_id: int
    ris_id: Optional[int]
    delay_s: float
    sat_aod: AngleTuple
    ris_aod: Optional[AngleTuple]
    doppler_hz: Optional[float]
    complex_gain: complex
    budget: PathBudget
    jacobians: PathJacobians

    def __post_init__(self):
        if self.kind not in ("los", "via_ris"):
            raise InvalidInput(f"unknown path kind {self.kind!r}")
        if self.delay_s <= 0:
            raise InvalidInput("path delay must be positive")
        if self.kind == "via_ris" and self.doppler_hz is not None:
            raise InvalidInput("relayed paths carry no Doppler observable")
        if self.kind == "los" and self.ris_id is not None:
            raise InvalidInput("direct path cannot reference a surface")


@dataclass
class ChannelModel:
    """Realized observation model for one user position.

    Arrays are indexed by path p, transmission t, axis k:
    `gains` (P,), `beam` (P, T), `d_beam_dpos` (P, T, 3),
    `d_beam_dangles` (P, T, 2) (azimuth/elevation of the anchor whose
    bearing to the user varies: the satellite for direct paths, the
    panel for relayed ones), `d_delay_dpos` (P, 3),
    `d_doppler_dpos` (P, 3).

    `gains` holds the true values of the unknown per-path gains, which
    are unit-magnitude carrier phases; `beam` carries everything the
    estimator knows, including the link-budget amplitude. The physical
    path gain (amplitude times carrier phase) lives on each
    `PropagationPath.complex_gain`.

    The position gradient of the beam factor is chained through the
    unit direction vector (well conditioned arbitrarily close to
    boresight); the angle gradient uses the azimuth/elevation chart and
    backs the chain-rule consistency check.
    """

    waveform: WaveformConfig
    noise_power_w: float
    user_position: np.ndarray
    paths: list
    gains: np.ndarray
    beam: np.ndarray
    d_beam_dpos: np.ndarray
    d_beam_dangles: np.ndarray
    d_delay_dpos: np.ndarray
    d_doppler_dpos: np.ndarray
    clock_bias_unknown: bool = False
    pilot_phase: complex = 1.0 + 0.0j

    @property
    def n_paths(self) -> int:
        return len(self.paths)

    @property
    def n_unknowns(self) -> int:
        return 3 + (1 if self.clock_bias_unknown else 0) + 2 * self.n_paths

    def delays(self) -> np.ndarray:
        return np.array([p.delay_s for p in self.paths])

    def dopplers(self) -> np.ndarray:
        return np.array([p.doppler_hz or 0.0 for p in self.paths])

    def path_phasors(self) -> tuple[np.ndarray, np.ndarray]:
        """Delay phases (P, N) and Doppler-weighted beams (P, T)."""
        f = self.waveform.baseband_frequencies()
        delay_phase = np.exp(-2j * np.pi * np.outer(self.delays(), f))
        t = np.arange(self.waveform.n_transmissions, dtype=float)
        ramp = np.exp(
            2j * np.pi * np.outer(self.dopplers(), t * self.waveform.symbol_period)
        )
        return delay_phase, self.beam * ramp

    def observation_mean_grid(self) -> np.ndarray:
        """Mean observation over the full (T, N) grid."""
        delay_phase, beam_t = self.path_phasors()
        return np.einsum("p,pt,pn->tn", self.gains, beam_t, delay_phase)

    def observation_mean(self, transmission: int, subcarrier: int) -> complex:
        """Scalar mean observation for one (transmission, subcarrier)."""
        self._check_indices(transmission, subcarrier)
        f_n = self.waveform.baseband_frequencies()[subcarrier]
        total = 0.0 + 0.0j
        for p, path in enumerate(self.paths):
            nu = path.doppler_hz or 0.0
            phase = np.exp(-2j * np.pi * f_n * path.delay_s) * np.exp(
                2j * np.pi * nu * transmission * self.waveform.symbol_period
            )
            total += self.gains[p] * self.beam[p, transmission] * phase
        return complex(total)

    def observation_gradient(self, transmission: int, subcarrier: int) -> np.ndarray:
        """Gradient of the mean w.r.t. the unknown vector at one (t, n).

        Unknown ordering: [x, y, z, (clock bias,) Re g_0, Im g_0, ...].
        The position gradient chains through delay, Doppler, and the
        departure-direction dependence of the beam factors.
        """
        self._check_indices(transmission, subcarrier)
        f_n = self.waveform.baseband_frequencies()[subcarrier]
        t_s = transmission * self.waveform.symbol_period
        out = np.zeros(self.n_unknowns, dtype=complex)
        pos = np.zeros(3, dtype=complex)
        bias = 0.0 + 0.0j
        gain_rows = []
        for p, path in enumerate(self.paths):
            nu = path.doppler_hz or 0.0
            phase = np.exp(-2j * np.pi * f_n * path.delay_s) * np.exp(2j * np.pi * nu * t_s)
            z = self.beam[p, transmission] * phase
            pos += self.gains[p] * (
                z * (-2j * np.pi * f_n) * self.d_delay_dpos[p]
                + z * (2j * np.pi * t_s) * self.d_doppler_dpos[p]
                + phase * self.d_beam_dpos[p, transmission]
            )
            bias += self.gains[p] * z * (-2j * np.pi * f_n)
            gain_rows.extend([z, 1j * z])
        out[:3] = pos
        idx = 3
        if self.clock_bias_unknown:
            out[3] = bias
            idx = 4
        out[idx:] = gain_rows
        return out

    def _check_indices(self, transmission: int, subcarrier: int):
        if not 0 <= transmission < self.waveform.n_transmissions:
            raise InvalidInput(f"transmission index {transmission} out of range")
        if not 0 <= subcarrier < self.waveform.n_subcarriers:
            raise InvalidInput(f"subcarrier index {subcarrier} out of range")


def incident_panel_power(
    panel: RisPanel,
    satellites: Sequence,
    budget: BudgetConfig,
    carrier_hz: float,
) -> float:
    """Total signal power impinging on a panel from its strongest satellite leg.

    Aggregated over elements assuming unit average beamforming gain
    toward the panel (random beams have expected gain one).
    """
    best = 0.0
    for sat in satellites:
        d = float(np.linalg.norm(np.asarray(sat.position_m) - panel.position_m))
        fspl_db = 20.0 * math.log10(4.0 * math.pi * d * carrier_hz / SPEED_OF_LIGHT)
        p = budget.tx_power_w * 10.0 ** (-fspl_db / 10.0) * panel.n_elements
        best = max(best, p)
    return best


def build_channel_model(
    waveform: WaveformConfig,
    budget: BudgetConfig,
    satellites: Sequence,
    beamformers: Sequence[np.ndarray],
    user_position,
    user_indoor: bool = False,
    building_class: str = "default",
    served_panels: Sequence[tuple] = (),
    clock_bias_unknown: bool = False,
    pilot_phase: complex = 1.0 + 0.0j,
    noise_power_w: Optional[float] = None,
) -> ChannelModel:
    """Resolve every propagation path for one user and bundle the model.

    Parameters
    ----------
    satellites : sequence of SatelliteState
    beamformers : per satellite, (n_transmissions, n_elements) complex
        Unit-norm transmit beamformers, one per transmission.
    served_panels : sequence of (RisPanel, branch)
        Panels that relay to this user and through which branch.
        Panels must already carry phase profiles and amplifier gains.
    noise_power_w : float, optional
        Per-subcarrier noise power; derived from the budget when omitted.

    Notes
    -----
    A direct path to an indoor user always carries the configured O2I
    penetration loss. Relayed paths carry none: the refraction branch
    radiates on the interior side of its panel and the reflection branch
    serves outdoor users. A relay contributes only when the satellite
    illuminates the panel's front side and the user sits on the side the
    branch radiates into; other combinations are skipped.
    """
    if abs(abs(pilot_phase) - 1.0) > 1e-12:
        raise InvalidInput("pilot phase must be unit magnitude")
    user = as_point(user_position, "user_position")
    fc = waveform.carrier_hz
    n_t = waveform.n_transmissions
    scale = 1.0 / math.sqrt(waveform.n_subcarriers)
    tx_gains = (
        budget.tx_power_dbm - 30.0,
        budget.sat_antenna_gain_dbi,
        -budget.polarization_loss_db,
    )
    o2i = o2i_penetration_loss(user_indoor, building_class, budget)

    if len(beamformers) < len(satellites):
        raise InvalidScenario("need one beamformer set per satellite")

    paths = []
    gains = []
    beam_rows = []
    d_beam_rows = []
    d_beam_angle_rows = []
    d_delay_rows = []
    d_doppler_rows = []

    for sat, beams in zip(satellites, beamformers):
        beams = np.asarray(beams)
        if beams.shape != (n_t, sat.n_elements):
            raise InvalidScenario(
                f"beamformer shape {beams.shape} != ({n_t}, {sat.n_elements})"
            )
        sat_pos = np.asarray(sat.position_m, dtype=float)
        diff = user - sat_pos
        dist = float(np.linalg.norm(diff))
        u = diff / dist
        tau = dist / SPEED_OF_LIGHT
        nu = float(fc / SPEED_OF_LIGHT * np.dot(sat.velocity_mps, u))
        u_local = sat.array_frame.T @ u
        aod = angles_from_direction(u_local)
        bud = path_amplitude([(dist, fc)], tx_gains, o2i)
        carrier = np.exp(-2j * np.pi * fc * tau)
        known = bud.rx_amplitude_linear * scale * pilot_phase
        a = array_response_from_direction(sat.array_rows, sat.array_cols, u_local)
        r_idx, c_idx = _grid_offsets(sat.array_rows, sat.array_cols)
        # d a / d u'_{x,y}: phase is linear in the in-plane direction components
        ax = (1j * 2.0 * np.pi * 0.5 * c_idx) * a
        ay = (1j * 2.0 * np.pi * 0.5 * r_idx) * a
        du_dp = sat.array_frame.T @ ((np.eye(3) - np.outer(u, u)) / dist)
        bf = known * (beams @ a)  # (T,)
        dbf = known * (
            np.outer(beams @ ax, du_dp[0]) + np.outer(beams @ ay, du_dp[1])
        )  # (T, 3)
        da_az, da_el = array_response_gradient(sat.array_rows, sat.array_cols, aod)
        dbf_ang = known * np.stack(
            [beams @ da_az, beams @ da_el], axis=1
        )  # (T, 2)
        jac = position_jacobians(
            sat_pos, sat.velocity_mps, sat.array_frame, user, fc
        )
        paths.append(
            PropagationPath(
                kind="los",
                satellite_id=sat.satellite_id,
                ris_id=None,
                delay_s=tau,
                sat_aod=aod,
                ris_aod=None,
                doppler_hz=nu,
                complex_gain=complex(bud.rx_amplitude_linear * carrier),
                budget=bud,
                jacobians=jac,
            )
        )
        gains.append(carrier)
        beam_rows.append(bf)
        d_beam_rows.append(dbf)
        d_beam_angle_rows.append(dbf_ang)
        d_delay_rows.append(jac.d_delay)
        d_doppler_rows.append(jac.d_doppler)

        for panel, branch in served_panels:
            coef = np.stack(
                [star_coefficients(panel, branch, t) for t in range(n_t)]
            )  # (T, K)
            p_pos = panel.position_m
            d_sr = float(np.linalg.norm(p_pos - sat_pos))
            u_sr_local = panel.frame.T @ los_direction(p_pos, sat_pos)
            if u_sr_local[2] <= 0:
                continue  # satellite behind the panel plane
            diff_u = user - p_pos
            d_ru = float(np.linalg.norm(diff_u))
            u_out = diff_u / d_ru
            u_out_local = panel.frame.T @ u_out
            side = u_out_local[2]
            if branch == REFLECT and side <= 0:
                continue
            if branch == REFRACT and side >= 0:
                continue
            tau_v = (d_sr + d_ru) / SPEED_OF_LIGHT
            sat_aod_v = departure_angles(sat_pos, sat.array_frame, p_pos)
            ris_aod = angles_from_direction(u_out_local)
            bud_v = path_amplitude([(d_sr, fc), (d_ru, fc)], tx_gains, 0.0)
            carrier_v = np.exp(-2j * np.pi * fc * tau_v)
            known_v = bud_v.rx_amplitude_linear * scale * pilot_phase
            a_sat = array_response_from_direction(
                sat.array_rows, sat.array_cols, sat.array_frame.T @ los_direction(sat_pos, p_pos)
            )
            a_in = array_response_from_direction(
                panel.rows, panel.cols, u_sr_local, panel.spacing_wavelengths
            )
            a_out = array_response_from_direction(
                panel.rows, panel.cols, u_out_local, panel.spacing_wavelengths
            )
            rk, ck = _grid_offsets(panel.rows, panel.cols)
            w = 2.0 * np.pi * panel.spacing_wavelengths
            aox = (1j * w * ck) * a_out
            aoy = (1j * w * rk) * a_out
            sat_factor = beams @ a_sat  # (T,)
            base = a_in  # incident steering, fixed w.r.t. user
            inner = coef @ (base * a_out)  # (T,)
            inner_dx = coef @ (base * aox)
            inner_dy = coef @ (base * aoy)
            duo_dp = panel.frame.T @ ((np.eye(3) - np.outer(u_out, u_out)) / d_ru)
            bf_v = known_v * sat_factor * inner
            dbf_v = known_v * (
                np.outer(sat_factor * inner_dx, duo_dp[0])
                + np.outer(sat_factor * inner_dy, duo_dp[1])
            )
            dao_az, dao_el = array_response_gradient(
                panel.rows, panel.cols, ris_aod, panel.spacing_wavelengths
            )
            dbf_v_ang = known_v * np.stack(
                [sat_factor * (coef @ (base * dao_az)), sat_factor * (coef @ (base * dao_el))],
                axis=1,
            )
            jac_v = position_jacobians(
                sat_pos,
                sat.velocity_mps,
                sat.array_frame,
                user,
                fc,
                ris_pos=p_pos,
                ris_frame=panel.frame,
            )
            paths.append(
                PropagationPath(
                    kind="via_ris",
                    satellite_id=sat.satellite_id,
                    ris_id=panel.panel_id,
                    delay_s=tau_v,
                    sat_aod=sat_aod_v,
                    ris_aod=ris_aod,
                    doppler_hz=None,
                    complex_gain=complex(bud_v.rx_amplitude_linear * carrier_v),
                    budget=bud_v,
                    jacobians=jac_v,
                )
            )
            gains.append(carrier_v)
            beam_rows.append(bf_v)
            d_beam_rows.append(dbf_v)
            d_beam_angle_rows.append(dbf_v_ang)
            d_delay_rows.append(jac_v.d_delay)
            d_doppler_rows.append(np.zeros(3))

    n_paths = len(paths)
    if noise_power_w is None:
        from .linkbudget import noise_power_per_subcarrier

        noise_power_w = noise_power_per_subcarrier(
            waveform.subcarrier_spacing_hz,
            budget.noise_figure_db,
            budget.antenna_temperature_k,
        )
    return ChannelModel(
        waveform=waveform,
        noise_power_w=noise_power_w,
        user_position=user,
        paths=paths,
        gains=np.array(gains, dtype=complex) if n_paths else np.zeros(0, dtype=complex),
        beam=np.array(beam_rows) if n_paths else np.zeros((0, n_t), dtype=complex),
        d_beam_dpos=np.array(d_beam_rows) if n_paths else np.zeros((0, n_t, 3), dtype=complex),
        d_beam_dangles=np.array(d_beam_angle_rows)
        if n_paths
        else np.zeros((0, n_t, 2), dtype=complex),
        d_delay_dpos=np.array(d_delay_rows) if n_paths else np.zeros((0, 3)),
        d_doppler_dpos=np.array(d_doppler_rows) if n_paths else np.zeros((0, 3)),
        clock_bias_unknown=clock_bias_unknown,
        pilot_phase=complex(pilot_phase),
    )
