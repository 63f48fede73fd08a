"""Randomized scenario builders shared by the test suite.

The builders produce small but fully generic channel models: satellites
at realistic slant ranges with their arrays deliberately tilted so the
user sits at a comfortable off-boresight angle (the azimuth/elevation
chart stays well conditioned), and surface panels whose orientation
guarantees the requested branch actually illuminates the user. Waveforms
are kept small so assembling a few hundred models stays fast.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .channel import (
    ChannelModel,
    RisPanel,
    WaveformConfig,
    active_gain,
    build_channel_model,
    incident_panel_power,
    random_beamformer,
    random_phase_profile,
)
from .constants import SPEED_OF_LIGHT
from .constellation import SatelliteState
from .geometry import orientation_frame_from_boresight
from .linkbudget import BudgetConfig


def small_waveform(
    n_subcarriers: int = 64, n_transmissions: int = 3
) -> WaveformConfig:
    """Reduced-size waveform for unit tests (1 MHz spacing, 28 GHz)."""
    return WaveformConfig(
        carrier_hz=28.0e9,
        bandwidth_hz=1.0e6 * n_subcarriers,
        n_subcarriers=n_subcarriers,
        n_transmissions=n_transmissions,
    )


def random_unit_vector(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def perpendicular_unit(rng: np.random.Generator, u: np.ndarray) -> np.ndarray:
    """Random unit vector orthogonal to u."""
    v = rng.standard_normal(3)
    v -= np.dot(v, u) * u
    n = np.linalg.norm(v)
    if n < 1e-12:
        v = np.array([u[1], -u[0], 0.0]) if abs(u[2]) > 0.5 else np.array([0.0, -u[2], u[1]])
        n = np.linalg.norm(v)
    return v / n


def random_satellite(
    rng: np.random.Generator,
    user: np.ndarray,
    satellite_id: int,
    array_rows: int = 8,
    array_cols: int = 8,
) -> SatelliteState:
    """Satellite above the user with a generically tilted array.

    Elevation is drawn in [20, 70] degrees and the boresight is tilted
    10 to 30 degrees away from the user so the user's departure
    direction is far from both the array pole and the array plane.
    """
    el = rng.uniform(np.deg2rad(20.0), np.deg2rad(70.0))
    az = rng.uniform(0.0, 2.0 * np.pi)
    dist = rng.uniform(6.0e5, 1.2e6)
    up = np.array(
        [np.cos(el) * np.cos(az), np.cos(el) * np.sin(az), np.sin(el)]
    )
    position = user + dist * up
    toward_user = -up
    tilt = rng.uniform(np.deg2rad(10.0), np.deg2rad(30.0))
    axis = perpendicular_unit(rng, toward_user)
    boresight = np.cos(tilt) * toward_user + np.sin(tilt) * axis
    speed = rng.uniform(7.0e3, 7.8e3)
    velocity = speed * perpendicular_unit(rng, up)
    return SatelliteState(
        satellite_id=satellite_id,
        position_m=position,
        velocity_mps=velocity,
        array_frame=orientation_frame_from_boresight(boresight),
        array_rows=array_rows,
        array_cols=array_cols,
    )


def random_panel(
    rng: np.random.Generator,
    user: np.ndarray,
    satellites,
    panel_id: int,
    branch: str,
    mode: str,
    epsilon: float = 0.5,
    rows: int = 16,
    cols: int = 16,
) -> RisPanel:
    """Panel placed and oriented so the given branch serves the user.

    Reflection panels need the user and every satellite on the front
    side; the boresight is picked from a one-parameter family blending
    the user direction with the satellite cluster (and with zenith) by
    maximizing the smallest front-side margin. Refraction panels face
    the satellite cluster with the user behind the aperture plane. The
    realized margins are verified and an AssertionError flags an
    infeasible draw.
    """
    if branch == "reflect":
        lateral = perpendicular_unit(rng, np.array([0.0, 0.0, 1.0]))
        position = user + rng.uniform(15.0, 30.0) * lateral
        position[2] = user[2] + rng.uniform(1.0, 3.0)
    else:
        sat_mean_u = np.zeros(3)
        for sat in satellites:
            d = np.asarray(sat.position_m, dtype=float) - user
            sat_mean_u += d / np.linalg.norm(d)
        sat_mean_u /= np.linalg.norm(sat_mean_u)
        offset = sat_mean_u + 0.3 * perpendicular_unit(rng, sat_mean_u)
        offset /= np.linalg.norm(offset)
        position = user + rng.uniform(4.0, 12.0) * offset

    to_sats = []
    for sat in satellites:
        d = np.asarray(sat.position_m, dtype=float) - position
        to_sats.append(d / np.linalg.norm(d))
    sat_mean = np.sum(to_sats, axis=0)
    sat_mean /= np.linalg.norm(sat_mean)
    to_user = (user - position) / np.linalg.norm(user - position)

    if branch == "reflect":
        best, best_margin = None, -np.inf
        for anchor in (sat_mean, np.array([0.0, 0.0, 1.0])):
            for w in np.linspace(0.05, 0.95, 19):
                b = (1.0 - w) * to_user + w * anchor
                b /= np.linalg.norm(b)
                margin = min(float(np.dot(b, v)) for v in to_sats + [to_user])
                if margin > best_margin:
                    best, best_margin = b, margin
        if best_margin < 0.02:
            raise AssertionError("no feasible reflection boresight for this draw")
        boresight = best
    else:
        boresight = sat_mean
        sat_margin = min(float(np.dot(boresight, v)) for v in to_sats)
        if sat_margin < 0.02 or np.dot(boresight, to_user) > -0.02:
            raise AssertionError("no feasible refraction boresight for this draw")
    frame = orientation_frame_from_boresight(boresight)
    return RisPanel(
        panel_id=panel_id,
        position_m=position,
        frame=frame,
        rows=rows,
        cols=cols,
        mode=mode,
        epsilon=epsilon,
    )


@dataclass
class RandomScenario:
    """A realized random test scenario and its ingredients."""

    model: ChannelModel
    satellites: list
    beamformers: list
    served_panels: list
    budget: BudgetConfig
    user_position: np.ndarray
    waveform: WaveformConfig


def random_scenario(
    rng: np.random.Generator,
    n_satellites: int = 2,
    n_panels: int = 1,
    branch: str = "reflect",
    mode: str = "star",
    epsilon: float = 0.5,
    clock_bias_unknown: bool = False,
    user_indoor: bool = False,
    waveform: WaveformConfig = None,
    budget: BudgetConfig = None,
) -> RandomScenario:
    """Generic scenario with every requested path present.

    Raises if the generated geometry drops a path; the builders are
    constructed so that never happens, and the check guards against
    silent coverage loss in the tests.
    """
    if waveform is None:
        waveform = small_waveform()
    if budget is None:
        budget = BudgetConfig()
    user = np.array(
        [rng.uniform(-20.0, 20.0), rng.uniform(-20.0, 20.0), rng.uniform(0.5, 3.0)]
    )
    satellites = [
        random_satellite(rng, user, satellite_id=s) for s in range(n_satellites)
    ]
    beamformers = [
        np.stack(
            [
                random_beamformer(sat.n_elements, rng)
                for _ in range(waveform.n_transmissions)
            ]
        )
        for sat in satellites
    ]
    served = []
    for k in range(n_panels):
        panel = random_panel(
            rng, user, satellites, panel_id=k, branch=branch, mode=mode, epsilon=epsilon
        )
        profiles = np.stack(
            [
                random_phase_profile(panel.n_elements, rng)
                for _ in range(waveform.n_transmissions)
            ]
        )
        amp = 1.0
        if panel.is_active:
            incident = incident_panel_power(panel, satellites, budget, waveform.carrier_hz)
            amp = active_gain(incident, panel.supply_power_dbm)
        panel = replace(panel, phase_profiles=profiles, amplitude_gain=amp)
        served.append((panel, branch))
    model = build_channel_model(
        waveform,
        budget,
        satellites,
        beamformers,
        user,
        user_indoor=user_indoor,
        served_panels=served,
        clock_bias_unknown=clock_bias_unknown,
    )
    expected = n_satellites * (1 + len(served))
    if model.n_paths != expected:
        raise AssertionError(
            f"scenario generator produced {model.n_paths} paths, expected {expected}"
        )
    return RandomScenario(
        model=model,
        satellites=satellites,
        beamformers=beamformers,
        served_panels=served,
        budget=budget,
        user_position=user,
        waveform=waveform,
    )


def _careful_delays(scenario: RandomScenario, shifted, pos: np.ndarray) -> np.ndarray:
    """Path delays at a probe point, recomputed in extended precision.

    A float64 norm at megameter slant range carries ~2e-10 m of rounding
    noise; a central difference divides that by the probe step and
    swamps the 1e-6 budget. Extended precision pushes the geometry noise
    to ~1e-13 m. This also reimplements delay = path length / c from raw
    positions, independently of the channel builder.
    """
    c = np.longdouble(SPEED_OF_LIGHT)
    pos_ld = np.asarray(pos, dtype=np.longdouble)
    sats = {s.satellite_id: s for s in scenario.satellites}
    panels = {p.panel_id: p for p, _ in scenario.served_panels}
    out = np.empty(shifted.n_paths, dtype=np.longdouble)
    for i, path in enumerate(shifted.paths):
        sat_pos = np.asarray(sats[path.satellite_id].position_m, np.longdouble)
        if path.kind == "los":
            d = sat_pos - pos_ld
            out[i] = np.sqrt(np.sum(d * d)) / c
        else:
            ris_pos = np.asarray(panels[path.ris_id].position_m, np.longdouble)
            d1 = sat_pos - ris_pos
            d2 = pos_ld - ris_pos
            out[i] = (np.sqrt(np.sum(d1 * d1)) + np.sqrt(np.sum(d2 * d2))) / c
    return out


def finite_difference_gradient_check(
    scenario: RandomScenario, step: float = 1e-4
) -> float:
    """Worst relative gap between analytic and central-difference gradients.

    Probes the three position axes. The model is rebuilt at each probe
    point with the unknown gains and the per-path link amplitudes frozen
    at their base values, so the difference quotient isolates the
    position dependence the estimator actually models: delays, Doppler,
    and departure angles. Delay phases are evaluated from
    extended-precision path lengths, reduced modulo one cycle, because
    f * tau reaches ~1e5 cycles at slant range and plain float64 phases
    leave ~1e-10 rad of noise for the difference quotient to amplify.
    """
    from .fim import gradient_tensor

    base = scenario.model
    grad = gradient_tensor(base)
    f = np.asarray(base.waveform.baseband_frequencies(), dtype=np.longdouble)
    t_s = (
        np.arange(base.waveform.n_transmissions) * base.waveform.symbol_period
    )
    amps = np.array([p.budget.rx_amplitude_linear for p in base.paths])
    worst = 0.0
    for axis in range(3):
        means = []
        for sign in (1.0, -1.0):
            pos = np.array(scenario.user_position, dtype=float)
            pos[axis] += sign * step
            shifted = build_channel_model(
                scenario.waveform,
                scenario.budget,
                scenario.satellites,
                scenario.beamformers,
                pos,
                served_panels=scenario.served_panels,
                clock_bias_unknown=base.clock_bias_unknown,
                noise_power_w=base.noise_power_w,
            )
            if shifted.n_paths != base.n_paths:
                raise AssertionError("path count changed under the probe step")
            amps_shifted = np.array(
                [p.budget.rx_amplitude_linear for p in shifted.paths]
            )
            cycles = np.outer(_careful_delays(scenario, shifted, pos), f)
            frac = (cycles - np.rint(cycles)).astype(float)
            delay_phase = np.exp(-2j * np.pi * frac)
            ramp = np.exp(2j * np.pi * np.outer(shifted.dopplers(), t_s))
            means.append(
                np.einsum(
                    "p,pt,pn->tn",
                    base.gains * amps / amps_shifted,
                    shifted.beam * ramp,
                    delay_phase,
                )
            )
        fd = (means[0] - means[1]) / (2.0 * step)
        rel = np.max(np.abs(fd - grad[axis])) / np.max(np.abs(grad[axis]))
        worst = max(worst, rel)
    return worst
