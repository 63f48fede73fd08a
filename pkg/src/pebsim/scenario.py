"""Experiment orchestration: configuration, sweeps, grids, CSV emission.

Two experiments are supported. The satellite-count sweep evaluates the
position error bound for a fixed set of labeled receiver configurations
(constellation variant, optional surface relay, user) across a range of
constellation sizes and random seeds. The area map evaluates the bound
on a grid of user positions over a mixed indoor/outdoor region for a
fixed constellation draw, once per configured energy-splitting value.

Configuration documents are JSON. Every omitted key takes a documented
default (the defaults reproduce the satellite-count study); unknown keys
are rejected with the dotted path of the offender. All randomness is
derived from the per-point seed through tagged `SeedSequence` spawns,
so output CSV bytes are a pure function of the resolved configuration
and the seed list, independent of worker parallelism.

Seeding layout: the constellation consumes the bare seed; satellite
beamformers use (seed, 1000 + satellite id); panel phase profiles use
(seed, 2000 + panel id); independent (non-nested) sweep draws use
(seed, 3000 + satellite count).
"""

from __future__ import annotations

import copy
import json
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .channel import (
    REFLECT,
    REFRACT,
    RIS_MODES,
    RisPanel,
    WaveformConfig,
    active_gain,
    build_channel_model,
    incident_panel_power,
    random_beamformer,
    random_phase_profile,
)
from .constellation import ConstellationSpec, draw_constellation
from .errors import (
    GimbalWarning,
    InvalidInput,
    InvalidScenario,
    ParseError,
    ValidationError,
)
from .fim import evaluate
from .geometry import orientation_frame_from_boresight
from .linkbudget import BudgetConfig

SATCOUNT = "satcount_sweep"
AREA_MAP = "area_map"
EXPERIMENTS = (SATCOUNT, AREA_MAP)

WORKERS_ENV = "PEBSIM_WORKERS"

_REFRACT_MODES = ("star", "active_star")
_ACTIVE_MODES = ("active_reflect", "active_star")

SATCOUNT_HEADER = "label,sweep,seed,peb_m"
AREA_HEADER = "x_m,y_m,indoor,epsilon,peb_m"


# ---------------------------------------------------------------------------
# configuration schema


@dataclass(frozen=True)
class BuildingFootprint:
    """Axis-aligned rectangular building footprint with a height."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    height_m: float
    building_class: str = "default"

    def contains(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max


@dataclass(frozen=True)
class PanelSpec:
    """Configured surface panel, before profiles and gains are realized."""

    position_m: tuple
    outward_normal: tuple
    rows: int
    cols: int
    mode: str
    epsilon: float
    supply_power_dbm: float
    building: int
    spacing_wavelengths: float = 0.5


@dataclass(frozen=True)
class VariantSpec:
    """One constellation variant with optional waveform/power overrides."""

    altitude_m: float
    elevation_mask_deg: float = 10.0
    carrier_hz: float = None
    bandwidth_hz: float = None
    n_subcarriers: int = None
    tx_power_dbm: float = None


@dataclass(frozen=True)
class GroupSpec:
    """One labeled curve of the satellite-count sweep."""

    label: str
    constellation: str
    use_ris: bool
    user: int


@dataclass(frozen=True)
class SatcountSettings:
    counts: tuple
    nested: bool = True
    aggregate: str = "median"


@dataclass(frozen=True)
class AreaMapSettings:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    cell_m: float
    user_height_m: float
    epsilons: tuple
    n_satellites: int
    constellation: str

    def cell_centers(self):
        xs = np.arange(self.x_min + self.cell_m / 2.0, self.x_max, self.cell_m)
        ys = np.arange(self.y_min + self.cell_m / 2.0, self.y_max, self.cell_m)
        return xs, ys


@dataclass(frozen=True)
class UserSpec:
    position_m: tuple
    indoor: bool


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully resolved experiment configuration."""

    experiment: str
    waveform: WaveformConfig
    budget: BudgetConfig
    constellation: dict
    buildings: tuple
    ris_panels: tuple
    users: tuple
    groups: tuple
    satcount_sweep: SatcountSettings
    area_map: AreaMapSettings
    seeds: tuple
    clock_bias_mode: str
    satellite_array: tuple  # (rows, cols)
    resolved: dict

    @property
    def clock_bias_unknown(self) -> bool:
        return self.clock_bias_mode == "unknown"


def default_document() -> dict:
    """Complete default configuration: the satellite-count study.

    One building with an active STAR panel on its west facade, an indoor
    user 15 m behind the panel and an outdoor user 15 m in front, three
    constellation variants tracked as six labeled curves.
    """
    return {
        "experiment": SATCOUNT,
        "clock_bias_mode": "known",
        "seeds": list(range(20)),
        "waveform": {
            "carrier_hz": 28.0e9,
            "bandwidth_hz": 300.0e6,
            "n_subcarriers": 3000,
            "n_transmissions": 5,
        },
        "budget": {
            "tx_power_dbm": 55.0,
            "sat_antenna_gain_dbi": 0.0,
            "noise_figure_db": 7.0,
            "antenna_temperature_k": 290.0,
            "polarization_loss_db": 0.0,
            "o2i_loss_db": {"default": 20.0},
        },
        "satellite_array": {"rows": 8, "cols": 8},
        "constellation": {
            "leo": {"altitude_m": 600.0e3, "elevation_mask_deg": 10.0},
            "meo": {
                "altitude_m": 10000.0e3,
                "elevation_mask_deg": 10.0,
                "carrier_hz": 1.575e9,
                "bandwidth_hz": 20.0e6,
                "n_subcarriers": 2000,
                "tx_power_dbm": 44.4,
            },
        },
        "buildings": [
            {
                "x_min": 0.0,
                "x_max": 30.0,
                "y_min": -15.0,
                "y_max": 15.0,
                "height_m": 20.0,
                "building_class": "default",
            }
        ],
        "ris_panels": [
            {
                "position_m": [0.0, 0.0, 2.5],
                "outward_normal": [-1.0, 0.0, 0.0],
                "rows": 20,
                "cols": 20,
                "mode": "active_star",
                "epsilon": 0.5,
                # 1 uW amplifier supply: places the ten-satellite indoor
                # bound near 0.3 m (median over the default seeds).
                "supply_power_dbm": -30.0,
                "building": 0,
                "spacing_wavelengths": 0.5,
            }
        ],
        "users": [
            {"position_m": [15.0, 0.0, 1.5], "indoor": True},
            {"position_m": [-15.0, 0.0, 1.5], "indoor": False},
        ],
        "groups": [
            {"label": "leo_star_indoor", "constellation": "leo", "use_ris": True, "user": 0},
            {"label": "leo_indoor", "constellation": "leo", "use_ris": False, "user": 0},
            {"label": "meo_indoor", "constellation": "meo", "use_ris": False, "user": 0},
            {"label": "leo_star_outdoor", "constellation": "leo", "use_ris": True, "user": 1},
            {"label": "leo_outdoor", "constellation": "leo", "use_ris": False, "user": 1},
            {"label": "meo_outdoor", "constellation": "meo", "use_ris": False, "user": 1},
        ],
        "satcount_sweep": {
            "counts": list(range(1, 13)),
            "nested": True,
            "aggregate": "median",
        },
        "area_map": {
            "x_min": -50.0,
            "x_max": 50.0,
            "y_min": -50.0,
            "y_max": 50.0,
            "cell_m": 2.0,
            "user_height_m": 1.5,
            "epsilons": [0.25, 0.5, 0.75],
            "n_satellites": 10,
            "constellation": "leo",
        },
    }


def _require_mapping(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ValidationError(path, f"expected an object, got {type(value).__name__}")
    return value


def _require_list(value, path: str) -> list:
    if not isinstance(value, list):
        raise ValidationError(path, f"expected an array, got {type(value).__name__}")
    return value


def _merge_section(defaults: dict, provided: dict, path: str) -> dict:
    out = copy.deepcopy(defaults)
    for key, value in provided.items():
        if key not in defaults:
            raise ValidationError(f"{path}.{key}" if path else key, "unknown key")
        if isinstance(defaults[key], dict) and not isinstance(value, dict):
            raise ValidationError(
                f"{path}.{key}" if path else key,
                f"expected an object, got {type(value).__name__}",
            )
        if isinstance(defaults[key], dict) and key not in ("o2i_loss_db", "constellation"):
            out[key] = _merge_section(
                defaults[key], value, f"{path}.{key}" if path else key
            )
        else:
            out[key] = copy.deepcopy(value)
    return out


def resolve_document(doc: dict) -> dict:
    """Overlay a user document onto the defaults, rejecting unknown keys.

    Scalar and object sections merge field-wise; arrays and open-keyed
    tables (buildings, panels, users, groups, seeds, o2i classes, the
    constellation variant table) replace their default wholesale.
    """
    _require_mapping(doc, "config")
    return _merge_section(default_document(), doc, "")


def _number(obj: dict, key: str, path: str, minimum=None, maximum=None,
            exclusive_min=False, optional=False):
    value = obj.get(key)
    if value is None:
        if optional:
            return None
        raise ValidationError(f"{path}.{key}", "missing value")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{path}.{key}", f"expected a number, got {value!r}")
    value = float(value)
    if minimum is not None:
        if exclusive_min and value <= minimum:
            raise ValidationError(f"{path}.{key}", f"must be > {minimum}, got {value}")
        if not exclusive_min and value < minimum:
            raise ValidationError(f"{path}.{key}", f"must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ValidationError(f"{path}.{key}", f"must be <= {maximum}, got {value}")
    return value


def _integer(obj: dict, key: str, path: str, minimum=None, optional=False):
    value = obj.get(key)
    if value is None:
        if optional:
            return None
        raise ValidationError(f"{path}.{key}", "missing value")
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{path}.{key}", f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ValidationError(f"{path}.{key}", f"must be >= {minimum}, got {value}")
    return int(value)


def _point(obj: dict, key: str, path: str) -> tuple:
    value = _require_list(obj.get(key), f"{path}.{key}")
    if len(value) != 3 or any(
        isinstance(v, bool) or not isinstance(v, (int, float)) for v in value
    ):
        raise ValidationError(f"{path}.{key}", "expected [x, y, z] numbers")
    return tuple(float(v) for v in value)


def _parse_buildings(items: list) -> tuple:
    out = []
    for i, raw in enumerate(items):
        path = f"buildings[{i}]"
        raw = _require_mapping(raw, path)
        allowed = {"x_min", "x_max", "y_min", "y_max", "height_m", "building_class"}
        for key in raw:
            if key not in allowed:
                raise ValidationError(f"{path}.{key}", "unknown key")
        b = BuildingFootprint(
            x_min=_number(raw, "x_min", path),
            x_max=_number(raw, "x_max", path),
            y_min=_number(raw, "y_min", path),
            y_max=_number(raw, "y_max", path),
            height_m=_number(raw, "height_m", path, minimum=0.0, exclusive_min=True),
            building_class=str(raw.get("building_class", "default")),
        )
        if b.x_max <= b.x_min:
            raise ValidationError(f"{path}.x_max", "must exceed x_min")
        if b.y_max <= b.y_min:
            raise ValidationError(f"{path}.y_max", "must exceed y_min")
        out.append(b)
    return tuple(out)


def _validate_panel_on_wall(panel: PanelSpec, building: BuildingFootprint, path: str):
    """A panel must sit on one of its building's four facade planes.

    The configured outward normal must be the outward direction of that
    facade, the panel center must lie within 1 cm of the wall plane, and
    the in-plane coordinates must fall on the facade rectangle.
    """
    x, y, z = panel.position_m
    nx, ny, nz = panel.outward_normal
    walls = [
        ((-1.0, 0.0, 0.0), abs(x - building.x_min), building.y_min <= y <= building.y_max),
        ((+1.0, 0.0, 0.0), abs(x - building.x_max), building.y_min <= y <= building.y_max),
        ((0.0, -1.0, 0.0), abs(y - building.y_min), building.x_min <= x <= building.x_max),
        ((0.0, +1.0, 0.0), abs(y - building.y_max), building.x_min <= x <= building.x_max),
    ]
    for normal, plane_gap, in_span in walls:
        if (
            abs(nx - normal[0]) < 1e-9
            and abs(ny - normal[1]) < 1e-9
            and abs(nz - normal[2]) < 1e-9
        ):
            if plane_gap > 0.01:
                raise ValidationError(
                    f"{path}.position_m",
                    f"panel is {plane_gap:.3g} m off its wall plane (limit 0.01 m)",
                )
            if not in_span or not 0.0 <= z <= building.height_m:
                raise ValidationError(
                    f"{path}.position_m", "panel lies outside its facade rectangle"
                )
            return
    raise ValidationError(
        f"{path}.outward_normal",
        "must be an axis-aligned outward facade direction of its building",
    )


def _parse_panels(items: list, buildings: tuple) -> tuple:
    out = []
    for i, raw in enumerate(items):
        path = f"ris_panels[{i}]"
        raw = _require_mapping(raw, path)
        allowed = {
            "position_m", "outward_normal", "rows", "cols", "mode", "epsilon",
            "supply_power_dbm", "building", "spacing_wavelengths",
        }
        for key in raw:
            if key not in allowed:
                raise ValidationError(f"{path}.{key}", "unknown key")
        mode = raw.get("mode")
        if mode not in RIS_MODES:
            raise ValidationError(f"{path}.mode", f"must be one of {RIS_MODES}")
        epsilon = _number(raw, "epsilon", path, minimum=0.0, maximum=1.0)
        normal = _point(raw, "outward_normal", path)
        norm = math.sqrt(sum(v * v for v in normal))
        if abs(norm - 1.0) > 1e-6:
            raise ValidationError(f"{path}.outward_normal", "must be a unit vector")
        spec = PanelSpec(
            position_m=_point(raw, "position_m", path),
            outward_normal=normal,
            rows=_integer(raw, "rows", path, minimum=1),
            cols=_integer(raw, "cols", path, minimum=1),
            mode=str(mode),
            epsilon=float(epsilon),
            supply_power_dbm=_number(raw, "supply_power_dbm", path),
            building=_integer(raw, "building", path, minimum=0),
            spacing_wavelengths=_number(
                raw, "spacing_wavelengths", path, minimum=0.0, exclusive_min=True
            )
            if "spacing_wavelengths" in raw
            else 0.5,
        )
        if spec.building >= len(buildings):
            raise ValidationError(
                f"{path}.building", f"no building with index {spec.building}"
            )
        _validate_panel_on_wall(spec, buildings[spec.building], path)
        out.append(spec)
    return tuple(out)


def _parse_users(items: list, buildings: tuple) -> tuple:
    out = []
    for i, raw in enumerate(items):
        path = f"users[{i}]"
        raw = _require_mapping(raw, path)
        for key in raw:
            if key not in ("position_m", "indoor"):
                raise ValidationError(f"{path}.{key}", "unknown key")
        pos = _point(raw, "position_m", path)
        indoor = raw.get("indoor")
        if not isinstance(indoor, bool):
            raise ValidationError(f"{path}.indoor", "expected true or false")
        if indoor and not any(b.contains(pos[0], pos[1]) for b in buildings):
            raise ValidationError(
                f"{path}.position_m", "indoor user lies inside no building footprint"
            )
        out.append(UserSpec(position_m=pos, indoor=indoor))
    return tuple(out)


def _parse_variants(table: dict) -> dict:
    table = _require_mapping(table, "constellation")
    if not table:
        raise ValidationError("constellation", "at least one variant is required")
    out = {}
    for name, raw in table.items():
        path = f"constellation.{name}"
        raw = _require_mapping(raw, path)
        allowed = {
            "altitude_m", "elevation_mask_deg", "carrier_hz", "bandwidth_hz",
            "n_subcarriers", "tx_power_dbm",
        }
        for key in raw:
            if key not in allowed:
                raise ValidationError(f"{path}.{key}", "unknown key")
        out[name] = VariantSpec(
            altitude_m=_number(raw, "altitude_m", path, minimum=0.0, exclusive_min=True),
            elevation_mask_deg=_number(
                raw, "elevation_mask_deg", path, minimum=0.0, maximum=89.999
            )
            if "elevation_mask_deg" in raw
            else 10.0,
            carrier_hz=_number(raw, "carrier_hz", path, minimum=0.0,
                               exclusive_min=True, optional=True),
            bandwidth_hz=_number(raw, "bandwidth_hz", path, minimum=0.0,
                                 exclusive_min=True, optional=True),
            n_subcarriers=_integer(raw, "n_subcarriers", path, minimum=1, optional=True),
            tx_power_dbm=_number(raw, "tx_power_dbm", path, optional=True),
        )
    return out


def _parse_groups(items: list, variants: dict, users: tuple) -> tuple:
    out = []
    labels = set()
    for i, raw in enumerate(items):
        path = f"groups[{i}]"
        raw = _require_mapping(raw, path)
        for key in raw:
            if key not in ("label", "constellation", "use_ris", "user"):
                raise ValidationError(f"{path}.{key}", "unknown key")
        label = raw.get("label")
        if not isinstance(label, str) or not label:
            raise ValidationError(f"{path}.label", "expected a non-empty string")
        if label in labels:
            raise ValidationError(f"{path}.label", f"duplicate label {label!r}")
        labels.add(label)
        name = raw.get("constellation")
        if name not in variants:
            raise ValidationError(
                f"{path}.constellation", f"unknown constellation variant {name!r}"
            )
        use_ris = raw.get("use_ris")
        if not isinstance(use_ris, bool):
            raise ValidationError(f"{path}.use_ris", "expected true or false")
        user = _integer(raw, "user", path, minimum=0)
        if user >= len(users):
            raise ValidationError(f"{path}.user", f"no user with index {user}")
        out.append(GroupSpec(label=label, constellation=str(name),
                             use_ris=use_ris, user=user))
    return tuple(out)


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a JSON configuration document.

    Raises ParseError on malformed JSON and ValidationError (with the
    dotted path of the offending field) on schema violations.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"configuration is not valid JSON: {exc}") from exc
    resolved = resolve_document(doc)

    experiment = resolved["experiment"]
    if experiment not in EXPERIMENTS:
        raise ValidationError("experiment", f"must be one of {EXPERIMENTS}")
    clock_mode = resolved["clock_bias_mode"]
    if clock_mode not in ("known", "unknown"):
        raise ValidationError("clock_bias_mode", "must be 'known' or 'unknown'")

    seeds_raw = _require_list(resolved["seeds"], "seeds")
    if not seeds_raw:
        raise ValidationError("seeds", "at least one seed is required")
    seeds = []
    for i, s in enumerate(seeds_raw):
        if isinstance(s, bool) or not isinstance(s, int) or s < 0:
            raise ValidationError(f"seeds[{i}]", f"expected a non-negative integer, got {s!r}")
        seeds.append(s)
    if len(set(seeds)) != len(seeds):
        raise ValidationError("seeds", "seeds must be distinct")

    wf_raw = resolved["waveform"]
    path = "waveform"
    waveform = WaveformConfig(
        carrier_hz=_number(wf_raw, "carrier_hz", path, minimum=0.0, exclusive_min=True),
        bandwidth_hz=_number(wf_raw, "bandwidth_hz", path, minimum=0.0, exclusive_min=True),
        n_subcarriers=_integer(wf_raw, "n_subcarriers", path, minimum=1),
        n_transmissions=_integer(wf_raw, "n_transmissions", path, minimum=1),
    )

    bud_raw = resolved["budget"]
    path = "budget"
    o2i = _require_mapping(bud_raw.get("o2i_loss_db", {}), "budget.o2i_loss_db")
    for cls, loss in o2i.items():
        if isinstance(loss, bool) or not isinstance(loss, (int, float)) or loss < 0:
            raise ValidationError(
                f"budget.o2i_loss_db.{cls}", f"expected a loss >= 0 dB, got {loss!r}"
            )
    budget = BudgetConfig(
        tx_power_dbm=_number(bud_raw, "tx_power_dbm", path),
        sat_antenna_gain_dbi=_number(bud_raw, "sat_antenna_gain_dbi", path),
        noise_figure_db=_number(bud_raw, "noise_figure_db", path, minimum=0.0),
        antenna_temperature_k=_number(
            bud_raw, "antenna_temperature_k", path, minimum=0.0, exclusive_min=True
        ),
        polarization_loss_db=_number(bud_raw, "polarization_loss_db", path, minimum=0.0),
        o2i_loss_db={str(k): float(v) for k, v in o2i.items()},
    )

    arr_raw = _require_mapping(resolved["satellite_array"], "satellite_array")
    for key in arr_raw:
        if key not in ("rows", "cols"):
            raise ValidationError(f"satellite_array.{key}", "unknown key")
    sat_array = (
        _integer(arr_raw, "rows", "satellite_array", minimum=1),
        _integer(arr_raw, "cols", "satellite_array", minimum=1),
    )

    variants = _parse_variants(resolved["constellation"])
    buildings = _parse_buildings(_require_list(resolved["buildings"], "buildings"))
    panels = _parse_panels(_require_list(resolved["ris_panels"], "ris_panels"), buildings)
    users = _parse_users(_require_list(resolved["users"], "users"), buildings)
    groups = _parse_groups(_require_list(resolved["groups"], "groups"), variants, users)

    sc_raw = _require_mapping(resolved["satcount_sweep"], "satcount_sweep")
    for key in sc_raw:
        if key not in ("counts", "nested", "aggregate"):
            raise ValidationError(f"satcount_sweep.{key}", "unknown key")
    counts_raw = _require_list(sc_raw.get("counts"), "satcount_sweep.counts")
    if not counts_raw:
        raise ValidationError("satcount_sweep.counts", "at least one count is required")
    counts = []
    for i, c in enumerate(counts_raw):
        if isinstance(c, bool) or not isinstance(c, int) or c < 1:
            raise ValidationError(
                f"satcount_sweep.counts[{i}]", f"expected a positive integer, got {c!r}"
            )
        if counts and c <= counts[-1]:
            raise ValidationError(
                "satcount_sweep.counts", "counts must be strictly increasing"
            )
        counts.append(c)
    nested = sc_raw.get("nested", True)
    if not isinstance(nested, bool):
        raise ValidationError("satcount_sweep.nested", "expected true or false")
    aggregate = sc_raw.get("aggregate", "median")
    if aggregate != "median":
        raise ValidationError("satcount_sweep.aggregate", "only 'median' is supported")
    satcount = SatcountSettings(counts=tuple(counts), nested=nested, aggregate=aggregate)

    am_raw = _require_mapping(resolved["area_map"], "area_map")
    allowed = {
        "x_min", "x_max", "y_min", "y_max", "cell_m", "user_height_m",
        "epsilons", "n_satellites", "constellation",
    }
    for key in am_raw:
        if key not in allowed:
            raise ValidationError(f"area_map.{key}", "unknown key")
    eps_raw = _require_list(am_raw.get("epsilons"), "area_map.epsilons")
    if not eps_raw:
        raise ValidationError("area_map.epsilons", "at least one value is required")
    epsilons = []
    for i, e in enumerate(eps_raw):
        if isinstance(e, bool) or not isinstance(e, (int, float)) or not 0.0 <= e <= 1.0:
            raise ValidationError(
                f"area_map.epsilons[{i}]", f"expected a value in [0, 1], got {e!r}"
            )
        epsilons.append(float(e))
    am_const = am_raw.get("constellation")
    if am_const not in variants:
        raise ValidationError(
            "area_map.constellation", f"unknown constellation variant {am_const!r}"
        )
    area = AreaMapSettings(
        x_min=_number(am_raw, "x_min", "area_map"),
        x_max=_number(am_raw, "x_max", "area_map"),
        y_min=_number(am_raw, "y_min", "area_map"),
        y_max=_number(am_raw, "y_max", "area_map"),
        cell_m=_number(am_raw, "cell_m", "area_map", minimum=0.0, exclusive_min=True),
        user_height_m=_number(am_raw, "user_height_m", "area_map"),
        epsilons=tuple(epsilons),
        n_satellites=_integer(am_raw, "n_satellites", "area_map", minimum=0),
        constellation=str(am_const),
    )
    if area.x_max <= area.x_min:
        raise ValidationError("area_map.x_max", "must exceed x_min")
    if area.y_max <= area.y_min:
        raise ValidationError("area_map.y_max", "must exceed y_min")

    return ScenarioConfig(
        experiment=experiment,
        waveform=waveform,
        budget=budget,
        constellation=variants,
        buildings=buildings,
        ris_panels=panels,
        users=users,
        groups=groups,
        satcount_sweep=satcount,
        area_map=area,
        seeds=tuple(seeds),
        clock_bias_mode=clock_mode,
        satellite_array=sat_array,
        resolved=resolved,
    )


def load_config(path: str) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def apply_overrides(doc: dict, overrides) -> dict:
    """Apply `--override key.path=value` pairs onto a raw document.

    Values parse as JSON when possible and fall back to bare strings, so
    `waveform.bandwidth_hz=3e8` and `clock_bias_mode=unknown` both work.
    Equivalent to editing the JSON before parsing.
    """
    out = copy.deepcopy(doc)
    for item in overrides:
        if "=" not in item:
            raise ValidationError("--override", f"expected key=value, got {item!r}")
        dotted, raw_value = item.split("=", 1)
        try:
            value = json.loads(raw_value)
        except json.JSONDecodeError:
            value = raw_value
        keys = dotted.split(".")
        node = out
        for key in keys[:-1]:
            if not isinstance(node.get(key), (dict, list)):
                node[key] = {}
            node = node[key]
        node[keys[-1]] = value
    return out


# ---------------------------------------------------------------------------
# realization


def variant_waveform(config: ScenarioConfig, variant: VariantSpec) -> WaveformConfig:
    wf = config.waveform
    return WaveformConfig(
        carrier_hz=variant.carrier_hz or wf.carrier_hz,
        bandwidth_hz=variant.bandwidth_hz or wf.bandwidth_hz,
        n_subcarriers=variant.n_subcarriers or wf.n_subcarriers,
        n_transmissions=wf.n_transmissions,
        symbol_period_s=wf.symbol_period_s,
    )


def variant_budget(config: ScenarioConfig, variant: VariantSpec) -> BudgetConfig:
    if variant.tx_power_dbm is None:
        return config.budget
    return replace(config.budget, tx_power_dbm=variant.tx_power_dbm)


def realize_constellation(config: ScenarioConfig, variant: VariantSpec,
                          count: int, seed: int):
    if count == 0:
        return []
    spec = ConstellationSpec(
        count=count,
        altitude_m=variant.altitude_m,
        elevation_mask_rad=math.radians(variant.elevation_mask_deg),
        rng_seed=seed,
    )
    rows, cols = config.satellite_array
    return draw_constellation(spec, array_rows=rows, array_cols=cols)


def satellite_beamformers(satellites, n_transmissions: int, seed: int):
    """Per-satellite stacks of random unit-norm beamformers, (T, L) each."""
    out = []
    for sat in satellites:
        rng = np.random.default_rng(np.random.SeedSequence((seed, 1000 + sat.satellite_id)))
        out.append(
            np.stack(
                [random_beamformer(sat.n_elements, rng) for _ in range(n_transmissions)]
            )
        )
    return out


def realize_panels(config: ScenarioConfig, satellites, waveform: WaveformConfig,
                   budget: BudgetConfig, seed: int, epsilon_override: float = None):
    """Panels with drawn phase profiles and resolved amplifier gains.

    The energy-split override applies to panels whose mode has both
    branches; reflect-only panels keep their configured value. Active
    gains follow the strongest incident satellite leg, so they depend on
    the constellation draw.
    """
    t = waveform.n_transmissions
    out = []
    for i, spec in enumerate(config.ris_panels):
        rng = np.random.default_rng(np.random.SeedSequence((seed, 2000 + i)))
        n_elements = spec.rows * spec.cols
        profiles = np.stack([random_phase_profile(n_elements, rng) for _ in range(t)])
        epsilon = spec.epsilon
        if epsilon_override is not None and spec.mode in _REFRACT_MODES:
            epsilon = epsilon_override
        panel = RisPanel(
            panel_id=i,
            position_m=np.array(spec.position_m),
            frame=orientation_frame_from_boresight(np.array(spec.outward_normal)),
            rows=spec.rows,
            cols=spec.cols,
            mode=spec.mode,
            epsilon=epsilon,
            supply_power_dbm=spec.supply_power_dbm,
            phase_profiles=profiles,
            building_index=spec.building,
            spacing_wavelengths=spec.spacing_wavelengths,
        )
        if panel.is_active and satellites:
            incident = incident_panel_power(panel, satellites, budget, waveform.carrier_hz)
            panel = replace(panel, amplitude_gain=active_gain(incident, spec.supply_power_dbm))
        out.append(panel)
    return out


def served_panels_for_user(panels, indoor: bool, building_index):
    """Branch routing: indoor users take the refraction branch of panels
    on their own building; outdoor users take every panel's reflection
    branch. Geometric side checks happen in the channel builder."""
    served = []
    for panel in panels:
        if indoor:
            if panel.mode in _REFRACT_MODES and panel.building_index == building_index:
                served.append((panel, REFRACT))
        else:
            served.append((panel, REFLECT))
    return served


def _building_of(config: ScenarioConfig, x: float, y: float):
    for idx, b in enumerate(config.buildings):
        if b.contains(x, y):
            return idx
    return None


# ---------------------------------------------------------------------------
# experiments


@dataclass(frozen=True)
class SweepResult:
    """Rows plus per-group aggregate medians.

    For the satellite-count sweep rows are (label, count, seed, peb_m)
    and medians map (label, count) -> value. For the area map rows are
    (x_m, y_m, indoor, epsilon, peb_m) and medians map epsilon ->
    (mean indoor, mean outdoor) over finite cells.
    """

    kind: str
    rows: tuple
    medians: dict


def _satcount_point(config: ScenarioConfig, group_index: int, seed: int):
    """All counts for one (group, seed): returns [(count, peb), ...].

    In nested mode the panels (profiles and amplifier operating points)
    are realized once per seed from the full draw and reused for every
    prefix, so the sweep varies constellation size and nothing else;
    letting the amplifier gain follow the per-count incident power would
    re-normalize the relayed paths whenever a stronger satellite joins
    and break the monotone benefit of added satellites.
    """
    group = config.groups[group_index]
    variant = config.constellation[group.constellation]
    waveform = variant_waveform(config, variant)
    budget = variant_budget(config, variant)
    user = config.users[group.user]
    building_index = _building_of(config, user.position_m[0], user.position_m[1])
    counts = config.satcount_sweep.counts
    out = []
    if config.satcount_sweep.nested:
        full = realize_constellation(config, variant, counts[-1], seed)
        beams_full = satellite_beamformers(full, waveform.n_transmissions, seed)
        panels = (
            realize_panels(config, full, waveform, budget, seed)
            if group.use_ris
            else []
        )
        for count in counts:
            peb = _evaluate_group_point(
                config, waveform, budget, full[:count], beams_full[:count],
                user, building_index, panels,
            )
            out.append((count, peb))
    else:
        for count in counts:
            sats = realize_constellation(
                config, variant, count, (seed, 3000 + count)
            )
            beams = satellite_beamformers(sats, waveform.n_transmissions, seed)
            panels = (
                realize_panels(config, sats, waveform, budget, seed)
                if group.use_ris
                else []
            )
            peb = _evaluate_group_point(
                config, waveform, budget, sats, beams, user, building_index, panels,
            )
            out.append((count, peb))
    return out


def _build_model_quietly(*args, **kwargs):
    """build_channel_model with steering-pole warnings suppressed.

    Satellites aim their arrays at the area origin, so sweep users often
    sit within microradians of the steering chart's pole. The bound
    consumes only the unit-vector gradients, which stay well conditioned
    there, so the azimuth-elevation chart warning carries no information
    at this layer.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GimbalWarning)
        return build_channel_model(*args, **kwargs)


def _evaluate_group_point(config, waveform, budget, satellites, beams,
                          user, building_index, panels) -> float:
    served = served_panels_for_user(panels, user.indoor, building_index)
    building_class = "default"
    if user.indoor and building_index is not None:
        building_class = config.buildings[building_index].building_class
    model = _build_model_quietly(
        waveform,
        budget,
        satellites,
        beams,
        np.array(user.position_m, dtype=float),
        user_indoor=user.indoor,
        building_class=building_class,
        served_panels=served,
        clock_bias_unknown=config.clock_bias_unknown,
    )
    return evaluate(model).peb_m


def worker_count() -> int:
    """Worker parallelism degree: PEBSIM_WORKERS, or automatic."""
    raw = os.environ.get(WORKERS_ENV, "").strip()
    if not raw:
        return max(1, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError as exc:
        raise InvalidInput(f"{WORKERS_ENV} must be an integer, got {raw!r}") from exc
    if n < 1:
        raise InvalidInput(f"{WORKERS_ENV} must be >= 1, got {n}")
    return n


def _parallel_map(fn, items, workers: int):
    """Ordered map preserving item order regardless of execution order."""
    if workers == 1 or len(items) <= 1:
        return [fn(*item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *item) for item in items]
        return [f.result() for f in futures]


def run_satcount_sweep(config: ScenarioConfig) -> SweepResult:
    """Evaluate every (group, count, seed) point of the sweep.

    Rows are ordered by group, then count ascending, then seed order.
    A degenerate draw records +inf rather than aborting.
    """
    if config.experiment != SATCOUNT:
        raise InvalidScenario(
            f"configuration declares experiment {config.experiment!r}, "
            f"expected {SATCOUNT!r}"
        )
    workers = worker_count()
    items = [
        (config, gi, seed)
        for gi in range(len(config.groups))
        for seed in config.seeds
    ]
    per_point = _parallel_map(_satcount_point, items, workers)
    by_key = {}
    for (cfg, gi, seed), counts_pebs in zip(items, per_point):
        for count, peb in counts_pebs:
            by_key[(gi, count, seed)] = peb
    rows = []
    medians = {}
    for gi, group in enumerate(config.groups):
        for count in config.satcount_sweep.counts:
            values = []
            for seed in config.seeds:
                peb = by_key[(gi, count, seed)]
                rows.append((group.label, count, seed, peb))
                values.append(peb)
            medians[(group.label, count)] = float(np.median(values))
    return SweepResult(kind=SATCOUNT, rows=tuple(rows), medians=medians)


def _area_strip(config: ScenarioConfig, epsilon: float, y: float):
    """PEB for every x-cell at one y row, median across seeds."""
    settings = config.area_map
    variant = config.constellation[settings.constellation]
    waveform = variant_waveform(config, variant)
    budget = variant_budget(config, variant)
    xs, _ = settings.cell_centers()
    per_seed = []
    for seed in config.seeds:
        satellites = realize_constellation(config, variant, settings.n_satellites, seed)
        beams = satellite_beamformers(satellites, waveform.n_transmissions, seed)
        panels = realize_panels(config, satellites, waveform, budget, seed,
                                epsilon_override=epsilon)
        row = []
        for x in xs:
            building_index = _building_of(config, float(x), float(y))
            indoor = building_index is not None
            served = served_panels_for_user(panels, indoor, building_index)
            building_class = (
                config.buildings[building_index].building_class if indoor else "default"
            )
            model = _build_model_quietly(
                waveform,
                budget,
                satellites,
                beams,
                np.array([x, y, settings.user_height_m], dtype=float),
                user_indoor=indoor,
                building_class=building_class,
                served_panels=served,
                clock_bias_unknown=config.clock_bias_unknown,
            )
            row.append((float(x), indoor, evaluate(model).peb_m))
        per_seed.append(row)
    merged = []
    for i in range(len(xs)):
        x, indoor, _ = per_seed[0][i]
        peb = float(np.median([row[i][2] for row in per_seed]))
        merged.append((x, indoor, peb))
    return merged


def run_area_map(config: ScenarioConfig) -> SweepResult:
    """Evaluate the grid for each energy-split value.

    Rows are ordered by epsilon, then y ascending, then x ascending.
    Cells with no information record +inf.
    """
    if config.experiment != AREA_MAP:
        raise InvalidScenario(
            f"configuration declares experiment {config.experiment!r}, "
            f"expected {AREA_MAP!r}"
        )
    workers = worker_count()
    settings = config.area_map
    _, ys = settings.cell_centers()
    items = [
        (config, epsilon, float(y))
        for epsilon in settings.epsilons
        for y in ys
    ]
    strips = _parallel_map(_area_strip, items, workers)
    rows = []
    medians = {}
    idx = 0
    for epsilon in settings.epsilons:
        indoor_vals = []
        outdoor_vals = []
        for y in ys:
            strip = strips[idx]
            idx += 1
            for x, indoor, peb in strip:
                rows.append((x, float(y), int(indoor), float(epsilon), peb))
                if math.isfinite(peb):
                    (indoor_vals if indoor else outdoor_vals).append(peb)
        medians[float(epsilon)] = (
            float(np.mean(indoor_vals)) if indoor_vals else float("inf"),
            float(np.mean(outdoor_vals)) if outdoor_vals else float("inf"),
        )
    return SweepResult(kind=AREA_MAP, rows=tuple(rows), medians=medians)


# ---------------------------------------------------------------------------
# CSV emission


def _fmt(value) -> str:
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return format(value, ".9g")
    return str(value)


def satcount_csv(result: SweepResult) -> str:
    lines = [SATCOUNT_HEADER]
    for label, count, seed, peb in result.rows:
        lines.append(f"{label},{count},{seed},{_fmt(float(peb))}")
    return "\n".join(lines) + "\n"


def area_csv(result: SweepResult) -> str:
    lines = [AREA_HEADER]
    for x, y, indoor, epsilon, peb in result.rows:
        lines.append(
            f"{_fmt(float(x))},{_fmt(float(y))},{indoor},{_fmt(float(epsilon))},{_fmt(float(peb))}"
        )
    return "\n".join(lines) + "\n"


def write_csv(result: SweepResult, path: str):
    text = satcount_csv(result) if result.kind == SATCOUNT else area_csv(result)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def summary_lines(result: SweepResult, config: ScenarioConfig):
    """One human-readable line per group (or per energy split)."""
    out = []
    if result.kind == SATCOUNT:
        top = config.satcount_sweep.counts[-1]
        for group in config.groups:
            med = result.medians[(group.label, top)]
            out.append(f"{group.label}: median peb {_fmt(med)} m at {top} satellites")
    else:
        for epsilon in config.area_map.epsilons:
            mean_in, mean_out = result.medians[float(epsilon)]
            out.append(
                f"epsilon {_fmt(float(epsilon))}: mean indoor peb {_fmt(mean_in)} m, "
                f"mean outdoor peb {_fmt(mean_out)} m"
            )
    return out
