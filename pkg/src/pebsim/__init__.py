"""Position error bounds for satellite downlink localization aided by
reconfigurable surfaces.

The package realizes randomized satellite constellations, builds the
downlink OFDM observation model over direct and surface-relayed paths,
assembles the Fisher information over position and nuisance parameters,
and reports the position error bound (PEB). Scenario sweeps reproduce
the bound as a function of constellation size and as a map over a mixed
indoor/outdoor service area.
"""

from .channel import (
    ChannelModel,
    PropagationPath,
    RisPanel,
    WaveformConfig,
    active_gain,
    array_response,
    array_response_from_direction,
    build_channel_model,
    incident_panel_power,
    random_beamformer,
    random_phase_profile,
    star_coefficients,
)
from .constants import (
    BOLTZMANN_J_PER_K,
    EARTH_MU_M3_S2,
    EARTH_RADIUS_M,
    SPEED_OF_LIGHT,
)
from .constellation import (
    ConstellationSpec,
    SatelliteState,
    circular_orbital_speed,
    draw_constellation,
    slant_range,
)
from .errors import (
    BranchUnsupported,
    DegenerateGeometry,
    GimbalWarning,
    InvalidAltitude,
    InvalidInput,
    InvalidMask,
    InvalidScenario,
    MissingBuildingClass,
    NoisePowerZero,
    ParseError,
    PebsimError,
    ValidationError,
)
from .fim import (
    DelayToy,
    FimResult,
    UnknownsLayout,
    assemble_fim,
    assemble_fim_dense,
    chain_rule_check,
    efim_position,
    evaluate,
    ml_delay_oracle,
    peb,
    peb_with_null_space,
)
from .geometry import (
    AngleTuple,
    angles_from_direction,
    departure_angles,
    direction_from_angles,
    doppler_shift,
    los_direction,
    orientation_frame_from_boresight,
    position_jacobians,
    propagation_delay,
)
from .linkbudget import (
    BudgetConfig,
    PathBudget,
    dbm_to_watts,
    free_space_path_loss,
    noise_power_per_subcarrier,
    o2i_penetration_loss,
    path_amplitude,
    watts_to_dbm,
)
from .scenario import (
    ScenarioConfig,
    SweepResult,
    apply_overrides,
    area_csv,
    default_document,
    load_config,
    parse_config,
    run_area_map,
    run_satcount_sweep,
    satcount_csv,
    summary_lines,
    write_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AngleTuple",
    "BOLTZMANN_J_PER_K",
    "BranchUnsupported",
    "BudgetConfig",
    "ChannelModel",
    "ConstellationSpec",
    "DegenerateGeometry",
    "DelayToy",
    "EARTH_MU_M3_S2",
    "EARTH_RADIUS_M",
    "FimResult",
    "GimbalWarning",
    "InvalidAltitude",
    "InvalidInput",
    "InvalidMask",
    "InvalidScenario",
    "MissingBuildingClass",
    "NoisePowerZero",
    "ParseError",
    "PathBudget",
    "PebsimError",
    "PropagationPath",
    "RisPanel",
    "SPEED_OF_LIGHT",
    "SatelliteState",
    "ScenarioConfig",
    "SweepResult",
    "UnknownsLayout",
    "ValidationError",
    "WaveformConfig",
    "active_gain",
    "angles_from_direction",
    "apply_overrides",
    "area_csv",
    "array_response",
    "array_response_from_direction",
    "assemble_fim",
    "assemble_fim_dense",
    "build_channel_model",
    "chain_rule_check",
    "circular_orbital_speed",
    "dbm_to_watts",
    "default_document",
    "departure_angles",
    "direction_from_angles",
    "doppler_shift",
    "draw_constellation",
    "efim_position",
    "evaluate",
    "free_space_path_loss",
    "incident_panel_power",
    "load_config",
    "los_direction",
    "ml_delay_oracle",
    "noise_power_per_subcarrier",
    "o2i_penetration_loss",
    "orientation_frame_from_boresight",
    "parse_config",
    "path_amplitude",
    "peb",
    "peb_with_null_space",
    "position_jacobians",
    "propagation_delay",
    "random_beamformer",
    "random_phase_profile",
    "run_area_map",
    "run_satcount_sweep",
    "satcount_csv",
    "slant_range",
    "star_coefficients",
    "summary_lines",
    "watts_to_dbm",
    "write_csv",
]
