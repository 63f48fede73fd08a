"""Configuration parsing, experiment orchestration, CSV emission, CLI."""

import json

import numpy as np
import pytest

from pebsim import cli
from pebsim.channel import REFLECT, REFRACT
from pebsim.errors import (
    InvalidInput,
    InvalidScenario,
    ParseError,
    ValidationError,
)
from pebsim.scenario import (
    AREA_HEADER,
    AREA_MAP,
    SATCOUNT,
    SATCOUNT_HEADER,
    WORKERS_ENV,
    AreaMapSettings,
    BuildingFootprint,
    SweepResult,
    _building_of,
    _fmt,
    apply_overrides,
    area_csv,
    parse_config,
    realize_constellation,
    realize_panels,
    run_area_map,
    run_satcount_sweep,
    satcount_csv,
    satellite_beamformers,
    served_panels_for_user,
    summary_lines,
    variant_budget,
    variant_waveform,
    worker_count,
    write_csv,
)


def parse(doc: dict):
    return parse_config(json.dumps(doc))


def tiny_satcount_doc() -> dict:
    """Small, fast sweep: 2 groups x 2 counts x 2 seeds, toy hardware."""
    return {
        "seeds": [0, 1],
        "waveform": {
            "carrier_hz": 28.0e9,
            "bandwidth_hz": 64.0e6,
            "n_subcarriers": 64,
            "n_transmissions": 2,
        },
        "satellite_array": {"rows": 2, "cols": 2},
        "ris_panels": [
            {
                "position_m": [0.0, 0.0, 2.5],
                "outward_normal": [-1.0, 0.0, 0.0],
                "rows": 4,
                "cols": 4,
                "mode": "active_star",
                "epsilon": 0.5,
                "supply_power_dbm": -30.0,
                "building": 0,
            }
        ],
        "groups": [
            {"label": "a", "constellation": "leo", "use_ris": True, "user": 0},
            {"label": "b", "constellation": "leo", "use_ris": False, "user": 1},
        ],
        "satcount_sweep": {"counts": [1, 2], "nested": True, "aggregate": "median"},
    }


def tiny_area_doc() -> dict:
    """Four-cell grid over one small building, one energy split, one seed."""
    return {
        "experiment": "area_map",
        "seeds": [0],
        "waveform": {
            "carrier_hz": 28.0e9,
            "bandwidth_hz": 64.0e6,
            "n_subcarriers": 64,
            "n_transmissions": 2,
        },
        "satellite_array": {"rows": 2, "cols": 2},
        "buildings": [
            {"x_min": 0.0, "x_max": 10.0, "y_min": -10.0, "y_max": 10.0,
             "height_m": 20.0}
        ],
        "ris_panels": [
            {
                "position_m": [0.0, 0.0, 2.5],
                "outward_normal": [-1.0, 0.0, 0.0],
                "rows": 4,
                "cols": 4,
                "mode": "active_star",
                "epsilon": 0.5,
                "supply_power_dbm": -30.0,
                "building": 0,
            }
        ],
        "users": [
            {"position_m": [5.0, 0.0, 1.5], "indoor": True},
            {"position_m": [-5.0, 0.0, 1.5], "indoor": False},
        ],
        "groups": [
            {"label": "a", "constellation": "leo", "use_ris": False, "user": 1},
        ],
        "area_map": {
            "x_min": -10.0, "x_max": 10.0, "y_min": -10.0, "y_max": 10.0,
            "cell_m": 10.0, "user_height_m": 1.5, "epsilons": [0.5],
            "n_satellites": 2, "constellation": "leo",
        },
    }


# ---------------------------------------------------------------------------
# schema


def test_empty_document_resolves_to_full_defaults():
    cfg = parse({})
    assert cfg.experiment == SATCOUNT
    assert cfg.seeds == tuple(range(20))
    assert len(cfg.groups) == 6
    assert cfg.satcount_sweep.counts == tuple(range(1, 13))
    assert cfg.satcount_sweep.nested is True
    assert cfg.ris_panels[0].mode == "active_star"
    assert cfg.ris_panels[0].supply_power_dbm == -30.0
    assert cfg.area_map.epsilons == (0.25, 0.5, 0.75)
    assert cfg.clock_bias_unknown is False
    assert cfg.waveform.n_subcarriers == 3000
    assert "meo" in cfg.constellation


@pytest.mark.parametrize("doc,needle", [
    ({"bogus": 1}, "bogus"),
    ({"waveform": {"bogus": 1}}, "waveform.bogus"),
    ({"satellite_array": {"rows": 8, "diag": 1}}, "satellite_array.diag"),
    ({"satcount_sweep": {"step": 2}}, "satcount_sweep.step"),
    ({"area_map": {"cells": 3}}, "area_map.cells"),
])
def test_unknown_keys_are_rejected_with_their_path(doc, needle):
    with pytest.raises(ValidationError) as err:
        parse(doc)
    assert needle in str(err.value)


@pytest.mark.parametrize("seeds", [7, [], [1, 1], [-3], [True], [1.5]])
def test_bad_seed_lists_are_rejected(seeds):
    with pytest.raises(ValidationError) as err:
        parse({"seeds": seeds})
    assert "seeds" in str(err.value)


def test_experiment_and_clock_mode_values_are_checked():
    with pytest.raises(ValidationError) as err:
        parse({"experiment": "both"})
    assert "experiment" in str(err.value)
    with pytest.raises(ValidationError) as err:
        parse({"clock_bias_mode": "wobbly"})
    assert "clock_bias_mode" in str(err.value)
    assert parse({"clock_bias_mode": "unknown"}).clock_bias_unknown is True


def test_malformed_json_raises_parse_error():
    with pytest.raises(ParseError):
        parse_config("{not json")


def test_panel_must_sit_on_a_facade_plane():
    doc = tiny_satcount_doc()
    doc["ris_panels"][0]["position_m"] = [5.0, 0.0, 2.5]
    with pytest.raises(ValidationError) as err:
        parse(doc)
    assert "ris_panels[0].position_m" in str(err.value)


def test_panel_normal_must_match_a_facade_direction():
    doc = tiny_satcount_doc()
    doc["ris_panels"][0]["outward_normal"] = [0.0, 0.0, 1.0]
    with pytest.raises(ValidationError) as err:
        parse(doc)
    assert "outward_normal" in str(err.value)


def test_panel_normal_must_be_unit_length():
    doc = tiny_satcount_doc()
    doc["ris_panels"][0]["outward_normal"] = [-2.0, 0.0, 0.0]
    with pytest.raises(ValidationError) as err:
        parse(doc)
    assert "unit vector" in str(err.value)


def test_panel_building_index_and_epsilon_are_checked():
    doc = tiny_satcount_doc()
    doc["ris_panels"][0]["building"] = 3
    with pytest.raises(ValidationError) as err:
        parse(doc)
    assert "building" in str(err.value)
    doc = tiny_satcount_doc()
    doc["ris_panels"][0]["epsilon"] = 1.5
    with pytest.raises(ValidationError):
        parse(doc)
    doc = tiny_satcount_doc()
    doc["ris_panels"][0]["mode"] = "chameleon"
    with pytest.raises(ValidationError) as err:
        parse(doc)
    assert "mode" in str(err.value)


def test_panel_outside_its_facade_rectangle_is_rejected():
    doc = tiny_satcount_doc()
    doc["ris_panels"][0]["position_m"] = [0.0, 0.0, 25.0]  # above the roof
    with pytest.raises(ValidationError) as err:
        parse(doc)
    assert "facade" in str(err.value)


def test_building_extents_are_checked():
    with pytest.raises(ValidationError) as err:
        parse({"buildings": [{"x_min": 5.0, "x_max": 5.0, "y_min": 0.0,
                              "y_max": 1.0, "height_m": 10.0}]})
    assert "x_max" in str(err.value)
    with pytest.raises(ValidationError) as err:
        parse({"buildings": [{"x_min": 0.0, "x_max": 5.0, "y_min": 0.0,
                              "y_max": 1.0, "height_m": 0.0}]})
    assert "height_m" in str(err.value)


def test_indoor_user_must_lie_inside_a_building():
    doc = tiny_satcount_doc()
    doc["users"] = [{"position_m": [-5.0, 0.0, 1.5], "indoor": True}]
    doc["groups"] = [
        {"label": "a", "constellation": "leo", "use_ris": False, "user": 0}
    ]
    with pytest.raises(ValidationError) as err:
        parse(doc)
    assert "users[0].position_m" in str(err.value)


def test_group_validation():
    doc = tiny_satcount_doc()
    doc["groups"][1]["label"] = "a"
    with pytest.raises(ValidationError) as err:
        parse(doc)
    assert "duplicate" in str(err.value)
    doc = tiny_satcount_doc()
    doc["groups"][0]["constellation"] = "heo"
    with pytest.raises(ValidationError) as err:
        parse(doc)
    assert "heo" in str(err.value)
    doc = tiny_satcount_doc()
    doc["groups"][0]["user"] = 5
    with pytest.raises(ValidationError) as err:
        parse(doc)
    assert "user" in str(err.value)
    doc = tiny_satcount_doc()
    doc["groups"][0]["use_ris"] = "yes"
    with pytest.raises(ValidationError):
        parse(doc)


def test_satcount_sweep_settings_are_checked():
    with pytest.raises(ValidationError) as err:
        parse({"satcount_sweep": {"counts": [3, 2]}})
    assert "strictly increasing" in str(err.value)
    with pytest.raises(ValidationError):
        parse({"satcount_sweep": {"counts": []}})
    with pytest.raises(ValidationError):
        parse({"satcount_sweep": {"counts": [0]}})
    with pytest.raises(ValidationError) as err:
        parse({"satcount_sweep": {"counts": [1], "aggregate": "mean"}})
    assert "median" in str(err.value)
    with pytest.raises(ValidationError):
        parse({"satcount_sweep": {"counts": [1], "nested": "yes"}})


def test_area_map_settings_are_checked():
    with pytest.raises(ValidationError) as err:
        parse({"area_map": {"epsilons": [1.5]}})
    assert "epsilons" in str(err.value)
    with pytest.raises(ValidationError):
        parse({"area_map": {"epsilons": []}})
    with pytest.raises(ValidationError) as err:
        parse({"area_map": {"constellation": "heo"}})
    assert "area_map.constellation" in str(err.value)
    with pytest.raises(ValidationError) as err:
        parse({"area_map": {"x_min": 10.0, "x_max": -10.0}})
    assert "x_max" in str(err.value)


def test_budget_o2i_table_is_checked():
    with pytest.raises(ValidationError) as err:
        parse({"budget": {"o2i_loss_db": {"default": -3.0}}})
    assert "o2i_loss_db" in str(err.value)


# ---------------------------------------------------------------------------
# overrides


def test_overrides_parse_json_with_string_fallback():
    doc = apply_overrides({}, ["waveform.bandwidth_hz=3e8",
                               "clock_bias_mode=unknown",
                               "satcount_sweep.counts=[2,4]"])
    assert doc["waveform"]["bandwidth_hz"] == 3.0e8
    assert doc["clock_bias_mode"] == "unknown"
    assert doc["satcount_sweep"]["counts"] == [2, 4]


def test_overrides_leave_the_input_document_alone():
    base = {"waveform": {"n_subcarriers": 64}}
    out = apply_overrides(base, ["waveform.n_subcarriers=32"])
    assert base["waveform"]["n_subcarriers"] == 64
    assert out["waveform"]["n_subcarriers"] == 32


def test_override_without_equals_sign_is_rejected():
    with pytest.raises(ValidationError) as err:
        apply_overrides({}, ["waveform.n_subcarriers"])
    assert "--override" in str(err.value)


# ---------------------------------------------------------------------------
# realization helpers


def test_variant_overrides_reshape_waveform_and_budget():
    cfg = parse({})
    leo = cfg.constellation["leo"]
    meo = cfg.constellation["meo"]
    assert variant_waveform(cfg, leo) == cfg.waveform
    wf = variant_waveform(cfg, meo)
    assert wf.carrier_hz == 1.575e9
    assert wf.bandwidth_hz == 20.0e6
    assert wf.n_subcarriers == 2000
    assert wf.n_transmissions == cfg.waveform.n_transmissions
    assert variant_budget(cfg, leo) == cfg.budget
    assert variant_budget(cfg, meo).tx_power_dbm == 44.4
    assert variant_budget(cfg, meo).noise_figure_db == cfg.budget.noise_figure_db


def test_realize_constellation_and_beamformers():
    cfg = parse(tiny_satcount_doc())
    leo = cfg.constellation["leo"]
    assert realize_constellation(cfg, leo, 0, 0) == []
    sats = realize_constellation(cfg, leo, 3, 7)
    assert len(sats) == 3
    assert sats[0].array_rows == 2 and sats[0].array_cols == 2
    beams = satellite_beamformers(sats, 2, 7)
    assert len(beams) == 3
    assert beams[0].shape == (2, 4)
    again = satellite_beamformers(sats, 2, 7)
    for a, b in zip(beams, again):
        assert np.array_equal(a, b)
    other = satellite_beamformers(sats, 2, 8)
    assert not np.array_equal(beams[0], other[0])


def test_realize_panels_profiles_energy_split_and_gain():
    doc = tiny_satcount_doc()
    doc["ris_panels"].append(
        {
            "position_m": [30.0, 0.0, 2.5],
            "outward_normal": [1.0, 0.0, 0.0],
            "rows": 4,
            "cols": 4,
            "mode": "reflect_only",
            "epsilon": 1.0,
            "supply_power_dbm": 0.0,
            "building": 0,
        }
    )
    cfg = parse(doc)
    leo = cfg.constellation["leo"]
    sats = realize_constellation(cfg, leo, 2, 0)

    panels = realize_panels(cfg, sats, cfg.waveform, cfg.budget, 0,
                            epsilon_override=0.9)
    # the override touches the dual-branch panel only
    assert panels[0].epsilon == 0.9
    assert panels[1].epsilon == 1.0
    # the micro-watt supply dwarfs the incident satellite power
    assert panels[0].amplitude_gain > 1.0
    assert panels[1].amplitude_gain == 1.0
    assert panels[0].phase_profiles.shape == (2, 16)

    again = realize_panels(cfg, sats, cfg.waveform, cfg.budget, 0,
                           epsilon_override=0.9)
    assert np.array_equal(panels[0].phase_profiles, again[0].phase_profiles)
    reseeded = realize_panels(cfg, sats, cfg.waveform, cfg.budget, 1,
                              epsilon_override=0.9)
    assert not np.array_equal(panels[0].phase_profiles, reseeded[0].phase_profiles)


def test_served_panels_routing():
    doc = tiny_satcount_doc()
    doc["ris_panels"].append(
        {
            "position_m": [30.0, 0.0, 2.5],
            "outward_normal": [1.0, 0.0, 0.0],
            "rows": 4,
            "cols": 4,
            "mode": "reflect_only",
            "epsilon": 1.0,
            "supply_power_dbm": 0.0,
            "building": 0,
        }
    )
    cfg = parse(doc)
    panels = realize_panels(cfg, [], cfg.waveform, cfg.budget, 0)

    indoor = served_panels_for_user(panels, indoor=True, building_index=0)
    assert [(p.panel_id, b) for p, b in indoor] == [(0, REFRACT)]
    outdoor = served_panels_for_user(panels, indoor=False, building_index=None)
    assert [(p.panel_id, b) for p, b in outdoor] == [(0, REFLECT), (1, REFLECT)]
    stranded = served_panels_for_user(panels, indoor=True, building_index=None)
    assert stranded == []


def test_building_lookup_is_edge_inclusive():
    cfg = parse(tiny_satcount_doc())
    assert _building_of(cfg, 0.0, 0.0) == 0
    assert _building_of(cfg, 30.0, 15.0) == 0
    assert _building_of(cfg, -0.001, 0.0) is None
    assert BuildingFootprint(0, 1, 0, 1, 5).contains(1.0, 0.0)


def test_cell_centers_cover_the_interior():
    settings = AreaMapSettings(
        x_min=-10.0, x_max=10.0, y_min=0.0, y_max=5.0, cell_m=2.0,
        user_height_m=1.5, epsilons=(0.5,), n_satellites=1, constellation="leo",
    )
    xs, ys = settings.cell_centers()
    np.testing.assert_allclose(xs, np.arange(-9.0, 10.0, 2.0))
    np.testing.assert_allclose(ys, [1.0, 3.0])


def test_worker_count_env(monkeypatch):
    monkeypatch.delenv(WORKERS_ENV, raising=False)
    assert worker_count() >= 1
    monkeypatch.setenv(WORKERS_ENV, "3")
    assert worker_count() == 3
    monkeypatch.setenv(WORKERS_ENV, "0")
    with pytest.raises(InvalidInput):
        worker_count()
    monkeypatch.setenv(WORKERS_ENV, "many")
    with pytest.raises(InvalidInput):
        worker_count()


# ---------------------------------------------------------------------------
# sweeps


@pytest.fixture(scope="module")
def tiny_sweep():
    cfg = parse(tiny_satcount_doc())
    return cfg, run_satcount_sweep(cfg)


def test_satcount_rows_are_ordered_and_complete(tiny_sweep):
    cfg, result = tiny_sweep
    assert result.kind == SATCOUNT
    expected_keys = [
        (label, count, seed)
        for label in ("a", "b")
        for count in (1, 2)
        for seed in (0, 1)
    ]
    assert [(r[0], r[1], r[2]) for r in result.rows] == expected_keys
    for row in result.rows:
        assert row[3] > 0.0
    for label in ("a", "b"):
        for count in (1, 2):
            vals = [r[3] for r in result.rows if r[0] == label and r[1] == count]
            assert result.medians[(label, count)] == pytest.approx(
                float(np.median(vals))
            )


def test_satcount_sweep_is_deterministic(tiny_sweep):
    cfg, result = tiny_sweep
    assert satcount_csv(run_satcount_sweep(cfg)) == satcount_csv(result)


def test_experiment_kind_is_enforced_both_ways():
    sat_cfg = parse(tiny_satcount_doc())
    area_cfg = parse(tiny_area_doc())
    with pytest.raises(InvalidScenario):
        run_area_map(sat_cfg)
    with pytest.raises(InvalidScenario):
        run_satcount_sweep(area_cfg)


@pytest.fixture(scope="module")
def tiny_area():
    cfg = parse(tiny_area_doc())
    return cfg, run_area_map(cfg)


def test_area_rows_are_ordered_with_correct_indoor_flags(tiny_area):
    cfg, result = tiny_area
    assert result.kind == AREA_MAP
    assert [(r[0], r[1]) for r in result.rows] == [
        (-5.0, -5.0), (5.0, -5.0), (-5.0, 5.0), (5.0, 5.0)
    ]
    for x, y, indoor, epsilon, peb in result.rows:
        assert epsilon == 0.5
        assert indoor == (1 if x > 0 else 0)
        assert peb > 0.0
    mean_in, mean_out = result.medians[0.5]
    finite_in = [r[4] for r in result.rows if r[2] == 1 and np.isfinite(r[4])]
    assert mean_in == pytest.approx(float(np.mean(finite_in)))


# ---------------------------------------------------------------------------
# CSV emission


def test_fmt_compact_numbers_and_inf():
    assert _fmt(float("inf")) == "inf"
    assert _fmt(0.123456789012345) == "0.123456789"
    assert _fmt(1.0) == "1"
    assert _fmt(3) == "3"


def test_satcount_csv_shape(tiny_sweep):
    cfg, result = tiny_sweep
    text = satcount_csv(result)
    lines = text.splitlines()
    assert lines[0] == SATCOUNT_HEADER
    assert len(lines) == 1 + len(result.rows)
    assert text.endswith("\n")
    first = lines[1].split(",")
    assert first[0] == "a" and first[1] == "1" and first[2] == "0"


def test_area_csv_shape(tiny_area):
    cfg, result = tiny_area
    lines = area_csv(result).splitlines()
    assert lines[0] == AREA_HEADER
    assert lines[1] == "-5,-5,0,0.5," + _fmt(result.rows[0][4])


def test_infinite_bounds_serialize_as_inf():
    result = SweepResult(
        kind=SATCOUNT,
        rows=(("g", 1, 0, float("inf")),),
        medians={("g", 1): float("inf")},
    )
    assert satcount_csv(result).splitlines()[1] == "g,1,0,inf"


def test_write_csv_bytes_are_stable(tiny_sweep, tmp_path):
    cfg, result = tiny_sweep
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(result, str(p1))
    write_csv(result, str(p2))
    data = p1.read_bytes()
    assert data == p2.read_bytes()
    assert b"\r" not in data


def test_summary_lines(tiny_sweep, tiny_area):
    cfg, result = tiny_sweep
    lines = summary_lines(result, cfg)
    assert len(lines) == 2
    assert lines[0].startswith("a: median peb ")
    assert lines[0].endswith(" m at 2 satellites")
    area_cfg, area_result = tiny_area
    lines = summary_lines(area_result, area_cfg)
    assert len(lines) == 1
    assert lines[0].startswith("epsilon 0.5: mean indoor peb ")


# ---------------------------------------------------------------------------
# CLI


def write_doc(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_cli_validate_echoes_the_resolved_document(tmp_path, capsys):
    path = write_doc(tmp_path, tiny_satcount_doc())
    assert cli.main(["validate", "--config", path]) == 0
    echoed = json.loads(capsys.readouterr().out)
    assert echoed["seeds"] == [0, 1]
    assert echoed["waveform"]["n_subcarriers"] == 64
    assert echoed["budget"]["tx_power_dbm"] == 55.0


def test_cli_validate_applies_overrides_and_seed_flag(tmp_path, capsys):
    path = write_doc(tmp_path, tiny_satcount_doc())
    rc = cli.main([
        "validate", "--config", path,
        "--override", "waveform.n_subcarriers=32",
        "--seeds", "3,4",
    ])
    assert rc == 0
    echoed = json.loads(capsys.readouterr().out)
    assert echoed["waveform"]["n_subcarriers"] == 32
    assert echoed["seeds"] == [3, 4]


def test_cli_config_problems_exit_2(tmp_path, capsys):
    missing = str(tmp_path / "nope.json")
    assert cli.main(["validate", "--config", missing]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["validate", "--config", str(bad)]) == 2
    schema = write_doc(tmp_path, {"bogus": 1}, "schema.json")
    assert cli.main(["validate", "--config", schema]) == 2
    ok = write_doc(tmp_path, tiny_satcount_doc(), "ok.json")
    assert cli.main(["validate", "--config", ok, "--seeds", "x"]) == 2
    capsys.readouterr()


def test_cli_satcount_writes_csv(tmp_path, capsys):
    path = write_doc(tmp_path, tiny_satcount_doc(), "tiny.json")
    out = tmp_path / "out"
    assert cli.main(["satcount", "--config", path, "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    csv_path = out / "tiny_peb.csv"
    assert csv_path.exists()
    assert f"wrote {csv_path}" in printed
    lines = csv_path.read_text().splitlines()
    assert lines[0] == SATCOUNT_HEADER
    assert len(lines) == 1 + 2 * 2 * 2


def test_cli_seed_flag_changes_the_rows(tmp_path, capsys):
    path = write_doc(tmp_path, tiny_satcount_doc(), "tiny.json")
    out = tmp_path / "seeded"
    rc = cli.main(["satcount", "--config", path, "--out", str(out),
                   "--seeds", "5"])
    assert rc == 0
    capsys.readouterr()
    lines = (out / "tiny_peb.csv").read_text().splitlines()
    assert len(lines) == 1 + 2 * 2
    assert all(line.split(",")[2] == "5" for line in lines[1:])


def test_cli_experiment_mismatch_exits_2(tmp_path, capsys):
    path = write_doc(tmp_path, tiny_satcount_doc())
    assert cli.main(["areamap", "--config", path, "--out", str(tmp_path)]) == 2
    assert "experiment" in capsys.readouterr().err


def test_cli_areamap_writes_csv(tmp_path, capsys):
    path = write_doc(tmp_path, tiny_area_doc(), "grid.json")
    out = tmp_path / "out"
    assert cli.main(["areamap", "--config", path, "--out", str(out)]) == 0
    capsys.readouterr()
    lines = (out / "grid_peb.csv").read_text().splitlines()
    assert lines[0] == AREA_HEADER
    assert len(lines) == 1 + 4
