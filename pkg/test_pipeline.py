# test_pipeline.py
"""
Run configuration parsing, routing and end-to-end pipeline runs.
"""

import json
from pathlib import Path
from types import SimpleNamespace

import pytest

from core.errors import ConfigError
from pipeline import CHECK_REGISTRY, parse_config, run_pipeline, serialize_config
from pipeline.config import PROJECT_ROOT, config_schema, physical_problems
from pipeline.nodes.derive import LAW_FILE
from pipeline.nodes.manifest import MANIFEST_FILE
from pipeline.routing import route_after_evolve, route_by_extremality

CONFIG_DIR = PROJECT_ROOT / "configs"


def config_errors(payload) -> list[dict]:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2)
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    return info.value.errors


# ============================================================================
# Configuration
# ============================================================================

def test_defaults_filled_in():
    config = parse_config("{}")
    assert config.l == 0
    assert config.background.charge_ratio == 1.0
    assert config.grid.n_points == 1181
    assert config.evolution.cfl == 0.5
    assert config.diagnostics == []


def test_charge_ratio_out_of_range():
    text = '{\n  "l": 0,\n  "background": {\n    "charge_ratio": 1.2\n  }\n}'
    errors = config_errors(text)
    assert len(errors) == 1
    assert errors[0]["loc"] == "background.charge_ratio"
    assert errors[0]["msg"] == "charge_ratio must lie in [0,1]"
    assert errors[0]["line"] == 4


def test_every_problem_reported():
    errors = config_errors({"l": -1, "grid": {"n_points": 3}, "colour": "red"})
    locs = {e["loc"] for e in errors}
    assert {"l", "grid.n_points", "colour"} <= locs


def test_syntax_error_line():
    errors = config_errors('{\n  "l": 0,\n}')
    assert errors[0]["loc"] == ""
    assert errors[0]["line"] == 3
    assert "JSON syntax error" in errors[0]["msg"]


def test_error_message_lists_locations():
    with pytest.raises(ConfigError, match="background.charge_ratio: charge_ratio must lie"):
        parse_config('{"background": {"charge_ratio": -0.5}}')


@pytest.mark.parametrize(
    "payload, fragment",
    [
        ({"grid": {"r_max": 1.5}}, "photon sphere"),
        ({"grid": {"r_max": 12.0}, "initial_data": {"center": 30.0}}, "lies outside the grid"),
        ({"background": {"charge_ratio": 0.8}, "diagnostics": ["h_drift"]}, "requires an extreme background"),
        ({"diagnostics": ["pseudo_h_decay"]}, "requires a subextreme background"),
        ({"l": 1, "diagnostics": ["commuted_n_energy"]}, "supports l in"),
        ({"diagnostics": ["no_such_check"]}, "Input should be"),
    ],
)
def test_inconsistent_configs(payload, fragment):
    errors = config_errors(payload)
    assert any(fragment in e["msg"] for e in errors)


def test_every_physical_problem_reported():
    errors = config_errors({
        "background": {"charge_ratio": 0.8},
        "grid": {"r_max": 1.5},
        "diagnostics": ["h_drift"],
    })
    assert len(errors) == 2
    by_loc = {e["loc"]: e["msg"] for e in errors}
    assert "photon sphere" in by_loc["grid.r_max"]
    assert "requires an extreme background" in by_loc["diagnostics.0"]


def test_physical_problems_reported_with_field_errors():
    errors = config_errors({"l": -1, "grid": {"r_max": 1.5}})
    locs = {e["loc"] for e in errors}
    assert locs == {"l", "grid.r_max"}


def test_physical_problems_skip_invalid_sections():
    assert physical_problems({"background": {"charge_ratio": 2.0}, "grid": {"r_max": 1.5}}) == []
    assert physical_problems({"l": "two", "diagnostics": ["commuted_n_energy"]}) == []
    assert physical_problems([]) == []
    problems = physical_problems({"l": 1, "diagnostics": ["hardy", "commuted_n_energy"]})
    assert [loc for loc, _ in problems] == [("diagnostics", 1)]


def test_integral_float_mode_is_checked():
    errors = config_errors({"l": 1.0, "diagnostics": ["commuted_n_energy"]})
    assert [e["loc"] for e in errors] == ["diagnostics.0"]
    assert "supports l in [0]" in errors[0]["msg"]


def test_serialize_round_trip(run_config_dict):
    run_config_dict["diagnostics"] = ["hardy", {"name": "h_drift", "params": {"tolerance": 0.05}}]
    config = parse_config(json.dumps(run_config_dict))
    text = serialize_config(config)
    assert text.endswith("}\n")
    assert parse_config(text) == config
    assert config.check_names == ["hardy", "h_drift"]


def test_schema_file_matches_registry():
    shipped = json.loads((CONFIG_DIR / "run_config.schema.json").read_text())
    assert shipped["$defs"]["CheckName"]["enum"] == list(CHECK_REGISTRY)
    generated = config_schema()
    assert set(generated["properties"]) == set(shipped["properties"])


@pytest.mark.parametrize("name", ["l0_aretakis.json", "subextreme_contrast.json"])
def test_shipped_configs_parse(name):
    config = parse_config((CONFIG_DIR / name).read_text())
    assert config.diagnostics


# ============================================================================
# Routing
# ============================================================================

def test_route_by_extremality(run_config_dict):
    extreme = parse_config(json.dumps(run_config_dict))
    run_config_dict["background"]["charge_ratio"] = 0.8
    subextreme = parse_config(json.dumps(run_config_dict))
    assert route_by_extremality({"config": extreme}) == "derive"
    assert route_by_extremality({"config": subextreme}) == "evolve"


def test_route_after_evolve(run_config_dict):
    bare = parse_config(json.dumps(run_config_dict))
    run_config_dict["diagnostics"] = ["hardy"]
    checked = parse_config(json.dumps(run_config_dict))
    done = SimpleNamespace()
    assert route_after_evolve({"config": checked, "result": None}) == "manifest"
    assert route_after_evolve({"config": bare, "result": done}) == "manifest"
    assert route_after_evolve({"config": checked, "result": done}) == "analyze"


# ============================================================================
# End-to-end runs
# ============================================================================

def test_evolve_only_run(run_config_dict):
    config = parse_config(json.dumps(run_config_dict))
    manifest = run_pipeline(config)
    out = Path(config.output_dir)

    assert manifest.passed
    assert manifest.verdicts == []
    assert (out / MANIFEST_FILE).is_file()
    assert (out / LAW_FILE).is_file()
    listed = {f.path for f in manifest.files}
    assert {"run_meta.json", "horizon_trace.csv", "boundary_flux.csv", LAW_FILE} <= listed
    assert MANIFEST_FILE not in listed
    assert manifest.config["l"] == 0

    on_disk = json.loads((out / MANIFEST_FILE).read_text())
    assert on_disk["version"] == manifest.version


def test_run_with_checks(run_config_dict):
    run_config_dict["diagnostics"] = [
        "hardy",
        {"name": "h_drift", "params": {"tolerance": 0.5}},
        {"name": "energy_balance", "params": {"tolerance": 0.5}},
    ]
    config = parse_config(json.dumps(run_config_dict))
    manifest = run_pipeline(config)
    out = Path(config.output_dir)

    assert not manifest.errors
    assert [v["check"] for v in manifest.verdicts] == ["energy_balance", "h_drift", "hardy"]
    hardy = json.loads((out / "hardy.json").read_text())
    assert hardy["pass"] is True
    assert hardy["measured"] <= 1.0
    assert (out / "hardy.csv").read_text().startswith("tstar,lhs,rhs,ratio\n")
    assert all(isinstance(v["measured"], float) for v in manifest.verdicts)


def test_manifest_lists_only_this_runs_files(run_config_dict, tmp_path):
    out = tmp_path / "reused"
    (out / "snapshots").mkdir(parents=True)
    (out / "hardy.json").write_text("{}\n")
    (out / "snapshots" / "snapshot_99999.csv").write_text("stale\n")

    config = parse_config(json.dumps(run_config_dict))
    manifest = run_pipeline(config, out)
    listed = [f.path for f in manifest.files]

    assert "hardy.json" not in listed
    assert "snapshots/snapshot_99999.csv" not in listed
    assert "run_meta.json" in listed
    assert listed == sorted(listed)
    for entry in manifest.files:
        assert (out / entry.path).stat().st_size == entry.size


def test_runs_are_reproducible(run_config_dict, tmp_path):
    run_config_dict["diagnostics"] = ["hardy"]
    config = parse_config(json.dumps(run_config_dict))
    first = run_pipeline(config, tmp_path / "a")
    second = run_pipeline(config, tmp_path / "b")

    assert [f.path for f in first.files] == [f.path for f in second.files]
    for entry in first.files:
        a = (tmp_path / "a" / entry.path).read_bytes()
        b = (tmp_path / "b" / entry.path).read_bytes()
        assert a == b, entry.path


def test_subextreme_run_has_no_law(run_config_dict):
    run_config_dict["background"]["charge_ratio"] = 0.8
    config = parse_config(json.dumps(run_config_dict))
    manifest = run_pipeline(config)
    assert not (Path(config.output_dir) / LAW_FILE).exists()
    assert "run_meta.json" in {f.path for f in manifest.files}


def test_failed_evolution_is_recorded(run_config_dict):
    run_config_dict["initial_data"]["center"] = 11.5
    run_config_dict["diagnostics"] = ["hardy"]
    config = parse_config(json.dumps(run_config_dict))
    manifest = run_pipeline(config)

    assert not manifest.passed
    assert manifest.errors[0]["stage"] == "evolve"
    assert "does not decay" in manifest.errors[0]["message"]
    assert manifest.verdicts == []


@pytest.mark.slow
def test_extreme_l0_acceptance_run(tmp_path):
    config = parse_config((CONFIG_DIR / "l0_aretakis.json").read_text())
    manifest = run_pipeline(config, tmp_path / "l0")
    assert not manifest.errors
    verdicts = {v["check"]: v for v in manifest.verdicts}
    assert verdicts["h_drift"]["pass"]
    assert verdicts["energy_balance"]["pass"]
    assert verdicts["blowup_slope"]["measured"] == pytest.approx(1.0, abs=0.3)


@pytest.mark.slow
def test_subextreme_contrast_run(tmp_path):
    config = parse_config((CONFIG_DIR / "subextreme_contrast.json").read_text())
    manifest = run_pipeline(config, tmp_path / "sub")
    assert not manifest.errors
    verdicts = {v["check"]: v for v in manifest.verdicts}
    assert verdicts["pseudo_h_decay"]["measured"] < 0
