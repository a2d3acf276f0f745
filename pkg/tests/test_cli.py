"""Config parsing and command-line interface tests (in-process)."""

import json

import numpy as np
import pytest

from blochdyn.cli import main
from blochdyn.config import (
    load_config,
    load_template,
    parse_config,
    template_names,
    template_text,
)
from blochdyn.errors import ConfigError, UnphysicalStateError

BASE = {
    "system": {
        "levels": 2,
        "energies": [0.0, 1.0],
        "dipoles": [
            {"levels": [0, 1], "moment": 1.0, "axis": "x"},
            {"levels": [0, 1], "moment": 1.0, "axis": "y"},
        ],
    },
    "dissipation": {
        "dephasing": [[0.0, 0.3], [0.3, 0.0]],
        "relaxation": [[0.0, 0.2], [0.05, 0.0]],
    },
    "field": {
        "kind": "piecewise",
        "segments": [
            {"duration": 1.0, "values": [0.5, 0.0]},
            {"duration": 1.0, "values": [0.0, 0.0]},
        ],
    },
    "initial": {"pure": [[0.0, 0.0], [1.0, 0.0]]},
}


def make_doc(**overrides):
    doc = json.loads(json.dumps(BASE))
    for key, value in overrides.items():
        if value is None:
            doc.pop(key, None)
        else:
            doc[key] = value
    return doc


def write_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_parse_minimal_config():
    cfg = parse_config(make_doc())
    assert cfg.system.dim == 2
    assert cfg.field.total_duration == pytest.approx(2.0)
    assert cfg.duration == pytest.approx(2.0)  # defaults to the field length
    assert np.allclose(cfg.rho0, np.diag([0.0, 1.0]))


def test_parse_rejects_missing_section():
    with pytest.raises(ConfigError, match="initial"):
        parse_config(make_doc(initial=None))


def test_parse_rejects_unknown_keys():
    doc = make_doc()
    doc["system"]["extra"] = 1
    with pytest.raises(ConfigError):
        parse_config(doc)


def test_parse_rejects_mismatched_rate_matrix():
    doc = make_doc()
    doc["dissipation"]["dephasing"] = [[0.0, 0.1, 0.0]] * 3
    with pytest.raises(ConfigError, match="rate matrices"):
        parse_config(doc)
    doc = make_doc()
    three = [[0.0, 0.1, 0.1], [0.1, 0.0, 0.1], [0.1, 0.1, 0.0]]
    doc["dissipation"] = {"dephasing": three, "relaxation": three}
    with pytest.raises(ConfigError, match="levels"):
        parse_config(doc)


def test_parse_rejects_field_width_mismatch():
    doc = make_doc()
    doc["field"]["segments"][0]["values"] = [0.5]
    with pytest.raises(ConfigError):
        parse_config(doc)


def test_parse_rejects_run_duration_beyond_field():
    doc = make_doc(run={"duration": 5.0})
    with pytest.raises(ConfigError, match="duration"):
        parse_config(doc)


def test_parse_rejects_sweep_control_out_of_range():
    doc = make_doc(sweep={"control": 7, "amplitudes": [0, 1, 2, 3, 4, 5]})
    with pytest.raises(ConfigError, match="control"):
        parse_config(doc)


def test_parse_unphysical_density_raises_physics_error():
    doc = make_doc(
        initial={"density": [[[1.4, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.4, 0.0]]]}
    )
    with pytest.raises(UnphysicalStateError):
        parse_config(doc)


def test_parse_coherence_initial_state():
    doc = make_doc(initial={"coherence": {"bloch": [0.3, 0.0, 0.4]}})
    cfg = parse_config(doc)
    assert abs(np.trace(cfg.rho0) - 1.0) < 1e-12


def test_load_config_reports_json_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"system": }')
    with pytest.raises(ConfigError, match="line"):
        load_config(str(path))


def test_load_config_missing_file():
    with pytest.raises(ConfigError):
        load_config("/nonexistent/nowhere.json")


def test_templates_ship_and_parse():
    names = template_names()
    assert len(names) == 3
    for name in names:
        cfg = load_template(name)
        assert cfg.system.dim in (2, 3)
        json.loads(template_text(name))  # text form is valid JSON


def test_template_round_trip(tmp_path):
    for name in template_names():
        out = tmp_path / ("%s.json" % name)
        assert main(["template", name, "--out", str(out)]) == 0
        reloaded = load_config(str(out))
        assert reloaded.equivalent(load_template(name))


def test_template_lists_choices_on_stdout(capsys):
    assert main(["template", template_names()[0]]) == 0
    text = capsys.readouterr().out
    json.loads(text)


def test_simulate_writes_deterministic_csv(tmp_path):
    cfg_path = write_config(tmp_path, make_doc(run={"outputs": ["bloch", "purity"]}))
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["simulate", "--config", cfg_path, "--out", str(out1)]) == 0
    assert main(["simulate", "--config", cfg_path, "--out", str(out2)]) == 0
    b1, b2 = out1.read_bytes(), out2.read_bytes()
    assert b1 == b2
    lines = b1.decode().splitlines()
    header = [h for h in lines if not h.startswith("#")][0]
    cols = header.split(",")
    assert cols[0] == "time"
    assert "x" in cols and "purity" in cols
    first = [h for h in lines if not h.startswith("#")][1]
    assert float(first.split(",")[0]) == 0.0


def test_simulate_sample_dt_flag(tmp_path):
    cfg_path = write_config(tmp_path, make_doc())
    out = tmp_path / "fine.csv"
    assert main(["simulate", "--config", cfg_path, "--out", str(out),
                 "--sample-dt", "0.5"]) == 0
    rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert len(rows) - 1 == 5  # 0.0, 0.5, 1.0, 1.5, 2.0


def test_analyze_report_content(tmp_path, capsys):
    cfg_path = write_config(tmp_path, make_doc())
    out = tmp_path / "report.json"
    assert main(["analyze", "--config", cfg_path, "--out", str(out)]) == 0
    capsys.readouterr()
    report = json.loads(out.read_text())
    assert report["support_overlap"] == []
    assert report["cancellation_feasible"] is False
    assert report["hamiltonian_algebra_dim"] == 4
    assert report["affine_closure_dim"] == 12
    assert report["homogeneous_dim"] == 9
    assert report["translation_dim"] == 3
    assert report["spectrum"]["forward_bounded"] is True
    assert report["spectrum"]["zero_modes"] == 1
    zstar = (0.2 - 0.05) / (0.2 + 0.05)
    assert report["steady_state"]["bloch"][2] == pytest.approx(zstar)


def test_analyze_stdout_mentions_key_facts(tmp_path, capsys):
    cfg_path = write_config(tmp_path, make_doc())
    assert main(["analyze", "--config", cfg_path]) == 0
    text = capsys.readouterr().out
    assert "overlap" in text
    assert "closure" in text
    assert "spectrum" in text or "eigenvalue" in text


def test_analyze_zero_dissipation_reports_nonunique(tmp_path, capsys):
    doc = make_doc()
    doc["dissipation"] = {
        "dephasing": [[0.0, 0.0], [0.0, 0.0]],
        "relaxation": [[0.0, 0.0], [0.0, 0.0]],
    }
    out = tmp_path / "r.json"
    cfg_path = write_config(tmp_path, doc)
    assert main(["analyze", "--config", cfg_path, "--out", str(out)]) == 0
    capsys.readouterr()
    report = json.loads(out.read_text())
    assert report["steady_state"] is None
    assert "equilibrium" in report["equilibrium_note"]


def test_sweep_flags_override_config(tmp_path, capsys):
    cfg_path = write_config(tmp_path, make_doc())
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--config", cfg_path, "--out", str(out),
                 "--control", "0",
                 "--amplitudes=-2,-1,-0.5,0,0.5,1,2"])
    assert code == 0
    capsys.readouterr()
    lines = out.read_text().splitlines()
    preamble = [l for l in lines if l.startswith("# ")]
    assert any("ellipse" in l for l in preamble)
    rows = [l for l in lines if not l.startswith("#")]
    assert len(rows) - 1 == 7


def test_sweep_requires_amplitudes_somewhere(tmp_path, capsys):
    cfg_path = write_config(tmp_path, make_doc())
    out = tmp_path / "s.csv"
    assert main(["sweep", "--config", cfg_path, "--out", str(out)]) == 2
    assert "config error" in capsys.readouterr().err


def test_exit_codes(tmp_path, capsys):
    assert main(["simulate", "--config", "/missing.json",
                 "--out", str(tmp_path / "x.csv")]) == 2
    doc = make_doc(
        initial={"density": [[[1.4, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.4, 0.0]]]}
    )
    cfg_path = write_config(tmp_path, doc)
    assert main(["simulate", "--config", cfg_path,
                 "--out", str(tmp_path / "y.csv")]) == 3
    err = capsys.readouterr().err
    assert "physics error" in err


def test_tolerance_env_var(tmp_path, capsys, monkeypatch):
    cfg_path = write_config(tmp_path, make_doc())
    monkeypatch.setenv("BLOCHDYN_TOL", "not-a-number")
    assert main(["simulate", "--config", cfg_path,
                 "--out", str(tmp_path / "z.csv")]) == 2
    capsys.readouterr()
    monkeypatch.setenv("BLOCHDYN_TOL", "1e-6")
    assert main(["simulate", "--config", cfg_path,
                 "--out", str(tmp_path / "w.csv")]) == 0
