import json
import os

import numpy as np
import pytest

from figscripts import FigureError, SpecError, cli, csvio, parse_spec, render
from fixtures import crossing_pair, sweep_quartet, write_csv


def _spec(doc, tmp_path):
    return parse_spec(doc, base=str(tmp_path))


def test_crossing_fixture_renders_marker(tmp_path):
    a, b = crossing_pair(tmp_path)
    fs = _spec(
        {
            "kind": "timeseries",
            "name": "crossing",
            "inputs": [os.path.basename(a), os.path.basename(b)],
            "labels": ["slow start", "fast start"],
            "logy": True,
        },
        tmp_path,
    )
    svg, png = render(fs, tmp_path / "out")
    assert os.path.exists(svg) and os.path.exists(png)
    text = open(svg, encoding="utf-8").read()
    assert "t_M = 0.462" in text
    assert "slow start" in text and "fast start" in text


def test_rerun_is_byte_stable(tmp_path):
    a, b = crossing_pair(tmp_path)
    doc = {
        "kind": "timeseries",
        "name": "stable",
        "inputs": [a, b],
        "logy": True,
        "guides": [{"rate": 1.0}, {"rate": 2.0, "curve": 1}],
    }
    first = render(_spec(doc, tmp_path), tmp_path / "one")
    second = render(_spec(doc, tmp_path), tmp_path / "two")
    with open(first[0], "rb") as f1, open(second[0], "rb") as f2:
        assert f1.read() == f2.read()
    with open(first[1], "rb") as f1, open(second[1], "rb") as f2:
        assert f1.read() == f2.read()


def test_empty_csv_errors_before_any_output(tmp_path):
    path = write_csv(tmp_path / "empty.csv", [], [])
    fs = _spec({"inputs": ["empty.csv"], "name": "nope"}, tmp_path)
    out = tmp_path / "out"
    with pytest.raises(FigureError, match="no data rows"):
        render(fs, out)
    assert not out.exists()


def test_missing_input_errors_before_any_output(tmp_path):
    fs = _spec({"inputs": ["absent.csv"]}, tmp_path)
    out = tmp_path / "out"
    with pytest.raises(csvio.TableError, match="cannot read"):
        render(fs, out)
    assert not out.exists()


def test_sweep_panel_two_by_two(tmp_path):
    paths = sweep_quartet(tmp_path)
    fs = _spec(
        {
            "kind": "panel",
            "name": "sweep",
            "inputs": [os.path.basename(p) for p in paths],
            "labels": ["gamma = 1", "gamma = 2.5", "gamma = 4.5", "gamma = 5"],
            "layout": [2, 2],
        },
        tmp_path,
    )
    svg, _ = render(fs, tmp_path / "out")
    text = open(svg, encoding="utf-8").read()
    for label in ("gamma = 1", "gamma = 2.5", "gamma = 4.5", "gamma = 5"):
        assert label in text


def test_guides_and_inset_drawn(tmp_path):
    t = np.arange(0.0, 10.0001, 0.1)
    run = write_csv(tmp_path / "run.csv", t, 1.5 * np.exp(-t),
                    config={"params": {"gamma": 0.5}})
    k = np.linspace(-np.pi, np.pi, 101)
    prof = write_csv(tmp_path / "prof.csv", k, np.exp(-(k / 0.4) ** 2),
                     kind="upsilon")
    fs = _spec(
        {
            "inputs": ["run.csv"],
            "name": "guided",
            "logy": True,
            "guides": [{"rate": 1.0}],
            "inset": {"path": "prof.csv", "label": "pair weight"},
        },
        tmp_path,
    )
    svg, _ = render(fs, tmp_path / "out")
    text = open(svg, encoding="utf-8").read()
    assert "exp(-1 t)" in text
    assert "pair weight" in text


def test_labels_fall_back_to_embedded_params(tmp_path):
    t = np.arange(0.0, 1.01, 0.1)
    a = write_csv(tmp_path / "a.csv", t, np.exp(-t),
                  config={"params": {"kappa": 0.5, "h": 0.3, "gamma": 0.5}})
    b = write_csv(tmp_path / "b.csv", t, np.exp(-2 * t),
                  config={"params": {"kappa": 0.9, "h": 0.1, "gamma": 0.5}})
    fs = _spec({"inputs": ["a.csv", "b.csv"], "name": "fallback"}, tmp_path)
    svg, _ = render(fs, tmp_path / "out")
    text = open(svg, encoding="utf-8").read()
    assert "kappa=0.5, h=0.3, gamma=0.5" in text
    assert "kappa=0.9, h=0.1, gamma=0.5" in text


def test_log_scale_with_no_positive_samples_rejected(tmp_path):
    path = write_csv(tmp_path / "neg.csv", [0.0, 1.0], [-1.0, -0.5])
    fs = _spec({"inputs": ["neg.csv"], "logy": True}, tmp_path)
    with pytest.raises(FigureError, match="no plottable samples"):
        render(fs, tmp_path / "out")


def test_spec_validation_messages(tmp_path):
    with pytest.raises(SpecError, match="at least one input"):
        _spec({"inputs": []}, tmp_path)
    with pytest.raises(SpecError, match="kind"):
        _spec({"kind": "pie", "inputs": ["a.csv"]}, tmp_path)
    with pytest.raises(SpecError, match="do not fit"):
        _spec(
            {"kind": "panel", "inputs": ["a", "b", "c"], "layout": [1, 2]},
            tmp_path,
        )
    with pytest.raises(SpecError, match="out of range"):
        _spec({"inputs": ["a.csv"], "guides": [{"rate": 1.0, "curve": 3}]}, tmp_path)
    with pytest.raises(SpecError, match="bare file stem"):
        _spec({"inputs": ["a.csv"], "name": "x/y"}, tmp_path)


def test_cli_render_and_error_paths(tmp_path, capsys):
    a, b = crossing_pair(tmp_path)
    doc = {"inputs": [a, b], "name": "cli_fig", "logy": True}
    spec_path = tmp_path / "fig.json"
    spec_path.write_text(json.dumps(doc))
    out = tmp_path / "cli_out"
    assert cli.main(["render", "--spec", str(spec_path), "--out", str(out)]) == 0
    seen = capsys.readouterr().out
    assert "cli_fig.svg" in seen and "cli_fig.png" in seen
    assert (out / "cli_fig.svg").exists() and (out / "cli_fig.png").exists()

    bad = write_csv(tmp_path / "v9.csv", [0.0], [1.0], schema="noclick-csv-v9")
    spec_bad = tmp_path / "bad.json"
    spec_bad.write_text(json.dumps({"inputs": [bad], "name": "never"}))
    out_bad = tmp_path / "cli_bad"
    assert cli.main(["render", "--spec", str(spec_bad), "--out", str(out_bad)]) == 2
    err = capsys.readouterr().err
    assert "noclick-csv-v9" in err and "noclick-csv-v1" in err
    assert not out_bad.exists()
