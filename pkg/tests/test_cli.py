import csv
import io
import json
import math
import re
from importlib import resources

import jsonschema
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphereiso import cli
from sphereiso.geometry import make_clifford, make_equator
from sphereiso.verify import RunResult, make_report

FAST = ["--axes", "basis", "--s-grid", "0,0.3"]


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def schema():
    return json.loads(resources.files("sphereiso").joinpath("report.schema.json").read_text())


def test_catalog_listing(capsys):
    code, out, _ = run(["catalog"], capsys)
    assert code == 0
    assert re.search(r"^clifford:1,1\s+n=2 S=2 Vol=2π² csc radial λ₁=2$", out, re.M)
    assert "equator:2" in out and "totally-geodesic" in out


def test_catalog_json(capsys):
    code, out, _ = run(["catalog", "--json"], capsys)
    doc = json.loads(out)
    entry = {m["descriptor"]: m for m in doc["members"]}["clifford:1,2"]
    assert entry["volume_symbolic"] == "16√3π²/9"
    assert entry["volume"] == pytest.approx(make_clifford(1, 2).closed_form_volume)


def test_symbolic_volumes():
    assert cli.symbolic_volume(make_equator(2)) == "4π"
    assert cli.symbolic_volume(make_equator(3)) == "2π²"
    assert cli.symbolic_volume(make_clifford(2, 2)) == "4π²"


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["catalog", "--bogus"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 1


def test_constants_json(capsys):
    code, out, _ = run(["constants", "--n", "2", "--s", "0", "--format", "json"], capsys)
    c = json.loads(out)["constants"]
    assert code == 0
    assert c["C2"] == pytest.approx(0.8757, abs=1e-4)
    assert c["C0"] == pytest.approx(3.503, abs=1e-3)
    assert c["epsilon_lower"] == pytest.approx(0.2928, abs=1e-4)


def test_constants_bad_input(capsys):
    assert run(["constants", "--n", "1"], capsys)[0] == 1
    assert run(["constants"], capsys)[0] == 1
    assert run(["constants", "--n", "2", "--s", "1.5"], capsys)[0] == 1
    assert run(["constants", "--surface", "equator:2"], capsys)[0] == 1


def _svg_path_ys(svg):
    d = re.search(r'<path d="(M[^"]*)" fill="none"', svg).group(1)
    return [float(p.split(",")[1]) for p in re.findall(r"[ML]([-\d.]+,[-\d.]+)", d)]


def test_constants_sweep(capsys, tmp_path):
    code, out, _ = run(["constants", "--n", "2", "--sweep", "s=0:0.9:0.1", "--out", str(tmp_path)], capsys)
    assert code == 0
    rows = list(csv.reader(line for line in out.splitlines() if not line.startswith("#")))
    assert rows[0] == ["s", "C2", "C_main", "branch"]
    assert len(rows) == 11
    assert {r[3] for r in rows[1:]} <= {"S_ZERO", "SMALL_S", "LARGE_S"}
    assert rows[1][3] == "S_ZERO" and rows[-1][3] == "LARGE_S"
    assert (tmp_path / "constants_n2.csv").read_text() == out
    assert (tmp_path / "constants_n2_f.svg").exists()


def test_constants_svg_is_down_then_up(capsys, tmp_path):
    run(["constants", "--n", "2", "--sweep", "0:0:0.1", "--out", str(tmp_path)], capsys)
    svg = (tmp_path / "constants_n2_f.svg").read_text()
    ys = _svg_path_ys(svg)  # screen y grows as f decreases
    k = ys.index(max(ys))
    assert 0 < k < len(ys) - 1
    assert all(b >= a for a, b in zip(ys[:k], ys[1 : k + 1]))
    assert all(b <= a for a, b in zip(ys[k:], ys[k + 1 :]))
    cy = float(re.search(r'<circle cx="[\d.]+" cy="([\d.]+)"', svg).group(1))
    assert cy == pytest.approx(ys[k], abs=1.0)


def test_verify_flagship(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, stdout, _ = run(["verify", "--surface", "clifford:1,1", "--checks", "all", "--out", str(out)], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, schema())
    assert doc["summary"]["FAIL"] == 0
    assert doc["header"]["config"]["surface"] == "clifford:1,1"
    assert "min margin" in stdout


def test_verify_rejects_totally_geodesic(capsys):
    code, _, err = run(["verify", "--surface", "equator:2", "--checks", "thm_main_i"] + FAST, capsys)
    assert code == 1
    assert "totally geodesic" in err


def test_verify_input_errors(capsys):
    assert run(["verify", "--surface", "torus:1"], capsys)[0] == 1
    assert run(["verify", "--checks", "nope"], capsys)[0] == 1
    assert run(["verify", "--quad", "gauss:1"], capsys)[0] == 1
    assert run(["verify", "--axes", "e9"], capsys)[0] == 1
    assert run(["verify", "--s-grid", "0:x:1"], capsys)[0] == 1


def test_verify_fail_exit_code(capsys, monkeypatch):
    M = make_clifford(1, 1)
    bad = make_report("simons", M, -1.0, 0.0)

    def fake(*args, **kwargs):
        return RunResult((bad,), ())

    monkeypatch.setattr(cli, "run_checks", fake)
    code, out, _ = run(["verify", "--checks", "simons", "--format", "json"], capsys)
    assert code == 2
    assert json.loads(out)["summary"]["FAIL"] == 1


def test_verify_deterministic_json(capsys, tmp_path):
    args = ["verify", "--surface", "clifford:1,2", "--checks", "ie,thm_main_i,cheeger", "--axes", "random:4:3"]
    run(args + ["--out", str(tmp_path / "a.json")], capsys)
    run(args + ["--out", str(tmp_path / "b.json")], capsys)
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_verify_csv_and_env_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path))
    code, _, _ = run(["verify", "--checks", "simons,ie", "--format", "csv"] + FAST, capsys)
    assert code == 0
    text = (tmp_path / "verify_clifford_1-1.csv").read_text()
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    assert text.startswith("# tool: sphereiso")
    rows = list(csv.DictReader(io.StringIO("\n".join(lines))))
    assert tuple(rows[0]) == cli.CSV_COLUMNS
    assert [r["name"] for r in rows] == ["simons", "ie"]


def test_verify_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# run\nsurface = clifford:1,2\nchecks = simons\naxes = basis\nformat = json\n")
    code, out, _ = run(["verify", "--config", str(cfg)], capsys)
    assert code == 0
    assert json.loads(out)["header"]["config"]["surface"] == "clifford:1,2"
    code, out, _ = run(["verify", "--config", str(cfg), "--surface", "clifford:2,2"], capsys)
    assert json.loads(out)["header"]["config"]["surface"] == "clifford:2,2"
    cfg.write_text("colour = red\n")
    assert run(["verify", "--config", str(cfg)], capsys)[0] == 1


text_value = st.text(st.characters(blacklist_categories=("Cc", "Cs", "Zl", "Zp"), blacklist_characters="=#"), max_size=20).map(
    str.strip
)


@given(text_value, text_value, st.integers(0, 2**31), st.integers(1, 8))
def test_run_config_roundtrip(surface, axes, seed, workers):
    c = cli.RunConfig(surface=surface, axes=axes, seed=seed, workers=workers)
    back = cli.RunConfig.from_text(c.to_text())
    assert back == c
    assert back.digest() == c.digest()


def test_config_digest_ignores_output():
    a = cli.RunConfig()
    assert cli.RunConfig(out="x", format="csv").digest() == a.digest()
    assert cli.RunConfig(seed=1).digest() != a.digest()


def test_grid_parsing():
    assert cli.parse_grid("s=0:0.9:0.1") == [round(0.1 * i, 12) for i in range(10)]
    assert cli.parse_grid("0.1,0.4") == [0.1, 0.4]
    assert len(cli.parse_grid("0:0.5:0.05")) == 11
    for bad in ("", "1:0:0.1", "0:1:0", "a,b"):
        with pytest.raises(cli.UsageError):
            cli.parse_grid(bad)


def test_jsonable_non_finite():
    assert cli.jsonable({"a": math.inf, "b": [math.nan, 1.0]}) == {"a": "inf", "b": ["nan", 1.0]}


def test_sweep(capsys, tmp_path):
    code, out, _ = run(["sweep", "--surface", "clifford:1,2", "--s", "0:0.5:0.05", "--out", str(tmp_path)], capsys)
    assert code == 0
    rows = list(csv.reader(line for line in out.splitlines() if not line.startswith("#")))
    head = rows[0]
    assert head[:2] == ["axis", "s"]
    # cor_ie is rejected for clifford:1,2, leaving two margin columns
    assert [h for h in head if h.startswith("margin_")] == ["margin_thm_main_i", "margin_cor_csc"]
    assert len(rows) - 1 == 10 * 11
    assert (tmp_path / "sweep_clifford_1-2.csv").read_text() == out
    assert (tmp_path / "sweep_clifford_1-2_thm_main_i.svg").exists()
