import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest
import yaml

from momentum_jumps import config as cfgmod
from momentum_jumps.cli import main
from momentum_jumps.errors import ConfigError

CONFIGS = Path(__file__).resolve().parents[1] / "src" / "momentum_jumps" / "configs"
PAPER_A = str(CONFIGS / "paper_4nm.yaml")
PAPER_B = str(CONFIGS / "paper_5nm.yaml")
TRIANGULAR = str(CONFIGS / "triangular.yaml")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_config(tmp_path, doc, name="dev.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(doc), encoding="utf-8")
    return str(path)


def paper_doc():
    return yaml.load((CONFIGS / "paper_4nm.yaml").read_text(), Loader=cfgmod._Loader)


# -- configuration -------------------------------------------------------------

def test_exponent_floats_parse():
    doc = paper_doc()
    assert doc["densities"]["per_subband"] == [None, 1.2e14]


@pytest.mark.parametrize(
    "mutate, path",
    [
        (lambda d: d["material"].update(colour="red"), "material.colour"),
        (lambda d: d.update(extra=1), "extra"),
        (lambda d: d["confinement"].update(slope_field=1.0), "confinement.slope_field"),
        (lambda d: d["material"].pop("mobility"), "material.mobility"),
        (lambda d: d["material"].update(mobility=-1.0), "material.mobility"),
        (lambda d: d["scene"].update(theta_design_deg=50), "scene.theta_design_deg"),
        (lambda d: d["numerics"].update(max_subbands=0), "numerics.max_subbands"),
        (lambda d: d["scene"]["distances"].update(lightyears=1), "scene.distances.lightyears"),
        (lambda d: d["densities"].update(total=1e16), "densities"),
    ],
)
def test_validation_names_key_path(mutate, path):
    doc = paper_doc()
    mutate(doc)
    with pytest.raises(ConfigError) as info:
        cfgmod.from_dict(doc)
    assert info.value.path == path


def test_inconsistent_per_subband_is_config_error():
    doc = paper_doc()
    doc["densities"]["per_subband"] = [1e15, 1.2e14]
    cfg = cfgmod.from_dict(doc)
    with pytest.raises(ConfigError) as info:
        cfg.total_density()
    assert info.value.path == "densities.per_subband"


def test_config_error_exit_code(tmp_path, capsys):
    doc = paper_doc()
    doc["material"]["bogus"] = 1
    code, _, err = run(capsys, "depopulate", write_config(tmp_path, doc))
    assert code == 2
    assert "material.bogus" in err


def test_missing_config_file(tmp_path, capsys):
    code, _, _ = run(capsys, "depopulate", str(tmp_path / "nope.yaml"))
    assert code == 4


# -- subbands ------------------------------------------------------------------

def _table(out):
    lines = out.splitlines()
    start = lines.index("n,E_n_meV,dE_n_meV,N_n_per_m2")
    return list(csv.DictReader(lines[start:]))


def test_subbands_zero_field(capsys):
    code, out, _ = run(capsys, "subbands", PAPER_A, "--B", "0")
    assert code == 0
    assert "occupied subbands = 2" in out
    rows = _table(out)
    assert len(rows) == 2
    assert all(float(r["dE_n_meV"]) == 0.0 for r in rows)


def test_subbands_past_depopulation(capsys):
    code, out, _ = run(capsys, "subbands", PAPER_A, "--B", "6.41")
    assert code == 0
    assert float(_table(out)[1]["N_n_per_m2"]) == 0.0


def test_subbands_dispersion_csv(tmp_path, capsys):
    target = tmp_path / "disp.csv"
    code, _, _ = run(capsys, "subbands", PAPER_A, "--B", "3", "--dispersion-csv", str(target), "--kx-range", "1e8", "11")
    assert code == 0
    rows = list(csv.reader(target.read_text().splitlines()))
    assert rows[0] == ["kx_per_m", "E0_meV", "E1_meV"]
    assert len(rows) == 12


# -- depopulate ----------------------------------------------------------------

def test_depopulate_case_a(capsys):
    code, out, _ = run(capsys, "depopulate", PAPER_A)
    assert code == 0
    assert "B1 = 6.41 T" in out
    assert "closed form B1 = 6.41 T" in out


def test_depopulate_case_b(capsys):
    code, out, _ = run(capsys, "depopulate", PAPER_B)
    assert code == 0
    assert "B1 = 5.14 T" in out


def test_depopulate_single_subband(tmp_path, capsys):
    doc = paper_doc()
    doc["densities"] = {"total": 1e15}
    code, out, _ = run(capsys, "depopulate", write_config(tmp_path, doc))
    assert code == 0
    assert "no depopulation fields" in out


def test_triangular_rejected_for_analytic_commands(capsys):
    for cmd in ("subbands", "depopulate"):
        code, _, err = run(capsys, cmd, TRIANGULAR)
        assert code == 2
        assert "confinement.type" in err


# -- sweep ---------------------------------------------------------------------

def _sweep(tmp_path, capsys, name, *extra, config=PAPER_A):
    target = tmp_path / name
    code, _, _ = run(capsys, "sweep", config, "--B-range", "0", "8", "--steps", "33", "--output", str(target), *extra)
    assert code == 0
    return target.read_bytes()


def test_sweep_csv_schema_and_switch(tmp_path, capsys):
    data = _sweep(tmp_path, capsys, "a.csv").decode()
    rows = list(csv.DictReader(io.StringIO(data)))
    assert list(rows[0]) == [
        "B_T", "n_occupied", "N0_per_m2", "N1_per_m2", "theta_deg", "frac_C", "frac_D1", "frac_D2", "resistance_proxy"
    ]
    event = next(i for i, r in enumerate(rows) if r["n_occupied"] == "1")
    for i, r in enumerate(rows):
        theta = float(r["theta_deg"])
        if i < event:
            assert theta == 0.0
        else:
            assert abs(theta - 10.0) <= 0.2
        fracs = float(r["frac_C"]) + float(r["frac_D1"]) + float(r["frac_D2"])
        assert fracs <= 1.0 + 1e-15


def test_sweep_is_byte_identical(tmp_path, capsys):
    a = _sweep(tmp_path, capsys, "a.csv")
    b = _sweep(tmp_path, capsys, "b.csv", "--workers", "4")
    assert a == b
    assert _sweep(tmp_path, capsys, "a.json", "--out", "json") == _sweep(tmp_path, capsys, "b.json", "--out", "json")


def test_sweep_json_mirrors_csv(tmp_path, capsys):
    rows = list(csv.DictReader(io.StringIO(_sweep(tmp_path, capsys, "a.csv").decode())))
    doc = json.loads(_sweep(tmp_path, capsys, "a.json", "--out", "json"))
    assert doc["metadata"]["columns"] == list(rows[0])
    assert len(doc["records"]) == len(rows)
    for r, j in zip(rows, doc["records"]):
        for key, value in r.items():
            assert float(value) == j[key]
    assert doc["metadata"]["depopulation_fields_T"] == [pytest.approx(6.40925, abs=1e-5)]
    assert "50/50" in doc["metadata"]["beam_weight_model"]


def test_sweep_seventeen_digits(tmp_path, capsys):
    rows = list(csv.DictReader(io.StringIO(_sweep(tmp_path, capsys, "a.csv").decode())))
    event = next(r for r in rows if r["n_occupied"] == "1")
    assert event["B_T"] == format(float(event["B_T"]), ".17g")


def test_sweep_plot_data(tmp_path, capsys):
    plot = tmp_path / "plot.json"
    _sweep(tmp_path, capsys, "a.csv", "--plot-data", str(plot))
    doc = json.loads(plot.read_text())
    assert len(doc["sweep"]["B_T"]) == len(doc["sweep"]["theta_deg"])
    assert [p["B_T"] for p in doc["dispersion_panels"]][0] == 0.0
    assert "E1_meV" in doc["dispersion_panels"][1]


def test_sweep_unwritable_output(tmp_path, capsys):
    code, _, _ = run(capsys, "sweep", PAPER_A, "--steps", "3", "--output", str(tmp_path / "missing" / "x.csv"))
    assert code == 4


# -- design --------------------------------------------------------------------

def _value(out, key):
    line = next(l for l in out.splitlines() if l.startswith(key + " = "))
    return float(line.split("(")[1].split()[0])


def test_design_drive(capsys):
    code, out, _ = run(capsys, "design", PAPER_A, "--target-theta-deg", "10")
    assert code == 0
    assert _value(out, "F") == pytest.approx(640.0, rel=0.01)


def test_design_width(capsys):
    code, out, _ = run(capsys, "design", PAPER_A, "--target-B1-T", "5.14")
    assert code == 0
    assert _value(out, "z0") == pytest.approx(5.0, abs=0.01)


def test_design_round_trip(capsys):
    from momentum_jumps.device import paper_device
    from momentum_jumps.kinematics import beam_set_at

    dev = paper_device(4.0, 640.0)
    theta = beam_set_at(8.0, dev.reference, 640.0, dev.material, dev.confinement).max_angle_deg()
    code, out, _ = run(capsys, "design", PAPER_A, "--target-theta-deg", format(theta, ".17g"))
    assert code == 0
    assert _value(out, "F") == pytest.approx(640.0, rel=1e-9)


def test_design_no_solution(capsys):
    code, _, err = run(capsys, "design", PAPER_A, "--target-B1-T", "1000")
    assert code == 5
    assert "outside" in err


def test_design_needs_one_target(capsys):
    with pytest.raises(SystemExit) as info:
        main(["design", PAPER_A])
    assert info.value.code == 2


# -- dispersion ----------------------------------------------------------------

def _max_dev(err):
    line = next(l for l in err.splitlines() if l.startswith("max_relative_deviation"))
    return float(line.split("=")[1])


def _minima(err):
    line = next(l for l in err.splitlines() if l.startswith("minima_kx_per_m"))
    return [float(v) for v in line.split("=")[1].split(",")]


def _tolerance(err):
    line = next(l for l in err.splitlines() if l.startswith("interpolation_tolerance_per_m"))
    return float(line.split("=")[1])


def test_dispersion_compare(capsys):
    code, out, err = run(capsys, "dispersion", PAPER_A, "--B", "6.4", "--compare", "--bands", "3")
    assert code == 0
    assert _max_dev(err) < 1e-5
    assert out.splitlines()[0] == "kx_per_m,E0_meV,E1_meV,E2_meV"


def test_dispersion_triangular(capsys):
    code, out, err = run(capsys, "dispersion", TRIANGULAR, "--B", "0", "--kx-range", "2e8", "41")
    assert code == 0
    rows = [list(map(float, r)) for r in csv.reader(out.splitlines()[1:])]
    for a, b in zip(rows, rows[::-1]):
        assert a[1:] == pytest.approx(b[1:], rel=1e-8)
    code, _, err = run(capsys, "dispersion", TRIANGULAR, "--B", "5", "--kx-range", "3e8", "61")
    assert code == 0
    assert all(abs(m) > 10 * _tolerance(err) for m in _minima(err))


def test_dispersion_analytic_triangular_rejected(capsys):
    code, _, _ = run(capsys, "dispersion", TRIANGULAR, "--solver", "analytic")
    assert code == 2


def test_dispersion_bad_range(capsys):
    code, _, _ = run(capsys, "dispersion", PAPER_A, "--kx-range", "1e8")
    assert code == 2


def test_console_entry_point(tmp_path):
    result = subprocess.run(
        [sys.executable, "-m", "momentum_jumps.cli", "depopulate", PAPER_A],
        capture_output=True, text=True, check=False,
    )
    assert result.returncode == 0
    assert "B1 = 6.41 T" in result.stdout
