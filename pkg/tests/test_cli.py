import csv
import io
import json
import math
import subprocess
import sys

import jsonschema
import pytest

from analogue_entanglement.cli import main
from analogue_entanglement.config import (
    ConfigError,
    hbar_over_kB_K_from_natural,
    kelvin_from_natural,
    natural_from_hbar_over_kB_K,
    natural_from_kelvin,
    parse_config,
)
from analogue_entanglement.output import SCAN_COLUMNS, format_float, output_schema, round_sig


def _write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def _run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _rows(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


DISPERSIVE = {
    "c_in_m_per_s": 1.0,
    "c_out_m_per_s": 3.0,
    "epsilon2_m4_per_s2": 0.5,
    "temperature_hbar_over_kB_K": 0.5,
    "k_grid": {"k_min_per_m": 0.05, "k_max_per_m": 20.0, "count": 80},
}


def test_scan_header_and_columns(tmp_path, capsys):
    code, out, _ = _run(["scan", "--config", _write(tmp_path, DISPERSIVE), "--jobs", "1"], capsys)
    assert code == 0
    first, second = out.splitlines()[:2]
    assert first.startswith("# analogue-entanglement 0.1.0 command=scan format=v1 config_sha256=")
    assert second == ",".join(SCAN_COLUMNS)
    rows = _rows(out)
    assert len(rows) == 80
    eof = [float(r["eof"]) for r in rows]
    assert eof[0] == 0.0 and max(eof) > 0.4


def test_scan_linear_zero_temperature_constant_eof(tmp_path, capsys):
    cfg = {"k_grid": {"k_min_per_m": 0.1, "k_max_per_m": 50.0, "count": 17, "scale": "log"}}
    code, out, _ = _run(["scan", "--config", _write(tmp_path, cfg)], capsys)
    assert code == 0
    for row in _rows(out):
        assert float(row["eof"]) == pytest.approx(0.749780192825, abs=1e-11)
        assert float(row["nu_minus"]) == pytest.approx(1 / 3, abs=1e-12)


def test_scan_single_row_and_bits(tmp_path, capsys):
    cfg = {"k_grid": {"k_min_per_m": 1, "k_max_per_m": 1, "count": 1}}
    code, out, _ = _run(["scan", "--config", _write(tmp_path, cfg), "--bits"], capsys)
    rows = _rows(out)
    assert code == 0 and len(rows) == 1
    assert float(rows[0]["eof"]) == pytest.approx(0.749780192825 / math.log(2), rel=1e-11)


def test_scan_records_domain_errors(tmp_path, capsys):
    cfg = {"epsilon2_m4_per_s2": 0.04, "dispersion_sign": "sub", "k_grid": {"k_min_per_m": 1, "k_max_per_m": 10, "count": 10}}
    code, out, _ = _run(["scan", "--config", _write(tmp_path, cfg)], capsys)
    assert code == 0
    rows = _rows(out)
    assert rows[0]["error"] == ""
    assert "subsonic" in rows[-1]["error"] and rows[-1]["eof"] == "nan"


def test_output_is_byte_identical(tmp_path, capsys):
    path = _write(tmp_path, DISPERSIVE)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["scan", "--config", path, "--output", str(a), "--jobs", "2"]) == 0
    assert main(["scan", "--config", path, "--output", str(b), "--jobs", "1"]) == 0
    assert a.read_bytes() == b.read_bytes()
    ja, jb = tmp_path / "a.json", tmp_path / "b.json"
    main(["resonance", "--config", path, "--output", str(ja), "--format", "json"])
    main(["resonance", "--config", path, "--output", str(jb), "--format", "json"])
    assert ja.read_bytes() == jb.read_bytes()


@pytest.mark.parametrize("command", ["scan", "sudden-death", "resonance", "oracle"])
def test_json_validates_against_schema(tmp_path, capsys, command):
    cfg = dict(DISPERSIVE, measured={"n_avg": 0.5, "omega_in_rad_per_s": 1.0, "omega_out_rad_per_s": 3.0})
    cfg["oracle"] = {"r_values": [0.0, 0.5], "nbar_values": [0.0]}
    code, out, _ = _run([command, "--config", _write(tmp_path, cfg), "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, output_schema())
    assert doc["command"] == command and doc["config_echo"]["c_out_m_per_s"] == 3.0


def test_sudden_death_standard_and_units(tmp_path, capsys):
    cfg = {"k_grid": {"k_min_per_m": 1, "k_max_per_m": 1, "count": 1}, "temperature_hbar_over_kB_K": 1.44}
    code, out, _ = _run(["sudden-death", "--config", _write(tmp_path, cfg)], capsys)
    row = _rows(out)[0]
    assert code == 0
    assert float(row["t_sd"]) == pytest.approx(1 / math.log(2), rel=1e-11)
    assert float(row["t_sd_hbar_over_kB_K"]) == pytest.approx(1 / math.log(2), rel=1e-11)
    assert float(row["t_sd_kelvin"]) == pytest.approx(7.63823511e-12 / math.log(2), rel=1e-8)
    # 1.44 sits just below 1/ln 2 = 1.4427
    assert row["verdict"] == "entangled"
    cfg["temperature_hbar_over_kB_K"] = 1.45
    _, out, _ = _run(["sudden-death", "--config", _write(tmp_path, cfg)], capsys)
    assert _rows(out)[0]["verdict"] == "separable"


def test_sudden_death_measured_occupation(tmp_path, capsys):
    temperature = 0.5
    thermal = 1 / math.expm1(1 / temperature)
    cfg = {
        "k_grid": {"k_min_per_m": 1, "k_max_per_m": 1, "count": 1},
        "temperature_hbar_over_kB_K": temperature,
        "measured": {"n_avg": thermal, "omega_in_rad_per_s": 1, "omega_out_rad_per_s": 1},
    }
    code, out, _ = _run(["sudden-death", "--config", _write(tmp_path, cfg)], capsys)
    measured = _rows(out)[-1]
    assert code == 0 and measured["source"] == "measured"
    assert float(measured["t_sd"]) == 0.0
    assert measured["verdict"] == "no entanglement possible"


def test_resonance_report(tmp_path, capsys):
    cfg = {"resonance": {"k_per_m": 1.0, "t_minus_window_s": [0.0, 3.0], "repetitions": 10}}
    code, out, _ = _run(["resonance", "--config", _write(tmp_path, cfg), "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    resonant = [r for r in doc["rows"] if r["section"] == "resonant"]
    assert [r["t_minus"] for r in resonant] == pytest.approx([math.pi / 2], abs=1e-11)
    assert resonant[0]["residual"] < 1e-9
    acc = [r for r in doc["rows"] if r["section"] == "accumulation"]
    assert len(acc) == 10
    # vacuum input, r_1 = ln 3 for this composite
    from analogue_entanglement.entanglement import eof_from_nu

    for n, row in enumerate(acc, start=1):
        assert row["eof"] == pytest.approx(eof_from_nu(3.0 ** (-2 * n)), rel=1e-10)


def test_resonance_window_with_only_trivial_points(tmp_path, capsys):
    cfg = {"resonance": {"k_per_m": 1.0, "t_minus_window_s": [1.0, 1.1], "repetitions": 3}}
    code, out, _ = _run(["resonance", "--config", _write(tmp_path, cfg), "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["summary"]["resonant_count"] == 0 and doc["summary"]["trivial_count"] == 1
    assert not [r for r in doc["rows"] if r["section"] == "accumulation"]


def test_oracle_exit_codes(tmp_path, capsys):
    tiny = {"oracle": {"r_values": [1.0], "nbar_values": [0.0], "cutoff": 8}}
    code, _, err = _run(["oracle", "--config", _write(tmp_path, tiny)], capsys)
    assert code == 5 and "leakage failures 1" in err
    zero = {"oracle": {"r_values": [0.0], "nbar_values": [0.0, 1.0]}}
    code, _, err = _run(["oracle", "--config", _write(tmp_path, zero)], capsys)
    assert code == 0 and "PASS" in err
    loose = {"oracle": {"r_values": [0.5], "nbar_values": [0.0], "cutoff": 40, "deviation_tol": 1e-30}}
    code, _, _ = _run(["oracle", "--config", _write(tmp_path, loose)], capsys)
    assert code == 4


def test_config_errors(tmp_path, capsys):
    for bad in ({"bogus": 1}, {"k_grid": {"count": 0}}, {"k_grid": {"k_min_per_m": -1}}, {"c_in_m_per_s": 0},
                {"temperature_hbar_over_kB_K": -1}, {"dispersion_sign": "up"}, {"k_grid": {"extra": 1}}):
        code, _, err = _run(["scan", "--config", _write(tmp_path, bad)], capsys)
        assert code == 2 and "config error" in err
    code, _, _ = _run(["scan", "--config", str(tmp_path / "missing.json")], capsys)
    assert code == 2
    (tmp_path / "broken.json").write_text("{")
    assert main(["scan", "--config", str(tmp_path / "broken.json")]) == 2


def test_computation_error_exit_code(tmp_path, capsys):
    cfg = {"epsilon2_m4_per_s2": 1.0, "dispersion_sign": "sub", "resonance": {"k_per_m": 5.0}}
    code, _, err = _run(["resonance", "--config", _write(tmp_path, cfg)], capsys)
    assert code == 3 and "computation error" in err


def test_unit_round_trip():
    for value in (1e-9, 0.5, 1.4426950408889634, 3.7e4):
        natural = natural_from_hbar_over_kB_K(value)
        assert hbar_over_kB_K_from_natural(natural) == pytest.approx(value, rel=1e-12)
        assert natural_from_kelvin(kelvin_from_natural(natural)) == pytest.approx(natural, rel=1e-12)
    cfg = parse_config({"temperature_K": kelvin_from_natural(0.5)})
    assert cfg.temperature == pytest.approx(0.5, rel=1e-12)
    with pytest.raises(ConfigError):
        parse_config({"temperature_K": 1.0, "temperature_hbar_over_kB_K": 1.0})


def test_float_formatting():
    assert format_float(1 / 3) == "3.33333333333e-01"
    assert format_float(math.inf) == "inf" and format_float(math.nan) == "nan"
    assert round_sig(math.nan) is None
    assert round_sig(2 / 3) == 0.666666666667


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "analogue_entanglement", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "0.1.0" in proc.stdout
