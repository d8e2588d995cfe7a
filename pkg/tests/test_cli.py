import json
import math
import os
import subprocess
import sys

import pytest

from fibspec.cli import main, parse_word
from fibspec.errors import ConfigError
from fibspec.io_utils import read_csv_table


def test_parse_word_forms():
    assert parse_word("sub:2") == "10"
    assert parse_word("sub:6") == "1011010110110"
    assert len(parse_word("sub:6")) == 13
    assert parse_word("rot:2/3") == "011"
    assert parse_word("lit:10110") == "10110"
    with pytest.raises(ConfigError):
        parse_word("huh:3")


def test_band_edges_free_single_band(tmp_path):
    out = tmp_path / "bands.csv"
    rc = main(["band-edges", "--word", "sub:1", "--piece0", "zero",
               "--piece1", "zero", "--e-range", "0:10",
               "--lambda-range", "0:0", "--out", str(out)])
    assert rc == 0
    meta, cols, rows = read_csv_table(out)
    assert cols == ["lambda", "band_index", "e_lo", "e_hi"]
    assert len(rows) == 1
    assert float(rows[0][2]) == 0.0
    assert float(rows[0][3]) == 10.0
    assert meta["word"] == "1"
    # every numeric parameter is echoed in the header block
    for key in ("e-grid", "steps", "tol", "lambda-grid"):
        assert key in meta


def test_determinism_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["spectrum-slice", "--word", "sub:2", "--piece0", "zero",
            "--piece1", "const:1", "--e-range", "0:20", "--lambda-range",
            "0:5", "--e-grid", "40", "--lambda-grid", "3"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_counterexample_cli(tmp_path):
    out = tmp_path / "hits.csv"
    rc = main(["counterexample-search", "--piece1", "pwc:1@0.5,-4@0.5",
               "--n", "1", "--lambda-range", "40:200", "--out", str(out)])
    assert rc == 0
    _, cols, rows = read_csv_table(out)
    assert cols == ["lambda", "trace_residual", "b2_residual", "invariant"]
    assert float(rows[0][0]) == pytest.approx(92.46773, abs=1e-3)


def test_json_mirror(tmp_path):
    out = tmp_path / "slice.json"
    rc = main(["spectrum-slice", "--word", "sub:1", "--piece0", "zero",
               "--piece1", "const:1", "--e-range", "0:4", "--lambda-range",
               "0:0", "--e-grid", "5", "--lambda-grid", "1",
               "--format", "json", "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["columns"] == ["lambda", "E", "discriminant", "in_spectrum"]
    assert len(doc["rows"]) == 5
    assert doc["rows"][0][2] == pytest.approx(2.0)  # free disc at E=0


def test_invariant_scan_cli_columns(tmp_path):
    out = tmp_path / "inv.csv"
    rc = main(["invariant-scan", "--piece0", "zero", "--piece1", "const:1",
               "--lambda", "2.0", "--e-range", "0:30", "--e-grid", "16",
               "--out", str(out)])
    assert rc == 0
    _, cols, rows = read_csv_table(out)
    assert cols == ["E", "lambda", "x0", "x1", "x2", "invariant", "dim_proxy"]
    assert len(rows) == 16
    assert any(r[6] == "" for r in rows)  # undefined proxies serialize empty


def test_config_error_exit_code(tmp_path, capsys):
    rc = main(["spectrum-slice", "--word", "sub:2", "--piece0", "nope",
               "--piece1", "const:1", "--e-range", "0:10",
               "--lambda-range", "0:1", "--out", str(tmp_path / "x.csv")])
    assert rc == 2
    assert "configuration error" in capsys.readouterr().err


def test_numerical_error_exit_code(tmp_path, capsys):
    rc = main(["trace-orbit", "--piece0", "zero", "--piece1", "bump",
               "--lambda", "1e8", "--e", "1.0", "--steps", "16",
               "--out", str(tmp_path / "x.csv")])
    assert rc == 3
    assert "numerical failure" in capsys.readouterr().err
    assert not (tmp_path / "x.csv").exists()  # no partial output


def test_prufer_cli(tmp_path):
    out = tmp_path / "pr.csv"
    rc = main(["prufer-asymptotics", "--piece1", "const:-1", "--e", "1.0",
               "--lambda-range", "1e2:1e4", "--lambda-grid", "5",
               "--out", str(out)])
    assert rc == 0
    _, cols, rows = read_csv_table(out)
    assert cols == ["lambda", "delta_theta", "delta_L", "steps"]
    assert len(rows) == 5
    dth = [float(r[1]) for r in rows]
    assert dth == sorted(dth)  # rotation grows with coupling


def test_nlevp_validate_cli(tmp_path):
    out = tmp_path / "nl.csv"
    rc = main(["nlevp-validate", "--word", "sub:2", "--builder", "general",
               "--lambda", "0.0", "--e-range", "0.5:50", "--e-grid", "2001",
               "--out", str(out)])
    assert rc == 0
    _, cols, rows = read_csv_table(out)
    assert cols == ["theta", "E_root", "abs_det", "smallest_singular_value",
                    "floquet_discriminant"]
    assert rows
    for r in rows:
        level = 2.0 if float(r[0]) == 0.0 else -2.0
        assert float(r[4]) == pytest.approx(level, abs=1e-6)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fibspec.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "spectrum-slice" in proc.stdout
