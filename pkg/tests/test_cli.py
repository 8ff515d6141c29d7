"""Drive the installed console entry point through subprocesses.

Output formats are asserted byte for byte where the docs promise byte
stability, so any formatting drift shows up here first.
"""

import json
import subprocess
import sys

import pytest

CMD = [sys.executable, "-m", "dickesim"]

RUN_KEYS = [
    "scheme",
    "n",
    "k",
    "p",
    "probability",
    "parallel_factor",
    "formula",
    "fidelity",
    "state",
]


def run_cli(*args):
    return subprocess.run([*CMD, *args], capture_output=True, text=True)


def test_run_json_contract():
    proc = run_cli("run", "--scheme", "operator_all_one", "--n", "4", "--k", "2,2")
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    assert list(payload) == RUN_KEYS
    assert payload["probability"] == pytest.approx(0.09375, abs=1e-12)
    assert payload["fidelity"] == pytest.approx(1.0, abs=1e-10)
    assert payload["parallel_factor"] == 1
    assert len(payload["state"]) == 6


def test_run_csv_golden():
    proc = run_cli(
        "run", "--scheme", "operator_all_one", "--n", "4", "--k", "2,2",
        "--format", "csv",
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout == (
        "scheme,n,k,p,probability,parallel_factor,formula,fidelity\n"
        'operator_all_one,4,"2,2",,0.09375,1,0.09375,1\n'
    )


def test_csv_output_is_byte_stable():
    args = ("run", "--scheme", "prep_per_level", "--n", "3", "--k", "2,1",
            "--format", "csv")
    first = run_cli(*args)
    second = run_cli(*args)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout
    assert first.stdout.endswith("\n")
    assert "\r" not in first.stdout


def test_table_fig4a_csv():
    proc = run_cli("table", "--figure", "fig4a", "--format", "csv")
    assert proc.returncode == 0, proc.stderr
    lines = proc.stdout.splitlines()
    assert lines[0] == "n,k,p_op,p_single_multiport,p_per_level,p_ancilla_final"
    assert len(lines) == 10
    assert lines[3] == '4,"3,1",0.09375,0.0087890625,0.0208333333333,0.10546875'


def test_table_fig4b_csv():
    proc = run_cli("table", "--figure", "fig4b", "--format", "csv")
    assert proc.returncode == 0, proc.stderr
    lines = proc.stdout.splitlines()
    assert len(lines) == 9
    assert lines[1].startswith('3,"1,1,1",')


def test_table_contour_a_json():
    proc = run_cli("table", "--figure", "contour_a")
    assert proc.returncode == 0, proc.stderr
    records = json.loads(proc.stdout)
    assert len(records) == 40
    assert records[0]["contour"] == "first"
    assert records[0]["k1"] == 1
    assert records[0]["n_cross"] == pytest.approx(2.753017703536898, abs=1e-8)


def test_fit_json_golden():
    proc = run_cli("fit", "--panel", "qubit", "--contour", "first")
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    assert payload["panel"] == "qubit"
    assert payload["contour"] == "first"
    assert payload["a"] == pytest.approx(2.4105897554616567, abs=1e-9)
    assert payload["b"] == pytest.approx(0.698508106103462, abs=1e-9)
    assert payload["residual_rms"] == pytest.approx(0.1145634735494459, abs=1e-9)
    assert len(payload["points"]) == 20
    assert payload["points"][0] == pytest.approx([1, 2.753017703536898])


def test_out_flag_writes_the_same_bytes(tmp_path):
    target = tmp_path / "table.csv"
    to_stdout = run_cli("table", "--figure", "fig4a", "--format", "csv")
    to_file = run_cli(
        "table", "--figure", "fig4a", "--format", "csv", "--out", str(target)
    )
    assert to_file.returncode == 0, to_file.stderr
    assert to_file.stdout == ""
    assert target.read_bytes() == to_stdout.stdout.encode()


def test_capacity_exit_code():
    proc = run_cli("run", "--scheme", "ancilla", "--n", "9", "--k", "8,1")
    assert proc.returncode == 3
    assert "capacity" in proc.stderr


def test_usage_exit_codes():
    bad_profile = run_cli("run", "--scheme", "operator_all_one", "--n", "3", "--k", "2,2")
    assert bad_profile.returncode == 2
    assert bad_profile.stderr.startswith("error:")
    bad_choice = run_cli("run", "--scheme", "warp_drive", "--n", "3", "--k", "2,1")
    assert bad_choice.returncode == 2
    bad_contour = run_cli("fit", "--panel", "qubit", "--contour", "third")
    assert bad_contour.returncode == 2


def test_verify_formulas_suite_passes():
    proc = run_cli("verify", "--suite", "formulas")
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert proc.stdout.strip().splitlines()[-1].endswith("0 failed")
