import json
import math
import os
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "revprime.cli"]


def run_cli(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        CLI + list(args), capture_output=True, text=True, env=full_env
    )


def test_enumerate_includes_known_pair():
    res = run_cli("enumerate", "--base", "10", "--limit", "40")
    assert res.returncode == 0
    lines = res.stdout.splitlines()
    assert lines[0] == "n,p,weight,coprime"
    assert any(line.startswith("32,23,") for line in lines)


def test_enumerate_empty_is_header_only():
    res = run_cli("enumerate", "--base", "10", "--limit", "1")
    assert res.returncode == 0
    assert res.stdout == "n,p,weight,coprime\n"


def test_enumerate_bad_base_exits_2():
    res = run_cli("enumerate", "--base", "1", "--limit", "5")
    assert res.returncode == 2


def test_count_ap_vanishing_row():
    res = run_cli("count-ap", "--x", "1000", "--q", "2", "--a", "0")
    assert res.returncode == 0
    row = res.stdout.splitlines()[1].split(",")
    assert float(row[2]) == 0.0 and float(row[3]) == 0.0


def test_count_ap_grid_row_count():
    res = run_cli("count-ap", "--x", "1e3,1e4", "--q", "1..3", "--a", "0")
    rows = res.stdout.splitlines()
    assert len(rows) == 1 + 2 * 3  # header + |x| * |q| * |a|


def test_json_format_one_object_per_line():
    res = run_cli("--format", "json", "count-ap", "--x", "100", "--q", "1", "--a", "0")
    lines = res.stdout.splitlines()
    assert len(lines) == 1
    obj = json.loads(lines[0])
    assert obj["command"] == "count-ap"
    assert "observed" in obj and "ratio" in obj


def test_byte_identical_reruns():
    args = ("count-ap", "--x", "1e4", "--q", "7", "--a", "0..6")
    first = run_cli(*args)
    second = run_cli(*args)
    assert first.stdout == second.stdout
    probe = ("circle", "--op", "probe", "--N", "10000", "--samples", "5", "--seed", "3")
    assert run_cli(*probe).stdout == run_cli(*probe).stdout


def test_represent_r0k_600():
    res = run_cli("represent", "--family", "r0k", "--k", "2", "--n", "600")
    row = res.stdout.splitlines()[1].split(",")
    assert float(row[2]) == 0.0
    assert row[5] == "exact"


def test_represent_rsquare_prediction_matches_library():
    from revprime.digits import Base
    from revprime.representations import squarefree_shift_count

    res = run_cli("represent", "--family", "rsquare", "--n", "1000")
    row = res.stdout.splitlines()[1].split(",")
    profile = squarefree_shift_count(1000, Base(10))
    assert math.isclose(float(row[3]), profile.predicted, rel_tol=1e-15)


def test_represent_exceptions_count():
    res = run_cli("represent", "--family", "r11", "--n", "4..100", "--exceptions")
    row = res.stdout.splitlines()[1].split(",")
    assert float(row[2]) == 5.0  # {2, 4, 6, 8, 52}


def test_partition_command():
    res = run_cli("partition", "--digits", "2", "--eta", "2", "--r", "71")
    row = res.stdout.splitlines()[1].split(",")
    assert math.isclose(float(row[2]), math.log(17), rel_tol=1e-12)


def test_circle_parseval_row():
    res = run_cli("circle", "--op", "parseval", "--N", "1000")
    header, row = res.stdout.splitlines()
    assert header == "N,lhs,rhs,scaled"
    vals = row.split(",")
    assert math.isclose(float(vals[1]), float(vals[2]), rel_tol=1e-6)


def test_schnirelmann_gap_row():
    res = run_cli("schnirelmann", "--op", "gap", "--i", "2", "--digits", "2")
    row = res.stdout.splitlines()[1].split(",")
    assert row[2] == "12" and row[3] == "24" and row[4] == "0"


def test_verify_identities_suite():
    res = run_cli("verify", "--suite", "identities")
    assert res.returncode == 0
    lines = res.stdout.splitlines()
    assert len(lines) == 4 and all(line.startswith("PASS") for line in lines)


def test_verify_unknown_suite():
    res = run_cli("verify", "--suite", "bogus")
    assert res.returncode == 2
    assert "available" in res.stderr


def test_verify_missing_fixtures():
    res = run_cli("verify", "--suite", "asymptotics", "--fixtures", "/no/such/file")
    assert res.returncode == 2
    assert "fixtures" in res.stderr


def test_verify_budget_skips():
    res = run_cli("verify", "--suite", "asymptotics", "--budget", "1s")
    assert res.returncode == 0
    assert all(line.startswith("SKIP") for line in res.stdout.splitlines())


def test_resource_error_exit_3():
    res = run_cli("enumerate", "--limit", str(10**18))
    assert res.returncode == 3
    assert "resource" in res.stderr.lower()


def test_cache_roundtrip_via_env(tmp_path):
    env = {"REVPRIME_CACHE_DIR": str(tmp_path)}
    first = run_cli("enumerate", "--limit", "1000", env=env)
    assert first.returncode == 0
    assert (tmp_path / "prime_table.bin").exists()
    second = run_cli("enumerate", "--limit", "1000", env=env)
    assert second.stdout == first.stdout


def test_config_file_precedence(tmp_path):
    cfg = tmp_path / "conf.txt"
    cfg.write_text("base = 6\n")
    res = run_cli("enumerate", "--limit", "10", "--config", str(cfg))
    # base 6 from the file: 7 = 11_6 reverses to itself
    assert any(line.startswith("7,7,") for line in res.stdout.splitlines())
    # an explicit flag beats the file
    res = run_cli("enumerate", "--limit", "10", "--config", str(cfg), "--base", "10")
    assert any(line.startswith("2,2,") for line in res.stdout.splitlines())


def test_runtime_goes_to_stderr_not_stdout():
    res = run_cli("count-ap", "--x", "100", "--q", "1", "--a", "0")
    assert "runtime_ms" in res.stderr
    assert "runtime_ms" not in res.stdout


def test_verify_failure_exits_1(tmp_path, capsys):
    # zeroed tolerances force criterion 7 to fail; run in-process so the
    # session's cached tables are reused
    from revprime import cli, verify

    doctored = tmp_path / "fixtures.txt"
    lines = []
    for key, value in verify.load_fixtures(verify.default_fixtures_path()).items():
        lines.append(f"{key} = {0.0 if key.startswith('theta_ratio_tol') else value}")
    doctored.write_text("\n".join(lines))
    code = cli.main(
        ["verify", "--suite", "asymptotics", "--fixtures", str(doctored)]
    )
    out = capsys.readouterr().out
    assert code == 1
    assert "FAIL 7-progression-convergence" in out
