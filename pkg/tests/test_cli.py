"""End-to-end command-line tests: formats, exit codes, cache, fault injection."""

import json
import subprocess
import sys

import pytest

from nodalbetti import cli, moduli
from nodalbetti.exactpoly import IntPoly, NotPolynomial


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --------------------------------------------------------------------------
# compute

def test_compute_csv_column(capsys):
    code, out, _ = run(["compute", "--g1", "3", "--g2", "3",
                        "--component", "m12", "--format", "csv"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "i,B_i"
    assert lines[1] == "0,1"
    assert lines[2] == "1,0"
    assert lines[3] == "2,3"
    assert lines[4] == "3,12"
    assert lines[-1] == "30,1"
    assert len(lines) == 32


def test_compute_intersection_json(capsys):
    code, out, _ = run(["compute", "--g1", "3", "--g2", "3",
                        "--component", "intersection", "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["betti"][0] == "2"
    assert doc["component"] == "intersection"
    assert doc["degree"] == 30
    assert doc["euler_char"] == 0


def test_compute_all_components_json(capsys):
    code, out, _ = run(["compute", "--g1", "3", "--g2", "4",
                        "--component", "all"], capsys)
    assert code == 0
    docs = json.loads(out)
    assert [d["component"] for d in docs] == ["m12", "m21", "intersection"]
    for i in range(37):
        assert (int(docs[0]["betti"][i]) + int(docs[1]["betti"][i])
                == int(docs[2]["betti"][i]))


def test_compute_markdown(capsys):
    code, out, _ = run(["compute", "--g1", "3", "--g2", "3",
                        "--component", "all", "--format", "md"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "| i | (3,3) m12 | (3,3) m21 | (3,3) intersection |"
    assert lines[2] == "| 0 | 1 | 1 | 2 |"


def test_compute_domain_check(capsys):
    code, _, _ = run(["compute", "--g1", "1", "--g2", "3"], capsys)
    assert code == 2


def test_compute_all_csv_rejected(capsys):
    code, _, _ = run(["compute", "--g1", "3", "--g2", "3",
                      "--component", "all", "--format", "csv"], capsys)
    assert code == 2


def test_unknown_flag_exits_2(capsys):
    code, _, _ = run(["compute", "--g1", "3", "--g2", "3", "--frobnicate"], capsys)
    assert code == 2


def test_json_round_trip(tmp_path, capsys):
    out_file = tmp_path / "table.json"
    code, _, _ = run(["compute", "--g1", "3", "--g2", "4",
                      "--output", str(out_file)], capsys)
    assert code == 0
    text = out_file.read_text()
    assert json.dumps(json.loads(text), indent=2) + "\n" == text


def test_output_determinism(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        code, _, _ = run(["compute", "--g1", "4", "--g2", "3",
                          "--component", "all", "--output", str(path)], capsys)
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


# --------------------------------------------------------------------------
# cache

def test_cache_round_trip(tmp_path, capsys):
    cache = tmp_path / "cache.json"
    cold = tmp_path / "cold.json"
    warm = tmp_path / "warm.json"
    code, _, _ = run(["compute", "--g1", "3", "--g2", "3", "--cache", str(cache),
                      "--output", str(cold)], capsys)
    assert code == 0
    assert cache.exists()
    store = json.loads(cache.read_text())
    assert any(key.startswith("3:3:m12:") for key in store)
    code, _, _ = run(["compute", "--g1", "3", "--g2", "3", "--cache", str(cache),
                      "--output", str(warm)], capsys)
    assert code == 0
    assert cold.read_bytes() == warm.read_bytes()


def test_cache_env_var(tmp_path, capsys, monkeypatch):
    cache = tmp_path / "env-cache.json"
    monkeypatch.setenv(cli.CACHE_ENV_VAR, str(cache))
    code, _, _ = run(["compute", "--g1", "3", "--g2", "3"], capsys)
    assert code == 0
    assert cache.exists()


def test_corrupt_cache_is_ignored(tmp_path, capsys):
    cache = tmp_path / "cache.json"
    cache.write_text("{ not json")
    code, out, _ = run(["compute", "--g1", "3", "--g2", "3",
                        "--cache", str(cache)], capsys)
    assert code == 0
    assert json.loads(out)["betti"][6] == "81"


# --------------------------------------------------------------------------
# verify

def test_verify_small_grid(tmp_path, capsys):
    out_file = tmp_path / "verify.json"
    code, _, err = run(["verify", "--grid-max", "3", "--output", str(out_file)], capsys)
    assert code == 0
    doc = json.loads(out_file.read_text())
    assert doc["passed"] is True
    assert doc["grid_max"] == 3
    names = {c["name"] for c in doc["checks"]}
    assert "count_pipeline_matches_closed_form" in names
    assert "m12_palindromic" in names
    assert "0 failures" in err
    # order-stable aggregation
    keys = [(c["g1"], c["g2"], c["name"]) for c in doc["checks"]]
    assert keys == sorted(keys)


def test_verify_grid_validation(capsys):
    code, _, _ = run(["verify", "--grid-max", "2"], capsys)
    assert code == 2


def test_verify_csv_and_md_render(capsys):
    code, out, _ = run(["verify", "--grid-max", "3", "--format", "csv"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "g1,g2,name,passed,advisory,witness"
    code, out, _ = run(["verify", "--grid-max", "3", "--format", "md"], capsys)
    assert code == 0
    assert out.startswith("| g1 | g2 | check | passed | advisory | witness |")


def test_verify_grid8_within_runtime_bound(tmp_path, capsys):
    import time
    start = time.perf_counter()
    code, _, _ = run(["verify", "--grid-max", "8",
                      "--output", str(tmp_path / "verify8.json")], capsys)
    elapsed = time.perf_counter() - start
    assert code == 0
    assert elapsed < 60.0, f"verify --grid-max 8 took {elapsed:.1f}s"


def test_verification_commands_take_no_cache(capsys):
    # the cache is an optimization for compute only; verification commands
    # do not even accept it
    assert run(["verify", "--grid-max", "3", "--cache", "x.json"], capsys)[0] == 2
    assert run(["table1", "--cache", "x.json"], capsys)[0] == 2


# --------------------------------------------------------------------------
# table1

def test_table1_pristine(capsys):
    code, out, err = run(["table1"], capsys)
    assert code == 0
    assert "0 mismatches across all filled cells" in out
    assert "0 mismatches across all filled cells" in err


def test_table1_json_structure(capsys):
    code, out, _ = run(["table1", "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["total_mismatches"] == 0
    pairs = [(c["g1"], c["g2"]) for c in doc["columns"]]
    assert pairs == [(3, 3), (3, 4), (3, 5), (4, 3), (4, 4), (4, 5)]
    col33 = doc["columns"][0]
    assert col33["filled_cells"] == 31
    assert col33["duality_checked_blanks"] == 0
    col45 = doc["columns"][5]
    assert col45["filled_cells"] == 26
    assert col45["duality_checked_blanks"] == 23


def test_table1_missing_fixture(tmp_path, capsys):
    code, _, err = run(["table1", "--fixture", str(tmp_path / "nope.json")], capsys)
    assert code == 4
    assert "cannot load fixture" in err


def test_table1_corrupt_fixture(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"(3,3)": {"zero": "one"}}')
    code, _, err = run(["table1", "--fixture", str(bad)], capsys)
    assert code == 4
    assert "corrupt fixture" in err


def test_table1_fault_injection(monkeypatch, capsys):
    pristine = moduli.poincare_m12

    def corrupted(gp):
        poly = pristine(gp)
        coeffs = list(poly.coeffs)
        coeffs[6] += 1
        return IntPoly(coeffs)

    monkeypatch.setattr(moduli, "poincare_m12", corrupted)
    code, out, err = run(["table1", "--format", "json"], capsys)
    assert code == 1
    doc = json.loads(out)
    assert doc["total_mismatches"] > 0
    first = doc["columns"][0]["mismatches"][0]
    assert first["index"] == 6
    assert first["fixture"] == "81"
    assert first["computed"] == "82"


def test_verify_fault_injection(monkeypatch, capsys):
    pristine = moduli.poincare_m12

    def corrupted(gp):
        poly = pristine(gp)
        coeffs = list(poly.coeffs)
        coeffs[6] += 1
        return IntPoly(coeffs)

    monkeypatch.setattr(moduli, "poincare_m12", corrupted)
    code, out, _ = run(["verify", "--grid-max", "3"], capsys)
    assert code == 1
    doc = json.loads(out)
    failing = [c for c in doc["checks"] if not c["passed"] and not c["advisory"]]
    assert failing
    assert any("B_" in c["witness"] or "coefficient" in c["witness"] for c in failing)


def test_assembly_error_exits_3(monkeypatch, capsys):
    def broken(gp, component, cache_path):
        raise NotPolynomial("reduced denominator is 1 + t^2, not 1")

    monkeypatch.setattr(cli, "_cached_table", broken)
    code, _, err = run(["compute", "--g1", "3", "--g2", "3"], capsys)
    assert code == 3
    assert "NotPolynomial" in err
    assert "1 + t^2" in err


# --------------------------------------------------------------------------
# installed entry point

def test_console_script_smoke():
    proc = subprocess.run([sys.executable, "-m", "nodalbetti.cli",
                           "compute", "--g1", "2", "--g2", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["degree"] == 18
