import json
import os

import pytest

from thetapm import RunConfig, Workbench, bundled_curve
from thetapm.cache import load_symbol, store_symbol
from thetapm.cli import main
from thetapm.reports import comparable, parse_report, render_report


DATA = os.path.join(os.path.dirname(__file__), "..", "data")


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


# -- report format ------------------------------------------------------------

def test_report_round_trip():
    text = render_report("demo", [{"a": 1}, {"b": [1, 2]}])
    header, records = parse_report(text)
    assert header["kind"] == "demo"
    assert records == [{"a": 1}, {"b": [1, 2]}]


def test_report_comparable_strips_timestamp():
    t1 = render_report("demo", [{"a": 1}], timestamp="2001-01-01T00:00:00Z")
    t2 = render_report("demo", [{"a": 1}], timestamp="2002-02-02T00:00:00Z")
    assert t1 != t2
    assert comparable(t1) == comparable(t2)


# -- cache ---------------------------------------------------------------------

def test_symbol_cache_roundtrip(tmp_path):
    cfg = RunConfig(cache_dir=str(tmp_path))
    wb = Workbench(cfg)
    c = bundled_curve("32a")
    sym, src1 = wb.symbol(c, +1)
    assert src1 == "computed"
    wb2 = Workbench(RunConfig(cache_dir=str(tmp_path)))
    sym2, src2 = wb2.symbol(c, +1)
    assert src2 == "disk"
    assert sym2.values_on_generators == sym.values_on_generators
    sym3, src3 = wb2.symbol(c, +1)
    assert src3 == "memory"


def test_corrupted_cache_entry_recomputed(tmp_path):
    cfg = RunConfig(cache_dir=str(tmp_path))
    wb = Workbench(cfg)
    c = bundled_curve("32a")
    wb.symbol(c, +1)
    files = [f for f in os.listdir(tmp_path) if f.endswith(".json")]
    assert files
    path = os.path.join(tmp_path, files[0])
    with open(path, "w") as fh:
        fh.write("{ corrupted")
    assert load_symbol(str(tmp_path), 32, "32a", 1) is None
    wb2 = Workbench(RunConfig(cache_dir=str(tmp_path)))
    sym, src = wb2.symbol(c, +1)
    assert src == "computed"
    # entry was replaced with a valid one
    assert load_symbol(str(tmp_path), 32, "32a", 1) is not None


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("WORKBENCH_CACHE", str(tmp_path))
    wb = Workbench(RunConfig())
    c = bundled_curve("32a")
    wb.symbol(c, -1)
    assert any(f.endswith(".json") for f in os.listdir(tmp_path))


def test_cache_results_identical_with_and_without(tmp_path):
    c = bundled_curve("32a")
    wb1 = Workbench(RunConfig(n_max=2))
    wb2 = Workbench(RunConfig(n_max=2, cache_dir=str(tmp_path)))
    wb3 = Workbench(RunConfig(n_max=2, cache_dir=str(tmp_path)))
    s1 = wb1.signed_series(c, 1, "-")
    s2 = wb2.signed_series(c, 1, "-")
    s3 = wb3.signed_series(c, 1, "-")     # symbol from disk this time
    assert s1.rep_exact == s2.rep_exact == s3.rep_exact


# -- subcommands -----------------------------------------------------------------

def test_cmd_symbols_and_cache_hit(tmp_path, capsys):
    code, out = run_cli(["symbols", "--curve", "32a", "--sign", "+",
                         "--cache-dir", str(tmp_path)], capsys)
    assert code == 0
    _, recs = parse_report(out)
    assert recs[0]["cache"] == "computed"
    code, out = run_cli(["symbols", "--curve", "32a", "--sign", "+",
                         "--cache-dir", str(tmp_path)], capsys)
    assert code == 0
    _, recs = parse_report(out)
    assert recs[0]["cache"] == "disk"


def test_cmd_symbols_level_mismatch_is_input_error(capsys):
    code, _ = run_cli(["symbols", "--curve", "32a", "--level", "40",
                       "--sign", "+"], capsys)
    assert code == 2


def test_cmd_symbols_unknown_curve(capsys):
    code, _ = run_cli(["symbols", "--curve", "nope", "--sign", "+"], capsys)
    assert code == 2


def test_cmd_invariants_fixture(capsys):
    code, out = run_cli(["invariants", "--series-file",
                         os.path.join(DATA, "series_example.json")], capsys)
    assert code == 0
    _, recs = parse_report(out)
    assert recs[0]["mu"] == 0
    assert recs[0]["lambda"] == 2
    assert recs[0]["slopes"] == [[2, "1/2"]]


def test_cmd_specialize_fixture(capsys):
    code, out = run_cli(["specialize", "--twovar-file",
                         os.path.join(DATA, "twovar_example.json")], capsys)
    assert code == 0
    _, recs = parse_report(out)
    assert recs[0]["coefficients"] == ["1", "2", "1"]


def test_cmd_c2_fixture(capsys):
    code, out = run_cli(["c2", "--ideal-file",
                         os.path.join(DATA, "ideal_example.json")], capsys)
    assert code == 0
    _, recs = parse_report(out)
    assert recs[0]["length"] == 2


def test_cmd_fudge(tmp_path, capsys):
    sigma = tmp_path / "sigma.json"
    sigma.write_text('{"primes": [2]}')
    code, out = run_cli(["fudge", "--curve", "32a", "--discriminant", "-43",
                         "--p", "5", "--sigma-file", str(sigma)], capsys)
    assert code == 0
    _, recs = parse_report(out)
    assert recs[0]["divisor"]["terms"] == []
    assert recs[2]["theorem_ledger"]["rhs"]["c2_Z"]["status"] == "out-of-scope"


def test_cmd_fudge_p3_flagged(tmp_path, capsys):
    sigma = tmp_path / "sigma.json"
    sigma.write_text('{"primes": [2]}')
    code, out = run_cli(["fudge", "--curve", "32a", "--discriminant", "-43",
                         "--p", "3", "--sigma-file", str(sigma)], capsys)
    assert code == 0
    _, recs = parse_report(out)
    assert any("p >= 5" in f for f in recs[1]["ledger"]["flags"])


def test_cmd_coprime_series_files(tmp_path, capsys):
    f = tmp_path / "f.json"
    g = tmp_path / "g.json"
    f.write_text(json.dumps({"p": 3, "precision": 25,
                             "coefficients": ["-3", "0", "1"]}))
    g.write_text(json.dumps({"p": 3, "precision": 25,
                             "coefficients": ["-3", "0", "0", "1"]}))
    code, out = run_cli(["coprime", "--f-file", str(f), "--g-file", str(g)],
                        capsys)
    assert code == 0
    _, recs = parse_report(out)
    assert recs[0]["verdict"] == "coprime"
    assert recs[0]["method"] == "slope-disjoint"


def test_cmd_theta_base_curve(capsys):
    code, out = run_cli(["theta", "--curve", "32a", "--sign", "+",
                         "--n-max", "4"], capsys)
    assert code == 0
    _, recs = parse_report(out)
    assert recs[0]["profile"]["lambda"] == 0
    assert recs[0]["stabilized"] is True


def test_cmd_table_row_with_wrong_prime_isolates(tmp_path, capsys):
    rows = tmp_path / "rows.jsonl"
    rows.write_text('{"curve": "32a", "discriminant": -43, "p": 5}\n')
    code, out = run_cli(["table", "--rows-file", str(rows)], capsys)
    assert code == 1
    _, recs = parse_report(out)
    assert "error" in recs[0]
    assert recs[-1]["summary"]["failures"] == 1


def test_cmd_table_bad_file_is_input_error(capsys):
    code, _ = run_cli(["table", "--rows-file", "/nonexistent.jsonl"], capsys)
    assert code == 2


def test_out_file_written(tmp_path, capsys):
    out_path = tmp_path / "report.jsonl"
    code, _ = run_cli(["invariants", "--series-file",
                       os.path.join(DATA, "series_example.json"),
                       "--out", str(out_path)], capsys)
    assert code == 0
    header, recs = parse_report(out_path.read_text())
    assert recs[0]["lambda"] == 2


# -- determinism and parallelism ---------------------------------------------------

def test_reports_deterministic_modulo_timestamp(capsys):
    _, out1 = run_cli(["invariants", "--series-file",
                       os.path.join(DATA, "series_example.json")], capsys)
    _, out2 = run_cli(["invariants", "--series-file",
                       os.path.join(DATA, "series_example.json")], capsys)
    assert comparable(out1) == comparable(out2)


def test_parallel_equals_serial_row_and_cache_path(tmp_path):
    c = bundled_curve("32a")
    wb1 = Workbench(RunConfig(parallelism=1))
    wb2 = Workbench(RunConfig(parallelism=3))
    r1 = wb1.table_row(c, -43)
    r2 = wb2.table_row(c, -43)
    assert r1 == r2
    # cache-miss then cache-hit symbol paths give the identical row
    wb3 = Workbench(RunConfig(cache_dir=str(tmp_path)))
    wb3.symbol(c, +1)
    wb3.symbol(c, -1)
    wb4 = Workbench(RunConfig(cache_dir=str(tmp_path)))
    assert wb4.symbol(c, +1)[1] == "disk"
    r3 = wb4.table_row(c, -43)
    assert r3 == r1


def test_strict_hypothesis_flag_rejects_inert_rows():
    from thetapm import UnsupportedHypothesis
    from thetapm.table import FieldSpec
    fs = FieldSpec(-43)
    assert not fs.p_splits(3)
    with pytest.raises(UnsupportedHypothesis):
        fs.enforce_split(3, strict=True)
    fs.enforce_split(3, strict=False)
    assert FieldSpec(-107).p_splits(3)


def test_strict_hypothesis_row_isolated(tmp_path, capsys):
    rows = tmp_path / "rows.jsonl"
    rows.write_text('{"curve": "32a", "discriminant": -107, "p": 3}\n')
    # -107 splits, so the strict flag accepts it; use a cheap assertion on
    # the config path only (full run exercised elsewhere)
    from thetapm import RunConfig
    cfg = RunConfig(strict_hypotheses=True)
    assert cfg.strict_hypotheses
