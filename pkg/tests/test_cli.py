import csv
import io
import json

import pytest
from click.testing import CliRunner

from conftest import read_rows
from dkmax.bounds import eps0
from dkmax.cli import main

TABLE_EPS1 = {2: 1.0, 3: 0.98, 4: 0.94, 5: 0.92}
K4_ROWS_PRINTED = 13


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def test_lambda_json():
    res = run("lambda", "--k", 2, "--format", "json")
    assert res.exit_code == 0, res.output
    (row,) = json.loads(res.output)
    assert row["k"] == 2 and row["nmax"] == "6983776800"
    assert round(row["lambda"], 4) == 1.5379
    assert row["nmax_factors"] == [[2, 5], [3, 3], [5, 2], [7, 1], [11, 1], [13, 1], [17, 1], [19, 1]]


def test_jumps_csv():
    res = run("jumps", "--k", 3, "--count", 3, "--format", "csv")
    assert res.exit_code == 0
    rows = list(csv.reader(io.StringIO(res.output)))
    assert rows == [
        ["eps", "p", "m", "n_tilde"],
        ["1.5850", "2", "1", "2"],
        ["1.0000", "2", "2", "12 = 2^2 x 3"],
        ["1.0000", "3", "1", "12 = 2^2 x 3"],
    ]


def test_jumps_window():
    res = run("jumps", "--k", 2, "--eps-min", 0.3, "--eps-max", 1.0, "--format", "csv")
    got = [r[0] for r in list(csv.reader(io.StringIO(res.output)))[1:]]
    want = [r["eps"] for r in read_rows("jump_tables.csv") if r["k"] == "2" and 0.3 <= float(r["eps"]) <= 1.0]
    assert [float(x) for x in got] == [float(x) for x in want]


def test_k_guard():
    res = run("lambda", "--k", 1)
    assert res.exit_code == 2 and "k must be ≥ 2" in res.output


def test_unknown_flag_is_usage_error():
    res = run("lambda", "--k", 2, "--bogus")
    assert res.exit_code == 2 and "No such option" in res.output


def test_conflicting_jump_flags():
    assert run("jumps", "--k", 2, "--count", 2, "--eps-min", 0.5).exit_code == 2


def test_eps1_out_of_range_is_usage_error():
    assert run("lambda", "--k", 2, "--eps1", 5).exit_code == 2


def test_verify_exit_codes():
    ok = run("verify", "--k", 2, "--limit", 100000, "--format", "json")
    assert ok.exit_code == 0 and json.loads(ok.output)[0]["argmax"] == 55440
    bad = run("verify", "--k", 2, "--limit", 10000, "--eps", 0.1, "--n", 12)
    assert bad.exit_code == 1 and "violation n=" in bad.output
    assert run("verify", "--k", 2, "--limit", 6000, "--n", 5041).exit_code == 1
    assert run("verify", "--k", 2, "--limit", 6000, "--n", 5040).exit_code == 0
    assert run("verify", "--k", 2, "--limit", 100, "--eps", 0.3).exit_code == 2


def test_resource_error_exits_1():
    res = run("lambda", "--k", 2, "--sieve-limit", 30)
    assert res.exit_code == 1 and "error:" in res.output


def test_shcn_and_bounds():
    res = run("shcn", "--k", 5, "--eps", 1.0, "--format", "json")
    (row,) = json.loads(res.output)
    assert row["n"] == "720"
    res = run("bounds", "--k", 2, "--format", "json")
    (row,) = json.loads(res.output)
    assert round(row["eps0"], 4) == 0.195 and row["n2"] == "2520"


def test_full_decimal():
    res = run("lambda", "--k", 2000, "--format", "json")
    (row,) = json.loads(res.output)
    assert row["nmax"] is None and row["nmax_factors"] == [[2, 102], [3, 16], [5, 1]]
    res = run("lambda", "--k", 2000, "--format", "json", "--full-decimal")
    assert json.loads(res.output)[0]["nmax"] == str(2**102 * 3**16 * 5)


def test_range_commands(tmp_path):
    cache = tmp_path / "c.jsonl"
    res = run("nmax-range", "--k-min", 2, "--k-max", 16, "--format", "csv", "--cache", cache)
    assert res.exit_code == 0
    runs = list(csv.DictReader(io.StringIO(res.output)))
    expected = [r for r in read_rows("nmax_partition.csv") if int(r["k_first"]) <= 16]
    assert [(r["k_first"], r["k_last"]) for r in runs] == [(e["k_first"], e["k_last"]) for e in expected]
    assert len(cache.read_text().splitlines()) == 15
    res = run("lambda-range", "--k-min", 2, "--k-max", 5, "--format", "csv", "--cache", cache)
    lams = [r["lambda"] for r in csv.DictReader(io.StringIO(res.output))]
    assert lams == ["1.5379", "1.5914", "1.6337", "1.6714"]
    assert len(cache.read_text().splitlines()) == 15
    assert run("plot-data", "--k-min", 5, "--k-max", 4).exit_code == 2


def _md_rows(text):
    lines = text.strip().splitlines()
    header = [c.strip() for c in lines[0].strip("|").split("|")]
    return [dict(zip(header, (c.strip() for c in line.strip("|").split("|")))) for line in lines[2:]]


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_md_tables_match_f_tables(k):
    res = run("lambda", "--k", k, "--table", "--eps1", repr(TABLE_EPS1[k] * eps0(k)))
    assert res.exit_code == 0, res.output
    got = _md_rows(res.output)
    want = [r for r in read_rows("f_tables.csv") if r["k"] == str(k)]
    if k == 4:
        got, want = got[:K4_ROWS_PRINTED], want[:K4_ROWS_PRINTED]
    assert len(got) == len(want)
    for g, w in zip(got, want):
        assert g["n"].split(" = ")[0] == w["n"]
        for col in ("eps_lo", "eps_hi", "f"):
            assert float(g[col]) == float(w[col]), (col, g, w)


def test_k2_md_table_has_15_rows():
    assert len(_md_rows(run("lambda", "--k", 2, "--table").output)) == 15
