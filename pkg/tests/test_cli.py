import csv
import io
import json

import pytest

from sylowmeet.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_census(capsys):
    code, out, _ = run(capsys, "census", "--n", "6", "--subset", "P")
    assert code == 0
    assert rows(out)[1:] == [["6", "P", "0", "1"], ["6", "P", "2", "3"], ["6", "P", "4", "7"], ["6", "P", "6", "5"]]
    assert rows(out)[0] == ["n", "subset", "support_or_partition", "count"]


def test_census_cycle_type_range(capsys):
    code, out, _ = run(capsys, "census", "--n-min", "4", "--n-max", "5", "--subset", "PminusA", "--cycle-type")
    assert code == 0
    assert ["4", "PminusA", "2+2", "2"] in rows(out)
    assert ["5", "PminusA", "4+1", "2"] in rows(out)


def test_wdist_exact(capsys):
    code, out, _ = run(capsys, "wdist", "--n", "4", "--exact")
    assert code == 0
    assert [r[:2] for r in rows(out)[1:]] == [["0", "2/3"], ["2", "1/3"]]


def test_wdist_sampled_json(capsys):
    code, out, _ = run(capsys, "wdist", "--n", "2", "--samples", "100", "--seed", "1", "--format", "json")
    assert code == 0
    assert json.loads(out)["pmf"] == [{"k": 1, "probability": "1.0", "probability_float": 1.0}]


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "8", "--s", "8")
    assert code == 0
    header, row = rows(out)
    assert dict(zip(header, row))["big_sum"] == "75776"
    assert dict(zip(header, row))["census_p_minus_a"] == "88"


def test_bounds_grid(capsys):
    code, out, _ = run(capsys, "bounds", "--n-min", "4", "--n-max", "6")
    assert code == 0
    assert len(rows(out)) == 1 + 2 + 2 + 3


def test_expect(capsys):
    code, out, _ = run(capsys, "expect", "--n", "4")
    assert code == 0
    assert json.loads(out)["expected_non_a"] == "8/3"


def test_estimate_exhaustive(capsys):
    code, out, _ = run(capsys, "estimate", "--n", "8", "--backend", "exact", "--exhaustive")
    assert code == 0
    d = json.loads(out)
    assert d["samples"] == 40320 and d["estimate"] == "0/1" and d["seed"] is None


def test_estimate_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "estimate", "--n", "20", "--samples", "1000", "--seed", "3", "--out", str(path))
    assert code == 0 and out == ""
    d = json.loads(path.read_text())
    assert d["n"] == 20 and d["samples"] == 1000


def test_estimate_csv(capsys):
    code, out, _ = run(capsys, "estimate", "--n", "20", "--samples", "100", "--seed", "3", "--format", "csv")
    assert code == 0
    header, row = rows(out)
    assert "estimate" in header and len(row) == len(header)


def test_deterministic_bytes(capsys):
    args = ("estimate", "--n", "40", "--samples", "9000", "--seed", "11")
    outs = [run(capsys, *args, "--workers", w)[1] for w in ("1", "2", "3")]
    assert outs[0] == outs[1] == outs[2]


@pytest.mark.parametrize("argv", [
    ["estimate", "--n", "10"],  # no seed
    ["estimate", "--n", "10", "--seed", "1", "--samples", "0"],
    ["estimate", "--n", "10", "--seed", "1", "--mode", "dihedral"],
    ["estimate", "--unknown"],
    ["census"],
    ["census", "--n", "5", "--n-min", "1", "--n-max", "3"],
    ["bounds", "--n", "8", "--s", "7"],
    ["wdist", "--n", "4"],
    [],
])
def test_config_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [
    ["estimate", "--n", "64", "--backend", "exact", "--seed", "1"],
    ["estimate", "--n", "12", "--exhaustive"],
    ["census", "--n", "200", "--cycle-type"],
    ["expect", "--n", "130"],
])
def test_guard_errors(argv, capsys):
    code, _, err = run(capsys, *argv)
    assert code == 3
    assert "error:" in err


def test_help_lists_commands(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for cmd in ("estimate", "census", "wdist", "expect", "bounds"):
        assert cmd in out
