import json
import os
from concurrent.futures import ProcessPoolExecutor

import pytest

from cohomex.cache import ENV_VAR, ResultCache
from cohomex.cli import census_grid, main, run_census
from cohomex.errors import ParseError
from cohomex.report import CohomologyReport, canonical_json, parse_degrees, render


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_degrees():
    assert parse_degrees("0..3") == range(0, 4)
    assert parse_degrees("5") == range(5, 6)
    for bad in ("3..1", "a..b", "-1..2", ""):
        with pytest.raises(ParseError):
            parse_degrees(bad)


def test_group_command(capsys):
    code, out, _ = run(capsys, "group", "family:p=2,a=1,b=1,g=1,d=0", "--format", "json")
    facts = json.loads(out)
    assert code == 0 and facts["order"] == 8 and not facts["abelian"] and facts["center_order"] == 2
    code, out, _ = run(capsys, "group", "product:(cyclic:2)x(cyclic:4)")
    assert code == 0 and "abelian invariants: (2, 4)" in out


def test_cohomology_command_json(capsys):
    code, out, _ = run(capsys, "cohomology", "cyclic:4", "--degrees", "0..3")
    data = json.loads(out)
    assert code == 0 and data["schema"] == "cohomex.report" and data["schema_version"] == 1
    assert [d["text"] for d in data["degrees"]] == ["Z", "0", "Z/4", "0"]
    rep = CohomologyReport.from_json(data)
    assert rep.to_json() == data


def test_cohomology_command_formats(capsys):
    code, out, _ = run(capsys, "cohomology", "cyclic:2", "--degrees", "1..2", "--coeffs", "mod:2",
                       "--format", "md")
    assert code == 0 and "| 2 |" in out and "Z/2" in out
    code, out, _ = run(capsys, "cohomology", "cyclic:2", "--degrees", "1..2", "--format", "csv")
    assert code == 0 and out.splitlines()[0].startswith("descriptor,coefficients,degree")
    assert len(out.strip().splitlines()) == 3


@pytest.mark.parametrize("argv", [
    ["cohomology", "cyclic:0"],
    ["cohomology", "cyclic:4", "--degrees", "4..1"],
    ["cohomology", "cyclic:4", "--coeffs", "mod:1"],
    ["cohomology", "family:p=4,a=1,b=1,g=1,d=0"],
    ["verify", "prop7", "cyclic:4"],
    ["frobnicate"],
    ["snf", "/nonexistent/file"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_resource_errors_exit_3(capsys):
    code, _, err = run(capsys, "cohomology", "cyclic:300")
    assert code == 3 and "resource" in err
    code, _, _ = run(capsys, "cohomology", "family:p=2,a=1,b=1,g=1,d=0", "--degrees", "0..9",
                     "--budget-generators", "1000")
    assert code == 3


def test_verify_commands(capsys):
    code, out, _ = run(capsys, "verify", "cor4", "family:p=2,a=1,b=1,g=1,d=0", "--degrees", "0..6")
    assert code == 0 and json.loads(out)["verdicts"][0]["status"] == "pass"
    code, out, _ = run(capsys, "verify", "transfer", "wreath:p=2,n=2", "--degrees", "1..4")
    v = json.loads(out)["verdicts"][0]
    assert code == 0 and v["claim"] == "transfer" and v["status"] == "pass"
    code, out, _ = run(capsys, "verify", "prop1", "cyclic:4", "--degrees", "2..2", "--subgroup", "g")
    assert code == 0 and json.loads(out)["verdicts"][0]["status"] == "pass"
    code, out, _ = run(capsys, "verify", "prop2", "family:p=2,a=1,b=1,g=1,d=0", "--degrees", "0..4")
    assert code == 0 and json.loads(out)["verdicts"][0]["status"] == "pass"
    code, out, _ = run(capsys, "verify", "cor1", "cyclic:4", "--subgroup", "g^2", "--degrees", "1..4")
    assert code == 0
    code, _, _ = run(capsys, "verify", "prop1", "cyclic:4", "--subgroup", "zz")
    assert code == 2


def test_snf_command(tmp_path, capsys):
    f = tmp_path / "m.txt"
    f.write_text("# two maps\n2 2\n0 0 2\n1 1 3\n\n1 2\n0 1 4\n")
    code, out, _ = run(capsys, "snf", str(f), "--transforms", "--local", "2,4")
    assert code == 0 and "factors [1, 6]" in out and "U*A*V == D: True" in out
    assert "local p=2 k=4: [1, 2]" in out
    g = tmp_path / "c.txt"
    g.write_text("2 1\n0 0 2\n\n1 2\n")
    code, out, _ = run(capsys, "snf", str(g), "--homology")
    assert code == 0 and "Z + Z/2" in out


def test_census_grid_dedup():
    grid = census_grid([2], 1)
    assert [tuple(P) for P in grid] == [(2, 1, 1, 1, 0), (2, 1, 1, 1, 1)]
    assert len(census_grid([2, 3], 2)) == len(set(map(tuple, census_grid([2, 3], 2))))


def test_census_command(tmp_path, capsys):
    code, out, _ = run(capsys, "census", "--primes", "2", "--max-param", "1", "--degrees", "0..4",
                       "--cache-dir", str(tmp_path), "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 3
    code, out, _ = run(capsys, "census", "--primes", "2", "--max-param", "1", "--degrees", "0..4",
                       "--cache-dir", str(tmp_path))
    rows = json.loads(out)["census"]
    d8 = next(r for r in rows if r["params"]["delta"] == 0)
    assert d8["epsilon"] == 2 and d8["exponents"]["4"] == 4 and d8["first_epsilon_degree"] == 4


def test_census_skips_oversized_cells(tmp_path):
    rep = run_census([2], 1, range(0, 8), budget=10 ** 4, cache_dir=tmp_path)
    assert any(r["skipped"] for r in rep.census)


def test_census_parallel_matches_serial(tmp_path):
    a = run_census([2, 3], 1, range(0, 4), 2 * 10 ** 7, tmp_path / "a", workers=1)
    b = run_census([2, 3], 1, range(0, 4), 2 * 10 ** 7, tmp_path / "b", workers=3)
    assert canonical_json(a) == canonical_json(b)


# ------------------------------------------------------------------ cache

def test_cache_cold_warm_identical(tmp_path, capsys):
    argv = ["cohomology", "family:p=2,a=1,b=1,g=1,d=0", "--degrees", "0..5", "--cache-dir", str(tmp_path)]
    _, cold, _ = run(capsys, *argv)
    _, warm, _ = run(capsys, *argv)
    c, w = json.loads(cold), json.loads(warm)
    assert c["timing"]["cache_hits"] == 0 and w["timing"]["cache_hits"] == 6
    assert canonical_json(CohomologyReport.from_json(c)) == canonical_json(CohomologyReport.from_json(w))


def test_cache_env_var(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    run(capsys, "cohomology", "cyclic:3", "--degrees", "0..2")
    assert len(list(tmp_path.glob("*.json"))) == 3


def test_cache_corruption_is_a_miss(tmp_path):
    cache = ResultCache(tmp_path)
    cache.put("cyclic:2", "int", 2, {"free_rank": 0, "torsion": [2]})
    path = cache.path(cache.key("cyclic:2", "int", 2))
    entry = json.loads(path.read_text())
    entry["payload"]["torsion"] = [4]
    path.write_text(json.dumps(entry))
    assert cache.get("cyclic:2", "int", 2) is None
    path.write_text("{truncated")
    assert cache.get("cyclic:2", "int", 2) is None
    assert cache.misses == 2


def test_cache_version_mismatch_is_absent(tmp_path):
    ResultCache(tmp_path, version="old").put("cyclic:2", "int", 2, {"x": 1})
    fresh = ResultCache(tmp_path)
    assert fresh.get("cyclic:2", "int", 2) is None
    assert ResultCache(tmp_path, version="old").get("cyclic:2", "int", 2) == {"x": 1}


def _writer(args):
    root, i = args
    cache = ResultCache(root)
    for _ in range(20):
        cache.put("cyclic:2", "int", 2, {"free_rank": 0, "torsion": [2]})
        got = cache.get("cyclic:2", "int", 2)
        assert got in (None, {"free_rank": 0, "torsion": [2]})
    return i


def test_cache_parallel_writers(tmp_path):
    with ProcessPoolExecutor(4) as pool:
        assert sorted(pool.map(_writer, [(str(tmp_path), i) for i in range(8)])) == list(range(8))
    assert ResultCache(tmp_path).get("cyclic:2", "int", 2) == {"free_rank": 0, "torsion": [2]}
    assert not [p for p in os.listdir(tmp_path) if p.startswith(".tmp-")]


def test_report_round_trip_and_render():
    rep = CohomologyReport("cohomology", "cyclic:2", 2, "int",
                           degrees=[{"degree": 2, "free_rank": 0, "torsion": [2], "exponent": 2,
                                     "has_free_part": False, "text": "Z/2"}],
                           timing={"seconds": 1.0})
    data = rep.to_json()
    assert CohomologyReport.from_json(json.loads(json.dumps(data))) == rep
    assert "timing" not in json.loads(canonical_json(rep))
    with pytest.raises(ParseError):
        CohomologyReport.from_json({**data, "schema_version": 99})
    with pytest.raises(ValueError):
        render(rep, "xml")


@pytest.mark.parametrize("desc, order, extra", [
    ("cyclic:6", 6, {"abelian": True, "abelian_invariants": [6]}),
    ("family:p=2,a=1,b=1,g=1,d=0", 8, {"center_order": 2}),
    ("wreath:p=2,n=2", 8, {"abelian": False}),
])
def test_group_examples(capsys, desc, order, extra):
    code, out, _ = run(capsys, "group", desc, "--format", "json")
    facts = json.loads(out)
    assert code == 0 and facts["order"] == order
    for k, v in extra.items():
        assert facts[k] == v


def test_cohomology_family_low_degrees(capsys):
    code, out, _ = run(capsys, "cohomology", "family:p=2,a=1,b=1,g=1,d=0", "--degrees", "0..4")
    degs = json.loads(out)["degrees"]
    assert code == 0
    assert degs[0]["free_rank"] == 1 and degs[1]["torsion"] == [] and degs[2]["torsion"] == [2, 2]


def test_verify_examples(capsys):
    code, out, _ = run(capsys, "verify", "cor4", "product:(cyclic:3)x(cyclic:3)", "--degrees", "1..4")
    assert code == 0 and json.loads(out)["verdicts"][0]["status"] == "pass"
    code, out, _ = run(capsys, "verify", "prop1", "family:p=2,a=1,b=1,g=1,d=0", "--degrees", "0..6")
    v = json.loads(out)["verdicts"][0]
    assert code == 0 and v["status"] == "pass"
    assert {e["status"] for e in v["evidence"]["degrees"].values()} <= {"pass", "vacuous"}


def test_max_bits_budget(capsys):
    code, _, _ = run(capsys, "cohomology", "cyclic:4", "--max-bits", "0")
    assert code == 2
    code, _, _ = run(capsys, "cohomology", "cyclic:4", "--degrees", "0..3", "--max-bits", "8")
    assert code == 0


def test_cache_survives_interrupted_writer(tmp_path):
    cache = ResultCache(tmp_path)
    # a writer killed before the rename leaves only a temp file behind
    (tmp_path / ".tmp-dead.json").write_text('{"key": ')
    assert cache.get("cyclic:2", "int", 2) is None
    # a half-written entry at the final path (e.g. copied in by hand) reads as absent
    cache.path(cache.key("cyclic:2", "int", 2)).write_text('{"key": {"descriptor"')
    assert cache.get("cyclic:2", "int", 2) is None
    cache.put("cyclic:2", "int", 2, {"free_rank": 0, "torsion": [2]})
    assert cache.get("cyclic:2", "int", 2) == {"free_rank": 0, "torsion": [2]}
