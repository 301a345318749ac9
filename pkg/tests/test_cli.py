import json

import pytest
from click.testing import CliRunner

from d2dpda.cli import cli
from d2dpda.pda import PdaArray, equivalent

from figures import SMALL_DPDA, PAIRS_GRID3


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def small_path(tmp_path):
    p = tmp_path / "small.json"
    p.write_text(json.dumps(SMALL_DPDA.to_json()))
    return p


def test_construct_writes_valid_file(runner, tmp_path):
    out = tmp_path / "grid3.json"
    r = runner.invoke(cli, ["construct", "--kind", "I", "--grid", "3", "--out", str(out)])
    assert r.exit_code == 0, r.output
    data = json.loads(out.read_text())
    assert data["params"]["R"] == "2"
    assert equivalent(PdaArray.from_json(data), PAIRS_GRID3)
    assert "(6,9,3,18)" in r.stdout


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("kind", ["I", "II"])
def test_construct_validate_round_trip(runner, tmp_path, n, kind):
    out = tmp_path / "a.json"
    r = runner.invoke(cli, ["construct", "--kind", kind, "--grid", str(n), "--out", str(out)])
    assert r.exit_code == 0, r.output
    r = runner.invoke(cli, ["validate", str(out)])
    assert r.exit_code == 0, r.output
    assert r.stdout.startswith("valid DPDA (")


def test_construct_general_from_code(runner, tmp_path):
    g = tmp_path / "g.json"
    g.write_text('{"q": 3, "rows": [[1,0,1,1],[0,1,1,2]]}')
    r = runner.invoke(cli, ["construct", "--kind", "general", "--code", str(g)])
    assert r.exit_code == 0, r.output
    assert json.loads(r.stdout)["params"]["S"] == 36


def test_construct_general_from_design_file(runner, tmp_path):
    d = tmp_path / "d.json"
    d.write_text('{"points": ["1","2","3","4"], "classes": [[["1","2"],["3","4"]],[["1","3"],["2","4"]]]}')
    r = runner.invoke(cli, ["construct", "--kind", "general", "--design", str(d), "--format", "csv"])
    assert r.exit_code == 0, r.output
    assert r.stdout.splitlines()[0] == ",12,34,13,24"


def test_construct_rejects_non_crd(runner, tmp_path):
    d = tmp_path / "d.json"
    d.write_text(json.dumps({"points": list("123456"), "classes": [
        [["1", "2"], ["3", "4"], ["5", "6"]],
        [["1", "3"], ["2", "5"], ["4", "6"]],
        [["1", "4"], ["2", "6"], ["3", "5"]],
    ]}))
    r = runner.invoke(cli, ["construct", "--kind", "general", "--design", str(d)])
    assert r.exit_code == 1
    assert "mu_2" in r.stderr


def test_construct_needs_one_source(runner):
    assert runner.invoke(cli, ["construct", "--kind", "I"]).exit_code == 2
    assert runner.invoke(cli, ["construct", "--kind", "I", "--grid", "2", "--code", "x"]).exit_code == 2
    assert runner.invoke(cli, ["construct", "--kind", "I", "--grid", "1"]).exit_code == 2


def test_validate_small_dpda(runner, small_path):
    r = runner.invoke(cli, ["validate", str(small_path)])
    assert r.exit_code == 0
    assert r.stdout.strip() == "valid DPDA (6,4,2,6), phi=identity"


def test_validate_c4_failure(runner, tmp_path):
    p = tmp_path / "a.json"
    p.write_text('{"entries": [["*", 1], [1, "*"]]}')
    r = runner.invoke(cli, ["validate", str(p)])
    assert r.exit_code == 1
    assert r.stdout.splitlines()[0] == "valid PDA (2,2,1,1), C4 fails for s=1"


def test_validate_reports_c3(runner, tmp_path):
    p = tmp_path / "a.json"
    p.write_text(json.dumps(SMALL_DPDA.with_entry(0, 1, 1).to_json()))
    r = runner.invoke(cli, ["validate", str(p)])
    assert r.exit_code == 1
    assert "not a PDA" in r.stdout
    assert "C3a" in r.stdout and "C3b" in r.stdout


def test_validate_with_phi_file(runner, tmp_path, small_path):
    phi = tmp_path / "phi.json"
    phi.write_text(json.dumps({str(s): 1 for s in range(1, 7)}))
    r = runner.invoke(cli, ["validate", str(small_path), "--phi", str(phi)])
    assert r.exit_code == 1
    phi.write_text("not json")
    assert runner.invoke(cli, ["validate", str(small_path), "--phi", str(phi)]).exit_code == 2


def test_parse_errors_exit_2(runner, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{")
    assert runner.invoke(cli, ["validate", str(p)]).exit_code == 2
    assert runner.invoke(cli, ["validate", str(tmp_path / "missing.json")]).exit_code == 2
    p.write_text('{"entries": [[0, "*"]]}')
    assert runner.invoke(cli, ["export", str(p)]).exit_code == 2


def test_simulate_small_dpda(runner, small_path, tmp_path):
    out = tmp_path / "rep.json"
    r = runner.invoke(cli, ["simulate", str(small_path), "--demand", "4,2,1,5,6,3", "--N", "6",
                            "--B", "4096", "--seed", "1", "--out", str(out)])
    assert r.exit_code == 0, r.output
    rep = json.loads(out.read_text())
    assert rep["transmission_count"] == 6
    assert rep["measured_load"] == "3/2"
    assert rep["all_decoded"] and rep["one_shot_verified"]
    assert "load 3/2, 6/6 users decoded, one-shot verified" in r.stderr


def test_simulate_random_and_bad_demand(runner, small_path):
    r = runner.invoke(cli, ["simulate", str(small_path), "--demand", "random", "--N", "3"])
    assert r.exit_code == 0, r.output
    assert json.loads(r.stdout)["all_decoded"]
    for bad in ("1,2", "a,b,c,d,e,f", "7,1,1,1,1,1"):
        r = runner.invoke(cli, ["simulate", str(small_path), "--demand", bad, "--N", "6"])
        assert r.exit_code == 2, bad


def test_bounds_array_and_numbers(runner, tmp_path):
    out = tmp_path / "grid3.json"
    runner.invoke(cli, ["construct", "--kind", "I", "--grid", "3", "--out", str(out)])
    r = runner.invoke(cli, ["bounds", "--array", str(out)])
    assert r.stdout.strip() == "R=2 bound_jmqx=2 bound_new=4/3 tighter=jmqx meets_jmqx"
    r = runner.invoke(cli, ["bounds", "--K", "6", "--F", "4", "--Z", "2", "--format", "json"])
    assert json.loads(r.stdout) == {"K": 6, "F": 4, "Z": 2, "bound_jmqx": "1",
                                    "bound_new": "3/2", "tighter": "new"}
    r = runner.invoke(cli, ["bounds", "--K", "6", "--F", "4", "--Z", "2", "--format", "csv"])
    assert r.stdout.splitlines() == ["K,F,Z,bound_jmqx,bound_new,tighter", "6,4,2,1,3/2,new"]
    assert runner.invoke(cli, ["bounds", "--K", "6"]).exit_code == 2
    assert runner.invoke(cli, ["bounds", "--K", "6", "--F", "4", "--Z", "4"]).exit_code == 2


def test_compare_csv(runner, tmp_path):
    out = tmp_path / "t.csv"
    r = runner.invoke(cli, ["compare", "--n", "2", "--schemes", "jcm,hypercube,constrII",
                            "--format", "csv", "--out", str(out)])
    assert r.exit_code == 0, r.output
    assert out.read_text().splitlines() == [
        "scheme,K,M_over_N,F,R,n",
        "JCM K=n^2 t=n,4,1/2,12,1,2",
        "hypercube,4,1/2,4,2,2",
        "construction II,4,1/2,4,1,2",
    ]


def test_compare_range_and_errors(runner):
    r = runner.invoke(cli, ["compare", "--n", "2-4", "--schemes", "constrI", "--format", "json"])
    assert [row["n"] for row in json.loads(r.stdout)] == [2, 3, 4]
    assert runner.invoke(cli, ["compare", "--n", "2", "--schemes", "bogus"]).exit_code == 2
    assert runner.invoke(cli, ["compare", "--n", "x"]).exit_code == 2


def test_export(runner, small_path, tmp_path):
    r = runner.invoke(cli, ["export", str(small_path)])
    assert r.stdout.splitlines()[1] == "1,*,3,*,5,*,1"
    p = tmp_path / "b.json"
    p.write_text(json.dumps({"entries": [["*", 5], [5, "*"]]}))
    r = runner.invoke(cli, ["export", str(p), "--canonical", "--format", "json"])
    assert json.loads(r.stdout)["entries"] == [["*", 1], [1, "*"]]
    r = runner.invoke(cli, ["export", str(p), "--format", "text"])
    assert r.exit_code == 0 and "5" in r.stdout
