import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from primatlas import schemas
from primatlas.cli import dumps, main, run

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "scripts"))
from export_schemas import render  # noqa: E402

TORSION_POINT = '{"v":["1","theta"],"w":[{"a":"1/2","b":"0"},{"a":"1/3","b":"0"}]}'
ID3 = '{"g":[["1","0","0"],["0","1","0"],["0","0","1"]]}'

# one successful invocation per subcommand
INVOCATIONS = {
    "classify-sl2": ["classify-sl2", "--point", TORSION_POINT],
    "classify-sl3": ["classify-sl3", "--point", ID3],
    "stabilizer": ["stabilizer", "--point", ID3],
    "limit": ["limit", "--space", "sl3", "--profile", '{"kind":"Q0Seq","s":"0","t":"0"}', "--target", '{"kind":"Zero"}'],
    "induce": ["induce", "--point", ID3, "--ideal", '{"kind":"HeisIdeal","j":{"z":"1/2","a":"0","b":"0"}}'],
    "witness": ["witness", "--case", "modd", "--s", "1", "--t", "1", "--m", "3"],
    "heis-rep": ["heis-rep", "--z", "1/2", "--a", "0", "--b", "0"],
    "res-hull": ["res-hull", "--z", "1/4", "--b", "1/2", "--subgroup", "Gamma2"],
    "folner": ["folner", "--N", "2", "--g", "[1,0,0]"],
    "amenability": ["amenability", "--z", "1/2", "--N", "2"],
    "greenleaf": ["greenleaf", "--space", "H3/Gamma1", "--N", "2"],
    "intertwine": ["intertwine", "--z", "1/2", "--a", "1", "--root-a2", "1"],
    "transitivity": ["transitivity", "--n", "6"],
}


def test_every_command_has_an_invocation():
    assert set(INVOCATIONS) == set(schemas.COMMANDS)


@pytest.mark.parametrize("cmd", sorted(INVOCATIONS))
def test_results_validate_against_published_schema(cmd):
    code, doc = run(INVOCATIONS[cmd])
    assert code == 0, doc
    reparsed = json.loads(dumps(doc))
    jsonschema.validate(reparsed, schemas.envelope_schema())
    jsonschema.validate(reparsed["result"], schemas.result_schema(cmd))


@pytest.mark.parametrize("cmd", sorted(INVOCATIONS))
def test_output_is_byte_deterministic(cmd):
    assert dumps(run(INVOCATIONS[cmd])[1]) == dumps(run(INVOCATIONS[cmd])[1])


def test_documented_examples():
    assert run(INVOCATIONS["limit"]) == (0, {"ok": True, "result": True})
    _, doc = run(INVOCATIONS["witness"])
    r = doc["result"]
    assert r["gamma"] == [[3, 1], [2, 1]]
    assert r["u"] == [["1", "-1/3"], ["0", "1"]]
    assert r["product"] == [["3", "0"], ["2", "1/3"]]
    _, doc = run(INVOCATIONS["heis-rep"])
    r = doc["result"]
    assert r["X"]["re"] == [[0.0, 1.0], [1.0, 0.0]]
    assert r["Y"]["re"] == [[1.0, 0.0], [0.0, -1.0]]
    assert r["Z"]["re"] == [[-1.0, 0.0], [0.0, -1.0]]


def test_exit_codes():
    code, doc = run(["witness", "--case", "modd", "--m", "4"])
    assert code == 2 and doc["error"]["kind"] == "EvenM"
    assert run(["transitivity", "--n", "31"])[0] == 2
    for argv in (["bogus"], [], ["limit", "--space", "sl3"], ["classify-sl2", "--point", "{not json"],
                 ["classify-sl2", "--point", '{"v":[1]}']):
        code, doc = run(argv)
        assert code == 1 and doc["ok"] is False and doc["error"]["kind"] == "UsageError"


def test_validate_mode_does_not_compute():
    # a stabilizer-mismatched ideal is still schema-valid
    argv = ["--validate", "induce", "--point", ID3, "--ideal", '{"kind":"Gamma1Char","a":"0","b":"0"}']
    assert run(argv) == (0, {"ok": True, "result": {"validated": ["ideal", "point"]}})
    assert run(argv[1:])[0] == 2


def test_theta_enclosure_from_environment(monkeypatch):
    point = '{"v":["1","theta - 355/113"],"w":[{"a":"0","b":"0"},{"a":"0","b":"0"}]}'
    baseline = run(["classify-sl2", "--point", point])
    monkeypatch.setenv("PRIMATLAS_THETA", "3.1415:3.1416")
    assert run(["classify-sl2", "--point", point]) == baseline
    monkeypatch.setenv("PRIMATLAS_THETA", "3/1")
    assert run(["classify-sl2", "--point", point])[0] != 0
    assert run(["--theta", "3.14:3.15", "classify-sl2", "--point", point]) == baseline


def test_alternate_input_forms():
    assert run(["folner", "--N", "2", "--g", '{"x":1,"y":0,"z":0}']) == run(INVOCATIONS["folner"])
    coeffs = '{"v":[{"coeffs":[["1","1"]]},{"coeffs":[["0","1"],["1","1"]]}],"w":[{"a":"1/2","b":"0"},{"a":"1/3","b":"0"}]}'
    assert run(["classify-sl2", "--point", coeffs]) == run(INVOCATIONS["classify-sl2"])


def test_published_schema_files_are_current():
    published = {p.name: p.read_text() for p in (ROOT / "docs" / "schemas").glob("*.json")}
    assert published == {name: render(s) for name, s in schemas.all_schemas().items()}


def test_main_prints_one_line(capsys):
    assert main(INVOCATIONS["transitivity"]) == 0
    out = capsys.readouterr().out
    assert out == dumps({"ok": True, "result": {"bound": 30, "n": 6, "single_orbit": True}}) + "\n"


def test_console_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "primatlas", *INVOCATIONS["witness"]], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["ok"] is True
