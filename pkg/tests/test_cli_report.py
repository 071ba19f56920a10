import json
import pathlib

import jsonschema
import pytest
from click.testing import CliRunner

from artifact.cli_report import GroupCache, analyze, main, parse_cubic, selftest_checks
from artifact.curve_local import ModelError

ROOT = pathlib.Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"
SCHEMA = json.loads((ROOT / "docs" / "report-schema.json").read_text())

# name -> argv (all with --json and no cache), expected exit code
FIXTURES = {
  "analyze_106276": (["analyze", "x^3 - x^2 - 54*x + 169", "--root-number", "-1"], 0),
  "analyze_9032": (["analyze", "x^3 - 7*x + 3"], 0),
  "analyze_9032_eps_minus": (["analyze", "0,-7,3", "--root-number", "-1"], 0),
  "analyze_9032_twist_minus1": (["analyze", "0,-7,-3"], 0),
  "analyze_reducible": (["analyze", "x^3 - x"], 2),
  "analyze_dagger_fail": (["analyze", "x^3 + 11x^2 - 60x"], 2),
  "twists_9032": (["twists", "x^3 - 7*x + 3", "--limit", "10000", "--root-number", "1"], 0),
  "twists_106276": (["twists", "-1,-54,169", "--limit", "2000"], 0),
  "certify_9032": (["certify", "x^3 - 7*x + 3", "--height", "30"], 0),
  "certify_rank0_twist": (["certify", "0,-12943,-238521", "--height", "30"], 0),
}


def run(argv, **kw):
  r = CliRunner().invoke(main, argv, catch_exceptions=False, **kw)
  return r.exit_code, r.output


def json_argv(argv):
  extra = ["--json"]
  if argv[0] == "analyze":
    extra.append("--no-cache")
  return argv + extra


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_golden(name):
  argv, code = FIXTURES[name]
  got_code, out = run(json_argv(argv))
  assert got_code == code
  rep = json.loads(out)
  jsonschema.validate(rep, SCHEMA)
  assert out == (GOLDEN / (name + ".json")).read_text()
  assert json.dumps(rep, indent=2) + "\n" == out  # lossless round trip


def test_golden_values():
  rep = json.loads((GOLDEN / "analyze_106276.json").read_text())
  assert rep["selmer"]["exact"] == 3 and rep["groups"]["cl"] == [2, 2]
  rep = json.loads((GOLDEN / "analyze_9032_eps_minus.json").read_text())
  assert rep["selmer"]["exact"] == 1
  assert rep["selmer"]["root_number"]["provenance"] == "user-supplied"
  rep = json.loads((GOLDEN / "twists_9032.json").read_text())
  exact = {s: v["exact"] for s, v in rep["family"]["sets"].items()}
  assert set(exact.values()) == {0, 1, 2}
  rep = json.loads((GOLDEN / "certify_rank0_twist.json").read_text())
  assert rep["points"] == [] and rep["certified_rank"] == 0


def test_text_output_and_reasons():
  code, out = run(["analyze", "x^3 - x", "--no-cache"])
  assert code == 2 and "rational 2-torsion" in out
  code, out = run(["analyze", "x^3 - 7*x + 3", "--no-cache", "--label", "9032.a1"])
  assert code == 0 and "9032.a1" in out and "status     PASS" in out


def test_usage_errors():
  code, out = run(["twists", "x^3 - 7*x + 3", "--limit", "50"])
  assert code == 2 and "at least 100" in out
  code, out = run(["analyze", "2*x^3 + 1"])
  assert code == 2
  code, out = run(["analyze", "x^3 - 7*x + 3", "--root-number", "2"])
  assert code == 2


def test_parse_cubic():
  assert parse_cubic("x^3 - 7*x + 3").F == (3, -7, 0, 1)
  assert parse_cubic("y^2 = x^3 - 7x + 3").F == (3, -7, 0, 1)
  assert parse_cubic("[0, -7, 3]").F == (3, -7, 0, 1)
  assert parse_cubic("-1,-54,169").F == (169, -54, -1, 1)
  with pytest.raises(ModelError):
    parse_cubic("x^4 + 1")
  with pytest.raises(ModelError):
    parse_cubic("x^3 + x/2")


def test_cache_on_off_identical(tmp_path):
  path = str(tmp_path / "c.json")
  argv = ["analyze", "x^3 - x^2 - 54*x + 169", "--root-number", "-1", "--json"]
  _, cold = run(argv + ["--cache", path])
  _, warm = run(argv + ["--cache", path])
  _, off = run(argv + ["--no-cache"])
  assert cold == warm == off
  assert json.loads(open(path).read())["schema_version"] == 1


def test_cache_env_override(tmp_path, monkeypatch):
  path = tmp_path / "env.json"
  monkeypatch.setenv("ARTIFACT_CACHE", str(path))
  run(["analyze", "x^3 - 7*x + 3"])
  assert path.exists()


def test_corrupted_cache_is_detected(tmp_path):
  path = str(tmp_path / "c.json")
  run(["analyze", "x^3 - 7*x + 3", "--cache", path])
  blob = json.loads(open(path).read())
  for rec in blob["entries"].values():
    rec["data"]["field"]["field_disc"] = 1130
  open(path, "w").write(json.dumps(blob))
  cache = GroupCache(path)
  rep, code = analyze(parse_cubic("x^3 - 7*x + 3"), None, cache)
  assert code == 0 and rep["field"]["field_disc"] == 1129
  assert any("checksum" in e for e in cache.events)


def test_forged_checksum_fails_invariants(tmp_path):
  from artifact.cli_report import _checksum
  path = str(tmp_path / "c.json")
  run(["analyze", "x^3 - 7*x + 3", "--cache", path])
  blob = json.loads(open(path).read())
  for rec in blob["entries"].values():
    rec["data"]["field"]["field_disc"] = 1129 * 4
    rec["checksum"] = _checksum(rec["data"])
  open(path, "w").write(json.dumps(blob))
  cache = GroupCache(path)
  rep, _ = analyze(parse_cubic("x^3 - 7*x + 3"), None, cache)
  assert rep["field"]["field_disc"] == 1129
  assert any("invariant" in e for e in cache.events)


def test_garbage_cache_file(tmp_path):
  path = tmp_path / "c.json"
  path.write_text("not json")
  code, out = run(["selftest", "--cache", str(path)])
  assert code == 0 and "selftest PASS" in out


def test_selftest_perturbed_fails():
  code, out = run(["selftest", "--no-cache", "--perturb"])
  assert code == 1 and "FAIL" in out
  assert all(ok for _, ok, _ in selftest_checks())


def test_internal_error_exit_code(monkeypatch):
  import artifact.cli_report as cr

  def boom(*a, **k):
    raise RuntimeError("boom")
  monkeypatch.setattr(cr, "analyze", boom)
  code, _ = run(["analyze", "x^3 - 7*x + 3", "--no-cache"])
  assert code == 1


def regenerate():
  GOLDEN.mkdir(exist_ok=True)
  for name, (argv, _) in FIXTURES.items():
    _, out = run(json_argv(argv))
    (GOLDEN / (name + ".json")).write_text(out)


if __name__ == "__main__":
  regenerate()
