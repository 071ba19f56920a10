"""Command line interface, JSON reports and the class-group cache.

Exit codes: 0 the hypotheses hold (or selftest passed), 2 the hypotheses fail
(the report is still printed) or the command line is invalid, 1 any internal
error or selftest failure.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import re
import sys
import tempfile
from collections import OrderedDict

import click

from . import exact_arith as ea
from .curve_local import CurveModel, ModelError, conductor, hypotheses_check
from .selmer_bounds import (InconsistentParityError, RootNumber, RootNumberError, certified_rank,
                            in_c_tilde, point_class_coordinates, point_search, root_number)

SCHEMA_VERSION = 1
CACHE_ENV = "ARTIFACT_CACHE"
DEFAULT_CACHE = ".artifact-cache.json"

# Root numbers of the two worked fixtures, used only when no override is
# given and the curve has additive reduction.
FIXTURE_ROOT_NUMBERS = {
  (169, -54, -1, 1): -1,  # 106276.a1
  (3, -7, 0, 1): 1,  # 9032.a1
}


# --------------------------------------------------------------------------
# parsing


def parse_cubic(spec: str) -> CurveModel:
  """A monic integer cubic from 'x^3 - 7*x + 3' or a coefficient triple 'a2,a1,a0'."""
  s = spec.strip()
  m = re.fullmatch(r"\[?\s*(-?\d+)\s*[, ]\s*(-?\d+)\s*[, ]\s*(-?\d+)\s*\]?", s)
  if m:
    a2, a1, a0 = (int(g) for g in m.groups())
    return CurveModel((a0, a1, a2, 1))
  import sympy
  from sympy.parsing.sympy_parser import (convert_xor, implicit_multiplication_application,
                                          parse_expr, standard_transformations)
  s = re.sub(r"^\s*y\s*\^\s*2\s*=", "", s)
  x = sympy.Symbol("x")
  try:
    expr = parse_expr(s, local_dict={"x": x}, transformations=standard_transformations
                      + (convert_xor, implicit_multiplication_application))
    P = sympy.Poly(expr, x)
  except Exception as exc:
    raise ModelError("cannot parse cubic %r" % spec) from exc
  if P.degree() != 3 or P.LC() != 1 or not all(c.is_integer for c in P.all_coeffs()):
    raise ModelError("expected a monic cubic with integer coefficients")
  c = [int(t) for t in reversed(P.all_coeffs())]
  return CurveModel(tuple(c))


# --------------------------------------------------------------------------
# cache


def _checksum(entry):
  blob = json.dumps(entry, sort_keys=True, separators=(",", ":")).encode()
  return hashlib.sha256(blob).hexdigest()


class GroupCache:
  """Versioned JSON file of field and group data with per-entry checksums."""

  def __init__(self, path=None):
    self.path = path
    self.entries = {}
    self.events = []
    self.dirty = False
    if path and os.path.exists(path):
      try:
        with open(path) as fh:
          blob = json.load(fh)
        if blob.get("schema_version") != SCHEMA_VERSION:
          self.events.append("schema version changed: cache discarded")
        else:
          self.entries = dict(blob.get("entries", {}))
      except (OSError, ValueError, AttributeError):
        self.events.append("unreadable cache: discarded")

  def get(self, key, F):
    rec = self.entries.get(key)
    if rec is None:
      return None
    data = rec.get("data") if isinstance(rec, dict) else None
    if not isinstance(data, dict) or rec.get("checksum") != _checksum(data):
      self.events.append("checksum mismatch for %s: recomputed" % key)
      del self.entries[key]
      return None
    if not _cheap_invariants(F, data):
      self.events.append("invariant check failed for %s: recomputed" % key)
      del self.entries[key]
      return None
    return data

  def put(self, key, data):
    self.entries[key] = {"checksum": _checksum(data), "data": data}
    self.dirty = True

  def save(self):
    if not self.path or not self.dirty:
      return
    blob = {"schema_version": SCHEMA_VERSION, "entries": self.entries}
    d = os.path.dirname(os.path.abspath(self.path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
      json.dump(blob, fh, sort_keys=True, indent=1)
    os.replace(tmp, self.path)
    self.dirty = False


def _cheap_invariants(F, data):
  try:
    D = ea.poly_disc(list(F))
    fd, idx = data["field"]["field_disc"], data["field"]["index"]
    if D != idx * idx * fd:
      return False
    if (fd > 0) != (D > 0):
      return False
    cl = math.prod(data["groups"]["cl"])
    clp = math.prod(data["groups"]["cl_plus"])
    if clp % cl:
      return False
    # Cl and Cl_* are both quotients of Cl_+
    for st in data["groups"]["cl_star"].values():
      if clp % math.prod(st["invariants"]):
        return False
    return True
  except (KeyError, TypeError, ValueError):
    return False


def _fmt_unit(u):
  return repr(u)


def compute_group_data(F, places=(0,)):
  """Field, unit and class group data for the field of F; Cl_* at each place."""
  from .class_units import class_group_data, unit_group
  from .star_class import _field_for, star_class_group, subgroup_ranks
  K = _field_for(F)
  ug = unit_group(K)
  data = class_group_data(K)
  out = OrderedDict()
  out["field"] = OrderedDict([
    ("field_disc", K.field_disc),
    ("index", K.index),
    ("signature", list(K.signature)),
    ("regulator", "%.6f" % ug.regulator),
    ("fundamental_units", [_fmt_unit(u) for u in ug.fundamental_units]),
    ("unit_signatures", [list(r) for r in ug.unit_signatures]),
  ])
  star = OrderedDict()
  for pl in places:
    if K.r1 == 1 and pl != 0:
      continue
    S = star_class_group(K=K, place=pl)
    cs, ct, contained = subgroup_ranks(K, pl)
    star[str(pl)] = OrderedDict([("invariants", list(S.invariants)), ("c_star_rank", cs),
                                 ("c_tilde_rank", ct), ("c_star_in_c_tilde", contained)])
  out["groups"] = OrderedDict([("cl", list(data.cl.invariants)),
                               ("cl_plus", list(data.clp.invariants)),
                               ("cl_star", star)])
  out["certification"] = OrderedDict([
    ("class_group_certified", bool(data.cl.certified)),
    ("narrow_class_group_certified", bool(data.clp.certified)),
    ("units_certified", bool(ug.certified)),
  ])
  return out


def group_data(F, places=(0,), cache=None):
  F = tuple(F)
  places = tuple(sorted(set(places)))
  key = "%s|%s" % (",".join(map(str, F)), ",".join(map(str, places)))
  if cache is not None:
    hit = cache.get(key, F)
    if hit is not None:
      return hit
  # normalised exactly as a cache round trip would, so output never depends on the cache
  data = json.loads(json.dumps(compute_group_data(F, places), sort_keys=True))
  if cache is not None:
    cache.put(key, data)
  return data


# --------------------------------------------------------------------------
# reports


def _two_rank(inv):
  return sum(1 for d in inv if d % 2 == 0)


def _curve_block(E):
  c0, c1, c2, _ = E.F
  return OrderedDict([
    ("cubic", ea.cubic_str(list(E.F))),
    ("coefficients", [c2, c1, c0]),
    ("label", E.label or None),
    ("disc_F", E.disc_F),
    ("disc_E", E.disc_E),
    ("conductor", conductor(E)),
  ])


def _hyp_block(hyp):
  rows = []
  for p, v in sorted(hyp.verdicts.items()):
    rows.append(OrderedDict([
      ("p", p), ("case", v.case), ("satisfied", list(v.satisfied)),
      ("shape", v.witness.get("shape")), ("kodaira", v.witness.get("kodaira")),
      ("c_p", v.witness.get("c_p")), ("v_disc_F", v.witness.get("v_disc_F")),
      ("v_disc_order", v.witness.get("v_disc_order")),
    ]))
  return OrderedDict([("passed", hyp.passed), ("failed", list(hyp.failed)), ("primes", rows)])


def _resolve_root_number(E, override):
  if override is not None:
    return root_number(E, override), None
  try:
    return root_number(E), None
  except RootNumberError as exc:
    if E.F in FIXTURE_ROOT_NUMBERS:
      return RootNumber(FIXTURE_ROOT_NUMBERS[E.F], "fixture"), None
    return None, str(exc)


def analyze(E: CurveModel, root_override=None, cache=None):
  """Full pipeline; returns (report dict, exit code)."""
  rep = OrderedDict()
  rep["schema_version"] = SCHEMA_VERSION
  rep["command"] = "analyze"
  rep["curve"] = _curve_block(E)
  hyp = hypotheses_check(E)
  rep["hypotheses"] = _hyp_block(hyp)
  rep["field"] = None
  rep["groups"] = None
  rep["selmer"] = None
  rep["certification"] = None
  rep["notes"] = []
  if not hyp.irreducible:
    rep["status"] = "FAIL"
    rep["notes"].append("rational 2-torsion: F is reducible over Q")
    return rep, 2
  data = group_data(E.F, (0,), cache)
  rep["field"] = data["field"]
  star = data["groups"]["cl_star"]["0"]
  rep["groups"] = OrderedDict([("cl", data["groups"]["cl"]), ("cl_plus", data["groups"]["cl_plus"]),
                               ("cl_star", star["invariants"])])
  rep["certification"] = data["certification"]
  if not hyp.passed:
    rep["status"] = "FAIL"
    return rep, 2
  lo = _two_rank(star["invariants"])
  sel = OrderedDict([("lower", lo), ("upper", lo + 1), ("exact", None), ("root_number", None),
                     ("c_star_rank", star["c_star_rank"]), ("c_tilde_rank", star["c_tilde_rank"])])
  eps, why = _resolve_root_number(E, root_override)
  if eps is not None:
    want = 0 if eps.value == 1 else 1
    c = [r for r in (lo, lo + 1) if r % 2 == want]
    if len(c) != 1:
      raise InconsistentParityError("no endpoint with the parity of the root number")
    sel["exact"] = c[0]
    sel["root_number"] = OrderedDict([("value", eps.value), ("provenance", eps.provenance)])
  else:
    rep["notes"].append(why)
  rep["selmer"] = sel
  rep["status"] = "PASS"
  return rep, 0


def twists(E: CurveModel, limit, root_override=None):
  from .twist_family import twist_family_report
  eps, why = _resolve_root_number(E, root_override)
  rep = OrderedDict()
  rep["schema_version"] = SCHEMA_VERSION
  rep["command"] = "twists"
  rep["curve"] = _curve_block(E)
  hyp = hypotheses_check(E)
  rep["hypotheses"] = _hyp_block(hyp)
  if not hyp.passed:
    rep["family"] = None
    rep["status"] = "FAIL"
    return rep, 2
  fam = twist_family_report(E, limit, None if eps is None else eps.value)
  rep["family"] = fam.as_dict()
  if eps is not None:
    rep["family"]["root_number"] = OrderedDict([("value", eps.value), ("provenance", eps.provenance)])
  elif why:
    rep["family"]["notes"].append(why)
  rep["status"] = "PASS"
  return rep, 0


def certify(E: CurveModel, height):
  from .star_class import _field_for, subgroup_ranks
  rep = OrderedDict()
  rep["schema_version"] = SCHEMA_VERSION
  rep["command"] = "certify"
  rep["curve"] = _curve_block(E)
  hyp = hypotheses_check(E)
  rep["hypotheses"] = _hyp_block(hyp)
  if not hyp.irreducible:
    rep["status"] = "FAIL"
    return rep, 2
  K = _field_for(E.F)
  pts = point_search(E, height)
  rows = []
  for P in pts:
    co = point_class_coordinates(E, P, K)
    ok = in_c_tilde(K, co)
    if not ok:
      raise AssertionError("Kummer class outside C~")
    rows.append(OrderedDict([("x", str(P[0])), ("y", str(P[1])), ("class", co),
                             ("in_c_tilde", ok)]))
  cs, ct, _ = subgroup_ranks(K, 0)
  rep["height"] = height
  rep["points"] = rows
  rep["certified_rank"] = certified_rank(E, pts, K)
  rep["c_star_rank"] = cs
  rep["c_tilde_rank"] = ct
  rep["status"] = "PASS" if hyp.passed else "FAIL"
  return rep, 0 if hyp.passed else 2


# --------------------------------------------------------------------------
# rendering


def render_json(rep):
  return json.dumps(rep, indent=2, sort_keys=False)


def _inv(inv):
  return " x ".join("Z/%d" % d for d in inv) if inv else "trivial"


def render_text(rep):
  out = []
  c = rep["curve"]
  out.append("curve      y^2 = %s%s" % (c["cubic"], "  [%s]" % c["label"] if c["label"] else ""))
  out.append("disc(F)    %d   conductor %d" % (c["disc_F"], c["conductor"]))
  h = rep["hypotheses"]
  out.append("hypotheses %s%s" % ("PASS" if h["passed"] else "FAIL",
                                  "" if h["passed"] else " (" + "; ".join(h["failed"]) + ")"))
  for r in h["primes"]:
    out.append("  p=%-6d case %-5s satisfied %-14s %s c_p=%s" % (
      r["p"], r["case"], ",".join(r["satisfied"]) or "-", r["kodaira"], r["c_p"]))
  if rep["command"] == "analyze" and rep.get("field"):
    f = rep["field"]
    out.append("field      disc %d  index %d  signature %s  regulator %s" % (
      f["field_disc"], f["index"], tuple(f["signature"]), f["regulator"]))
    g = rep["groups"]
    out.append("Cl         %s" % _inv(g["cl"]))
    out.append("Cl_+       %s" % _inv(g["cl_plus"]))
    out.append("Cl_*       %s" % _inv(g["cl_star"]))
  if rep["command"] == "analyze" and rep.get("selmer"):
    s = rep["selmer"]
    line = "Selmer     [%d, %d]" % (s["lower"], s["upper"])
    if s["exact"] is not None:
      line += "  exact %d (root number %+d, %s)" % (
        s["exact"], s["root_number"]["value"], s["root_number"]["provenance"])
    out.append(line)
  if rep["command"] == "twists" and rep.get("family"):
    fam = rep["family"]
    out.append("primes     %d odd primes <= %d not dividing the discriminant" % (
      fam["primes_considered"], fam["X"]))
    out.append("inert      %d (density %.4f)%s" % (fam["inert_count"], fam["inert_density"],
                                                    "  [Galois]" if fam["galois"] else ""))
    if fam["totally_ramified"]:
      out.append("tot. ram.  %s" % ", ".join(map(str, fam["totally_ramified"])))
    out.append("%-7s %7s %8s %9s %6s  %s" % ("set", "count", "density", "interval", "exact",
                                              "examples"))
    for name, s in fam["sets"].items():
      iv = "-" if s["interval"] is None else "[%d,%d]" % tuple(s["interval"])
      ex = "-" if s["exact"] is None else str(s["exact"])
      out.append("%-7s %7d %8.4f %9s %6s  %s" % (name, s["count"], s["density"], iv, ex,
                                                  " ".join(map(str, s["examples"]))))
    if fam["rank_counts"]:
      out.append("ranks      " + "  ".join("r=%s: %d" % kv for kv in fam["rank_counts"].items()))
  if rep["command"] == "certify":
    out.append("points     %d found to height %d" % (len(rep["points"]), rep["height"]))
    for p in rep["points"][:20]:
      out.append("  (%s, %s)  class %s" % (p["x"], p["y"], "".join(map(str, p["class"]))))
    out.append("certified  rank %d   (C_* rank %d, C~ rank %d)" % (
      rep["certified_rank"], rep["c_star_rank"], rep["c_tilde_rank"]))
  for n in rep.get("notes", []) or []:
    out.append("note       " + n)
  out.append("status     " + rep["status"])
  return "\n".join(out)


# --------------------------------------------------------------------------
# selftest


def selftest_checks(cache=None, perturb=False):
  """List of (name, ok, detail) over the worked fixtures."""
  from .curve_local import dagger_check, local_delta_valuation_parity, tate_algorithm
  from .star_class import (_field_for, c_star_subgroup, square_class_coordinates,
                           square_class_space, C_STAR_FILTERS)
  from .twist_family import predicted_selmer
  res = []

  def check(name, got, want):
    res.append((name, got == want, "got %r, expected %r" % (got, want)))

  E1 = CurveModel((169, -54, -1, 1))
  r1, _ = analyze(E1, None, cache)
  check("106276: disc(F)", E1.disc_F, 26569 + (1 if perturb else 0))
  check("106276: field_disc", r1["field"]["field_disc"], 26569)
  check("106276: Cl", r1["groups"]["cl"], [2, 2])
  check("106276: Cl_+", r1["groups"]["cl_plus"], [2, 2])
  check("106276: interval", [r1["selmer"]["lower"], r1["selmer"]["upper"]], [2, 3])
  check("106276: exact rank (eps=-1)", r1["selmer"]["exact"], 3)
  check("106276: twist -3", predicted_selmer(E1, -3, -1)[2], 2)
  E9 = CurveModel((3, -7, 0, 1))
  r9, _ = analyze(E9, None, cache)
  check("9032: field_disc", r9["field"]["field_disc"], 1129)
  check("9032: Cl", r9["groups"]["cl"], [])
  check("9032: Cl_+", r9["groups"]["cl_plus"], [2])
  check("9032: Cl_*", r9["groups"]["cl_star"], [2])
  Em, _ = analyze(CurveModel((-3, -7, 0, 1)), None, cache)
  check("9032 twist -1: Cl_*", Em["groups"]["cl_star"], [])
  check("9032: twist ranks 5,113,-43,-7",
        [predicted_selmer(E9, d, 1)[2] for d in (5, 113, -43, -7)], [1, 2, 0, 1])
  K = _field_for(E9.F)
  alpha = K.element([-8, 0, 1])
  check("theta^2-8 signature", tuple(K.signature_of(alpha)), (1, -1, -1))
  sp = square_class_space(K, 0)
  co = square_class_coordinates(K, alpha, 0)
  M = sp.matrix(C_STAR_FILTERS)
  in_star = co is not None and any(co) and all(
    sum(c * M[i][j] for i, c in enumerate(co)) % 2 == 0 for j in range(len(M[0])))
  check("theta^2-8 generates C_*", (in_star, len(c_star_subgroup(K=K, place=0))), (True, 1))
  sp2 = square_class_space(K, 2)
  check("theta^2-8 fails sign filter for E_-1",
        sum(c * sp2.filters["sign_dist"][i][0] for i, c in enumerate(co)) % 2, 1)
  Ea = CurveModel((0, -60, 11, 1))
  check("x(x+15)(x-4) at 5", tate_algorithm(Ea, 5).kodaira, "I2")
  check("x(x+9)(x-2) at 3", tate_algorithm(CurveModel((0, -18, 7, 1)), 3).kodaira, "I4")
  check("x(x^2-2550) at 5", tate_algorithm(CurveModel((0, -2550, 0, 1)), 5).kodaira, "I0*")
  check("x(x^2-30) at 5", tate_algorithm(CurveModel((0, -30, 0, 1)), 5).kodaira, "III")
  check("dagger fails, x(x+15)(x-4) at 5", dagger_check(Ea, 5).case, "FAIL")
  par = sorted(o["parity"] for o in local_delta_valuation_parity(Ea, 5, (5, 10))[0])
  check("delta parities, x(x+15)(x-4)", par, ["even", "odd", "odd"])
  return res


# --------------------------------------------------------------------------
# click commands


def _open_cache(path, disabled):
  if disabled:
    return None
  return GroupCache(path or os.environ.get(CACHE_ENV) or DEFAULT_CACHE)


def _curve_arg(ctx, param, value):
  try:
    return parse_cubic(value)
  except ModelError as exc:
    raise click.BadParameter(str(exc))


def _limit_arg(ctx, param, value):
  if value < 100:
    raise click.BadParameter("limit must be at least 100")
  return value


def _emit(rep, as_json):
  click.echo(render_json(rep) if as_json else render_text(rep))


def _run(fn):
  try:
    return fn()
  except click.exceptions.Exit:
    raise
  except click.ClickException:
    raise
  except Exception as exc:  # report and exit 1
    click.echo("internal error: %s: %s" % (type(exc).__name__, exc), err=True)
    sys.exit(1)


@click.group()
def main():
  """2-Selmer rank bounds for y^2 = F(x) via class groups of the cubic algebra."""


@main.command("analyze", context_settings={"ignore_unknown_options": True})
@click.argument("cubic", callback=_curve_arg)
@click.option("--root-number", "root", type=click.Choice(["1", "-1", "+1"]), default=None)
@click.option("--json", "as_json", is_flag=True)
@click.option("--cache", "cache_path", type=click.Path(dir_okay=False), default=None)
@click.option("--no-cache", is_flag=True)
@click.option("--label", default="", help="Echoed in the report; never resolved.")
def cmd_analyze(cubic, root, as_json, cache_path, no_cache, label):
  """Hypotheses, class groups and the Selmer interval for a curve."""
  def go():
    E = CurveModel(cubic.F, label)
    cache = _open_cache(cache_path, no_cache)
    rep, code = analyze(E, None if root is None else int(root), cache)
    if cache is not None:
      cache.save()
      for ev in cache.events:
        click.echo("cache: " + ev, err=True)
    _emit(rep, as_json)
    return code
  sys.exit(_run(go))


@main.command("twists", context_settings={"ignore_unknown_options": True})
@click.argument("cubic", callback=_curve_arg)
@click.option("--limit", type=int, required=True, callback=_limit_arg)
@click.option("--root-number", "root", type=click.Choice(["1", "-1", "+1"]), default=None)
@click.option("--json", "as_json", is_flag=True)
def cmd_twists(cubic, limit, root, as_json):
  """Classify prime twists up to LIMIT and tabulate predicted Selmer ranks."""
  def go():
    rep, code = twists(cubic, limit, None if root is None else int(root))
    _emit(rep, as_json)
    return code
  sys.exit(_run(go))


@main.command("certify", context_settings={"ignore_unknown_options": True})
@click.argument("cubic", callback=_curve_arg)
@click.option("--height", type=click.IntRange(1), required=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_certify(cubic, height, as_json):
  """Search points, map them to square classes and check C~ membership."""
  def go():
    rep, code = certify(cubic, height)
    _emit(rep, as_json)
    return code
  sys.exit(_run(go))


@main.command("selftest")
@click.option("--cache", "cache_path", type=click.Path(dir_okay=False), default=None)
@click.option("--no-cache", is_flag=True)
@click.option("--perturb", is_flag=True, hidden=True)
def cmd_selftest(cache_path, no_cache, perturb):
  """Run the worked fixtures; exit 1 on any mismatch."""
  def go():
    cache = _open_cache(cache_path, no_cache)
    res = selftest_checks(cache, perturb)
    if cache is not None:
      cache.save()
      for ev in cache.events:
        click.echo("cache: " + ev)
    bad = 0
    for name, ok, detail in res:
      click.echo("%s  %s%s" % ("PASS" if ok else "FAIL", name, "" if ok else "  (" + detail + ")"))
      bad += not ok
    click.echo("selftest %s (%d/%d)" % ("PASS" if not bad else "FAIL", len(res) - bad, len(res)))
    return 1 if bad else 0
  sys.exit(_run(go))


if __name__ == "__main__":
  main()
