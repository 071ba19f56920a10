"""Quadratic twists by prime discriminants and the induced families of Selmer bounds.

For an odd prime p put p* = (-1/p) p.  When p is inert in A and does not
divide the discriminant,

  eps(E) eps(E_{p*}) = chi_p(-N_E),

and Cl_* of the twist only depends on the sign of p* (which real place is
distinguished), so the Selmer interval is constant on each of the sets

  C+sq, C+nsq  (p = 1 mod 4, Delta/N a square / non-square mod p),
  C-sq, C-nsq  (p = 3 mod 4, likewise),

and on the two sets sq / nsq (by -Delta/N) when Delta < 0.
"""

from __future__ import annotations

from collections import Counter, OrderedDict
from dataclasses import dataclass, field

from . import exact_arith as ea
from .curve_local import CurveModel, conductor, hypotheses_check
from .selmer_bounds import InconsistentParityError
from .star_class import _field_for, place_for_twist, star_class_group


class TwistError(ValueError):
  pass


def _model(E):
  return E if isinstance(E, CurveModel) else CurveModel(tuple(E))


def twist_model(E, d) -> CurveModel:
  """y^2 = d^3 F(x/d), integral and monic."""
  E = _model(E)
  d = int(d)
  if d == 0 or not ea.is_squarefree(abs(d)) and abs(d) != 1:
    raise TwistError("twist parameter must be a nonzero squarefree integer")
  c, b, a, _ = E.F
  Ed = CurveModel((c * d ** 3, b * d ** 2, a * d, 1), "%s twist %d" % (E.label, d) if E.label else "")
  if Ed.disc_F != d ** 6 * E.disc_F:
    raise AssertionError("discriminant scaling identity failed")
  return Ed


def p_star(p: int) -> int:
  if p == 2 or not ea.is_probable_prime(abs(p)):
    raise TwistError("p* is defined for odd primes only")
  return p if p % 4 == 1 else -p


def splitting_type(K, p):
  """'inert', 'totally ramified', or a description of the factorisation of p."""
  Ps = K.factor_prime(p)
  if len(Ps) == 1 and Ps[0].f == 3:
    return "inert"
  if len(Ps) == 1 and Ps[0].e == 3:
    return "totally ramified"
  return " ".join("(e=%d,f=%d)" % (P.e, P.f) for P in Ps)


@dataclass
class TwistSpec:
  d: int
  admissible: bool
  model: CurveModel
  reasons: dict  # p -> splitting type
  hypotheses_pass: bool | None = None


def twist_admissible(E, d) -> TwistSpec:
  """All primes dividing d inert or totally ramified; the twist's hypotheses are re-checked."""
  E = _model(E)
  Ed = twist_model(E, d)
  K = _field_for(E.F)
  reasons = {}
  ok = True
  for p in sorted(ea.factor_integer(abs(d))) if abs(d) > 1 else []:
    s = splitting_type(K, p)
    reasons[p] = s
    if s not in ("inert", "totally ramified"):
      ok = False
  hyp = None
  if ok:
    hyp = hypotheses_check(Ed).passed
  return TwistSpec(int(d), ok, Ed, reasons, hyp)


def _check_p(E, p):
  if p == 2 or not ea.is_probable_prime(p):
    raise TwistError("p must be an odd prime")
  if E.disc_E % p == 0:
    raise TwistError("p divides the discriminant")


def relative_root_number(E, p, N=None) -> int:
  """eps(E) eps(E_{p*}) = chi_p(-N_E) for p not dividing 2 Delta(E)."""
  E = _model(E)
  _check_p(E, p)
  if N is None:
    N = conductor(E)
  return ea.kronecker_symbol(-N, p)


@dataclass
class PrimeClassification:
  p: int
  splitting: str
  p_star: int
  set: str  # C+sq / C+nsq / C-sq / C-nsq (Delta > 0), sq / nsq (Delta < 0), not-inert
  relative_root_number: int

  @property
  def preserves_root_number(self):
    return self.relative_root_number == 1


PRESERVING_SETS = {"C+sq", "C-nsq", "sq"}


def classify_prime(E, p, N=None) -> PrimeClassification:
  E = _model(E)
  _check_p(E, p)
  if N is None:
    N = conductor(E)
  D = E.disc_E
  r = ea.count_roots_mod_p(list(E.F), p)
  split = {0: "inert", 1: "(e=1,f=1) (e=1,f=2)", 3: "(e=1,f=1)^3"}[r]
  rel = ea.kronecker_symbol(-N, p)
  if r:
    s = "not-inert"
  elif D > 0:
    q = _chi_ratio(D, N, p)
    s = ("C+" if p % 4 == 1 else "C-") + ("sq" if q == 1 else "nsq")
  else:
    s = "sq" if _chi_ratio(-D, N, p) == 1 else "nsq"
  return PrimeClassification(p, split, p_star(p), s, rel)


def _chi_ratio(a, b, p):
  return ea.kronecker_symbol(a, p) * ea.kronecker_symbol(b, p)


# --------------------------------------------------------------------------
# family report


def twist_star_group(E, d):
  """Cl_* of E_d computed on E's field with the distinguished place moved for d < 0."""
  E = _model(E)
  K = _field_for(E.F)
  return star_class_group(K=K, place=place_for_twist(d, E.disc_F))


def predicted_selmer(E, d, eps_E=None, N=None):
  """(lower, upper, exact or None) for the twist E_d by a prime discriminant or -1."""
  E = _model(E)
  S = twist_star_group(E, d)
  lo = S.two_rank()
  exact = None
  if eps_E is not None:
    p = abs(d)
    rel = None
    if p == 1:
      rel = None
    elif E.disc_E % p:
      rel = relative_root_number(E, p, N)
    if rel is not None:
      eps = eps_E * rel
      want = 0 if eps == 1 else 1
      c = [r for r in (lo, lo + 1) if r % 2 == want]
      if len(c) != 1:
        raise InconsistentParityError("parity mismatch for twist %d" % d)
      exact = c[0]
  return lo, lo + 1, exact


@dataclass
class TwistFamilyReport:
  X: int
  disc_sign: int
  galois: bool
  primes_considered: int
  inert_count: int
  inert_density: float
  totally_ramified: list
  inert_dividing_disc: list
  set_counts: dict
  set_densities: dict
  set_intervals: dict  # set -> [lower, upper]
  set_exact: dict  # set -> exact rank or None
  set_examples: dict  # set -> first few p*
  rank_counts: dict  # r -> number of inert prime twists |p*| <= X predicted exact rank r
  twist_hypotheses: dict  # p* -> hypotheses of E_{p*} pass
  root_number: int | None
  notes: list = field(default_factory=list)

  def as_dict(self):
    return {
      "X": self.X,
      "disc_sign": self.disc_sign,
      "galois": self.galois,
      "primes_considered": self.primes_considered,
      "inert_count": self.inert_count,
      "inert_density": round(self.inert_density, 6),
      "totally_ramified": list(self.totally_ramified),
      "inert_dividing_disc": list(self.inert_dividing_disc),
      "sets": OrderedDict((s, {
        "count": self.set_counts[s],
        "density": round(self.set_densities[s], 6),
        "interval": self.set_intervals.get(s),
        "exact": self.set_exact.get(s),
        "examples": self.set_examples.get(s, []),
      }) for s in self.set_counts),
      "rank_counts": {str(k): v for k, v in sorted(self.rank_counts.items())},
      "twist_hypotheses": {str(k): v for k, v in self.twist_hypotheses.items()},
      "root_number": self.root_number,
      "notes": list(self.notes),
    }


def twist_family_report(E, X, eps_E=None, verify_per_set=3) -> TwistFamilyReport:
  """Tabulate the inert primes p <= X, their four (or two) sets and the predicted ranks."""
  E = _model(E)
  X = int(X)
  if X < 100:
    raise TwistError("X must be at least 100")
  hyp = hypotheses_check(E)
  if not hyp.passed:
    raise TwistError("hypotheses fail: " + hyp.reason())
  N = conductor(E)
  D = E.disc_E
  K = _field_for(E.F)
  galois = ea.is_square(E.disc_F)
  names = ["C+sq", "C+nsq", "C-sq", "C-nsq"] if D > 0 else ["sq", "nsq"]
  counts = Counter({s: 0 for s in names})
  examples = {s: [] for s in names}
  total = inert = 0
  for p in ea.primes_up_to(X):
    if p == 2 or D % p == 0:
      continue
    total += 1
    c = classify_prime(E, p, N)
    if c.set == "not-inert":
      continue
    inert += 1
    counts[c.set] += 1
    if len(examples[c.set]) < 5:
      examples[c.set].append(c.p_star)
  # primes of the discriminant: tabulated separately
  tot_ram, inert_bad = [], []
  for p in sorted(ea.factor_integer(abs(E.disc_F))):
    if p > X:
      continue
    s = splitting_type(K, p)
    if s == "totally ramified":
      tot_ram.append(p)
    elif s == "inert":
      inert_bad.append(p)
  intervals, exact = {}, {}
  hyp_checks = {}
  for s in names:
    if not examples[s]:
      continue
    d = examples[s][0]
    lo, up, ex = predicted_selmer(E, d, eps_E, N)
    intervals[s] = [lo, up]
    exact[s] = ex
    for d in examples[s][:verify_per_set]:
      hyp_checks[d] = twist_admissible(E, d).hypotheses_pass
  ranks = Counter()
  if eps_E is not None:
    for s in names:
      if exact.get(s) is not None:
        ranks[exact[s]] += counts[s]
  notes = []
  if D < 0 or _plus_equals_cl(K):
    notes.append("Cl_+ = Cl or Delta < 0: all inert prime twists share the same Selmer interval")
  if eps_E is not None:
    try:
      lo, up, ex = predicted_selmer(E, 1, None)
      want = 0 if eps_E == 1 else 1
      base = [r for r in (lo, up) if r % 2 == want][0]
      if base == 0 and (D < 0 or _plus_equals_cl(K)):
        notes.append("trivial 2-Selmer group: E has finitely many points over the compositum "
                     "of Q(sqrt(p*)) for p inert or totally ramified")
    except IndexError:
      pass
  dens = {s: counts[s] / total if total else 0.0 for s in names}
  return TwistFamilyReport(X, 1 if D > 0 else -1, galois, total, inert,
                           inert / total if total else 0.0, tot_ram, inert_bad, dict(counts),
                           dens, intervals, exact, examples, dict(ranks), hyp_checks,
                           eps_E, notes)


def _plus_equals_cl(K):
  from .class_units import class_group_data
  data = class_group_data(K)
  return data.cl.order == data.clp.order
