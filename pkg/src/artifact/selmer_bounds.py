"""2-Selmer rank interval from Cl_*, parity via the root number, and point witnesses.

For a curve y^2 = F(x) over Q with F irreducible and the local conditions
satisfied at every bad prime,

  dim Cl_*[2] <= dim Sel_2(E) <= dim Cl_*[2] + 1,

and the root number fixes the parity of dim Sel_2(E), which selects one
endpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .curve_local import CurveModel, hypotheses_check, local_data
from .cubic_field import FieldElement
from .linalg import rank_mod_p
from .star_class import (C_TILDE_FILTERS, SquareClass, _field_for, square_class_coordinates,
                         square_class_space, star_class_group, subgroup_ranks)


class HypothesesError(ValueError):
  """The curve fails the standing hypotheses; the message names the failed condition."""


class RootNumberError(ValueError):
  pass


class InconsistentParityError(ArithmeticError):
  """Neither endpoint of the interval has the parity fixed by the root number."""


@dataclass(frozen=True)
class RootNumber:
  value: int
  provenance: str  # "computed" or "user-supplied"

  def __int__(self):
    return self.value


@dataclass
class SelmerReport:
  lower: int
  upper: int
  exact: int | None = None
  root_number: RootNumber | None = None
  certified_points_rank: int = 0
  c_star_rank: int = 0
  c_tilde_rank: int = 0
  star_invariants: list = field(default_factory=list)
  flags: dict = field(default_factory=dict)

  def as_dict(self):
    return {
      "lower": self.lower,
      "upper": self.upper,
      "exact": self.exact,
      "root_number": None if self.root_number is None else {
        "value": self.root_number.value, "provenance": self.root_number.provenance},
      "certified_points_rank": self.certified_points_rank,
      "c_star_rank": self.c_star_rank,
      "c_tilde_rank": self.c_tilde_rank,
      "cl_star": list(self.star_invariants),
      "flags": dict(self.flags),
    }


def _model(E):
  if isinstance(E, CurveModel):
    return E
  return CurveModel(tuple(E))


def _field_and_place(E, K=None, place=None):
  if K is None:
    return _field_for(E.F), 0
  return K, (0 if place is None else place)


def selmer_rank_bounds(E, K=None, place=None) -> SelmerReport:
  """Interval [two_rank(Cl_*), two_rank(Cl_*) + 1] for dim Sel_2(E).

  ``K`` and ``place`` let a twist reuse its base curve's field with the
  distinguished place moved accordingly.
  """
  E = _model(E)
  hyp = hypotheses_check(E)
  if not hyp.passed:
    raise HypothesesError("hypotheses fail: " + hyp.reason())
  K, place = _field_and_place(E, K, place)
  S = star_class_group(K=K, place=place)
  lo = S.two_rank()
  cs, ct, _ = subgroup_ranks(K, place)
  from .class_units import class_group_data, unit_group
  data = class_group_data(K)
  flags = {
    "class_group_certified": bool(data.cl.certified),
    "narrow_class_group_certified": bool(data.clp.certified),
    "units_certified": bool(unit_group(K).certified),
  }
  return SelmerReport(lo, lo + 1, c_star_rank=cs, c_tilde_rank=ct,
                      star_invariants=list(S.invariants), flags=flags)


def root_number(E, override=None) -> RootNumber:
  """Global root number: echo an override, else compute it for semistable curves."""
  if override is not None:
    if override not in (1, -1):
      raise RootNumberError("root number must be +1 or -1")
    return RootNumber(int(override), "user-supplied")
  E = _model(E)
  eps = -1  # the real place
  for p, red in local_data(E).items():
    if red.reduction == "additive":
      raise RootNumberError("root number requires override (additive reduction at p=%d)" % p)
    if red.reduction == "split":
      eps = -eps
  return RootNumber(eps, "computed")


def selmer_rank_exact(E, eps, K=None, place=None, report=None) -> SelmerReport:
  """Pin dim Sel_2(E) to the endpoint with parity (-1)^rank = eps."""
  if report is None:
    report = selmer_rank_bounds(E, K, place)
  if not isinstance(eps, RootNumber):
    eps = root_number(E, override=eps)
  want = 0 if eps.value == 1 else 1
  cands = [r for r in (report.lower, report.upper) if r % 2 == want]
  if len(cands) != 1:
    raise InconsistentParityError("no endpoint of [%d, %d] has parity %d"
                                  % (report.lower, report.upper, want))
  report.exact = cands[0]
  report.root_number = eps
  return report


# --------------------------------------------------------------------------
# Kummer map and points


def kummer_class(E, P, K=None) -> SquareClass:
  """Square class of x(P) - theta; the point at infinity maps to the identity."""
  E = _model(E)
  if K is None:
    K = _field_for(E.F)
  if P is None:
    return SquareClass.of(K, K.element(1))
  x = Fraction(P[0])
  a, b2 = x.numerator, x.denominator
  # b2 is a square for points on an integral model; scaling by b2^2 keeps the class
  return SquareClass.of(K, FieldElement(K, [a * b2, -b2 * b2, 0]))


def add_points(E, P, Q):
  """Chord-tangent addition on y^2 = F(x) over Q; None is the point at infinity."""
  E = _model(E)
  if P is None:
    return Q
  if Q is None:
    return P
  c, b, a, _ = E.F
  x1, y1 = Fraction(P[0]), Fraction(P[1])
  x2, y2 = Fraction(Q[0]), Fraction(Q[1])
  if x1 == x2:
    if y1 + y2 == 0:
      return None
    lam = (3 * x1 * x1 + 2 * a * x1 + b) / (2 * y1)
  else:
    lam = (y2 - y1) / (x2 - x1)
  x3 = lam * lam - a - x1 - x2
  y3 = -(y1 + lam * (x3 - x1))
  return (x3, y3)


def point_search(E, height_bound):
  """Affine points with x = a/b^2, |a| <= bound, 1 <= b <= bound, one per x (y >= 0)."""
  E = _model(E)
  c0, c1, c2, _ = E.F
  H = int(height_bound)
  out = []
  for b in range(1, H + 1):
    b2 = b * b
    b4 = b2 * b2
    b6 = b4 * b2
    for a in range(-H, H + 1):
      if b > 1 and math.gcd(a, b) != 1:
        continue
      v = a * a * a + c2 * a * a * b2 + c1 * a * b4 + c0 * b6
      if v < 0:
        continue
      r = math.isqrt(v)
      if r * r == v:
        out.append((Fraction(a, b2), Fraction(r, b * b2)))
  return out


def point_class_coordinates(E, P, K=None, place=0):
  """Coordinates of kummer_class(P) over the standard square-class generators."""
  E = _model(E)
  if K is None:
    K = _field_for(E.F)
  if P is None:
    return [0] * len(square_class_space(K, place).generators)
  alpha = kummer_class(E, P, K).representative
  co = square_class_coordinates(K, alpha, place)
  if co is None:
    raise ArithmeticError("Kummer class of %r has an odd valuation" % (P,))
  return co


def in_c_tilde(K, coords, place=0):
  sp = square_class_space(K, place)
  M = sp.matrix(C_TILDE_FILTERS)
  return all(sum(c * M[i][j] for i, c in enumerate(coords)) % 2 == 0 for j in range(len(M[0])))


def certified_rank(E, points, K=None, place=0):
  """F_2-rank of the span of the Kummer classes of ``points`` (each checked to lie in C~)."""
  E = _model(E)
  if K is None:
    K = _field_for(E.F)
  rows = []
  for P in points:
    co = point_class_coordinates(E, P, K, place)
    if not in_c_tilde(K, co, place):
      raise AssertionError("Kummer class of %r lies outside C~" % (P,))
    rows.append(co)
  rows = [r for r in rows if any(r)]
  return rank_mod_p(rows, 2) if rows else 0
