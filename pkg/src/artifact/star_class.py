"""The modified class group Cl_* and the square-class groups C_* and C~.

Real places of the field are indexed by ascending root of the field's
defining cubic.  The distinguished place of a curve y^2 = G(x) is the place
of the smallest real root of G.  When G is the field's own cubic that is
index 0; a caller reusing the field of F for the twist d^3 F(x/d) with d < 0
passes index 2 instead.

Square classes are handled through F_2-linear "filters" on a fixed
generating set of {alpha : all valuations even} / squares:

  -1, the fundamental units, and one virtual unit gamma with (gamma) = I^2
  for each basis class [I] of Cl[2].

C~ is cut out by the sign at the distinguished place and the sign of the
norm; C_* additionally by total positivity of the norm and the mod-4
square condition, and (for three real places) nothing else.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from . import exact_arith as ea
from .class_units import (AbelianGroupPresentation, ClassGroupError, class_group_data,
                          find_generator, two_rank, unit_group)
from .cubic_field import CubicField, FieldElement, build_field, ideal_mul, principal_ideal
from .linalg import left_kernel_mod_p, rank_mod_p


# --------------------------------------------------------------------------
# distinguished place


@dataclass(frozen=True)
class DistinguishedData:
  curve_cubic: tuple
  place_index: int
  type: str  # "i" (one real place) or "ii" (three real places)


def _cubic_of(E):
  F = getattr(E, "F", E)
  return tuple(F)


def distinguished_place(E) -> DistinguishedData:
  """Distinguished real place of the model's own cubic (index 0 or the unique real place)."""
  F = _cubic_of(E)
  disc = ea.poly_disc(list(F))
  return DistinguishedData(F, 0, "ii" if disc > 0 else "i")


def place_for_twist(d: int, disc: int) -> int:
  """Index (in the ordering of F's roots) of the distinguished place of d^3 F(x/d)."""
  if disc < 0:
    return 0
  return 0 if d > 0 else 2


# --------------------------------------------------------------------------
# mod 4


def _omega_mod(K, alpha, m):
  x = K.to_omega(alpha)
  if any(t.denominator != 1 for t in x):
    raise ValueError("element is not integral")
  return tuple(int(t) % m for t in x)


def _mul_mod(K, x, y, m):
  return tuple(t % m for t in K.omul(x, y))


def is_square_mod_4(K: CubicField, alpha) -> bool:
  """True iff alpha = beta^2 (mod 4 O) for some beta in O."""
  a = _omega_mod(K, K.element(alpha), 4)
  for b in itertools.product(range(2), repeat=3):
    if _mul_mod(K, b, b, 4) == a:
      return True
  return False


class _Mod4Squares:
  """Coordinates on (O/4O)^x / squares, an elementary abelian 2-group."""

  def __init__(self, K):
    self.K = K
    units = []
    for x in itertools.product(range(4), repeat=3):
      if int(K.from_omega(list(x)).norm()) % 2:
        units.append(x)
    self.squares = sorted({_mul_mod(K, b, b, 4) for b in itertools.product(range(2), repeat=3)
                           if int(K.from_omega(list(b)).norm()) % 2})
    self.canon = {}
    for u in units:
      self.canon[u] = min(_mul_mod(K, u, s, 4) for s in self.squares)
    cosets = sorted(set(self.canon.values()))
    # greedy F_2 basis of the quotient
    one = self.canon[(1, 0, 0)]
    span = {one: ()}
    basis = []
    for c in cosets:
      if c in span:
        continue
      basis.append(c)
      new = {}
      for s, v in span.items():
        new[self.canon[_mul_mod(K, s, c, 4)]] = v + (len(basis) - 1,)
      span.update(new)
    self.basis = basis
    self.coords = {}
    for s, idx in span.items():
      self.coords[s] = tuple(int(k in idx) for k in range(len(basis)))
    if len(self.coords) != len(cosets):
      raise ArithmeticError("mod 4 square classes do not form an F_2 space")

  @property
  def dim(self):
    return len(self.basis)

  def vector(self, alpha):
    a = _omega_mod(self.K, alpha, 4)
    if a not in self.canon:
      raise ValueError("element is not a unit mod 2")
    return self.coords[self.canon[a]]


def _mod4(K):
  c = K.__dict__.get("_mod4sq")
  if c is None:
    c = _Mod4Squares(K)
    K.__dict__["_mod4sq"] = c
  return c


# --------------------------------------------------------------------------
# square classes


@dataclass
class SquareClass:
  """Class of a nonzero element in A^x / (A^x)^2."""
  representative: FieldElement
  valuation_parity: dict = field(default_factory=dict)
  signature: tuple = ()
  norm_is_square: bool = False

  @classmethod
  def of(cls, K, alpha):
    alpha = K.element(alpha)
    if alpha.is_zero():
      raise ValueError("zero has no square class")
    N = alpha.norm()
    par = {}
    for n in (N.numerator, N.denominator):
      for p in ea.factor_integer(abs(n)):
        for P in K.factor_prime(p):
          v = P.valuation(alpha)
          if v % 2:
            par[(p, P.ideal.H)] = 1
    sq = N > 0 and ea.is_square(N.numerator) and ea.is_square(N.denominator)
    return cls(alpha, par, tuple(K.signature_of(alpha)), sq)

  def __mul__(self, other):
    K = self.representative.K
    return SquareClass.of(K, self.representative * other.representative)

  @property
  def even_valuations(self):
    return not self.valuation_parity


@dataclass
class SquareClassSpace:
  """F_2 space spanned by the standard generators, with filter values."""
  K: CubicField
  place: int
  generators: list  # FieldElements: -1, units, virtual units
  kinds: list  # "torsion" / "unit" / "virtual"
  filters: dict  # name -> list of F_2 columns (one row per generator)

  def matrix(self, names):
    rows = []
    for i in range(len(self.generators)):
      row = []
      for n in names:
        row += list(self.filters[n][i])
      rows.append(row)
    return rows

  def kernel(self, names):
    M = self.matrix(names)
    n = len(self.generators)
    if not M or not M[0]:
      return [[int(i == j) for j in range(n)] for i in range(n)]
    return left_kernel_mod_p(M, 2)

  def element(self, vec):
    K = self.K
    a = K.element(1)
    for g, e in zip(self.generators, vec):
      if e % 2:
        a = a * g
    return a


def _prime_class(data, P):
  """Vector over small + sign columns for a prime ideal."""
  key = P.key()
  if key in data.index:
    i = data.index[key]
    if i in data.spos:
      v = [0] * (data.nsmall + data.r1)
      v[data.spos[i]] = 1
      return v
    return list(data.subst[i])
  return data.class_vector(P.ideal)


def cl2_representatives(K: CubicField):
  """Smallest-norm odd prime ideal in each Cl[2] basis class (SNF order)."""
  data = class_group_data(K)
  cl = data.cl
  targets = []
  for k, d in enumerate(cl.invariants):
    if d % 2 == 0:
      t = [0] * len(cl.invariants)
      t[k] = d // 2
      targets.append(tuple(t))
  out = {}
  p = 2
  while len(out) < len(targets):
    p = next(q for q in range(p + 1, 10 ** 7) if ea.is_probable_prime(q))
    for P in sorted(K.factor_prime(p), key=lambda P: (P.norm, P.ideal.H)):
      dl = cl.dlog(_prime_class(data, P)[:data.nsmall])
      for t in targets:
        if t not in out and dl == t:
          out[t] = P
  return [out[t] for t in targets]


def virtual_units(K: CubicField):
  """Generators gamma of I^2 for the Cl[2] basis representatives I."""
  ug = unit_group(K)
  out = []
  for P in cl2_representatives(K):
    g = find_generator(K, ideal_mul(P.ideal, P.ideal), ug=ug)
    if g is None:
      raise ClassGroupError("square of a 2-torsion class is not principal")
    out.append(g)
  return out


def square_class_space(K: CubicField, place: int = 0) -> SquareClassSpace:
  cache = K.__dict__.setdefault("_sqspace", {})
  if place in cache:
    return cache[place]
  ug = unit_group(K)
  gens = [K.element(-1)] + list(ug.fundamental_units) + virtual_units(K)
  kinds = ["torsion"] + ["unit"] * ug.rank + ["virtual"] * (len(gens) - 1 - ug.rank)
  m4 = _mod4(K)
  f = {"sign_dist": [], "norm": [], "signs_other": [], "mod4": []}
  others = [i for i in range(K.r1) if i != place]
  for g in gens:
    s = K.signature_of(g)
    f["sign_dist"].append((int(s[place] < 0),))
    f["norm"].append((int(g.norm() < 0),))
    f["signs_other"].append(tuple(int(s[i] < 0) for i in others))
    f["mod4"].append(m4.vector(g))
  sp = SquareClassSpace(K, place, gens, kinds, f)
  cache[place] = sp
  return sp


# filters defining the two subgroups
C_STAR_FILTERS = ("sign_dist", "norm", "mod4")
C_TILDE_FILTERS = ("sign_dist", "norm")


def c_star_subgroup(E=None, K=None, place=None):
  """F_2 basis (as field elements) of C_*(E)."""
  K, place = _resolve(E, K, place)
  sp = square_class_space(K, place)
  return [SquareClass.of(K, sp.element(v)) for v in sp.kernel(C_STAR_FILTERS)]


def c_tilde_subgroup(E=None, K=None, place=None):
  """F_2 basis (as field elements) of C~(E)."""
  K, place = _resolve(E, K, place)
  sp = square_class_space(K, place)
  return [SquareClass.of(K, sp.element(v)) for v in sp.kernel(C_TILDE_FILTERS)]


def subgroup_ranks(K, place):
  """(dim C_*, dim C~, C_* contained in C~) computed from the filter kernels."""
  sp = square_class_space(K, place)
  ks = sp.kernel(C_STAR_FILTERS)
  kt = sp.kernel(C_TILDE_FILTERS)
  contained = rank_mod_p(kt + ks, 2) == rank_mod_p(kt, 2) if kt else not ks
  return len(ks), len(kt), contained


def square_class_coordinates(K, alpha, place=0):
  """Coordinates of alpha's square class over the standard generators, or None.

  Only defined for elements with even valuations everywhere; decided with
  quadratic characters at degree-one primes and an exact square test.
  """
  sp = square_class_space(K, place)
  gens = sp.generators
  n = len(gens)
  for coeffs in itertools.product(range(2), repeat=n):
    b = sp.element(coeffs)
    if is_square(K, alpha * b):
      return list(coeffs)
  return None


def is_square(K, alpha):
  """Exact test whether alpha is a square in A."""
  from .class_units import nth_root
  alpha = K.element(alpha)
  if alpha.is_zero():
    return True
  den = 1
  for t in K.to_omega(alpha):
    den = den * t.denominator // math.gcd(den, t.denominator)
  return nth_root(K, alpha * (den * den), 2) is not None


# --------------------------------------------------------------------------
# Cl_*


@dataclass
class StarClassGroup:
  presentation: AbelianGroupPresentation
  sign_kernel_generators: list  # realizer elements with signature (+,-,-)
  place_index: int
  type: str

  @property
  def invariants(self):
    return self.presentation.invariants

  @property
  def order(self):
    return self.presentation.order

  def two_rank(self):
    return two_rank(self.presentation)


def _resolve(E, K, place):
  if K is None:
    F = _cubic_of(E)
    K = _field_for(F)
    place = 0
  if place is None:
    place = 0
  return K, place


_FIELDS = {}


def _field_for(F):
  F = tuple(F)
  K = _FIELDS.get(F)
  if K is None:
    K = build_field(list(F))
    _FIELDS[F] = K
  return K


def signed_element(K, signs, limit=6):
  """Small integral element with the given sign vector (+1/-1 per real place)."""
  for B in range(1, limit + 1):
    for x in itertools.product(range(-B, B + 1), repeat=3):
      if max(abs(t) for t in x) != B:
        continue
      a = K.from_omega(list(x))
      if a.is_zero():
        continue
      if tuple(K.signature_of(a)) == tuple(signs):
        return a
  # fall back on shifting the theta-adic element between roots
  raise ClassGroupError("no element with signature %r found" % (signs,))


def star_class_group(E=None, K=None, place=None) -> StarClassGroup:
  """Cl_* as a quotient of Cl_+ (three real places) or Cl (one real place)."""
  K, place = _resolve(E, K, place)
  cache = K.__dict__.setdefault("_star", {})
  if place in cache:
    return cache[place]
  data = class_group_data(K)
  if K.r1 == 1:
    # P_* = P: -1 realises the only sign change
    res = StarClassGroup(data.cl, [K.element(-1)], 0, "i")
    cache[place] = res
    return res
  signs = [1, 1, 1]
  for i in range(3):
    if i != place:
      signs[i] = -1
  alpha = signed_element(K, signs)
  # relation: the ideal part of (alpha) becomes trivial (no sign part)
  y = [int(t) for t in K.to_omega(alpha)]
  fac = data.factor_element(y)
  if fac is None:
    # Cl_+ class of the ideal (alpha) itself, signs included
    extra = data.class_vector(principal_ideal(K, alpha))
  else:
    extra = data._vec_from_factors(fac, [0] * data.r1)
  rows = [list(r) for r in data.plus_rows] + [extra]
  D = max(data.cl.order, 1)
  pres = AbelianGroupPresentation.from_relations(data.plus_labels, rows, 2 * D)
  pres.certified = data.clp.certified
  res = StarClassGroup(pres, [alpha], place, "ii")
  cache[place] = res
  return res
