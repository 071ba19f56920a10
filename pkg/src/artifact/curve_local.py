"""Integral models y^2 = F(x): Tate's algorithm, conductor and the local (dagger) conditions.

The four local conditions checked per prime p are

  i.   F is irreducible over Q_p,
  ii.  the maximal order is monogenic at p: v_p(disc F) = v_p(disc of the
       maximal order of Q[T]/(F)),
  iii. p is odd and the Tamagawa number c_p is odd,
  iv.  p = 2 and the curve has good reduction at 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import exact_arith as ea
from .cubic_field import CubicField, rational_roots


class ModelError(ValueError):
  """Input is not an integral monic cubic model y^2 = F(x)."""


# --------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class CurveModel:
  """y^2 = F(x) with F = x^3 + a x^2 + b x + c, stored constant-first."""
  F: tuple
  label: str = ""

  def __post_init__(self):
    try:
      F = ea.check_monic_cubic(list(self.F))
    except ValueError as exc:
      raise ModelError(str(exc)) from exc
    object.__setattr__(self, "F", tuple(int(t) for t in F))

  @classmethod
  def from_cubic(cls, F, label=""):
    return cls(tuple(F), label)

  @property
  def disc_F(self):
    return ea.poly_disc(list(self.F))

  @property
  def disc_E(self):
    return 16 * self.disc_F

  @property
  def a_invariants(self):
    c, b, a, _ = self.F
    return (0, a, 0, b, c)

  def is_irreducible(self):
    return not rational_roots(list(self.F))

  def contains(self, P):
    x, y = P
    return Fraction(y) ** 2 == ea.poly_eval(list(self.F), Fraction(x))

  def __str__(self):
    return "y^2 = " + ea.cubic_str(list(self.F))


class _W:
  """Long Weierstrass model with integer a-invariants."""

  def __init__(self, a):
    self.a1, self.a2, self.a3, self.a4, self.a6 = [int(t) for t in a]

  def b(self):
    a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8

  def c(self):
    b2, b4, b6, _ = self.b()
    return b2 * b2 - 24 * b4, -b2 ** 3 + 36 * b2 * b4 - 216 * b6

  def disc(self):
    b2, b4, b6, b8 = self.b()
    return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

  def rst(self, r, s, t):
    a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
    self.a1 = a1 + 2 * s
    self.a2 = a2 - s * a1 + 3 * r - s * s
    self.a3 = a3 + r * a1 + 2 * t
    self.a4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
    self.a6 = a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1

  def scale_down(self, p):
    self.a1 //= p
    self.a2 //= p ** 2
    self.a3 //= p ** 3
    self.a4 //= p ** 4
    self.a6 //= p ** 6

  def tuple(self):
    return (self.a1, self.a2, self.a3, self.a4, self.a6)


# --------------------------------------------------------------------------
# Tate's algorithm


@dataclass(frozen=True)
class LocalReduction:
  p: int
  kodaira: str
  f_p: int
  c_p: int
  reduction: str  # good / split / nonsplit / additive
  v_disc_min: int
  components: int
  minimal_model: tuple = ()


def _v(n, p):
  return ea.valuation(n, p) if n else 10 ** 9


def _quad_has_root(a, b, c, p):
  """Does a x^2 + b x + c (a a unit mod p) have a root in F_p?"""
  if p == 2:
    return (a * b * c) % 2 == 0
  return ea.kronecker_symbol((b * b - 4 * a * c) % p, p) != -1


def _roots_mod(coeffs, p):
  """Roots mod p of a polynomial given constant-first."""
  return ea.roots_mod_p(list(coeffs), p)


def _double_root(coeffs, p):
  """The root of multiplicity >= 2 of a polynomial mod p (constant-first)."""
  d = ea.poly_deriv(list(coeffs))
  common = [r for r in _roots_mod(coeffs, p) if ea.poly_eval(d, r) % p == 0]
  if not common:
    raise ArithmeticError("no repeated root mod %d" % p)
  return common[0]


def _components(kodaira, n=0):
  table = {"I0": 1, "II": 1, "III": 2, "IV": 3, "I0*": 5, "IV*": 7, "III*": 8, "II*": 9}
  if kodaira in table:
    return table[kodaira]
  if kodaira.endswith("*"):
    return n + 5
  return n


def tate_algorithm(E, p) -> LocalReduction:
  """Kodaira symbol, conductor exponent and Tamagawa number at p."""
  if not ea.is_probable_prime(p):
    raise ValueError("p must be prime")
  a = E.a_invariants if isinstance(E, CurveModel) else tuple(E)
  W = _W(a)
  while True:
    D = W.disc()
    vD = _v(D, p)
    if vD == 0:
      return LocalReduction(p, "I0", 0, 1, "good", 0, 1, W.tuple())
    b2, b4, b6, b8 = W.b()
    c4, c6 = W.c()
    # move the singular point to (0, 0)
    if p == 2:
      if b2 % 2 == 0:
        r = W.a4 % 2
        t = (r * (1 + W.a2 + W.a4) + W.a6) % 2
      else:
        r = W.a3 % 2
        t = (r + W.a4) % 2
    elif p == 3:
      r = (-b6) % 3 if b2 % 3 == 0 else (-b2 * b4) % 3
      t = (W.a1 * r + W.a3) % 3
    else:
      if c4 % p == 0:
        r = (-b2 * pow(12, -1, p)) % p
      else:
        r = (-(c6 + b2 * c4) * pow(12 * c4, -1, p)) % p
      t = (-(W.a1 * r + W.a3) * pow(2, -1, p)) % p
    W.rst(r, 0, t)
    b2, b4, b6, b8 = W.b()
    assert W.a3 % p == 0 and W.a4 % p == 0 and W.a6 % p == 0
    if c4 % p:
      split = _quad_has_root(1, W.a1, -W.a2, p)
      if split:
        cp = vD
      else:
        cp = 2 if vD % 2 == 0 else 1
      return LocalReduction(p, "I%d" % vD, 1, cp, "split" if split else "nonsplit", vD, vD,
                            W.tuple())
    if _v(W.a6, p) < 2:
      return _additive(p, "II", vD, vD, 1, W)
    if _v(b8, p) < 3:
      return _additive(p, "III", vD, vD - 1, 2, W)
    if _v(b6, p) < 3:
      cp = 3 if _quad_has_root(1, W.a3 // p, -W.a6 // p ** 2, p) else 1
      return _additive(p, "IV", vD, vD - 2, cp, W)
    # p | a1, a2; p^2 | a3, a4; p^3 | a6
    if p == 2:
      s = W.a2 % 2
      t = 2 * ((W.a6 // 4) % 2)
    else:
      s = (-W.a1 * pow(2, -1, p)) % p
      t = (-W.a3 * pow(2, -1, p * p)) % (p * p)
    W.rst(0, s, t)
    assert W.a1 % p == 0 and W.a2 % p == 0 and W.a3 % p ** 2 == 0
    assert W.a4 % p ** 2 == 0 and W.a6 % p ** 3 == 0
    b = W.a2 // p
    c = W.a4 // p ** 2
    d = W.a6 // p ** 3
    P = [d, c, b, 1]
    w = 27 * d * d - b * b * c * c + 4 * b ** 3 * d - 18 * b * c * d + 4 * c ** 3
    x = 3 * c - b * b
    if w % p:
      cp = 1 + len(_roots_mod(P, p))
      return _additive(p, "I0*", vD, vD - 4, cp, W)
    if x % p:
      # one double root: move it to 0 and run the I_m^* subprocedure
      rho = _double_root(P, p)
      W.rst(p * rho, 0, 0)
      m = 1
      mx = my = p * p
      cp = 0
      while cp == 0:
        xa2 = W.a2 // p
        xa3 = W.a3 // my
        xa6 = W.a6 // (mx * my)
        if (xa3 * xa3 + 4 * xa6) % p:
          cp = 4 if _quad_has_root(1, xa3, -xa6, p) else 2
          break
        rho = _double_root([-xa6, xa3, 1], p)
        W.rst(0, 0, my * rho)
        my *= p
        m += 1
        xa2 = W.a2 // p
        xa4 = W.a4 // (p * mx)
        xa6 = W.a6 // (mx * my)
        if (xa4 * xa4 - 4 * xa2 * xa6) % p:
          cp = 4 if _quad_has_root(xa2, xa4, xa6, p) else 2
          break
        rho = _double_root([xa6, xa4, xa2], p)
        W.rst(mx * rho, 0, 0)
        mx *= p
        m += 1
      return _additive(p, "I%d*" % m, vD, vD - 4 - m, cp, W, n=m)
    # triple root: move it to 0
    rho = _double_root(P, p)
    W.rst(p * rho, 0, 0)
    assert W.a2 % p ** 2 == 0 and W.a4 % p ** 3 == 0 and W.a6 % p ** 4 == 0
    x3 = W.a3 // p ** 2
    x6 = W.a6 // p ** 4
    if (x3 * x3 + 4 * x6) % p:
      cp = 3 if _quad_has_root(1, x3, -x6, p) else 1
      return _additive(p, "IV*", vD, vD - 6, cp, W)
    rho = _double_root([-x6, x3, 1], p)
    W.rst(0, 0, p * p * rho)
    assert W.a3 % p ** 3 == 0 and W.a6 % p ** 5 == 0
    if W.a4 % p ** 4:
      return _additive(p, "III*", vD, vD - 7, 2, W)
    if W.a6 % p ** 6:
      return _additive(p, "II*", vD, vD - 8, 1, W)
    # not minimal at p
    W.scale_down(p)


def _additive(p, kod, vD, fp, cp, W, n=0):
  return LocalReduction(p, kod, fp, cp, "additive", vD, _components(kod, n), W.tuple())


def bad_primes(E: CurveModel):
  return sorted(ea.factor_integer(abs(E.disc_E)))


def conductor(E: CurveModel) -> int:
  N = 1
  for p in bad_primes(E):
    N *= p ** tate_algorithm(E, p).f_p
  return N


def local_data(E: CurveModel):
  return {p: tate_algorithm(E, p) for p in bad_primes(E)}


# --------------------------------------------------------------------------
# the etale algebra at p


def etale_disc(F) -> int:
  """Discriminant of the maximal order of Q[T]/(F) (product of field discriminants)."""
  F = list(F)
  roots = rational_roots(F)
  if not roots:
    return CubicField(F).field_disc
  if len(roots) >= 2:
    return 1
  r = roots[0]
  # F = (x - r)(x^2 + q1 x + q0)
  c, b, a, _ = F
  q1 = a + r
  q0 = b + r * q1
  D = q1 * q1 - 4 * q0
  return _fundamental_disc(D)


def _fundamental_disc(D):
  if D == 0:
    raise ValueError("repeated factor")
  sign = -1 if D < 0 else 1
  core = 1
  for p, e in ea.factor_integer(abs(D)).items():
    if e % 2:
      core *= p
  core *= sign
  return core if core % 4 == 1 else 4 * core


@dataclass
class DaggerVerdict:
  p: int
  case: str  # "i".."iv" or "FAIL"
  satisfied: tuple
  witness: dict = field(default_factory=dict)


def dagger_check(E: CurveModel, p: int) -> DaggerVerdict:
  """Test the four local conditions in order; case is the first one satisfied."""
  F = list(E.F)
  D = E.disc_F
  wit = {}
  sat = []
  if D == 0:
    raise ModelError("singular model")
  lf = ea.cubic_factorization_mod_p(F, p)
  wit["shape"] = lf.shape
  if lf.shape.startswith("irreducible"):
    sat.append("i")
  vF = ea.valuation(D, p)
  vA = ea.valuation(etale_disc(F), p)
  wit["v_disc_F"] = vF
  wit["v_disc_order"] = vA
  if lf.congruent_pairs:
    wit["congruent_roots"] = [list(pr) for pr in lf.congruent_pairs]
  if vF == vA:
    sat.append("ii")
  red = tate_algorithm(E, p)
  wit["kodaira"] = red.kodaira
  wit["c_p"] = red.c_p
  if p != 2 and red.c_p % 2 == 1:
    sat.append("iii")
  if p == 2 and red.f_p == 0:
    sat.append("iv")
  case = sat[0] if sat else "FAIL"
  return DaggerVerdict(p, case, tuple(sat), wit)


@dataclass
class HypothesesReport:
  passed: bool
  failed: list  # names of failed hypotheses
  irreducible: bool
  verdicts: dict  # p -> DaggerVerdict

  def reason(self):
    return "; ".join(self.failed) if self.failed else ""


def hypotheses_check(E: CurveModel) -> HypothesesReport:
  """(1) automatic over Q; (2) no rational 2-torsion; (3) local conditions at bad primes and 2."""
  failed = []
  irr = E.is_irreducible()
  if not irr:
    failed.append("rational 2-torsion (F reducible over Q)")
  verdicts = {}
  if E.disc_F == 0:
    return HypothesesReport(False, failed + ["singular model"], irr, verdicts)
  for p in sorted(set(bad_primes(E)) | {2}):
    v = dagger_check(E, p)
    verdicts[p] = v
    if v.case == "FAIL":
      failed.append("local conditions fail at p=%d" % p)
  return HypothesesReport(not failed, failed, irr, verdicts)


# --------------------------------------------------------------------------
# local Kummer valuations


def local_delta_valuation_parity(E: CurveModel, p: int, P, k=None):
  """Parity of the normalised valuation of x(P) - T in each local factor of F at p.

  Returns a list of (factor, valuation, parity) and the verdict "integral"
  when all parities are even.
  """
  if not E.contains(P):
    raise ValueError("point is not on the curve")
  x = Fraction(P[0])
  F = list(E.F)
  if k is None:
    k = ea.valuation(E.disc_F, p) + 5 + 2 * max(0, ea.valuation(x.denominator, p))
  for _ in range(8):
    lf = ea.cubic_factorization_mod_p(F, p, k)
    out = []
    ok = True
    vx = ea.valuation(x, p) if x else 10 ** 9
    for fac in lf.factors:
      if vx < 0:
        v = fac.degree * vx
      else:
        val = ea.poly_eval(list(fac.poly_mod), x)
        num = val.numerator % p ** k
        if num == 0 or ea.valuation(num, p) >= k - 1:
          ok = False
          break
        v = ea.valuation(num, p) - ea.valuation(val.denominator, p)
      if v % fac.f:
        raise ArithmeticError("valuation not divisible by the residue degree")
      w = v // fac.f
      out.append({"factor": list(fac.poly_mod), "degree": fac.degree, "e": fac.e, "f": fac.f,
                  "valuation": w, "parity": "odd" if w % 2 else "even"})
    if ok:
      verdict = "integral" if all(o["parity"] == "even" for o in out) else "not integral"
      return out, verdict
    k *= 2
  raise ea.PrecisionError("raise precision: x(P) too close to a root of F")
