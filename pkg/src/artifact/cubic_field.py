"""The cubic algebra A = Q[T]/(F): maximal order, embeddings, ideals.

Elements are kept in the power basis 1, theta, theta^2 with a common
positive denominator.  Ideals are Z-lattices written in coordinates of the
integral basis omega_0 = 1, omega_1, omega_2 of the maximal order.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property

import mpmath

from . import exact_arith as ea
from .linalg import det_bareiss, hnf, left_kernel_mod_p, identity


class ReducibleCubicError(ValueError):
  """F has a rational root: the curve has rational 2-torsion."""


# --------------------------------------------------------------------------
# elements


class FieldElement:
  """Exact element (c0 + c1 T + c2 T^2) / d of A."""
  __slots__ = ("K", "c", "d")

  def __init__(self, K, coords, den=1):
    c = [int(x) for x in coords]
    d = int(den)
    if d == 0:
      raise ZeroDivisionError("zero denominator")
    if d < 0:
      c, d = [-x for x in c], -d
    g = math.gcd(math.gcd(math.gcd(c[0], c[1]), c[2]), d)
    if g > 1:
      c, d = [x // g for x in c], d // g
    self.K = K
    self.c = tuple(c)
    self.d = d

  @classmethod
  def from_fractions(cls, K, fr):
    fr = [Fraction(x) for x in fr]
    d = 1
    for x in fr:
      d = d * x.denominator // math.gcd(d, x.denominator)
    return cls(K, [int(x * d) for x in fr], d)

  def __repr__(self):
    parts = []
    for k, x in enumerate(self.c):
      if x:
        parts.append("%d%s" % (x, ["", "*t", "*t^2"][k]))
    s = " + ".join(parts) or "0"
    return "(%s)/%d" % (s, self.d) if self.d != 1 else s

  def coeffs(self):
    return [Fraction(x, self.d) for x in self.c]

  def is_zero(self):
    return not any(self.c)

  def __eq__(self, other):
    if isinstance(other, int):
      other = self.K.element(other)
    return isinstance(other, FieldElement) and self.c == other.c and self.d == other.d

  def __hash__(self):
    return hash((self.c, self.d))

  def __neg__(self):
    return FieldElement(self.K, [-x for x in self.c], self.d)

  def _coerce(self, other):
    if isinstance(other, FieldElement):
      return other
    if isinstance(other, Fraction):
      return FieldElement(self.K, [other.numerator, 0, 0], other.denominator)
    return FieldElement(self.K, [other, 0, 0], 1)

  def __add__(self, other):
    o = self._coerce(other)
    return FieldElement(self.K, [a * o.d + b * self.d for a, b in zip(self.c, o.c)], self.d * o.d)

  __radd__ = __add__

  def __sub__(self, other):
    return self + (-self._coerce(other))

  def __rsub__(self, other):
    return self._coerce(other) - self

  def __mul__(self, other):
    o = self._coerce(other)
    return FieldElement(self.K, self.K._mulpow(self.c, o.c), self.d * o.d)

  __rmul__ = __mul__

  def __truediv__(self, other):
    return self * self._coerce(other).inverse()

  def __rtruediv__(self, other):
    return self._coerce(other) * self.inverse()

  def __pow__(self, e):
    if e < 0:
      return self.inverse() ** (-e)
    out = self.K.element(1)
    base = self
    while e:
      if e & 1:
        out = out * base
      base = base * base
      e >>= 1
    return out

  def charpoly(self):
    """Monic characteristic polynomial [c0, c1, c2, 1] with Fraction coefficients."""
    M = self.K._mult_matrix(self.c)
    d = self.d
    tr = Fraction(M[0][0] + M[1][1] + M[2][2], d)
    m2 = (M[0][0] * M[1][1] - M[0][1] * M[1][0] + M[0][0] * M[2][2] - M[0][2] * M[2][0]
          + M[1][1] * M[2][2] - M[1][2] * M[2][1])
    s = Fraction(m2, d * d)
    n = Fraction(det_bareiss(M), d ** 3)
    return [-n, s, -tr, Fraction(1)]

  def norm(self):
    return Fraction(det_bareiss(self.K._mult_matrix(self.c)), self.d ** 3)

  def trace(self):
    M = self.K._mult_matrix(self.c)
    return Fraction(M[0][0] + M[1][1] + M[2][2], self.d)

  def inverse(self):
    if self.is_zero():
      raise ZeroDivisionError("inverse of zero")
    c0, c1, c2, _ = self.charpoly()
    # a^3 + c2 a^2 + c1 a + c0 = 0  =>  a^-1 = -(a^2 + c2 a + c1) / c0
    a2 = self * self
    return (a2 + self * c2 + FieldElement.from_fractions(self.K, [c1, 0, 0])) * FieldElement.from_fractions(
        self.K, [Fraction(-1) / c0, 0, 0])

  def is_rational(self):
    return self.c[1] == 0 and self.c[2] == 0

  def height(self):
    return max(max(abs(x) for x in self.c), self.d)


# --------------------------------------------------------------------------
# ideals


class Ideal:
  """Fractional ideal: (Z-span of rows of H in omega-coordinates) / den.

  H is the row HNF (upper triangular, positive diagonal).
  """
  __slots__ = ("K", "H", "den", "_norm")

  def __init__(self, K, H, den=1):
    g = 0
    for row in H:
      for x in row:
        g = math.gcd(g, x)
    g = math.gcd(g, den)
    if g > 1:
      H = [[x // g for x in row] for row in H]
      den //= g
    self.K = K
    self.H = tuple(tuple(r) for r in H)
    self.den = den
    self._norm = None

  def __repr__(self):
    return "Ideal(H=%s, den=%d)" % (list(map(list, self.H)), self.den)

  def __eq__(self, other):
    return isinstance(other, Ideal) and self.H == other.H and self.den == other.den

  def __hash__(self):
    return hash((self.H, self.den))

  @property
  def norm(self):
    if self._norm is None:
      self._norm = Fraction(self.H[0][0] * self.H[1][1] * self.H[2][2], self.den ** 3)
    return self._norm

  def is_integral(self):
    return self.den == 1

  def __mul__(self, other):
    return ideal_mul(self, other)

  def __pow__(self, e):
    return ideal_pow(self, e)

  def contains(self, alpha):
    x = self.K.to_omega(alpha)
    x = [v * self.den for v in x]
    # solve z H = x with H upper triangular
    z = [Fraction(0)] * 3
    r = list(x)
    for i in range(3):
      z[i] = Fraction(r[i]) / self.H[i][i]
      if z[i].denominator != 1:
        return False
      for j in range(i, 3):
        r[j] -= z[i] * self.H[i][j]
    return True

  def basis_elements(self):
    return [self.K.from_omega([Fraction(x, self.den) for x in row]) for row in self.H]

  def min_integer(self):
    """Smallest positive integer in an integral ideal."""
    return self.H[0][0] if self.den == 1 else None


def ideal_from_omega(K, gens, den=1, modulus=None):
  """Ideal generated over O by the given omega-coordinate integer vectors."""
  rows = []
  for g in gens:
    for j in range(3):
      rows.append(K.omul(g, K.e(j)))
  H = hnf(rows, 3, modulus)
  if len(H) != 3:
    raise ValueError("zero ideal")
  return Ideal(K, H, den)


def ideal_mul(I, J):
  K = I.K
  rows = []
  for a in I.H:
    for b in J.H:
      rows.append(K.omul(a, b))
  mod = None
  if I.den == 1 and J.den == 1:
    mod = int(I.norm * J.norm)
  H = hnf(rows, 3, mod)
  return Ideal(K, H, I.den * J.den)


def ideal_pow(I, e):
  if e < 0:
    raise ValueError("negative powers need the prime inverse machinery")
  out = I.K.unit_ideal()
  base = I
  while e:
    if e & 1:
      out = ideal_mul(out, base)
    base = ideal_mul(base, base)
    e >>= 1
  return out


def ideal_norm(I):
  return I.norm


def ideal_eq(I, J):
  return I == J


def principal_ideal(K, alpha):
  if not isinstance(alpha, FieldElement):
    alpha = K.element(alpha)
  if alpha.is_zero():
    raise ValueError("principal ideal of zero")
  x = K.to_omega(alpha)
  m = 1
  for v in x:
    m = m * v.denominator // math.gcd(m, v.denominator)
  y = [int(v * m) for v in x]
  n = abs(alpha.norm() * m ** 3)
  return ideal_from_omega(K, [y], m, modulus=int(n))


# --------------------------------------------------------------------------
# prime ideals


class PrimeIdeal:
  """Prime ideal P above p with ramification e and residue degree f.

  ``beta`` is an omega-coordinate vector with beta*P in pO and beta not in pO,
  used to compute valuations.
  """

  def __init__(self, K, p, e, f, ideal, gen2):
    self.K = K
    self.p = p
    self.e = e
    self.f = f
    self.ideal = ideal
    self.gen2 = tuple(gen2)  # P = pO + gen2 O
    self.beta = self._compute_beta()

  def __repr__(self):
    return "PrimeIdeal(p=%d, e=%d, f=%d, gen=%s)" % (self.p, self.e, self.f, list(self.gen2))

  @property
  def norm(self):
    return self.p ** self.f

  def _compute_beta(self):
    K, p = self.K, self.p
    # beta in O with beta * b in pO for each basis vector b of P
    rows = []
    for i in range(3):
      img = []
      for b in self.ideal.H:
        img += K.omul(K.e(i), b)
      rows.append(img)
    ker = left_kernel_mod_p(rows, p)
    for v in ker:
      if any(x % p for x in v):
        return tuple(v)
    raise ArithmeticError("no beta for prime ideal")

  def valuation_int(self, y):
    """v_P of a nonzero omega-coordinate integer vector."""
    K, p = self.K, self.p
    y = list(y)
    if not any(y):
      raise ValueError("valuation of zero")
    v = 0
    # strip rational p powers first: v_P(p) = e
    while all(x % p == 0 for x in y):
      y = [x // p for x in y]
      v += self.e
    while True:
      z = K.omul(y, self.beta)
      if all(x % p == 0 for x in z):
        y = [x // p for x in z]
        v += 1
      else:
        return v

  def valuation(self, alpha):
    if not isinstance(alpha, FieldElement):
      alpha = self.K.element(alpha)
    x = self.K.to_omega(alpha)
    m = 1
    for t in x:
      m = m * t.denominator // math.gcd(m, t.denominator)
    y = [int(t * m) for t in x]
    return self.valuation_int(y) - self.e * ea.valuation(m, self.p)

  def key(self):
    return (self.p, self.f, self.e, self.ideal.H)


# --------------------------------------------------------------------------
# the field


class CubicField:
  """A = Q[T]/(F) for a monic irreducible integer cubic F."""

  def __init__(self, F, _skip_irreducibility=False):
    F = ea.check_monic_cubic(F)
    self.F = tuple(F)
    self.a0, self.a1, self.a2 = F[0], F[1], F[2]
    self.discF = ea.poly_disc(F)
    if self.discF == 0:
      raise ReducibleCubicError("F has a repeated root")
    if not _skip_irreducibility and rational_roots(F):
      raise ReducibleCubicError("F has a rational root: curve has rational 2-torsion")
    self.signature = (3, 0) if self.discF > 0 else (1, 1)
    self.r1 = self.signature[0]
    self._prime_cache = {}
    self._compute_maximal_order()

  def __repr__(self):
    return "CubicField(%s)" % ea.cubic_str(self.F)

  # -- power basis arithmetic

  def _mulpow(self, a, b):
    a0, a1, a2 = a
    b0, b1, b2 = b
    p0 = a0 * b0
    p1 = a0 * b1 + a1 * b0
    p2 = a0 * b2 + a1 * b1 + a2 * b0
    p3 = a1 * b2 + a2 * b1
    p4 = a2 * b2
    # T^3 = -a2 T^2 - a1 T - a0
    c0, c1, c2 = self.a0, self.a1, self.a2
    p3 -= c2 * p4
    p2 -= c1 * p4
    p1 -= c0 * p4
    p2 -= c2 * p3
    p1 -= c1 * p3
    p0 -= c0 * p3
    return [p0, p1, p2]

  def _mult_matrix(self, c):
    """Rows: power coordinates of alpha*1, alpha*T, alpha*T^2."""
    r0 = list(c)
    r1 = self._mulpow(c, (0, 1, 0))
    r2 = self._mulpow(r1, (0, 1, 0))
    return [r0, r1, r2]

  def element(self, x, den=1):
    if isinstance(x, FieldElement):
      return x
    if isinstance(x, Fraction):
      return FieldElement(self, [x.numerator, 0, 0], x.denominator * den)
    if isinstance(x, int):
      return FieldElement(self, [x, 0, 0], den)
    return FieldElement(self, list(x), den)

  @property
  def theta(self):
    return FieldElement(self, [0, 1, 0])

  # -- maximal order

  def _compute_maximal_order(self):
    # basis rows in power coordinates (Fractions)
    B = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    fac = ea.factor_integer(self.discF)
    for p, k in fac.items():
      if k >= 2:
        B = _p_maximal(self, B, p)
    self._set_basis(B)

  def _set_basis(self, B):
    D = 1
    for row in B:
      for x in row:
        D = D * x.denominator // math.gcd(D, x.denominator)
    N = [[int(x * D) for x in row] for row in B]
    # HNF with reversed columns gives a triangular basis starting at 1
    rev = [list(reversed(r)) for r in N]
    H = hnf(rev, 3)
    H = [list(reversed(r)) for r in reversed(H)]
    # H[0] = (D*?,0,0), H[1] = (*, *, 0), H[2] = (*, *, *)
    g = 0
    for r in H:
      for x in r:
        g = math.gcd(g, x)
    g = math.gcd(g, D)
    H = [[x // g for x in r] for r in H]
    D //= g
    self.ib_num = H
    self.ib_den = D
    if H[0] != [D, 0, 0]:
      raise ArithmeticError("integral basis does not start at 1: %r / %d" % (H, D))
    detN = H[0][0] * H[1][1] * H[2][2]
    idx = Fraction(D ** 3, detN)
    if idx.denominator != 1:
      raise ArithmeticError("order does not contain Z[T]")
    self.index = int(idx)
    fd = Fraction(self.discF, self.index ** 2)
    if fd.denominator != 1:
      raise ArithmeticError("disc(F) != index^2 * field_disc")
    self.field_disc = int(fd)
    self._omega_elems = [FieldElement(self, r, D) for r in H]
    # multiplication table T[i][j] = omega coords of omega_i omega_j
    T = [[None] * 3 for _ in range(3)]
    for i in range(3):
      for j in range(3):
        prod = self._omega_elems[i] * self._omega_elems[j]
        x = self.to_omega(prod)
        if any(v.denominator != 1 for v in x):
          raise ArithmeticError("integral basis not closed under multiplication")
        T[i][j] = [int(v) for v in x]
    self.mtab = T
    self._theta_omega = tuple(int(v) for v in self.to_omega(self.theta))

  @property
  def integral_basis(self):
    return list(self._omega_elems)

  def to_omega(self, alpha):
    """Coordinates (Fractions) of alpha in the integral basis."""
    if not isinstance(alpha, FieldElement):
      alpha = self.element(alpha)
    H, D = self.ib_num, self.ib_den
    # alpha = sum x_i H[i]/D ; H lower triangular in power coords
    c = [Fraction(v, alpha.d) for v in alpha.c]
    x2 = c[2] * D / H[2][2]
    x1 = (c[1] * D - x2 * H[2][1]) / H[1][1]
    x0 = (c[0] * D - x2 * H[2][0] - x1 * H[1][0]) / H[0][0]
    return [x0, x1, x2]

  def from_omega(self, x):
    fr = [Fraction(0)] * 3
    for xi, row in zip(x, self.ib_num):
      for j in range(3):
        fr[j] += Fraction(xi) * row[j]
    return FieldElement.from_fractions(self, [v / self.ib_den for v in fr])

  def is_integral(self, alpha):
    return all(v.denominator == 1 for v in self.to_omega(alpha))

  def e(self, i):
    return [int(i == j) for j in range(3)]

  def omul(self, x, y):
    """Product of omega-coordinate integer vectors."""
    T = self.mtab
    out = [0, 0, 0]
    for i in range(3):
      xi = x[i]
      if not xi:
        continue
      for j in range(3):
        c = xi * y[j]
        if c:
          t = T[i][j]
          out[0] += c * t[0]
          out[1] += c * t[1]
          out[2] += c * t[2]
    return out

  def omega_norm(self, x):
    return self.from_omega(x).norm()

  def unit_ideal(self):
    return Ideal(self, identity(3), 1)

  # -- embeddings

  @cached_property
  def root_intervals(self):
    ivs = ea.isolate_real_roots(list(self.F), Fraction(1, 2 ** 20))
    if len(ivs) != self.r1:
      raise ArithmeticError("real root count does not match discriminant sign")
    return ivs

  def _refined_interval(self, i, bits):
    cache = self.__dict__.setdefault("_iv_cache", {})
    key = (i, bits)
    if key not in cache:
      cache[key] = self.root_intervals[i].refine(Fraction(1, 2 ** bits))
    return cache[key]

  def sign_at(self, alpha, i):
    """Exact sign of alpha at the i-th real place (ascending roots)."""
    c = alpha.c
    bits = 64
    while True:
      iv = self._refined_interval(i, bits)
      lo, hi = iv.lo, iv.hi
      if lo == hi:
        return _sgn(c[0] + c[1] * lo + c[2] * lo * lo)
      glo = c[0] + c[1] * lo + c[2] * lo * lo
      ghi = c[0] + c[1] * hi + c[2] * hi * hi
      s_lo, s_hi = _sgn(glo), _sgn(ghi)
      if s_lo == s_hi and s_lo != 0:
        inside = False
        if c[2]:
          vx = Fraction(-c[1], 2 * c[2])
          inside = lo < vx < hi
        if not inside:
          return s_lo
        gv = c[0] + c[1] * vx + c[2] * vx * vx
        if _sgn(gv) == s_lo:
          return s_lo
      bits *= 2
      if bits > 1 << 16:
        raise ArithmeticError("sign refinement did not terminate")

  def signature_of(self, alpha):
    if not isinstance(alpha, FieldElement):
      alpha = self.element(alpha)
    if alpha.is_zero():
      raise ValueError("signature of zero")
    return tuple(self.sign_at(alpha, i) for i in range(self.r1))

  def roots_mp(self, dps=50):
    """Roots as mpmath numbers: real ones ascending, then the complex one with Im > 0."""
    cache = self.__dict__.setdefault("_roots_mp", {})
    if dps in cache:
      return cache[dps]
    with mpmath.workdps(dps + 10):
      rts = mpmath.polyroots([self.F[3], self.F[2], self.F[1], self.F[0]], maxsteps=200,
                             extraprec=4 * dps + 50)
      real = sorted([mpmath.re(r) for r in rts if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-dps // 2)])
      if self.r1 == 3:
        out = real
      else:
        cx = [r for r in rts if mpmath.im(r) > mpmath.mpf(10) ** (-dps // 2)]
        out = real + cx[:1]
    cache[dps] = out
    return out

  def embeddings(self, alpha, dps=30):
    """Numerical images of alpha: r1 reals then (for r2 = 1) one complex."""
    if not isinstance(alpha, FieldElement):
      alpha = self.element(alpha)
    digits = len(str(alpha.height()))
    prec = dps + 2 * digits
    rts = self.roots_mp(prec)
    with mpmath.workdps(prec):
      out = [(alpha.c[0] + alpha.c[1] * r + alpha.c[2] * r * r) / alpha.d for r in rts]
    return out

  def log_embedding(self, alpha, dps=30):
    """Vector log|sigma_i(alpha)| (real places then complex place, unweighted)."""
    emb = self.embeddings(alpha, dps)
    with mpmath.workdps(dps + 10):
      return [mpmath.log(abs(v)) for v in emb]

  def t2_gram(self, rows):
    """Float Gram matrix of T2 on the given omega-coordinate vectors."""
    embs = self._omega_float_embeddings()
    vecs = []
    for r in rows:
      v = [sum(r[i] * embs[i][k] for i in range(3)) for k in range(len(embs[0]))]
      vecs.append(v)
    n = len(rows)
    G = [[0.0] * n for _ in range(n)]
    for a in range(n):
      for b in range(n):
        s = 0.0
        for x, y in zip(vecs[a], vecs[b]):
          s += (x * y.conjugate()).real if isinstance(x, complex) else x * y
        if self.r1 == 1:
          # complex place counted twice
          x, y = vecs[a][1], vecs[b][1]
          s += (x * y.conjugate()).real
        G[a][b] = s
    return G

  def _omega_float_embeddings(self):
    cache = self.__dict__.get("_omega_fe")
    if cache is not None:
      return cache
    out = []
    for w in self._omega_elems:
      emb = self.embeddings(w, 20)
      out.append([complex(v) if isinstance(v, mpmath.mpc) else float(v) for v in emb])
    self.__dict__["_omega_fe"] = out
    return out

  # -- primes

  def factor_prime(self, p):
    """List of PrimeIdeal above p with sum e*f = 3."""
    if p in self._prime_cache:
      return self._prime_cache[p]
    res = _factor_prime(self, p)
    if sum(P.e * P.f for P in res) != 3:
      raise ArithmeticError("bad prime decomposition at %d" % p)
    self._prime_cache[p] = res
    return res

  def minkowski_bound(self):
    """Rational upper bound for the Minkowski constant (rounded up to an int)."""
    # M = n!/n^n (4/pi)^r2 sqrt|D|; use pi > 314159/100000
    sqrtD = math.isqrt(abs(self.field_disc))
    if sqrtD * sqrtD < abs(self.field_disc):
      sqrtD += 1
    c = Fraction(6, 27)
    if self.signature[1]:
      c *= Fraction(4 * 100000, 314159)
    return math.ceil(c * sqrtD)


def _sgn(x):
  return (x > 0) - (x < 0)


def rational_roots(F):
  """Integer roots of a monic integer polynomial."""
  F = ea.poly_trim(F)
  c = F[0]
  if c == 0:
    return [0] + rational_roots(F[1:]) if len(F) > 1 else [0]
  out = []
  for d in _divisors(abs(c)):
    for s in (d, -d):
      if ea.poly_eval(F, s) == 0:
        out.append(s)
  return sorted(set(out))


def _divisors(n):
  fac = ea.factor_integer(n) if n > 1 else {}
  divs = [1]
  for p, k in fac.items():
    divs = [d * p ** i for d in divs for i in range(k + 1)]
  return sorted(divs)


def build_field(F):
  """Build the cubic field of a monic irreducible cubic."""
  return CubicField(list(F))


# --------------------------------------------------------------------------
# Round 2


def _order_table(K, B):
  """Multiplication table of the order with power-coordinate basis rows B."""
  elems = [FieldElement.from_fractions(K, r) for r in B]
  # inverse of B for coordinate conversion
  inv = _mat_inverse(B)
  T = [[None] * 3 for _ in range(3)]
  for i in range(3):
    for j in range(3):
      pr = (elems[i] * elems[j]).coeffs()
      x = [sum(pr[k] * inv[k][l] for k in range(3)) for l in range(3)]
      if any(v.denominator != 1 for v in x):
        raise ArithmeticError("basis is not an order")
      T[i][j] = [int(v) for v in x]
  return T


def _mat_inverse(B):
  n = len(B)
  A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(B)]
  for c in range(n):
    k = next(i for i in range(c, n) if A[i][c] != 0)
    A[c], A[k] = A[k], A[c]
    piv = A[c][c]
    A[c] = [x / piv for x in A[c]]
    for i in range(n):
      if i != c and A[i][c] != 0:
        f = A[i][c]
        A[i] = [x - f * y for x, y in zip(A[i], A[c])]
  return [row[n:] for row in A]


def _tmul(T, x, y, mod=None):
  out = [0, 0, 0]
  for i in range(3):
    if x[i]:
      for j in range(3):
        c = x[i] * y[j]
        if c:
          for k in range(3):
            out[k] += c * T[i][j][k]
  if mod:
    out = [v % mod for v in out]
  return out


def _p_maximal(K, B, p):
  """Enlarge the order spanned by B until it is p-maximal (Round 2)."""
  for _ in range(64):
    T = _order_table(K, B)
    q = p
    while q < 3:
      q *= p
    # Frobenius x -> x^q is F_p-linear on O/pO; its kernel is the p-radical
    rows = []
    for i in range(3):
      x = [int(i == j) for j in range(3)]
      acc = _one_coords(B)
      e = q
      base = x
      while e:
        if e & 1:
          acc = _tmul(T, acc, base, p)
        base = _tmul(T, base, base, p)
        e >>= 1
      rows.append(acc)
    ker = left_kernel_mod_p(rows, p)
    I_rows = hnf([list(v) for v in ker], 3, modulus=p)
    # U = {y : y I in p I}
    Hinv = _mat_inverse(I_rows)
    maps = []
    for i in range(3):
      y = [int(i == j) for j in range(3)]
      img = []
      for b in I_rows:
        v = _tmul(T, y, b)
        z = [sum(Fraction(v[k]) * Hinv[k][l] for k in range(3)) for l in range(3)]
        if any(t.denominator != 1 for t in z):
          raise ArithmeticError("radical is not an ideal")
        img += [int(t) % p for t in z]
      maps.append(img)
    uk = left_kernel_mod_p(maps, p)
    U = hnf([list(v) for v in uk], 3, modulus=p)
    detU = U[0][0] * U[1][1] * U[2][2]
    if detU == p ** 3:
      return B
    newB = []
    for row in U:
      newB.append([sum(Fraction(row[k], p) * B[k][l] for k in range(3)) for l in range(3)])
    B = newB
  raise ArithmeticError("Round 2 did not terminate at p=%d" % p)


def _one_coords(B):
  inv = _mat_inverse(B)
  x = [inv[0][l] for l in range(3)]
  return [int(v) for v in x]


# --------------------------------------------------------------------------
# prime decomposition


def _factor_mod_p(g, p):
  """Factor a monic cubic mod p: list of (factor coeffs, multiplicity)."""
  h = [c % p for c in g]
  out = []
  for r in ea.roots_mod_p(h, p):
    e = 0
    while len(h) > 1 and ea.poly_eval(h, r) % p == 0:
      # synthetic division by (x - r)
      n = len(h) - 1
      q = [0] * n
      acc = 0
      for k in range(n, 0, -1):
        acc = (acc * r + h[k]) % p
        q[k - 1] = acc
      h = q
      e += 1
    out.append(([(-r) % p, 1], e))
  if len(h) > 1:
    out.append((h, 1))
  return out


def _charpoly_int(K, x):
  cp = K.from_omega(x).charpoly()
  if any(c.denominator != 1 for c in cp):
    raise ArithmeticError("non-integral element")
  return [int(c) for c in cp]


def _poly_at(K, g, alpha):
  """Evaluate integer polynomial g at omega-vector alpha."""
  acc = [0, 0, 0]
  for c in reversed(g):
    acc = K.omul(acc, alpha)
    acc[0] += c
  return acc


def _factor_prime(K, p):
  if K.index % p:
    alpha = list(K._theta_omega)
    g = list(K.F)
  else:
    alpha = g = None
    vfd = ea.valuation(K.field_disc, p) if K.field_disc % p == 0 else 0
    rng = range(-3, 4)
    for a in rng:
      for b in rng:
        if (a, b) == (0, 0):
          continue
        x = [0, a, b]
        cp = _charpoly_int(K, x)
        d = ea.poly_disc(cp)
        if d and ea.valuation(d, p) == vfd:
          alpha, g = x, cp
          break
      if alpha is not None:
        break
    if alpha is None:
      return _factor_prime_bruteforce(K, p)
  # pO has generators p*omega_j
  out = []
  for fac, e in _factor_mod_p(g, p):
    gen = _poly_at(K, fac, alpha)
    ideal = ideal_from_omega(K, [[p, 0, 0], gen], 1, modulus=p)
    out.append(PrimeIdeal(K, p, e, len(fac) - 1, ideal, gen))
  out.sort(key=lambda P: (P.f, P.ideal.H))
  return out


def _factor_prime_bruteforce(K, p):
  """Degree one primes above p found as codimension one ideals of O/pO."""
  out = []
  seen = set()
  for lam in _functionals(p):
    ker = [v for v in _all_vectors(p) if sum(a * b for a, b in zip(v, lam)) % p == 0]
    basis = hnf([list(v) for v in ker], 3, modulus=p)
    ideal = Ideal(K, basis, 1)
    if ideal.norm != p:
      continue
    # closed under multiplication by O
    ok = all(ideal.contains(K.from_omega(K.omul(K.e(i), list(b)))) for i in range(3) for b in basis)
    if not ok or ideal.H in seen:
      continue
    seen.add(ideal.H)
    gen = next(list(b) for b in basis if any(x % p for x in b))
    out.append(PrimeIdeal(K, p, 1, 1, ideal, gen))
  for P in out:
    P.e = P.valuation_int([p, 0, 0])
  return out


def _functionals(p):
  for a in range(p):
    for b in range(p):
      for c in range(p):
        v = (a, b, c)
        if any(v) and next(x for x in v if x) == 1:
          yield v


def _all_vectors(p):
  for a in range(p):
    for b in range(p):
      for c in range(p):
        yield (a, b, c)


def factor_prime(K, p):
  return K.factor_prime(p)


def signature_of(K, alpha):
  return K.signature_of(alpha)
