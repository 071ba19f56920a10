"""Exact integer, rational and polynomial kernels.

Polynomials are plain lists of ints, constant term first.  Cubics in the
public API are monic, so ``[a0, a1, a2, 1]`` is ``x^3 + a2 x^2 + a1 x + a0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

FACTOR_GUARD_DIGITS = 64

# deterministic Miller-Rabin bases, valid for n < 3.3e24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class ArithmeticError_(ValueError):
  """Raised on invalid input to an exact kernel."""


class FactorizationTooLarge(ArithmeticError_):
  pass


class PrecisionError(ArithmeticError_):
  """The requested p-adic precision cannot separate the factors."""


# --------------------------------------------------------------------------
# polynomials


def poly_trim(f):
  f = list(f)
  while len(f) > 1 and f[-1] == 0:
    f.pop()
  return f


def poly_eval(f, x):
  acc = 0
  for c in reversed(f):
    acc = acc * x + c
  return acc


def poly_mul(f, g):
  out = [0] * (len(f) + len(g) - 1)
  for i, a in enumerate(f):
    if a:
      for j, b in enumerate(g):
        out[i + j] += a * b
  return out


def poly_deriv(f):
  return [i * f[i] for i in range(1, len(f))] or [0]


def check_monic_cubic(F):
  F = poly_trim(F)
  if len(F) != 4:
    raise ArithmeticError_("expected a cubic, got degree %d" % (len(F) - 1))
  if F[3] != 1:
    raise ArithmeticError_("cubic must be monic")
  return F


def poly_disc(F) -> int:
  """Discriminant of a monic cubic.

  >>> poly_disc([3, -7, 0, 1])
  1129
  """
  F = check_monic_cubic(F)
  c, b, a, _ = F
  return a * a * b * b - 4 * b ** 3 - 4 * a ** 3 * c - 27 * c * c + 18 * a * b * c


def cubic_str(F):
  """Human readable form, e.g. ``x^3 - 7*x + 3``."""
  F = poly_trim(F)
  parts = []
  for k in range(len(F) - 1, -1, -1):
    c = F[k]
    if c == 0:
      continue
    mono = {0: "", 1: "x"}.get(k, "x^%d" % k)
    mag = abs(c)
    if mono and mag == 1:
      body = mono
    elif mono:
      body = "%d*%s" % (mag, mono)
    else:
      body = str(mag)
    sign = "-" if c < 0 else "+"
    parts.append((sign, body))
  if not parts:
    return "0"
  s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
  for sign, body in parts[1:]:
    s += " %s %s" % (sign, body)
  return s


# --------------------------------------------------------------------------
# real root isolation


@dataclass(frozen=True)
class RootInterval:
  """Isolating interval [lo, hi] for one real root of ``poly``."""
  lo: Fraction
  hi: Fraction
  poly: tuple

  @property
  def width(self):
    return self.hi - self.lo

  def refine(self, width):
    """Bisect until the interval is no wider than ``width``."""
    lo, hi = self.lo, self.hi
    f = self.poly
    if lo == hi:
      return self
    flo = _sgn(poly_eval(f, lo))
    while hi - lo > width:
      mid = (lo + hi) / 2
      fm = _sgn(poly_eval(f, mid))
      if fm == 0:
        return RootInterval(mid, mid, f)
      if fm == flo:
        lo = mid
      else:
        hi = mid
    return RootInterval(lo, hi, f)

  def midpoint(self):
    return (self.lo + self.hi) / 2


def _sgn(x):
  return (x > 0) - (x < 0)


def _sign_changes(seq):
  seq = [s for s in seq if s != 0]
  return sum(1 for a, b in zip(seq, seq[1:]) if (a > 0) != (b > 0))


def _descartes_bound(f, lo, hi):
  """Upper bound on the number of roots of f in the open interval (lo, hi).

  Maps (lo, hi) to (0, inf) via x = (lo + hi t) / (1 + t) and counts sign
  changes (Vincent / Descartes test).
  """
  n = len(f) - 1
  # g(t) = (1+t)^n f((lo + hi t)/(1+t)), clear denominators of lo, hi
  lo, hi = Fraction(lo), Fraction(hi)
  den = lo.denominator * hi.denominator
  a, b = lo * den, hi * den  # integers
  a, b = int(a), int(b)
  g = [0] * (n + 1)
  for k, c in enumerate(f):
    if c == 0:
      continue
    # c * (a + b t)^k * (1 + t)^(n-k) * den^(n-k)
    term = [c * den ** (n - k)]
    for _ in range(k):
      term = poly_mul(term, [a, b])
    for _ in range(n - k):
      term = poly_mul(term, [1, 1])
    for i, t in enumerate(term):
      g[i] += t
  return _sign_changes(g)


def _cauchy_bound(f):
  lead = abs(f[-1])
  return 1 + Fraction(max(abs(c) for c in f[:-1]), lead)


def isolate_real_roots(F, width=Fraction(1, 8)):
  """Isolate the real roots of a squarefree integer polynomial.

  Exact: uses Descartes' rule on dyadic subintervals, then bisection.

  Args:
    F: coefficient list (constant first).
    width: maximal width of each returned interval.

  Returns:
    list of RootInterval sorted ascending.
  """
  f = tuple(poly_trim(F))
  width = Fraction(width)
  B = _cauchy_bound(f)
  # power of two bound keeps everything dyadic
  R = 1
  while R < B:
    R *= 2
  found = []
  stack = [(Fraction(-R), Fraction(R))]
  while stack:
    lo, hi = stack.pop()
    v = _descartes_bound(f, lo, hi)
    if v == 0:
      continue
    if v == 1:
      found.append((lo, hi))
      continue
    mid = (lo + hi) / 2
    if poly_eval(f, mid) == 0:
      found.append((mid, mid))
    stack.append((lo, mid))
    stack.append((mid, hi))
  found.sort()
  out = []
  for lo, hi in found:
    lo, hi = Fraction(lo), Fraction(hi)
    # keep exact root hits off the endpoints of an isolating interval
    while lo != hi and (poly_eval(f, lo) == 0 or poly_eval(f, hi) == 0):
      mid = (lo + hi) / 2
      if poly_eval(f, mid) == 0:
        lo = hi = mid
      elif _descartes_bound(f, lo, mid) == 1:
        hi = mid
      else:
        lo = mid
    out.append(RootInterval(lo, hi, f).refine(width))
  out.sort(key=lambda iv: iv.lo)
  # an exact root may be reported from two neighbouring cells
  dedup = []
  for iv in out:
    if dedup and dedup[-1].lo == dedup[-1].hi == iv.lo == iv.hi:
      continue
    dedup.append(iv)
  return dedup


def sign_at_root(g, iv: RootInterval, max_steps=4000):
  """Exact sign of the polynomial g at the root isolated by iv."""
  g = poly_trim(g)
  if all(c == 0 for c in g):
    return 0
  cur = iv
  for _ in range(max_steps):
    if cur.lo == cur.hi:
      return _sgn(poly_eval(g, cur.lo))
    # g has no root in [lo, hi] once Descartes says so and endpoints agree
    slo = _sgn(poly_eval(g, cur.lo))
    shi = _sgn(poly_eval(g, cur.hi))
    if slo == shi and slo != 0 and (len(g) < 2 or _descartes_bound(g, cur.lo, cur.hi) == 0):
      return slo
    # common root with the defining polynomial means g vanishes there
    if _gcd_has_root_in(g, cur):
      return 0
    cur = cur.refine(cur.width / 4)
  raise ArithmeticError_("sign determination did not terminate")


def _gcd_has_root_in(g, iv):
  h = poly_gcd_rational(list(iv.poly), g)
  if len(h) <= 1:
    return False
  return _descartes_bound(h, iv.lo, iv.hi) > 0 or poly_eval(h, iv.lo) == 0 or poly_eval(h, iv.hi) == 0


def poly_gcd_rational(f, g):
  """Monic gcd over Q (coefficients as Fractions)."""
  a = [Fraction(c) for c in poly_trim(f)]
  b = [Fraction(c) for c in poly_trim(g)]
  while len(b) > 1 or (len(b) == 1 and b[0] != 0):
    a, b = b, _poly_rem_q(a, b)
  if len(a) == 1:
    return [Fraction(1)]
  lead = a[-1]
  return [c / lead for c in a]


def _poly_rem_q(a, b):
  a = list(a)
  while len(a) >= len(b) and any(a):
    if a[-1] == 0:
      a.pop()
      continue
    q = a[-1] / b[-1]
    shift = len(a) - len(b)
    for i, c in enumerate(b):
      a[shift + i] -= q * c
    a.pop()
  while len(a) > 1 and a[-1] == 0:
    a.pop()
  return a or [Fraction(0)]


# --------------------------------------------------------------------------
# integers


def is_probable_prime(n: int) -> bool:
  """Deterministic Miller-Rabin for n < 3.3e24, strong probable prime beyond."""
  if n < 2:
    return False
  for p in _MR_BASES:
    if n % p == 0:
      return n == p
  d, s = n - 1, 0
  while d % 2 == 0:
    d //= 2
    s += 1
  for a in _MR_BASES:
    x = pow(a, d, n)
    if x in (1, n - 1):
      continue
    for _ in range(s - 1):
      x = x * x % n
      if x == n - 1:
        break
    else:
      return False
  return True


def _pollard_rho(n):
  if n % 2 == 0:
    return 2
  c = 1
  while True:
    x = y = 2
    d = 1
    f = lambda v: (v * v + c) % n
    while d == 1:
      # Brent-style batching keeps gcd calls rare
      q = 1
      xs = []
      for _ in range(64):
        x = f(x)
        y = f(f(y))
        q = q * abs(x - y) % n
        xs.append((x, y))
      d = math.gcd(q, n)
      if d == n:
        # backtrack one step at a time
        for x0, y0 in xs:
          d = math.gcd(abs(x0 - y0), n)
          if d > 1:
            break
    if 1 < d < n:
      return d
    c += 1


def factor_integer(n: int) -> dict:
  """Complete factorization of n as {prime: exponent}.

  Raises FactorizationTooLarge above the 64 digit guard.
  """
  n = abs(int(n))
  if n == 0:
    raise ArithmeticError_("cannot factor 0")
  if len(str(n)) > FACTOR_GUARD_DIGITS:
    raise FactorizationTooLarge("factorization too large: %d digits" % len(str(n)))
  out = {}
  for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
    while n % p == 0:
      out[p] = out.get(p, 0) + 1
      n //= p
  p = 41
  while p * p <= n and p < 10000:
    while n % p == 0:
      out[p] = out.get(p, 0) + 1
      n //= p
    p += 2
  stack = [n] if n > 1 else []
  while stack:
    m = stack.pop()
    if m == 1:
      continue
    if is_probable_prime(m):
      out[m] = out.get(m, 0) + 1
      continue
    r = math.isqrt(m)
    if r * r == m:
      stack += [r, r]
      continue
    d = _pollard_rho(m)
    stack += [d, m // d]
  return dict(sorted(out.items()))


def prime_factors(n):
  return list(factor_integer(n))


def primes_up_to(n):
  if n < 2:
    return []
  sieve = bytearray([1]) * (n + 1)
  sieve[0] = sieve[1] = 0
  for i in range(2, math.isqrt(n) + 1):
    if sieve[i]:
      sieve[i * i::i] = bytearray(len(range(i * i, n + 1, i)))
  return [i for i in range(n + 1) if sieve[i]]


def valuation(n, p):
  """p-adic valuation of a nonzero int or Fraction."""
  if isinstance(n, Fraction):
    return valuation(n.numerator, p) - valuation(n.denominator, p)
  if n == 0:
    raise ArithmeticError_("valuation of 0")
  v = 0
  while n % p == 0:
    n //= p
    v += 1
  return v


def is_squarefree(n):
  return all(e == 1 for e in factor_integer(n).values())


def is_square(n):
  if isinstance(n, Fraction):
    return is_square(n.numerator) and is_square(n.denominator)
  return n >= 0 and math.isqrt(n) ** 2 == n


def kronecker_symbol(a: int, n: int) -> int:
  """Kronecker symbol (a|n)."""
  if n == 0:
    return 1 if abs(a) == 1 else 0
  res = 1
  if n < 0:
    n = -n
    if a < 0:
      res = -res
  v = 0
  while n % 2 == 0:
    n //= 2
    v += 1
  if v:
    if a % 2 == 0:
      return 0
    if v % 2 and a % 8 in (3, 5):
      res = -res
  # Jacobi symbol (a|n), n odd positive
  a %= n
  while a:
    while a % 2 == 0:
      a //= 2
      if n % 8 in (3, 5):
        res = -res
    a, n = n, a
    if a % 4 == 3 and n % 4 == 3:
      res = -res
    a %= n
  return res if n == 1 else 0


def rational_kronecker(q, p):
  """Quadratic character at p of a nonzero rational (num times den)."""
  q = Fraction(q)
  return kronecker_symbol(q.numerator * q.denominator, p)


def crt(residues, moduli):
  x, m = 0, 1
  for r, n in zip(residues, moduli):
    t = ((r - x) * pow(m, -1, n)) % n
    x += m * t
    m *= n
  return x % m, m


# --------------------------------------------------------------------------
# polynomials over F_p


def _pmod(f, p):
  f = [c % p for c in f]
  while len(f) > 1 and f[-1] == 0:
    f.pop()
  return f


def _pdivmod(a, b, p):
  a = _pmod(a, p)
  b = _pmod(b, p)
  inv = pow(b[-1], -1, p)
  q = [0] * max(len(a) - len(b) + 1, 1)
  while len(a) >= len(b) and a != [0]:
    c = a[-1] * inv % p
    shift = len(a) - len(b)
    q[shift] = c
    for i, t in enumerate(b):
      a[shift + i] = (a[shift + i] - c * t) % p
    a.pop()
    while len(a) > 1 and a[-1] == 0:
      a.pop()
    if not a:
      a = [0]
  return q, a or [0]


def poly_gcd_mod_p(a, b, p):
  a, b = _pmod(a, p), _pmod(b, p)
  while b != [0]:
    a, b = b, _pdivmod(a, b, p)[1]
  inv = pow(a[-1], -1, p)
  return [c * inv % p for c in a]


def poly_powmod(base, e, f, p):
  """base^e mod (f, p)."""
  result = [1]
  base = _pdivmod(base, f, p)[1]
  while e:
    if e & 1:
      result = _pdivmod(poly_mul(result, base), f, p)[1]
    base = _pdivmod(poly_mul(base, base), f, p)[1]
    e >>= 1
  return result


def roots_mod_p(f, p):
  """Distinct roots of f in F_p, sorted."""
  f = _pmod(f, p)
  if f == [0]:
    return list(range(p))
  if len(f) == 1:
    return []
  if p < 200:
    return [s for s in range(p) if poly_eval(f, s) % p == 0]
  xp = poly_powmod([0, 1], p, f, p)
  g = poly_gcd_mod_p(f, [(xp[i] if i < len(xp) else 0) - (1 if i == 1 else 0)
                         for i in range(max(len(xp), 2))], p)
  out = []
  stack = [g]
  a = 1
  while stack:
    h = stack.pop()
    if len(h) == 1:
      continue
    if len(h) == 2:
      out.append((-h[0] * pow(h[1], -1, p)) % p)
      continue
    # Cantor-Zassenhaus split of a product of distinct linears
    while True:
      t = poly_powmod([a, 1], (p - 1) // 2, h, p)
      a += 1
      t = [(t[i] if i < len(t) else 0) - (1 if i == 0 else 0) for i in range(max(len(t), 1))]
      d = poly_gcd_mod_p(h, t, p)
      if 1 < len(d) < len(h):
        stack.append(d)
        stack.append(_pdivmod(h, d, p)[0])
        break
  return sorted(out)


def count_roots_mod_p(f, p):
  """Number of distinct roots of f mod p (degree of gcd with x^p - x)."""
  f = _pmod(f, p)
  if len(f) == 1:
    return 0 if f != [0] else p
  if p < 50:
    return sum(1 for s in range(p) if poly_eval(f, s) % p == 0)
  xp = poly_powmod([0, 1], p, f, p)
  h = [(xp[i] if i < len(xp) else 0) - (1 if i == 1 else 0) for i in range(max(len(xp), 2))]
  return len(poly_gcd_mod_p(f, h, p)) - 1


# --------------------------------------------------------------------------
# p-adic factorization of cubics


def poly_taylor_shift(f, a, s=1):
  """Coefficients of f(a + s*y) as a polynomial in y."""
  out = [0] * len(f)
  # Horner in the shifted variable
  for c in reversed(f):
    # out = out * (a + s y) + c
    new = [0] * len(f)
    for i, v in enumerate(out):
      if v:
        new[i] += v * a
        if i + 1 < len(new):
          new[i + 1] += v * s
    new[0] += c
    out = new
  return poly_trim(out)


def _content_val(g, p):
  vals = [valuation(c, p) for c in g if c]
  return min(vals) if vals else None


def _hensel_root(g, s, p, n):
  """Lift a simple root s of g mod p to a root mod p^n."""
  mod = p
  dg = poly_deriv(g)
  x = s % p
  while mod < p ** n:
    mod = min(mod * mod, p ** n)
    x = (x - poly_eval(g, x) * pow(poly_eval(dg, x), -1, mod)) % mod
  return x


def padic_roots(f, p, n, depth_guard=400):
  """All roots in Z_p of a squarefree monic integer polynomial, mod p^n.

  Returns a list of (approximation mod p^n, certified_precision) where the
  approximation is exact to at least n digits.
  """
  f = poly_trim(f)
  out = []
  # work list of (g, base, scale_exponent): roots are base + p^e * y, g(y) = 0
  work = [(f, 0, 0, 0)]
  while work:
    g, base, e, depth = work.pop()
    if depth > depth_guard:
      raise PrecisionError("p-adic root search exceeded depth guard")
    m = _content_val(g, p)
    if m:
      g = [c // p ** m for c in g]
    if len(g) == 1:
      continue
    dg = poly_deriv(g)
    for s in roots_mod_p(g, p):
      if poly_eval(dg, s) % p:
        need = max(n - e, 1)
        y = _hensel_root(g, s, p, need)
        out.append((base + p ** e * y) % p ** n)
      else:
        h = poly_taylor_shift(g, s, p)
        work.append((h, base + p ** e * s, e + 1, depth + 1))
  return sorted(out)


def _irreducible_cubic_ramification(f, p, guard=200):
  """(e, f) of Q_p[x]/(f) for a cubic known to be irreducible over Q_p."""
  g = poly_trim(f)
  for _ in range(guard):
    roots = roots_mod_p(g, p)
    if not roots:
      return 1, 3
    r = roots[0]
    h = poly_taylor_shift(g, r)
    v0 = valuation(h[0], p)
    if v0 % 3:
      return 3, 1
    k = v0 // 3
    # irreducible, so the Newton polygon has the single slope k
    g = [c * p ** (k * i) // p ** (3 * k) for i, c in enumerate(h)]
  raise PrecisionError("ramification recursion exceeded guard")


@dataclass(frozen=True)
class LocalFactor:
  """One irreducible factor of F over Q_p."""
  degree: int
  e: int
  f: int
  poly_mod: tuple  # coefficients mod p^k, constant first

  def as_dict(self):
    return {"degree": self.degree, "e": self.e, "f": self.f}


@dataclass(frozen=True)
class LocalFactorization:
  p: int
  precision: int
  shape: str
  factors: tuple
  congruent_pairs: tuple = ()

  @property
  def is_irreducible(self):
    return len(self.factors) == 1

  def ef(self):
    return [(fa.e, fa.f) for fa in self.factors]


def _quadratic_class(D, p):
  """'split', 'unramified' or 'ramified' for Q_p(sqrt(D)), D a nonzero int or Fraction."""
  D = Fraction(D)
  v = valuation(D, p)
  if v % 2:
    return "ramified"
  u = D / Fraction(p) ** v
  if p == 2:
    r = (u.numerator * pow(u.denominator, -1, 8)) % 8
    return {1: "split", 5: "unramified"}.get(r, "ramified")
  r = (u.numerator * pow(u.denominator, -1, p)) % p
  return "split" if kronecker_symbol(r, p) == 1 else "unramified"


def cubic_factorization_mod_p(F, p, k=None):
  """Factorization shape of a monic cubic over Q_p with factors mod p^k.

  Shapes: 'three_linear', 'linear_quadratic_unramified',
  'linear_quadratic_ramified', 'irreducible_unramified',
  'irreducible_ramified'.

  Raises:
    PrecisionError: k too small to separate distinct roots.
  """
  F = check_monic_cubic(F)
  D = poly_disc(F)
  if D == 0:
    raise ArithmeticError_("cubic is not squarefree")
  vd = valuation(D, p)
  if k is None:
    k = vd + 5
  if k < 1:
    raise ArithmeticError_("precision must be >= 1")
  work = max(k, vd + 2) + 2
  roots = padic_roots(F, p, work)
  mod_k = p ** k
  if len(roots) == 3:
    red = [r % mod_k for r in roots]
    if len(set(red)) < 3:
      raise PrecisionError("raise precision: roots agree mod p^%d" % k)
    pairs = tuple((i, j) for i in range(3) for j in range(i + 1, 3)
                  if (roots[i] - roots[j]) % p == 0)
    facs = tuple(LocalFactor(1, 1, 1, ((-r) % mod_k, 1)) for r in red)
    return LocalFactorization(p, k, "three_linear", facs, pairs)
  if len(roots) == 1:
    r = roots[0]
    modw = p ** work
    # synthetic division F = (x - r) q
    a0, a1, a2, _ = F
    q1 = (a2 + r) % modw
    q0 = (a1 + r * q1) % modw
    dfr = poly_eval(poly_deriv(F), r) % modw
    if dfr == 0:
      raise PrecisionError("raise precision: derivative vanishes to working precision")
    vf = valuation(dfr, p)
    if 2 * vf >= work - 1:
      raise PrecisionError("raise precision")
    # disc(q) = D / F'(r)^2 ; only its square class matters
    if work - vf < 4:
      raise PrecisionError("raise precision")
    kind = _quadratic_class(Fraction(D, dfr * dfr), p)
    if kind == "split":
      raise PrecisionError("inconsistent local data: quadratic factor splits")
    e2, f2 = (2, 1) if kind == "ramified" else (1, 2)
    facs = (LocalFactor(1, 1, 1, ((-r) % mod_k, 1)),
            LocalFactor(2, e2, f2, (q0 % mod_k, q1 % mod_k, 1)))
    return LocalFactorization(p, k, "linear_quadratic_" + kind, facs)
  if roots:
    raise ArithmeticError_("unexpected root count")
  e, f = _irreducible_cubic_ramification(F, p)
  shape = "irreducible_unramified" if f == 3 else "irreducible_ramified"
  return LocalFactorization(p, k, shape, (LocalFactor(3, e, f, tuple(c % mod_k for c in F)),))
