"""Slow independent checks for class groups and units.

These are used by the test-suite and by ``selftest``; they avoid the
relation machinery entirely.

* Class group: enumerate every integral ideal of norm up to the Minkowski
  bound, sort them into classes by pairwise principality, and read off the
  group structure from the element orders of the class multiplication table.
* Principality: one unweighted short vector enumeration with a bound derived
  from the unit lattice (no grid search).
* Units: box search for small units, and an Euler product estimate of h*R.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter

from . import exact_arith as ea
from .class_units import ideal_inverse, unit_group
from .cubic_field import Ideal, ideal_mul
from .lattice import reduce_rows, short_vectors


def all_ideals_up_to(K, bound):
  """Every integral ideal of norm <= bound (as products of prime ideals)."""
  primes = []
  for p in ea.primes_up_to(bound):
    for P in K.factor_prime(p):
      if P.norm <= bound:
        primes.append(P)
  out = [(K.unit_ideal(), 1)]
  for P in primes:
    new = []
    for I, n in out:
      J, m = I, n
      while m * P.norm <= bound:
        J = ideal_mul(J, P.ideal)
        m *= P.norm
        new.append((J, m))
    out += new
  return [I for I, _ in out]


def principal_generator_bruteforce(K, I, ug=None):
  """Generator of I by enumeration, or None.

  Some generator has |log|s_i(a)| - log(N)/3| <= S after multiplying by a
  unit; when that box is small enough it is enumerated unweighted, otherwise
  the fundamental domain of the unit logs is tiled by weighted boxes.
  """
  if ug is None:
    ug = unit_group(K)
  N = int(I.norm)
  if N == 1:
    return K.element(1)
  S = sum(max(abs(t) for t in v) for v in ug.log_vectors) / 2
  if S < 4:
    bound = 3 * math.exp(2 * S) * N ** (2.0 / 3.0) * 1.01
    try:
      for x in short_vectors(K, [list(r) for r in I.H], None, bound, limit=10 ** 6):
        a = K.from_omega(x)
        if abs(a.norm()) == N:
          return a
      return None
    except OverflowError:
      pass
  return _weighted_search(K, I, ug, N)


def _weighted_search(K, I, ug, N, half=0.5):
  logs = [[float(t) for t in v] for v in ug.log_vectors]
  r = len(logs)
  counts = [max(1, math.ceil(r * max(abs(t) for t in l) / half)) for l in logs]
  bound = 3 * math.exp(2 * half) * N ** (2.0 / 3.0) * 1.01
  rows = [list(x) for x in I.H]
  prev = {}
  for idx in itertools.product(*[range(c) for c in counts]):
    t = [(i + 0.5) / c for i, c in zip(idx, counts)]
    w = [-sum(t[j] * logs[j][i] for j in range(r)) for i in range(len(logs[0]))]
    start = rows
    for k in range(r - 1, -1, -1):
      if idx[k]:
        start = prev[idx[:k] + (idx[k] - 1,) + idx[k + 1:]]
        break
    red = reduce_rows(K, start, w)
    prev[idx] = red
    for x in short_vectors(K, red, w, bound):
      a = K.from_omega(x)
      if abs(a.norm()) == N:
        return a
  return None


def class_group_bruteforce(K):
  """Elementary divisors of Cl(K) from ideal enumeration."""
  ug = unit_group(K)
  ideals = all_ideals_up_to(K, K.minkowski_bound())
  reps = []  # (ideal, integral inverse-class ideal)

  def integral_inverse(I):
    J = ideal_inverse(K, I)
    n = int(I.norm)
    return Ideal(K, [[x * n // J.den for x in r] for r in J.H], 1) if n % J.den == 0 else None

  def same_class(inv_a, b):
    return principal_generator_bruteforce(K, ideal_mul(inv_a, b), ug) is not None

  for I in ideals:
    if not any(same_class(r[1], I) for r in reps):
      reps.append((I, integral_inverse(I)))
  h = len(reps)

  def class_of(I):
    for k, (_, inv) in enumerate(reps):
      if same_class(inv, I):
        return k
    raise AssertionError("ideal outside all classes")

  # element orders by repeated multiplication of class representatives
  orders = Counter()
  for I, _ in reps:
    J, n = I, 1
    while class_of(J) != 0:
      J = reps[class_of(ideal_mul(J, I))][0]
      n += 1
      if n > h:
        raise AssertionError("order exceeds class number")
    orders[n] += 1
  return invariants_from_orders(h, orders)


def invariants_from_orders(h, orders):
  """Elementary divisors of an abelian group of order h from its element orders."""
  chains = []
  for p, e in sorted(ea.factor_integer(h).items()) if h > 1 else []:
    # c_k = #{g : p^k g = 0} = p^(sum_i min(k, e_i))
    c = [sum(m for o, m in orders.items() if (p ** k) % o == 0) for k in range(e + 1)]
    ge = [round(math.log(c[k] // c[k - 1], p)) for k in range(1, e + 1)]
    exps = []
    for k in range(e):
      nxt = ge[k + 1] if k + 1 < e else 0
      exps += [k + 1] * (ge[k] - nxt)
    chains.append(sorted(p ** x for x in exps))
  n = max((len(x) for x in chains), default=0)
  out = []
  for i in range(n):
    d = 1
    for x in chains:
      j = len(x) - n + i
      if j >= 0:
        d *= x[j]
    out.append(d)
  return out


def box_units(K, bound):
  """All units with omega coordinates in [-bound, bound]^3 (up to sign)."""
  out = []
  r = range(-bound, bound + 1)
  for a in r:
    for b in r:
      for c in r:
        if (a, b, c) <= (0, 0, 0):
          continue
        u = K.from_omega([a, b, c])
        if abs(u.norm()) == 1:
          out.append(u)
  return out


def analytic_hr(K, X=20000):
  """Euler product estimate of h*R (truncated at primes <= X)."""
  res = 1.0
  D = K.field_disc
  for p in ea.primes_up_to(X):
    if D % p == 0 or K.index % p == 0:
      local = 1.0
      for P in K.factor_prime(p):
        local *= 1 - 1.0 / P.norm
    else:
      r = ea.count_roots_mod_p(list(K.F), p)
      if r == 3:
        local = (1 - 1.0 / p) ** 3
      elif r == 1:
        local = (1 - 1.0 / p) * (1 - 1.0 / p ** 2)
      else:
        local = 1 - 1.0 / p ** 3
    res *= (1 - 1.0 / p) / local
  r1, r2 = K.signature
  return res * 2 * math.sqrt(abs(D)) / (2 ** r1 * (2 * math.pi) ** r2)


def units_agree(K, ug, box=3, tol=0.02):
  """Box units lie in the computed unit group and h*R matches the Euler product."""
  from .class_units import _log_coords, _solve_small, class_group
  B = [[float(t) for t in _log_coords(K, u)] for u in ug.fundamental_units]
  for u in box_units(K, box):
    lu = [float(t) for t in _log_coords(K, u)]
    if all(abs(t) < 1e-9 for t in lu):
      continue
    x = _solve_small(B, lu)
    if any(abs(t - round(t)) > 1e-6 for t in x):
      return False
  h = class_group(K).order
  return abs(analytic_hr(K) / (h * ug.regulator) - 1) < tol
