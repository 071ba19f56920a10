"""Units, class group and narrow class group of a cubic field.

Relations come from short elements of weighted T2 lattices (O itself and
the prime ideals of the factor base).  Units come from pairs of short
elements generating the same principal ideal, followed by saturation.
Principality is decided by a grid search over a fundamental domain of the
unit lattice, which also certifies the class group.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import exact_arith as ea
from .cubic_field import CubicField, Ideal, ideal_mul
from .lattice import embed_rows, reduce_rows, short_vectors
from .linalg import det_bareiss, hnf, hnf_with_transform, left_kernel_mod_p, snf


class ClassGroupError(RuntimeError):
  """Relation search or certification failed within its budget."""


# --------------------------------------------------------------------------
# finite abelian groups


@dataclass
class AbelianGroupPresentation:
  """Z^n / L presented through an SNF.

  ``generators`` are labels (prime ideals, sign symbols); ``invariants`` the
  elementary divisors > 1 in divisibility order.
  """
  generators: list
  invariants: list
  rep: list  # per generator: vector over essential generators
  V: list  # essential -> SNF coordinates (columns restricted to invariants)
  Vinv: list  # rows: SNF generator k as vector over essential generators
  essential: list
  certified: bool = True
  relations: list = field(default_factory=list)

  @classmethod
  def from_relations(cls, generators, rows, modulus, certified=True):
    n = len(generators)
    if n == 0:
      return cls(generators, [], [], [], [], [], certified, [])
    H = hnf(rows, n, modulus)
    if len(H) != n:
      raise ClassGroupError("relations do not have full rank")
    ess = [i for i in range(n) if H[i][i] > 1]
    pos = {i: k for k, i in enumerate(ess)}
    m = len(ess)
    rep = [None] * n
    for i in range(n - 1, -1, -1):
      if i in pos:
        v = [0] * m
        v[pos[i]] = 1
        rep[i] = v
      else:
        v = [0] * m
        for j in range(i + 1, n):
          c = H[i][j]
          if c:
            for t in range(m):
              v[t] -= c * rep[j][t]
        rep[i] = [x % modulus for x in v] if modulus else v
    R = []
    for i in ess:
      v = [0] * m
      for j in range(i, n):
        c = H[i][j]
        if c:
          for t in range(m):
            v[t] += c * rep[j][t]
      R.append(v)
    if m == 0:
      return cls(generators, [], rep, [], [], [], certified, H)
    D, U, Vm = snf(R)
    keep = [k for k in range(m) if D[k] != 1]
    invariants = [D[k] for k in keep]
    V = [[Vm[i][k] for k in keep] for i in range(m)]
    Vi = _unimodular_inverse(Vm)
    Vinv = [Vi[k] for k in keep]
    return cls(generators, invariants, rep, V, Vinv, ess, certified, H)

  @property
  def order(self):
    return math.prod(self.invariants)

  def elementary_divisors(self):
    return list(self.invariants)

  def two_rank(self):
    return two_rank(self)

  def dlog(self, vec):
    """SNF coordinates of the class of an integer vector over the generators."""
    m = len(self.essential)
    x = [0] * m
    for c, r in zip(vec, self.rep):
      if c:
        for t in range(m):
          x[t] += c * r[t]
    out = []
    for k, d in enumerate(self.invariants):
      s = sum(x[t] * self.V[t][k] for t in range(m))
      out.append(s % d)
    return tuple(out)

  def is_trivial(self, vec):
    return not any(self.dlog(vec))

  def generator_vector(self, k):
    """Vector over the original generators representing SNF generator k."""
    v = [0] * len(self.generators)
    for t, i in enumerate(self.essential):
      v[i] = self.Vinv[k][t]
    return v

  def describe(self):
    if not self.invariants:
      return "trivial"
    return " x ".join("Z/%d" % d for d in self.invariants)


def _unimodular_inverse(V):
  n = len(V)
  A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(V)]
  for c in range(n):
    k = next(i for i in range(c, n) if A[i][c] != 0)
    A[c], A[k] = A[k], A[c]
    piv = A[c][c]
    A[c] = [x / piv for x in A[c]]
    for i in range(n):
      if i != c and A[i][c] != 0:
        f = A[i][c]
        A[i] = [x - f * y for x, y in zip(A[i], A[c])]
  return [[int(x) for x in row[n:]] for row in A]


def two_rank(G) -> int:
  """Number of even elementary divisors."""
  return sum(1 for d in G.invariants if d % 2 == 0)


# --------------------------------------------------------------------------
# units


@dataclass
class UnitGroup:
  """Torsion {+-1} times the free part generated by ``fundamental_units``."""
  fundamental_units: list
  torsion: tuple
  unit_signatures: list  # F2 rows for -1 then each fundamental unit
  regulator: float
  certified: bool
  log_vectors: list = field(default_factory=list)

  @property
  def rank(self):
    return len(self.fundamental_units)

  def generators(self):
    K = self.fundamental_units[0].K if self.fundamental_units else None
    return [K.element(-1)] + list(self.fundamental_units)


def _log_coords(K, u, dps=30):
  """Trace-zero log coordinates used for the unit lattice (length r1+r2-1)."""
  lv = K.log_embedding(u, dps)
  if K.r1 == 3:
    return [lv[0], lv[1]]
  return [lv[0]]


def _log_vector_full(K, u, dps=30):
  """Log vector with one entry per place (complex place unweighted)."""
  return K.log_embedding(u, dps)


def _solve_small(B, y):
  """Solve x * B = y for square mpmath/float B (rows) of size 1 or 2."""
  n = len(B)
  if n == 1:
    return [y[0] / B[0][0]]
  det = B[0][0] * B[1][1] - B[0][1] * B[1][0]
  x0 = (y[0] * B[1][1] - y[1] * B[1][0]) / det
  x1 = (B[0][0] * y[1] - B[0][1] * y[0]) / det
  return [x0, x1]


def _det_small(B):
  if len(B) == 1:
    return B[0][0]
  return B[0][0] * B[1][1] - B[0][1] * B[1][0]


class _UnitLattice:
  """Exact units with their log coordinates; maintains a reduced basis."""

  def __init__(self, K):
    self.K = K
    self.rank = K.r1 + (1 if K.r1 == 1 else 0) - 1
    self.basis = []
    self.logs = []

  def regulator(self):
    if len(self.basis) < self.rank:
      return None
    return abs(_det_small(self.logs))

  def add(self, u):
    K = self.K
    lu = _log_coords(K, u)
    if all(abs(x) < 1e-12 for x in lu):
      return False
    if len(self.basis) < self.rank:
      # independent of current basis?
      if not self.basis or abs(_det_small(self.logs + [lu])) > 1e-8:
        self.basis.append(u)
        self.logs.append(lu)
        if len(self.basis) == self.rank:
          self._reduce()
        return True
      # dependent on a rank-1 partial basis: fold in via gcd
      x = lu[0] / self.logs[0][0]
      if abs(x - round(x)) < 1e-8:
        return False
      return self._merge([x], u)
    x = _solve_small(self.logs, lu)
    if all(abs(t - round(t)) < 1e-8 for t in x):
      return False
    return self._merge(x, u)

  def _merge(self, x, u):
    K = self.K
    fr = [Fraction(float(t)).limit_denominator(10 ** 6) for t in x]
    den = 1
    for f in fr:
      den = den * f.denominator // math.gcd(den, f.denominator)
    r = len(fr)
    gens = list(self.basis[:r]) + [u]
    rows = [[den * int(i == j) for j in range(r)] for i in range(r)] + [[int(f * den) for f in fr]]
    H, U = hnf_with_transform(rows)
    newb = []
    for k in range(r):
      acc = K.element(1)
      for g, e in zip(gens, U[k]):
        if e:
          acc = acc * g ** e
      newb.append(acc)
    # the zero row must give a torsion unit; sanity check numerically
    self.basis = newb + self.basis[r:]
    self.logs = [_log_coords(K, b) for b in self.basis]
    self._reduce()
    return True

  def _reduce(self):
    """Gauss reduction of the log basis (rank 2), exact on the units."""
    K = self.K
    if len(self.basis) == 1:
      if self.logs[0][0] < 0:
        self.basis[0] = self.basis[0].inverse()
        self.logs[0] = [-t for t in self.logs[0]]
      return
    if len(self.basis) != 2:
      return
    for _ in range(200):
      n0 = sum(t * t for t in self.logs[0])
      n1 = sum(t * t for t in self.logs[1])
      if n1 < n0:
        self.basis.reverse()
        self.logs.reverse()
        n0, n1 = n1, n0
      dot = sum(a * b for a, b in zip(self.logs[0], self.logs[1]))
      q = int(mpmath.nint(dot / n0))
      if q == 0:
        break
      self.basis[1] = self.basis[1] * self.basis[0] ** (-q)
      self.logs[1] = _log_coords(K, self.basis[1])

  def known_float(self, d):
    """True if the float log vector d lies in the current lattice."""
    if all(abs(t) < 1e-6 for t in d):
      return True
    if not self.basis:
      return False
    if len(self.basis) < self.rank:
      b = [float(t) for t in self.logs[0]]
      x = d[0] / b[0]
      return abs(x - round(x)) < 1e-5 and abs(d[1] - x * b[1]) < 1e-5
    B = [[float(t) for t in r] for r in self.logs]
    x = _solve_small(B, d)
    return all(abs(t - round(t)) < 1e-5 for t in x)

  def contains(self, u):
    lu = _log_coords(self.K, u)
    if len(self.basis) < self.rank:
      return False
    x = _solve_small(self.logs, lu)
    return all(abs(t - round(t)) < 1e-8 for t in x)


def _weight_from_plane(K, coords):
  """Weight vector per place from coordinates on the trace-zero subspace."""
  if K.r1 == 3:
    a, b = coords
    e1 = (1 / math.sqrt(2), -1 / math.sqrt(2), 0.0)
    e2 = (1 / math.sqrt(6), 1 / math.sqrt(6), -2 / math.sqrt(6))
    return [a * e1[i] + b * e2[i] for i in range(3)]
  t = coords[0]
  return [t, -t / 2]


def _grid_ring(dim, k):
  """Integer grid points at Chebyshev radius exactly k."""
  if k == 0:
    return [(0,) * dim]
  if dim == 1:
    return [(k,), (-k,)]
  pts = []
  for i in range(-k, k + 1):
    pts += [(i, -k), (i, k)]
  for j in range(-k + 1, k):
    pts += [(-k, j), (k, j)]
  return pts


def _toward_origin(pt):
  return tuple(c - (c > 0) + (c < 0) for c in pt)


def _ideal_key(K, x):
  """HNF of the principal ideal of an integral omega-vector (integer only)."""
  M = [K.omul(x, K.e(i)) for i in range(3)]
  n = abs(det_bareiss(M))
  return tuple(tuple(r) for r in hnf(M, 3, n))


def _float_logs(K, x):
  """log|sigma_i(x)| per place from float embeddings (complex place once)."""
  v = embed_rows(K, [x])[0]
  size = max(abs(t) for t in x) * 1e-7
  if K.r1 == 3:
    if min(abs(t) for t in v) > size:
      return [math.log(abs(t)) for t in v]
  elif abs(v[0]) > size and abs(v[1]) + abs(v[2]) > size:
    return [math.log(abs(v[0])), 0.5 * math.log((v[1] * v[1] + v[2] * v[2]) / 2)]
  # cancellation: fall back to high precision
  return [float(t) for t in K.log_embedding(K.from_omega(x), 30)]


def find_units(K, step=0.45, max_points=60000):
  """Walk through weighted-reduced elements of O and collect unit collisions.

  Two reduced elements generating the same principal ideal differ by a unit.
  The walk covers a growing square in the trace-zero weight plane and stops
  once the square is several times larger than the regulator found so far.
  """
  lat = _UnitLattice(K)
  dim = lat.rank
  seen = {}
  start = {}
  points = 0
  k = 0
  last_change_radius = 0.0
  while True:
    for pt in _grid_ring(dim, k):
      w = _weight_from_plane(K, [step * c for c in pt])
      # warm start from the neighbouring point one step closer to the origin
      prev = start.get(_toward_origin(pt)) if k else None
      rows = reduce_rows(K, prev or [K.e(0), K.e(1), K.e(2)], w)
      start[pt] = rows
      points += 1
      for x in rows[:2]:
        key = _ideal_key(K, x)
        y = seen.get(key)
        if y is None:
          seen[key] = (x, _float_logs(K, x))
          continue
        if y[0] == x or [-t for t in y[0]] == x:
          continue
        lx = _float_logs(K, x)
        d = [a - b for a, b in zip(lx, y[1])][:dim]
        if lat.known_float(d):
          continue
        u = K.from_omega(x) / K.from_omega(y[0])
        if lat.add(u):
          last_change_radius = k * step
    k += 1
    radius = k * step
    reg = lat.regulator()
    if reg is not None:
      # covered area must comfortably exceed a fundamental domain
      area = (2 * radius) ** dim
      if area > 3 * float(reg) + 4 and radius > last_change_radius + 1.5:
        break
    if points > max_points:
      raise ClassGroupError("unit search exceeded its budget")
  return lat


def nth_root(K, x, n):
  """Exact n-th root of an integral element x, or None."""
  if x.is_zero():
    return None
  if K.r1 == 3 and n % 2 == 0:
    if any(s < 0 for s in K.signature_of(x)):
      return None
  if K.r1 == 1 and n % 2 == 0 and K.sign_at(x, 0) < 0:
    return None
  digits = len(str(x.height()))
  dps = 30 + digits
  emb = K.embeddings(x, dps)
  roots = K.roots_mp(dps + 2 * digits + 10)
  with mpmath.workdps(dps + 10):
    cand_lists = []
    for i in range(K.r1):
      v = emb[i]
      r = mpmath.root(abs(v), n)
      if n % 2 == 0:
        cand_lists.append([r, -r])
      else:
        cand_lists.append([r if v > 0 else -r])
    if K.r1 == 1:
      z = emb[1]
      r0 = mpmath.root(z, n)
      cand_lists.append([r0 * mpmath.exp(2j * mpmath.pi * k / n) for k in range(n)])
    # omega embeddings at this precision
    om = []
    for w in K._omega_elems:
      om.append([(w.c[0] + w.c[1] * t + w.c[2] * t * t) / w.d for t in roots])
    M = []
    for j in range(3):
      if K.r1 == 3:
        M.append([om[j][0], om[j][1], om[j][2]])
      else:
        M.append([om[j][0], mpmath.re(om[j][1]), mpmath.im(om[j][1])])
    Mt = mpmath.matrix([[M[j][i] for j in range(3)] for i in range(3)])
    for combo in itertools.product(*cand_lists):
      if K.r1 == 3:
        rhs = mpmath.matrix([combo[0], combo[1], combo[2]])
      else:
        rhs = mpmath.matrix([combo[0], mpmath.re(combo[1]), mpmath.im(combo[1])])
      try:
        sol = mpmath.lu_solve(Mt, rhs)
      except ZeroDivisionError:
        continue
      c = [int(mpmath.nint(sol[i])) for i in range(3)]
      if any(abs(sol[i] - c[i]) > 0.01 for i in range(3)):
        continue
      y = K.from_omega(c)
      if y ** n == x:
        return y
  return None


def _degree_one_chars(K, ell, count, skip):
  """Degree one primes q = 1 mod ell with the reduction map omega -> F_q."""
  out = []
  q = 2 * ell + 1
  while len(out) < count and q < 10 ** 6:
    if ea.is_probable_prime(q) and (q - 1) % ell == 0 and K.index % q and skip % q:
      for r in ea.roots_mod_p(list(K.F), q):
        D = K.ib_den
        img = []
        for row in K.ib_num:
          img.append((row[0] + row[1] * r + row[2] * r * r) * pow(D, -1, q) % q)
        out.append((q, img))
        if len(out) >= count:
          break
    q += 2 * ell if ell > 2 else 2
    if ell == 2 and q % 2 == 0:
      q += 1
  return out


def _char_value(x_omega, q, img, ell):
  """Discrete log mod ell of the ell-th power residue class of x mod q."""
  v = sum(a * b for a, b in zip(x_omega, img)) % q
  if v == 0:
    return None
  t = pow(v, (q - 1) // ell, q)
  # find k with t = g^((q-1)/ell * k) for a fixed generator g
  g = _prim_root(q)
  z = pow(g, (q - 1) // ell, q)
  acc = 1
  for k in range(ell):
    if acc == t:
      return k
    acc = acc * z % q
  raise ArithmeticError("character evaluation failed")


_PRIM = {}


def _prim_root(q):
  if q in _PRIM:
    return _PRIM[q]
  fac = ea.factor_integer(q - 1)
  for g in range(2, q):
    if all(pow(g, (q - 1) // p, q) != 1 for p in fac):
      _PRIM[q] = g
      return g
  raise ArithmeticError("no primitive root")


def _omega_int(K, u):
  x = K.to_omega(u)
  if any(t.denominator != 1 for t in x):
    raise ArithmeticError("unit is not integral")
  return [int(t) for t in x]


def saturate(K, units, primes=(2, 3, 5, 7)):
  """p-saturate a list of independent units; returns (units, changed_flag)."""
  units = list(units)
  changed = False
  for ell in primes:
    for _ in range(20):
      gens = ([K.element(-1)] if ell == 2 else []) + units
      chars = _degree_one_chars(K, ell, 24 + 4 * len(gens), 1)
      M = []
      for g in gens:
        gx = _omega_int(K, g)
        M.append([_char_value(gx, q, img, ell) for q, img in chars])
      ker = left_kernel_mod_p(M, ell)
      found = False
      off = 1 if ell == 2 else 0
      # every nonzero kernel vector up to scaling; kernels are tiny here
      for coeffs in itertools.product(range(ell), repeat=len(ker)):
        if not any(coeffs) or coeffs[next(i for i, c in enumerate(coeffs) if c)] != 1:
          continue
        vec = [sum(c * v[i] for c, v in zip(coeffs, ker)) % ell for i in range(len(gens))]
        j = next((i for i in range(off, len(gens)) if vec[i]), None)
        if j is None:
          continue
        inv = pow(vec[j], -1, ell)
        vec = [(v * inv) % ell for v in vec]
        x = K.element(1)
        for g, e in zip(gens, vec):
          if e:
            x = x * g ** e
        y = nth_root(K, x, ell)
        if y is None:
          continue
        units[j - off] = y
        changed = found = True
        break
      if not found:
        break
  return units, changed


def _box_units(K, B):
  out = []
  rng = range(-B, B + 1)
  for a in rng:
    for b in rng:
      for c in rng:
        if (a, b, c) == (0, 0, 0):
          continue
        n = K.from_omega([a, b, c]).norm()
        if abs(n) == 1:
          out.append(K.from_omega([a, b, c]))
  return out


def unit_group(K: CubicField) -> UnitGroup:
  cache = K.__dict__.get("_unit_group")
  if cache is not None:
    return cache
  lat = find_units(K)
  units = list(lat.basis)
  units, changed = saturate(K, units)
  lat2 = _UnitLattice(K)
  for u in units:
    lat2.add(u)
  units = lat2.basis
  certified = True
  # cross-check: every small unit lies in the lattice
  for u in _box_units(K, 3):
    if not lat2.contains(u) and not all(abs(t) < 1e-12 for t in _log_coords(K, u)):
      certified = False
  for u in units:
    if abs(u.norm()) != 1 or not K.is_integral(u):
      raise ClassGroupError("non-unit in unit basis")
  sigs = [[-1] * K.r1] + [list(K.signature_of(u)) for u in units]
  sig_bits = [[int(s < 0) for s in row] for row in sigs]
  reg = float(abs(_det_small(lat2.logs))) if units else 1.0
  logs = [[float(t) for t in _log_vector_full(K, u)] for u in units]
  ug = UnitGroup(units, (1, -1), sig_bits, reg, certified, logs)
  K.__dict__["_unit_group"] = ug
  return ug


# --------------------------------------------------------------------------
# principality


def _unit_log_basis(K, ug):
  """Per-place log vectors of the fundamental units (complex place unweighted)."""
  return [[float(t) for t in v] for v in ug.log_vectors]


def find_generator(K, I: Ideal, delta=0.75, ug=None):
  """A generator of the principal ideal I, or None if I is not principal."""
  if ug is None:
    ug = unit_group(K)
  den = I.den
  J = Ideal(K, [list(r) for r in I.H], 1)
  N = J.norm
  if N == 1:
    g = K.element(1)
    return g / den if den != 1 else g
  logs = _unit_log_basis(K, ug)
  r = len(logs)
  # grid over the fundamental parallelepiped of the unit log lattice
  counts = []
  for l in logs:
    m = max(abs(t) for t in l)
    counts.append(max(1, math.ceil(r * m / (2 * delta))))
  bound = 3 * math.exp(2 * delta) * float(N) ** (2.0 / 3.0)
  base = reduce_rows(K, [list(x) for x in J.H], None)
  reduced = {}
  tried = set()
  for idx in itertools.product(*[range(c) for c in counts]):
    t = [(i + 0.5) / c for i, c in zip(idx, counts)]
    g = [sum(t[j] * logs[j][i] for j in range(r)) for i in range(len(logs[0]))]
    w = [-x for x in g]
    # warm start from an already reduced neighbour so large weights stay well conditioned
    prev = base
    for k in range(r - 1, -1, -1):
      if idx[k]:
        prev = reduced[idx[:k] + (idx[k] - 1,) + idx[k + 1:]]
        break
    rows = reduce_rows(K, prev, w)
    reduced[idx] = rows
    for x in short_vectors(K, rows, w, bound):
      xt = tuple(x)
      if xt in tried:
        continue
      tried.add(xt)
      a = K.from_omega(x)
      if abs(a.norm()) == N:
        return a / den if den != 1 else a
  return None


def is_principal(K, I, ug=None):
  return find_generator(K, I, ug=ug)


# --------------------------------------------------------------------------
# class group


class ClassGroupData:
  """Factor base, relations and presentations of Cl and Cl_+ for one field."""

  def __init__(self, K: CubicField, seed=1, certify=True):
    self.K = K
    self.rng = random.Random(seed)
    self.M = K.minkowski_bound()
    self.fb = []
    for p in ea.primes_up_to(max(self.M, 1)):
      self.fb.extend(K.factor_prime(p))
    self.fb.sort(key=lambda P: (P.norm, P.p, P.ideal.H))
    self.index = {P.key(): i for i, P in enumerate(self.fb)}
    self.by_p = {}
    for i, P in enumerate(self.fb):
      self.by_p.setdefault(P.p, []).append(i)
    self.small_bound = min(self.M, 60)
    self.small = [i for i, P in enumerate(self.fb) if P.norm <= self.small_bound]
    self.spos = {i: k for k, i in enumerate(self.small)}
    self.nsmall = len(self.small)
    self.r1 = K.r1
    self.subst = {}  # fb index -> vector over small + sign columns
    self.relations = []  # vectors over small + sign columns
    self.rel_elems = []
    self.units = unit_group(K)
    self.certification = "none"
    self._build_substitutions()
    self._collect_relations()
    self.cl = None
    self._compute_groups(certify)

  # -- factoring

  def factor_element(self, y):
    """FB exponent dict of the principal ideal of integral omega-vector y, or None."""
    K = self.K
    n = abs(K.from_omega(y).norm())
    n = int(n)
    if n == 0:
      return None
    out = {}
    for p, idxs in self.by_p.items():
      if n % p:
        continue
      vp = 0
      while n % p == 0:
        n //= p
        vp += 1
      if len(idxs) == 1:
        P = self.fb[idxs[0]]
        out[idxs[0]] = vp // P.f
        continue
      acc = 0
      for i in idxs[:-1]:
        v = self.fb[i].valuation_int(y)
        if v:
          out[i] = v
        acc += self.fb[i].f * v
      last = self.fb[idxs[-1]]
      rest = vp - acc
      if rest % last.f:
        raise ClassGroupError("inconsistent factorization")
      if rest:
        out[idxs[-1]] = rest // last.f
      if len(self.K.factor_prime(p)) != len(idxs):
        raise ClassGroupError("factor base incomplete above %d" % p)
    if n != 1:
      return None
    return out

  def sign_bits(self, y):
    a = self.K.from_omega(y)
    return [int(s < 0) for s in self.K.signature_of(a)]

  def _vec_from_factors(self, fac, sbits):
    """Vector over small + sign columns of (alpha) given factor dict and signs."""
    ns = self.nsmall
    v = [0] * (ns + self.r1)
    for i, e in fac.items():
      if i in self.spos:
        v[self.spos[i]] += e
      else:
        sv = self.subst[i]
        for k in range(ns + self.r1):
          v[k] += e * sv[k]
    for k in range(self.r1):
      v[ns + k] += sbits[k]
    return v

  # -- substitutions for large primes

  def _candidates_in(self, rows, tries):
    K = self.K
    rows = reduce_rows(K, rows, None)
    seen = set()
    for c in _small_combos(tries):
      x = [sum(c[i] * rows[i][j] for i in range(3)) for j in range(3)]
      if not any(x) or tuple(x) in seen:
        continue
      seen.add(tuple(x))
      yield x
    for _ in range(tries):
      w = self._random_weight(1.5)
      rr = reduce_rows(K, rows, w)
      for x in rr:
        if tuple(x) not in seen:
          seen.add(tuple(x))
          yield x

  def _random_weight(self, scale):
    K = self.K
    if K.r1 == 3:
      return _weight_from_plane(K, (self.rng.uniform(-scale, scale), self.rng.uniform(-scale, scale)))
    return _weight_from_plane(K, (self.rng.uniform(-scale, scale),))

  def _build_substitutions(self):
    ns = self.nsmall
    for i, P in enumerate(self.fb):
      if i in self.spos:
        continue
      done = False
      for x in self._candidates_in([list(r) for r in P.ideal.H], 400):
        fac = self.factor_element(x)
        if fac is None or fac.get(i, 0) != 1:
          continue
        if any(j >= i and j != i for j in fac) or any(j > i for j in fac):
          continue
        # (x) = P * J with J over earlier primes
        rest = dict(fac)
        del rest[i]
        vJ = self._vec_from_factors(rest, [0] * self.r1)
        sb = self.sign_bits(x)
        self.subst[i] = [-a for a in vJ[:ns]] + [(-vJ[ns + k] + sb[k]) % 2 for k in range(self.r1)]
        done = True
        break
      if not done:
        raise ClassGroupError("could not express prime of norm %d through smaller primes" % P.norm)

  # -- relations among small primes

  def _add_relation(self, x):
    fac = self.factor_element(x)
    if fac is None:
      return False
    v = self._vec_from_factors(fac, self.sign_bits(x))
    self.relations.append(v)
    self.rel_elems.append(list(x))
    return True

  def _collect_relations(self, target_extra=15):
    K = self.K
    ns = self.nsmall
    if not self.relations:
      # rational primes give cheap relations
      for p in sorted(self.by_p):
        self._add_relation([p, 0, 0])
    want = len(self.relations) + ns + target_extra
    tries = 0
    base = [K.e(0), K.e(1), K.e(2)]
    seen = {tuple(x) for x in self.rel_elems}
    while len(self.relations) < want and tries < 20000:
      tries += 1
      # a random product of small primes forces them into the relation
      if ns and tries % 4:
        I = None
        for _ in range(self.rng.randint(1, 3)):
          P = self.fb[self.small[self.rng.randrange(ns)]].ideal
          I = P if I is None else ideal_mul(I, P)
        src = [list(r) for r in I.H]
      else:
        src = base
      rows = reduce_rows(K, src, self._random_weight(2.0))
      cands = list(rows)
      c = [self.rng.randint(-2, 2) for _ in range(3)]
      cands.append([sum(c[i] * rows[i][j] for i in range(3)) for j in range(3)])
      for x in cands:
        t = tuple(x)
        if any(x) and t not in seen and tuple(-v for v in x) not in seen:
          seen.add(t)
          self._add_relation(x)

  def _cl_rows(self):
    ns = self.nsmall
    return [r[:ns] for r in self.relations]

  def _hnf_det(self, rows, n):
    H = hnf(rows, n)
    if len(H) < n:
      return None, H
    return math.prod(H[i][i] for i in range(n)), H

  def _compute_groups(self, certify):
    ns = self.nsmall
    labels = [self.fb[i] for i in self.small]
    for rnd in range(40):
      if ns == 0:
        D = 1
      else:
        D, H = self._hnf_det(self._cl_rows(), ns)
        if D is None:
          self._collect_relations(target_extra=15 + 10 * (rnd + 1))
          continue
      # stability: a new batch must not shrink the determinant
      self._collect_relations(target_extra=15 + 10 * (rnd + 1))
      D2 = 1 if ns == 0 else self._hnf_det(self._cl_rows(), ns)[0]
      if D2 != D:
        continue
      cl = AbelianGroupPresentation.from_relations(labels, self._cl_rows(), D)
      if certify:
        extra = self._kernel_check(cl)
        if extra:
          for x in extra:
            self._add_relation(x)
          continue
        self.certification = "principality-search"
      self.cl = cl
      break
    else:
      raise ClassGroupError("class group relation search did not stabilise")
    # narrow class group
    rows = [list(r) for r in self.relations]
    for k in range(self.r1):
      rows.append([0] * ns + [2 * int(j == k) for j in range(self.r1)])
    for bits in self.units.unit_signatures:
      rows.append([0] * ns + list(bits))
    self.plus_rows = rows
    self.plus_labels = labels + ["s%d" % k for k in range(self.r1)]
    self.clp = AbelianGroupPresentation.from_relations(self.plus_labels, rows, 2 * max(D, 1))
    self.cl.certified = self.clp.certified = self.certification != "none" or not certify

  def _kernel_check(self, cl):
    """Check that no nontrivial element of prime order is principal.

    Returns generators found for principal ideals (new relations), or [].
    """
    K = self.K
    inv = cl.invariants
    if not inv:
      return []
    primes = sorted({p for d in inv for p in ea.factor_integer(d)})
    found = []
    for q in primes:
      # basis of G[q]
      basis = []
      for k, d in enumerate(inv):
        if d % q == 0:
          v = cl.generator_vector(k)
          basis.append([(d // q) * t for t in v])
      for coeffs in itertools.product(range(q), repeat=len(basis)):
        if not any(coeffs):
          continue
        vec = [0] * len(cl.generators)
        for c, b in zip(coeffs, basis):
          for i in range(len(vec)):
            vec[i] += c * b[i]
        I = self.ideal_from_vector(vec, cl)
        g = find_generator(K, I, ug=self.units)
        if g is not None:
          y = [int(t) for t in K.to_omega(g * I.den)] if I.den != 1 else [int(t) for t in K.to_omega(g)]
          found.append(y)
          return found
    return found

  def ideal_from_vector(self, vec, cl=None):
    """An integral ideal in the class of sum vec_i [small_i] (exponents reduced)."""
    K = self.K
    I = K.unit_ideal()
    cl = cl or self.cl
    order = cl.order
    for c, i in zip(vec, self.small):
      # negative exponents are avoided by reducing modulo the group order
      c %= order
      if c:
        I = ideal_mul(I, self.fb[i].ideal ** c)
    return _reduce_ideal(K, I)

  # -- discrete logarithms

  def _factor_cofactor(self, x, I, n):
    """FB exponents of the integral ideal (x) I^-1 of norm n, or None if not FB-smooth."""
    out = {}
    for p, idxs in self.by_p.items():
      if n % p:
        continue
      vp = 0
      while n % p == 0:
        n //= p
        vp += 1
      if len(self.K.factor_prime(p)) != len(idxs):
        return None
      acc = 0
      for i in idxs[:-1]:
        v = self.fb[i].valuation_int(x) - _ideal_valuation(self.fb[i], I)
        if v < 0:
          return None
        if v:
          out[i] = v
        acc += self.fb[i].f * v
      last = self.fb[idxs[-1]]
      rest = vp - acc
      if rest < 0 or rest % last.f:
        return None
      if rest:
        out[idxs[-1]] = rest // last.f
    if n != 1:
      return None
    return out

  def class_vector(self, I: Ideal):
    """Vector over small + sign columns whose class equals [I] (I integral)."""
    K = self.K
    if I.den != 1:
      raise ValueError("integral ideals only")
    N = int(I.norm)
    if N == 1:
      return [0] * (self.nsmall + self.r1)
    rows = [list(r) for r in I.H]
    for x in self._candidates_in(rows, 2000):
      nx = abs(int(K.from_omega(x).norm()))
      if nx == 0 or nx % N:
        continue
      # (x) = I J with J integral of norm nx / N
      facJ = self._factor_cofactor(x, I, nx // N)
      if facJ is None:
        continue
      vJ = self._vec_from_factors(facJ, [0] * self.r1)
      sb = self.sign_bits(x)
      ns = self.nsmall
      return [-a for a in vJ[:ns]] + [(vJ[ns + k] + sb[k]) % 2 for k in range(self.r1)]
    raise ClassGroupError("discrete log search failed")

  def cl_dlog(self, I):
    return self.cl.dlog(self.class_vector(I)[:self.nsmall])

  def clp_dlog(self, I):
    return self.clp.dlog(self.class_vector(I))


def _ideal_valuation(P, I):
  return min(P.valuation_int(list(r)) for r in I.H if any(r))


def _small_combos(limit):
  out = []
  for a in range(-2, 3):
    for b in range(-2, 3):
      for c in range(-2, 3):
        if (a, b, c) != (0, 0, 0):
          out.append((a, b, c))
  out.sort(key=lambda t: sum(abs(x) for x in t))
  return out[:limit]


def _reduce_ideal(K, I):
  """An integral ideal of small norm in the class of I: (a)/I for short a, inverted twice."""
  if I.norm <= 10 ** 4:
    return I
  J = ideal_inverse_times(K, I)
  J = ideal_inverse_times(K, J)
  return J


def colon_lattice(K, I, alpha):
  """{x in O : x I in alpha O} as an integral ideal."""
  ainv = alpha.inverse()
  # x -> x * b_j * alpha^-1 must be integral for each basis vector b_j of I
  mats = []
  L = 1
  for b in I.H:
    be = K.from_omega([Fraction(t, I.den) for t in b]) * ainv
    row_imgs = []
    for i in range(3):
      img = K.to_omega(K.from_omega(K.e(i)) * be)
      row_imgs.append(img)
      for t in img:
        L = L * t.denominator // math.gcd(L, t.denominator)
    mats.append(row_imgs)
  # rows: e_i -> concatenated images scaled by L, plus identity block
  rows = []
  for i in range(3):
    r = []
    for m in mats:
      r += [int(t * L) for t in m[i]]
    rows.append(r + [int(i == j) for j in range(3)])
  for k in range(9):
    rows.append([L * int(k == j) for j in range(9)] + [0, 0, 0])
  H = hnf(rows, 12, L)
  ker = [r[9:] for r in H if not any(r[:9])]
  H2 = hnf(ker, 3)
  return Ideal(K, H2, 1)


def ideal_inverse_times(K, I):
  """(a) I^{-1} for a short element a of I: an integral ideal in the inverse class."""
  rows = reduce_rows(K, [list(r) for r in I.H], None)
  a = K.from_omega([Fraction(t, I.den) for t in rows[0]])
  return colon_lattice(K, I, a)


def ideal_inverse(K, I):
  """I^{-1} as a fractional ideal."""
  N = I.norm
  n = N.numerator * N.denominator
  J = colon_lattice(K, I, K.element(n))
  return Ideal(K, [list(r) for r in J.H], n)


def class_group_data(K: CubicField) -> ClassGroupData:
  cache = K.__dict__.get("_cgd")
  if cache is None:
    cache = ClassGroupData(K)
    K.__dict__["_cgd"] = cache
  return cache


def class_group(K: CubicField) -> AbelianGroupPresentation:
  return class_group_data(K).cl


def narrow_class_group(K: CubicField) -> AbelianGroupPresentation:
  return class_group_data(K).clp
