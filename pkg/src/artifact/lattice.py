"""Weighted T2 geometry: embedding coordinates, LLL and short vector search.

A vector of omega-coordinates x is sent to R^3 by the real embeddings (or
the real embedding plus sqrt(2)*Re, sqrt(2)*Im of the complex one), each
scaled by exp(w_i).  The squared Euclidean length is the weighted T2 form.
"""

from __future__ import annotations

import math

import mpmath

from .linalg import identity


def real_coords(K):
  """3x3 float matrix: row i = R^3 image of omega_i (unweighted)."""
  cache = K.__dict__.get("_real_coords")
  if cache is not None:
    return cache
  embs = K._omega_float_embeddings()
  rows = []
  s2 = math.sqrt(2.0)
  for e in embs:
    if K.r1 == 3:
      rows.append([float(e[0]), float(e[1]), float(e[2])])
    else:
      z = complex(e[1])
      rows.append([float(e[0]), s2 * z.real, s2 * z.imag])
  K.__dict__["_real_coords"] = rows
  return rows


def place_weights(K, w):
  """Expand a weight per place into a weight per R^3 coordinate."""
  if K.r1 == 3:
    return [math.exp(w[0]), math.exp(w[1]), math.exp(w[2])]
  return [math.exp(w[0]), math.exp(w[1]), math.exp(w[1])]


def _mp_coords(K, dps=60):
  cache = K.__dict__.setdefault("_mp_coords", {})
  if dps in cache:
    return cache[dps]
  rows = []
  with mpmath.workdps(dps):
    for w in K.integral_basis:
      e = K.embeddings(w, dps)
      if K.r1 == 3:
        rows.append([e[0], e[1], e[2]])
      else:
        s2 = mpmath.sqrt(2)
        rows.append([e[0], s2 * mpmath.re(e[1]), s2 * mpmath.im(e[1])])
  cache[dps] = rows
  return rows


def _embed_mp(K, rows, sc):
  # enough digits to survive cancellation between coordinates of this size
  digits = max(len(str(abs(int(t)))) for x in rows for t in x)
  dps = 40 * (1 + (digits + 30) // 40)
  R = _mp_coords(K, dps)
  out = []
  with mpmath.workdps(dps):
    for x in rows:
      v = [sum(int(x[i]) * R[i][k] for i in range(3)) for k in range(3)]
      out.append([float(v[k] * sc[k]) for k in range(3)])
  return out


def embed_rows(K, rows, w=None):
  R = real_coords(K)
  sc = place_weights(K, w) if w is not None else [1.0, 1.0, 1.0]
  if any(abs(t) > 10 ** 6 for x in rows for t in x):
    # large coordinates cancel to small embeddings: float is not enough
    return _embed_mp(K, rows, sc)
  out = []
  for x in rows:
    v = [0.0, 0.0, 0.0]
    for i in range(3):
      xi = x[i]
      if xi:
        xi = float(xi)
        for k in range(3):
          v[k] += xi * R[i][k]
    out.append([v[k] * sc[k] for k in range(3)])
  return out


def _dot(u, v):
  return sum(a * b for a, b in zip(u, v))


def _gso(B):
  n = len(B)
  mu = [[0.0] * n for _ in range(n)]
  Bs = [0.0] * n
  star = []
  for i in range(n):
    v = list(B[i])
    for j in range(i):
      mu[i][j] = _dot(B[i], star[j]) / Bs[j] if Bs[j] else 0.0
      v = [a - mu[i][j] * b for a, b in zip(v, star[j])]
    star.append(v)
    Bs[i] = _dot(v, v)
  return mu, Bs


def lll_float(V, delta=0.99):
  """LLL on a few float vectors; returns the integer transform (rows)."""
  n = len(V)
  B = [list(v) for v in V]
  T = identity(n)
  mu, Bs = _gso(B)
  k = 1
  guard = 0
  while k < n and guard < 10000:
    guard += 1
    for j in range(k - 1, -1, -1):
      q = round(mu[k][j])
      if q:
        B[k] = [a - q * b for a, b in zip(B[k], B[j])]
        T[k] = [a - q * b for a, b in zip(T[k], T[j])]
        for l in range(j):
          mu[k][l] -= q * mu[j][l]
        mu[k][j] -= q
    if Bs[k] >= (delta - mu[k][k - 1] ** 2) * Bs[k - 1]:
      k += 1
    else:
      B[k], B[k - 1] = B[k - 1], B[k]
      T[k], T[k - 1] = T[k - 1], T[k]
      mu, Bs = _gso(B)
      k = max(k - 1, 1)
  return T


def reduce_rows(K, rows, w=None):
  """LLL-reduce integer vectors (omega coordinates) for the weighted T2 form."""
  rows = [list(r) for r in rows]
  for _ in range(4):
    V = embed_rows(K, rows, w)
    T = lll_float(V)
    new = [[sum(T[i][k] * rows[k][j] for k in range(len(rows))) for j in range(3)]
           for i in range(len(rows))]
    if new == rows:
      break
    rows = new
  return rows


def short_vectors(K, rows, w, bound, limit=100000):
  """All nonzero integer combinations x of ``rows`` with weighted T2(x) <= bound.

  Fincke-Pohst enumeration; each of x, -x is reported once.
  """
  rows = reduce_rows(K, rows, w)
  V = embed_rows(K, rows, w)
  n = len(V)
  # Gram-Schmidt
  mu = [[0.0] * n for _ in range(n)]
  Bs = [0.0] * n
  star = []
  for i in range(n):
    v = list(V[i])
    for j in range(i):
      mu[i][j] = sum(a * b for a, b in zip(V[i], star[j])) / Bs[j]
      v = [a - mu[i][j] * b for a, b in zip(v, star[j])]
    star.append(v)
    Bs[i] = sum(a * a for a in v)
  bound = bound * (1 + 1e-9) + 1e-12
  out = []
  x = [0] * n

  def rec(k, rem):
    if len(out) > limit:
      raise OverflowError("too many short vectors")
    c = -sum(mu[j][k] * x[j] for j in range(k + 1, n))
    r = math.sqrt(max(rem, 0.0) / Bs[k]) if Bs[k] > 0 else 0.0
    lo = math.ceil(c - r - 1e-9)
    hi = math.floor(c + r + 1e-9)
    for t in range(lo, hi + 1):
      x[k] = t
      used = (t - c) ** 2 * Bs[k]
      if used > rem + 1e-9 * (1 + abs(rem)):
        continue
      if k == 0:
        if any(x):
          out.append(list(x))
      else:
        rec(k - 1, rem - used)
    x[k] = 0

  rec(n - 1, bound)
  res = []
  seen = set()
  for c in out:
    v = tuple(sum(c[i] * rows[i][j] for i in range(n)) for j in range(3))
    neg = tuple(-a for a in v)
    if neg in seen:
      continue
    seen.add(v)
    res.append(list(v))
  return res


def weighted_t2(K, x, w):
  v = embed_rows(K, [x], w)[0]
  return sum(a * a for a in v)
