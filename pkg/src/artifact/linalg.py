"""Integer and mod-p linear algebra on lists of lists.

Row convention throughout: a lattice is the Z-span of the rows.
"""

from __future__ import annotations

import math


def identity(n):
  return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A, B):
  Bt = list(zip(*B))
  return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def vec_mat(v, A):
  n = len(A[0]) if A else 0
  out = [0] * n
  for c, row in zip(v, A):
    if c:
      for j, a in enumerate(row):
        out[j] += c * a
  return out


def det_bareiss(M):
  """Exact determinant of a square integer matrix."""
  A = [list(r) for r in M]
  n = len(A)
  if n == 0:
    return 1
  sign = 1
  prev = 1
  for k in range(n - 1):
    if A[k][k] == 0:
      for i in range(k + 1, n):
        if A[i][k]:
          A[k], A[i] = A[i], A[k]
          sign = -sign
          break
      else:
        return 0
    for i in range(k + 1, n):
      for j in range(k + 1, n):
        A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
    prev = A[k][k]
  return sign * A[-1][-1]


# --------------------------------------------------------------------------
# Hermite normal form


def hnf(rows, ncols=None, modulus=None):
  """Row Hermite normal form of the lattice spanned by ``rows``.

  Output rows are upper triangular (pivot columns increasing), pivots
  positive, entries above each pivot reduced into [0, pivot).  Zero rows are
  dropped.  If ``modulus`` is given the lattice is taken to be
  span(rows) + modulus*Z^n and intermediate entries are reduced mod it.
  """
  if ncols is None:
    ncols = len(rows[0]) if rows else 0
  if modulus is not None:
    A = [[x % modulus for x in r] for r in rows]
    A = [r for r in A if any(r)]
    A += [[modulus * int(i == j) for j in range(ncols)] for i in range(ncols)]
  else:
    A = [list(r) for r in rows if any(r)]
  out = []
  for col in range(ncols):
    live = [row for row in A if row[col] != 0]
    rest = [row for row in A if row[col] == 0]
    if not live:
      continue
    while len(live) > 1:
      i0 = min(range(len(live)), key=lambda i: abs(live[i][col]))
      piv = live[i0]
      nxt = [piv]
      for i, row in enumerate(live):
        if i == i0:
          continue
        q = row[col] // piv[col]
        new = [a - q * b for a, b in zip(row, piv)]
        if modulus is not None:
          new = [x % modulus for x in new]
        if new[col] != 0:
          nxt.append(new)
        elif any(new):
          rest.append(new)
      live = nxt
    piv = live[0]
    if piv[col] < 0:
      piv = [-a for a in piv]
    if modulus is not None:
      piv = piv[:col + 1] + [x % modulus for x in piv[col + 1:]]
    out.append(piv)
    A = rest
  pcols = [next(j for j, x in enumerate(row) if x) for row in out]
  for i in range(len(out)):
    pc = pcols[i]
    for k in range(i):
      q = out[k][pc] // out[i][pc]
      if q:
        out[k] = [a - q * b for a, b in zip(out[k], out[i])]
  return out


def hnf_square(rows, n, modulus=None):
  """HNF of a full rank lattice in Z^n; raises if rank deficient."""
  H = hnf(rows, n, modulus)
  if len(H) != n:
    raise ValueError("lattice is not of full rank")
  return H


# --------------------------------------------------------------------------
# Smith normal form


def snf(M):
  """Smith normal form with transforms.

  Returns (D, U, V) with U*M*V = diag(D) (D padded to min(m, n)), U and V
  unimodular.  D entries are nonnegative and each divides the next.
  """
  A = [list(r) for r in M]
  m = len(A)
  n = len(A[0]) if m else 0
  U = identity(m)
  V = identity(n)

  def swap_rows(i, j):
    A[i], A[j] = A[j], A[i]
    U[i], U[j] = U[j], U[i]

  def swap_cols(i, j):
    for row in A:
      row[i], row[j] = row[j], row[i]
    for row in V:
      row[i], row[j] = row[j], row[i]

  def add_row(dst, src, q):  # row dst -= q * row src
    if q:
      A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
      U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

  def add_col(dst, src, q):  # col dst -= q * col src
    if q:
      for row in A:
        row[dst] -= q * row[src]
      for row in V:
        row[dst] -= q * row[src]

  t = 0
  while t < min(m, n):
    # pivot: smallest nonzero entry in the remaining block
    best = None
    for i in range(t, m):
      for j in range(t, n):
        if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
          best = (i, j)
    if best is None:
      break
    swap_rows(t, best[0])
    swap_cols(t, best[1])
    while True:
      done = True
      for i in range(t + 1, m):
        if A[i][t]:
          q = A[i][t] // A[t][t]
          add_row(i, t, q)
          if A[i][t]:
            done = False
      for j in range(t + 1, n):
        if A[t][j]:
          q = A[t][j] // A[t][t]
          add_col(j, t, q)
          if A[t][j]:
            done = False
      if done:
        # divisibility condition on the rest of the block
        bad = None
        for i in range(t + 1, m):
          for j in range(t + 1, n):
            if A[i][j] % A[t][t]:
              bad = i
              break
          if bad is not None:
            break
        if bad is None:
          break
        # fold the offending row into row t
        A[t] = [a + b for a, b in zip(A[t], A[bad])]
        U[t] = [a + b for a, b in zip(U[t], U[bad])]
        continue
      # move the smallest entry of row/col t into the pivot
      best = (t, t)
      for i in range(t, m):
        if A[i][t] and abs(A[i][t]) < abs(A[best[0]][best[1]]):
          best = (i, t)
      for j in range(t, n):
        if A[t][j] and abs(A[t][j]) < abs(A[best[0]][best[1]]):
          best = (t, j)
      swap_rows(t, best[0])
      swap_cols(t, best[1])
    if A[t][t] < 0:
      A[t] = [-a for a in A[t]]
      U[t] = [-a for a in U[t]]
    t += 1
  D = [A[i][i] if i < m and i < n else 0 for i in range(min(m, n))]
  return D, U, V


# --------------------------------------------------------------------------
# mod p


def rref_mod_p(rows, p):
  """Reduced row echelon form mod p; returns (rows, pivot_columns)."""
  A = [[x % p for x in r] for r in rows]
  if not A:
    return [], []
  n = len(A[0])
  piv = []
  r = 0
  for c in range(n):
    k = next((i for i in range(r, len(A)) if A[i][c]), None)
    if k is None:
      continue
    A[r], A[k] = A[k], A[r]
    inv = pow(A[r][c], -1, p)
    A[r] = [x * inv % p for x in A[r]]
    for i in range(len(A)):
      if i != r and A[i][c]:
        f = A[i][c]
        A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
    piv.append(c)
    r += 1
    if r == len(A):
      break
  return A[:r], piv


def rank_mod_p(rows, p):
  return len(rref_mod_p(rows, p)[0])


def left_kernel_mod_p(rows, p):
  """Basis of {x : x * M = 0 mod p} for M given by rows."""
  if not rows:
    return []
  return kernel_mod_p([list(c) for c in zip(*rows)], p)


def kernel_mod_p(rows, p):
  """Basis of {x : M x = 0 mod p} for M given by rows."""
  if not rows:
    return []
  n = len(rows[0])
  R, piv = rref_mod_p(rows, p)
  free = [c for c in range(n) if c not in piv]
  out = []
  for f in free:
    v = [0] * n
    v[f] = 1
    for row, pc in zip(R, piv):
      v[pc] = (-row[f]) % p
    out.append(v)
  return out


def solve_mod_p(rows, b, p):
  """One solution x of x * M = b (mod p) with M given by rows, or None."""
  m = len(rows)
  n = len(b)
  cols = [[rows[i][j] for i in range(m)] + [b[j]] for j in range(n)]
  R, piv = rref_mod_p(cols, p)
  if m in piv:
    return None
  x = [0] * m
  for row, pc in zip(R, piv):
    x[pc] = row[m]
  return x


# --------------------------------------------------------------------------
# LLL (floating point Gram matrix, exact integer transforms)


def lll_gram(G, delta=0.99):
  """LLL-reduce a basis given by its (float) Gram matrix.

  Returns the unimodular integer transform T (rows = new basis in terms of
  the old one).
  """
  n = len(G)
  T = identity(n)
  G = [list(map(float, r)) for r in G]

  def inner(i, j):
    return G[i][j]

  def recompute():
    mu = [[0.0] * n for _ in range(n)]
    B = [0.0] * n
    for i in range(n):
      for j in range(i):
        s = inner(i, j) - sum(mu[j][k] * mu[i][k] * B[k] for k in range(j))
        mu[i][j] = s / B[j] if B[j] else 0.0
      B[i] = inner(i, i) - sum(mu[i][k] ** 2 * B[k] for k in range(i))
    return mu, B

  def row_op(i, j, q):  # b_i -= q b_j
    T[i] = [a - q * b for a, b in zip(T[i], T[j])]
    for k in range(n):
      G[i][k] -= q * G[j][k]
    for k in range(n):
      G[k][i] -= q * G[k][j]

  def swap(i, j):
    T[i], T[j] = T[j], T[i]
    G[i], G[j] = G[j], G[i]
    for row in G:
      row[i], row[j] = row[j], row[i]

  k = 1
  guard = 0
  while k < n and guard < 10000:
    guard += 1
    mu, B = recompute()
    for j in range(k - 1, -1, -1):
      q = round(mu[k][j])
      if q:
        row_op(k, j, q)
        mu, B = recompute()
    if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
      k += 1
    else:
      swap(k, k - 1)
      k = max(k - 1, 1)
  return T


def hnf_with_transform(rows):
  """Row echelon form H = U * rows with U unimodular (small inputs only).

  Returns (H, U); zero rows of H are kept at the bottom so U is square.
  """
  m = len(rows)
  n = len(rows[0]) if m else 0
  A = [list(r) for r in rows]
  U = identity(m)
  r = 0
  for c in range(n):
    while True:
      nz = [i for i in range(r, m) if A[i][c]]
      if not nz:
        break
      i0 = min(nz, key=lambda i: abs(A[i][c]))
      A[r], A[i0] = A[i0], A[r]
      U[r], U[i0] = U[i0], U[r]
      done = True
      for i in range(r + 1, m):
        if A[i][c]:
          q = A[i][c] // A[r][c]
          A[i] = [a - q * b for a, b in zip(A[i], A[r])]
          U[i] = [a - q * b for a, b in zip(U[i], U[r])]
          if A[i][c]:
            done = False
      if done:
        break
    if any(A[i][c] for i in range(r, m)):
      if A[r][c] < 0:
        A[r] = [-a for a in A[r]]
        U[r] = [-a for a in U[r]]
      r += 1
      if r == m:
        break
  return A, U


def gcd_list(xs):
  g = 0
  for x in xs:
    g = math.gcd(g, x)
  return g
