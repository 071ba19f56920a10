"""Deterministic fuzz corpus of monic irreducible cubics with squarefree discriminant."""

import random

from artifact import exact_arith as ea
from artifact.cubic_field import rational_roots

SEED = 20240611
SIZE = 200


def fuzz_corpus(n=SIZE, bound=20, seed=SEED):
  rng = random.Random(seed)
  out, seen = [], set()
  while len(out) < n:
    F = (rng.randint(-bound, bound), rng.randint(-bound, bound), rng.randint(-bound, bound), 1)
    if F in seen:
      continue
    seen.add(F)
    D = ea.poly_disc(list(F))
    if D == 0 or rational_roots(list(F)) or not ea.is_squarefree(abs(D)):
      continue
    out.append(F)
  return out
