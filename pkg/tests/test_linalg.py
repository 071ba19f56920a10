import math

import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from artifact.class_units import AbelianGroupPresentation
from artifact.linalg import det_bareiss, hnf, rank_mod_p, snf

small = st.integers(-9, 9)
mat3 = st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3)


@given(mat3)
def test_det_bareiss_matches_sympy(M):
  assert det_bareiss(M) == sympy.Matrix(M).det()


@given(mat3)
def test_snf_matches_sympy(M):
  if sympy.Matrix(M).det() == 0:
    return
  D = snf(M)[0]
  ref = smith_normal_form(sympy.Matrix(M), domain=sympy.ZZ)
  want = sorted(abs(int(ref[i, i])) for i in range(3))
  assert sorted(abs(int(d)) for d in D) == want


@given(mat3)
def test_hnf_preserves_lattice_determinant(M):
  d = abs(det_bareiss(M))
  if d == 0:
    return
  H = hnf(M, 3)
  assert math.prod(H[i][i] for i in range(3)) == d
  assert all(H[i][j] == 0 for i in range(3) for j in range(i))


def test_presentation_z2_z4():
  G = AbelianGroupPresentation.from_relations(["a", "b"], [[2, 0], [0, 4]], 8)
  assert G.invariants == [2, 4]
  assert G.order == 8 and G.two_rank() == 2
  assert G.dlog([2, 4]) == (0, 0)
  assert G.describe() == "Z/2 x Z/4"


def test_rank_mod_2():
  assert rank_mod_p([[1, 1, 0], [0, 1, 1], [1, 0, 1]], 2) == 2
