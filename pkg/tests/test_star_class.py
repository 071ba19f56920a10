from hypothesis import assume, given, settings, strategies as st

from artifact import exact_arith as ea
from artifact.cubic_field import build_field, rational_roots
from artifact.star_class import (C_STAR_FILTERS, c_star_subgroup, c_tilde_subgroup, distinguished_place,
                                 is_square, is_square_mod_4, place_for_twist, square_class_coordinates,
                                 square_class_space, star_class_group, subgroup_ranks)


def test_distinguished_place():
  assert distinguished_place((3, -7, 0, 1)).place_index == 0
  assert distinguished_place((3, -7, 0, 1)).type == "ii"
  assert distinguished_place((1, 1, -1, 1)).type == "i"
  assert place_for_twist(5, 1129) == 0
  assert place_for_twist(-7, 1129) == 2
  assert place_for_twist(-7, -44) == 0


def test_cl_star_9032_and_its_negative_twist():
  K = build_field([3, -7, 0, 1])
  assert star_class_group(K=K, place=0).invariants == [2]
  assert star_class_group(K=K, place=2).invariants == []
  # the twist's own field gives the same answer
  assert star_class_group(E=(-3, -7, 0, 1)).invariants == []


def test_cl_star_106276():
  S = star_class_group(E=(169, -54, -1, 1))
  assert S.invariants == [2, 2] and S.two_rank() == 2


def test_theta_squared_minus_8_generates_c_star():
  K = build_field([3, -7, 0, 1])
  a = K.element([-8, 0, 1])
  assert is_square_mod_4(K, a)
  co = square_class_coordinates(K, a, 0)
  sp = square_class_space(K, 0)
  M = sp.matrix(C_STAR_FILTERS)
  assert any(co)
  assert all(sum(c * M[i][j] for i, c in enumerate(co)) % 2 == 0 for j in range(len(M[0])))
  assert len(c_star_subgroup(K=K, place=0)) == 1
  # at the other distinguished place the sign filter rejects it
  sp2 = square_class_space(K, 2)
  assert sum(c * sp2.filters["sign_dist"][i][0] for i, c in enumerate(co)) % 2 == 1


def test_is_square():
  K = build_field([3, -7, 0, 1])
  a = K.element([1, 2, 3])
  assert is_square(K, a * a)
  assert not is_square(K, a * a * K.element(-1))


def test_c_tilde_contains_c_star():
  K = build_field([169, -54, -1, 1])
  cs, ct, contained = subgroup_ranks(K, 0)
  assert (cs, ct, contained) == (2, 3, True)
  assert len(c_tilde_subgroup(K=K, place=0)) == 3


coef = st.integers(-12, 12)


@settings(max_examples=15, deadline=None)
@given(coef, coef, coef)
def test_c_star_rank_equals_cl_star_two_rank(a, b, c):
  F = [c, b, a, 1]
  assume(ea.poly_disc(F) != 0 and not rational_roots(F))
  K = build_field(F)
  for place in range(K.r1):
    cs, ct, contained = subgroup_ranks(K, place)
    assert cs == star_class_group(K=K, place=place).two_rank()
    assert contained and ct - cs in (0, 1)
