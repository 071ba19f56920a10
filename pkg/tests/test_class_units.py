import pytest
from hypothesis import assume, given, settings, strategies as st

from artifact import exact_arith as ea
from artifact import oracles
from artifact.class_units import (class_group, class_group_data, find_generator, narrow_class_group,
                                  nth_root, unit_group)
from artifact.cubic_field import build_field, ideal_mul, principal_ideal, rational_roots
from artifact.linalg import rank_mod_p

FIELDS = {
  # F (constant first): (field_disc, regulator, Cl, Cl_+)
  (3, -7, 0, 1): (1129, 6.72755, [], [2]),
  (169, -54, -1, 1): (26569, 6.44374, [2, 2], [2, 2]),
  (1, 1, -1, 1): (-44, 0.60938, [], []),
  (3, 1, 0, 1): (-247, 1.54453, [], []),
  (11, 1, 0, 1): (-3271, 2.59910, [2], [2]),
}


@pytest.mark.parametrize("F", sorted(FIELDS))
def test_known_fields(F):
  fd, reg, cl, clp = FIELDS[F]
  K = build_field(list(F))
  ug = unit_group(K)
  assert K.field_disc == fd
  assert ug.regulator == pytest.approx(reg, abs=2e-4)
  assert ug.certified
  assert class_group(K).invariants == cl
  assert narrow_class_group(K).invariants == clp
  assert class_group(K).certified


@pytest.mark.parametrize("F", [(3, -7, 0, 1), (1, 1, -1, 1), (11, 1, 0, 1)])
def test_class_group_matches_oracle(F):
  K = build_field(list(F))
  assert oracles.class_group_bruteforce(K) == class_group(K).invariants
  assert oracles.units_agree(K, unit_group(K))


def test_units_are_units():
  K = build_field([169, -54, -1, 1])
  for u in unit_group(K).fundamental_units:
    assert abs(u.norm()) == 1 and K.is_integral(u)


def test_minus_one_signature_row():
  K = build_field([3, -7, 0, 1])
  assert unit_group(K).unit_signatures[0] == [1, 1, 1]


def test_saturation_recovers_square_roots():
  K = build_field([3, -7, 0, 1])
  u = unit_group(K).fundamental_units[0]
  assert nth_root(K, u * u, 2) in (u, -u)
  assert nth_root(K, u, 2) is None


def test_find_generator_principal_and_not():
  K = build_field([11, 1, 0, 1])
  a = K.element([2, -3, 1])
  g = find_generator(K, principal_ideal(K, a))
  assert g is not None and abs(g.norm()) == abs(a.norm())
  # a prime whose class is the nontrivial element of Cl = Z/2
  data = class_group_data(K)
  P = next(P for p in ea.primes_up_to(200) for P in K.factor_prime(p)
           if data.cl_dlog(P.ideal) != (0,))
  assert find_generator(K, P.ideal) is None
  assert find_generator(K, ideal_mul(P.ideal, P.ideal)) is not None


def test_class_vector_handles_large_primes():
  # primes above the Minkowski bound reach the factor base through cofactors
  K = build_field([-18, 13, -3, 1])
  data = class_group_data(K)
  P = K.factor_prime(1009)[0]
  assert len(data.cl_dlog(P.ideal)) == len(data.cl.invariants)


coef = st.integers(-12, 12)


@settings(max_examples=15, deadline=None)
@given(coef, coef, coef)
def test_narrow_index_times_unit_signs(a, b, c):
  F = [c, b, a, 1]
  assume(ea.poly_disc(F) != 0 and not rational_roots(F))
  K = build_field(F)
  ug = unit_group(K)
  data = class_group_data(K)
  sg = rank_mod_p([list(r) for r in ug.unit_signatures], 2)
  assert data.clp.order % data.cl.order == 0
  assert (data.clp.order // data.cl.order) * 2 ** sg == 2 ** K.r1
