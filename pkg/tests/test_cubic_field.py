import pytest
import sympy
from hypothesis import assume, given, strategies as st
from sympy.polys.numberfields.basis import round_two

from artifact import exact_arith as ea
from artifact.cubic_field import (CubicField, ReducibleCubicError, build_field, ideal_mul,
                                  principal_ideal, rational_roots)

coef = st.integers(-25, 25)
x = sympy.Symbol("x")


def test_fixture_fields():
  K = build_field([169, -54, -1, 1])
  assert K.field_disc == 26569 and K.index == 1 and K.signature == (3, 0)
  K = build_field([3, -7, 0, 1])
  assert K.field_disc == 1129 and K.signature == (3, 0)
  K = build_field([1, 1, -1, 1])
  assert K.field_disc == -44 and K.signature == (1, 1)


def test_reducible_rejected():
  with pytest.raises(ReducibleCubicError):
    CubicField([0, -1, 0, 1])


def test_non_maximal_order():
  # x^3 - 7 d^2 x + 3 d^3 for d = 5 defines the same field with index 125
  K = build_field([375, -175, 0, 1])
  assert K.field_disc == 1129 and K.index == 125


@given(coef, coef, coef)
def test_field_disc_matches_round_two(a, b, c):
  F = [c, b, a, 1]
  assume(ea.poly_disc(F) != 0 and not rational_roots(F))
  K = build_field(F)
  _, dK = round_two(sympy.Poly(x ** 3 + a * x ** 2 + b * x + c, x))
  assert K.field_disc == int(dK)
  assert ea.poly_disc(F) == K.index ** 2 * K.field_disc


@given(coef, coef, coef, st.sampled_from([2, 3, 5, 7, 11, 13]))
def test_prime_decomposition(a, b, c, p):
  F = [c, b, a, 1]
  assume(ea.poly_disc(F) != 0 and not rational_roots(F))
  K = build_field(F)
  Ps = K.factor_prime(p)
  assert sum(P.e * P.f for P in Ps) == 3
  # product of P^e is pO
  I = K.unit_ideal()
  for P in Ps:
    for _ in range(P.e):
      I = ideal_mul(I, P.ideal)
  assert I == principal_ideal(K, K.element(p))
  # ramified iff p divides the field discriminant
  assert any(P.e > 1 for P in Ps) == (K.field_disc % p == 0)


@given(coef, coef, coef, st.lists(st.integers(-9, 9), min_size=3, max_size=3),
       st.lists(st.integers(-9, 9), min_size=3, max_size=3))
def test_norm_multiplicative(a, b, c, u, v):
  F = [c, b, a, 1]
  assume(ea.poly_disc(F) != 0 and not rational_roots(F))
  K = build_field(F)
  s, t = K.element(u), K.element(v)
  assert (s * t).norm() == s.norm() * t.norm()
  if not t.is_zero():
    assert (s / t) * t == s


def test_signature_of_theta_squared_minus_8():
  K = build_field([3, -7, 0, 1])
  assert tuple(K.signature_of(K.element([-8, 0, 1]))) == (1, -1, -1)


def test_valuations_sum_to_norm():
  K = build_field([169, -54, -1, 1])
  a = K.element([5, 3, 1])
  n = abs(a.norm())
  for p, e in ea.factor_integer(int(n)).items():
    assert sum(P.valuation(a) * P.f for P in K.factor_prime(p)) == e
