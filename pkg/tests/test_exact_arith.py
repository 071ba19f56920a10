from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, strategies as st

from sympy.functions.combinatorial.numbers import jacobi_symbol

from artifact import exact_arith as ea

coef = st.integers(-60, 60)


def test_disc_of_fixtures():
  assert ea.poly_disc([169, -54, -1, 1]) == 26569 == 163 ** 2
  assert ea.poly_disc([3, -7, 0, 1]) == 1129
  assert ea.poly_disc([-3, -7, 0, 1]) == 1129


def test_check_monic_rejects_general_models():
  with pytest.raises(ValueError):
    ea.check_monic_cubic([1, 2, 3, 2])
  with pytest.raises(ValueError):
    ea.check_monic_cubic([1, 2, 1])


def test_cubic_str():
  assert ea.cubic_str([3, -7, 0, 1]) == "x^3 - 7*x + 3"


@given(coef, coef, coef)
def test_disc_matches_sympy(a, b, c):
  x = sympy.Symbol("x")
  assert ea.poly_disc([c, b, a, 1]) == sympy.discriminant(x ** 3 + a * x ** 2 + b * x + c, x)


@given(st.integers(1, 10 ** 12))
def test_factor_integer_matches_sympy(n):
  assert ea.factor_integer(n) == (sympy.factorint(n) if n > 1 else {})


@given(st.integers(-10 ** 6, 10 ** 6), st.integers(0, 1000))
def test_kronecker_matches_jacobi_for_odd_moduli(a, k):
  n = 2 * k + 1
  assert ea.kronecker_symbol(a, n) == jacobi_symbol(a % n, n)


@given(st.integers(-10 ** 6, 10 ** 6), st.integers(-10 ** 6, 10 ** 6), st.integers(1, 500))
def test_kronecker_multiplicative(a, b, n):
  assert ea.kronecker_symbol(a * b, n) == ea.kronecker_symbol(a, n) * ea.kronecker_symbol(b, n)


@given(coef, coef, coef, st.sampled_from([2, 3, 5, 7, 11, 101, 211, 1009]))
def test_roots_mod_p_bruteforce(a, b, c, p):
  F = [c, b, a, 1]
  brute = [s for s in range(p) if ea.poly_eval(F, s) % p == 0]
  assert ea.roots_mod_p(F, p) == brute
  assert ea.count_roots_mod_p(F, p) == len(brute)


@given(coef, coef, coef)
def test_real_root_isolation(a, b, c):
  F = [c, b, a, 1]
  assume(ea.poly_disc(F) != 0)
  ivs = ea.isolate_real_roots(F)
  x = sympy.Symbol("x")
  roots = sorted(float(r) for r in sympy.real_roots(sympy.Poly(x ** 3 + a * x ** 2 + b * x + c, x)))
  assert len(ivs) == len(roots)
  for iv, r in zip(ivs, roots):
    assert iv.lo <= Fraction(r) + Fraction(1, 10 ** 9) and Fraction(r) - Fraction(1, 10 ** 9) <= iv.hi


def test_sign_at_root_exact():
  F = [3, -7, 0, 1]
  ivs = ea.isolate_real_roots(F)
  # theta^2 - 8 has signs (+, -, -) at the roots in ascending order
  assert [ea.sign_at_root([-8, 0, 1], iv) for iv in ivs] == [1, -1, -1]


def test_valuation_and_squarefree():
  assert ea.valuation(Fraction(50, 3), 5) == 2
  assert ea.valuation(Fraction(50, 3), 3) == -1
  assert ea.is_squarefree(1129) and not ea.is_squarefree(26569)
  x, m = ea.crt([2, 3], [5, 7])
  assert m == 35 and x % 35 == 17


@pytest.mark.parametrize("F,p,shape", [
  ([3, -7, 0, 1], 2, "irreducible_unramified"),
  ([169, -54, -1, 1], 163, "irreducible_ramified"),
  ([0, -60, 11, 1], 5, "three_linear"),
  ([0, -2550, 0, 1], 5, "linear_quadratic_unramified"),
  ([0, -30, 0, 1], 5, "linear_quadratic_ramified"),
])
def test_local_factorization_shapes(F, p, shape):
  lf = ea.cubic_factorization_mod_p(F, p)
  assert lf.shape == shape
  assert sum(f.e * f.f for f in lf.factors) == 3


def test_congruent_roots_reported():
  lf = ea.cubic_factorization_mod_p([0, -60, 11, 1], 5)
  # roots 0, 4, -15: 0 and -15 agree mod 5
  assert len(lf.congruent_pairs) == 1


@given(coef, coef, coef, st.sampled_from([2, 3, 5, 7, 13]))
def test_padic_roots_are_roots(a, b, c, p):
  F = [c, b, a, 1]
  assume(ea.poly_disc(F) != 0)
  for r in ea.padic_roots(F, p, 12):
    assert ea.poly_eval(F, r) % p ** 8 == 0


@given(coef, coef, coef, st.sampled_from([2, 3, 5, 7]))
def test_local_degrees_sum_to_three(a, b, c, p):
  F = [c, b, a, 1]
  assume(ea.poly_disc(F) != 0)
  lf = ea.cubic_factorization_mod_p(F, p)
  assert sum(f.degree for f in lf.factors) == 3
  assert all(f.e * f.f == f.degree for f in lf.factors)
