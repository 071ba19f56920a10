import pytest
from hypothesis import assume, given, settings, strategies as st

from artifact import exact_arith as ea
from artifact.curve_local import (CurveModel, ModelError, bad_primes, conductor, dagger_check, etale_disc,
                                  hypotheses_check, local_data, local_delta_valuation_parity,
                                  tate_algorithm)

E9032 = CurveModel((3, -7, 0, 1))
E106276 = CurveModel((169, -54, -1, 1))


def test_model_refuses_bad_input():
  with pytest.raises(ModelError):
    CurveModel((1, 2, 3, 2))
  with pytest.raises(ModelError):
    CurveModel((1, 2, 1))


def test_conductors():
  assert conductor(E9032) == 9032
  assert conductor(E106276) == 106276
  assert conductor(CurveModel((-2, -1, 1, 1))) != 0


@pytest.mark.parametrize("a,p,kod,fp,cp", [
  ((0, -1, 1, -10, -20), 11, "I5", 1, 5),  # 11a1
  ((0, 0, 1, 0, -7), 3, "IV*", 3, 3),  # 27a1
  ((0, 0, 0, -1, 0), 2, None, 5, None),  # 32a2
  ((0, 0, 0, -4, 0), 2, "I2*", 6, 4),  # 64a1
])
def test_known_reductions(a, p, kod, fp, cp):
  r = tate_algorithm(a, p)
  assert r.f_p == fp
  if kod is not None:
    assert (r.kodaira, r.c_p) == (kod, cp)


def test_split_and_nonsplit():
  assert tate_algorithm((0, -1, 1, -10, -20), 11).reduction == "split"
  # 14a1: split at 7, nonsplit at 2
  assert tate_algorithm((1, 0, 1, 4, -6), 7).reduction == "split"
  assert tate_algorithm((1, 0, 1, 4, -6), 2).reduction == "nonsplit"


@pytest.mark.parametrize("F,p,kod", [
  ((0, -60, 11, 1), 5, "I2"),  # x(x+15)(x-4)
  ((0, -18, 7, 1), 3, "I4"),  # x(x+9)(x-2)
  ((0, -2550, 0, 1), 5, "I0*"),
  ((0, -30, 0, 1), 5, "III"),
])
def test_kodaira_fixtures(F, p, kod):
  assert tate_algorithm(CurveModel(F), p).kodaira == kod


def test_dagger_fixtures():
  h = hypotheses_check(E9032)
  assert h.passed
  assert {p: v.case for p, v in h.verdicts.items()} == {2: "i", 1129: "ii"}
  h = hypotheses_check(E106276)
  assert h.passed
  assert {p: v.case for p, v in h.verdicts.items()} == {2: "i", 163: "i"}


def test_reducible_cubic_fails_hypotheses():
  h = hypotheses_check(CurveModel((0, -60, 11, 1)))
  assert not h.passed and not h.irreducible
  assert "rational 2-torsion" in h.reason()


def test_dagger_witness_records_valuations():
  v = dagger_check(E9032, 1129)
  assert v.witness["v_disc_F"] == v.witness["v_disc_order"] == 1


def test_etale_disc():
  assert etale_disc([3, -7, 0, 1]) == 1129
  assert etale_disc([169, -54, -1, 1]) == 26569
  assert etale_disc([0, -30, 0, 1]) == 120  # quadratic factor x^2 - 30


def test_kummer_valuation_parity():
  for P in [(3, 3), (-1, 3)]:
    out, verdict = local_delta_valuation_parity(E9032, 2, P)
    assert verdict == "integral"
    assert sum(o["degree"] for o in out) == 3
  with pytest.raises(ValueError):
    local_delta_valuation_parity(E9032, 2, (0, 1))


coef = st.integers(-40, 40)


@settings(max_examples=60, deadline=None)
@given(coef, coef, coef)
def test_ogg_formula(a, b, c):
  E = CurveModel((c, b, a, 1))
  assume(E.disc_F != 0)
  for p, r in local_data(E).items():
    assert r.f_p == r.v_disc_min + 1 - r.components
    assert r.c_p <= r.components
  assert set(bad_primes(E)) <= set(ea.factor_integer(abs(E.disc_E)))
