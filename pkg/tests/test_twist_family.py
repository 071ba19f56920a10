import pytest
from hypothesis import given, settings, strategies as st

from artifact import exact_arith as ea
from artifact.curve_local import CurveModel, conductor
from artifact.star_class import star_class_group
from artifact.twist_family import (PRESERVING_SETS, TwistError, classify_prime, p_star, predicted_selmer,
                                   relative_root_number, splitting_type, twist_admissible, twist_model,
                                   twist_family_report, twist_star_group)
from artifact.star_class import _field_for

E9032 = CurveModel((3, -7, 0, 1))
E106276 = CurveModel((169, -54, -1, 1))
EPS_9032 = 1


def test_twist_model():
  Ed = twist_model(E9032, 5)
  assert Ed.F == (375, -175, 0, 1)
  assert Ed.disc_F == 5 ** 6 * E9032.disc_F
  assert twist_model(E106276, -3).F == (-4563, -486, 3, 1)
  with pytest.raises(TwistError):
    twist_model(E9032, 12)
  with pytest.raises(TwistError):
    twist_model(E9032, 0)


def test_p_star():
  assert p_star(5) == 5 and p_star(7) == -7 and p_star(43) == -43
  with pytest.raises(TwistError):
    p_star(2)
  with pytest.raises(TwistError):
    p_star(9)


def test_splitting_types():
  K = _field_for(E9032.F)
  assert splitting_type(K, 5) == "inert"
  K2 = _field_for(E106276.F)
  assert splitting_type(K2, 163) == "totally ramified"


def test_admissibility():
  s = twist_admissible(E9032, 5)
  assert s.admissible and s.hypotheses_pass
  assert not twist_admissible(E9032, 3).admissible  # 3 is not inert
  assert twist_admissible(E9032, -1).admissible


@pytest.mark.parametrize("d,rank", [(5, 1), (113, 2), (-43, 0), (-7, 1)])
def test_predicted_twist_ranks_9032(d, rank):
  eps = EPS_9032
  lo, up, ex = predicted_selmer(E9032, d, eps)
  assert ex == rank and lo <= ex <= up


def test_negative_twist_matches_own_field():
  for d in (5, 13, -7, -43):
    assert (twist_star_group(E9032, d).invariants
            == star_class_group(E=twist_model(E9032, d).F).invariants)


def test_preserving_sets_agree_with_root_numbers():
  N = conductor(E9032)
  for p in ea.primes_up_to(400)[1:]:
    if E9032.disc_E % p == 0:
      continue
    c = classify_prime(E9032, p, N)
    if c.set == "not-inert":
      continue
    assert (c.set in PRESERVING_SETS) == c.preserves_root_number
    assert c.relative_root_number == relative_root_number(E9032, p, N)


def test_relative_root_number_values():
  N = conductor(E9032)
  for p in (5, 13, 113, 43, 7):
    assert relative_root_number(E9032, p) == ea.kronecker_symbol(-N, p)
  assert relative_root_number(E9032, 43) == 1 and relative_root_number(E9032, 5) == -1
  with pytest.raises(TwistError):
    relative_root_number(E9032, 1129)


def test_family_report_9032():
  eps = EPS_9032
  rep = twist_family_report(E9032, 20000, eps)
  assert rep.disc_sign == 1 and not rep.galois
  assert abs(rep.inert_density - 1 / 3) < 0.02
  assert sum(rep.set_counts.values()) == rep.inert_count
  assert rep.set_exact["C-nsq"] == 0  # root number preserved, Cl_* trivial
  with pytest.raises(TwistError):
    twist_family_report(E9032, 50)


def test_family_report_106276():
  rep = twist_family_report(E106276, 20000)
  assert rep.galois
  assert abs(rep.inert_density - 2 / 3) < 0.02
  assert rep.totally_ramified == [163]
  assert set(rep.set_counts) == {"C+sq", "C+nsq", "C-sq", "C-nsq"}


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(ea.primes_up_to(3000)[1:]))
def test_classification_is_consistent(p):
  E = E106276
  if E.disc_E % p == 0:
    return
  c = classify_prime(E, p)
  assert c.p_star % 4 == 1 and abs(c.p_star) == p
  assert (c.set == "not-inert") == (splitting_type(_field_for(E.F), p) != "inert")
  if c.set != "not-inert":
    assert c.set.startswith("C+" if p % 4 == 1 else "C-")
