import pytest

from artifact.curve_local import CurveModel
from artifact.selmer_bounds import (HypothesesError, InconsistentParityError, RootNumberError, add_points,
                                    certified_rank, kummer_class, point_class_coordinates, point_search,
                                    root_number, selmer_rank_bounds, selmer_rank_exact)
from artifact.star_class import _field_for, is_square

E9032 = CurveModel((3, -7, 0, 1))
E106276 = CurveModel((169, -54, -1, 1))
EPS_9032 = 1  # additive at 2, so supplied rather than computed


def test_interval_9032():
  r = selmer_rank_bounds(E9032)
  assert (r.lower, r.upper) == (1, 2)
  assert r.star_invariants == [2]
  assert all(r.flags.values())


def test_interval_106276():
  r = selmer_rank_bounds(E106276)
  assert (r.lower, r.upper) == (2, 3)
  assert (r.c_star_rank, r.c_tilde_rank) == (2, 3)


def test_exact_by_parity():
  assert selmer_rank_exact(E9032, EPS_9032).exact == 2
  assert selmer_rank_exact(E106276, -1).exact == 3
  r = selmer_rank_exact(E9032, -1)
  assert r.exact == 1 and r.root_number.provenance == "user-supplied"


def test_root_number():
  eps = root_number(E9032, override=-1)
  assert (eps.value, eps.provenance) == (-1, "user-supplied")
  for E in (E9032, E106276):  # both additive at 2
    with pytest.raises(RootNumberError, match="p=2"):
      root_number(E)
  with pytest.raises(RootNumberError):
    root_number(E9032, override=3)


def test_inconsistent_parity():
  r = selmer_rank_bounds(E9032)
  r.upper = r.lower + 2  # corrupt the interval
  with pytest.raises(InconsistentParityError):
    selmer_rank_exact(E9032, -1, report=r)


def test_hypotheses_error():
  with pytest.raises(HypothesesError, match="rational 2-torsion"):
    selmer_rank_bounds(CurveModel((0, -60, 11, 1)))


def test_kummer_identity_and_torsion_free_doubling():
  K = _field_for(E9032.F)
  assert is_square(K, kummer_class(E9032, None).representative)
  P = (3, 3)
  twoP = add_points(E9032, P, P)
  assert E9032.contains(twoP)
  assert is_square(K, kummer_class(E9032, twoP).representative)


def test_kummer_is_a_homomorphism():
  K = _field_for(E9032.F)
  P, Q = (3, 3), (-1, 3)
  S = add_points(E9032, P, Q)
  assert E9032.contains(S)
  a = kummer_class(E9032, P).representative
  b = kummer_class(E9032, Q).representative
  c = kummer_class(E9032, S).representative
  assert is_square(K, a * b * c)
  cp = point_class_coordinates(E9032, P)
  cq = point_class_coordinates(E9032, Q)
  cs = point_class_coordinates(E9032, S)
  assert [(x + y) % 2 for x, y in zip(cp, cq)] == [x % 2 for x in cs]


def test_point_search_and_certified_rank():
  pts = point_search(E9032, 20)
  assert (3, 3) in pts and (-1, 3) in pts
  assert all(E9032.contains(P) for P in pts)
  assert certified_rank(E9032, pts) == 2
  pts = point_search(E106276, 60)
  assert certified_rank(E106276, pts) == 3
  assert certified_rank(E9032, []) == 0
