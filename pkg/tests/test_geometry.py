import pytest
from hypothesis import given, strategies as st

from bcjulia import core
from bcjulia.core import E1, E2, I2, ONE, ZERO, Bicomplex
from bcjulia.geometry import (
    Ball1, Discus, Rect, TCartesian, discus_contains, project_region, sample_grid,
)

from strategies import small_bicomplex

radii = st.floats(min_value=0.05, max_value=3.0)


def test_unit_discus_membership():
    d = Discus(ZERO, 1, 1)
    assert discus_contains(d, ZERO)
    assert discus_contains(d, E1 * 0.999)
    assert not discus_contains(d, E1 * 1.001)
    # the boundary belongs to the closed discus only
    assert not discus_contains(d, E1)
    assert discus_contains(d, E1, closed=True)


@given(small_bicomplex, small_bicomplex, radii, radii)
def test_discus_factorises(w, a, r1, r2):
    d = Discus(a, r1, r2)
    w1, w2 = core.to_idempotent(w)
    c1, c2 = core.to_idempotent(a)
    assert discus_contains(d, w) == (abs(w1 - c1) < r1 and abs(w2 - c2) < r2)


@given(small_bicomplex, radii)
def test_t_disc_lies_inside_euclidean_ball(w, r):
    if discus_contains(Discus(ZERO, r, r), w):
        assert core.norm(w) < r


def test_t_disc_converse_fails():
    r = 1.0
    w = E1 * (1.4 * r)
    assert core.norm(w) < r
    assert not discus_contains(Discus(ZERO, r, r), w)


def test_project_region():
    assert project_region(Discus(ZERO, 1, 2), 2) == Ball1(0, 2)
    a = ONE + I2
    d = Discus(a, 0.5, 0.5)
    assert project_region(d, 1) == Ball1(1 - 1j, 0.5)
    assert project_region(d, 2) == Ball1(1 + 1j, 0.5)
    t = TCartesian(Rect(-1 - 1j, 1 + 1j), Ball1(0, 1))
    assert project_region(t, 1) is t.region1
    with pytest.raises(ValueError):
        project_region(t, 3)


def test_invalid_regions():
    with pytest.raises(ValueError):
        Ball1(0, 0)
    with pytest.raises(ValueError):
        Rect(1, 1)
    with pytest.raises(ValueError):
        Discus(ZERO, 1, -1)


def test_rect_membership():
    r = Rect(-1 - 2j, 1 + 2j)
    assert r.center == 0
    assert r.contains(0.5 + 1.9j)
    assert not r.contains(1 + 0j)
    assert r.contains(1 + 0j, closed=True)


def test_tcartesian_contains():
    t = TCartesian(Ball1(0, 1), Rect(-1 - 1j, 1 + 1j))
    assert t.contains(E1 * 0.5 + E2 * (0.9 + 0.9j))
    assert not t.contains(E1 * 0.5 + E2 * 1.5)


def test_single_point_grid():
    d = Discus(Bicomplex.from_reals(0.5, 0, 1, 0), 1, 2)
    assert list(sample_grid(d, 1, 1)) == [d.center]


def test_grid_is_closed_member_and_stable():
    for t in (Discus(ZERO, 1, 1), TCartesian(Rect(-1 - 1j, 1 + 0.5j), Ball1(1j, 0.5))):
        pts = list(sample_grid(t, 5, 4))
        assert pts
        tc = t.as_tcartesian() if isinstance(t, Discus) else t
        assert all(tc.contains(w, closed=True) for w in pts)
        assert pts == list(sample_grid(t, 5, 4))


def test_odd_grid_contains_centre():
    assert ZERO in list(sample_grid(Discus(ZERO, 1, 1), 3, 3))


def test_grid_order_factor_one_outer():
    t = TCartesian(Rect(-1 - 1j, 1 + 1j), Rect(-1 - 1j, 1 + 1j))
    pts = [core.to_idempotent(w) for w in sample_grid(t, 2, 2)]
    assert len(pts) == 16
    firsts = [p.w1 for p in pts]
    assert firsts[:4] == [firsts[0]] * 4
    with pytest.raises(ValueError):
        list(sample_grid(t, 0, 2))
