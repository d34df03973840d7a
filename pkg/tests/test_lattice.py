from __future__ import annotations

import itertools
import math
from fractions import Fraction

import pytest

from quadgame.forms import QuadraticForm
from quadgame.lattice import (
    EnumerationBudgetError,
    LatticePoint,
    Window,
    core_points,
    enumerate_window,
    equiv_key,
    point_json,
    shell_store,
    sup_normalize,
)

from helpers import box_oracle, related

F = Fraction

CONE = QuadraticForm.diagonal([1, 1, -1])
HYP = QuadraticForm.diagonal([1, -1])
MIXED = QuadraticForm.diagonal([2, -3, -1])


def test_cone_shell_count_frozen():
    pts = enumerate_window(CONE, 0, Window.from_norms(1, 5))
    assert len(pts) == 56
    assert all(p.q1_sq - p.q2_sq == 0 for p in pts)


def test_hyperbola_m3_frozen():
    pts = enumerate_window(HYP, 3, Window.from_norms(0, 10))
    assert sorted(p.x for p in pts) == [(-2, -1), (-2, 1), (2, -1), (2, 1)]


def test_cone_m1_small_shell_frozen():
    pts = enumerate_window(CONE, 1, Window.from_norms(0, 1))
    assert len(pts) == 12


def test_output_lexicographic():
    pts = enumerate_window(CONE, 0, Window.from_norms(1, 13))
    xs = [p.x for p in pts]
    assert xs == sorted(xs)


def test_key_relation_exact():
    for m in (0, 1, -1, 3):
        for p in enumerate_window(MIXED, m, Window.from_norms(0, 12)):
            assert p.q1_sq - p.q2_sq == m
            assert p.sup == max(abs(c) for c in p.x)


def test_exact_open_closed_boundaries():
    # |z| = 3 shell on the cone at m = 1
    closed = enumerate_window(CONE, 1, Window(F(9), F(9)))
    assert len(closed) == 16  # x^2+y^2 = 10: (±1,±3),(±3,±1) for z = ±3
    assert all(abs(p.x[2]) == 3 for p in closed)
    open_lo = enumerate_window(CONE, 1, Window(F(9), F(16), lo_open=True))
    assert all(abs(p.x[2]) == 4 for p in open_lo)


def test_irrational_window_bound_exact():
    # lo = sqrt(2): shells with z^2 >= 2, i.e. |z| >= 2
    pts = enumerate_window(CONE, 0, Window(F(2), F(9)))
    assert {abs(p.x[2]) for p in pts} == {2, 3}


@pytest.mark.parametrize("m", [0, 1, -1, 3])
@pytest.mark.parametrize(
    "form", [CONE, HYP, MIXED], ids=["cone", "hyp", "mixed"]
)
def test_enumeration_matches_box_oracle(form, m):
    for win in [
        Window.from_norms(0, 9),
        Window(F(2), F(50), lo_open=True),
        Window.from_norms(3, 12, hi_open=True),
    ]:
        got = {p.x for p in enumerate_window(form, m, win)}
        want = box_oracle(form, m, win)
        assert got == want


def test_sup_cap_filters_only_large_points():
    full = {p.x for p in enumerate_window(CONE, 0, Window.from_norms(1, 12))}
    capped = {
        p.x
        for p in enumerate_window(CONE, 0, Window.from_norms(1, 12), sup_cap=7)
    }
    assert capped == {x for x in full if max(abs(c) for c in x) <= 7}


def test_budget_overflow_raises():
    with pytest.raises(EnumerationBudgetError):
        enumerate_window(MIXED, 1, Window.from_norms(0, 10**7), budget=1000)


def test_core_set_lightcone_empty():
    cs = core_points(CONE, 0)
    assert cs.points == ()
    assert cs.min_gap == math.inf


def test_core_set_level_frozen():
    cs = core_points(HYP, 3)
    assert sorted(p.x for p in cs.points) == [(-2, -1), (-2, 1), (2, -1), (2, 1)]
    cs = core_points(CONE, 1)
    xs = {p.x for p in cs.points}
    assert {(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)} <= xs
    assert all(abs(p.x[2]) <= 2 for p in cs.points)
    assert len(cs.points) == 28
    assert cs.min_gap == pytest.approx(0.5)  # p(1,2,2) vs p(1,1,1)


def test_core_set_variant_mismatch():
    with pytest.raises(ValueError):
        core_points(CONE, 0, variant="level")
    with pytest.raises(ValueError):
        core_points(CONE, 1, variant="lightcone")


def test_normalize_examples():
    assert sup_normalize((3, 4, 5)) == (F(3, 5), F(4, 5), F(1))
    assert sup_normalize((-2, 1)) == (F(-1), F(1, 2))
    with pytest.raises(ValueError):
        sup_normalize((0, 0))


def test_equiv_key_block_vs_scalar_example():
    a, b = (3, 4, 5), (-3, -4, 5)
    assert equiv_key(CONE, a, "block") == equiv_key(CONE, b, "block")
    assert equiv_key(CONE, a, "scalar") != equiv_key(CONE, b, "scalar")
    assert equiv_key(CONE, a, "scalar") == equiv_key(CONE, (6, 8, 10), "scalar")


@pytest.mark.parametrize("relation", ["scalar", "block", "q1_ratio", "q2_ratio"])
def test_equiv_key_sound_vs_definition(relation):
    pts = []
    for m in (0, 1, 3):
        pts.extend(p.x for p in enumerate_window(CONE, m, Window.from_norms(0, 10)))
    for a, b in itertools.combinations(pts, 2):
        same_key = equiv_key(CONE, a, relation) == equiv_key(CONE, b, relation)
        assert same_key == related(CONE, a, b, relation), (a, b, relation)


def test_point_json_shape():
    p = LatticePoint.build(CONE, (3, 4, 5))
    assert point_json(p) == {
        "x": [3, 4, 5],
        "q1_sq": "25/1",
        "q2_sq": "25/1",
        "sup": 5,
    }


def test_shell_store_matches_enumeration():
    st = shell_store(CONE, 0, sup_cap=60)
    win = Window.from_norms(1, 40)
    pts, sup, norm = st.window_arrays(win)
    direct = enumerate_window(CONE, 0, win, sup_cap=60)
    assert sorted(map(tuple, pts.tolist())) == [p.x for p in direct]
    assert len(sup) == len(pts) == len(norm)
    # normalized rows really are x / sup
    import numpy as np

    assert np.allclose(norm * sup[:, None], pts.astype(float))


def test_shell_store_incremental_consistency():
    st = shell_store(MIXED, 1, sup_cap=40)
    first, _, _ = st.window_arrays(Window.from_norms(0, 5))
    second, _, _ = st.window_arrays(Window.from_norms(0, 11))
    direct = {p.x for p in enumerate_window(MIXED, 1, Window.from_norms(0, 11), sup_cap=40)}
    assert {tuple(r) for r in second.tolist()} == direct
    assert {tuple(r) for r in first.tolist()} <= direct
