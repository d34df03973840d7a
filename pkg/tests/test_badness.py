"""Margins, line boards, supercritical exponents, and torus escapes."""

import math
from fractions import Fraction

import pytest

from quadgame.badness import (
    _surd_cf_terms,
    badness_margin,
    check_strong_exponent,
    classify_line_board,
    exact_margin,
    full_lattice_escape,
    lift_unit_vector,
    margin_profile,
)
from quadgame.forms import parse_form
from quadgame.geometry import GeometryError

CONE = parse_form("1,1,-1")
HYP = parse_form("1,-1")


def brute_margin(form, m, v, sup_limit, s=1):
    """Margin by raw box search, all in exact arithmetic."""
    from itertools import product

    m = Fraction(m)
    best = None
    vv = [Fraction(t) for t in v]
    for x in product(range(-sup_limit, sup_limit + 1), repeat=form.dim):
        if not any(x):
            continue
        if form.evaluate(x) != m:
            continue
        sup = max(abs(t) for t in x)
        dist = max(abs(Fraction(t, sup) - c) for t, c in zip(x, vv))
        value = dist * sup**s
        if best is None or value < best:
            best = value
    return best


# ---------------------------------------------------------------------- #
# margins


def test_float_margin_matches_the_box_oracle():
    v = (Fraction(3, 5), Fraction(4, 5), Fraction(1))
    expected = brute_margin(CONE, 0, v, 20)
    got = badness_margin(CONE, 0, tuple(map(float, v)), sup_limit=20)
    assert got.margin == pytest.approx(float(expected), abs=1e-12)
    v2 = (Fraction(11, 20), Fraction(167, 200), Fraction(1))
    expected2 = brute_margin(CONE, 1, v2, 20)
    got2 = badness_margin(CONE, 1, tuple(map(float, v2)), sup_limit=20)
    assert got2.margin == pytest.approx(float(expected2), rel=1e-12)


def test_exact_margin_agrees_with_float():
    v = (Fraction(11, 20), Fraction(167, 200), Fraction(1))
    ex, arg = exact_margin(CONE, 0, v, 100)
    fl = badness_margin(CONE, 0, tuple(map(float, v)), sup_limit=100)
    assert fl.margin == pytest.approx(float(ex), rel=1e-12)
    assert fl.argmin == arg


def test_margin_vanishes_on_a_lattice_direction():
    rep = badness_margin(CONE, 0, (0.6, 0.8, 1.0), sup_limit=100)
    assert rep.margin == 0.0
    assert rep.argmin == (3, 4, 5)


def test_margin_profile_never_increases():
    for v in [(0.6, 0.8, 1.0), (0.55, 0.835, 1.0), (-0.28, 0.96, 1.0)]:
        prof = margin_profile(CONE, 0, v, limits=(50, 200, 800))
        margins = [p.margin for p in prof]
        assert margins == sorted(margins, reverse=True)
        assert [p.sup_limit for p in prof] == [50, 200, 800]


def test_empty_range_reports_infinite_margin():
    mixed = parse_form("2,-3,-1")
    rep = badness_margin(mixed, 5, (1.0, 0.5, 0.5), sup_limit=1)
    assert rep.margin == math.inf
    assert rep.count == 0 and rep.argmin is None


def test_lift_onto_the_light_cone():
    assert lift_unit_vector(CONE, (0.6, 0.8)) == (0.6, 0.8, 1.0)
    with pytest.raises(GeometryError, match="q1"):
        lift_unit_vector(CONE, (0.5, 0.5))
    with pytest.raises(GeometryError):
        lift_unit_vector(CONE, (0.6, 0.8, 0.0))
    with pytest.raises(GeometryError):
        lift_unit_vector(parse_form("1,-1,-1"), (1.0,))


# ---------------------------------------------------------------------- #
# line boards


def test_surd_continued_fraction_terms():
    assert _surd_cf_terms(2, 0, 1, 6) == [1, 2, 2, 2, 2, 2]
    assert _surd_cf_terms(2, 0, 2, 6) == [0, 1, 2, 2, 2, 2]  # 1/sqrt(2)
    assert _surd_cf_terms(7, 0, 1, 9) == [2, 1, 1, 1, 4, 1, 1, 1, 4]


def test_zero_level_rational_root_has_no_bad_directions():
    res = classify_line_board(HYP, 0)
    assert res.kind == "empty"
    assert res.root == (1, 1)
    assert res.witness == (1, 1)
    assert HYP.evaluate(res.witness) == 0
    # the witness direction has margin exactly zero
    ex, arg = exact_margin(HYP, 0, (1, 1), 10)
    assert ex == 0 and arg == (1, 1)


def test_nonzero_level_rational_root_protects_everything():
    res = classify_line_board(HYP, 3)
    assert res.kind == "all-bad"
    assert res.epsilon == Fraction(1, 1)
    ex, arg = exact_margin(HYP, 3, (1, 1), 200)
    assert ex == Fraction(1) and arg == (2, 1)


def test_scaled_rational_root():
    form = parse_form("4,-9")
    res = classify_line_board(form, 0)
    assert res.kind == "empty"
    assert res.root == (2, 3)
    assert res.witness == (3, 2)
    assert form.evaluate(res.witness) == 0


def test_irrational_root_board():
    res = classify_line_board(parse_form("2,-1"), 1)
    assert res.kind == "irrational"
    assert 0 < res.k_constant < 0.5
    assert res.k_constant == pytest.approx(1 - 1 / math.sqrt(2), abs=1e-12)
    assert res.threshold == pytest.approx(math.sqrt(2) - 1, abs=1e-12)
    # a genuinely positive margin survives a deep search
    rep = badness_margin(parse_form("2,-1"), 1, (1 / math.sqrt(2), 1.0), sup_limit=2000)
    assert rep.margin > 0


def test_line_board_needs_one_variable_per_side():
    with pytest.raises(GeometryError):
        classify_line_board(CONE, 1)


# ---------------------------------------------------------------------- #
# supercritical exponents


def test_strong_exponent_threshold_and_margins():
    rep = check_strong_exponent(CONE, 1, 3.0, count=5, sup_limit=300, seed=20)
    assert rep.y_threshold == 5
    assert all(m > 0 for m in rep.margins)
    assert rep.min_margin > 0
    # the threshold really is the first height that works
    a, b = 4.0, 2.0
    assert a * 4 ** (-1.0) + b * 4 ** (-4.0) >= 1.0
    assert a * 5 ** (-1.0) + b * 5 ** (-4.0) < 1.0


def test_strong_exponent_rejects_bad_inputs():
    with pytest.raises(ValueError):
        check_strong_exponent(CONE, 1, 2.0)
    with pytest.raises(ValueError):
        check_strong_exponent(CONE, 0, 3.0)
    with pytest.raises(ValueError):
        check_strong_exponent(parse_form("1,-1,-1"), 1, 3.0)


# ---------------------------------------------------------------------- #
# torus escapes


def test_rational_escape_is_exact():
    rep = full_lattice_escape((Fraction(3, 5), Fraction(4, 5), Fraction(1)), 1e-2, 100)
    assert rep.found and rep.n == 5 and rep.gap == 0.0
    # nothing smaller works at this tolerance
    strict = full_lattice_escape((Fraction(3, 5), Fraction(4, 5), Fraction(1)), 1e-2, 4)
    assert not strict.found
    assert "increase n_max" in strict.detail


def test_float_escape_finds_a_near_return():
    rep = full_lattice_escape((math.sqrt(2) - 1, 0.5, 1.0), 0.05, 10**5)
    assert rep.found
    assert rep.gap < 0.05
    check = max(
        min(c * rep.n % 1.0, 1.0 - c * rep.n % 1.0) for c in (math.sqrt(2) - 1, 0.5, 1.0)
    )
    assert check == pytest.approx(rep.gap, abs=1e-9)


def test_escape_scans_in_order():
    # the first hit is reported, not just any hit
    rep = full_lattice_escape((Fraction(1, 2),), 0.6, 10)
    assert rep.n == 1  # distance 1/2 is already below 0.6
    rep2 = full_lattice_escape((Fraction(1, 2),), 0.3, 10)
    assert rep2.n == 2
