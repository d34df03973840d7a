from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadgame.forms import (
    DefiniteForm,
    FormError,
    QuadraticForm,
    diagonalize,
    general_evaluate,
    norm_constants,
    parse_form,
)

F = Fraction


def test_evaluate_cone_point():
    q = QuadraticForm.diagonal([1, 1, -1])
    assert q.evaluate((3, 4, 5)) == 0
    assert q.evaluate((F(3, 5), F(4, 5), 1)) == 0


def test_evaluate_rational_coeffs_exact():
    q = QuadraticForm.diagonal([F(1, 2), -3])
    assert q.evaluate((2, 1)) == F(-1)
    assert isinstance(q.evaluate((2, 1)), Fraction)


def test_split_reorders_positives_first():
    q = QuadraticForm.diagonal([1, -1, 1])
    assert q.perm == (0, 2, 1)
    assert q.k == 2
    q1, q2 = q.split()
    assert q1.coeffs == (F(1), F(1))
    assert q2.coeffs == (F(1),)


def test_split_join_roundtrip():
    q = QuadraticForm.diagonal([2, -3, -1])
    v = (F(1, 3), -4, F(7, 2))
    w, u = q.split_vector(v)
    assert q.join(w, u) == v
    # key relation: Q(v) = q1(w) - q2(u) identically
    assert q.q1.value(w) - q.q2.value(u) == q.evaluate(v)


def test_lcm_and_numerators():
    q = QuadraticForm.diagonal([F(1, 2), F(-1, 3)])
    assert q.s_lcm == 6
    assert q.numerators == (3, 2)


def test_float_coefficients_rejected():
    with pytest.raises(FormError):
        QuadraticForm.diagonal([1.5, -1])


def test_definite_forms_rejected():
    with pytest.raises(FormError):
        QuadraticForm.diagonal([1, 2])
    with pytest.raises(FormError):
        QuadraticForm.diagonal([-1, -2])
    with pytest.raises(FormError):
        QuadraticForm.diagonal([1, 0, -1])


def test_parse_diagonal_and_fractions():
    q = parse_form("1,1,-1")
    assert q.ambient == (F(1), F(1), F(-1))
    q = parse_form("1/2,3,-2")
    assert q.ambient == (F(1, 2), F(3), F(-2))
    with pytest.raises(FormError):
        parse_form("1")
    with pytest.raises(FormError):
        parse_form("1,abc")


def test_diagonalize_hyperbolic_plane():
    # G(x, y) = x*y has matrix [[0, 1/2], [1/2, 0]]
    g = [[0, F(1, 2)], [F(1, 2), 0]]
    q = diagonalize(g)
    assert q.k == 1 and q.dim == 2
    m = q.transform
    for v in [(1, 0), (0, 1), (2, -3), (F(1, 2), F(5, 7))]:
        mv = tuple(sum(m[i][j] * v[j] for j in range(2)) for i in range(2))
        assert q.evaluate(v) == general_evaluate(g, mv)


def test_diagonalize_already_diagonal():
    g = [[1, 0, 0], [0, 1, 0], [0, 0, -1]]
    q = diagonalize(g)
    assert q.ambient == (F(1), F(1), F(-1))


def test_diagonalize_rejects_degenerate_and_definite():
    with pytest.raises(FormError):
        diagonalize([[1, 0], [0, 0]])
    with pytest.raises(FormError):
        diagonalize([[1, 0], [0, 2]])
    with pytest.raises(FormError):
        diagonalize([[1, 2], [1, 0]])  # not symmetric


@settings(max_examples=200, deadline=None)
@given(
    st.lists(
        st.fractions(min_value=-5, max_value=5),
        min_size=3,
        max_size=3,
    )
)
def test_diagonalize_matches_general_form(vec):
    g = [[2, 1, 0], [1, -1, F(1, 2)], [0, F(1, 2), 1]]
    q = diagonalize(g)
    m = q.transform
    mv = tuple(sum(m[i][j] * vec[j] for j in range(3)) for i in range(3))
    assert q.evaluate(vec) == general_evaluate(g, mv)


def test_eucl_norm_constant_closed_form():
    nc = norm_constants(QuadraticForm.diagonal([4, -1]), samples=100)
    assert nc.eucl_q1 == 2.0  # |v|_q = 2|v|
    assert nc.eucl_q2 == 1.0
    nc = norm_constants(QuadraticForm.diagonal([F(1, 4), -1]), samples=100)
    assert nc.eucl_q1 == 2.0


def test_sum_sup_constant_binary():
    # x^2 - y^2: sum <= 2 sup and sup <= sum, so 2 works
    nc = norm_constants(QuadraticForm.diagonal([1, -1]), samples=100)
    assert nc.sum_sup == pytest.approx(2.0)


def test_norm_constants_validated_by_sampling():
    import random

    form = QuadraticForm.diagonal([F(1, 2), 3, -2, -1])
    nc = norm_constants(form, samples=2000)
    q1, q2 = form.split()
    assert nc.sum_sup_sampled <= nc.sum_sup + 1e-12
    rng = random.Random(7)
    for _ in range(2000):
        w = [rng.uniform(-3, 3) for _ in range(q1.dim)]
        u = [rng.uniform(-3, 3) for _ in range(q2.dim)]
        sup = max(max(abs(c) for c in w), max(abs(c) for c in u))
        total = q1.norm(w) + q2.norm(u)
        if total < 1e-9:
            continue
        assert sup <= nc.sum_sup * total + 1e-12
        assert total <= nc.sum_sup * sup + 1e-12
        # the two-sided euclidean sandwich on each block
        l2w = math.sqrt(sum(c * c for c in w))
        assert q1.norm(w) <= nc.eucl_q1 * l2w + 1e-12
        assert l2w <= nc.eucl_q1 * q1.norm(w) + 1e-12


@settings(max_examples=150, deadline=None)
@given(
    st.lists(st.fractions(min_value=-9, max_value=9), min_size=4, max_size=4),
    st.fractions(min_value=-3, max_value=3),
)
def test_norm_sq_homogeneity_exact(vec, t):
    q = DefiniteForm((F(1, 2), F(3), F(2), F(7, 5)))
    scaled = tuple(t * c for c in vec)
    assert q.value(scaled) == t * t * q.value(vec)


def test_definite_form_triangle_inequality_sampled():
    import random

    q = DefiniteForm((F(2), F(1, 3), F(5)))
    rng = random.Random(3)
    for _ in range(500):
        a = [rng.uniform(-4, 4) for _ in range(3)]
        b = [rng.uniform(-4, 4) for _ in range(3)]
        ab = [x + y for x, y in zip(a, b)]
        assert q.norm(ab) <= q.norm(a) + q.norm(b) + 1e-9
        assert q.norm(a) >= 0
