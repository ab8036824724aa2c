from decimal import Decimal
from itertools import product

import pytest
from hypothesis import assume, given, strategies as st

from quadcal.arith import is_discriminant
from quadcal.surd import (
    QuadPoly,
    QuadSurd,
    Shape,
    SurdError,
    ambiguous_shape,
    canonical_rotation,
    ceil_of,
    cf_step_minus,
    cf_step_plus,
    expand,
    floor_of,
    from_poly,
    is_m_reduced,
    is_reduced,
    literal_shape,
    make_surd,
    matrix_parity_class,
    minimal_period,
    period_matrix,
    sqrt_surd,
    stats,
    to_poly,
)
from oracles import decimal_cf_digits, naive_matrix_product


def value(w: QuadSurd) -> Decimal:
    return (Decimal(w.P) + Decimal(w.D).sqrt()) / Decimal(w.Q)


surds = st.builds(
    lambda P, Q, n: (P, Q, n),
    st.integers(-60, 60),
    st.integers(-40, 40).filter(bool),
    st.integers(2, 400),
).filter(lambda t: is_discriminant(4 * t[2])).map(lambda t: make_surd(2 * t[0], 2 * t[1], 4 * t[2]))


# --- construction ----------------------------------------------------------

def test_make_surd_keeps_canonical_input():
    assert make_surd(1, 2, 5) == QuadSurd(1, 2, 5)
    assert make_surd(0, 2, 12) == QuadSurd(0, 2, 12)


def test_make_surd_rescales_to_primitive_form():
    w = make_surd(1, 3, 5)
    assert (w.D - w.P * w.P) % w.Q == 0
    assert abs(value(w) - (1 + Decimal(5).sqrt()) / 3) < Decimal("1e-50")
    # the number (1 + sqrt 5)/3 has minimal polynomial 9w^2 - 6w - 4, discriminant 180
    assert w == QuadSurd(6, 18, 180)


def test_make_surd_negative_q_is_smaller_root():
    w = make_surd(1, -2, 5)  # -(golden ratio), the smaller root of w^2 + w - 1
    assert abs(value(w) - (1 + Decimal(5).sqrt()) / -2) < Decimal("1e-50")
    assert to_poly(w) == QuadPoly(1, 1, -1)


@pytest.mark.parametrize("args", [(1, 0, 5), (1, 2, 7), (1, 2, 9), (1, 2, -3)])
def test_make_surd_errors(args):
    with pytest.raises(SurdError):
        make_surd(*args)


@given(surds)
def test_canonical_form_invariants(w):
    assert w.Q % 2 == 0 and (w.D - w.P * w.P) % w.Q == 0
    assert is_discriminant(w.D)
    assert make_surd(w.P, w.Q, w.D) == w


def test_from_poly_examples():
    assert from_poly(QuadPoly(1, -1, -1)) == QuadSurd(1, 2, 5)
    w = from_poly(QuadPoly(5, -5, -1))
    assert w == QuadSurd(5, 10, 45)
    assert abs(5 * value(w) ** 2 - 5 * value(w) - 1) < Decimal("1e-50")


def test_to_poly_example():
    assert to_poly(QuadSurd(6, 2, 40)) == QuadPoly(1, -6, -1)


@given(st.integers(1, 30), st.integers(-40, 40), st.integers(-40, 40))
def test_poly_round_trip(a, b, c):
    f = QuadPoly(a, b, c)
    from math import gcd
    assume(gcd(gcd(a, b), c) == 1 and is_discriminant(f.disc))
    assert to_poly(from_poly(f)) == f


# --- predicates ------------------------------------------------------------

@pytest.mark.parametrize("w, red, mred", [
    (QuadSurd(1, 2, 5), True, False),
    (QuadSurd(6, 2, 40), True, False),
    (QuadSurd(5, 2, 5), False, False),
    (QuadSurd(3, 2, 5), False, True),
])
def test_reduced_examples(w, red, mred):
    assert is_reduced(w) is red
    assert is_m_reduced(w) is mred


@given(surds)
def test_predicates_match_decimal_evaluation(w):
    x = value(w)
    xc = (Decimal(w.P) - Decimal(w.D).sqrt()) / Decimal(w.Q)
    assert is_reduced(w) == (x > 1 and -1 < xc < 0)
    assert is_m_reduced(w) == (x > 1 and 0 < xc < 1)
    assert floor_of(w) == int(x.to_integral_value(rounding="ROUND_FLOOR"))
    assert ceil_of(w) == int(x.to_integral_value(rounding="ROUND_CEILING"))


def test_floor_ceil_examples():
    assert floor_of(QuadSurd(1, 2, 5)) == 1
    assert ceil_of(QuadSurd(3, 2, 5)) == 3
    assert floor_of(QuadSurd(6, 2, 40)) == 6


# --- steps and expansions --------------------------------------------------

def test_plus_step_examples():
    assert cf_step_plus(QuadSurd(1, 2, 5)) == (1, QuadSurd(1, 2, 5))
    assert cf_step_plus(QuadSurd(6, 2, 40)) == (6, QuadSurd(6, 2, 40))
    assert cf_step_plus(QuadSurd(4, 4, 40)) == (2, QuadSurd(4, 6, 40))


def test_minus_step_examples():
    assert cf_step_minus(QuadSurd(3, 2, 5)) == (3, QuadSurd(3, 2, 5))
    b, nxt = cf_step_minus(QuadSurd(6, 2, 40))
    assert b == 7 and nxt == QuadSurd(8, 12, 40)  # P' = 14 - 6, Q' = (64 - 40)/2


@given(surds)
def test_steps_keep_canonical_form(w):
    for step in (cf_step_plus, cf_step_minus):
        _, nxt = step(w)
        assert make_surd(nxt.P, nxt.Q, nxt.D) == nxt


@given(surds)
def test_step_closure(w):
    if is_reduced(w):
        assert is_reduced(cf_step_plus(w)[1])
    if is_m_reduced(w):
        assert is_m_reduced(cf_step_minus(w)[1])


def test_expand_examples():
    e = expand(make_surd(1, 2, 45))
    assert (e.preperiod, e.period) == ((3,), (1, 5))
    e = expand(sqrt_surd(12))  # 2*sqrt(3) = (0 + sqrt 48)/2
    assert (e.preperiod, e.period) == ((3,), (2, 6))
    e = expand(make_surd(0, 2, 12))  # sqrt(3)
    assert (e.preperiod, e.period) == ((1,), (1, 2))
    e = expand(QuadSurd(3, 2, 5), "minus")
    assert (e.preperiod, e.period) == ((), (3,))


@given(surds, st.sampled_from(["plus", "minus"]))
def test_expand_matches_decimal_digits(w, kind):
    e = expand(w, kind)
    digits = list(e.preperiod) + list(e.period) * 3
    n = min(len(digits), 12)
    assert digits[:n] == decimal_cf_digits(w.P, w.Q, w.D, n, minus=kind == "minus")


@given(surds)
def test_purely_periodic_criterion(w):
    assert (expand(w, "plus").preperiod == ()) == is_reduced(w)
    assert (expand(w, "minus").preperiod == ()) == is_m_reduced(w)


@given(surds)
def test_expand_deterministic_and_minimal(w):
    e = expand(w)
    assert e == expand(w)
    assert minimal_period(e.period) == e.period
    assert all(b >= 2 for b in expand(w, "minus").period)


@given(surds)
def test_reconstruction_identity(w):
    e = expand(w)
    if e.preperiod:
        return
    M = period_matrix(e.period)
    f = to_poly(w)
    # r w^2 + (s - p) w - q vanishes: proportional to the primitive polynomial
    g = M.r // f.a
    assert (M.r, M.s - M.p, -M.q) == (g * f.a, g * f.b, g * f.c)


def test_stats_examples():
    from quadcal.surd import CFExpansion
    assert stats(CFExpansion("plus", (), (6,))) == {"l": 1, "S": 6, "S_plus": None}
    assert stats(CFExpansion("plus", (), (2, 1, 1))) == {"l": 3, "S": 4, "S_plus": None}
    assert stats(CFExpansion("minus", (), (3,))) == {"l": 1, "S": None, "S_plus": 1}


def test_canonical_rotation_and_minimal_period():
    assert canonical_rotation((2, 1, 1)) == (1, 1, 2)
    assert minimal_period((1, 5, 1, 5)) == (1, 5)


# --- period matrices -------------------------------------------------------

def test_period_matrix_examples():
    assert period_matrix([1]).__dict__ == dict(p=1, q=1, r=1, s=0)
    # (2 1;1 0)(1 1;1 0)(1 1;1 0) = (5 3; 2 1)
    assert period_matrix([2, 1, 1]).__dict__ == dict(p=5, q=3, r=2, s=1)
    assert period_matrix([6]).__dict__ == dict(p=6, q=1, r=1, s=0)


def test_period_matrix_empty():
    with pytest.raises(ValueError):
        period_matrix([])


@given(st.lists(st.integers(1, 20), min_size=1, max_size=12))
def test_period_matrix_against_naive_product(word):
    M = period_matrix(word)
    assert [[M.p, M.q], [M.r, M.s]] == naive_matrix_product(word)
    assert M.det == (-1) ** len(word)


@pytest.mark.parametrize("word, expected", [([1], True), ([2], False), ([2, 1, 1], False),
                                            ([1, 1], True), ([2, 2], True)])
def test_matrix_parity_class_examples(word, expected):
    assert matrix_parity_class(word) is expected


def test_matrix_parity_class_short_words_against_integer_matrices():
    for n in range(1, 7):
        for word in product(range(1, 5), repeat=n):
            M = naive_matrix_product(word)
            reduced = tuple(x % 2 for row in M for x in row)
            assert matrix_parity_class(word) == (reduced in {(1, 0, 0, 1), (1, 1, 1, 0), (0, 1, 1, 1)})


# --- palindromic shapes ----------------------------------------------------

@pytest.mark.parametrize("period, shape", [
    ((6,), Shape.ODD_PALINDROME),
    ((2, 1, 1), Shape.ODD_PALINDROME),  # rotation (1, 2, 1)
    ((1, 2, 3), Shape.NONE),
    ((1, 5), Shape.OFFSET_PALINDROME),
    ((1, 2, 2, 1), Shape.EVEN_PALINDROME),
    ((1, 1, 1, 1, 6), Shape.ODD_PALINDROME),
    ((1, 2, 3, 4), Shape.NONE),
])
def test_ambiguous_shape(period, shape):
    assert ambiguous_shape(period) is shape


def test_literal_shape():
    assert literal_shape((1, 2, 1)) is Shape.ODD_PALINDROME
    assert literal_shape((2, 1, 1)) is Shape.OFFSET_PALINDROME
    assert literal_shape((1, 1, 2)) is Shape.NONE
    assert literal_shape((5, 1)) is Shape.OFFSET_PALINDROME


def test_json_round_trip():
    w = make_surd(1, 3, 5)
    assert QuadSurd.from_json(w.to_json()) == w
    assert w.to_json() == {"P": "6", "Q": "18", "D": "180"}
