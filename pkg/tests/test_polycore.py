from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from polyrec.errors import ArityMismatch, NonIntegerCoefficient, NotPrime, ZeroPolynomial
from polyrec.linalg import det, nullspace, rank
from polyrec.polycore import (ModPoly, MultiPoly, UniPoly, arith, clear_denominators,
                              compose, evaluate, monomials_up_to, reduce_mod)

x0, x1, x2 = MultiPoly.gens(3)

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exps3 = st.tuples(*[st.integers(0, 3)] * 3)


@st.composite
def polys(draw, nvars=3, max_terms=4):
    e = st.tuples(*[st.integers(0, 3)] * nvars)
    terms = draw(st.dictionaries(e, coeffs, max_size=max_terms))
    return MultiPoly(nvars, terms)


points = st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3), min_size=3, max_size=3)


def test_additive_inverse():
    assert arith("add", x1 * x2, -(x1 * x2)).is_zero()


def test_difference_of_squares():
    assert (x1 + x2) * (x1 - x2) == x1 ** 2 - x2 ** 2


def test_scale_coefficientwise():
    p = x0 * x2 - x1 ** 2 - x0 * x1
    assert arith("scale", p, 6) == 6 * x0 * x2 - 6 * x1 ** 2 - 6 * x0 * x1


def test_arity_mismatch():
    with pytest.raises(ArityMismatch):
        x0 + MultiPoly.var(0, 2)


def test_compose_examples():
    y = MultiPoly.var(0, 1)
    assert compose(y ** 2, [y ** 2]) == y ** 4
    p = x0 * x2 - x1
    assert compose(p, [x0, x1, x2]) == p
    b, c = MultiPoly.gens(2)
    assert compose(b * c, [b * c, c + 1]) == b * c ** 2 + b * c


def test_compose_arity():
    with pytest.raises(ArityMismatch):
        compose(x0 * x1 * x2, [x0, x1])


def test_evaluate_examples():
    b, c = MultiPoly.gens(2)
    assert evaluate(b * c, [3, 4]) == 12
    assert evaluate(b * c, [24, 5]) == 120
    assert evaluate(MultiPoly.zero(2), [7, Fraction(1, 3)]) == 0
    with pytest.raises(ArityMismatch):
        evaluate(b * c, [1])


def test_clear_denominators():
    assert clear_denominators(Fraction(1, 2) * x0 + Fraction(1, 3) * x1) == (6, 3 * x0 + 2 * x1)
    assert clear_denominators(x0 - 4 * x2) == (1, x0 - 4 * x2)
    assert clear_denominators(Fraction(2, 4) * x0) == (2, x0)
    with pytest.raises(ZeroPolynomial):
        clear_denominators(MultiPoly.zero(3))


def test_reduce_mod():
    assert reduce_mod(6 * x0 - 5 * x1, 5) == ModPoly(5, 3, {(1, 0, 0): 1})
    assert reduce_mod(5 * x0, 5).is_zero()
    assert not reduce_mod(3 * x0 - 2 * x1 + 4, 7).is_zero()
    with pytest.raises(NonIntegerCoefficient):
        reduce_mod(x0 / 2, 5)
    with pytest.raises(NotPrime):
        reduce_mod(x0, 6)


def test_zero_has_no_degree():
    assert MultiPoly.zero(2).degree is None
    assert (x0 * x1 ** 2).degree == 3


def test_grlex_order_and_printing():
    p = x0 * x1 + x2 ** 2 + x0 ** 2 + 1 + x1
    assert p.monomials() == ((2, 0, 0), (1, 1, 0), (0, 0, 2), (0, 1, 0), (0, 0, 0))
    assert str(x0 * x2 - x1 ** 2 - x0 * x1) == "-x0*x1 + x0*x2 - x1^2"
    assert str(Fraction(1, 2) * x0 - 3) == "1/2*x0 - 3"
    assert monomials_up_to(2, 2) == [(2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)]


def test_degree_of_product():
    p, q = x0 ** 2 + x1, x1 * x2 - 3
    assert (p * q).degree == p.degree + q.degree


def test_unipoly():
    p = UniPoly.x_plus(1) ** 2
    assert p.coeffs == (1, 2, 1)
    assert p(3) == 16
    assert str(p) == "x^2 + 2*x + 1"
    assert UniPoly([0, 0]).degree is None
    assert (p - p).is_zero()
    assert p.eval_mod(3, 7) == 2


@settings(max_examples=400, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a


@settings(max_examples=300, deadline=None)
@given(polys(), polys(), polys(), polys(), points)
def test_compose_commutes_with_evaluate(f, g0, g1, g2, v):
    gs = [g0, g1, g2]
    assert compose(f, gs).evaluate(v) == f.evaluate([g.evaluate(v) for g in gs])


@settings(max_examples=200, deadline=None)
@given(polys())
def test_clear_denominators_property(p):
    if p.is_zero():
        return
    a, q = clear_denominators(p)
    assert q.has_integer_coefficients()
    assert q == p.scale(a)
    # minimality: no smaller positive multiple is integral
    assert all(not p.scale(b).has_integer_coefficients() for b in range(1, a))


@settings(max_examples=200, deadline=None)
@given(polys(), points)
def test_evaluate_matches_sympy(p, v):
    xs = sp.symbols("x0:3")
    expr = sum(sp.Rational(c.numerator, c.denominator) * sp.Mul(*[x ** k for x, k in zip(xs, e)])
               for e, c in p.terms)
    ref = sp.sympify(expr).subs(dict(zip(xs, [sp.Rational(t.numerator, t.denominator) for t in v])))
    assert p.evaluate(v) == Fraction(int(sp.numer(ref)), int(sp.denom(ref)))


@settings(max_examples=150, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=5, max_size=5), min_size=1, max_size=5))
def test_nullspace_against_sympy(rows):
    basis = nullspace(rows, 5)
    assert len(basis) == len(sp.Matrix(rows).nullspace())
    for v in basis:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
        lead = next(x for x in v if x)
        assert lead > 0
    assert rank(rows) == sp.Matrix(rows).rank()


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_against_sympy(m):
    assert det(m) == int(sp.Matrix(m).det())
