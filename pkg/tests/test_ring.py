"""Polynomial arithmetic, parsing/printing, and monomial orders."""

import itertools

import pytest

from fpsing import (
    Block,
    GREVLEX,
    LEX,
    ParseError,
    Polynomial,
    Ring,
    format_poly,
    parse_poly,
)
from conftest import rand_poly, seeded


def test_parse_basic():
    R = Ring(2, ("x", "y"))
    f = parse_poly("x^2 + x*y + 1", R)
    assert str(f) == "x^2 + x*y + 1"
    assert parse_poly("x - y", R) == parse_poly("x + y", R)
    assert parse_poly("2*x", R).is_zero
    assert parse_poly("(x + y)^2", R) == parse_poly("x^2 + y^2", R)


def test_parse_errors():
    R = Ring(3, ("x", "y"))
    with pytest.raises(ParseError):
        parse_poly("x + w", R)
    with pytest.raises(ParseError):
        parse_poly("x ^", R)
    with pytest.raises(ParseError):
        parse_poly("x y", R)  # juxtaposition is not multiplication
    with pytest.raises(ParseError):
        parse_poly("x $ y", R)


def test_print_parse_roundtrip():
    rng = seeded(11)
    for p in (2, 3, 5):
        R = Ring(p, ("x", "y", "z"))
        for _ in range(60):
            f = rand_poly(R, rng)
            assert parse_poly(format_poly(f), R) == f


def test_ring_axioms_random():
    rng = seeded(12)
    for p in (2, 3, 5):
        R = Ring(p, ("x", "y", "z"))
        for _ in range(60):
            f, g, h = (rand_poly(R, rng) for _ in range(3))
            assert f + g == g + f
            assert f * g == g * f
            assert (f + g) * h == f * h + g * h
            assert (f * g) * h == f * (g * h)
            assert (f - f).is_zero
            assert f * R.one() == f
            assert (f * R.zero()).is_zero


def test_frobenius_matches_repeated_multiplication():
    rng = seeded(13)
    for p in (2, 3, 5):
        R = Ring(p, ("x", "y", "z"))
        for _ in range(100):
            f = rand_poly(R, rng)
            assert f.frobenius(1) == f**p
        f = rand_poly(R, rng, max_terms=2, max_deg=2)
        assert f.frobenius(2) == f ** (p * p)


def test_pow_square_and_multiply():
    R = Ring(5, ("x", "y"))
    f = parse_poly("x + 2*y", R)
    acc = R.one()
    for k in range(8):
        assert f**k == acc
        acc = acc * f


def _all_monomials(nvars, max_deg):
    for exps in itertools.product(range(max_deg + 1), repeat=nvars):
        if sum(exps) <= max_deg:
            yield exps


@pytest.mark.parametrize("order", [GREVLEX, LEX, Block(1), Block(2)])
def test_monomial_order_axioms_exhaustive(order):
    monos = list(_all_monomials(3, 4))
    keys = {m: order.key(m) for m in monos}
    # total order: distinct monomials have distinct keys
    assert len(set(keys.values())) == len(monos)
    zero = (0, 0, 0)
    small = [m for m in monos if sum(m) <= 2]
    for a in small:
        # 1 is minimal
        if a != zero:
            assert keys[a] > keys[zero]
        for b in small:
            if keys[a] >= keys[b]:
                continue
            # multiplicative compatibility
            for c in small:
                ac = tuple(x + y for x, y in zip(a, c))
                bc = tuple(x + y for x, y in zip(b, c))
                assert order.key(ac) < order.key(bc)


def test_block_order_eliminates_first_block():
    order = Block(1)
    # any monomial containing the first variable beats any that does not
    assert order.key((1, 0, 0)) > order.key((0, 5, 5))


def test_degree_and_leads():
    R = Ring(3, ("x", "y"))
    f = parse_poly("x^2*y + y^2", R)
    assert f.total_degree() == 3
    assert R.zero().total_degree() == -1
    exps, coeff = f.lead()
    assert exps == (2, 1) and coeff == 1
