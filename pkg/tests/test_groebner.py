"""Ideal algebra: bases, membership, colon/saturate/intersect/eliminate,
Frobenius powers and preimages, dimension."""

import math

import pytest

from fpsing import (
    GREVLEX,
    Ideal,
    Ring,
    colon,
    colon_element,
    eliminate,
    endo_preimage,
    frobenius_power,
    intersect,
    krull_dimension,
    parse_poly,
    saturate,
    standard_monomials,
    vs_dimension,
)
from conftest import rand_poly, seeded


def mk(p, names):
    return Ring(p, tuple(names.split()))


def ideal(ring, *gens):
    return Ideal(ring, [parse_poly(g, ring) for g in gens])


def test_groebner_reduced_basis():
    R = mk(2, "x y")
    I = ideal(R, "x^2 + y", "x*y + x")
    gb = I.groebner().elements
    # every generator reduces to zero, basis elements are monic
    for g in I.gens:
        assert I.contains(g)
    for b in gb:
        assert b.lead()[1] == 1
    # no basis lead divides another basis element's support
    for i, b in enumerate(gb):
        for j, c in enumerate(gb):
            if i != j:
                from fpsing.ring import monomial_divides

                assert not any(monomial_divides(b.lead()[0], e)
                               for e in c.terms)


def test_membership_products():
    rng = seeded(21)
    R = mk(3, "x y z")
    for _ in range(30):
        gens = [rand_poly(R, rng) for _ in range(2)]
        I = Ideal(R, gens)
        f = sum((rand_poly(R, rng) * g for g in gens), R.zero())
        assert I.contains(f)


def _linear_membership(f, A, bound_exps):
    """Exhaustive linear-algebra membership for A containing pure powers
    x_i^(d_i): decide f in A by row reduction modulo m^D, D = sum(d_i-1)+1."""
    ring = A.ring
    p = ring.p
    n = ring.nvars
    D = sum(d - 1 for d in bound_exps) + 1
    import itertools

    monos = [e for e in itertools.product(range(D), repeat=n) if sum(e) < D]
    index = {m: i for i, m in enumerate(monos)}

    def to_vec(g):
        v = [0] * len(monos)
        for e, c in g.terms.items():
            if sum(e) < D:
                v[index[e]] += c
        return [x % p for x in v]

    rows = []
    from fpsing import Polynomial

    for g in A.gens:
        for m in monos:
            prod = Polynomial(ring, {m: 1}) * g
            rows.append(to_vec(prod))
    target = to_vec(f)
    # Gaussian elimination: is target in the row span?
    ncols = len(monos)
    pivots = {}
    for row in rows:
        row = row[:]
        for c, prow in pivots.items():
            if row[c]:
                fct = row[c]
                row = [(x - fct * y) % p for x, y in zip(row, prow)]
        lead = next((c for c in range(ncols) if row[c]), None)
        if lead is not None:
            inv = pow(row[lead], -1, p)
            pivots[lead] = [(x * inv) % p for x in row]
    for c, prow in pivots.items():
        if target[c]:
            fct = target[c]
            target = [(x - fct * y) % p for x, y in zip(target, prow)]
    return not any(target)


def test_membership_matches_linear_algebra():
    rng = seeded(22)
    for p in (2, 3):
        R = mk(p, "x y")
        for trial in range(15):
            d1, d2 = rng.randrange(2, 4), rng.randrange(2, 4)
            gens = [R.var("x") ** d1, R.var("y") ** d2,
                    rand_poly(R, rng, max_terms=2, max_deg=2)]
            A = Ideal(R, gens)
            for _ in range(6):
                f = rand_poly(R, rng, max_terms=3, max_deg=3)
                assert A.contains(f) == _linear_membership(f, A, (d1, d2))


def test_colon_saturate_intersect_properties():
    rng = seeded(23)
    for p in (2, 3):
        R = mk(p, "x y z")
        for _ in range(50):
            A = Ideal(R, [rand_poly(R, rng) for _ in range(2)])
            B = Ideal(R, [rand_poly(R, rng)])
            C = colon(A, B)
            assert C.contains_ideal(A)  # A subset (A:B)
            for c in C.gens:  # (A:B)*B subset A
                for b in B.gens:
                    assert A.contains(c * b)
            M = intersect(A, B)
            assert A.contains_ideal(M) and B.contains_ideal(M)
            S1 = saturate(A, B)
            assert saturate(S1, B).equals(S1)  # idempotent


def test_colon_examples():
    R = mk(2, "x y")
    A = ideal(R, "y^2", "x^2", "x*y")
    C = colon_element(A, parse_poly("y", R))
    assert C.equals(ideal(R, "x", "y"))
    X = ideal(R, "x")
    assert colon(X, Ideal(R, [])).is_unit_ideal()


def test_intersect_example():
    R = mk(2, "x y")
    got = intersect(ideal(R, "x"), ideal(R, "y"))
    assert got.equals(ideal(R, "x*y"))


def test_eliminate():
    R = mk(2, "x y z")
    # z = x + y on the "diagonal" ideal
    A = ideal(R, "z + x + y")
    E = eliminate(A, ["z"])
    assert E.is_zero_ideal()
    A2 = ideal(R, "z + x", "z + y")
    E2 = eliminate(A2, ["z"])
    assert E2.equals(ideal(R, "x + y"))


def test_frobenius_power_generator_independence():
    rng = seeded(24)
    R = mk(2, "x y")
    for _ in range(20):
        gens = [rand_poly(R, rng) for _ in range(2)]
        A = Ideal(R, gens)
        # same ideal, redundant generating set
        extra = gens + [gens[0] + rand_poly(R, rng) * gens[1]]
        B = Ideal(R, extra)
        assert frobenius_power(A, 1).equals(frobenius_power(B, 1))


def test_endo_preimage_soundness_and_examples():
    R = mk(2, "x y")
    A = ideal(R, "x^2")
    P = endo_preimage(A, 1)
    assert P.equals(ideal(R, "x"))
    for u in P.gens:
        assert A.contains(u.frobenius(1))
    # radical ideal: preimage is itself
    B = ideal(R, "x*y")
    assert endo_preimage(B, 1).equals(B)


def test_krull_dimension():
    R = mk(2, "x y z")
    assert krull_dimension(Ideal(R, [])) == 3
    assert krull_dimension(ideal(R, "x")) == 2
    assert krull_dimension(ideal(R, "x", "y", "z")) == 0
    assert krull_dimension(ideal(R, "x*y")) == 2
    assert krull_dimension(ideal(R, "1 + x*y")) == 2
    assert krull_dimension(Ideal(R, [R.one()])) == -1


def test_vs_dimension_and_standard_monomials():
    R = mk(2, "x y")
    A = ideal(R, "x^2", "x*y", "y^3")
    assert sorted(standard_monomials(A)) == sorted(
        [(0, 0), (1, 0), (0, 1), (0, 2)])
    assert vs_dimension(A) == 4
    assert vs_dimension(ideal(R, "x")) == math.inf
    assert vs_dimension(Ideal(R, [R.one()])) == 0


def test_normal_form_is_canonical():
    R = mk(3, "x y z")
    A = ideal(R, "x^2 + y", "y^2 + z")
    f = parse_poly("x^4", R)
    g = parse_poly("x^4 + x^2 + y", R)  # differs by a generator
    assert A.normal_form(f) == A.normal_form(g)
