"""Shared fixtures: corpus rings and random object helpers."""

import random

import pytest

from fpsing import Ideal, LocalRing, Ring, intersect, parse_poly


def make_local(p, variables, gens):
    ring = Ring(p, tuple(variables.split()))
    J = Ideal(ring, [parse_poly(g, ring) for g in gens])
    return LocalRing(ring, J, assumed_origin_components=True)


def example61_ring(p=2):
    ring = Ring(p, ("u", "v", "y", "z", "t"))
    comp1 = Ideal(ring, [parse_poly("t", ring)])
    comp2 = Ideal(ring, [parse_poly(g, ring)
                         for g in ("u*v", "u*z", "z*(v - y^2)")])
    J = intersect(comp1, comp2)
    return LocalRing(ring, J, assumed_origin_components=True)


def example62_ring(p=2):
    ring = Ring(p, ("u", "v", "y", "z", "t", "s"))
    comp1 = Ideal(ring, [parse_poly("t", ring), parse_poly("s", ring)])
    comp2 = Ideal(ring, [parse_poly(g, ring)
                         for g in ("u*v", "u*z", "z*(v - y^2)")])
    J = intersect(comp1, comp2)
    return LocalRing(ring, J, assumed_origin_components=True)


def singh_ring(p=2):
    return make_local(p, "u v y z", ["u*v", "u*z", "z*(v - y^2)"])


def twoplane_ring(p=2):
    return make_local(p, "x y u v", ["x*u", "x*v", "y*u", "y*v"])


def cusp_ring():
    return make_local(2, "x y", ["y^2 + x^3"])


def nonreduced_ring():
    return make_local(2, "x y", ["x^2", "x*y"])


@pytest.fixture
def e61():
    return example61_ring(2)


@pytest.fixture
def singh():
    return singh_ring(2)


@pytest.fixture
def twoplane():
    return twoplane_ring(2)


@pytest.fixture
def cusp():
    return cusp_ring()


def rand_poly(ring, rng, max_terms=4, max_deg=3):
    from fpsing import Polynomial

    terms = {}
    for _ in range(rng.randrange(1, max_terms + 1)):
        exps = [0] * ring.nvars
        for _ in range(rng.randrange(0, max_deg + 1)):
            exps[rng.randrange(ring.nvars)] += 1
        c = rng.randrange(1, ring.p)
        key = tuple(exps)
        terms[key] = (terms.get(key, 0) + c) % ring.p
    return Polynomial(ring, {k: v for k, v in terms.items() if v})


def rand_nonzero_poly(ring, rng, **kw):
    while True:
        f = rand_poly(ring, rng, **kw)
        if not f.is_zero:
            return f


def seeded(seed):
    return random.Random(seed)
