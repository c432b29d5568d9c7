"""Local ring calculus: membership, filter regular sequences, parameter
systems, depth/dimension profiles, the seeded sampler."""

import pytest

from fpsing import (
    AssumptionMissing,
    Ideal,
    LocalRing,
    RetriesExhausted,
    Ring,
    depth_and_codim_profile,
    is_d_sequence,
    is_filter_regular,
    is_parameter_element,
    is_system_of_parameters,
    local_dimension,
    local_membership,
    parse_poly,
    random_filter_regular_sop,
)
from conftest import (
    example61_ring,
    make_local,
    rand_poly,
    seeded,
    singh_ring,
    twoplane_ring,
)


def mk(p, names):
    return Ring(p, tuple(names.split()))


def test_local_membership_unit_multiple():
    # x*(1+x) generates (x) locally but not globally
    L = make_local(2, "x y", [])
    A = Ideal(L.ring, [parse_poly("x + x^2", L.ring)])
    assert local_membership(parse_poly("x", L.ring), A, L)
    assert not A.contains(parse_poly("x", L.ring))


def test_global_membership_implies_local():
    rng = seeded(41)
    R = mk(2, "x y z")
    L = LocalRing(R, Ideal(R, []), assumed_origin_components=True)
    count = 0
    while count < 200:
        gens = [rand_poly(R, rng) for _ in range(2)]
        A = Ideal(R, gens)
        f = sum((rand_poly(R, rng) * g for g in gens), R.zero())
        assert local_membership(f, A, L)
        count += 1


def test_assumption_gate():
    R = mk(2, "x y")
    L = LocalRing(R, Ideal(R, []), assumed_origin_components=False)
    with pytest.raises(AssumptionMissing):
        local_dimension(L)


def test_origin_sanity_check():
    good = make_local(2, "x y", ["x*y"])
    assert good.origin_sanity_check()


def test_depth_profiles():
    assert depth_and_codim_profile(make_local(2, "x y", [])) == (2, 2)
    assert depth_and_codim_profile(twoplane_ring()) == (1, 2)
    assert depth_and_codim_profile(singh_ring()) == (2, 2)
    assert depth_and_codim_profile(example61_ring()) == (3, 4)


def test_filter_regular_basics():
    L = make_local(2, "x y", [])
    x, y = L.ring.var("x"), L.ring.var("y")
    rep = is_filter_regular([x, y], L)
    assert rep.all_filter_regular()
    # kernel of x on F_2[x,y]/(xy) is (y)/(xy): positive-dimensional
    # through the origin, so x is not filter regular there
    L2 = make_local(2, "x y", ["x*y"])
    rep2 = is_filter_regular([x], L2)
    assert not rep2.all_filter_regular()
    # in the two-plane ring, a generic linear form is filter regular even
    # though it is a zerodivisor
    T = twoplane_ring()
    f = parse_poly("x + u", T.ring)
    assert is_filter_regular([f], T).all_filter_regular()


def test_filter_regular_rejects_constant_term():
    L = make_local(2, "x y", [])
    with pytest.raises(ValueError):
        is_filter_regular([parse_poly("1 + x", L.ring)], L)


def test_filter_regular_powers_property():
    # powers of a filter regular sequence stay filter regular
    rng = seeded(42)
    cases = 0
    for L in (twoplane_ring(), singh_ring()):
        d = local_dimension(L)
        for k in range(13):
            rep = random_filter_regular_sop(L, d, 1000 + k)
            ns = [rng.randrange(1, 4) for _ in rep.elements]
            powered = [x**n for x, n in zip(rep.elements, ns)]
            assert is_filter_regular(powered, L).all_filter_regular()
            cases += 1
    assert cases >= 26


def test_parameter_elements_and_sop():
    L = singh_ring()
    y = parse_poly("y", L.ring)
    assert is_parameter_element(y, L)
    sop = [parse_poly("y", L.ring), parse_poly("u + v + z", L.ring)]
    assert is_system_of_parameters(sop, L)
    assert not is_system_of_parameters([y], L)
    assert not is_system_of_parameters([y, y], L)


def test_d_sequence_regular_case():
    L = make_local(2, "x y", [])
    xs = [L.ring.var("x"), L.ring.var("y")]
    assert is_d_sequence(xs, L)


def test_sampler_verified_and_seeded():
    L = singh_ring()
    rep1 = random_filter_regular_sop(L, 2, seed=5)
    rep2 = random_filter_regular_sop(L, 2, seed=5)
    assert [str(x) for x in rep1.elements] == [str(x) for x in rep2.elements]
    assert rep1.all_filter_regular()
    assert rep1.sop is True


def test_sampler_count_exceeds_dimension():
    L = singh_ring()
    with pytest.raises(RetriesExhausted):
        random_filter_regular_sop(L, 9, seed=0)


def test_sampler_also_on_module():
    from fpsing import frobenius_pushforward, minimize_presentation

    L = singh_ring()
    _, _, coker = frobenius_pushforward(L.J, 1)
    coker_min, _ = minimize_presentation(coker)
    rep = random_filter_regular_sop(L, 2, seed=3, also_on=coker_min)
    assert rep.all_filter_regular()
    assert is_filter_regular(rep.elements, coker_min).all_filter_regular()
