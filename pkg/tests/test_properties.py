"""Structural properties of involutions and factorizations on the default corpus."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from birat.errors import IndeterminacyPoint
from birat.involutions import bertini_involution, bertini_pairs, geiser_involution, geiser_pairs
from birat.maps import compose, map_evaluate, maps_equal_on_surface, same_projective_point
from birat.sampling import Sampler
from birat.sarkisov import factorize

INVOLUTIONS = ["G", "G2", "B", "dp4_G", "dp4_B"]


def involutive(inv, seed, count=5):
    X = inv.map.surface
    s = Sampler(X, seed)
    ok = 0
    for _ in range(50 * count):
        _, pt = next(s)
        try:
            back = map_evaluate(inv.map, map_evaluate(inv.map, pt))
        except IndeterminacyPoint:
            continue
        if not same_projective_point(back, pt):
            return False
        ok += 1
        if ok >= count:
            return True
    return False


def exchanges_pairs(inv, seed, count=3):
    X = inv.map.surface
    sampler = geiser_pairs if inv.kind == "geiser" else bertini_pairs
    for pp in sampler(X, inv.centre, inv.forms, count, random.Random(seed)):
        try:
            a = map_evaluate(inv.map, pp.source)
            b = map_evaluate(inv.map, pp.target)
        except IndeterminacyPoint:
            continue
        if not (same_projective_point(a, pp.target) and same_projective_point(b, pp.source)):
            return False
    return True


def seed_independent(inv, seed):
    X = inv.map.surface
    build = geiser_involution if inv.kind == "geiser" else bertini_involution
    other = build(X, inv.centre, seed=seed)
    return maps_equal_on_surface(X, inv.map, other.map, seed=seed + 1)


def round_trips(X, fmap, result, seed):
    return maps_equal_on_surface(X, fmap, result.reconstruction(), seed=seed)


@pytest.mark.parametrize("name", INVOLUTIONS)
def test_idempotence(name, request):
    assert involutive(request.getfixturevalue(name), 314)


@pytest.mark.parametrize("name", INVOLUTIONS)
def test_pair_exchange(name, request):
    assert exchanges_pairs(request.getfixturevalue(name), 2718)


@settings(max_examples=4, deadline=None)
@given(st.integers(0, 2**32))
def test_geiser_seed_independence(G, seed):
    assert seed_independent(G, seed)


@pytest.mark.parametrize("name", ["B", "dp4_G", "dp4_B"])
def test_seed_independence(name, request):
    assert seed_independent(request.getfixturevalue(name), 12345)


def test_round_trip_of_product(cubic, h, h_factorization):
    assert round_trips(cubic, h, h_factorization, 606)


def test_round_trip_of_short_chains(cubic, G, G2, B):
    for chain in [(G, G2), (G2, G), (B, B), (G, G2, G)]:
        f = compose(*[inv.map for inv in chain])
        assert round_trips(cubic, f, factorize(cubic, f), 17)
