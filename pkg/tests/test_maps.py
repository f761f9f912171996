import pytest
import sympy
from flint import fmpq, fmpq_poly

from birat.errors import AmbientMismatch, IndeterminacyPoint
from birat.maps import (BirationalMap, compose, forms_proportional_mod_surface, interpolate_map,
                        is_surface_selfmap, map_base_scheme, map_evaluate, map_expand,
                        maps_equal_on_surface, same_projective_point)
from birat.sampling import Sampler
from birat.schemes import decompose_zero_dim, reduced_subscheme


def _sympy_length(gens, names, D=12):
    """Number of degree-D standard monomials of the ideal, by sympy."""
    syms = sympy.symbols(names)
    G = sympy.groebner([sympy.sympify(g.to_string().replace("^", "**")) for g in gens], *syms,
                       order="grevlex")
    lead = [sympy.Poly(g, *syms).monoms(order="grevlex")[0] for g in G.exprs]
    count = 0
    for m in sympy.itermonomials(syms, D, D):
        e = sympy.Poly(m, *syms).monoms()[0]
        if not any(all(a >= b for a, b in zip(e, l)) for l in lead):
            count += 1
    return count


def test_identity_and_linear(cubic):
    I = BirationalMap.identity(cubic)
    assert map_base_scheme(I).degree() == 0
    pt = [fmpq(1), fmpq(-1), fmpq(-1), fmpq(1)]
    assert map_evaluate(I, pt) == pt
    M = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    swap = BirationalMap.linear(cubic, M)
    assert map_evaluate(swap, [1, 2, 3, 4]) == [1, fmpq(1, 2), fmpq(3, 2), 2]


def test_stage_count_must_match_ambient(cubic):
    with pytest.raises(AmbientMismatch):
        BirationalMap(cubic, [cubic.ring.gens()[:3]])


def test_compose_and_expand_degrees(h):
    # B acts first
    assert h.stage_degrees == [5, 2]
    hx = map_expand(h)
    assert len(hx.stages) == 1
    assert hx.stage_degrees == [10]


def test_composition_order(cubic, G, B):
    s = Sampler(cubic, 21)
    seen = 0
    h = compose(B.map, G.map)
    while seen < 3:
        _, pt = next(s)
        try:
            expected = map_evaluate(G.map, map_evaluate(B.map, pt))
            got = map_evaluate(h, pt)
        except IndeterminacyPoint:
            continue
        assert same_projective_point(expected, got)
        seen += 1


def test_geiser_base_scheme(cubic, G):
    Z = map_base_scheme(G.map)
    gens = list(cubic.forms) + G.forms
    assert Z.degree() == _sympy_length(gens, ["x", "y", "z", "t"]) == 7
    (P,) = decompose_zero_dim(reduced_subscheme(Z))
    assert P.representative == tuple(map(fmpq, (1, -1, -1, 1)))


def test_base_scheme_of_product(h_reduced):
    Z = map_base_scheme(h_reduced)
    assert Z.degree() == 205
    red = reduced_subscheme(Z)
    assert red.degree() == 3
    pts = sorted(decompose_zero_dim(red), key=lambda P: P.degree)
    assert pts[0].representative == tuple(map(fmpq, (121, -1489, -193, 1183)))
    assert pts[1].degree == 2
    a = pts[1].representative[0]
    assert a.minpoly() == fmpq_poly([-3, -3, 1])


def test_selfmap_checks(cubic, dp4, G, h):
    assert is_surface_selfmap(cubic, G.map)
    assert is_surface_selfmap(cubic, h)
    R = cubic.ring
    assert not is_surface_selfmap(cubic, BirationalMap(cubic, [[R.parse("x^2"), R.parse("y^2"),
                                                                R.parse("z^2"), R.parse("t^2")]]))
    # forms all in the ideal define nothing
    F = cubic.forms[0]
    assert not is_surface_selfmap(cubic, BirationalMap(cubic, [[F, F, F, F]]))


def test_maps_equal(cubic, G, G2, B):
    assert maps_equal_on_surface(cubic, compose(G.map, G.map), BirationalMap.identity(cubic))
    assert maps_equal_on_surface(cubic, compose(B.map, B.map), BirationalMap.identity(cubic))
    assert not maps_equal_on_surface(cubic, G.map, B.map)
    assert not maps_equal_on_surface(cubic, G.map, G2.map)


def test_interpolation_small(cubic, G):
    ok, forms = interpolate_map(cubic, compose(G.map, G.map), 1)
    assert ok and forms == list(cubic.ring.gens())
    assert interpolate_map(cubic, G.map, 1) == (False, None)
    ok, forms = interpolate_map(cubic, G.map, 2)
    assert ok and forms_proportional_mod_surface(cubic, forms, G.forms)


def test_interpolation_of_product(cubic, h):
    assert interpolate_map(cubic, h, 9) == (False, None)
    ok, forms = interpolate_map(cubic, h, 10)
    assert ok
    assert maps_equal_on_surface(cubic, BirationalMap(cubic, [forms]), h, seed=4)
