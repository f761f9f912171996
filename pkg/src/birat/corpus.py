"""Seeded random instances: closed points over small fields and smooth surfaces through them."""

import random

from flint import fmpq, fmpq_poly

from . import linalg
from .numberfield import NumberField
from .poly import Poly, PolyRing
from .schemes import ClosedPoint, Surface, _monomial_values, surface_validate

NAMES = {3: ["x", "y", "z", "t"], 4: ["x", "y", "z", "t", "s"]}


def random_field(e, rng, bound=5):
    """A number field of degree e with a small random defining polynomial."""
    while True:
        coeffs = [rng.randint(-bound, bound) for _ in range(e)] + [1]
        f = fmpq_poly(coeffs)
        if e == 1:
            return NumberField(f)
        _, fac = f.factor()
        if len(fac) == 1 and fac[0][1] == 1 and fac[0][0].degree() == e:
            return NumberField(f)


def random_point(ring, e, rng, bound=3):
    """A closed point of degree e whose representative has small coordinates."""
    n = ring.n
    K = random_field(e, rng)
    while True:
        coords = [K([rng.randint(-bound, bound) for _ in range(e)]) for _ in range(n)]
        if all(c == 0 for c in coords):
            continue
        if e > 1 and not any(c.minpoly().degree() == e for c in coords if c != 0):
            continue
        try:
            return ClosedPoint(ring, coords)
        except ValueError:
            continue


def forms_through(ring, points, k):
    """Primitive integer basis of the degree-k forms vanishing at the points."""
    monos = ring.monomials(k)
    rows = []
    for P in points:
        vals = _monomial_values(ring, monos, list(P.representative))
        for c in range(P.degree):
            rows.append([v.coords[c] for v in vals])
    ker = linalg.kernel(rows, len(monos))
    return [Poly(ring, {m: c for m, c in zip(monos, linalg.primitive_vector(v)) if c != 0}) for v in ker]


def _combination(basis, rng, bound):
    acc = Poly(basis[0].ring, {})
    for f in basis:
        c = rng.randint(-bound, bound)
        if c:
            acc = acc + f.scale(fmpq(c))
    return acc


def random_surface(d, rng, points=(), bound=2, tries=50):
    """A smooth del Pezzo surface of degree d through the given closed points."""
    ring = points[0].ring if points else PolyRing(NAMES[d])
    degrees = [3] if d == 3 else [2, 2]
    for _ in range(tries):
        forms = []
        for k in degrees:
            basis = forms_through(ring, points, k) if points else [Poly(ring, {m: fmpq(1)}) for m in ring.monomials(k)]
            sparse = [f for f in basis if rng.random() < 0.5] or basis
            forms.append(_combination(sparse, rng, bound))
        if any(not f for f in forms):
            continue
        X = Surface(forms)
        if surface_validate(X)["passed"]:
            return X
    raise RuntimeError("no smooth surface found")


def instance(d, e, seed):
    """(X, P): a smooth surface of degree d and a closed point of degree e on it."""
    rng = random.Random(seed)
    ring = PolyRing(NAMES[d])
    P = random_point(ring, e, rng)
    return random_surface(d, rng, [P]), P
