"""Random points of a surface over small number fields."""

import random

from flint import fmpq_poly

from .errors import SamplingExhausted
from .numberfield import QQ, NumberField


def random_rational_point(n, rng, bound=20):
    while True:
        v = [rng.randint(-bound, bound) for _ in range(n)]
        if any(v):
            return v


def _upoly_values(form, a, b):
    """form(lambda*a + b) as a univariate polynomial in lambda."""
    vals = [fmpq_poly([bi, ai]) for ai, bi in zip(a, b)]
    r = form.evaluate(vals)
    return r if isinstance(r, fmpq_poly) else fmpq_poly([r])


def points_on_line(X, a, b):
    """Closed points of X on the line through a and b (a cubic surface).

    Returns a list of (field, coordinates); empty if the line lies in X.
    """
    f = _upoly_values(X.forms[0], a, b)
    if f.is_zero():
        return []
    out = []
    if f.degree() < 3:
        out.append((QQ, [QQ(c) for c in a]))
    if f.degree() < 1:
        return out
    _, fac = f.factor()
    for g, mult in fac:
        K, lam, lead = integral_root(g)
        out.append((K, [lam * ai + lead * bi for ai, bi in zip(a, b)]))
    return out


def integral_root(g):
    """Field of a root of g with an algebraic-integer generator.

    Returns (K, lam, lead) where lam = lead * root, so that lam has a monic
    integral minimal polynomial.
    """
    g = fmpq_poly(g)
    num = g.numer()
    n = num.degree()
    lead = int(num[n])
    if lead < 0:
        num, lead = -num, -lead
    # h(T) = lead^(n-1) * g(T / lead)
    h = fmpq_poly([int(num[i]) * lead ** (n - 1 - i) if i < n else 1 for i in range(n + 1)])
    K = NumberField(h, check=False)
    lam = K.gen if n > 1 else K(-h[0])
    return K, lam, lead


def nf_upoly_gcd(a, b):
    """Monic gcd of univariate polynomials given as coefficient lists (low first)."""

    def trim(p):
        p = list(p)
        while p and p[-1] == 0:
            p.pop()
        return p

    a, b = trim(a), trim(b)
    while b:
        while len(a) >= len(b) and a:
            c = a[-1] / b[-1]
            shift = len(a) - len(b)
            a = trim([x - (c * b[i - shift] if i >= shift else 0) for i, x in enumerate(a)])
        a, b = b, a
    if not a:
        return a
    lead = a[-1]
    return [x / lead for x in a]


def _quadratic_coeffs(values):
    """Coefficients of a polynomial in mu given by values at mu = 0, 1, -1."""
    v0, v1, vm = values
    c0 = v0
    c2 = (v1 + vm) / 2 - v0
    c1 = (v1 - vm) / 2
    return [c0, c1, c2]


def points_on_plane(X, a, b, c):
    """Closed points of X (two quadrics in P^4) on the affine part of the plane
    lambda*a + mu*b + c, by the resultant in mu and a gcd over each field."""
    f1, f2 = X.forms
    conics = []
    for f in (f1, f2):
        vals = []
        for mu in (0, 1, -1):
            base = [mu * bi + ci for bi, ci in zip(b, c)]
            vals.append(_upoly_values(f, a, base))
        conics.append(_quadratic_coeffs(vals))
    (a0, a1, a2), (b0, b1, b2) = conics
    res = (a2 * b0 - a0 * b2) ** 2 - (a2 * b1 - a1 * b2) * (a1 * b0 - a0 * b1)
    if res.is_zero():
        return []
    out = []
    _, fac = res.factor()
    for g, mult in fac:
        if mult != 1:
            return []
        K, lam, lead = integral_root(g)
        lam = lam / lead
        p1 = [_at(a0, lam), _at(a1, lam), _at(a2, lam)]
        p2 = [_at(b0, lam), _at(b1, lam), _at(b2, lam)]
        h = nf_upoly_gcd(p1, p2)
        if len(h) != 2:
            return []
        mu = -h[0]
        out.append((K, [lam * ai + mu * bi + ci for ai, bi, ci in zip(a, b, c)]))
    return out


def _at(poly, x):
    """Evaluate a univariate rational polynomial at a field element."""
    return x.field(poly(x.poly))


class Sampler:
    """Seeded stream of closed points of X (as (field, coordinates))."""

    def __init__(self, X, seed, max_degree=4, bound=20):
        self.X = X
        self.rng = random.Random(seed)
        self.max_degree = max_degree
        self.bound = bound
        self._queue = []

    def __iter__(self):
        return self

    def __next__(self):
        for _ in range(1000):
            if self._queue:
                return self._queue.pop(0)
            self._queue = [pt for pt in self._draw() if pt[0].degree <= self.max_degree]
        raise SamplingExhausted("no sample points found")

    def _draw(self):
        X, rng, n = self.X, self.rng, self.X.ring.n
        if X.d == 3:
            a = random_rational_point(n, rng, self.bound)
            b = random_rational_point(n, rng, self.bound)
            pts = points_on_line(X, a, b)
        else:
            a, b, c = (random_rational_point(n, rng, self.bound) for _ in range(3))
            pts = points_on_plane(X, a, b, c)
        # keep only genuinely new points, largest field first for variety
        return [p for p in pts if X.contains_point(p[1])]

    def take(self, count):
        return [next(self) for _ in range(count)]
