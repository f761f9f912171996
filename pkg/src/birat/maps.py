"""Birational maps stored as composition chains of coordinate-form stages.

Stages apply left to right: the map with stages [s1, s2] sends p to
s2(s1(p)).  ``compose(a, b)`` means "a first, then b".
"""

import random

from flint import fmpq, nmod_mat

from . import linalg
from .errors import (AmbientMismatch, IndeterminacyPoint,
                     IndeterminateAtAllSamples, SamplingExhausted)
from .numberfield import FieldElement, QQ
from .poly import Poly
from .sampling import Sampler
from .schemes import ZeroDimScheme, _mono_val

DEFAULT_SEED = 1


class BirationalMap:
    def __init__(self, surface, stages, declared_degree=None):
        self.surface = surface
        self.stages = [tuple(s) for s in stages]
        for s in self.stages:
            if len(s) != surface.ring.n:
                raise AmbientMismatch(f"stage with {len(s)} forms in P^{surface.d}")
        self.declared_degree = declared_degree

    @classmethod
    def identity(cls, X):
        return cls(X, [X.ring.gens()], declared_degree=1)

    @classmethod
    def linear(cls, X, M):
        """The linear map x -> x * M (row-vector convention)."""
        ring = X.ring
        n = ring.n
        gens = ring.gens()
        forms = []
        for j in range(n):
            acc = Poly(ring, {})
            for i in range(n):
                if M[i][j] != 0:
                    acc = acc + gens[i].scale(fmpq(M[i][j]) if isinstance(M[i][j], int) else M[i][j])
            forms.append(acc)
        return cls(X, [forms], declared_degree=1)

    @property
    def d(self):
        return self.surface.d

    @property
    def stage_degrees(self):
        return [max(f.degree() for f in s if f) for s in self.stages]

    @property
    def forms(self):
        """Forms of a single-stage map."""
        if len(self.stages) != 1:
            raise ValueError("map has several stages; expand or interpolate first")
        return list(self.stages[0])

    def evaluate(self, point):
        return map_evaluate(self, point)

    def __call__(self, point):
        return map_evaluate(self, point)

    def __repr__(self):
        return f"BirationalMap(stages of degrees {self.stage_degrees}, degree {self.declared_degree})"


def map_compose(first, then):
    if first.surface.ring.n != then.surface.ring.n:
        raise AmbientMismatch("maps live in different ambient spaces")
    return BirationalMap(first.surface, first.stages + then.stages)


def compose(*maps):
    out = maps[0]
    for m in maps[1:]:
        out = map_compose(out, m)
    return out


def evaluate_forms(forms, point):
    vals = [f.evaluate(point) for f in forms]
    if all(v == 0 for v in vals):
        raise IndeterminacyPoint("point lies in the base locus")
    return vals


def map_evaluate(fmap, point):
    pt = list(point)
    for stage in fmap.stages:
        pt = evaluate_forms(stage, pt)
    K = None
    for c in pt:
        if isinstance(c, FieldElement) and c.field.degree > 1:
            K = c.field
    return normalize_point(pt)


def normalize_point(pt):
    """Scale so that the first nonzero coordinate is 1."""
    i = next(i for i, c in enumerate(pt) if c != 0)
    c = pt[i]
    inv = c.inverse() if isinstance(c, FieldElement) else 1 / fmpq(c)
    return [x * inv for x in pt]


def same_projective_point(p, q):
    n = len(p)
    i = next((k for k in range(n) if p[k] != 0), None)
    if i is None or q[i] == 0:
        return False
    return all(p[i] * q[k] == q[i] * p[k] for k in range(n))


def map_expand(fmap):
    """Single-stage map by substitution (no reduction, no cancellation)."""
    forms = list(fmap.stages[0])
    for stage in fmap.stages[1:]:
        forms = [g.subs(forms) for g in stage]
    return BirationalMap(fmap.surface, [forms])


def map_base_scheme(fmap, seed=20080101):
    """The subscheme of X cut out by the map's single-stage forms."""
    forms = fmap.forms if len(fmap.stages) == 1 else map_expand(fmap).forms
    return ZeroDimScheme(list(fmap.surface.forms) + [f for f in forms if f], seed=seed)


# interpolation

def _power_basis_rows(vec):
    """Split a row of field elements into rational rows (one per basis coordinate)."""
    K = None
    for x in vec:
        if isinstance(x, FieldElement):
            K = x.field
            break
    e = K.degree if K is not None else 1
    rows = [[] for _ in range(e)]
    for x in vec:
        if isinstance(x, FieldElement):
            cs = x.coords
        else:
            cs = [fmpq(x)] + [fmpq(0)] * (e - 1)
        for k in range(e):
            rows[k].append(cs[k])
    return rows


def _monomial_values(ring, monos, pt):
    cache = {0: pt[0] * 0 + 1}
    return [_mono_val(ring, m, pt, cache) for m in monos]


def _rows_mod_p(rows, p):
    out = []
    for r in rows:
        rr = []
        for c in r:
            q = int(c.q) % p
            if q == 0:
                return None
            rr.append(int(c.p) * pow(q, -1, p) % p)
        out.append(rr)
    return out


def interpolate_map(X, fmap, n, seed=DEFAULT_SEED, batch=5, stable=3, verify=20, max_samples=2000):
    """Find degree-n forms (modulo the surface ideal) defining fmap on X.

    Returns (True, forms) when the solution space is one-dimensional and the
    forms agree with fmap at fresh samples, else (False, None).
    """
    ring = X.ring
    N = ring.n
    monos = X.standard_monomials(n)
    nm = len(monos)
    total = N * nm
    p = linalg.PRIMES[3]
    sampler = Sampler(X, seed)
    rows = []
    mod_rows = []
    rank = -1
    unchanged = 0
    used = 0
    tried = 0
    while True:
        added = 0
        while added < batch:
            if tried > max_samples:
                raise SamplingExhausted("too many samples without stabilization")
            tried += 1
            K, pt = next(sampler)
            try:
                q = map_evaluate(fmap, pt)
            except IndeterminacyPoint:
                continue
            vals = _monomial_values(ring, monos, pt)
            i0 = next(i for i, c in enumerate(q) if c != 0)
            for j in range(N):
                if j == i0:
                    continue
                vec = [0] * total
                for k, v in enumerate(vals):
                    vec[j * nm + k] = q[i0] * v
                    vec[i0 * nm + k] = -q[j] * v
                for r in _power_basis_rows(vec):
                    if any(c != 0 for c in r):
                        rows.append(r)
            added += 1
            used += 1
        mod_rows = _rows_mod_p(rows, p)
        if mod_rows is None:
            p = next(q for q in linalg.PRIMES if q != p)
            continue
        M = nmod_mat(len(mod_rows), total, [c for r in mod_rows for c in r], p)
        r = M.rank()
        if r == total:
            return False, None
        if r == rank:
            unchanged += 1
            if unchanged >= stable:
                break
        else:
            unchanged = 0
            rank = r
    if total - rank != 1:
        return False, None
    # an independent subset of rows modulo p suffices for the exact kernel
    T = M.transpose()
    R, rk = T.rref()
    piv = []
    j = 0
    for i in range(rk):
        while int(R[i, j]) == 0:
            j += 1
        piv.append(j)
    ker = linalg.kernel([rows[i] for i in piv], total)
    if len(ker) != 1:
        return False, None
    v = linalg.primitive_vector(ker[0])
    forms = []
    for j in range(N):
        forms.append(Poly(ring, {m: v[j * nm + k] for k, m in enumerate(monos) if v[j * nm + k] != 0}))
    forms = normalize_forms(forms)
    # fresh samples
    check = Sampler(X, seed + 7919)
    ok = 0
    for _ in range(10 * verify):
        K, pt = next(check)
        try:
            a = map_evaluate(fmap, pt)
            b = evaluate_forms(forms, pt)
        except IndeterminacyPoint:
            continue
        if not same_projective_point(a, b):
            return False, None
        ok += 1
        if ok >= verify:
            break
    return True, forms


def normalize_forms(forms):
    """Common rational scaling: integer coefficients, content 1, first coefficient positive."""
    flat = []
    for f in forms:
        flat.extend(c for _, c in f.sorted_terms())
    v = linalg.primitive_vector(flat)
    if not flat:
        return forms
    scale = v[0] / flat[0]
    return [f.scale(scale) for f in forms]


def maps_equal_on_surface(X, f, g, seed=DEFAULT_SEED, count=20):
    sampler = Sampler(X, seed)
    ok = 0
    for _ in range(50 * count):
        K, pt = next(sampler)
        try:
            a = map_evaluate(f, pt)
            b = map_evaluate(g, pt)
        except IndeterminacyPoint:
            continue
        if not same_projective_point(a, b):
            return False
        ok += 1
        if ok >= count:
            return True
    raise SamplingExhausted("could not find enough determinate samples")


def is_surface_selfmap(X, fmap, seed=DEFAULT_SEED, count=20):
    """True iff fmap sends X into X (exact for one stage, sampled for chains)."""
    if len(fmap.stages) == 1:
        forms = fmap.forms
        if all(X.in_ideal(f) for f in forms):
            return False
        return all(X.in_ideal(F.subs(forms)) for F in X.forms)
    sampler = Sampler(X, seed)
    ok = 0
    for _ in range(50 * count):
        K, pt = next(sampler)
        try:
            q = map_evaluate(fmap, pt)
        except IndeterminacyPoint:
            continue
        if not X.contains_point(q):
            return False
        ok += 1
        if ok >= count:
            return True
    raise IndeterminateAtAllSamples("every sample was indeterminate")


def forms_proportional_mod_surface(X, a, b):
    """True iff the tuples a and b agree up to one common scalar modulo I(X)."""
    na = [X.reduce(f) for f in a]
    nb = [X.reduce(f) for f in b]
    scale = None
    for f, g in zip(na, nb):
        if not f and not g:
            continue
        if not f or not g:
            return False
        m, c = f.sorted_terms()[0]
        if m not in g.terms:
            return False
        s = g.terms[m] / c
        if scale is None:
            scale = s
        elif s != scale:
            return False
        if f.scale(s) != g:
            return False
    return scale is not None
