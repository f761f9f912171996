"""Geiser and Bertini involutions of cubic surfaces and quartic del Pezzo surfaces."""

import random

from flint import fmpq, fmpq_poly

from . import linalg
from .errors import (DegenerateRepresentatives, IndeterminacyPoint,
                     PairSamplingExhausted, SingularSection,
                     UnexpectedSystemDimension, WrongCentreDegree)
from .linsys import complete_linear_system, impose_multiplicity
from .maps import (BirationalMap, evaluate_forms, map_evaluate, normalize_forms,
                   is_surface_selfmap, same_projective_point)
from .numberfield import QQ, FieldElement
from .poly import Poly, PolyRing
from .sampling import Sampler, _upoly_values, integral_root, random_rational_point
from .schemes import _hilbert_dim_deg, decompose_zero_dim, residual_intersection

DEFAULT_SEED = 20080101


class PointPair:
    def __init__(self, field, source, target, provenance):
        self.field = field
        self.source = list(source)
        self.target = list(target)
        self.provenance = provenance

    def __repr__(self):
        return f"PointPair({self.provenance} over {self.field})"


class InvolutionResult:
    def __init__(self, map, kind, centre, theta, system_basis, pairs):
        self.map = map
        self.kind = kind
        self.centre = centre
        self.theta = theta
        self.system_basis = system_basis
        self.pairs = pairs

    @property
    def forms(self):
        return self.map.forms

    def __repr__(self):
        return f"InvolutionResult({self.kind}, degree {self.map.declared_degree})"


# small helpers on projective points over number fields

def _conjugate(x, K):
    """Galois conjugate in a quadratic field (identity on rationals)."""
    if K.degree == 1:
        return x
    a0, a1 = x.coords
    tr = K.gen.trace()
    return K([a0 + a1 * tr, -a1])


def _line_pair(form, base, direction):
    """Residual pair of form(lambda*direction + base) = lambda * q(lambda).

    Returns (K, p1, p2) with the roots of q, or None when degenerate.
    """
    f = _upoly_values(form, direction, base)
    if f.degree() != 3 or f[0] != 0:
        return None
    q = fmpq_poly([f[1], f[2], f[3]])
    if q[0] == 0:
        return None
    disc = q[1] ** 2 - 4 * q[0] * q[2]
    if disc == 0:
        return None
    _, fac = q.factor()
    if len(fac) == 2:
        roots = sorted(-fmpq_poly(g)[0] / fmpq_poly(g)[1] for g, _ in fac)
        pts = [[QQ(lam * a + b) for a, b in zip(direction, base)] for lam in roots]
        return QQ, pts[0], pts[1]
    K, lam, lead = integral_root(q)
    p1 = [lam * a + lead * b for a, b in zip(direction, base)]
    p2 = [_conjugate(c, K) for c in p1]
    return K, p1, p2


def _pick_order(K, p1, p2):
    def key(p):
        return tuple(c for x in p for c in (x.coords if isinstance(x, FieldElement) else [x]))
    return (p1, p2) if key(p1) <= key(p2) else (p2, p1)


def _span_basis(linear_forms, n):
    """Rational basis of the common zero set of linear forms."""
    rows = []
    for f in linear_forms:
        rows.append([f.terms.get(f.ring.var_mono(i), fmpq(0)) for i in range(n)])
    return [linalg.primitive_vector(v) for v in linalg.kernel(rows, n)]


def _linear_part(P):
    return [f for f in P.prime_ideal if f.degree() == 1]


def _restrict(forms, vectors, names):
    """Forms restricted to the span of the given vectors, as polys in new variables."""
    R = PolyRing(names)
    gens = R.gens()
    n = len(vectors[0])
    images = []
    for i in range(n):
        acc = Poly(R, {})
        for g, v in zip(gens, vectors):
            if v[i] != 0:
                acc = acc + g.scale(fmpq(v[i]))
        images.append(acc)
    return [f.subs(images, R) for f in forms], R


def _to_ambient(coords, vectors):
    n = len(vectors[0])
    return [sum((c * v[i] for c, v in zip(coords, vectors)), coords[0] * 0) for i in range(n)]


def _plane_curve_smooth(C):
    gens = [C] + [C.diff(i) for i in range(C.ring.n)]
    gens = [g for g in gens if g]
    dim, _ = _hilbert_dim_deg(gens, saturate_check=True)
    return dim < 0


# the missing automorphism

def missing_automorphism(pairs, rng=None, retries=8):
    """Matrix M over Q (row convention) with Q_i * M proportional to R_i.

    pairs: list of (Q_i, R_i), coordinate lists over a common field each.
    """
    rng = rng or random.Random(0)
    n = len(pairs[0][0])
    current = [(list(Qv), list(Rv)) for Qv, Rv in pairs]
    for attempt in range(retries + 1):
        rows = []
        for Qv, Rv in current:
            j0 = next(j for j, c in enumerate(Rv) if c != 0)
            for k in range(n):
                if k == j0:
                    continue
                ratio = Rv[k] / Rv[j0]
                row = [fmpq(0)] * (n * n)
                for a in range(n):
                    qa = Qv[a]
                    row[a * n + k] += _trace(qa)
                    row[a * n + j0] -= _trace(qa * ratio)
                rows.append(row)
        ker = linalg.kernel(rows, n * n)
        if len(ker) == 1:
            v = linalg.primitive_vector(ker[0])
            M = [[v[a * n + b] for b in range(n)] for a in range(n)]
            if all(same_projective_point(_row_times(Qv, M), Rv) for Qv, Rv in pairs):
                return M
        # rescale representatives by random nonzero field elements
        current = []
        for Qv, Rv in pairs:
            K = _field_of(Qv + Rv)
            s = K([rng.randint(-9, 9) or 1 for _ in range(K.degree)])
            if s == 0:
                s = K.one
            current.append(([c * s for c in Qv], Rv))
    raise DegenerateRepresentatives(f"trace system kernel has dimension {len(ker)}")


def _trace(x):
    return x.trace() if isinstance(x, FieldElement) else fmpq(x)


def _field_of(vec):
    for c in vec:
        if isinstance(c, FieldElement) and c.field.degree > 1:
            return c.field
    return QQ


def _row_times(Qv, M):
    n = len(M)
    return [sum((Qv[a] * M[a][b] for a in range(n)), Qv[0] * 0) for b in range(n)]


# pair sampling

def geiser_pairs(X, P, psi, count, rng, budget=None):
    """Pairs {q1, q2} residual to P on general linear spaces of dimension d-2 through P."""
    d = X.d
    n = X.ring.n
    budget = budget or 40 * count
    pairs = []
    rejected = 0
    while len(pairs) < count:
        if rejected > budget:
            raise PairSamplingExhausted(f"rejected {rejected} linear spaces")
        r = random_rational_point(n, rng)
        res = _geiser_residual(X, P, r)
        if res is None:
            rejected += 1
            continue
        K, q1, q2 = res
        q1, q2 = _pick_order(K, q1, q2)
        try:
            evaluate_forms(psi, q1)
        except IndeterminacyPoint:
            rejected += 1
            continue
        pairs.append(PointPair(K, q1, q2, "geiser-residual"))
    return pairs


def _geiser_residual(X, P, r):
    if X.d == 3:
        p = [c.poly[0] for c in P.representative]
        return _line_pair(X.forms[0], p, r)
    # d = 4: the plane spanned by the line through P and r
    u, v = _span_basis(_linear_part(P), X.ring.n)
    if linalg.rank([u, v, r], len(r)) < 3:
        return None
    (C1, C2), R3 = _restrict(X.forms, [u, v, r], ["a", "b", "c"])
    B1 = [C1.terms.get(m, fmpq(0)) for m in R3.monomials(2) if R3.unpack(m)[2] == 0]
    B2 = [C2.terms.get(m, fmpq(0)) for m in R3.monomials(2) if R3.unpack(m)[2] == 0]
    if any(B2):
        i = next(i for i, c in enumerate(B2) if c != 0)
        k1, k2 = B1[i], B2[i]
    else:
        k1, k2 = fmpq(1), fmpq(0)
    g = C1.scale(k2) - C2.scale(k1)
    gam = R3.gens()[2]
    if not g:
        return None
    lin, rem = g.divmod_exact(gam)
    if rem or not lin:
        return None
    other = C1 if k1 != 0 else C2
    s1, s2 = _span_basis([lin], 3)
    pair = _line_pair_general(other, s2, s1)
    if pair is None:
        return None
    K, a1, a2 = pair
    if a1[2] == 0 or a2[2] == 0:
        return None
    return K, _to_ambient(a1, [u, v, r]), _to_ambient(a2, [u, v, r])


def _line_pair_general(conic, base, direction):
    """Both intersection points of a conic with the line through base and direction."""
    f = _upoly_values(conic, direction, base)
    if f.degree() != 2:
        return None
    disc = f[1] ** 2 - 4 * f[0] * f[2]
    if disc == 0:
        return None
    _, fac = f.factor()
    if len(fac) == 2:
        roots = sorted(-fmpq_poly(g)[0] / fmpq_poly(g)[1] for g, _ in fac)
        pts = [[QQ(lam * a + b) for a, b in zip(direction, base)] for lam in roots]
        return QQ, pts[0], pts[1]
    K, lam, lead = integral_root(f)
    p1 = [lam * a + lead * b for a, b in zip(direction, base)]
    return K, p1, [_conjugate(c, K) for c in p1]


def _rational_third_point(form, u, v, known_quadratic=True):
    """Rational point of form = 0 on the line span(u, v) besides an irreducible quadratic pair."""
    f = _upoly_values(form, u, v)
    if f.degree() < 3:
        return list(u)
    _, fac = f.factor()
    for g, mult in fac:
        g = fmpq_poly(g)
        if g.degree() == 1:
            lam = -g[0] / g[1]
            return [lam * a + b for a, b in zip(u, v)]
    return None


class _PlaneCubic:
    """A smooth plane cubic with a rational origin O; pairs {R, -R} via the point O'."""

    def __init__(self, C, origin):
        self.C = C
        self.O = list(origin)
        grad = [C.diff(i).evaluate(self.O) for i in range(3)]
        if all(g == 0 for g in grad):
            raise SingularSection("origin is singular")
        w = next(v for v in linalg.kernel([grad], 3) if linalg.rank([v, self.O], 3) == 2)
        f = _upoly_values(C, w, self.O)
        c3 = f[3] if f.degree() >= 3 else fmpq(0)
        c2 = f[2] if f.degree() >= 2 else fmpq(0)
        if c3 == 0:
            self.Op = list(w) if c2 != 0 else list(self.O)
        else:
            lam = -c2 / c3
            self.Op = [lam * a + b for a, b in zip(w, self.O)]

    def pair(self, r):
        if linalg.rank([r, self.Op], 3) < 2:
            return None
        return _line_pair(self.C, self.Op, r)


def bertini_pairs(X, Q, psi, count, rng, budget=None):
    """Pairs {R, -R} on genus-one hyperplane sections through Q, origin the residual point."""
    d = X.d
    n = X.ring.n
    budget = budget or 40 * count
    pairs = []
    rejected = 0
    lin = _linear_part(Q)
    span = _span_basis(lin, n)
    if d == 3:
        u, v = span
        Q0 = _rational_third_point(X.forms[0], u, v)
        if Q0 is None:
            raise PairSamplingExhausted("no rational residual point on the line through the centre")
        Q0 = linalg.primitive_vector(Q0)
    else:
        res = residual_intersection(X, lin, Q)
        pts = decompose_zero_dim(res)
        if len(pts) != 1 or pts[0].degree != 1:
            raise PairSamplingExhausted("residual of the plane through the centre is not one rational point")
        Q0 = [c.poly[0] for c in pts[0].representative]
    while len(pairs) < count:
        if rejected > budget:
            raise PairSamplingExhausted(f"rejected {rejected} hyperplane sections")
        r = random_rational_point(n, rng)
        try:
            got = _bertini_section_pairs(X, span, Q0, r, rng, 1)
        except SingularSection:
            got = None
        if not got:
            rejected += 1
            continue
        for K, q1, q2 in got:
            q1, q2 = _pick_order(K, q1, q2)
            try:
                evaluate_forms(psi, q1)
            except IndeterminacyPoint:
                rejected += 1
                continue
            pairs.append(PointPair(K, q1, q2, "bertini-negation"))
    return pairs[:count]


def _bertini_section_pairs(X, span, Q0, r, rng, want):
    n = X.ring.n
    if X.d == 3:
        u, v = span
        basis = [u, v, r]
        if linalg.rank(basis, n) < 3:
            return None
        (C,), _ = _restrict(X.forms, basis, ["a", "b", "c"])
        if not _plane_curve_smooth(C):
            raise SingularSection("plane section is singular")
        O = _coords_in_basis(Q0, basis)
        E = _PlaneCubic(C, O)
        lift = lambda pt: _to_ambient(pt, basis)
    else:
        w = [v for v in span if linalg.rank([Q0, v], n) == 2]
        w1 = w[0]
        w2 = next(v for v in w[1:] if linalg.rank([Q0, w1, v], n) == 3)
        basis = [Q0, w1, w2, r]
        if linalg.rank(basis, n) < 4:
            return None
        (g1, g2), R4 = _restrict(X.forms, basis, ["e", "a", "b", "c"])
        L, Kq = [], []
        for g in (g1, g2):
            lt, kt = {}, {}
            for m, c in g.terms.items():
                ee = R4.unpack(m)
                if ee[0] >= 2:
                    return None
                target = lt if ee[0] == 1 else kt
                target[R4.pack([0] + list(ee[1:]))] = c
            L.append(Poly(R4, lt))
            Kq.append(Poly(R4, kt))
        R3 = PolyRing(["a", "b", "c"])
        down = lambda f: Poly(R3, {R3.pack(list(R4.unpack(m)[1:])): c for m, c in f.terms.items()})
        L = [down(f) for f in L]
        Kq = [down(f) for f in Kq]
        C = L[0] * Kq[1] - L[1] * Kq[0]
        if not C or C.degree() != 3 or not _plane_curve_smooth(C):
            raise SingularSection("projected section is singular")
        lrows = [[f.terms.get(R3.var_mono(i), fmpq(0)) for i in range(3)] for f in L]
        ker = linalg.kernel(lrows, 3)
        if len(ker) != 1:
            return None
        E = _PlaneCubic(C, ker[0])

        def lift(pt):
            l1 = L[0].evaluate(pt)
            if l1 != 0:
                e = -Kq[0].evaluate(pt) / l1
            else:
                l2 = L[1].evaluate(pt)
                if l2 == 0:
                    raise IndeterminacyPoint("cannot lift")
                e = -Kq[1].evaluate(pt) / l2
            return _to_ambient([e] + list(pt), basis)
    out = []
    for _ in range(4 * want):
        if len(out) >= want:
            break
        rr = random_rational_point(3, rng)
        res = E.pair(rr)
        if res is None:
            continue
        K, a1, a2 = res
        try:
            p1, p2 = lift(a1), lift(a2)
        except IndeterminacyPoint:
            continue
        if not (X.contains_point(p1) and X.contains_point(p2)):
            continue
        if same_projective_point(p1, p2):
            continue
        out.append((K, p1, p2))
    return out


def _coords_in_basis(pt, basis):
    import flint
    n = len(pt)
    A = flint.fmpq_mat([[fmpq(b[i]) for b in basis] for i in range(n)])
    # least squares not needed: pt lies in the span, solve using independent rows
    rows = []
    for i in range(n):
        rows.append([A[i, j] for j in range(len(basis))] + [fmpq(pt[i])])
    red = linalg.rref_rows(rows, len(basis) + 1)
    sol = [fmpq(0)] * len(basis)
    for row in red:
        j = next(j for j, c in enumerate(row) if c != 0)
        sol[j] = row[-1]
    return sol


# the involutions

def _build(X, P, kind, seed, retries, verify):
    d = X.d
    if kind == "geiser":
        if P.degree != d - 2:
            raise WrongCentreDegree(f"Geiser centre must have degree {d - 2}, got {P.degree}", "centre")
        n, m = d - 1, d
    else:
        if P.degree != d - 1:
            raise WrongCentreDegree(f"Bertini centre must have degree {d - 1}, got {P.degree}", "centre")
        n, m = 2 * d - 1, 2 * d
    H = impose_multiplicity(complete_linear_system(X, n), P, m)
    if H.dim != d + 1:
        raise UnexpectedSystemDimension(f"expected {d + 1} sections, found {H.dim}")
    psi = H.basis
    rng = random.Random(seed)
    sampler = geiser_pairs if kind == "geiser" else bertini_pairs
    last = None
    for attempt in range(retries):
        pairs = sampler(X, P, psi, d + 2, rng)
        data = [(evaluate_forms(psi, pp.source), pp.target) for pp in pairs]
        try:
            M = missing_automorphism(data, rng, retries)
        except DegenerateRepresentatives as exc:
            last = exc
            continue
        forms = []
        for j in range(d + 1):
            acc = Poly(X.ring, {})
            for i in range(d + 1):
                if M[i][j] != 0:
                    acc = acc + psi[i].scale(M[i][j])
            forms.append(acc)
        forms = normalize_forms(forms)
        fmap = BirationalMap(X, [forms], declared_degree=n)
        result = InvolutionResult(fmap, kind, P, M, H, pairs)
        if verify and not _check_involution(X, result, seed):
            last = DegenerateRepresentatives("constructed map failed verification")
            continue
        return result
    raise last or PairSamplingExhausted("no usable pairs")


def _check_involution(X, result, seed, samples=3):
    fmap = result.map
    if not is_surface_selfmap(X, fmap):
        return False
    s = Sampler(X, seed + 1)
    ok = 0
    for _ in range(20 * samples):
        K, pt = next(s)
        try:
            img = map_evaluate(fmap, pt)
            back = map_evaluate(fmap, img)
        except IndeterminacyPoint:
            continue
        if not same_projective_point(back, pt):
            return False
        ok += 1
        if ok >= samples:
            return True
    return ok > 0


def geiser_involution(X, P, seed=DEFAULT_SEED, retries=8, verify=True):
    return _build(X, P, "geiser", seed, retries, verify)


def bertini_involution(X, Q, seed=DEFAULT_SEED, retries=8, verify=True):
    return _build(X, Q, "bertini", seed, retries, verify)
