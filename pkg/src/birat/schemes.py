"""Surfaces, zero-dimensional schemes and closed points."""

import random
from functools import cached_property

from flint import fmpq, fmpq_mat, fmpq_poly, nmod_mat, nmod_poly

from . import linalg
from .errors import (BiratError, ModularFailure, NotContained, NotIrreducible,
                     NotZeroDimensional, ValidationError)
from .groebner import BadPrime, GroebnerBasis, groebner, poly_to_dict, reduce_dict
from .numberfield import QQ, FieldElement, NumberField, to_fmpq
from .poly import Poly, PolyRing, linear_substitution

DEFAULT_SEED = 20080101


class Surface:
    """A del Pezzo surface X in P^d: one cubic (d=3) or two quadrics (d=4)."""

    def __init__(self, forms, validate=False):
        forms = [f for f in forms]
        if not forms:
            raise ValidationError("no defining forms", "forms")
        self.ring = forms[0].ring
        self.forms = forms
        self.d = self.ring.n - 1
        if validate:
            rep = surface_validate(self)
            if not rep["passed"]:
                raise ValidationError(f"surface fails {rep['failed']}: {rep['detail']}", rep["failed"])

    @classmethod
    def from_strings(cls, names, forms, validate=True):
        ring = PolyRing(names)
        return cls([ring.parse(f) for f in forms], validate=validate)

    @property
    def names(self):
        return self.ring.names

    @cached_property
    def gb(self):
        return groebner(self.forms)

    def reduce(self, poly):
        return self.gb.normal_form(poly)

    def in_ideal(self, poly):
        return self.gb.contains(poly)

    def contains_point(self, pt):
        return all(f.evaluate(pt) == 0 for f in self.forms)

    def jacobian(self):
        return [[f.diff(i) for i in range(self.ring.n)] for f in self.forms]

    def jacobian_at(self, pt):
        return [[g.evaluate(pt) for g in row] for row in self.jacobian()]

    def is_smooth_at(self, pt):
        rows = self.jacobian_at(pt)
        return linalg.nf_rank(rows) == len(self.forms)

    def standard_monomials(self, n):
        return self.gb.standard_monomials(n)

    def __repr__(self):
        return f"Surface(P^{self.d}: " + ", ".join(str(f) for f in self.forms) + ")"


def _minors(rows, k):
    from itertools import combinations
    n = len(rows[0])
    out = []
    if k == 1:
        return [e for r in rows for e in r]
    for cols in combinations(range(n), k):
        sub = [[rows[i][j] for j in cols] for i in range(k)]
        if k == 2:
            out.append(sub[0][0] * sub[1][1] - sub[0][1] * sub[1][0])
    return out


def surface_validate(S):
    """Check homogeneity/degrees, dimension 2, degree d and smoothness."""
    checks = []
    forms = S.forms
    d = S.d

    def result(failed=None, detail=""):
        return {"passed": failed is None, "failed": failed, "detail": detail,
                "checks": checks, "degree": d}

    ok = all(f.is_homogeneous() and f for f in forms)
    expected = {3: [3], 4: [2, 2]}.get(d)
    degs = sorted(f.degree() for f in forms)
    if not ok or expected is None or degs != expected:
        checks.append(("homogeneity", False))
        return result("homogeneity", f"expected forms of degrees {expected} in P^{d}, got {degs}")
    checks.append(("homogeneity", True))
    dim, deg = _hilbert_dim_deg(forms)
    if dim != 2 or deg != d:
        checks.append(("dimension", False))
        return result("dimension", f"scheme has dimension {dim} and degree {deg}")
    checks.append(("dimension", True))
    checks.append(("degree", True))
    jac = S.jacobian()
    c = len(forms)
    gens = list(forms) + [g for g in _minors(jac, c) if g]
    sdim, _ = _hilbert_dim_deg(gens, saturate_check=True)
    if sdim >= 0:
        detail = "singular locus is nonempty"
        try:
            if sdim == 0:
                pts = decompose_zero_dim(ZeroDimScheme(gens), reduced=False)
                detail = "singular at " + ", ".join(p.coords_str() for p in pts)
        except BiratError:
            pass
        checks.append(("smoothness", False))
        return result("smoothness", detail)
    checks.append(("smoothness", True))
    return result()


def _hilbert_dim_deg(gens, saturate_check=False):
    """Dimension/degree; a modular answer is trusted when it certifies the good case."""
    ints = [g.primitive() for g in gens]
    for p in linalg.PRIMES[:2]:
        try:
            gb = groebner(ints, p=p)
        except BadPrime:
            continue
        dim, deg = gb.hilbert_polynomial_data()
        if saturate_check and dim < 0:
            return dim, deg
        if not saturate_check and dim == 2:
            return dim, deg
    gb = groebner(gens)
    return gb.hilbert_polynomial_data()


# zero-dimensional schemes

class ZeroDimScheme:
    """Projective scheme cut out by homogeneous forms (expected zero-dimensional)."""

    def __init__(self, gens, seed=DEFAULT_SEED):
        gens = [g for g in gens if g]
        self.gens = gens
        self.ring = gens[0].ring if gens else None
        self.seed = seed
        self._analysis = None
        self._degree = None

    @property
    def d(self):
        return self.ring.n - 1

    def analysis(self):
        if self._analysis is None:
            self._analysis = analyze_zero_dim(self.gens, seed=self.seed)
        return self._analysis

    def degree(self):
        if self._degree is None:
            self._degree = self.analysis().degree
        return self._degree

    def exact_degree(self):
        """Degree from an exact saturated Groebner basis over Q (small inputs)."""
        a = _exact_saturated(self.gens, self.seed)
        return a

    def __repr__(self):
        return f"ZeroDimScheme({len(self.gens)} generators)"


class ClosedPoint:
    """An irreducible zero-dimensional subscheme with a geometric representative."""

    def __init__(self, ring, representative, prime_ideal=None):
        field = representative[0].field if isinstance(representative[0], FieldElement) else QQ
        rep = [field(c) for c in representative]
        for c in rep:
            if c.field.degree > 1:
                field = c.field
        rep = [field(c) for c in rep]
        rep, field = _normalize_representative(rep, field)
        self.ring = ring
        self.field = field
        self.representative = tuple(rep)
        self.degree = field.degree
        self._prime_ideal = prime_ideal

    @classmethod
    def rational(cls, ring, coords):
        return cls(ring, [QQ(c) for c in coords])

    @property
    def prime_ideal(self):
        if self._prime_ideal is None:
            self._prime_ideal = vanishing_ideal(self.ring, [self.representative], self.degree)
        return self._prime_ideal

    @property
    def split_field(self):
        return self.field

    def conjugates_count(self):
        return self.degree

    def scheme(self):
        return ZeroDimScheme(self.prime_ideal)

    def same_point(self, other):
        """Same closed point (Galois orbit) as another ClosedPoint."""
        if self.degree != other.degree:
            return False
        return all(f.evaluate(other.representative) == 0 for f in self.prime_ideal)

    def coords_str(self):
        return "(" + " : ".join(str(c) for c in self.representative) + ")"

    def __repr__(self):
        if self.degree == 1:
            return f"ClosedPoint{self.coords_str()}"
        return f"ClosedPoint(degree {self.degree}, {self.coords_str()} over {self.field})"


def _normalize_representative(rep, field):
    if field.degree == 1:
        v = linalg.primitive_vector([c.poly[0] if isinstance(c, FieldElement) else c for c in rep])
        return [QQ(c) for c in v], QQ
    last = max(i for i, c in enumerate(rep) if c != 0)
    inv = rep[last].inverse()
    rep = [c * inv for c in rep]
    e = field.degree
    gen_index = None
    for i, c in enumerate(rep):
        if c.poly.degree() > 0 and c.minpoly().degree() == e:
            gen_index = i
            break
    if gen_index is None:
        raise ValueError("representative does not generate its field")
    beta = rep[gen_index]
    newfield = NumberField(beta.minpoly(), check=False)
    rows = []
    b = field.one
    for _ in range(e):
        rows.append(b.coords)
        b = b * beta
    B = fmpq_mat(rows).transpose()
    out = []
    for c in rep:
        sol = B.solve(fmpq_mat([[x] for x in c.coords]))
        out.append(newfield([sol[j, 0] for j in range(e)]))
    return out, newfield


def vanishing_ideal(ring, points, max_degree):
    """Forms over Q vanishing at all given geometric points, generated up to max_degree."""
    gens = []
    for k in range(1, max_degree + 1):
        monos = ring.monomials(k)
        rows = []
        for pt in points:
            vals = _monomial_values(ring, monos, pt)
            e = vals[0].field.degree if isinstance(vals[0], FieldElement) else 1
            for c in range(e):
                rows.append([v.poly[c] if isinstance(v, FieldElement) else to_fmpq(v) if c == 0 else fmpq(0)
                             for v in vals])
        ker = linalg.kernel(rows, len(monos))
        # keep only forms not generated by lower degree generators
        lower = []
        for g in gens:
            dg = g.degree()
            for mm in ring.monomials(k - dg):
                prod = {m + mm: c for m, c in g.terms.items()}
                lower.append([prod.get(m, fmpq(0)) for m in monos])
        r0 = linalg.rank(lower, len(monos)) if lower else 0
        for v in ker:
            test = lower + [v]
            r1 = linalg.rank(test, len(monos))
            if r1 > r0:
                lower.append(v)
                r0 = r1
                f = Poly(ring, {m: c for m, c in zip(monos, v) if c != 0})
                gens.append(f.primitive())
    return gens


def _monomial_values(ring, monos, pt):
    """Values of packed monomials at a point (list in the same order)."""
    cache = {0: pt[0] * 0 + 1}
    out = []
    for m in monos:
        out.append(_mono_val(ring, m, pt, cache))
    return out


def _mono_val(ring, m, pt, cache):
    v = cache.get(m)
    if v is not None:
        return v
    e = ring.unpack(m)
    i = next(j for j, x in enumerate(e) if x)
    v = _mono_val(ring, m - ring.var_mono(i), pt, cache) * pt[i]
    cache[m] = v
    return v


# modular zero-dimensional analysis

class ZeroDimAnalysis:
    def __init__(self, degree, reduced_degree, points):
        self.degree = degree
        self.reduced_degree = reduced_degree
        self.points = points  # list of (field, coords over field) in original coordinates


def _random_change(n, rng):
    while True:
        T = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            T[i][i] += 5 if rng.random() < 0.5 else -5
        if fmpq_mat(T).det() != 0:
            return T


def _modular_data(gens_y, p, lin):
    """Saturated modular analysis; returns dict or raises."""
    ring = gens_y[0].ring
    n = ring.n
    gb = groebner(gens_y, p=p, saturate=True)
    lms = gb.lms
    if any(lm == 0 for lm in lms):
        return {"degree": 0, "r": 0}
    aff = n - 1
    pure = [False] * aff
    for lm in lms:
        e = ring.unpack(lm)
        nz = [i for i in range(n) if e[i]]
        if len(nz) == 1 and nz[0] < aff:
            pure[nz[0]] = True
    dim, _ = dimension_degree_from_lms(ring, lms)
    if dim > 0:
        raise NotZeroDimensional(f"scheme has dimension {dim}")
    if not all(pure):
        return None  # points at infinity: change coordinates
    # affine standard monomials
    std = []
    frontier = [0]
    seen = {0}
    div = ring.divides
    while frontier:
        m = frontier.pop()
        if any(div(lm, m) for lm in lms):
            continue
        std.append(m)
        for i in range(aff):
            mm = m + ring.var_mono(i)
            if mm not in seen:
                seen.add(mm)
                frontier.append(mm)
    key = ring.grevlex_key
    std.sort(key=key)
    delta = len(std)
    idx = {m: i for i, m in enumerate(std)}
    tsh = 16 * (n - 1)
    from .poly import DIGIT
    basis = []
    for lm, dct in zip(gb.lms, gb.dicts):
        dd = {}
        for m, c in dct.items():
            mm = m - (((m >> tsh) & DIGIT) << tsh)
            dd[mm] = (dd.get(mm, 0) + c) % p
        basis.append((lm, {m: c for m, c in dd.items() if c}))
    mats = []
    for i in range(aff):
        M = nmod_mat(delta, delta, p)
        v = ring.var_mono(i)
        for k, s in enumerate(std):
            nf = reduce_dict(ring, {s + v: 1}, basis, key, p)
            for m, c in nf.items():
                M[idx[m], k] = c
        mats.append(M)
    # Seidenberg radical: ideal generated by squarefree parts of minimal polynomials
    nil_rows = []
    for M in mats:
        mu = M.minpoly()
        mu = nmod_poly(mu.coeffs(), p)
        sq = mu // mu.gcd(mu.derivative())
        S = _poly_at_matrix(sq, M, p)
        if any(int(x) for x in S.entries()):
            nil_rows.append(S.transpose())
    if nil_rows:
        stack = nil_rows[0]
        rows = []
        for S in nil_rows:
            rows.extend(S.tolist())
        N = nmod_mat(rows, p)
        R, rho = N.rref()
    else:
        R, rho = nmod_mat(1, delta, p), 0
    r = delta - rho
    pivots = []
    j = 0
    for i in range(rho):
        while int(R[i, j]) == 0:
            j += 1
        pivots.append(j)
    nonpiv = [c for c in range(delta) if c not in set(pivots)]
    ML = nmod_mat(delta, delta, p)
    for c, M in zip(lin, mats):
        ML = ML + M * (c % p)
    cols = []
    vec = nmod_mat(delta, 1, p)
    vec[idx[0], 0] = 1
    for _ in range(r + 1):
        cols.append(vec)
        vec = ML * vec
    for i in range(aff):
        e = nmod_mat(delta, 1, p)
        m = ring.var_mono(i)
        if m in idx:
            e[idx[m], 0] = 1
        else:
            nf = reduce_dict(ring, {m: 1}, basis, key, p)
            for mm, c in nf.items():
                e[idx[mm], 0] = c
        cols.append(e)
    V = nmod_mat(delta, len(cols), p)
    for j, cvec in enumerate(cols):
        for i in range(delta):
            V[i, j] = cvec[i, 0]
    if rho:
        Rm = nmod_mat([[R[i, c] for c in range(delta)] for i in range(rho)], p)
        top = nmod_mat([[V[pc, j] for j in range(len(cols))] for pc in pivots], p)
        V = V - Rm.transpose() * top
    Q = nmod_mat([[V[i, j] for j in range(len(cols))] for i in nonpiv], p) if r else None
    if r == 0:
        return {"degree": delta, "r": 0}
    A = nmod_mat([[Q[i, j] for j in range(r)] for i in range(r)], p)
    if A.det() == 0:
        return {"degree": delta, "r": r, "separating": False}
    rhs = nmod_mat([[Q[i, j] for j in range(r, len(cols))] for i in range(r)], p)
    sol = A.solve(rhs)
    mu = [(-int(sol[k, 0])) % p for k in range(r)] + [1]
    gs = [[int(sol[k, 1 + i]) for k in range(r)] for i in range(aff)]
    return {"degree": delta, "r": r, "separating": True, "mu": mu, "g": gs}


def dimension_degree_from_lms(ring, lms):
    from .groebner import dimension_degree, hilbert_numerator
    return dimension_degree(hilbert_numerator([ring.unpack(m) for m in lms], ring.n), ring.n)


def _poly_at_matrix(poly, M, p):
    coeffs = [int(c) for c in poly.coeffs()]
    n = M.nrows()
    acc = nmod_mat(n, n, p)
    ident = nmod_mat(n, n, p)
    for i in range(n):
        ident[i, i] = 1
    for c in reversed(coeffs):
        acc = acc * M + ident * c
    return acc


def analyze_zero_dim(gens, seed=DEFAULT_SEED, max_primes=40):
    """Degree and geometric points of a zero-dimensional projective scheme.

    Modular computation over several primes, rational reconstruction by
    CRT, and exact verification of every reconstructed point over Q-bar.
    """
    if not gens:
        raise NotZeroDimensional("no equations")
    ring = gens[0].ring
    n = ring.n
    rng = random.Random(seed)
    ints = [g.primitive() for g in gens]
    for attempt in range(8):
        T = _random_change(n, rng)
        lin = [rng.randint(-5, 5) or 1 for _ in range(n - 1)]
        gy = linear_substitution(ints, T)
        results = []
        failed = False
        for p in linalg.PRIMES[: max_primes]:
            try:
                data = _modular_data(gy, p, lin)
            except BadPrime:
                continue
            if data is None:
                failed = True
                break
            if data["r"] == 0:
                if data["degree"] == 0:
                    return ZeroDimAnalysis(0, 0, [])
                # nonempty but every point collapsed: impossible for a nonzero scheme
                raise ModularFailure("inconsistent modular data")
            if not data.get("separating"):
                failed = True
                break
            results.append((p, data))
            out = _try_reconstruct(ring, gens, T, lin, results)
            if out is not None:
                return out
        if not failed:
            raise ModularFailure("rational reconstruction did not stabilize")
    raise ModularFailure("no generic coordinates found")


def _try_reconstruct(ring, gens, T, lin, results):
    # keep the majority signature
    sigs = {}
    for p, d in results:
        sigs.setdefault((d["degree"], d["r"]), []).append((p, d))
    sig, group = max(sigs.items(), key=lambda kv: len(kv[1]))
    if len(group) < 2:
        return None
    degree, r = sig
    aff = ring.n - 1
    vectors = [d["mu"] + [c for g in d["g"] for c in g] for _, d in group]
    M = 1
    res = [0] * len(vectors[0])
    for (p, _), vec in zip(group, vectors):
        if M == 1:
            res, M = list(vec), p
        else:
            res = [linalg.crt_pair(a, M, b, p)[0] for a, b in zip(res, vec)]
            M *= p
    rat = []
    for a in res:
        q = linalg.rational_reconstruction(a, M)
        if q is None:
            return None
        rat.append(q)
    mu = fmpq_poly(rat[: r + 1])
    gs = [fmpq_poly(rat[r + 1 + i * r: r + 1 + (i + 1) * r]) for i in range(aff)]
    # L = sum lin_i y_i must equal the generator
    Lpoly = sum((g * c for g, c in zip(gs, lin)), fmpq_poly([0]))
    if (Lpoly - fmpq_poly([0, 1])) % mu != 0:
        return None
    Tm = fmpq_mat(T)
    points = []
    total = 0
    _, fac = mu.factor()
    for f, mult in fac:
        if mult != 1:
            return None
        f = fmpq_poly(f)
        K = NumberField(f / f[f.degree()], check=False)
        y = [K(g % K.minpoly) for g in gs] + [K.one]
        x = [sum((y[j] * Tm[i, j] for j in range(ring.n)), K.zero) for i in range(ring.n)]
        if not all(g.evaluate(x) == 0 for g in gens):
            return None
        points.append((K, x))
        total += K.degree
    if total != r:
        return None
    return ZeroDimAnalysis(degree, r, points)


def _exact_saturated(gens, seed):
    ring = gens[0].ring
    rng = random.Random(seed)
    T = _random_change(ring.n, rng)
    gy = linear_substitution([g.primitive() for g in gens], T)
    gb = groebner(gy, saturate=True)
    dim, deg = gb.hilbert_polynomial_data()
    if dim > 0:
        raise NotZeroDimensional(f"dimension {dim}")
    return 0 if dim < 0 else deg


def zero_dim_degree(Z):
    return Z.degree()


def decompose_zero_dim(Z, reduced=True):
    """Irreducible components (as ClosedPoints) of the support of Z."""
    a = Z.analysis()
    pts = [ClosedPoint(Z.ring, x) for _, x in a.points]
    pts.sort(key=lambda P: (P.degree, P.coords_str()))
    return pts


def reduced_subscheme(Z):
    """The reduced scheme on the support of Z (vanishing ideal of its points)."""
    a = Z.analysis()
    if not a.points:
        return ZeroDimScheme([Poly(Z.ring, {0: fmpq(1)})])
    reps = [x for _, x in a.points]
    gens = vanishing_ideal(Z.ring, reps, max(1, a.reduced_degree))
    R = ZeroDimScheme(gens, seed=Z.seed)
    R._analysis = ZeroDimAnalysis(a.reduced_degree, a.reduced_degree, a.points)
    return R


def point_split(prime_gens, seed=DEFAULT_SEED):
    """ClosedPoint from the generators of a prime zero-dimensional ideal."""
    Z = ZeroDimScheme(prime_gens, seed=seed)
    a = Z.analysis()
    if len(a.points) != 1 or a.degree != a.reduced_degree:
        raise NotIrreducible(f"{len(a.points)} components, degree {a.degree}")
    K, x = a.points[0]
    return ClosedPoint(Z.ring, x)


# ideal quotients

def colon_ideal(I, J, max_degree):
    """Generators of (I : J) in degrees <= max_degree (exact, linear algebra)."""
    ring = I[0].ring
    gb = groebner(I)
    gens = []
    lower_span = {}
    for k in range(0, max_degree + 1):
        monos = ring.monomials(k)
        rows_by_target = []
        conds = []
        for f in J:
            df = f.degree()
            tgt = {}
            vecs = []
            for m in monos:
                prod = {mm + m: c for mm, c in f.terms.items()}
                nf = gb.normal_form_dict(prod)
                vecs.append(nf)
                for mm in nf:
                    tgt.setdefault(mm, len(tgt))
            for mm, row in tgt.items():
                conds.append([v.get(mm, fmpq(0)) for v in vecs])
        ker = linalg.kernel(conds, len(monos)) if conds else [[fmpq(int(i == j)) for j in range(len(monos))] for i in range(len(monos))]
        # drop what lower-degree generators already produce
        lower = []
        for g in gens:
            for mm in ring.monomials(k - g.degree()):
                prod = {m + mm: c for m, c in g.terms.items()}
                lower.append([prod.get(m, fmpq(0)) for m in monos])
        r0 = linalg.rank(lower, len(monos)) if lower else 0
        for v in ker:
            r1 = linalg.rank(lower + [v], len(monos))
            if r1 > r0:
                lower.append(v)
                r0 = r1
                gens.append(Poly(ring, {m: c for m, c in zip(monos, v) if c != 0}).primitive())
        if gens and gens[0].degree() == 0:
            break
    return gens


def ideal_quotient_saturate(I, J, mode="colon", max_degree=None):
    """(I : J) or (I : J^infinity); degrees truncated at max_degree."""
    if max_degree is None:
        gb = groebner(I)
        max_degree = max(p.degree() for p in gb.polys) + max(f.degree() for f in J)
    K = colon_ideal(I, J, max_degree)
    if mode == "colon":
        return K
    current = groebner(K).polys if K else []
    for _ in range(50):
        K2 = colon_ideal(current, J, max_degree)
        nxt = groebner(K2).polys
        if _same_ideal(current, nxt):
            return nxt
        current = nxt
    return current


def _same_ideal(a, b):
    if len(a) != len(b):
        return False
    return all(x == y for x, y in zip(a, b))


def residual_intersection(X, L, remove, seed=DEFAULT_SEED):
    """Residual scheme of X cap L after removing a contained subscheme."""
    I = list(X.forms) + list(L)
    Z = ZeroDimScheme(I, seed=seed)
    dz = Z.degree()
    if isinstance(remove, ClosedPoint):
        if not all(f.evaluate(remove.representative) == 0 for f in I):
            raise NotContained("the point is not on X cap L")
        J = remove.prime_ideal
        dr = remove.degree
    else:
        J = remove.gens
        dr = remove.degree()
        gbJ = groebner(_saturate_exact(J, seed))
        if not all(gbJ.contains(f) for f in I):
            raise NotContained("scheme is not contained in X cap L")
    target = dz - dr
    if target == 0:
        return ZeroDimScheme([Poly(X.ring, {0: fmpq(1)})], seed=seed)
    K = colon_ideal(I, J, dz + 1)
    K = _saturate_exact(K, seed)
    R = ZeroDimScheme(K, seed=seed)
    if R.degree() != target:
        raise ModularFailure(f"residual degree {R.degree()} != {target}")
    return R


def _saturate_exact(gens, seed):
    """Saturation by the irrelevant ideal, returned in original coordinates."""
    ring = gens[0].ring
    rng = random.Random(seed)
    T = _random_change(ring.n, rng)
    Tinv = fmpq_mat(T).inv()
    gy = linear_substitution(gens, T)
    gb = groebner(gy, saturate=True)
    back = [[Tinv[i, j] for j in range(ring.n)] for i in range(ring.n)]
    orig = linear_substitution(gb.polys, back)
    return [f.primitive() for f in groebner(orig).polys]
