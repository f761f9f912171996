"""Groebner bases of homogeneous ideals by degree-by-degree matrix reduction.

Polynomials are handled internally as dicts {packed monomial: coefficient}
with coefficients either fmpq (exact) or ints modulo a prime p.  Each degree
step builds the Macaulay-style matrix of S-pair halves, new generators and
reducers, row-reduces it with flint, and keeps the rows with new leading
monomials.  Pairs are pruned with the Gebauer-Moeller criteria.

With ``saturate=True`` and grevlex order, any new element whose leading
monomial is divisible by the last variable is divided by the largest power
of that variable (Bayer-Stillman); the result is then a basis of the
saturation by the last variable.
"""

from flint import fmpq, fmpq_mat, nmod_mat

from .errors import ComputationError
from .poly import DIGIT, Poly

BadPrime = type("BadPrime", (ComputationError,), {"code": "BadPrime"})


def poly_to_dict(poly, p=None):
    if p is None:
        return dict(poly.terms)
    out = {}
    for m, c in poly.terms.items():
        q = int(c.q) % p
        if q == 0:
            raise BadPrime(p)
        v = int(c.p) * pow(q, -1, p) % p
        if v:
            out[m] = v
    return out


def dict_to_poly(ring, d):
    if d and not isinstance(next(iter(d.values())), int):
        return Poly(ring, dict(d))
    return Poly(ring, {m: fmpq(c) for m, c in d.items()})


class _Elt:
    __slots__ = ("lm", "poly", "deg", "nterms")

    def __init__(self, lm, poly):
        self.lm = lm
        self.poly = poly
        self.deg = lm % DIGIT
        self.nterms = len(poly)


def _make_monic(d, key, p):
    lm = max(d, key=key)
    c = d[lm]
    if p is None:
        if c != 1:
            inv = 1 / c
            d = {m: v * inv for m, v in d.items()}
    else:
        if c != 1:
            inv = pow(c, -1, p)
            d = {m: v * inv % p for m, v in d.items()}
    return lm, d


class F4:
    def __init__(self, ring, p=None, order="grevlex", saturate=False, max_degree=None):
        self.ring = ring
        self.p = p
        self.order = order
        self.key = ring.grevlex_key if order == "grevlex" else ring.lex_key
        self.saturate = saturate
        if saturate and order != "grevlex":
            raise ValueError("saturation trick needs grevlex")
        self.max_degree = max_degree
        self.G = []
        self.active = []
        self.pairs = []
        self.todo = []
        self.tvar = ring.var_mono(ring.n - 1)
        self.tshift = 16 * (ring.n - 1)

    # helpers
    def _strip_t(self, d):
        k = min((m >> self.tshift) & DIGIT for m in d)
        if k == 0:
            return d, 0
        sub = k << self.tshift
        return {m - sub: c for m, c in d.items()}, k

    def add_generators(self, dicts):
        for d in dicts:
            if not d:
                continue
            degs = {m % DIGIT for m in d}
            if len(degs) != 1:
                raise ValueError("generators must be homogeneous")
            if self.saturate:
                d, _ = self._strip_t(d)
            self.todo.append(d)

    def _update(self, h):
        ring = self.ring
        G = self.G
        hlm = G[h].lm
        div = ring.divides
        lcm = ring.mlcm
        C = list(self.active)
        D = []
        lcms = {g: lcm(hlm, G[g].lm) for g in C}
        while C:
            g1 = C.pop(0)
            l1 = lcms[g1]
            if ring.coprime(hlm, G[g1].lm):
                D.append(g1)
                continue
            ok = True
            for g2 in C:
                if div(lcms[g2], l1):
                    ok = False
                    break
            if ok:
                for g2 in D:
                    if div(lcms[g2], l1):
                        ok = False
                        break
            if ok:
                D.append(g1)
        E = [g for g in D if not ring.coprime(hlm, G[g].lm)]
        newpairs = []
        for pr in self.pairs:
            _, l12, g1, g2 = pr
            if div(hlm, l12) and lcm(G[g1].lm, hlm) != l12 and lcm(hlm, G[g2].lm) != l12:
                continue
            newpairs.append(pr)
        for g in E:
            l = lcms[g]
            newpairs.append((l % DIGIT, l, g, h))
        self.pairs = newpairs
        self.active = [g for g in self.active if not div(hlm, G[g].lm)] + [h]

    def _find_reducer(self, m):
        div = self.ring.divides
        best = None
        G = self.G
        for g in self.active:
            e = G[g]
            if div(e.lm, m):
                if best is None or e.nterms < G[best].nterms:
                    best = g
        return best

    def run(self):
        while self.pairs or self.todo:
            d = min([pr[0] for pr in self.pairs] + [next(iter(g)) % DIGIT for g in self.todo])
            if self.max_degree is not None and d > self.max_degree:
                break
            self._step(d)
        return self

    def _step(self, d):
        G = self.G
        sel = [pr for pr in self.pairs if pr[0] == d]
        self.pairs = [pr for pr in self.pairs if pr[0] != d]
        gens = [g for g in self.todo if next(iter(g)) % DIGIT == d]
        self.todo = [g for g in self.todo if next(iter(g)) % DIGIT != d]
        rows = []
        seen = set()
        old = set()
        for _, l, i, j in sel:
            for k in (i, j):
                mult = l - G[k].lm
                if (mult, k) not in seen:
                    seen.add((mult, k))
                    rows.append((mult, k))
            old.add(l)
        monos = set()
        for mult, k in rows:
            for m in G[k].poly:
                monos.add(m + mult)
        for g in gens:
            monos.update(g)
        done = set(old)
        stack = [m for m in monos if m not in done]
        while stack:
            m = stack.pop()
            if m in done:
                continue
            done.add(m)
            r = self._find_reducer(m)
            if r is None:
                continue
            mult = m - G[r].lm
            rows.append((mult, r))
            old.add(m)
            for mm in G[r].poly:
                mm = mm + mult
                if mm not in monos:
                    monos.add(mm)
                    stack.append(mm)
        if not rows and not gens:
            return
        cols = sorted(monos, key=self.key, reverse=True)
        colidx = {m: j for j, m in enumerate(cols)}
        nrows = len(rows) + len(gens)
        ncols = len(cols)
        p = self.p
        M = nmod_mat(nrows, ncols, p) if p is not None else fmpq_mat(nrows, ncols)
        r = 0
        for mult, k in rows:
            for m, c in G[k].poly.items():
                M[r, colidx[m + mult]] = c
            r += 1
        for g in gens:
            for m, c in g.items():
                M[r, colidx[m]] = c
            r += 1
        R, rank = M.rref()
        newpolys = []
        j = 0
        for i in range(rank):
            while R[i, j] == 0:
                j += 1
            if cols[j] in old:
                continue
            row = {}
            for jj in range(j, ncols):
                c = R[i, jj]
                if c != 0:
                    row[cols[jj]] = int(c) if p is not None else c
            newpolys.append(row)
        for row in newpolys:
            if self.saturate:
                row2, k = self._strip_t(row)
                if k:
                    self.todo.append(row2)
                    continue
            lm, row = _make_monic(row, self.key, p)
            G.append(_Elt(lm, row))
            self._update(len(G) - 1)

    def basis(self):
        """Reduced basis (list of monic dicts), sorted by leading monomial."""
        G = self.G
        elts = [G[g] for g in self.active]
        # drop redundant elements
        elts = [e for e in elts if not any(f is not e and self.ring.divides(f.lm, e.lm) for f in elts)]
        elts.sort(key=lambda e: self.key(e.lm))
        out = []
        lms = [e.lm for e in elts]
        for e in elts:
            tail = {m: c for m, c in e.poly.items() if m != e.lm}
            red = reduce_dict(self.ring, tail, [(f.lm, f.poly) for f in elts if f is not e], self.key, self.p)
            red[e.lm] = 1 if self.p is not None else fmpq(1)
            out.append(red)
        return out, lms


def reduce_dict(ring, d, basis, key, p=None):
    """Full normal form of d modulo basis [(lm, monic dict)]."""
    import heapq
    div = ring.divides
    d = dict(d)
    heap = [-key(m) for m in d]
    heapq.heapify(heap)
    keymap = {key(m): m for m in d}
    out = {}
    lms = basis
    while heap:
        k = -heapq.heappop(heap)
        m = keymap.get(k)
        if m is None or m not in d:
            continue
        c = d.pop(m)
        keymap.pop(k, None)
        red = None
        for lm, g in lms:
            if div(lm, m):
                red = (lm, g)
                break
        if red is None:
            out[m] = c
            continue
        lm, g = red
        mult = m - lm
        for gm, gc in g.items():
            if gm == lm:
                continue
            mm = gm + mult
            if p is None:
                v = d.get(mm, 0) - c * gc
            else:
                v = (d.get(mm, 0) - c * gc) % p
            if v == 0:
                if mm in d:
                    del d[mm]
            else:
                if mm not in d:
                    kk = key(mm)
                    keymap[kk] = mm
                    heapq.heappush(heap, -kk)
                d[mm] = v
    return out


class GroebnerBasis:
    """A reduced Groebner basis together with normal-form and Hilbert tools."""

    def __init__(self, ring, dicts, lms, p=None, order="grevlex"):
        self.ring = ring
        self.p = p
        self.order = order
        self.key = ring.grevlex_key if order == "grevlex" else ring.lex_key
        self.dicts = dicts
        self.lms = lms
        self._pairs = list(zip(lms, dicts))

    @property
    def polys(self):
        return [dict_to_poly(self.ring, d) for d in self.dicts]

    def __len__(self):
        return len(self.dicts)

    def normal_form_dict(self, d):
        return reduce_dict(self.ring, d, self._pairs, self.key, self.p)

    def normal_form(self, poly):
        return dict_to_poly(self.ring, self.normal_form_dict(poly_to_dict(poly, self.p)))

    def contains(self, poly):
        return not self.normal_form_dict(poly_to_dict(poly, self.p))

    def is_standard(self, m):
        div = self.ring.divides
        return not any(div(lm, m) for lm in self.lms)

    def standard_monomials(self, degree):
        return [m for m in self.ring.monomials(degree) if self.is_standard(m)]

    def hilbert_numerator(self):
        return hilbert_numerator([self.ring.unpack(m) for m in self.lms], self.ring.n)

    def hilbert_polynomial_data(self):
        """(projective dimension, degree) of R/I; dimension -1 for the empty scheme."""
        return dimension_degree(self.hilbert_numerator(), self.ring.n)


def groebner(polys, order="grevlex", p=None, saturate=False, max_degree=None):
    """Reduced Groebner basis of homogeneous polynomials (exact or mod p)."""
    polys = [f for f in polys if f]
    if not polys:
        raise ValueError("empty generator list")
    ring = polys[0].ring
    eng = F4(ring, p=p, order=order, saturate=saturate, max_degree=max_degree)
    eng.add_generators([poly_to_dict(f, p) for f in polys])
    eng.run()
    dicts, lms = eng.basis()
    return GroebnerBasis(ring, dicts, lms, p=p, order=order)


def groebner_basis(polys, order="grevlex"):
    """Reduced Groebner basis over Q as a list of monic Poly objects."""
    gb = groebner(polys, order=order)
    return gb.polys


# Hilbert series of monomial ideals

def _minimalize(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def _pmul(a, b):
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] += x * y
    return r


def _padd(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def hilbert_numerator(gens, n):
    """Numerator N(t) of HS(R/M) = N(t)/(1-t)^n for a monomial ideal M."""
    gens = _minimalize([tuple(g) for g in gens])
    if not gens:
        return [1]
    if any(sum(g) == 0 for g in gens):
        return [0]
    # coprime pure powers: product formula
    if all(sum(1 for x in g if x) == 1 for g in gens):
        supports = [next(i for i, x in enumerate(g) if x) for g in gens]
        if len(set(supports)) == len(supports):
            num = [1]
            for g in gens:
                num = _pmul(num, [1] + [0] * (sum(g) - 1) + [-1])
            return num
    # pivot on the most frequent variable among non-pure generators
    counts = [0] * n
    for g in gens:
        if sum(1 for x in g if x) > 1:
            for i, x in enumerate(g):
                if x:
                    counts[i] += 1
    v = max(range(n), key=lambda i: counts[i])
    exps = sorted(g[v] for g in gens if g[v] > 0 and sum(1 for x in g if x) > 1)
    e = exps[len(exps) // 2]
    pivot = tuple(e if i == v else 0 for i in range(n))
    # HS(M) = HS(M + (p)) + t^deg(p) HS(M : p)
    plus = gens + [pivot]
    colon = [tuple(max(a - b, 0) for a, b in zip(g, pivot)) for g in gens]
    a = hilbert_numerator(plus, n)
    b = hilbert_numerator(colon, n)
    return _padd(a, [0] * e + b)


def dimension_degree(num, n):
    """From N(t) with HS = N/(1-t)^n, return (projective dim, degree)."""
    num = list(num)
    while num and num[-1] == 0:
        num.pop()
    if not num:
        return -1, 0
    k = 0
    while True:
        s = sum(num)
        if s != 0 or k >= n:
            break
        # divide by (1 - t)
        q = []
        acc = 0
        for c in num[:-1]:
            acc += c
            q.append(acc)
        num = q
        k += 1
    krull = n - k
    return krull - 1, sum(num)
