"""Sparse multivariate polynomials with packed exponent vectors.

A monomial x_0^e_0 ... x_{n-1}^e_{n-1} is stored as the integer
sum(e_i << 16*i), so monomial multiplication is integer addition and the
total degree is the packed value modulo 2^16 - 1.
"""

import re
from fractions import Fraction

from flint import fmpq, fmpq_mat, fmpq_poly, fmpz

from .errors import ParseError
from .numberfield import QQ, FieldElement, to_fmpq

BITS = 16
DIGIT = (1 << BITS) - 1


class PolyRing:
    """Polynomial ring over Q (or a number field) in named variables."""

    _cache = {}

    def __new__(cls, names, field=QQ):
        key = (tuple(names), field)
        r = cls._cache.get(key)
        if r is None:
            r = super().__new__(cls)
            r._setup(tuple(names), field)
            cls._cache[key] = r
        return r

    def _setup(self, names, field):
        self.names = names
        self.field = field
        self.n = len(names)
        self.guard = sum(1 << (BITS * i + BITS - 1) for i in range(self.n))
        self.all_digits = sum(DIGIT << (BITS * i) for i in range(self.n))
        self.shift = BITS * self.n
        self._unpack = {}

    def __repr__(self):
        return f"PolyRing({','.join(self.names)})"

    def __getnewargs__(self):
        return (self.names, self.field)

    # monomials
    def pack(self, exps):
        m = 0
        for i, e in enumerate(exps):
            m |= e << (BITS * i)
        return m

    def unpack(self, m):
        r = self._unpack.get(m)
        if r is None:
            r = tuple((m >> (BITS * i)) & DIGIT for i in range(self.n))
            if len(self._unpack) < 500000:
                self._unpack[m] = r
        return r

    @staticmethod
    def mdeg(m):
        return m % DIGIT

    def divides(self, a, b):
        g = self.guard
        return ((b | g) - a) & g == g

    def grevlex_key(self, m):
        return ((m % DIGIT) << self.shift) + (self.all_digits - m)

    def lex_key(self, m):
        e = self.unpack(m)
        k = 0
        for x in e:
            k = (k << BITS) | x
        return k

    def mlcm(self, a, b):
        ea, eb = self.unpack(a), self.unpack(b)
        return self.pack([x if x > y else y for x, y in zip(ea, eb)])

    def coprime(self, a, b):
        return all(x == 0 or y == 0 for x, y in zip(self.unpack(a), self.unpack(b)))

    def var_mono(self, i):
        return 1 << (BITS * i)

    def monomials(self, degree):
        """All packed monomials of the given total degree, grevlex descending."""
        out = []

        def rec(i, left, acc):
            if i == self.n - 1:
                out.append(acc | (left << (BITS * i)))
                return
            for e in range(left, -1, -1):
                rec(i + 1, left - e, acc | (e << (BITS * i)))

        if self.n == 0:
            return [0] if degree == 0 else []
        rec(0, degree, 0)
        out.sort(key=self.grevlex_key, reverse=True)
        return out

    def mono_str(self, m):
        parts = []
        for name, e in zip(self.names, self.unpack(m)):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    # constructors
    def gens(self):
        return [Poly(self, {self.var_mono(i): fmpq(1)}) for i in range(self.n)]

    def var(self, name):
        return self.gens()[self.names.index(name)]

    def const(self, c):
        c = self._coef(c)
        return Poly(self, {0: c} if c != 0 else {})

    def zero(self):
        return Poly(self, {})

    def one(self):
        return self.const(1)

    def _coef(self, c):
        if self.field.degree == 1:
            return to_fmpq(c)
        return self.field(c)

    def from_exponents(self, d):
        return Poly(self, {self.pack(e): self._coef(c) for e, c in d.items() if c != 0})

    def parse(self, text):
        return parse_poly(self, text)

    def change_field(self, field):
        return PolyRing(self.names, field)


class Poly:
    """Immutable sparse polynomial; terms maps packed monomials to nonzero coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    def _lift(self, other):
        if isinstance(other, Poly):
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m)
            if v is None:
                t[m] = c
            else:
                v = v + c
                if v == 0:
                    del t[m]
                else:
                    t[m] = v
        return Poly(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c):
        if c == 0:
            return Poly(self.ring, {})
        return Poly(self.ring, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, fmpq, fmpz, Fraction, FieldElement)):
                return self.scale(other if not isinstance(other, Fraction) else to_fmpq(other))
            return NotImplemented
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        t = {}
        get = t.get
        for m2, c2 in b.items():
            for m1, c1 in a.items():
                m = m1 + m2
                v = get(m)
                t[m] = c1 * c2 if v is None else v + c1 * c2
        return Poly(self.ring, {m: c for m, c in t.items() if c != 0})

    __rmul__ = __mul__

    def __pow__(self, k):
        r = self.ring.one()
        b = self
        while k:
            if k & 1:
                r = r * b
            k >>= 1
            if k:
                b = b * b
        return r

    def __truediv__(self, other):
        if isinstance(other, Poly):
            q, r = self.divmod_exact(other)
            if r:
                raise ArithmeticError("inexact polynomial division")
            return q
        return self.scale(1 / to_fmpq(other) if not isinstance(other, FieldElement) else other.inverse())

    def divmod_exact(self, g):
        """Multivariate division by one polynomial in grevlex; returns (q, r)."""
        key = self.ring.grevlex_key
        glm = max(g.terms, key=key)
        glc = g.terms[glm]
        rem = dict(self.terms)
        quo = {}
        out = {}
        div = self.ring.divides
        while rem:
            m = max(rem, key=key)
            c = rem[m]
            if div(glm, m):
                qm = m - glm
                qc = c / glc
                quo[qm] = qc
                for gm, gc in g.terms.items():
                    mm = gm + qm
                    v = rem.get(mm, 0) - qc * gc
                    if v == 0:
                        rem.pop(mm, None)
                    else:
                        rem[mm] = v
            else:
                out[m] = c
                del rem[m]
        return Poly(self.ring, quo), Poly(self.ring, out)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return self == self.ring.const(other)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    # degrees
    def degree(self):
        if not self.terms:
            return -1
        return max(m % DIGIT for m in self.terms)

    def is_homogeneous(self):
        ds = {m % DIGIT for m in self.terms}
        return len(ds) <= 1

    def degree_in(self, i):
        if not self.terms:
            return -1
        return max(self.ring.unpack(m)[i] for m in self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: self.ring.grevlex_key(mc[0]), reverse=True)

    def leading_monomial(self):
        return max(self.terms, key=self.ring.grevlex_key)

    def leading_coefficient(self):
        return self.terms[self.leading_monomial()]

    def monic(self):
        return self.scale(1 / self.leading_coefficient())

    def coefficient(self, exps):
        return self.terms.get(self.ring.pack(exps), 0)

    # evaluation and substitution
    def evaluate(self, values):
        """Evaluate at a point; values may be rationals or field elements."""
        n = self.ring.n
        powers = [[1] for _ in range(n)]
        total = 0
        for m, c in self.terms.items():
            e = self.ring.unpack(m)
            v = c
            for i in range(n):
                k = e[i]
                if k:
                    pw = powers[i]
                    while len(pw) <= k:
                        pw.append(pw[-1] * values[i])
                    v = v * pw[k]
            total = total + v
        return total

    __call__ = evaluate

    def subs(self, polys, ring=None):
        """Compose: substitute polys[i] for variable i."""
        ring = ring or polys[0].ring
        n = self.ring.n
        powers = [[ring.one()] for _ in range(n)]
        acc = {}
        for m, c in self.terms.items():
            e = self.ring.unpack(m)
            v = None
            for i in range(n):
                k = e[i]
                if k:
                    pw = powers[i]
                    while len(pw) <= k:
                        pw.append(pw[-1] * polys[i])
                    v = pw[k] if v is None else v * pw[k]
            if v is None:
                v = ring.one()
            for mm, cc in v.terms.items():
                acc[mm] = acc.get(mm, 0) + c * cc
        return Poly(ring, {m: c for m, c in acc.items() if c != 0})

    def diff(self, i):
        out = {}
        sh = BITS * i
        for m, c in self.terms.items():
            k = (m >> sh) & DIGIT
            if k:
                out[m - (1 << sh)] = c * k
        return Poly(self.ring, out)

    def map_coeffs(self, fn, ring=None):
        ring = ring or self.ring
        t = {}
        for m, c in self.terms.items():
            v = fn(c)
            if v != 0:
                t[m] = v
        return Poly(ring, t)

    # normalization (rational coefficients)
    def denominator_lcm(self):
        d = fmpz(1)
        for c in self.terms.values():
            q = c.q
            d = d * q // d.gcd(q)
        return d

    def primitive(self):
        """Integer coefficients with content 1 and positive leading coefficient."""
        if not self.terms:
            return self
        d = self.denominator_lcm()
        ints = {m: (c * d).p for m, c in self.terms.items()}
        g = fmpz(0)
        for v in ints.values():
            g = g.gcd(v)
        lm = self.leading_monomial()
        if ints[lm] < 0:
            g = -g
        return Poly(self.ring, {m: fmpq(v // g) for m, v in ints.items()})

    def __repr__(self):
        return self.to_string()

    def to_string(self):
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            ms = self.ring.mono_str(m)
            cs = str(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            if isinstance(c, FieldElement) and not c.is_rational():
                cs = str(c)
                neg = False
            if ms == "1":
                body = cs
            elif cs == "1":
                body = ms
            else:
                body = cs + "*" + ms
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)


def linear_form(ring, coeffs):
    return Poly(ring, {ring.var_mono(i): to_fmpq(c) for i, c in enumerate(coeffs) if c != 0})


def linear_substitution(polys, matrix):
    """Substitute x = matrix * y (matrix rows indexed by old variables).

    Works degree by degree: the substitution is a linear map on forms of
    degree k, applied to all inputs at once as one matrix product.
    """
    ring = polys[0].ring
    ys = ring.gens()
    images = []
    for row in matrix:
        acc = {}
        for j, a in enumerate(row):
            if a != 0:
                acc[ring.var_mono(j)] = to_fmpq(a)
        images.append(Poly(ring, acc))
    cache = {0: ring.one()}

    def img(m):
        v = cache.get(m)
        if v is None:
            e = ring.unpack(m)
            i = next(j for j, x in enumerate(e) if x)
            v = img(m - ring.var_mono(i)) * images[i]
            cache[m] = v
        return v

    parts = {}
    for k, f in enumerate(polys):
        for m, c in f.terms.items():
            parts.setdefault(m % DIGIT, {}).setdefault(k, {})[m] = c
    out = [{} for _ in polys]
    for deg, group in parts.items():
        src = sorted({m for d in group.values() for m in d})
        tgt = ring.monomials(deg)
        tidx = {m: i for i, m in enumerate(tgt)}
        S = fmpq_mat(len(src), len(tgt))
        for i, m in enumerate(src):
            for mm, c in img(m).terms.items():
                S[i, tidx[mm]] = c
        keys = sorted(group)
        P = fmpq_mat(len(keys), len(src))
        sidx = {m: i for i, m in enumerate(src)}
        for r, k in enumerate(keys):
            for m, c in group[k].items():
                P[r, sidx[m]] = c
        Q = P * S
        for r, k in enumerate(keys):
            o = out[k]
            for j, m in enumerate(tgt):
                c = Q[r, j]
                if c != 0:
                    o[m] = c
    return [Poly(ring, o) for o in out]


def permute_variables(polys, perm):
    """Rename variable i to variable perm[i]."""
    ring = polys[0].ring
    out = []
    for f in polys:
        t = {}
        for m, c in f.terms.items():
            e = ring.unpack(m)
            ne = [0] * ring.n
            for i, x in enumerate(e):
                ne[perm[i]] = x
            t[ring.pack(ne)] = c
        out.append(Poly(ring, t))
    return out


# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class _Parser:
    def __init__(self, ring, text, line=1):
        self.ring = ring
        self.text = text
        self.line = line
        self.toks = []
        pos = 0
        while pos < len(text):
            mt = _TOKEN.match(text, pos)
            if mt is None or mt.end() == pos:
                break
            if mt.group(1) is not None:
                self.toks.append(("num", int(mt.group(1)), mt.start(1)))
            elif mt.group(2) is not None:
                self.toks.append(("var", mt.group(2), mt.start(2)))
            elif mt.group(3) is not None:
                ch = mt.group(3)
                if ch not in "+-*/^()":
                    raise ParseError(f"unexpected character {ch!r}", line, mt.start(3) + 1)
                self.toks.append((ch, ch, mt.start(3)))
            pos = mt.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", None, len(self.text))

    def take(self, kind=None):
        t = self.peek()
        if kind is not None and t[0] != kind:
            raise ParseError(f"expected {kind!r}, found {t[1]!r}", self.line, t[2] + 1)
        self.i += 1
        return t

    def parse(self):
        if not self.toks:
            raise ParseError("empty polynomial", self.line, 1)
        p = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected token {t[1]!r}", self.line, t[2] + 1)
        return p

    def expr(self):
        p = self.term()
        while self.peek()[0] in "+-" and self.peek()[0] != "end":
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, col = self.take()
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if q.degree() > 0 or q.is_zero():
                    raise ParseError("division only by nonzero constants", self.line, col + 1)
                p = p / q.terms[0]
        return p

    def unary(self):
        t = self.peek()
        if t[0] == "-":
            self.take()
            return -self.unary()
        if t[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            _, k, _ = self.take("num")
            return base ** k
        return base

    def atom(self):
        kind, val, col = self.take()
        if kind == "num":
            nxt = self.peek()
            if nxt[0] in ("var", "(") :
                raise ParseError("implicit multiplication is not allowed", self.line, nxt[2] + 1)
            return self.ring.const(val)
        if kind == "var":
            if val not in self.ring.names:
                raise ParseError(f"unknown variable {val!r}", self.line, col + 1)
            nxt = self.peek()
            if nxt[0] in ("var", "num", "("):
                raise ParseError("implicit multiplication is not allowed", self.line, nxt[2] + 1)
            return self.ring.var(val)
        if kind == "(":
            p = self.expr()
            self.take(")")
            return p
        raise ParseError(f"unexpected token {val!r}", self.line, col + 1)


def parse_poly(ring, text, line=1):
    return _Parser(ring, text, line).parse()


# univariate helpers

def sylvester_matrix(f, g):
    """Rows: deg g shifted copies of f, then deg f copies of g (ascending coefficients)."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(f) + [0] * (size - i - m - 1))
    for i in range(m):
        rows.append([0] * i + list(g) + [0] * (size - i - n - 1))
    return rows


def _exdiv(a, b):
    if isinstance(b, int) and b == 1:
        return a
    if isinstance(a, int) and isinstance(b, int):
        return a // b
    if isinstance(a, fmpq_poly) and isinstance(b, fmpq_poly):
        q, r = divmod(a, b)
        if not r.is_zero():
            raise ArithmeticError("inexact division")
        return q
    return a / b


def bareiss_det(rows):
    """Fraction-free determinant; entries need +, -, * and exact division."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return a[k][k] * 0
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * piv - a[i][k] * a[k][j]
                a[i][j] = _exdiv(num, prev)
            a[i][k] = 0
        prev = piv
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d


def _coeff_list(f):
    if isinstance(f, fmpq_poly):
        return [f[i] for i in range(f.degree() + 1)]
    return list(f)


def upoly_resultant(f, g):
    """Res(f, g) as det of the Sylvester matrix with f's rows on top.

    f and g are coefficient lists (constant term first) over any exact
    commutative ring, or fmpq_poly.  Res(x - a, x - b) = b - a.
    """
    fl, gl = _coeff_list(f), _coeff_list(g)
    fl = [to_fmpq(c) if isinstance(c, (int, fmpz, Fraction)) else c for c in fl]
    gl = [to_fmpq(c) if isinstance(c, (int, fmpz, Fraction)) else c for c in gl]
    while len(fl) > 1 and fl[-1] == 0:
        fl.pop()
    while len(gl) > 1 and gl[-1] == 0:
        gl.pop()
    if (len(fl) == 1 and fl[0] == 0) or (len(gl) == 1 and gl[0] == 0):
        return 0
    if len(fl) == 1 and len(gl) == 1:
        return 1
    return bareiss_det(sylvester_matrix(fl, gl))


def upoly_factor_rationals(f):
    """Irreducible factorization over Q: list of (monic factor, multiplicity)."""
    if not isinstance(f, fmpq_poly):
        f = fmpq_poly([to_fmpq(c) for c in f])
    if f.is_zero():
        raise ValueError("cannot factor zero")
    _, fac = f.factor()
    out = []
    for p, k in fac:
        p = fmpq_poly(p)
        out.append((p / p[p.degree()], k))
    out.sort(key=lambda pk: (pk[0].degree(), [str(c) for c in pk[0].coeffs()]))
    return out


def binary_form_to_upoly(coeffs):
    return fmpq_poly([to_fmpq(c) for c in coeffs])


def as_fraction(c):
    c = to_fmpq(c)
    return Fraction(int(c.p), int(c.q))
