"""Local power series on the blowup of a smooth surface point.

Coordinates: a geometric point p of X over a number field K, a basis
v_1..v_d of K^{d+1} modulo p such that v_{d-1}, v_d span the tangent plane
of X at p.  The affine chart x = p + sum y_i v_i puts p at the origin; the
surface is locally a graph y_i = psi_i(y_{d-1}, y_d) for i <= c = d-2.
On the blowup chart y_{d-1} = u*w, y_d = u the exceptional divisor is
u = 0 with coordinate w, and y_i = u * phi_i(u, w) with phi_i(0, w) = 0.

Every series met here is a power series in y_{d-1}, y_d, so its coefficient
of u^k is a polynomial in w of degree at most k.  A series truncated at
u^N is stored by Kronecker substitution u^k w^l -> Z^(kN + l), one
fmpq_poly per power-basis coordinate of K.
"""

from flint import fmpq, fmpq_poly

from . import linalg
from .errors import PrecisionExhausted, SingularCentre
from .numberfield import QQ, FieldElement


class SeriesContext:
    """Arithmetic for truncated series over a number field at u-precision N."""

    def __init__(self, field, N):
        self.field = field
        self.e = field.degree
        self.N = N
        self.B = max(N, 1)
        e = self.e
        # alpha^k for e <= k <= 2e-2 in the power basis
        self.fold = {}
        mp = field.minpoly
        for k in range(e, 2 * e - 1):
            r = fmpq_poly([0] * k + [1]) % mp
            self.fold[k] = [r[j] for j in range(e)]

    def length(self, prec):
        return prec * self.B

    def zero(self):
        return Series(self, [fmpq_poly() for _ in range(self.e)])

    def const(self, c):
        if not isinstance(c, FieldElement):
            c = self.field(c)
        return Series(self, [fmpq_poly([x]) if x != 0 else fmpq_poly() for x in self.field(c).coords])

    def monomial(self, k, l, c=1):
        """c * u^k w^l."""
        s = self.const(c)
        idx = k * self.B + l
        return Series(self, [x.left_shift(idx) for x in s.comps])


class Series:
    __slots__ = ("ctx", "comps")

    def __init__(self, ctx, comps):
        self.ctx = ctx
        self.comps = comps

    def __add__(self, other):
        return Series(self.ctx, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        return Series(self.ctx, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return Series(self.ctx, [-a for a in self.comps])

    def mul(self, other, prec):
        ctx = self.ctx
        e = ctx.e
        L = ctx.length(prec)
        if e == 1:
            return Series(ctx, [self.comps[0].mul_low(other.comps[0], L)])
        prod = [fmpq_poly() for _ in range(2 * e - 1)]
        for i, a in enumerate(self.comps):
            if a.is_zero():
                continue
            for j, b in enumerate(other.comps):
                if not b.is_zero():
                    prod[i + j] += a.mul_low(b, L)
        for k in range(2 * e - 2, e - 1, -1):
            if prod[k].is_zero():
                continue
            for j, r in enumerate(ctx.fold[k]):
                if r != 0:
                    prod[j] += prod[k] * r
        return Series(ctx, prod[:e])

    def scale(self, c):
        """Multiply by a field element or rational."""
        ctx = self.ctx
        if not isinstance(c, FieldElement) or c.field.degree == 1:
            c = to_q(c)
            return Series(ctx, [a * c for a in self.comps])
        return self.mul(ctx.const(c), ctx.N)

    def truncate(self, prec):
        L = self.ctx.length(prec)
        return Series(self.ctx, [a.truncate(L) for a in self.comps])

    def constant(self):
        return self.ctx.field([a[0] for a in self.comps])

    def coefficient(self, k, l):
        idx = k * self.ctx.B + l
        return self.ctx.field([a[idx] for a in self.comps])

    def inverse(self, prec):
        c0 = self.constant()
        if c0 == 0:
            raise ZeroDivisionError("series is not a unit")
        ctx = self.ctx
        g = ctx.const(c0.inverse())
        two = ctx.const(2)
        p = 1
        while p < prec:
            p = min(2 * p, prec)
            g = g.mul(two - self.mul(g, p), p)
        return g

    def order(self, cap):
        """Least k < cap with a nonzero u^k coefficient, else cap."""
        B = self.ctx.B
        best = cap
        for a in self.comps:
            if a.is_zero():
                continue
            n = a.degree() + 1
            for idx in range(min(n, cap * B)):
                if a[idx] != 0:
                    best = min(best, idx // B)
                    break
        return best

    def coefficient_vector(self, prec):
        """Rational coordinates of the coefficients of u^k w^l, k < prec, l <= k."""
        B = self.ctx.B
        out = []
        for a in self.comps:
            for k in range(prec):
                for l in range(k + 1):
                    out.append(a[k * B + l])
        return out


def to_q(c):
    if isinstance(c, FieldElement):
        return c.poly[0]
    return fmpq(c) if isinstance(c, int) else c


def eval_monomials(ring, X, prec, cache=None):
    """Return a function mapping packed monomials to their series values."""
    ctx = X[0].ctx
    if cache is None:
        cache = {0: ctx.const(1)}

    def val(m):
        v = cache.get(m)
        if v is not None:
            return v
        ex = ring.unpack(m)
        i = next(j for j, x in enumerate(ex) if x)
        v = val(m - ring.var_mono(i)).mul(X[i], prec)
        cache[m] = v
        return v

    return val, cache


def eval_poly(poly, val, ctx):
    acc = ctx.zero()
    for m, c in poly.terms.items():
        acc = acc + val(m).scale(c)
    return acc


class BlowupChart:
    """Chart on the blowup of X at a geometric point, with lifted series."""

    def __init__(self, surface, point, precision):
        self.surface = surface
        self.point = point
        rep = list(point.representative) if hasattr(point, "representative") else list(point)
        field = QQ
        for c in rep:
            if isinstance(c, FieldElement) and c.field.degree > 1:
                field = c.field
        self.field = field
        self.rep = [field(c) for c in rep]
        self.d = surface.d
        self.c = len(surface.forms)
        if not surface.contains_point(self.rep):
            raise SingularCentre("point is not on the surface")
        self._adapted_frame()
        self.precision = 0
        self.Y = None
        self.lift(precision)

    def _adapted_frame(self):
        K, p, d, c = self.field, self.rep, self.d, self.c
        jac = self.surface.jacobian()
        self._jac = jac
        J = [[g.evaluate(p) for g in row] for row in jac]
        J = [[K(x) for x in row] for row in J]
        if linalg.nf_rank(J) < c:
            raise SingularCentre("the surface is singular at the centre")
        ker = linalg.nf_kernel(J, d + 1, K)
        tangent = []
        for v in ker:
            if linalg.nf_rank([p] + tangent + [v]) == len(tangent) + 2:
                tangent.append(v)
            if len(tangent) == 2:
                break
        frame = [p] + tangent
        normal = []
        for k in range(d + 1):
            ek = [K(int(i == k)) for i in range(d + 1)]
            if linalg.nf_rank(frame + normal + [ek]) == len(frame) + len(normal) + 1:
                normal.append(ek)
            if len(normal) == c:
                break
        # v_1..v_c normal directions, v_{d-1}, v_d tangent
        self.vectors = normal + tangent
        self.matrix = [p] + self.vectors  # columns of the chart map

    def chart_map(self):
        """Ambient coordinates as affine-linear functions of y_1..y_d (list of rows)."""
        return [[col[k] for col in self.matrix] for k in range(self.d + 1)]

    def ambient_series(self, Y, ctx):
        d, c = self.d, self.c
        U = ctx.monomial(1, 0)
        W = ctx.monomial(1, 1)
        X = []
        for k in range(d + 1):
            s = ctx.const(self.rep[k])
            for i in range(c):
                vik = self.vectors[i][k]
                if vik != 0:
                    s = s + Y[i].scale(vik)
            a = self.vectors[c][k]
            b = self.vectors[c + 1][k]
            if a != 0:
                s = s + W.scale(a)
            if b != 0:
                s = s + U.scale(b)
            X.append(s)
        return X

    def lift(self, precision):
        """Solve the chart equations for y_1..y_c modulo u^precision by Newton."""
        N = max(precision, 1)
        if self.Y is not None and precision <= self.precision:
            return
        ctx = SeriesContext(self.field, N)
        self.ctx = ctx
        ring = self.surface.ring
        Y = [ctx.zero() for _ in range(self.c)]
        prec = min(2, N)
        while True:
            Y = [y.truncate(prec) for y in Y]
            X = self.ambient_series(Y, ctx)
            val, _ = eval_monomials(ring, X, prec)
            F = [eval_poly(f, val, ctx) for f in self.surface.forms]
            if prec >= N and all(f.order(N) >= N for f in F):
                break
            # Jacobian with respect to y_1..y_c
            dF = [[eval_poly(g, val, ctx) for g in row] for row in self._jac]
            Jy = []
            for j in range(self.c):
                row = []
                for i in range(self.c):
                    s = ctx.zero()
                    for k, g in enumerate(dF[j]):
                        vik = self.vectors[i][k]
                        if vik != 0:
                            s = s + g.scale(vik)
                    row.append(s)
                Jy.append(row)
            step = _solve_small(Jy, F, prec)
            Y = [y - s for y, s in zip(Y, step)]
            if prec >= N:
                continue
            prec = min(2 * prec, N)
        self.Y = Y
        self.precision = N if precision > 0 else 0
        self._X = self.ambient_series(Y, ctx)
        self._cache = None

    @property
    def series(self):
        """phi_i = y_i / u as Series (u-precision one less than the chart)."""
        B = self.ctx.B
        return [Series(self.ctx, [a.right_shift(B) for a in y.comps]) for y in self.Y]

    def residuals(self):
        """Chart equations evaluated on the lifted series."""
        val, _ = eval_monomials(self.surface.ring, self._X, self.precision)
        return [eval_poly(f, val, self.ctx) for f in self.surface.forms]

    def pullback(self, poly):
        if self._cache is None:
            self._cache = {0: self.ctx.const(1)}
        val, _ = eval_monomials(self.surface.ring, self._X, self.precision, self._cache)
        return eval_poly(poly, val, self.ctx)


def _solve_small(J, F, prec):
    """Solve J * s = F for series (c = 1 or 2) modulo u^prec."""
    if len(J) == 1:
        return [F[0].mul(J[0][0].inverse(prec), prec)]
    a, b = J[0]
    c, d = J[1]
    det = a.mul(d, prec) - b.mul(c, prec)
    inv = det.inverse(prec)
    s0 = (d.mul(F[0], prec) - b.mul(F[1], prec)).mul(inv, prec)
    s1 = (a.mul(F[1], prec) - c.mul(F[0], prec)).mul(inv, prec)
    return [s0, s1]


def blowup_chart(X, P, precision):
    return BlowupChart(X, P, precision)


def ord_along_exceptional(chart, form, cap):
    """Order of vanishing of a form along E, capped: returns cap when >= cap."""
    if cap <= 0:
        return 0
    if chart.precision < cap:
        chart.lift(cap)
    s = chart.pullback(form)
    return s.order(cap)
