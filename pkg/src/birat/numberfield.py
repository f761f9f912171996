"""Simple number fields Q(a) = Q[t]/(m(t)) and their elements."""

from fractions import Fraction

from flint import fmpq, fmpq_mat, fmpq_poly, fmpz

from .errors import FieldMismatch, ReduciblePolynomial


def to_fmpq(x):
    if isinstance(x, fmpq):
        return x
    if isinstance(x, (int, fmpz)):
        return fmpq(x)
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    if isinstance(x, FieldElement):
        if x.field.degree != 1 and x.poly.degree() > 0:
            raise FieldMismatch("element is not rational")
        return x.poly[0]
    if isinstance(x, str):
        f = Fraction(x)
        return fmpq(f.numerator, f.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def as_upoly(f):
    """Accept an fmpq_poly or a coefficient list (constant term first)."""
    if isinstance(f, fmpq_poly):
        return f
    return fmpq_poly([to_fmpq(c) for c in f])


class NumberField:
    """The field Q[t]/(minpoly).  Degree one means Q itself."""

    def __init__(self, minpoly, name="a", check=True):
        m = as_upoly(minpoly)
        if m.degree() < 1:
            raise ValueError("minimal polynomial must be nonconstant")
        m = m / m[m.degree()]
        if check and m.degree() > 1:
            _, factors = m.factor()
            if len(factors) != 1 or factors[0][1] != 1:
                raise ReduciblePolynomial(str(m))
        self.minpoly = m
        self.degree = m.degree()
        self.name = name
        e = self.degree
        # power sums of the roots give Tr(a^k)
        c = [m[i] for i in range(e + 1)]
        p = [fmpq(e)]
        for k in range(1, e):
            s = fmpq(k) * c[e - k]
            for i in range(1, k):
                s += c[e - i] * p[k - i]
            p.append(-s)
        self._traces = p
        self._key = tuple(c) if e > 1 else (1,)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.degree == 1:
            return "QQ"
        return f"NumberField({self.minpoly.str(var='t')})"

    @property
    def is_rational(self):
        return self.degree == 1

    def __call__(self, x=0):
        if isinstance(x, FieldElement):
            if x.field == self:
                return x
            if x.field.degree == 1:
                return FieldElement(self, fmpq_poly([x.poly[0]]))
            raise FieldMismatch(f"{x.field} vs {self}")
        if isinstance(x, fmpq_poly):
            return FieldElement(self, x % self.minpoly)
        if isinstance(x, (list, tuple)):
            return FieldElement(self, fmpq_poly([to_fmpq(c) for c in x]) % self.minpoly)
        return FieldElement(self, fmpq_poly([to_fmpq(x)]))

    @property
    def gen(self):
        return self(fmpq_poly([0, 1]))

    @property
    def one(self):
        return self(1)

    @property
    def zero(self):
        return self(0)

    def trace_of_poly(self, poly):
        s = fmpq(0)
        for i in range(min(poly.degree() + 1, self.degree)):
            s += poly[i] * self._traces[i]
        return s


QQ = NumberField(fmpq_poly([0, 1]), name="QQ", check=False)


def nf_make(minpoly, name="a"):
    """Build Q[t]/(minpoly); raises ReduciblePolynomial if it factors."""
    return NumberField(minpoly, name=name)


def common_field(a, b):
    if a == b or b.degree == 1:
        return a
    if a.degree == 1:
        return b
    raise FieldMismatch(f"{a} vs {b}")


class FieldElement:
    __slots__ = ("field", "poly")

    def __init__(self, field, poly):
        self.field = field
        self.poly = poly

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field == self.field:
                return self.field, self.poly, other.poly
            f = common_field(self.field, other.field)
            return f, self.poly, other.poly
        if isinstance(other, (int, fmpq, fmpz, Fraction)):
            return self.field, self.poly, fmpq_poly([to_fmpq(other)])
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return FieldElement(c[0], c[1] + c[2])

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return FieldElement(c[0], c[1] - c[2])

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return FieldElement(c[0], c[2] - c[1])

    def __neg__(self):
        return FieldElement(self.field, -self.poly)

    def __mul__(self, other):
        if isinstance(other, (int, fmpq, fmpz)):
            return FieldElement(self.field, self.poly * other)
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        f = c[0]
        p = c[1] * c[2]
        if p.degree() >= f.degree:
            p = p % f.minpoly
        return FieldElement(f, p)

    __rmul__ = __mul__

    def inverse(self):
        if self.poly.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        if self.field.degree == 1 or self.poly.degree() == 0:
            return FieldElement(self.field, fmpq_poly([1 / self.poly[0]]))
        g, s, _ = self.poly.xgcd(self.field.minpoly)
        return FieldElement(self.field, (s / g[0]) % self.field.minpoly)

    def __truediv__(self, other):
        if isinstance(other, (int, fmpq, fmpz)):
            return FieldElement(self.field, self.poly / fmpq(other))
        if isinstance(other, FieldElement):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        r = self.field.one
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field and other.field.degree > 1 and self.field.degree > 1:
                return False
            return self.poly == other.poly
        if isinstance(other, (int, fmpq, fmpz, Fraction)):
            return self.poly == fmpq_poly([to_fmpq(other)])
        return NotImplemented

    def __hash__(self):
        return hash((self.field, tuple(self.coords)))

    def is_zero(self):
        return self.poly.is_zero()

    def __bool__(self):
        return not self.poly.is_zero()

    def is_rational(self):
        return self.poly.degree() <= 0

    @property
    def coords(self):
        e = self.field.degree
        return [self.poly[i] for i in range(e)]

    def trace(self):
        return self.field.trace_of_poly(self.poly)

    def mult_matrix(self):
        e = self.field.degree
        rows = []
        b = self.poly
        for _ in range(e):
            rows.append([b[i] for i in range(e)])
            b = (b * fmpq_poly([0, 1])) % self.field.minpoly
        # column j holds the coordinates of x * a^j
        return fmpq_mat(rows).transpose()

    def norm(self):
        return self.mult_matrix().det()

    def minpoly(self):
        """Monic minimal polynomial over Q."""
        ch = fmpq_poly(self.mult_matrix().charpoly().coeffs())
        _, fac = ch.factor()
        f = fac[0][0]
        return f / f[f.degree()]

    def __repr__(self):
        if self.field.degree == 1 or self.poly.degree() <= 0:
            return str(self.poly[0])
        return "(" + self.poly.str(var=self.field.name) + ")"


def trace_down(x):
    """Tr_{k1/Q}(x) for a field element, or e*c for rationals."""
    if isinstance(x, FieldElement):
        return x.trace()
    return to_fmpq(x)
