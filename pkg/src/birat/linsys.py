"""Linear systems of forms on a surface and multiplicity conditions at points."""

from flint import fmpq, fmpq_mat, nmod_mat

from . import linalg
from .blowup import blowup_chart
from .groebner import BadPrime, groebner, poly_to_dict
from .poly import Poly, permute_variables


class LinearSystem:
    """A subspace of degree-n forms, taken modulo the ideal of the surface."""

    def __init__(self, surface, degree, basis):
        self.surface = surface
        self.degree = degree
        self.basis = list(basis)

    def __len__(self):
        return len(self.basis)

    @property
    def dim(self):
        return len(self.basis)

    def span_vectors(self):
        """Coordinates of the basis in the standard monomial basis of degree n."""
        X = self.surface
        monos = X.standard_monomials(self.degree)
        idx = {m: i for i, m in enumerate(monos)}
        rows = []
        for f in self.basis:
            nf = X.gb.normal_form_dict(dict(f.terms))
            v = [fmpq(0)] * len(monos)
            for m, c in nf.items():
                v[idx[m]] = c
            rows.append(v)
        return rows, monos

    def same_space(self, other):
        a, _ = self.span_vectors()
        b, _ = other.span_vectors()
        if len(a) != len(b):
            return False
        if not a:
            return True
        # equal spans iff stacking adds no rank (bases are independent)
        n = len(a[0])
        return linalg.rank(a + b, n) == linalg.rank(a, n) == len(a)

    def combination(self, vec):
        acc = Poly(self.basis[0].ring, {})
        for c, f in zip(vec, self.basis):
            if c != 0:
                acc = acc + f.scale(c)
        return acc

    def __repr__(self):
        return f"LinearSystem(degree {self.degree}, dimension {self.dim})"


def complete_linear_system(X, n):
    """All degree-n forms modulo the surface ideal: standard monomials of degree n."""
    if n < 1:
        raise ValueError("degree must be positive")
    ring = X.ring
    basis = [Poly(ring, {m: fmpq(1)}) for m in X.standard_monomials(n)]
    return LinearSystem(X, n, basis)


def _subsystem(H, kernel_vectors):
    basis = []
    for v in kernel_vectors:
        v = linalg.primitive_vector(v)
        basis.append(H.combination(v))
    return LinearSystem(H.surface, H.degree, basis)


def multiplicity_conditions(H, P, m):
    """Rational condition rows on the coefficients of the generic section of H."""
    chart = blowup_chart(H.surface, P, m)
    cols = [chart.pullback(f).coefficient_vector(m) for f in H.basis]
    nrows = len(cols[0]) if cols else 0
    rows = [[col[i] for col in cols] for i in range(nrows)]
    return [r for r in rows if any(c != 0 for c in r)]


def impose_multiplicity(H, P, m):
    """The subsystem H(-mP) of forms vanishing to order at least m at P."""
    if m <= 0 or not H.basis:
        return H
    rows = multiplicity_conditions(H, P, m)
    if not rows:
        return H
    ker = linalg.kernel(rows, len(H.basis))
    return _subsystem(H, ker)


def verify_multiplicity(forms, P, m, surface):
    """True iff every form has order at least m along the exceptional curve over P."""
    if m <= 0:
        return True
    chart = blowup_chart(surface, P, m)
    return all(chart.pullback(f).order(m) >= m for f in forms)


def multiplicity(forms, P, surface, cap):
    """Least order of the forms along E (cap when all orders are >= cap)."""
    chart = blowup_chart(surface, P, cap)
    return min(chart.pullback(f).order(cap) for f in forms)


# independent route: saturation of I(X) + I(P)^m

def _power_ideal(gens, m):
    """Generators of (gens)^m, deduplicated degree by degree."""
    if m == 0:
        return [Poly(gens[0].ring, {0: fmpq(1)})]
    current = list(gens)
    for _ in range(m - 1):
        prods = [a * b for a in current for b in gens]
        current = _independent(prods)
    return current


def _independent(polys):
    by_deg = {}
    for f in polys:
        if f:
            by_deg.setdefault(f.degree(), []).append(f)
    out = []
    for deg, fs in sorted(by_deg.items()):
        monos = sorted({m for f in fs for m in f.terms})
        rows = [[f.terms.get(mm, fmpq(0)) for mm in monos] for f in fs]
        for r in linalg.rref_rows(rows, len(monos)):
            out.append(Poly(fs[0].ring, {mm: c for mm, c in zip(monos, r) if c != 0}).primitive())
    return out


def impose_multiplicity_oracle(H, P, m, p=None):
    """H(-mP) from the degree-n part of the saturation of I(X) + I(P)^m.

    With p given the computation runs modulo p and returns the reduced
    echelon basis of the kernel mod p (a list of int vectors) instead of a
    LinearSystem.
    """
    if m <= 0:
        return H
    X = H.surface
    ring = X.ring
    gens = list(X.forms) + _power_ideal(P.prime_ideal, m)
    # a coordinate not vanishing at P, moved last: saturating by it is exact
    rep = P.representative
    j = max(i for i, c in enumerate(rep) if c != 0)
    perm = list(range(ring.n))
    perm[j], perm[-1] = perm[-1], perm[j]
    gy = permute_variables(gens, perm)
    gb = groebner(gy if p is None else [g.primitive() for g in gy], p=p, saturate=True)
    forms = permute_variables(H.basis, perm)
    nfs = [gb.normal_form_dict(poly_to_dict(f, p)) for f in forms]
    monos = sorted({mm for nf in nfs for mm in nf})
    rows = [[nf.get(mm, 0) for nf in nfs] for mm in monos]
    if p is None:
        if not rows:
            return H
        return _subsystem(H, linalg.kernel([[fmpq(c) for c in r] for r in rows], len(H.basis)))
    return kernel_mod_p(rows, len(H.basis), p)


def kernel_mod_p(rows, ncols, p):
    """Reduced echelon basis of the right kernel modulo p."""
    if not rows:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    M = nmod_mat(len(rows), ncols, [c % p for r in rows for c in r], p)
    R, rank = M.rref()
    pivots = []
    for i in range(rank):
        j = next(j for j in range(ncols) if int(R[i, j]) != 0)
        pivots.append(j)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-int(R[i, f])) % p
        basis.append(v)
    # rref of the kernel itself, to compare canonically
    if not basis:
        return []
    K = nmod_mat(len(basis), ncols, [c for v in basis for c in v], p)
    R2, r2 = K.rref()
    return [[int(R2[i, j]) for j in range(ncols)] for i in range(r2)]


def subspace_mod_p(vectors, ncols, p):
    """Reduced echelon form mod p of rational vectors (None if a denominator vanishes)."""
    red = linalg.nmod_rows(vectors, ncols, p)
    if red is None:
        return None
    if not red:
        return []
    K = nmod_mat(len(red), ncols, [c for v in red for c in v], p)
    R, r = K.rref()
    return [[int(R[i, j]) for j in range(ncols)] for i in range(r)]
