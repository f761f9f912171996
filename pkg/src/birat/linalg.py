"""Exact linear algebra over Q and number fields, plus modular helpers."""

import random
from math import gcd, isqrt

from flint import fmpq, fmpq_mat, fmpz, fmpz_mat, nmod_mat

from .numberfield import FieldElement, to_fmpq

# primes just below 2^26: products of two residues fit in int64 comfortably
PRIMES = [
    67108859, 67108837, 67108819, 67108777, 67108763, 67108757, 67108753,
    67108747, 67108739, 67108729, 67108721, 67108709, 67108693, 67108669,
    67108667, 67108661, 67108649, 67108633, 67108597, 67108579, 67108529,
    67108511, 67108507, 67108493, 67108453, 67108447, 67108439, 67108433,
    67108387, 67108373, 67108367, 67108331, 67108303, 67108289, 67108279,
    67108259, 67108243, 67108231, 67108201, 67108199, 67108187, 67108183,
    67108177, 67108147, 67108141, 67108133, 67108121, 67108109, 67108081,
    67108049,
]


def _row_to_ints(row):
    """Clear denominators of one rational row."""
    d = fmpz(1)
    for c in row:
        if c != 0:
            q = c.q
            d = d * q // d.gcd(q)
    return [(c * d).p for c in row]


def to_fmpz_mat(rows, ncols):
    ints = []
    for r in rows:
        r = [to_fmpq(c) for c in r]
        if any(c != 0 for c in r):
            ints.append(_row_to_ints(r))
    if not ints:
        return None
    return fmpz_mat(ints)


def rref_rows(vectors, ncols=None):
    """Nonzero rows of the reduced echelon form of the given vectors.

    Fraction-free over Z after clearing row denominators; much faster than
    rational elimination when entries are large.
    """
    vectors = [list(v) for v in vectors]
    if not vectors:
        return []
    ncols = ncols or len(vectors[0])
    a = to_fmpz_mat(vectors, ncols)
    if a is None:
        return []
    r, den, rank = a.rref()
    out = []
    for i in range(rank):
        out.append([fmpq(r[i, j], den) for j in range(ncols)])
    return out


def primitive_vector(v):
    """Integer multiple with content 1 and first nonzero entry positive."""
    v = [to_fmpq(c) for c in v]
    ints = _row_to_ints(v)
    g = fmpz(0)
    for c in ints:
        g = g.gcd(c)
    if g == 0:
        return [fmpq(0)] * len(v)
    first = next(c for c in ints if c != 0)
    if first < 0:
        g = -g
    return [fmpq(c // g) for c in ints]


def kernel(rows, ncols):
    """Basis of {v : A v = 0} over Q, one vector per free column of rref(A).

    The vector for free column f has a 1 at f and zeros at the other free
    columns, so the basis depends only on the row space of A.
    """
    if ncols == 0:
        return []
    a = to_fmpz_mat(rows, ncols)
    if a is None:
        return [[fmpq(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    r, den, rk = a.rref()
    pivots = []
    for i in range(rk):
        j = pivots[-1] + 1 if pivots else 0
        while r[i, j] == 0:
            j += 1
        pivots.append(j)
    pivset = set(pivots)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [fmpq(0)] * ncols
        v[f] = fmpq(1)
        for i, pc in enumerate(pivots):
            if r[i, f] != 0:
                v[pc] = fmpq(-r[i, f], den)
        out.append(v)
    return out


def rank(rows, ncols):
    a = to_fmpz_mat(rows, ncols)
    return 0 if a is None else a.rank()


def mat_vec(rows, v):
    return [sum((a * b for a, b in zip(r, v)), fmpq(0)) for r in rows]


# modular helpers

def nmod_rows(rows, ncols, p):
    """Reduce rational rows mod p; returns None if a denominator vanishes."""
    out = []
    for r in rows:
        rr = []
        for c in r:
            c = to_fmpq(c)
            q = int(c.q) % p
            if q == 0:
                return None
            rr.append(int(c.p) * pow(q, -1, p) % p)
        out.append(rr)
    return out


def rank_mod_p(rows, ncols, p):
    if not rows:
        return 0
    red = nmod_rows(rows, ncols, p)
    if red is None:
        return None
    return nmod_mat(red, p).rank()


def crt_pair(r1, m1, r2, m2):
    """Combine x = r1 mod m1 and x = r2 mod m2 (coprime moduli)."""
    inv = pow(m1 % m2, -1, m2)
    t = ((r2 - r1) * inv) % m2
    return r1 + m1 * t, m1 * m2


def rational_reconstruction(a, m):
    """Find n/d = a mod m with |n|, d <= sqrt(m/2), or None."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    if gcd(r1, s1) != 1:
        return None
    return fmpq(r1, s1)


def random_invertible_matrix(n, rng, bound=3, unimodular_ish=False):
    while True:
        rows = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
        if fmpz_mat(rows).det() != 0:
            return rows


# number field linear algebra (small matrices)

def nf_rref(rows):
    """Row-reduce a small matrix over a number field; returns (rref rows, pivots)."""
    a = [list(r) for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(a)):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c] if not isinstance(a[r][c], FieldElement) else a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def nf_kernel(rows, ncols, field):
    """Right kernel over a number field."""
    if not rows:
        return [[field(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = nf_rref(rows)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [field(0) for _ in range(ncols)]
        v[f] = field(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def nf_rank(rows):
    return len(nf_rref(rows)[1])


def rng_from_seed(seed):
    return random.Random(seed)
