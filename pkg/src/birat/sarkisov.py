"""Factorization of birational selfmaps of cubic surfaces into Geiser and Bertini involutions."""

from flint import fmpq

from . import linalg
from .errors import (ComputationError, InterpolationFailedAtAllCandidates,
                     NoMaximalCentre, NonTerminating, ValidationError)
from .involutions import bertini_involution, geiser_involution
from .linsys import multiplicity, verify_multiplicity
from .maps import (BirationalMap, compose, interpolate_map, map_base_scheme,
                   maps_equal_on_surface)
from .schemes import decompose_zero_dim

DEFAULT_SEED = 20080101


class Link:
    def __init__(self, kind, centre, involution, degree_before, degree_after):
        self.kind = kind
        self.centre = centre
        self.involution = involution
        self.degree_before = degree_before
        self.degree_after = degree_after

    @property
    def multiplicity(self):
        n, n2 = self.degree_before, self.degree_after
        return 2 * n - n2 if self.kind == "geiser" else (5 * n - n2) // 4

    def __repr__(self):
        return f"Link({self.kind} at {self.centre}, {self.degree_before} -> {self.degree_after})"


class FactorizationResult:
    def __init__(self, links, terminal_automorphism, original_map):
        self.links = links
        self.terminal_automorphism = terminal_automorphism
        self.original_map = original_map

    def reconstruction(self):
        """The chain epsilon_1, ..., epsilon_r, then the terminal automorphism."""
        X = self.original_map.surface
        maps = [l.involution.map for l in self.links]
        maps.append(BirationalMap.linear(X, self.terminal_automorphism))
        return compose(*maps)

    def __repr__(self):
        return f"FactorizationResult({len(self.links)} links)"


def reduced_equations(X, fmap, seed=DEFAULT_SEED, max_degree=None):
    """Single-stage map with interpolated equations of least degree."""
    if fmap.declared_degree is not None and len(fmap.stages) == 1:
        return fmap
    top = max_degree or _product(fmap.stage_degrees)
    for n in range(1, top + 1):
        ok, forms = interpolate_map(X, fmap, n, seed=seed)
        if ok:
            return BirationalMap(X, [forms], declared_degree=n)
    raise InterpolationFailedAtAllCandidates(f"no equations of degree <= {top}")


def _product(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def base_points(X, fmap):
    """Closed points in the base scheme of a single-stage map."""
    return decompose_zero_dim(map_base_scheme(fmap))


def is_maximal_centre(X, P, fmap):
    n = fmap.declared_degree
    return verify_multiplicity(fmap.forms, P, n + 1, X)


def find_maximal_centre(X, fmap):
    """First base point of degree 2, then 1, whose multiplicity exceeds the degree."""
    n = fmap.declared_degree
    if n is None:
        raise ValueError("map needs declared reduced equations")
    if n <= 1:
        return None
    candidates = _candidates(X, fmap)
    for P in candidates:
        if is_maximal_centre(X, P, fmap):
            return P
    raise NoMaximalCentre(f"no maximal centre among {len(candidates)} base points")


def _candidates(X, fmap):
    pts = base_points(X, fmap)
    return [P for P in pts if P.degree == 2] + [P for P in pts if P.degree == 1]


def candidate_degrees(kind, n):
    """Possible new degrees after untwisting, in increasing order."""
    if kind == "geiser":
        return [2 * n - m for m in range(2 * n - 1, n, -1)]
    out = []
    m = n + 1
    while 5 * n - 4 * m >= 1:
        out.append(5 * n - 4 * m)
        m += 1
    return sorted(out)


def involution_at(X, P, seed=DEFAULT_SEED):
    if P.degree == 1:
        return geiser_involution(X, P, seed=seed)
    if P.degree == 2:
        return bertini_involution(X, P, seed=seed)
    raise ValidationError(f"centre of degree {P.degree} gives no involution on a cubic", "centre")


def untwist_once(X, fmap, centre, seed=DEFAULT_SEED, involution=None):
    """Precompose with the involution at the centre and interpolate the result."""
    n = fmap.declared_degree
    eps = involution or involution_at(X, centre, seed=seed)
    composite = compose(eps.map, fmap)
    for n2 in candidate_degrees(eps.kind, n):
        ok, forms = interpolate_map(X, composite, n2, seed=seed)
        if ok:
            new = BirationalMap(X, [forms], declared_degree=n2)
            return new, Link(eps.kind, centre, eps, n, n2)
    raise InterpolationFailedAtAllCandidates(f"untwisting at {centre} failed for all candidate degrees")


def linear_matrix(forms):
    """Matrix M with forms_j = sum_i x_i M[i][j]."""
    ring = forms[0].ring
    n = ring.n
    M = [[fmpq(0)] * n for _ in range(n)]
    for j, f in enumerate(forms):
        for i in range(n):
            M[i][j] = f.terms.get(ring.var_mono(i), fmpq(0))
    flat = linalg.primitive_vector([c for row in M for c in row])
    return [[flat[i * n + j] for j in range(n)] for i in range(n)]


def factorize(X, fmap, seed=DEFAULT_SEED, check_maximal_centre=False, verify=True):
    """Write fmap as epsilon_1, ..., epsilon_r followed by a linear automorphism."""
    if X.d != 3:
        raise ValidationError("factorization is implemented for cubic surfaces", "surface")
    current = reduced_equations(X, fmap, seed=seed)
    links = []
    while current.declared_degree > 1:
        n = current.declared_degree
        if len(links) > 4 * fmap_degree_bound(fmap):
            raise NonTerminating("too many links")
        if check_maximal_centre:
            tries = [find_maximal_centre(X, current)]
        else:
            tries = _candidates(X, current)
        done = False
        for P in tries:
            try:
                new, link = untwist_once(X, current, P, seed=seed)
            except (InterpolationFailedAtAllCandidates, ComputationError):
                continue
            if new.declared_degree >= n:
                continue
            links.append(link)
            current = new
            done = True
            break
        if not done:
            raise NoMaximalCentre(f"no base point untwists the degree-{n} map")
    theta = linear_matrix(current.forms)
    result = FactorizationResult(links, theta, fmap)
    if verify and not maps_equal_on_surface(X, fmap, result.reconstruction(), seed=seed + 11):
        raise ComputationError("factorization does not reproduce the map")
    return result


def fmap_degree_bound(fmap):
    return max(1, _product(fmap.stage_degrees) if fmap.declared_degree is None else fmap.declared_degree)


def degree_drop_multiplicity(X, fmap, P, cap=None):
    """Multiplicity of the map's reduced system at P (capped)."""
    cap = cap or 5 * fmap.declared_degree
    return multiplicity(fmap.forms, P, X, cap)
