"""
Untwisting a selfmap of a cubic surface
=======================================

Build two involutions of the diagonal cubic, compose them, and let the
factorization recover both links from the composite alone.
"""

from birat.involutions import bertini_involution, geiser_involution
from birat.maps import compose, map_base_scheme
from birat.sarkisov import factorize
from birat.schemes import ClosedPoint, Surface, ZeroDimScheme, decompose_zero_dim

X = Surface.from_strings(["x", "y", "z", "t"], ["x^3 + 2*y^3 + 3*z^3 + 4*t^3"])
R = X.ring

# a rational point, and a point of degree 2 cut out by a line
P = ClosedPoint.rational(R, [1, -1, -1, 1])
line = ZeroDimScheme(list(X.forms) + [R.parse("y + z + t"), R.parse("x - z + t")])
Q = next(pt for pt in decompose_zero_dim(line) if pt.degree == 2)
print("Q is defined over", Q.field)

G = geiser_involution(X, P)
B = bertini_involution(X, Q)
print("Geiser:", G)
print("Bertini:", B)

# B acts first
h = compose(B.map, G.map)
Z = map_base_scheme(h)
print("base scheme of h has degree", Z.degree())

result = factorize(X, h)
for link in result.links:
    print(link, "multiplicity", link.multiplicity)
print("terminal automorphism:", result.terminal_automorphism)
