"""
Involutions of a quartic del Pezzo surface
==========================================

The Geiser involution needs a centre of degree 2, the Bertini involution
one of degree 3.  Both centres come from linear sections of the surface.
"""

from birat.involutions import bertini_involution, geiser_involution
from birat.io import point_text
from birat.maps import is_surface_selfmap
from birat.schemes import ClosedPoint, Surface, ZeroDimScheme, decompose_zero_dim, residual_intersection

X = Surface.from_strings(["x", "y", "z", "t", "s"],
                         ["x*y - z*t + 2*x^2 + s^2", "-x^2 + y^2 - z^2 + t^2 - s^2"])
R = X.ring

(P,) = decompose_zero_dim(ZeroDimScheme(list(X.forms) + [R.parse(v) for v in "xzs"]))
print("Geiser centre:", point_text(P))
G = geiser_involution(X, P)
print("degree", G.map.declared_degree, "selfmap", is_surface_selfmap(X, G.map))
for f in G.forms:
    print("  ", f)

# a plane section through a rational point leaves a point of degree 3
plane = [R.parse("x + y - z"), R.parse("s")]
rest = residual_intersection(X, plane, ClosedPoint.rational(R, [0, 1, 1, 0, 0]))
(Q,) = decompose_zero_dim(rest)
print("Bertini centre:", point_text(Q))

# takes a little while: the system lives in degree 7
B = bertini_involution(X, Q)
print("degree", B.map.declared_degree, "selfmap", is_surface_selfmap(X, B.map))
