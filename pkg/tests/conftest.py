import pytest

from birat.involutions import bertini_involution, geiser_involution
from birat.maps import compose, map_expand
from birat.sarkisov import factorize
from birat.schemes import ClosedPoint, Surface, ZeroDimScheme, decompose_zero_dim, residual_intersection

CUBIC = ["x^3 + 2*y^3 + 3*z^3 + 4*t^3"]
DP4 = ["x*y - z*t + 2*x^2 + s^2", "-x^2 + y^2 - z^2 + t^2 - s^2"]


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running end-to-end checks")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])


@pytest.fixture(scope="session")
def cubic():
    return Surface.from_strings(["x", "y", "z", "t"], CUBIC)


@pytest.fixture(scope="session")
def dp4():
    return Surface.from_strings(["x", "y", "z", "t", "s"], DP4)


@pytest.fixture(scope="session")
def p1(cubic):
    return ClosedPoint.rational(cubic.ring, [1, -1, -1, 1])


@pytest.fixture(scope="session")
def p2(cubic):
    return ClosedPoint.rational(cubic.ring, [3, 1, 1, -2])


@pytest.fixture(scope="session")
def line_points(cubic):
    R = cubic.ring
    Z = ZeroDimScheme(list(cubic.forms) + [R.parse("y + z + t"), R.parse("x - z + t")])
    return decompose_zero_dim(Z)


@pytest.fixture(scope="session")
def q2(line_points):
    return next(P for P in line_points if P.degree == 2)


@pytest.fixture(scope="session")
def dp4_geiser_centre(dp4):
    R = dp4.ring
    (P,) = decompose_zero_dim(ZeroDimScheme(list(dp4.forms) + [R.parse("x"), R.parse("z"), R.parse("s")]))
    return P


@pytest.fixture(scope="session")
def dp4_bertini_centre(dp4):
    R = dp4.ring
    L = [R.parse("x + y - z"), R.parse("s")]
    rest = residual_intersection(dp4, L, ClosedPoint.rational(R, [0, 1, 1, 0, 0]))
    (Q,) = decompose_zero_dim(rest)
    return Q


@pytest.fixture(scope="session")
def G(cubic, p1):
    return geiser_involution(cubic, p1)


@pytest.fixture(scope="session")
def G2(cubic, p2):
    return geiser_involution(cubic, p2)


@pytest.fixture(scope="session")
def B(cubic, q2):
    return bertini_involution(cubic, q2)


@pytest.fixture(scope="session")
def dp4_G(dp4, dp4_geiser_centre):
    return geiser_involution(dp4, dp4_geiser_centre)


@pytest.fixture(scope="session")
def dp4_B(dp4, dp4_bertini_centre):
    return bertini_involution(dp4, dp4_bertini_centre)


@pytest.fixture(scope="session")
def h(B, G):
    return compose(B.map, G.map)


@pytest.fixture(scope="session")
def h_reduced(h):
    """h expanded; the product degree 10 is already its reduced degree."""
    hx = map_expand(h)
    hx.declared_degree = 10
    return hx


# h1 as printed, scaled to integers
H1 = [
    "2*x*y + 2*y^2 + 3*x*z + 3*z^2 + 4*x*t - 4*t^2",
    "x^2 + x*y + 3*y*z - 3*z^2 + 4*y*t + 4*t^2",
    "x^2 - 2*y^2 + x*z + 2*y*z + 4*z*t + 4*t^2",
    "-x^2 + 2*y^2 + 3*z^2 + x*t + 2*y*t + 3*z*t",
]

# the printed dP4 Geiser forms
DP4_GEISER = [
    "4/3*x*z^2 + 2/3*x*z*t - 1/3*y*z*t - 1/3*x*t^2 - 1/3*x*s^2 + 1/3*y*s^2",
    "-2/3*x*z^2 - y*z^2 - 7/3*x*z*t + 2/3*y*z*t + 2/3*x*t^2 - 1/3*x*s^2 - 2/3*y*s^2",
    "y^2*z + z*t^2 - z*s^2",
    "4*y^2*z - 4*z^3 - y^2*t + 4*z*t^2 - t^3 - 2*z*s^2 + t*s^2",
    "y^2*s + t^2*s - s^3",
]


@pytest.fixture(scope="session")
def h_factorization(cubic, h):
    return factorize(cubic, h)
