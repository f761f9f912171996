import random

import pytest
from flint import fmpq

from birat.blowup import blowup_chart, ord_along_exceptional
from birat.corpus import forms_through, instance
from birat.errors import SingularCentre
from birat.linsys import LinearSystem, impose_multiplicity_oracle
from birat.poly import Poly
from birat.schemes import ClosedPoint, Surface


def _residual_orders(chart, cap):
    return [r.order(cap) for r in chart.residuals()]


def test_cubic_chart_residuals(cubic, p1):
    chart = blowup_chart(cubic, p1, 6)
    assert _residual_orders(chart, 6) == [6]
    assert len(chart.series) == 1
    assert all(y.constant() == 0 for y in chart.Y)


def test_dp4_chart_over_gaussian_field(dp4, dp4_geiser_centre):
    chart = blowup_chart(dp4, dp4_geiser_centre, 8)
    assert chart.field.degree == 2
    assert _residual_orders(chart, 8) == [8, 8]
    assert len(chart.series) == 2


def test_precision_zero_chart(cubic, p1):
    chart = blowup_chart(cubic, p1, 0)
    assert chart.precision == 0
    assert ord_along_exceptional(chart, cubic.ring.parse("x"), 0) == 0


def test_orders_at_rational_point(cubic, p1):
    R = cubic.ring
    chart = blowup_chart(cubic, p1, 6)
    assert ord_along_exceptional(chart, R.parse("x + y"), 6) == 1
    assert ord_along_exceptional(chart, R.parse("x + 2*y + 3*z + 4*t"), 6) == 2
    assert ord_along_exceptional(chart, R.parse("x"), 6) == 0
    assert ord_along_exceptional(chart, cubic.forms[0], 6) == 6


def test_singular_centre_rejected():
    X = Surface.from_strings(["x", "y", "z", "t"], ["x^3 + y^3 + z^3"], validate=False)
    with pytest.raises(SingularCentre):
        blowup_chart(X, ClosedPoint.rational(X.ring, [0, 0, 0, 1]), 3)


def test_centre_off_surface_rejected(cubic):
    with pytest.raises(SingularCentre):
        blowup_chart(cubic, ClosedPoint.rational(cubic.ring, [1, 0, 0, 0]), 3)


def _oracle_contains(X, P, f, m):
    H = LinearSystem(X, f.degree(), [f])
    return impose_multiplicity_oracle(H, P, m).dim == 1


def _random_form(X, P, rng):
    ring = X.ring
    through = forms_through(ring, [P], 1)
    k = rng.randint(0, 3)
    f = Poly(ring, {0: fmpq(1)})
    for _ in range(k):
        g = Poly(ring, {})
        for h in through:
            g = g + h.scale(rng.randint(-3, 3))
        f = f * (g if g else through[0])
    generic = Poly(ring, {ring.var_mono(i): fmpq(rng.randint(1, 5)) for i in range(ring.n)})
    if k == 0:
        f = f * generic
    return f


def test_order_agrees_with_saturation_oracle():
    rng = random.Random(2008)
    cases = 0
    for seed in range(50):
        d, e = rng.choice([(3, 1), (3, 2), (4, 1), (4, 2)])
        X, P = instance(d, e, 500 + seed)
        f = _random_form(X, P, rng)
        chart = blowup_chart(X, P, 5)
        k = ord_along_exceptional(chart, f, 5)
        assert k <= 4
        assert _oracle_contains(X, P, f, k)
        assert not _oracle_contains(X, P, f, k + 1)
        cases += 1
    assert cases == 50


def test_doubling_precision_keeps_orders():
    rng = random.Random(5)
    for seed in range(10):
        X, P = instance(3 + seed % 2, 1 + seed % 2, 900 + seed)
        f = _random_form(X, P, rng)
        low = ord_along_exceptional(blowup_chart(X, P, 4), f, 4)
        high = ord_along_exceptional(blowup_chart(X, P, 8), f, 8)
        if low < 4:
            assert high == low
        else:
            assert high >= 4
