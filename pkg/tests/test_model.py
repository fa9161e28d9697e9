import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floquet_kdvbf.model import (
    Params,
    StateVec,
    char_poly_eval,
    char_roots,
    companion,
    jacobian,
    vector_field,
)

# real root of lam^3 - lam^2 - 1 by 200 bisection steps on [1, 2]; the pair by deflation
CUBIC_C0_R1 = (1.465571231876768, -0.23278561593838398 + 0.7925519925154477j)


def test_params_derived():
    p = Params(2.0, 0.5)
    assert p.c0 == -2.0
    assert p.omega0**2 == pytest.approx(2.0, rel=1e-15)
    assert p.L0 * p.omega0 == pytest.approx(2 * math.pi, rel=1e-15)


@pytest.mark.parametrize("r, alpha", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, -2.0), (math.nan, 1.0)])
def test_params_rejects_nonpositive(r, alpha):
    with pytest.raises(ValueError):
        Params(r, alpha)


@pytest.mark.parametrize("r", [0.25, 1.0, 3.0])
def test_char_poly_at_critical_speed(r):
    p = Params(r, 1.0)
    assert char_poly_eval(1.0, -r, p) == 0
    assert abs(char_poly_eval(1j * math.sqrt(r), -r, p)) < 1e-14 * (1 + r**1.5)


def test_char_poly_constant_term():
    assert char_poly_eval(0.0, 5.0, Params(2.0, 1.0)) == -2.0


@pytest.mark.parametrize("r", [1.0, 4.0])
def test_char_roots_at_critical_speed(r):
    roots = char_roots(-r, Params(r, 1.0))
    w = math.sqrt(r)
    np.testing.assert_allclose(np.array(roots.roots), [1.0, w * 1j, -w * 1j], atol=1e-12)


def test_char_roots_against_bisection():
    real, pair = CUBIC_C0_R1
    roots = char_roots(0.0, Params(1.0, 1.0))
    assert roots[0] == pytest.approx(real, abs=1e-13)
    assert roots[1] == pytest.approx(pair, abs=1e-13)
    assert roots[2] == pytest.approx(pair.conjugate(), abs=1e-13)


def test_roots_sorted_descending():
    roots = char_roots(0.3, Params(0.7, 1.0)).roots
    keys = [(z.real, z.imag) for z in roots]
    assert keys == sorted(keys, reverse=True)


@settings(max_examples=200, deadline=None)
@given(c=st.floats(-20, 20), r=st.floats(0.01, 20))
def test_roots_residual_and_vieta(c, r):
    p = Params(r, 1.0)
    roots = char_roots(c, p).roots
    for z in roots:
        assert abs(char_poly_eval(z, c, p)) <= 1e-10 * (1 + abs(z) ** 3)
    # lam^3 - lam^2 - c lam - r: sum 1, product r
    assert abs(sum(roots) - 1) <= 1e-10 * (1 + sum(abs(z) for z in roots))
    prod = roots[0] * roots[1] * roots[2]
    assert abs(prod - r) <= 1e-9 * (1 + np.prod([abs(z) for z in roots]))
    nonreal = [z for z in roots if z.imag != 0]
    assert len(nonreal) in (0, 2)
    if nonreal:
        assert nonreal[0] == nonreal[1].conjugate()


def test_vector_field_equilibria():
    p = Params(1.3, 0.7)
    assert vector_field((0, 0, 0), -0.4, p) == (0, 0, 0)
    assert vector_field((1, 0, 0), 2.0, p) == (0, 0, 0)


def test_vector_field_substitution():
    out = vector_field(StateVec(0.0, 0.01, 0.0), -0.999, Params(1.0, 1.0))
    assert out == pytest.approx((0.01, 0.0, -0.00999), abs=1e-17)


def test_jacobian_at_equilibria():
    p = Params(1.5, 0.6)
    np.testing.assert_array_equal(jacobian((0, 0, 0), -0.2, p), companion(-0.2, p))
    np.testing.assert_array_equal(jacobian((1, 0, 0), -0.2, p)[2], [-1.5, -0.2 - 0.6, 1.0])


def test_jacobian_matches_central_differences():
    rng = np.random.default_rng(7)
    p = Params(1.0, 1.0)
    h = 1e-6
    for _ in range(100):
        state = rng.normal(size=3)
        c = rng.uniform(-3, 1)
        J = jacobian(state, c, p)
        fd = np.column_stack([
            (np.array(vector_field(state + h * e, c, p)) - np.array(vector_field(state - h * e, c, p))) / (2 * h)
            for e in np.eye(3)
        ])
        # the field is quadratic, so central differences are exact up to round-off
        assert np.max(np.abs(fd - J)) <= 1e-8


def test_jacobian_forward_difference_bound():
    rng = np.random.default_rng(11)
    p = Params(1.0, 1.0)
    h = 1e-6
    for _ in range(20):
        state, d = rng.normal(size=3), rng.normal(size=3)
        lhs = (np.array(vector_field(state + h * d, -1.0, p)) - np.array(vector_field(state, -1.0, p))) / h
        assert np.linalg.norm(lhs - jacobian(state, -1.0, p) @ d) <= 10 * h
