import pytest
from hypothesis import given
from hypothesis import strategies as st

from qfedder import ModPoly, RingConfig, parse_poly
from qfedder.config import is_prime
from qfedder.modpoly import (
    ExponentOverflowError,
    InsufficientPrecisionError,
    NotDivisibleError,
    VariableMismatchError,
    divide_exact_by_p,
    escaping_term,
    frobenius_lift,
    in_mp_plus_ps,
    in_pr_ideal,
    mul,
    pow,
    reduce_precision,
)

from strategies import ring_and_polys

XY = RingConfig(("x", "y"), 2, 2)


def P(s, cfg=XY):
    return parse_poly(s, cfg)


def test_ring_config_validation():
    assert is_prime(2) and is_prime(97) and not is_prime(1) and not is_prime(91)
    with pytest.raises(ValueError):
        RingConfig(("x",), 4)
    with pytest.raises(ValueError):
        RingConfig(("x", "x"), 2)
    with pytest.raises(ValueError):
        RingConfig(("1x",), 2)
    with pytest.raises(ValueError):
        RingConfig(("x",), 2, 0)
    with pytest.raises(ValueError):
        RingConfig(("x",), 2, 64)


def test_basic_arithmetic():
    assert P("x+y") * P("x+y") == P("x^2+2*x*y+y^2")
    assert P("x+y") ** 2 == P("x^2+2*x*y+y^2")
    assert (P("3*x") + 1).terms == {(1, 0): 3, (0, 0): 1}
    assert P("x") - P("x") == ModPoly.zero(XY)


def test_degree_and_leading():
    assert ModPoly.zero(XY).degree() == -1
    f = P("x*y + y^2 + x")
    assert f.degree() == 2
    assert f.leading() == ((1, 1), 1)


def test_mixed_rings_rejected():
    other = RingConfig(("x", "z"), 2, 2)
    with pytest.raises(VariableMismatchError):
        P("x") + ModPoly.var(other, "x")


def test_precision_is_min():
    a = P("x").reduce(1)
    assert (a + P("2*y")).prec == 1
    assert (a + P("2*y")).terms == {(1, 0): 1}


def test_exponent_overflow():
    with pytest.raises(ExponentOverflowError):
        pow(P("x"), 2**33)


def test_frobenius_and_division():
    cfg = RingConfig(("x", "y"), 3, 2)
    a = parse_poly("x + y", cfg)
    phi = frobenius_lift(a)
    assert phi == parse_poly("x^3+y^3", cfg)
    d = divide_exact_by_p(phi - pow(a, 3))
    assert d.prec == 1
    assert d == parse_poly("-x^2*y - x*y^2", cfg.with_precision(1)).reduce(1)
    with pytest.raises(NotDivisibleError):
        divide_exact_by_p(a)


def test_ideal_membership_helpers():
    assert in_pr_ideal(P("2*x + 2"), 1)
    assert not in_pr_ideal(P("2*x + 1"), 1)
    with pytest.raises(InsufficientPrecisionError):
        in_pr_ideal(P("2*x"), 2)
    # (m^[2], 4): xy escapes, x^2 does not, 4*anything is zero anyway
    assert not in_mp_plus_ps(P("x*y + x^2"), 2)
    assert in_mp_plus_ps(P("x^2 + y^3"), 2)
    assert escaping_term(P("2*x*y + x^2"), 2) == ((1, 1), 2)
    assert escaping_term(P("2*x*y + x^2"), 1) is None


def test_escape_picks_grlex_smallest():
    assert escaping_term(P("x*y + x + y"), 1) == ((0, 1), 1)


@given(ring_and_polys(count=3))
def test_ring_axioms(data):
    cfg, a, b, c = data
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ModPoly.zero(cfg)


@given(ring_and_polys(count=2))
def test_frobenius_is_ring_map(data):
    cfg, a, b = data
    assert frobenius_lift(a * b) == frobenius_lift(a) * frobenius_lift(b)
    assert frobenius_lift(a + b) == frobenius_lift(a) + frobenius_lift(b)


@given(ring_and_polys(count=1, max_W=3), st.integers(0, 4))
def test_pow_matches_repeated_mul(data, m):
    cfg, a = data
    acc = ModPoly.one(cfg)
    for _ in range(m):
        acc = mul(acc, a)
    assert pow(a, m) == acc


@given(ring_and_polys(count=1))
def test_reduce_precision_composes(data):
    cfg, a = data
    for s in range(1, cfg.W + 1):
        r = reduce_precision(a, s)
        assert r.prec == s
        assert all(0 < c < cfg.p**s for _, c in r.items())
