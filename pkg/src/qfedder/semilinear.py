"""Digit decomposition along the Frobenius lift, the trace generator u, and Delta_1.

With phi(x_i) = x_i^p, every g decomposes uniquely as
``g = sum_r phi(c_r) * x^r`` over digit vectors r in [0, p-1]^k.  The trace
generator u is the coordinate c_(p-1,...,p-1) of that decomposition.
"""
from __future__ import annotations

from dataclasses import dataclass

from .modpoly import Exps, ModPoly, add, divide_exact_by_p, frobenius_lift, mul_monomial, pow


@dataclass(frozen=True)
class DigitDecomposition:
    """Coordinates of g in the basis {x^r : r in [0, p-1]^k} of phi_* A."""

    source: ModPoly
    parts: dict[Exps, ModPoly]

    def __getitem__(self, r: Exps) -> ModPoly:
        return self.parts.get(tuple(r), ModPoly.zero(self.source.cfg, self.source.prec))

    def reconstruct(self) -> ModPoly:
        g = self.source
        total = ModPoly.zero(g.cfg, g.prec)
        for r, c in self.parts.items():
            total = add(total, mul_monomial(frobenius_lift(c), r))
        return total


def digit_decompose(g: ModPoly) -> DigitDecomposition:
    p = g.p
    buckets: dict[Exps, dict[Exps, int]] = {}
    for e, c in g.items():
        r = tuple(x % p for x in e)
        q = tuple(x // p for x in e)
        buckets.setdefault(r, {})[q] = c
    parts = {r: ModPoly._raw(g.cfg, t, g.prec) for r, t in buckets.items()}
    return DigitDecomposition(g, parts)


def u_op(g: ModPoly) -> ModPoly:
    """Keep terms with every exponent = p-1 mod p and map e to (e - (p-1))/p."""
    p = g.p
    top = p - 1
    out = {}
    for e, c in g.items():
        if all(x % p == top for x in e):
            out[tuple(x // p for x in e)] = c
    return ModPoly._raw(g.cfg, out, g.prec)


def u_iter(g: ModPoly, r: int) -> ModPoly:
    """u applied r times.

    Equivalent to one extraction with modulus p^r: keep exponents
    = p^r - 1 mod p^r and divide by p^r.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    if r == 0:
        return g
    q = g.p**r
    top = q - 1
    out = {}
    for e, c in g.items():
        if all(x % q == top for x in e):
            out[tuple(x // q for x in e)] = c
    return ModPoly._raw(g.cfg, out, g.prec)


def delta1(a: ModPoly, sign: int = 1) -> ModPoly:
    """(phi(a) - a^p) / p, one digit of precision lost.

    ``sign=-1`` returns the opposite convention; verdicts must not depend on it.
    """
    d = divide_exact_by_p(frobenius_lift(a) - pow(a, a.p))
    return d if sign == 1 else -d
