"""Test-element discovery: Jacobian seeds closed under the Cartier-type step.

The test ideal of R/fR contains the Jacobian ideal and is stable under
a -> u(a * f^(p-1)).  Closing Jacobian generators under that step produces
elements t of the test ideal, and c = t^4 * (anything) is then a valid
multiplier for the quasi-F-regularity search.
"""
from __future__ import annotations

import itertools
from typing import Sequence

from .modpoly import ModPoly, grlex_key, mul, mul_monomial, pow, reduce_precision
from .semilinear import u_op


def _mod_p(a: ModPoly) -> ModPoly:
    return reduce_precision(a, 1)


def partial_derivative(f: ModPoly, i: int) -> ModPoly:
    out = {}
    for e, c in f.items():
        if e[i]:
            d = list(e)
            d[i] -= 1
            out[tuple(d)] = c * e[i]
    return ModPoly(f.cfg, out, f.prec)


def jacobian_seed(f: ModPoly, products: bool = True) -> list[ModPoly]:
    """Nonzero partials of f mod p (deduplicated), then their pairwise products."""
    fp = _mod_p(f)
    partials = []
    for i in range(f.cfg.k):
        d = partial_derivative(fp, i)
        if not d.is_zero() and d not in partials:
            partials.append(d)
    out = list(partials)
    if products:
        for a, b in itertools.combinations_with_replacement(partials, 2):
            ab = mul(a, b)
            if not ab.is_zero() and ab not in out:
                out.append(ab)
    return out


def cartier_step(a: ModPoly, f: ModPoly) -> ModPoly:
    """u(a * f^(p-1)) mod p."""
    fp = _mod_p(f)
    return u_op(mul(_mod_p(a), pow(fp, f.p - 1)))


def tau_closure(seeds: Sequence[ModPoly], f: ModPoly, max_steps: int = 8,
                max_elements: int = 5000) -> list[ModPoly]:
    """Close ``seeds`` under a -> u(x^r * a * f^(p-1)) for digit vectors r.

    Monomials outside [0, p-1]^k are not needed: writing m = phi(m') x^r,
    u(m a f^(p-1)) = m' u(x^r a f^(p-1)), already in the ideal generated.
    Returns the nonzero generators found, graded-lex smallest first.
    """
    if not seeds:
        raise ValueError("seeds must be nonempty")
    p, k = f.p, f.cfg.k
    fp1 = pow(_mod_p(f), p - 1)
    digits = list(itertools.product(range(p), repeat=k))
    found: dict[ModPoly, None] = {}
    frontier = []
    for s in seeds:
        s = _mod_p(s)
        if not s.is_zero() and s not in found:
            found[s] = None
            frontier.append(s)
    for _ in range(max_steps):
        nxt = []
        for s in frontier:
            sf = mul(s, fp1)
            for r in digits:
                t = u_op(mul_monomial(sf, r))
                if not t.is_zero() and t not in found:
                    found[t] = None
                    nxt.append(t)
        if not nxt or len(found) >= max_elements:
            break
        frontier = nxt
    return sorted(found, key=_poly_key)


def _poly_key(g: ModPoly):
    return [grlex_key(e) for e, _ in g.sorted_terms()], sorted(g.items())


def find_test_element_for(c: ModPoly, closure: Sequence[ModPoly]) -> ModPoly | None:
    """First t in the closure with c in (t^4) mod p (checked by monomial-multiple membership)."""
    from .modlin import ideal_slice, member

    cp = _mod_p(c)
    if cp.is_zero():
        return None
    for t in closure:
        t4 = pow(t, 4)
        if t4.degree() <= cp.degree() and member(ideal_slice([t4], cp.degree(), prec=1), cp):
            return t
    return None
