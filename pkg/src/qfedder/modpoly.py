"""Sparse multivariate polynomials over Z/p^prec.

A :class:`ModPoly` models an element of A/p^prec where A is the polynomial
ring over the p-local integers.  Coefficients are canonical residues in
``[0, p^prec)`` and zero coefficients are never stored.  Values are immutable.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Mapping

from .config import RingConfig

Exps = tuple[int, ...]

MAX_EXPONENT = 2**32


class PolyError(ValueError):
    pass


class VariableMismatchError(PolyError):
    pass


class ExponentOverflowError(PolyError):
    pass


class InsufficientPrecisionError(PolyError):
    pass


class NotDivisibleError(PolyError):
    def __init__(self, monomial: Exps, coeff: int):
        super().__init__(f"coefficient {coeff} at monomial {monomial} is not divisible by p")
        self.monomial = monomial
        self.coeff = coeff


def grlex_key(e: Exps) -> tuple[int, Exps]:
    """Sort key for graded-lex order (x_1 > x_2 > ... within a degree)."""
    return (sum(e), e)


class ModPoly:
    __slots__ = ("cfg", "prec", "_terms", "_hash")

    def __init__(self, cfg: RingConfig, terms: Mapping[Exps, int] | None = None, prec: int | None = None):
        if prec is None:
            prec = cfg.W
        if not 1 <= prec <= cfg.W:
            raise InsufficientPrecisionError(f"precision {prec} outside [1, {cfg.W}]")
        self.cfg = cfg
        self.prec = prec
        mod = cfg.p**prec
        k = cfg.k
        clean: dict[Exps, int] = {}
        for e, c in (terms or {}).items():
            if len(e) != k:
                raise VariableMismatchError(f"exponent vector {e} has length {len(e)}, expected {k}")
            c %= mod
            if c:
                clean[tuple(e)] = c
        self._terms = clean
        self._hash = None

    # constructors

    @classmethod
    def _raw(cls, cfg: RingConfig, terms: dict[Exps, int], prec: int) -> "ModPoly":
        # terms already canonical
        obj = cls.__new__(cls)
        obj.cfg = cfg
        obj.prec = prec
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, cfg: RingConfig, prec: int | None = None) -> "ModPoly":
        return cls(cfg, {}, prec)

    @classmethod
    def const(cls, cfg: RingConfig, c: int, prec: int | None = None) -> "ModPoly":
        return cls(cfg, {(0,) * cfg.k: c}, prec)

    @classmethod
    def one(cls, cfg: RingConfig, prec: int | None = None) -> "ModPoly":
        return cls.const(cfg, 1, prec)

    @classmethod
    def monomial(cls, cfg: RingConfig, exps: Iterable[int], coeff: int = 1, prec: int | None = None) -> "ModPoly":
        return cls(cfg, {tuple(exps): coeff}, prec)

    @classmethod
    def var(cls, cfg: RingConfig, name: str, prec: int | None = None) -> "ModPoly":
        i = cfg.vars.index(name)
        return cls.monomial(cfg, tuple(int(j == i) for j in range(cfg.k)), 1, prec)

    # inspection

    @property
    def p(self) -> int:
        return self.cfg.p

    @property
    def modulus(self) -> int:
        return self.cfg.p**self.prec

    @property
    def terms(self) -> dict[Exps, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def sorted_terms(self, descending: bool = True) -> list[tuple[Exps, int]]:
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=descending)

    def coeff(self, exps: Iterable[int]) -> int:
        return self._terms.get(tuple(exps), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def leading(self) -> tuple[Exps, int]:
        e = max(self._terms, key=grlex_key)
        return e, self._terms[e]

    def __eq__(self, other):
        if not isinstance(other, ModPoly):
            return NotImplemented
        return self.cfg.compatible(other.cfg) and self.prec == other.prec and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.cfg.vars, self.cfg.p, self.prec, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        from .parser import format_poly

        return f"ModPoly({format_poly(self)!r}, p={self.p}, prec={self.prec})"

    def __str__(self):
        from .parser import format_poly

        return format_poly(self)

    # arithmetic

    def _check(self, other: "ModPoly") -> int:
        if not self.cfg.compatible(other.cfg):
            raise VariableMismatchError(
                f"ring mismatch: {self.cfg.vars}/p={self.p} vs {other.cfg.vars}/p={other.p}")
        return min(self.prec, other.prec)

    def _coerce(self, other) -> "ModPoly":
        if isinstance(other, ModPoly):
            return other
        if isinstance(other, int):
            return ModPoly.const(self.cfg, other, self.prec)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        mod = self.modulus
        return ModPoly._raw(self.cfg, {e: mod - c for e, c in self._terms.items()}, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return scale(self, other)
        if isinstance(other, ModPoly):
            return mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, m: int):
        return pow(self, m)

    def reduce(self, prec: int) -> "ModPoly":
        return reduce_precision(self, prec)

    def with_cfg(self, cfg: RingConfig, prec: int | None = None) -> "ModPoly":
        """Re-home into a compatible ring (e.g. one with larger W)."""
        if not self.cfg.compatible(cfg):
            raise VariableMismatchError("incompatible ring")
        return ModPoly(cfg, self._terms, min(prec or self.prec, cfg.W))


def reduce_precision(a: ModPoly, prec: int) -> ModPoly:
    if prec > a.prec:
        raise InsufficientPrecisionError(f"cannot raise precision {a.prec} to {prec}")
    if prec == a.prec:
        return a
    return ModPoly(a.cfg, a._terms, prec)


def add(a: ModPoly, b: ModPoly) -> ModPoly:
    prec = a._check(b)
    mod = a.p**prec
    out = {e: c % mod for e, c in a._terms.items()} if prec < a.prec else dict(a._terms)
    for e, c in b._terms.items():
        s = (out.get(e, 0) + c) % mod
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return ModPoly._raw(a.cfg, {e: c for e, c in out.items() if c}, prec)


def scale(a: ModPoly, c: int) -> ModPoly:
    mod = a.modulus
    c %= mod
    if c == 0:
        return ModPoly._raw(a.cfg, {}, a.prec)
    out = {}
    for e, v in a._terms.items():
        s = v * c % mod
        if s:
            out[e] = s
    return ModPoly._raw(a.cfg, out, a.prec)


def mul(a: ModPoly, b: ModPoly) -> ModPoly:
    prec = a._check(b)
    mod = a.p**prec
    if len(a._terms) > len(b._terms):
        a, b = b, a
    acc: dict[Exps, int] = defaultdict(int)
    bt = list(b._terms.items())
    for ea, ca in a._terms.items():
        for eb, cb in bt:
            acc[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
    out = {}
    for e, c in acc.items():
        c %= mod
        if c:
            out[e] = c
    return ModPoly._raw(a.cfg, out, prec)


def mul_monomial(a: ModPoly, exps: Exps, coeff: int = 1) -> ModPoly:
    """a * coeff * x^exps, cheaper than a general product."""
    if coeff == 1:
        return ModPoly._raw(a.cfg, {tuple(x + y for x, y in zip(e, exps)): c for e, c in a._terms.items()}, a.prec)
    return scale(mul_monomial(a, exps), coeff)


def pow(a: ModPoly, m: int) -> ModPoly:  # noqa: A001 - mirrors the ring operation name
    """a^m by binary exponentiation; a^0 = 1."""
    if m < 0:
        raise ValueError("negative exponent")
    if a.degree() > 0 and a.degree() * m > MAX_EXPONENT:
        raise ExponentOverflowError(f"degree {a.degree()}*{m} exceeds {MAX_EXPONENT}")
    result = ModPoly.one(a.cfg, a.prec)
    base = a
    while m:
        if m & 1:
            result = mul(result, base)
        m >>= 1
        if m:
            base = mul(base, base)
    return result


def frobenius_lift(a: ModPoly) -> ModPoly:
    """The lift phi: x_i -> x_i^p, coefficients unchanged."""
    p = a.p
    out = {}
    for e, c in a._terms.items():
        q = tuple(p * x for x in e)
        if q and max(q) > MAX_EXPONENT:
            raise ExponentOverflowError(f"exponent {max(q)} exceeds {MAX_EXPONENT}")
        out[q] = c
    return ModPoly._raw(a.cfg, out, a.prec)


def divide_exact_by_p(a: ModPoly) -> ModPoly:
    """Divide every coefficient by p; the result loses one p-adic digit."""
    if a.prec < 2:
        raise InsufficientPrecisionError("division by p needs precision >= 2")
    p = a.p
    out = {}
    for e, c in sorted(a._terms.items(), key=lambda t: grlex_key(t[0])):
        if c % p:
            raise NotDivisibleError(e, c)
        out[e] = c // p
    return ModPoly(a.cfg, out, a.prec - 1)


def in_pr_ideal(a: ModPoly, r: int) -> bool:
    """Membership in the ideal (p^r)."""
    if r < 0:
        raise ValueError("r must be non-negative")
    if r >= a.prec and r > 0:
        raise InsufficientPrecisionError(f"testing (p^{r}) at precision {a.prec} is meaningless")
    m = a.p**r
    return all(c % m == 0 for c in a._terms.values())


def escaping_term(a: ModPoly, s: int) -> tuple[Exps, int] | None:
    """The graded-lex smallest term of ``a`` outside (m^[p], p^s), if any.

    Such a term has every exponent <= p-1 and coefficient nonzero mod p^s.
    """
    if s > a.prec:
        raise InsufficientPrecisionError(f"s={s} exceeds precision {a.prec}")
    p, m = a.p, a.p**s
    for e, c in a.sorted_terms(descending=False):
        if c % m and all(x < p for x in e):
            return e, c
    return None


def in_mp_plus_ps(a: ModPoly, s: int) -> bool:
    """Membership in (x_1^p, ..., x_k^p, p^s)."""
    return escaping_term(a, s) is None
