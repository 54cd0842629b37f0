"""Degree-truncated linear algebra over Z/p^prec.

Spans of polynomials are kept in Howell normal form with respect to
graded-lex order.  Z/p^prec has zero divisors, so plain echelon form is not
enough for exact membership: a row with leading coefficient p^j also
contributes p^(prec-j) * row, whose leading term vanishes.  The Howell
completion inserts those rows too.
"""
from __future__ import annotations

from enum import Enum
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .config import RingConfig
from .modpoly import Exps, ModPoly, PolyError, mul_monomial
from .semilinear import u_op


class Provenance(str, Enum):
    IDEAL_SLICE = "IDEAL_SLICE"
    MODULE_SLICE = "MODULE_SLICE"
    SPAN = "SPAN"


class DegreeBoundError(PolyError):
    pass


def _valuation(c: int, p: int) -> int:
    v = 0
    while c % p == 0:
        c //= p
        v += 1
    return v


class _Codec:
    """Packs exponent vectors into ints whose natural order is graded-lex."""

    def __init__(self, k: int, bound: int):
        self.k = k
        self.bits = max(bound, 1).bit_length() + 1
        self.mask = (1 << self.bits) - 1

    def encode(self, e: Exps) -> int:
        key = sum(e)
        for x in e:
            key = (key << self.bits) | x
        return key

    def decode(self, key: int) -> Exps:
        out = []
        for _ in range(self.k):
            out.append(key & self.mask)
            key >>= self.bits
        return tuple(reversed(out))


def _axpy(v: dict[int, int], a: int, w: dict[int, int], mod: int) -> None:
    """v -= a * w in place."""
    for key, c in w.items():
        s = (v.get(key, 0) - a * c) % mod
        if s:
            v[key] = s
        else:
            v.pop(key, None)


def _scaled(v: dict[int, int], a: int, mod: int) -> dict[int, int]:
    out = {}
    for key, c in v.items():
        s = c * a % mod
        if s:
            out[key] = s
    return out


def _howell(vectors: Iterable[dict[int, int]], p: int, prec: int) -> dict[int, dict[int, int]]:
    mod = p**prec
    pivots: dict[int, dict[int, int]] = {}
    val: dict[int, int] = {}
    stack = [dict(v) for v in vectors]
    while stack:
        v = stack.pop()
        while v:
            lead = max(v)
            a = v[lead]
            j = _valuation(a, p)
            unit = a // p**j
            if unit != 1:
                v = _scaled(v, pow(unit, -1, mod), mod)
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead], val[lead] = v, j
                if j:
                    stack.append(_scaled(v, p ** (prec - j), mod))
                break
            i = val[lead]
            if i <= j:
                _axpy(v, p ** (j - i), piv, mod)
            else:
                pivots[lead], val[lead] = v, j
                if j:
                    stack.append(_scaled(v, p ** (prec - j), mod))
                old = dict(piv)
                _axpy(old, p ** (i - j), v, mod)
                v = old
    # reduce entries above pivots into [0, p^val)
    for lead in sorted(pivots):
        row = pivots[lead]
        cur = lead
        while True:
            below = [key for key in row if key < cur and key in pivots and row[key] >= p ** val[key]]
            if not below:
                break
            cur = max(below)
            _axpy(row, row[cur] // p ** val[cur], pivots[cur], mod)
    return pivots


def monomials_upto(k: int, D: int) -> list[Exps]:
    """All exponent vectors in k variables of total degree <= D, graded-lex ascending."""
    out = []
    for d in range(D + 1):
        level = []
        for combo in combinations_with_replacement(range(k), d):
            e = [0] * k
            for i in combo:
                e[i] += 1
            level.append(tuple(e))
        out.extend(sorted(level))
    return out


class SpanBasis:
    """A Z/p^prec-span of polynomials of degree <= D in Howell normal form."""

    def __init__(self, cfg: RingConfig, prec: int, degree_bound: int,
                 pivots: dict[int, dict[int, int]], codec: _Codec, provenance: Provenance):
        self.cfg = cfg
        self.prec = prec
        self.degree_bound = degree_bound
        self.provenance = provenance
        self._codec = codec
        self._pivots = pivots
        self._val = {lead: _valuation(row[lead], cfg.p) for lead, row in pivots.items()}
        self.rows: tuple[ModPoly, ...] = tuple(
            ModPoly._raw(cfg, {codec.decode(key): c for key, c in pivots[lead].items()}, prec)
            for lead in sorted(pivots, reverse=True)
        )

    def __len__(self):
        return len(self.rows)

    def __eq__(self, other):
        if not isinstance(other, SpanBasis):
            return NotImplemented
        return self.prec == other.prec and self.rows == other.rows

    def __repr__(self):
        return f"SpanBasis({len(self.rows)} rows, D={self.degree_bound}, prec={self.prec})"

    def _encode(self, g: ModPoly) -> dict[int, int]:
        enc = self._codec.encode
        mod = self.cfg.p**self.prec
        return {enc(e): c % mod for e, c in g.items() if c % mod}

    def reduce(self, g: ModPoly) -> ModPoly | None:
        """Eliminate leading terms of g against the basis; None means g is in the span."""
        if g.degree() > self.degree_bound:
            raise DegreeBoundError(f"degree {g.degree()} exceeds bound {self.degree_bound}")
        if g.prec < self.prec:
            raise PolyError(f"element precision {g.prec} below span precision {self.prec}")
        p = self.cfg.p
        mod = p**self.prec
        v = self._encode(g)
        while v:
            lead = max(v)
            piv = self._pivots.get(lead)
            if piv is None:
                break
            q, r = divmod(v[lead], p ** self._val[lead])
            if r:
                break
            _axpy(v, q, piv, mod)
        if not v:
            return None
        return ModPoly._raw(g.cfg, {self._codec.decode(key): c for key, c in v.items()}, self.prec)


def _codec_for(cfg: RingConfig, D: int) -> _Codec:
    return _Codec(cfg.k, D)


def howell_reduce(rows: Sequence[ModPoly], D: int, cfg: RingConfig | None = None, prec: int | None = None,
                  provenance: Provenance = Provenance.SPAN) -> SpanBasis:
    """Howell normal form of the span of ``rows`` (all of degree <= D)."""
    if cfg is None:
        if not rows:
            raise ValueError("cfg required for an empty row list")
        cfg = rows[0].cfg
    if prec is None:
        prec = min((r.prec for r in rows), default=cfg.W)
    codec = _codec_for(cfg, D)
    mod = cfg.p**prec
    vecs = []
    for r in rows:
        if not r.cfg.compatible(cfg):
            raise PolyError("ring mismatch")
        if r.degree() > D:
            raise DegreeBoundError(f"row of degree {r.degree()} exceeds bound {D}")
        if r.prec < prec:
            raise PolyError(f"row precision {r.prec} below span precision {prec}")
        v = {codec.encode(e): c % mod for e, c in r.items() if c % mod}
        if v:
            vecs.append(v)
    return SpanBasis(cfg, prec, D, _howell(vecs, cfg.p, prec), codec, provenance)


def ideal_slice(generators: Sequence[ModPoly], D: int, cfg: RingConfig | None = None,
                prec: int | None = None) -> SpanBasis:
    """Span of all monomial multiples m*g with deg(m*g) <= D.

    This is contained in the degree-<=D part of the ideal; it can miss elements
    whose expression needs higher-degree cancellation.
    """
    if cfg is None:
        cfg = generators[0].cfg
    if prec is None:
        prec = min((g.prec for g in generators), default=cfg.W)
    rows = []
    mons = monomials_upto(cfg.k, D)
    for g in generators:
        if g.is_zero():
            continue
        d = g.degree()
        for m in mons:
            if sum(m) + d > D:
                break
            rows.append(mul_monomial(g, m))
    return howell_reduce(rows, D, cfg, prec, Provenance.IDEAL_SLICE)


def member(b: SpanBasis, g: ModPoly) -> bool:
    return b.reduce(g) is None


def _left_kernel_mod_p(matrix: list[list[int]], p: int) -> list[list[int]]:
    """Basis (entries in [0,p)) of {lam : lam * matrix = 0 mod p}."""
    m = len(matrix)
    ncols = len(matrix[0]) if matrix else 0
    aug = [[x % p for x in row] + [int(i == j) for j in range(m)] for i, row in enumerate(matrix)]
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, m) if aug[i][col]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][col], -1, p)
        aug[r] = [x * inv % p for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][col]:
                f = aug[i][col]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[r])]
        r += 1
    return [row[ncols:] for row in aug[r:]]


def kernel_under_u_mod_p(b: SpanBasis) -> SpanBasis:
    """The sub-span {v in span(b) : u(v) = 0 mod p}.

    A combination sum lam_i r_i lies in it iff lam mod p is in the left kernel
    of the matrix of u-relevant coefficients mod p.  So the result is spanned
    by p*r_i together with lifts of an F_p-basis of that kernel.
    """
    cfg, p, prec = b.cfg, b.cfg.p, b.prec
    rows = list(b.rows)
    ucols = sorted({e for r in rows for e in u_op(r).terms})
    matrix = [[u_op(r).coeff(e) for e in ucols] for r in rows]
    gens = []
    if prec > 1:
        gens.extend(r * p for r in rows)
    if ucols:
        for lam in _left_kernel_mod_p(matrix, p):
            acc = ModPoly.zero(cfg, prec)
            for coef, r in zip(lam, rows):
                if coef:
                    acc = acc + r * coef
            gens.append(acc)
    else:
        gens.extend(rows)
    out = howell_reduce([g for g in gens if g], b.degree_bound, cfg, prec, Provenance.MODULE_SLICE)
    return out


def project_mp_p(g: ModPoly) -> dict[Exps, int]:
    """Image of g in A/(m^[p], p): keep terms with all exponents < p, coefficients mod p."""
    p = g.p
    return {e: c % p for e, c in g.items() if c % p and all(x < p for x in e)}


def escapes_mp_p(b: SpanBasis) -> ModPoly | None:
    """An element of the span outside (m^[p], p), or None if the projection is zero."""
    for r in b.rows:
        if project_mp_p(r):
            return r
    return None


def projected_span(b: SpanBasis) -> tuple[tuple[tuple[Exps, int], ...], ...]:
    """Reduced echelon form over F_p of the image of span(b) in A/(m^[p], p).

    Used to compare truncations at different degree bounds.
    """
    p = b.cfg.p
    cols = sorted({e for r in b.rows for e in project_mp_p(r)}, reverse=True)
    if not cols:
        return ()
    mat = [[project_mp_p(r).get(e, 0) for e in cols] for r in b.rows]
    rref = []
    r = 0
    for ci in range(len(cols)):
        piv = next((i for i in range(r, len(mat)) if mat[i][ci]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = pow(mat[r][ci], -1, p)
        mat[r] = [x * inv % p for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][ci]:
                f = mat[i][ci]
                mat[i] = [(x - f * y) % p for x, y in zip(mat[i], mat[r])]
        r += 1
    for row in mat[:r]:
        rref.append(tuple((e, c) for e, c in zip(cols, row) if c))
    return tuple(rref)
