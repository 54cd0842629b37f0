"""Fedder-type decision procedures for hypersurfaces R/fR.

Throughout, u is the trace generator (digit extraction), phi the Frobenius
lift x_i -> x_i^p and all ideals are tested in A/p^n.

For a candidate g the conditions are

* D1: u^(e+r-1)(g) in (p^r) for 1 <= r <= n-1,
* D3: u^(e+n-2)(g) not in (m^[p], p^n),

and a certificate is any g in f^(p^(e+n-1)-1) A satisfying both.  The
"shifted" exponents e+r and e+n-1 are evaluated alongside as a diagnostic
only (see ``ConditionCheck``).
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .modlin import (
    SpanBasis,
    ideal_slice,
    kernel_under_u_mod_p,
    member,
    monomials_upto,
    project_mp_p,
    projected_span,
)
from .modpoly import (
    Exps,
    InsufficientPrecisionError,
    ModPoly,
    PolyError,
    escaping_term,
    in_pr_ideal,
    mul,
    mul_monomial,
    pow,
    reduce_precision,
)
from .report import Kind, Soundness, Verdict
from .semilinear import delta1, u_iter, u_op


class CriterionError(PolyError):
    pass


def required_precision(command: str, n: int = 1) -> int:
    """Working precision W a pipeline needs before f is parsed.

    Fedder and the tau tools work mod p.  Delta_1 consumes one digit, so the
    ideal sequences need W = 2; the D1/D3 search needs p^n plus that spare digit.
    """
    if command in ("fpure", "tau"):
        return 1
    if command == "height":
        return 2
    return n + 1


@dataclass
class CriterionParams:
    f: ModPoly
    n: int = 1
    e: int = 1
    c: ModPoly | None = None
    degree_bound: int | None = None
    search_bound: int | None = None

    def __post_init__(self):
        if self.n < 1 or self.e < 1:
            raise CriterionError("n and e must be >= 1")
        check_nonzero_divisor(self.f)
        if self.f.cfg.W < self.n + 1:
            raise InsufficientPrecisionError(f"working precision {self.f.cfg.W} < n+1 = {self.n + 1}")


def check_nonzero_divisor(f: ModPoly) -> None:
    """Reject f unless some coefficient is a unit mod p (so f is a non-zero divisor in A/p^n)."""
    if f.is_zero():
        raise CriterionError("f must be nonzero")
    if all(c % f.p == 0 for _, c in f.items()):
        raise CriterionError("f has no unit coefficient (f = 0 mod p); not supported")


def _mod_p(a: ModPoly) -> ModPoly:
    return reduce_precision(a, 1)


# --- classical Fedder ----------------------------------------------------

def fedder_fpure(f: ModPoly) -> Verdict:
    """F-pure iff f^(p-1) is not in (m^[p], p)."""
    check_nonzero_divisor(f)
    h = pow(_mod_p(f), f.p - 1)
    esc = escaping_term(h, 1)
    if esc is None:
        return Verdict("fpure", Kind.NOT_F_PURE, Soundness.EXACT, f, {"n": 1, "e": 1},
                       {"f_power": h, "contained_in": "(m^[p], p)"})
    return Verdict("fpure", Kind.F_PURE, Soundness.EXACT, f, {"n": 1, "e": 1},
                   {"f_power": h, "escaping_monomial": _mono(esc[0], f), "escaping_coefficient": esc[1]})


def _mono(e: Exps, ref: ModPoly) -> str:
    from .parser import format_monomial

    return format_monomial(e, ref.cfg.vars)


# --- D1 / D2 / D3 --------------------------------------------------------

@dataclass
class ConditionCheck:
    """D1 and D3 for one index convention.

    ``offset=0`` is the convention of the criterion (u^(e+r-1), u^(e+n-2)).
    ``offset=1`` uses one more application of u.  Only offset 0 certifies:
    with offset 1, f = x^2 over F_2 and multiplier x would pass D3 although
    k[x]/(x^2) is not F-pure.
    """

    offset: int
    d1: bool
    d3: bool
    image: ModPoly
    witness: Exps | None = None
    witness_coefficient: int | None = None

    @property
    def holds(self) -> bool:
        return self.d1 and self.d3


def _require_prec(g: ModPoly, n: int) -> None:
    if g.prec < n:
        raise InsufficientPrecisionError(f"precision {g.prec} < n = {n}")


def check_D1(g: ModPoly, e: int, n: int, offset: int = 0) -> bool:
    _require_prec(g, n)
    for r in range(1, n):
        if not in_pr_ideal(u_iter(g, e + r - 1 + offset), r):
            return False
    return True


@dataclass
class D3Result:
    holds: bool
    witness: Exps | None
    coefficient: int | None
    image: ModPoly
    shifted: ConditionCheck


def _d3(g: ModPoly, e: int, n: int, offset: int) -> tuple[ModPoly, tuple[Exps, int] | None]:
    image = u_iter(g, e + n - 2 + offset)
    return image, escaping_term(image, n)


def check_D3(g: ModPoly, e: int, n: int) -> D3Result:
    """D3 at exponent e+n-2, plus the e+n-1 variant for index resolution."""
    _require_prec(g, n)
    image, esc = _d3(g, e, n, 0)
    shifted = evaluate_conditions(g, e, n, offset=1)
    return D3Result(esc is not None, esc[0] if esc else None, esc[1] if esc else None, image, shifted)


def evaluate_conditions(g: ModPoly, e: int, n: int, offset: int = 0) -> ConditionCheck:
    _require_prec(g, n)
    d1 = check_D1(g, e, n, offset)
    image, esc = _d3(g, e, n, offset)
    return ConditionCheck(offset, d1, esc is not None, image,
                          esc[0] if esc else None, esc[1] if esc else None)


def verify_D2_decomposition(parts: Sequence[ModPoly], f: ModPoly, e: int, n: int, slack: int | None = None) -> bool:
    """Check u^r(g_r) in (f^(p^(e+n-r-1)-1)) for every r.

    Membership is tested in a degree-truncated slice of the principal ideal,
    so True is a certificate and False only means no multiplier was found
    within the bound.
    """
    if len(parts) != n:
        raise CriterionError(f"expected {n} parts, got {len(parts)}")
    p = f.p
    if slack is None:
        slack = 2 * p
    for r, g_r in enumerate(parts):
        h = u_iter(g_r, r)
        if h.is_zero():
            continue
        prec = min(h.prec, f.prec)
        F = pow(reduce_precision(f, prec), p ** (e + n - r - 1) - 1)
        h = reduce_precision(h, prec)
        D = max(F.degree(), h.degree()) + slack
        if not member(ideal_slice([F], D, prec=prec), h):
            return False
    return True


# --- necessary conditions: the ideal sequences ----------------------------

def default_degree_bound(f: ModPoly, slack: int | None = None) -> int:
    p, k = f.p, f.cfg.k
    if slack is None:
        slack = 2 * p
    return pow(_mod_p(f), p - 1).degree() + k * (p - 1) + slack


class IterationState:
    """Level n of an ideal sequence, given by generators; the Howell slice is built on demand.

    Every generator is a genuine element of the ideal, so any of them may serve
    as an escape witness; only those of degree <= D enter the truncated slice.
    """

    def __init__(self, level: int, generators: list[ModPoly], degree_bound: int, cfg):
        self.level = level
        self.generators = generators
        self.degree_bound = degree_bound
        self._cfg = cfg
        self._ideal: SpanBasis | None = None
        # (m^[p], p) is an ideal, so the span escapes iff some generator does
        self.witness = next((g for g in generators if project_mp_p(g)), None)

    @property
    def ideal(self) -> SpanBasis:
        if self._ideal is None:
            low = [g for g in self.generators if g.degree() <= self.degree_bound]
            self._ideal = ideal_slice(low, self.degree_bound, cfg=self._cfg, prec=1)
        return self._ideal


def _recursion_data(f: ModPoly, delta_sign: int) -> tuple[ModPoly, ModPoly]:
    if f.prec < 2:
        raise InsufficientPrecisionError("Delta_1(f^(p-1)) needs f at precision >= 2")
    fp1 = pow(reduce_precision(f, 2), f.p - 1)
    return _mod_p(fp1), delta1(fp1, delta_sign)


def iterate_ideals(f: ModPoly, seeds: Sequence[ModPoly], levels: int, degree_bound: int,
                   delta_sign: int = 1) -> Iterable[IterationState]:
    """Yield I_1, I_2, ..., I_levels starting from the ideal generated by ``seeds``.

    I_(n+1) = u(Delta_1(f^(p-1)) * (I_n cap u^-1(pA))) + f^(p-1) A.

    Only I_n + pA matters for the escape test, so everything after Delta_1 is
    carried mod p.
    """
    F1, delta = _recursion_data(f, delta_sign)
    cfg = f.cfg
    D = degree_bound
    gens = [_mod_p(s) for s in seeds]
    state = IterationState(1, [g for g in gens if not g.is_zero()], D, cfg)
    yield state
    for level in range(2, levels + 1):
        kernel = kernel_under_u_mod_p(state.ideal)
        new = [u_op(mul(delta, s)) for s in kernel.rows]
        new.append(F1)
        state = IterationState(level, [g for g in new if not g.is_zero()], D, cfg)
        yield state


def seeds_qfe(f: ModPoly, e: int) -> list[ModPoly]:
    """Generators of I^e_1 = f^(p-1) u^(e-1)(f^(p^(e-1)-1) A).

    A is free over phi^(e-1)(A) on x^j, j in [0, p^(e-1))^k, so the u-image is
    generated by u^(e-1)(f^(p^(e-1)-1) x^j).
    """
    p, k = f.p, f.cfg.k
    fp = _mod_p(f)
    F1 = pow(fp, p - 1)
    if e == 1:
        return [F1]
    h = pow(fp, p ** (e - 1) - 1)
    out = []
    seen = set()
    for j in itertools.product(range(p ** (e - 1)), repeat=k):
        t = u_iter(mul_monomial(h, j), e - 1)
        if t.is_zero():
            continue
        g = mul(F1, t)
        if g not in seen and not g.is_zero():
            seen.add(g)
            out.append(g)
    return out


def seeds_qf2_nonfpure(f: ModPoly) -> list[ModPoly]:
    """Generators f^(p-1) x_i of I'_1 = f^(p-1) m."""
    F1 = pow(_mod_p(f), f.p - 1)
    return [mul(F1, ModPoly.var(f.cfg, v, 1)) for v in f.cfg.vars]


def _stability(f, seeds, n, D, step, delta_sign) -> bool:
    spans = []
    for bound in (D, D + step):
        *_, last = iterate_ideals(f, seeds, n, bound, delta_sign)
        spans.append(projected_span(last.ideal))
    return spans[0] == spans[1]


def necessary_qfe(f: ModPoly, e: int, n: int, degree_bound: int | None = None, *,
                  delta_sign: int = 1, check_stability: bool = False) -> Verdict:
    """Escape test I^e_n not in (m^[p], p), necessary for n-quasi-F^e-splitting."""
    check_nonzero_divisor(f)
    if f.cfg.W < 2:
        raise InsufficientPrecisionError("working precision must be >= 2")
    D = degree_bound if degree_bound is not None else default_degree_bound(f)
    dmin = pow(_mod_p(f), f.p - 1).degree()
    if D < dmin:
        raise CriterionError(f"degree bound {D} < deg f^(p-1) = {dmin}")
    seeds = seeds_qfe(f, e)
    *_, last = iterate_ideals(f, seeds, n, D, delta_sign)
    params = {"n": n, "e": e}
    cert: dict = {"degree_bound": D, "generators": len(last.generators)}
    if check_stability:
        cert["stable_at_degree_plus_p"] = _stability(f, seeds, n, D, f.p, delta_sign)
    if last.witness is not None:
        cert["escaping_element"] = last.witness
        return Verdict("qfe-necessary", Kind.NOT_EXCLUDED, Soundness.EXACT, f, params, cert,
                       [f"I^{e}_{n} escapes (m^[p], p): n-quasi-F^e-splitting is not excluded"])
    grade = Soundness.EXACT if n == 1 else Soundness.SOUND_ONE_SIDED
    return Verdict("qfe-necessary", Kind.NOT_QFE_SPLIT_UP_TO_DEGREE, grade, f, params, cert,
                   [f"I^{e}_{n} is contained in (m^[p], p) up to degree {D}"])


def necessary_qf2_nonFpure(f: ModPoly, n: int, degree_bound: int | None = None, *,
                           delta_sign: int = 1) -> Verdict:
    """Exclusion test for n-quasi-F^2-splitting of a non-F-pure f via I'_n."""
    if fedder_fpure(f).kind is Kind.F_PURE:
        raise CriterionError("precondition violated: f is F-pure")
    if f.cfg.W < 2:
        raise InsufficientPrecisionError("working precision must be >= 2")
    D = degree_bound if degree_bound is not None else default_degree_bound(f)
    *_, last = iterate_ideals(f, seeds_qf2_nonfpure(f), n, D, delta_sign)
    params = {"n": n, "e": 2}
    cert: dict = {"degree_bound": D, "generators": len(last.generators)}
    if last.witness is None:
        grade = Soundness.EXACT if n == 1 else Soundness.SOUND_ONE_SIDED
        return Verdict("qf2-necessary", Kind.NOT_QFE_SPLIT_UP_TO_DEGREE, grade, f, params, cert,
                       [f"I'_{n} is contained in (m^[p], p) up to degree {D}: not {n}-quasi-F^2-split"])
    cert["escaping_element"] = last.witness
    return Verdict("qf2-necessary", Kind.INCONCLUSIVE, Soundness.EXACT, f, params, cert,
                   [f"I'_{n} escapes; this test cannot exclude {n}-quasi-F^2-splitting"])


def qfs_height(f: ModPoly, n_max: int, degree_bound: int | None = None, *, delta_sign: int = 1) -> Verdict:
    """Least n <= n_max at which the e=1 sequence I_n escapes (m^[p], p).

    Treating this escape level as the quasi-F-split height relies on the
    known Fedder-type criterion for e = 1; it is not re-derived here.
    """
    check_nonzero_divisor(f)
    D = degree_bound if degree_bound is not None else default_degree_bound(f)
    params = {"n": n_max, "e": 1}
    cert: dict = {"degree_bound": D}
    for state in iterate_ideals(f, seeds_qfe(f, 1), n_max, D, delta_sign):
        if state.witness is not None:
            cert.update(height=state.level, escaping_element=state.witness)
            # level-1 containment is decided on the single generator f^(p-1), so it is exact
            grade = Soundness.EXACT if state.level <= 2 else Soundness.SOUND_ONE_SIDED
            notes = ["height read off the e=1 escape level (inherited criterion)"]
            if state.level > 2:
                notes.append("escape is certified; containment at lower levels holds up to the degree bound")
            return Verdict("height", Kind.HEIGHT, grade, f, params, cert, notes)
    cert["height"] = f">{n_max}"
    return Verdict("height", Kind.HEIGHT, Soundness.SOUND_ONE_SIDED, f, params, cert,
                   [f"no escape up to level {n_max} at degree bound {D}"])


# --- sufficient conditions: witness search -------------------------------

def _candidates(k: int, bound: int) -> list[Exps]:
    return monomials_upto(k, bound)


class MultiplierTester:
    """Evaluates D1 and D3 on m * base for many monomials m.

    u^j(x^m * base) only sees the terms of base whose exponents are
    = -1 - m mod p^j, so the terms are bucketed by residue once per index j.
    """

    def __init__(self, base: ModPoly, e: int, n: int):
        _require_prec(base, n)
        self.base, self.e, self.n = base, e, n
        p = base.p
        self.d1_indices = [(e + r - 1, r) for r in range(1, n)]
        self.d3_index = e + n - 2
        self.buckets: dict[int, dict[Exps, list[tuple[Exps, int]]]] = {}
        for j in {j for j, _ in self.d1_indices} | {self.d3_index}:
            q = p**j
            table: dict[Exps, list[tuple[Exps, int]]] = {}
            for ex, c in base.items():
                table.setdefault(tuple(x % q for x in ex), []).append((ex, c))
            self.buckets[j] = table

    def image(self, m: Exps, j: int) -> dict[Exps, int]:
        q = self.base.p**j
        target = tuple((-1 - x) % q for x in m)
        return {tuple((x + y) // q for x, y in zip(ex, m)): c for ex, c in self.buckets[j].get(target, ())}

    def holds(self, m: Exps) -> bool:
        p = self.base.p
        for j, r in self.d1_indices:
            pr = p**r
            if any(c % pr for c in self.image(m, j).values()):
                return False
        pn = p**self.n
        return any(c % pn and all(x < p for x in ex) for ex, c in self.image(m, self.d3_index).items())


_WORKER: MultiplierTester | None = None


def _worker_init(base: ModPoly, e: int, n: int) -> None:
    global _WORKER
    _WORKER = MultiplierTester(base, e, n)


def _worker_try(m: Exps) -> bool:
    return _WORKER.holds(m)


def _first_success(base: ModPoly, e: int, n: int, candidates: Sequence[Exps], threads: int) -> Exps | None:
    """Graded-lex first multiplier m such that m*base passes D1 and D3.

    With threads > 1 candidates are checked in ordered chunks by a process
    pool; the answer is the same as the sequential one.
    """
    if threads <= 1 or len(candidates) < 4096:
        tester = MultiplierTester(base, e, n)
        return next((m for m in candidates if tester.holds(m)), None)
    chunk = 256 * threads
    with ProcessPoolExecutor(threads, initializer=_worker_init, initargs=(base, e, n)) as pool:
        for start in range(0, len(candidates), chunk):
            block = candidates[start:start + chunk]
            for m, ok in zip(block, pool.map(_worker_try, block, chunksize=64)):
                if ok:
                    return m
    return None


def _working(f: ModPoly, n: int) -> ModPoly:
    if f.prec < n:
        raise InsufficientPrecisionError(f"f known only mod p^{f.prec}; need p^{n}")
    return f


def _certificate(check: ConditionCheck, f: ModPoly, **extra) -> dict:
    shifted_note = extra.pop("shifted", None)
    cert = dict(extra)
    cert.update(
        index_convention="e+n-2",
        d3_image=check.image,
        escaping_monomial=_mono(check.witness, f),
        escaping_coefficient=check.witness_coefficient,
    )
    if shifted_note is not None:
        cert["shifted_convention_e+n-1"] = shifted_note
    return cert


def _shifted_summary(g: ModPoly, e: int, n: int, f: ModPoly) -> dict:
    s = evaluate_conditions(g, e, n, offset=1)
    return {"d1": s.d1, "d3": s.d3,
            "escaping_monomial": _mono(s.witness, f) if s.witness else None}


def sufficient_qfe(f: ModPoly, e: int, n: int, search_bound: int | None = None, *,
                   witness: ModPoly | None = None, threads: int = 1) -> Verdict:
    """Search g = m * f^(p^(e+n-1)-1) passing D1 and D3 over monomials m."""
    check_nonzero_divisor(f)
    f = _working(f, n)
    p, k = f.p, f.cfg.k
    if search_bound is None:
        search_bound = 4 * k * p
    F = pow(f, p ** (e + n - 1) - 1)
    params = {"n": n, "e": e}
    if witness is not None:
        g = mul(F, witness)
        check = evaluate_conditions(g, e, n)
        if check.holds:
            cert = _certificate(check, f, multiplier=witness, g_factorization=f"m * f^{p ** (e + n - 1) - 1}",
                                shifted=_shifted_summary(g, e, n, f))
            return Verdict("qfe", Kind.QFE_SPLIT_CERTIFIED, Soundness.EXACT, f, params, cert)
        return Verdict("qfe", Kind.INCONCLUSIVE, Soundness.SOUND_ONE_SIDED, f, params,
                       {"multiplier": witness, "d1": check.d1, "d3": check.d3,
                        "shifted_convention_e+n-1": _shifted_summary(g, e, n, f)},
                       ["supplied witness does not certify"])
    m = _first_success(F, e, n, _candidates(k, search_bound), threads)
    if m is None:
        return Verdict("qfe", Kind.INCONCLUSIVE, Soundness.SOUND_ONE_SIDED, f, params,
                       {"search_bound": search_bound},
                       [f"no monomial multiplier of degree <= {search_bound} certifies"])
    mono = ModPoly.monomial(f.cfg, m, 1, f.prec)
    g = mul_monomial(F, m)
    cert = _certificate(evaluate_conditions(g, e, n), f, multiplier=mono, search_bound=search_bound,
                        shifted=_shifted_summary(g, e, n, f))
    return Verdict("qfe", Kind.QFE_SPLIT_CERTIFIED, Soundness.EXACT, f, params, cert)


def validate_c(f: ModPoly, c: ModPoly, t: ModPoly | None = None) -> str:
    """Check the requirements on c that are decidable here; return a description.

    c must be nonzero mod (f, p); if a test element t is given, c must lie in (t^4) mod p.
    Being outside (f) is the non-zero-divisor condition when f is irreducible mod p.
    """
    cp = _mod_p(c)
    if cp.is_zero():
        raise CriterionError("c must be nonzero mod p")
    fp = _mod_p(f)
    if cp.degree() >= fp.degree() and member(ideal_slice([fp], cp.degree(), prec=1), cp):
        raise CriterionError("c lies in (f) mod p, so it is zero in R/fR")
    if t is None:
        return "user-asserted"
    t4 = pow(_mod_p(t), 4)
    if t4.is_zero() or cp.degree() < t4.degree() or not member(ideal_slice([t4], cp.degree(), prec=1), cp):
        raise CriterionError("c is not in (t^4) mod p")
    return "c in (t^4) mod p"


def sufficient_qfr(f: ModPoly, n: int, c: ModPoly | None, e_range: Iterable[int] | None = None,
                   search_bound: int | None = None, *, witness: ModPoly | None = None,
                   t: ModPoly | None = None, threads: int = 1) -> Verdict:
    """Search e and g = c^(p^n-1) * m * f^(p^(e+n-1)-1) passing D1 and D3."""
    if c is None:
        raise CriterionError("quasi-F-regularity test needs a multiplier c")
    check_nonzero_divisor(f)
    f = _working(f, n)
    p, k = f.p, f.cfg.k
    c_status = validate_c(f, c, t)
    if e_range is None:
        e_range = range(1, 9)
    e_range = list(e_range)
    if search_bound is None:
        search_bound = 4 * k * p
    C = pow(reduce_precision(c, f.prec) if c.prec > f.prec else c, p**n - 1)
    candidates = None if witness is not None else _candidates(k, search_bound)
    params = {"n": n, "e": None, "c": c, "e_range": f"{e_range[0]}..{e_range[-1]}" if e_range else ""}
    tried = []
    for e in e_range:
        base = mul(C, pow(f, p ** (e + n - 1) - 1))
        if witness is not None:
            g = mul(base, witness)
            check = evaluate_conditions(g, e, n)
            tried.append({"e": e, "d1": check.d1, "d3": check.d3})
            if not check.holds:
                continue
            m_poly = witness
        else:
            m = _first_success(base, e, n, candidates, threads)
            if m is None:
                continue
            m_poly = ModPoly.monomial(f.cfg, m, 1, f.prec)
            g = mul_monomial(base, m)
            check = evaluate_conditions(g, e, n)
        params["e"] = e
        cert = _certificate(check, f, e=e, c=c, multiplier=m_poly, c_validation=c_status,
                            g_factorization=f"c^{p ** n - 1} * m * f^{p ** (e + n - 1) - 1}",
                            shifted=_shifted_summary(g, e, n, f))
        return Verdict("qfr", Kind.QFR_CERTIFIED, Soundness.EXACT, f, params, cert)
    cert = {"c_validation": c_status}
    if witness is not None:
        cert.update(multiplier=witness, tried=tried)
        notes = ["supplied witness does not certify for any e in range"]
    else:
        cert["search_bound"] = search_bound
        notes = [f"no (e, m) with deg m <= {search_bound} certifies"]
    return Verdict("qfr", Kind.INCONCLUSIVE, Soundness.SOUND_ONE_SIDED, f, params, cert, notes)


def replay_certificate(v: Verdict) -> bool:
    """Re-check a certified verdict's witness from scratch."""
    if not v.certified:
        return False
    f = v.f
    p = f.p
    n = v.params["n"]
    e = v.params["e"]
    m = v.certificate["multiplier"]
    g = mul(pow(f, p ** (e + n - 1) - 1), m)
    if v.kind is Kind.QFR_CERTIFIED:
        g = mul(g, pow(v.certificate["c"], p**n - 1))
    return check_D1(g, e, n) and check_D3(g, e, n).holds


def default_threads() -> int:
    return os.cpu_count() or 1
