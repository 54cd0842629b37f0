"""Truncated Witt vectors over p-torsion-free rings via ghost components.

Entries are Python ints or sympy ``Poly`` objects over ZZ.  Addition and
multiplication go through the ghost map and back-substitution, which is exact
because the coefficient ring has no p-torsion.  This module is an oracle for
property tests and does not share code with the modular polynomial engine.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence


class NotInGhostImage(ValueError):
    def __init__(self, index: int):
        super().__init__(f"ghost vector is not in the image: component {index} fails divisibility")
        self.index = index


def _divides(d: int, x) -> bool:
    if isinstance(x, int):
        return x % d == 0
    return all(c % d == 0 for c in x.coeffs()) if not x.is_zero else True


def _exact_div(x, d: int):
    if isinstance(x, int):
        return x // d
    return x.exquo_ground(d)


def _zero_like(x):
    return 0 if isinstance(x, int) else x * 0


@dataclass(frozen=True)
class WittVector:
    p: int
    entries: tuple

    def __post_init__(self):
        if not self.entries:
            raise ValueError("Witt vectors have length >= 1")
        object.__setattr__(self, "entries", tuple(self.entries))

    def __len__(self):
        return len(self.entries)

    def __add__(self, other):
        return witt_add(self, other)

    def __mul__(self, other):
        return witt_mul(self, other)


def ghost(w: WittVector) -> tuple:
    """Components phi_r = sum_{s<=r} p^s a_s^(p^(r-s))."""
    p = w.p
    out = []
    for r in range(len(w)):
        total = _zero_like(w.entries[0])
        for s in range(r + 1):
            total = total + p**s * w.entries[s] ** (p ** (r - s))
        out.append(total)
    return tuple(out)


def from_ghost(g: Sequence, p: int) -> WittVector:
    """Back-substitution a_r = (g_r - sum_{s<r} p^s a_s^(p^(r-s))) / p^r."""
    entries: list[Any] = []
    for r, gr in enumerate(g):
        rest = gr
        for s, a in enumerate(entries):
            rest = rest - p**s * a ** (p ** (r - s))
        if not _divides(p**r, rest):
            raise NotInGhostImage(r)
        entries.append(_exact_div(rest, p**r))
    return WittVector(p, tuple(entries))


def _check_pair(a: WittVector, b: WittVector) -> None:
    if a.p != b.p or len(a) != len(b):
        raise ValueError("Witt vectors must share p and length")


def witt_add(a: WittVector, b: WittVector) -> WittVector:
    _check_pair(a, b)
    return from_ghost([x + y for x, y in zip(ghost(a), ghost(b))], a.p)


def witt_mul(a: WittVector, b: WittVector) -> WittVector:
    _check_pair(a, b)
    return from_ghost([x * y for x, y in zip(ghost(a), ghost(b))], a.p)


def verschiebung(w: WittVector) -> WittVector:
    return WittVector(w.p, (_zero_like(w.entries[0]),) + w.entries)


def restriction(w: WittVector) -> WittVector:
    if len(w) < 2:
        raise ValueError("cannot restrict a length-1 vector")
    return WittVector(w.p, w.entries[:-1])


def teichmuller(a, n: int, p: int) -> WittVector:
    return WittVector(p, (a,) + (_zero_like(a),) * (n - 1))


def add_n2_closed_form(a: WittVector, b: WittVector) -> WittVector:
    """Length-2 sum from the universal polynomials."""
    p = a.p
    (a0, a1), (b0, b1) = a.entries, b.entries
    carry = _exact_div(a0**p + b0**p - (a0 + b0) ** p, p)
    return WittVector(p, (a0 + b0, a1 + b1 + carry))


def mul_n2_closed_form(a: WittVector, b: WittVector) -> WittVector:
    p = a.p
    (a0, a1), (b0, b1) = a.entries, b.entries
    return WittVector(p, (a0 * b0, a0**p * b1 + b0**p * a1 + p * a1 * b1))


# --- randomized self-tests ----------------------------------------------

@dataclass
class SelfTestReport:
    name: str
    p: int
    n: int
    seed: int
    trials: int = 0
    passed: int = 0
    failed: int = 0
    first_counterexample: Any = None
    notes: list[str] = field(default_factory=list)

    def record(self, ok: bool, example: Callable[[], Any]) -> None:
        self.trials += 1
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if self.first_counterexample is None:
                self.first_counterexample = example()

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.trials > 0

    def as_dict(self) -> dict:
        return {
            "name": self.name, "p": self.p, "n": self.n, "seed": self.seed,
            "trials": self.trials, "passed": self.passed, "failed": self.failed,
            "first_counterexample": None if self.first_counterexample is None else str(self.first_counterexample),
        }


def _rand_poly(rng: random.Random, scale: int = 1):
    import sympy

    x, y = sympy.symbols("x y")
    terms = {(rng.randrange(3), rng.randrange(3)): scale * rng.randint(-3, 3) for _ in range(rng.randint(1, 3))}
    return sympy.Poly.from_dict({k: v for k, v in terms.items()} or {(0, 0): 0}, x, y, domain="ZZ")


def _rand_entry(rng: random.Random, use_poly: bool, scale: int = 1):
    if use_poly:
        return _rand_poly(rng, scale)
    return scale * rng.randint(-20, 20)


def random_witt(rng: random.Random, p: int, n: int, use_poly: bool = False, scale: int = 1) -> WittVector:
    return WittVector(p, tuple(_rand_entry(rng, use_poly, scale) for _ in range(n)))


def _poly_trial(i: int, n: int, p: int) -> bool:
    # polynomial entries grow like deg * p^(n-1); keep them to small cases
    return i % 10 == 0 and p ** (n - 1) <= 9


def check_ring_hom(p: int, n: int, trials: int, seed: int) -> SelfTestReport:
    """ghost(a+b) = ghost(a)+ghost(b), same for products; n=2 universal polynomials."""
    rep = SelfTestReport("ghost_ring_hom", p, n, seed)
    rng = random.Random(seed)
    for i in range(trials):
        poly = _poly_trial(i, n, p)
        a, b = random_witt(rng, p, n, poly), random_witt(rng, p, n, poly)
        s, m = witt_add(a, b), witt_mul(a, b)
        ok = ghost(s) == tuple(x + y for x, y in zip(ghost(a), ghost(b)))
        ok &= ghost(m) == tuple(x * y for x, y in zip(ghost(a), ghost(b)))
        if n == 2:
            ok &= s == add_n2_closed_form(a, b) and m == mul_n2_closed_form(a, b)
        else:
            a2, b2 = WittVector(p, a.entries[:2]), WittVector(p, b.entries[:2])
            ok &= restriction_to(s, 2) == add_n2_closed_form(a2, b2)
            ok &= restriction_to(m, 2) == mul_n2_closed_form(a2, b2)
        rep.record(ok, lambda: (a, b))
    return rep


def restriction_to(w: WittVector, length: int) -> WittVector:
    while len(w) > length:
        w = restriction(w)
    return w


def check_section(p: int, n: int, trials: int, seed: int) -> SelfTestReport:
    rep = SelfTestReport("from_ghost_of_ghost", p, n, seed)
    rng = random.Random(seed)
    for i in range(trials):
        w = random_witt(rng, p, n, _poly_trial(i, n, p))
        rep.record(from_ghost(ghost(w), p) == w, lambda: w)
    return rep


def check_v_and_ghost(p: int, n: int, trials: int, seed: int) -> SelfTestReport:
    """phi_r(V alpha) = p * phi_(r-1)(alpha) for 1 <= r <= n."""
    rep = SelfTestReport("ghost_of_verschiebung", p, n, seed)
    rng = random.Random(seed)
    for i in range(trials):
        a = random_witt(rng, p, n, _poly_trial(i, n, p))
        ga, gv = ghost(a), ghost(verschiebung(a))
        ok = gv[0] == _zero_like(gv[0]) and all(gv[r] == p * ga[r - 1] for r in range(1, n + 1))
        rep.record(ok, lambda: a)
    return rep


def check_ghost_image_of_pW(m: int, n: int, trials: int, seed: int = 0, p: int = 2) -> SelfTestReport:
    """ghost(W_n(p^m A)) = sum_i p^(m+i) A, checked in both directions."""
    rep = SelfTestReport(f"ghost_image_of_p^{m}W", p, n, seed)
    rng = random.Random(seed)
    for i in range(trials):
        poly = _poly_trial(i, n, p)
        w = random_witt(rng, p, n, poly, scale=p**m)
        g = ghost(w)
        forward = all(_divides(p ** (m + j), g[j]) for j in range(n))
        # converse: ghost components divisible by p^(m+j) force entries in p^m A.
        # Entries get random valuations so the hypothesis holds in only part of the trials.
        alpha = WittVector(p, tuple(p ** rng.randint(0, m) * _rand_entry(rng, poly) for _ in range(n)))
        ga = ghost(alpha)
        converse = True
        if all(_divides(p ** (m + j), ga[j]) for j in range(n)):
            converse = all(_divides(p**m, a) for a in from_ghost(ga, p).entries)
        target = alpha
        rep.record(forward and converse, lambda: (w, target))
    return rep


def check_ghost_well_defined_mod_p(n: int, trials: int, seed: int = 0, p: int = 2) -> SelfTestReport:
    """phi_(n-1) mod p^n depends only on the entries mod p and is a ring map there."""
    rep = SelfTestReport("ghost_well_defined_mod_p", p, n, seed)
    rng = random.Random(seed)
    mod = p**n
    for i in range(trials):
        poly = _poly_trial(i, n, p)
        a, b = random_witt(rng, p, n, poly), random_witt(rng, p, n, poly)
        a_pert = WittVector(p, tuple(x + p * _rand_entry(rng, poly) for x in a.entries))
        top = lambda w: ghost(w)[n - 1]  # noqa: E731
        ok = _divides(mod, top(a_pert) - top(a))
        ok &= _divides(mod, top(witt_add(a, b)) - top(a) - top(b))
        ok &= _divides(mod, top(witt_mul(a, b)) - top(a) * top(b))
        rep.record(ok, lambda: (a, a_pert, b))
    return rep


def run_selftest(p: int, n: int, trials: int, seed: int) -> list[SelfTestReport]:
    """All oracle checks at one (p, n); each check gets its own derived seed."""
    reports = [
        check_ring_hom(p, max(n, 2), trials, seed),
        check_section(p, n, trials, seed + 1),
        check_v_and_ghost(p, n, trials, seed + 2),
    ]
    for m in (1, 2):
        reports.append(check_ghost_image_of_pW(m, n, trials, seed + 2 + m, p))
    reports.append(check_ghost_well_defined_mod_p(n, trials, seed + 5, p))
    return reports
