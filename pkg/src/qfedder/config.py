"""Ring configuration: variable names, the prime p and working precision W."""
from __future__ import annotations

import re
from dataclasses import dataclass

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

# Coefficients are residues mod p^W; keep the modulus inside a signed 64-bit word.
MAX_MODULUS = 2**63


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class RingConfig:
    """Polynomial ring Z/p^W [vars]."""

    vars: tuple[str, ...]
    p: int
    W: int = 1

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.W < 1:
            raise ValueError(f"working precision W must be >= 1, got {self.W}")
        if self.p**self.W >= MAX_MODULUS:
            raise ValueError(f"p^W = {self.p}^{self.W} does not fit in 63 bits")
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"duplicate variable names in {self.vars}")
        for v in self.vars:
            if not _NAME.match(v):
                raise ValueError(f"invalid variable name {v!r}")

    @property
    def k(self) -> int:
        return len(self.vars)

    @property
    def modulus(self) -> int:
        return self.p**self.W

    def with_precision(self, W: int) -> "RingConfig":
        return RingConfig(self.vars, self.p, W)

    def compatible(self, other: "RingConfig") -> bool:
        """Same variables and prime; precision may differ."""
        return self.vars == other.vars and self.p == other.p
