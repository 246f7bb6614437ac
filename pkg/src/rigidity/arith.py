"""Exact 2-adic integer utilities for setup parameters.

Everything here is plain bignum arithmetic: 2-adic valuations are always
computed by direct valuation of the full integer, never by a closed-form
shortcut, so that inputs where the usual l+2 formula breaks (e.g. q0 = 17)
are detected instead of silently absorbed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

MAX_EXPONENT_L = 20

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def val2(n: int) -> int:
    """Exponent of the largest power of 2 dividing n (n >= 1)."""
    if n < 1:
        raise ValueError(f"val2 requires n >= 1, got {n}")
    return (n & -n).bit_length() - 1


def two_part(n: int) -> int:
    """Largest power of 2 dividing n."""
    return 1 << val2(n)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for any n below 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = val2(d)
    d >>= r
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def derive_k(q0: int, l: int) -> int:
    """k with 2^k = (q - 1)_2 for q = q0^(2^l), by direct valuation.

    Requires q0 ≡ 1 (mod 4); when (q0 - 1)_2 = 4 this equals l + 2.
    """
    if q0 % 4 != 1:
        raise ValueError(f"q0 must be ≡ 1 (mod 4), got {q0}")
    if l < 0:
        raise ValueError(f"l must be nonnegative, got {l}")
    if l > MAX_EXPONENT_L:
        raise ValueError(f"l capped at {MAX_EXPONENT_L}, got {l}")
    return val2(pow(q0, 1 << l) - 1)


@dataclass(frozen=True)
class KReport:
    """Computed 2-part exponent next to the l+2 closed form."""

    q0: int
    l: int
    k_computed: int
    k_formula: int

    @property
    def agrees(self) -> bool:
        return self.k_computed == self.k_formula


def k_report(q0: int, l: int) -> KReport:
    """Compare the direct valuation of (q-1)_2 against the l+2 formula."""
    return KReport(q0=q0, l=l, k_computed=derive_k(q0, l), k_formula=l + 2)


@dataclass(frozen=True)
class SetupParams:
    """Concrete setup data: odd prime q0, exponent l (q = q0^(2^l)), and k.

    k is always computed from q0 and l; the constructor rejects data
    outside the hypotheses (q0 ≡ 1 mod 4, q0 prime).  Rank-1 type A with
    k = 2 is *not* rejected here: it is admissible data whose classification
    outcome is out-of-hypotheses (abelian Sylow 2-subgroup).
    """

    q0: int
    l: int
    label: "object"  # LieTypeLabel; kept loose to avoid a module cycle
    k: int = field(init=False)
    k_formula_agrees: bool = field(init=False)

    def __post_init__(self) -> None:
        if not is_prime(self.q0):
            raise ValueError(f"q0 must be prime, got {self.q0}")
        rep = k_report(self.q0, self.l)
        object.__setattr__(self, "k", rep.k_computed)
        object.__setattr__(self, "k_formula_agrees", rep.agrees)

    @property
    def q_str(self) -> str:
        return f"{self.q0}^{1 << self.l}" if self.l else str(self.q0)
