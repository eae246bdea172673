"""Exact arithmetic over F_p: quadratic character, additive character, Gauss sums.

The quadratic character table is computed once per context via Euler's
criterion; everything downstream does O(1) lookups.  The additive character
psi(x) = exp(2*pi*i*x/p) is evaluated on demand and carried as a plain Python
complex.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EvenOrTooSmall,
    NotPrime,
    OutOfRange,
    TooLarge,
    WrongResidueClass,
    ZeroArgument,
)

# Table-based contexts only make sense at desk scale.
MAX_P = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """Immutable context for F_p with precomputed quadratic-character data.

    chi_table[x] is -1/0/+1; qr_set is the bitmask of quadratic residues
    (bit x set iff x is a nonzero square mod p); n = ceil(log2 p) is the bit
    length of the field as an extractor domain.
    """

    p: int
    requires_1mod4: bool
    chi_table: np.ndarray = field(repr=False)
    qr_set: int = field(repr=False)
    n: int = 0

    @property
    def qr_elements(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.p) if (self.qr_set >> x) & 1)

    def is_1mod4(self) -> bool:
        return self.p % 4 == 1


def new_field(p: int, require_1mod4: bool = False) -> FieldCtx:
    """Build a FieldCtx for an odd prime p.

    chi is computed by Euler's criterion x^((p-1)/2) mod p with 1 -> +1 and
    p-1 -> -1.
    """
    if p < 3 or p % 2 == 0:
        raise EvenOrTooSmall(f"p must be an odd prime >= 3, got {p}")
    if p > MAX_P:
        raise TooLarge(f"p={p} exceeds the table-based cap {MAX_P}")
    if not is_prime(p):
        raise NotPrime(f"p={p} is not prime")
    if require_1mod4 and p % 4 != 1:
        raise WrongResidueClass(f"p={p} is 3 mod 4; a 1 mod 4 prime is required")

    e = (p - 1) // 2
    chi = np.zeros(p, dtype=np.int8)
    qr_mask = 0
    for x in range(1, p):
        r = pow(x, e, p)
        if r == 1:
            chi[x] = 1
            qr_mask |= 1 << x
        else:
            chi[x] = -1
    chi.setflags(write=False)
    # ceil(log2 p) == bit_length for any odd p >= 3 (never a power of two).
    return FieldCtx(
        p=p,
        requires_1mod4=require_1mod4,
        chi_table=chi,
        qr_set=qr_mask,
        n=p.bit_length(),
    )


def chi(ctx: FieldCtx, x: int) -> int:
    """Quadratic character: 0 at 0, +1 on squares, -1 otherwise."""
    if not 0 <= x < ctx.p:
        raise OutOfRange(f"residue {x} not in [0, {ctx.p})")
    return int(ctx.chi_table[x])


def psi(ctx: FieldCtx, x: int) -> complex:
    """Canonical additive character exp(2*pi*i*x/p)."""
    if not 0 <= x < ctx.p:
        raise OutOfRange(f"residue {x} not in [0, {ctx.p})")
    return cmath.exp(2j * math.pi * x / ctx.p)


def gauss_sum(ctx: FieldCtx, a: int) -> complex:
    """Quadratic Gauss sum sum_x psi(a*x^2), by direct summation.

    For p = 1 mod 4 and a != 0 this equals chi(a)*sqrt(p) up to float error;
    a = 0 is rejected (the raw sum would degenerate to p).
    """
    if not ctx.is_1mod4():
        raise WrongResidueClass(f"p={ctx.p} is 3 mod 4")
    if not 0 <= a < ctx.p:
        raise OutOfRange(f"residue {a} not in [0, {ctx.p})")
    if a == 0:
        raise ZeroArgument("Gauss sum requires a != 0")
    x = np.arange(ctx.p, dtype=np.int64)
    e = (a * x * x) % ctx.p
    return complex(np.exp(2j * np.pi * e / ctx.p).sum())
