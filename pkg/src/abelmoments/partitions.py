"""Exact partition numbers."""
from __future__ import annotations

import math

from .errors import CapacityError

#: largest table we are willing to build (P(n) has ~ 2.56 sqrt(n) digits)
MAX_PARTITION_INDEX = 200_000


def partition_table(n_max: int) -> list[int]:
    """Return [P(0), ..., P(n_max)] using Euler's pentagonal-number recurrence.

    P(n) = sum_{k>=1} (-1)^(k+1) [P(n - k(3k-1)/2) + P(n - k(3k+1)/2)]
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    if n_max > MAX_PARTITION_INDEX:
        raise CapacityError(f"partition table beyond {MAX_PARTITION_INDEX} entries requested")
    p = [0] * (n_max + 1)
    p[0] = 1
    for n in range(1, n_max + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            g2 = g1 + k
            term = p[n - g1]
            if g2 <= n:
                term += p[n - g2]
            total += term if k & 1 else -term
            k += 1
        p[n] = total
    return p


def partition_table_dp(n_max: int) -> list[int]:
    """Coin-counting dynamic program: parts 1..n_max as coin denominations."""
    p = [0] * (n_max + 1)
    p[0] = 1
    for part in range(1, n_max + 1):
        for n in range(part, n_max + 1):
            p[n] += p[n - part]
    return p


def partition_bound(nu: int) -> float:
    return math.exp(math.pi * math.sqrt(2 * nu / 3))


def partition_bound_check(n_max: int, margin: float = 1e-9) -> bool:
    """True iff P(nu) < exp(pi sqrt(2 nu / 3)) for 1 <= nu <= n_max.

    The comparison is done on logarithms; `margin` is a relative safety
    margin absorbing floating point error in the right-hand side.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    table = partition_table(n_max)
    for nu in range(1, n_max + 1):
        # log of a big int is exact to double precision
        lhs = math.log(table[nu])
        rhs = math.pi * math.sqrt(2 * nu / 3)
        if not lhs < rhs * (1 - margin):
            return False
    return True
