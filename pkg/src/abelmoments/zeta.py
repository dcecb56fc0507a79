"""Riemann zeta at real arguments.

Two independent schemes:

* ``borwein``: the alternating eta series sum (-1)^(n-1) n^(-s) accelerated with
  the Chebyshev-type weights d_k of P. Borwein's algorithm 2, then
  zeta(s) = eta(s) / (1 - 2^(1-s)).  Error <= 3 (3 + sqrt 8)^(-n) / |1 - 2^(1-s)|
  for real s > 0.
* ``euler_maclaurin``: sum_{n<N} n^(-s) + N^(1-s)/(s-1) + N^(-s)/2 + Bernoulli
  corrections; valid for every real s != 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import PoleAtOne, UnsupportedDomain

DEFAULT_TOL = 1e-13
_RATE = 3 + math.sqrt(8)


@lru_cache(maxsize=None)
def _borwein_weights(n: int) -> tuple[float, ...]:
    """(d_n - d_k)/d_n for k < n, computed from exact integers."""
    d = []
    acc = 0
    for i in range(n + 1):
        acc += math.factorial(n + i - 1) * 4**i * n // (math.factorial(n - i) * math.factorial(2 * i))
        d.append(acc)
    dn = d[n]
    return tuple(float(Fraction(dn - d[k], dn)) for k in range(n))


def _borwein_terms(s: float, tol: float) -> int:
    denom = abs(1 - 2 ** (1 - s))
    n = math.ceil(math.log(3 / (tol * denom)) / math.log(_RATE)) + 2
    return max(n, 8)


def eta_borwein(s: float, n: int) -> float:
    w = _borwein_weights(n)
    return math.fsum((-1) ** k * w[k] / (k + 1) ** s for k in range(n))


@lru_cache(maxsize=None)
def bernoulli_even(m: int) -> tuple[Fraction, ...]:
    """B_0, B_2, ..., B_{2m} (Akiyama-Tanigawa)."""
    n_max = 2 * m
    a = [Fraction(0)] * (n_max + 1)
    b = []
    for n in range(n_max + 1):
        a[n] = Fraction(1, n + 1)
        for j in range(n, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        b.append(a[0])
    return tuple(b[0::2])


def _zeta_em(s: float, tol: float, n_terms: int = 20, first: int = 1) -> float:
    """Euler-Maclaurin sum_{n >= first} n^(-s)."""
    N = n_terms
    head = math.fsum(n ** -s for n in range(first, N))
    terms = [head, N ** (1 - s) / (s - 1), 0.5 * N ** -s]
    bern = bernoulli_even(30)
    # T_k = B_2k/(2k)! * s(s+1)...(s+2k-2) * N^(1-s-2k)
    rising = s
    for k in range(1, 30):
        if k > 1:
            rising *= (s + 2 * k - 3) * (s + 2 * k - 2)
        t = float(bern[k]) / math.factorial(2 * k) * rising * N ** (1 - s - 2 * k)
        terms.append(t)
        if abs(t) < tol * 1e-3:
            break
    return math.fsum(terms)


def zeta_real(s: float, tol: float = DEFAULT_TOL, method: str = "borwein") -> float:
    """zeta(s) for real s > 0, s != 1, to absolute accuracy ~tol.

    Accuracy below ~1e-15 relative is limited by double precision.
    """
    s = float(s)
    if s == 1.0:
        raise PoleAtOne("zeta has a pole at s = 1")
    if not s > 0:
        raise UnsupportedDomain(f"zeta_real supports s > 0 only, got {s}")
    if method == "borwein":
        if s > 60:
            return 1.0 + zeta_minus_one(s)
        n = _borwein_terms(s, tol)
        return eta_borwein(s, n) / (1 - 2 ** (1 - s))
    if method == "euler_maclaurin":
        return _zeta_em(s, tol)
    raise ValueError(f"unknown method {method!r}")


def zeta_minus_one(s: float) -> float:
    """zeta(s) - 1 with full relative accuracy for s >= 2."""
    if s < 2:
        return zeta_real(s) - 1
    return _zeta_em(s, 1e-30, first=2)


def zeta_minus_one_bound(s: float) -> float:
    """Upper bound zeta(s) - 1 <= 2^(-s) (1 + 2/(s - 1)), s > 1.

    From zeta(s) - 1 <= 2^(-s) + int_2^inf x^(-s) dx.  For integer m >= 3 this
    implies zeta(m) - 1 <= 2^(1-m).
    """
    return 2.0**-s * (1 + 2 / (s - 1))


@dataclass(frozen=True)
class EulerProductResult:
    value: float
    tail_bound: float
    method: str
    prime_limit: int | None = None
    series_order: int | None = None
    name: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value": repr(self.value),
            "tail_bound": repr(self.tail_bound),
            "method": self.method,
            "prime_limit": self.prime_limit,
            "series_order": self.series_order,
        }


def a_constant(j: int, tol: float = 1e-10, K: int | None = None) -> EulerProductResult:
    """A_j = prod_{k >= 1, k != j} zeta(k/j), truncated at k <= K.

    Tail: log prod_{k > K} zeta(k/j) <= sum_{k > K} (zeta(k/j) - 1)
          <= (1 + 2j/(K + 1 - j)) 2^(-(K+1)/j) / (1 - 2^(-1/j)).
    """
    if j < 1:
        raise ValueError("j must be >= 1")

    def tail(K):
        return (1 + 2 * j / (K + 1 - j)) * 2 ** (-(K + 1) / j) / (1 - 2 ** (-1 / j))

    if K is None:
        K = 2 * j + 1
        while tail(K) > tol * 1e-3:
            K += 1
    logs = []
    sign = 1
    eval_err = 0.0
    for k in range(1, K + 1):
        if k == j:
            continue
        s = k / j
        if s > 1:
            z = 1 + zeta_minus_one(s)
            logs.append(math.log1p(zeta_minus_one(s)))
        else:
            z = zeta_real(s, 1e-15)
            logs.append(math.log(abs(z)))
        if z < 0:
            sign = -sign
        eval_err += 4e-16 * (1 + 1 / abs(z))
    value = sign * math.exp(math.fsum(logs))
    t = tail(K)
    bound = abs(value) * (math.expm1(t + eval_err + 16 * 2.2e-16 * len(logs)))
    return EulerProductResult(value, bound, "zeta_product", None, K, f"A_{j}")


def a_constants(tol: float = 1e-10) -> tuple[EulerProductResult, EulerProductResult, EulerProductResult]:
    return tuple(a_constant(j, tol) for j in (1, 2, 3))
