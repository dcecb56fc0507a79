"""Segmented sieves for multiplicative functions and their partial sums.

Values are produced segment by segment over [lo, hi).  For every prime
p <= sqrt(hi - 1) and every nu with p^nu < hi the entries with p^nu || n are
multiplied by g(nu); what is left over is either 1 or a single prime > sqrt(hi - 1),
which contributes g(1).  int64 is used only when an a-priori bound on |f(n)|
guarantees no overflow, otherwise the arrays hold Python ints.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CapacityError
from .profiles import PrimePowerProfile

DEFAULT_SEGMENT = 1 << 22
#: largest in-memory table (entries); summatory streams and is not bound by this
MAX_TABLE = 2 * 10**8
#: default ceiling on the largest checkpoint of a streamed summatory run
MAX_SUMMATORY = 10**9
INT64_SAFE = 2**62
THREADS_ENV = "ABELMOMENTS_THREADS"


def thread_count(threads: int | None = None) -> int:
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1"))
    return max(1, threads)


def primes_upto(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_prime = np.ones(n + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


@dataclass
class ValueTable:
    """values[n] = f(n) for 1 <= n <= x_max; values[0] is unused and 0."""

    values: np.ndarray
    name: str = ""

    @property
    def x_max(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n):
        return self.values[n]

    def tolist(self) -> list[int]:
        return [int(v) for v in self.values[1:]]


@dataclass
class CheckpointSeries:
    """Exact partial sums S(x_i) at increasing checkpoints x_i."""

    xs: list[int]
    sums: list[int]
    name: str = ""
    meta: dict = field(default_factory=dict)


def _check_capacity(x_max: int) -> None:
    if x_max > MAX_TABLE:
        raise CapacityError(f"table of {x_max} entries exceeds capacity {MAX_TABLE}")


def spf_sieve(x_max: int, segment: int | None = None) -> np.ndarray:
    """Smallest prime factor of every 2 <= n <= x_max (entries 0 and 1 are 0).

    With `segment` set the table is filled one window at a time; the result
    is identical either way.
    """
    if x_max < 2:
        raise ValueError(f"x_max must be >= 2, got {x_max}")
    _check_capacity(x_max)
    spf = np.zeros(x_max + 1, dtype=np.int64)
    base = primes_upto(math.isqrt(x_max))
    seg = segment or x_max + 1
    lo = 2
    while lo <= x_max:
        hi = min(lo + seg, x_max + 1)
        window = spf[lo:hi]
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, -(-lo // p) * p)
            if start >= hi:
                continue
            view = window[start - lo :: p]
            view[view == 0] = p
        rest = window == 0
        window[rest] = np.arange(lo, hi, dtype=np.int64)[rest]
        lo = hi
    return spf


def factor_with_spf(spf: np.ndarray, n: int) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def _needed_nu(x_max: int) -> int:
    return max(1, x_max.bit_length() - 1)


def _prepare(profile: PrimePowerProfile | Sequence[int], x_max: int) -> list[int]:
    nu = _needed_nu(x_max)
    if isinstance(profile, PrimePowerProfile):
        profile = profile.extended(nu)
        vals = list(profile.values)
    else:
        vals = [int(v) for v in profile]
        if len(vals) <= nu:
            from .errors import ProfileTooShort
            raise ProfileTooShort(f"need exponents up to {nu}, have {len(vals) - 1}")
    return vals[: nu + 1]


def value_bound(gvals: Sequence[int], x_max: int) -> float:
    """Upper bound for max |f(n)|, n <= x_max.

    Write f(n) = prod g(nu_i); since sum nu_i <= log2 n,
    |f(n)| <= M^(log2 x_max) with M = max(1, max_nu |g(nu)|^(1/nu)).
    """
    m = 1.0
    for nu in range(1, len(gvals)):
        a = abs(gvals[nu])
        if a > 1:
            m = max(m, math.exp(math.log(a) / nu))
    return m ** math.log2(max(x_max, 2)) * (1 + 1e-9)


def _segment_values(gvals: list[int], lo: int, hi: int, base: np.ndarray, dtype) -> np.ndarray:
    """f(n) for lo <= n < hi (lo >= 1)."""
    size = hi - lo
    vals = np.ones(size, dtype=dtype)
    g1 = gvals[1]
    track = g1 != 1
    if track:
        smooth = np.ones(size, dtype=np.int64)
    for p in base:
        p = int(p)
        if p * p >= hi:
            break
        pk, nu = p, 1
        while pk < hi:
            start = max(pk, -(-lo // pk) * pk)
            if start < hi:
                i0 = start - lo
                if track:
                    smooth[i0::pk] *= p
                g = gvals[nu]
                if g != 1:
                    cnt = (hi - 1 - start) // pk + 1
                    fac = np.full(cnt, g, dtype=dtype)
                    # entries with p^(nu+1) | n are fixed up at the next level
                    fac[(-(start // pk)) % p :: p] = 1
                    vals[i0::pk] *= fac
            pk *= p
            nu += 1
    if track:
        big = smooth != np.arange(lo, hi, dtype=np.int64)
        vals[big] *= g1
    return vals


def _dtype_for(gvals: list[int], x_max: int):
    return np.int64 if value_bound(gvals, x_max) < INT64_SAFE else object


def sieve_values(profile: PrimePowerProfile | Sequence[int], x_max: int,
                 segment: int | None = None) -> ValueTable:
    """Exact f(1..x_max) for a prime-independent multiplicative f."""
    if x_max < 1:
        raise ValueError(f"x_max must be >= 1, got {x_max}")
    _check_capacity(x_max)
    gvals = _prepare(profile, x_max)
    dtype = _dtype_for(gvals, x_max)
    base = primes_upto(math.isqrt(x_max))
    out = np.zeros(x_max + 1, dtype=dtype)
    seg = segment or x_max
    lo = 1
    while lo <= x_max:
        hi = min(lo + seg, x_max + 1)
        out[lo:hi] = _segment_values(gvals, lo, hi, base, dtype)
        lo = hi
    name = profile.name if isinstance(profile, PrimePowerProfile) else ""
    return ValueTable(out, name)


def _segment_partials(gvals, lo, hi, base, dtype, cps):
    """Return (segment total, [partial sum up to each cp in cps])."""
    vals = _segment_values(gvals, lo, hi, base, dtype)
    if dtype is np.int64 and value_bound(gvals, hi) * (hi - lo) < INT64_SAFE:
        csum = np.cumsum(vals)
        total = int(csum[-1])
        return total, [int(csum[c - lo]) for c in cps]
    parts = []
    prev, acc = lo, 0
    for c in cps:
        acc += int(sum(int(v) for v in vals[prev - lo : c - lo + 1]))
        parts.append(acc)
        prev = c + 1
    acc += int(sum(int(v) for v in vals[prev - lo :]))
    return acc, parts


def summatory(profile: PrimePowerProfile | Sequence[int], checkpoints: Sequence[int],
              segment: int = DEFAULT_SEGMENT, threads: int | None = None,
              capacity: int = MAX_SUMMATORY) -> CheckpointSeries:
    """Exact S_f(x) = sum_{n <= x} f(n) at each checkpoint.

    Segments are independent; with threads > 1 they are evaluated
    concurrently and merged in order, so the result does not depend on the
    thread count.
    """
    xs = [int(x) for x in checkpoints]
    if not xs:
        raise ValueError("checkpoints must be nonempty")
    if any(b <= a for a, b in zip(xs, xs[1:])) or xs[0] < 1:
        raise ValueError("checkpoints must be positive and strictly increasing")
    x_max = xs[-1]
    if x_max > capacity:
        raise CapacityError(f"checkpoint {x_max} exceeds summatory capacity {capacity}")
    gvals = _prepare(profile, x_max)
    dtype = _dtype_for(gvals, x_max)
    base = primes_upto(math.isqrt(x_max))

    jobs = []
    lo = 1
    ci = 0
    while lo <= x_max:
        hi = min(lo + segment, x_max + 1)
        cps = []
        while ci < len(xs) and xs[ci] < hi:
            cps.append(xs[ci])
            ci += 1
        jobs.append((lo, hi, cps))
        lo = hi

    def run(job):
        return _segment_partials(gvals, job[0], job[1], base, dtype, job[2])

    n_threads = thread_count(threads)
    if n_threads == 1:
        results = [run(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as ex:
            results = list(ex.map(run, jobs))

    sums: list[int] = []
    running = 0
    for (total, parts) in results:
        sums.extend(running + s for s in parts)
        running += total
    name = profile.name if isinstance(profile, PrimePowerProfile) else ""
    return CheckpointSeries(xs, sums, name)


def geometric_checkpoints(x_min: int = 10**4, x_max: int = 10**8, count: int = 40) -> list[int]:
    """`count` integer checkpoints, geometrically spaced in [x_min, x_max]."""
    if count == 1:
        return [int(x_max)]
    a, b = math.log10(x_min), math.log10(x_max)
    pts = sorted({int(round(10 ** (a + (b - a) * i / (count - 1)))) for i in range(count)})
    return pts
