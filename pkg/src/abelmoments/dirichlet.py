"""Divisor signatures, Dirichlet convolution and the v-coefficients.

For a profile with parameters (ell, k) the multiplicative function
v = f * mu * mu_ell^(*(k-1)) satisfies, at every prime power,

    v(p^nu) = sum_{j=0}^{k-1} (-1)^j C(k-1, j) (f(p^(nu - j ell)) - f(p^(nu - j ell - 1)))

with f(p^0) = 1 and f(p^m) = 0 for m < 0, and v(p^nu) = 0 for 1 <= nu <= ell.
Then f(n) = sum_{ab=n} d((1, ell, ..., ell); a) v(b).
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from math import comb
from typing import Sequence

import numpy as np

from .errors import InapplicableTheorem, ProfileTooShort, TruncationTooShort
from .profiles import PrimePowerProfile, TheoremParams, check_params
from .series import LocalSeries, from_profile
from .sieve import INT64_SAFE, ValueTable, _check_capacity, sieve_values

DEFAULT_ORDER = 64


@dataclass(frozen=True)
class DivisorSignature:
    """Sorted exponent tuple (j_1 <= ... <= j_t) defining d(j; n)."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        e = tuple(int(x) for x in self.exponents)
        if not e:
            raise ValueError("signature needs at least one exponent")
        if any(x < 1 for x in e):
            raise ValueError(f"exponents must be >= 1: {e}")
        if list(e) != sorted(e):
            raise ValueError(f"exponents must be sorted: {e}")
        object.__setattr__(self, "exponents", e)

    @classmethod
    def theorem_shape(cls, k: int, ell: int) -> "DivisorSignature":
        """(1, ell, ..., ell) with k - 1 copies of ell."""
        return cls((1,) + (ell,) * (k - 1))

    @classmethod
    def moment_shape(cls, r: int) -> "DivisorSignature":
        """(1, 2, ..., 2) with 2^r - 1 copies of 2."""
        return cls.theorem_shape(2**r, 2)

    @classmethod
    def parse(cls, text: str) -> "DivisorSignature":
        return cls(tuple(int(x) for x in text.replace("(", "").replace(")", "").split(",") if x.strip()))

    @property
    def t(self) -> int:
        return len(self.exponents)

    def shape(self) -> tuple[int, int] | None:
        """(k, ell) when the signature is (1, ell, ..., ell), else None."""
        e = self.exponents
        if e[0] != 1:
            return None
        if len(e) == 1:
            return (1, 1)
        if len(set(e[1:])) == 1 and e[1] >= 2:
            return (len(e), e[1])
        return None

    def __str__(self):
        return "(" + ",".join(map(str, self.exponents)) + ")"


@dataclass(frozen=True)
class VCoefficients:
    """v(p^nu) for 0 <= nu <= order, the same for every prime."""

    values: tuple[int, ...]
    ell: int
    k: int
    route: str

    @property
    def order(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, nu):
        return self.values[nu]


def mu_local() -> LocalSeries:
    return LocalSeries((1, -1))


def mu_ell_local(ell: int) -> LocalSeries:
    if ell < 2:
        raise ValueError(f"ell must be >= 2, got {ell}")
    return LocalSeries((1,) + (0,) * (ell - 1) + (-1,))


def _profile_upto(profile: PrimePowerProfile, order: int) -> PrimePowerProfile:
    try:
        return profile.extended(order)
    except ProfileTooShort:
        raise ProfileTooShort(f"profile {profile.name!r} does not cover index {order}") from None


def v_from_formula(profile: PrimePowerProfile, params: TheoremParams,
                   order: int = DEFAULT_ORDER) -> VCoefficients:
    """v(p^nu) from the alternating binomial sum."""
    ell, k = params.ell, params.k
    if order < ell + 1:
        raise ValueError(f"order must be >= ell + 1 = {ell + 1}")
    check_params(profile, params)
    prof = _profile_upto(profile, order)
    g = prof.value
    out = [1]
    for nu in range(1, order + 1):
        s = 0
        for j in range(k):
            m = nu - j * ell
            if m < 0:
                break
            s += (-1) ** j * comb(k - 1, j) * (g(m) - g(m - 1))
        out.append(s)
    bad = [nu for nu in range(1, ell + 1) if out[nu] != 0]
    if bad:
        raise InapplicableTheorem(f"v(p^{bad[0]}) = {out[bad[0]]} != 0")
    return VCoefficients(tuple(out), ell, k, "formula")


def v_from_series(profile: PrimePowerProfile, params: TheoremParams,
                  order: int = DEFAULT_ORDER) -> VCoefficients:
    """v(p^nu) as coefficients of (sum g(nu) t^nu)(1 - t)(1 - t^ell)^(k-1)."""
    ell, k = params.ell, params.k
    if order < ell + 1:
        raise ValueError(f"order must be >= ell + 1 = {ell + 1}")
    check_params(profile, params)
    prof = _profile_upto(profile, order)
    local = from_profile(prof.values, order) * mu_local() * mu_ell_local(ell) ** (k - 1)
    return VCoefficients(tuple(int(c) for c in local.coeffs), ell, k, "series")


def expand_v(vc: VCoefficients, x_max: int) -> ValueTable:
    """v(n) for n <= x_max by multiplicativity."""
    need = max(1, x_max.bit_length() - 1)
    if need > vc.order:
        raise TruncationTooShort(f"x_max={x_max} needs order {need}, have {vc.order}")
    table = sieve_values(list(vc.values), x_max)
    table.name = f"v[{vc.route}]"
    return table


def _table_dtype(*tables: np.ndarray, terms: int = 1):
    if any(t.dtype == object for t in tables):
        return object
    bound = float(terms)
    for t in tables:
        bound *= float(np.abs(t).max()) if len(t) else 1.0
    return np.int64 if bound < INT64_SAFE else object


def divisor_signature_values(j: DivisorSignature | Sequence[int], x_max: int) -> ValueTable:
    """d(j; n) for n <= x_max, one additive pass per exponent.

    Each pass maps a table h to n -> sum_{d^e m = n} h(m).  Passes run from
    the largest exponent down so the sparse power passes come first.
    """
    if not isinstance(j, DivisorSignature):
        j = DivisorSignature(tuple(j))
    if x_max < 1:
        raise ValueError(f"x_max must be >= 1, got {x_max}")
    _check_capacity(x_max)
    cur = np.zeros(x_max + 1, dtype=np.int64)
    cur[1] = 1
    for e in sorted(j.exponents, reverse=True):
        powers = []
        d = 1
        while d**e <= x_max:
            powers.append(d**e)
            d += 1
        powers = np.array(powers, dtype=np.int64)
        support = np.flatnonzero(cur)
        nxt = np.zeros_like(cur)
        if len(support) <= len(powers):
            for m in support:
                m = int(m)
                ks = powers[powers <= x_max // m] * m
                nxt[ks] += cur[m]
        else:
            for q in powers:
                q = int(q)
                cnt = x_max // q
                nxt[q::q][:cnt] += cur[1 : cnt + 1]
        cur = nxt
    return ValueTable(cur, f"d{j}")


def dirichlet_convolve(a: ValueTable | np.ndarray, b: ValueTable | np.ndarray) -> ValueTable:
    """(a * b)(n) = sum_{xy = n} a(x) b(y), exactly, for n <= x_max."""
    av = a.values if isinstance(a, ValueTable) else np.asarray(a)
    bv = b.values if isinstance(b, ValueTable) else np.asarray(b)
    if len(av) != len(bv):
        raise ValueError(f"tables differ in length: {len(av) - 1} vs {len(bv) - 1}")
    x_max = len(av) - 1
    # |(a*b)(n)| <= sum_{x<=n} |a(x)| max|b|
    sum_abs_a = int(np.abs(av[1:]).sum()) if av.dtype != object else sum(abs(int(v)) for v in av[1:])
    dtype = _table_dtype(bv, terms=max(1, sum_abs_a))
    out = np.zeros(x_max + 1, dtype=dtype)
    if dtype is object:
        out[:] = 0
        bv = bv.astype(object)
    else:
        bv = bv.astype(np.int64)
    for x in np.flatnonzero(av[1:]) + 1:
        x = int(x)
        cnt = x_max // x
        coef = av[x] if dtype is object else np.int64(av[x])
        out[x::x][:cnt] += coef * bv[1 : cnt + 1]
    return ValueTable(out)


def delta_table(x_max: int) -> ValueTable:
    v = np.zeros(x_max + 1, dtype=np.int64)
    v[1] = 1
    return ValueTable(v, "delta")


@dataclass
class ConvolutionReport:
    ok: bool
    x_max: int
    signature: DivisorSignature
    counterexample: int | None = None
    expected: int | None = None
    got: int | None = None

    def line(self) -> str:
        if self.ok:
            return f"PASS convolution identity d{self.signature} * v = f for n <= {self.x_max}"
        return (f"FAIL convolution identity at n={self.counterexample}: "
                f"f(n)={self.expected}, (d*v)(n)={self.got}")


def convolution_identity_check(profile: PrimePowerProfile, params: TheoremParams, x_max: int,
                               vc: VCoefficients | None = None) -> ConvolutionReport:
    """Check f(n) = sum_{ab=n} d((1, ell, ..., ell); a) v(b) for all n <= x_max.

    Pass `vc` to check a specific (e.g. deliberately corrupted) coefficient set.
    """
    if vc is None:
        vc = v_from_formula(profile, params, max(DEFAULT_ORDER, x_max.bit_length()))
    sig = DivisorSignature.theorem_shape(params.k, params.ell)
    f = sieve_values(profile, x_max)
    rhs = dirichlet_convolve(divisor_signature_values(sig, x_max), expand_v(vc, x_max))
    fv = f.values
    diff = np.flatnonzero(fv[1:] != rhs.values[1:])
    if len(diff) == 0:
        return ConvolutionReport(True, x_max, sig)
    n = int(diff[0]) + 1
    return ConvolutionReport(False, x_max, sig, n, int(fv[n]), int(rhs.values[n]))


def corrupt(vc: VCoefficients, nu: int, delta: int = 1) -> VCoefficients:
    """Copy of `vc` with v(p^nu) shifted by delta (fault injection)."""
    vals = list(vc.values)
    vals[nu] += delta
    return replace(vc, values=tuple(vals), route=vc.route + "+fault")
