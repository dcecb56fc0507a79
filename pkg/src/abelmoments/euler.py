"""Euler-product constants C_f = prod_p L(1/p) with

    L(t) = 1 + sum_{nu >= ell} (g(nu) - g(nu-1)) t^nu = (1 - t) sum_nu g(nu) t^nu.

Accelerated method: write L(t) = prod_{j=2}^{J} (1 - t^j)^(-e_j) * F(t) with
F(t) = 1 + O(t^(J+1)), so that

    C_f = prod_j zeta(j)^(e_j) * prod_p F(1/p).

Primes p <= P are multiplied exactly (in floating point); the rest of the
product is bounded from the coefficients f_m of F.

Bound inequalities used (documented, not machine-verified):

  (B1) sum_{p > P} p^(-m) <= sum_{n > P} n^(-m) <= P^(1-m)/(m-1), m >= 2.
  (B2) |log(1 + u)| <= |u|/(1 - |u|) for |u| < 1.
  (B3) Coefficients beyond the computed order M obey |f_m| <= R^m with
       R = max_{J < m <= M} |f_m|^(1/m) (growth-radius assumption; holds for
       the subexponential registry profiles).
  (B4) zeta(m) - 1 <= 2^(-m) (1 + 2/(m-1)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InapplicableTheorem, NonUnitSeries, ProfileTooShort, ToleranceUnreachable
from .profiles import PrimePowerProfile, TheoremParams, check_params, detect_params
from .series import LocalSeries, binomial_power
from .sieve import primes_upto
from .zeta import EulerProductResult, zeta_minus_one

EPS = 2.220446049250313e-16
#: profile length used to evaluate L(1/p) itself (p = 2 is the slowest case)
LOCAL_EVAL_ORDER = 400


@dataclass(frozen=True)
class ZetaFactorization:
    """exponents[j] = e_j (index 0 unused) with prod_j (1 - t^j)^(-e_j) = series mod t^(J+1)."""

    exponents: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.exponents) - 1

    def reconstruct(self, order: int | None = None) -> LocalSeries:
        order = self.order if order is None else order
        out = LocalSeries((1,), order)
        for j in range(1, self.order + 1):
            if self.exponents[j]:
                out = out * binomial_power(j, -self.exponents[j], order)
        return out

    def nonzero(self) -> dict[int, int]:
        return {j: e for j, e in enumerate(self.exponents) if j and e}


def _is_constant_one(profile: PrimePowerProfile) -> bool:
    return all(v == 1 for v in profile.values)


def local_constant_series(profile: PrimePowerProfile, params: TheoremParams | None = None,
                          order: int = 64) -> LocalSeries:
    """1 + sum_{nu=ell}^{order} (g(nu) - g(nu-1)) t^nu."""
    if _is_constant_one(profile) and params is None:
        return LocalSeries((1,) + (0,) * order, order)
    if params is None:
        params = detect_params(profile)
    else:
        check_params(profile, params)
    prof = profile.extended(order)
    c = [1] + [0] * order
    for nu in range(params.ell, order + 1):
        c[nu] = prof.values[nu] - prof.values[nu - 1]
    return LocalSeries(tuple(c), order)


def zeta_factorize(series: LocalSeries, order: int | None = None) -> ZetaFactorization:
    """Peel off (1 - t^j)^(-e_j) one j at a time: e_j is the current t^j coefficient."""
    order = series.order if order is None else min(order, series.order or order)
    if order is None:
        order = len(series.coeffs) - 1
    if series[0] != 1:
        raise NonUnitSeries(f"constant term is {series[0]}, expected 1")
    cur = series.truncate(order)
    exps = [0] * (order + 1)
    for j in range(1, order + 1):
        e = cur[j]
        if e != int(e):
            raise NonUnitSeries(f"non-integer coefficient {e} at t^{j}")
        e = int(e)
        exps[j] = e
        if e:
            cur = cur * binomial_power(j, e, order)
    return ZetaFactorization(tuple(exps))


def _local_minus_one(coeffs: list[int], ell: int, t: np.ndarray) -> np.ndarray:
    """L(t) - 1 = sum_{nu >= ell} c_nu t^nu, vectorized over t."""
    acc = np.zeros_like(t)
    for c in reversed(coeffs[ell:]):
        acc = acc * t + float(c)
    return acc * t**ell


def _eval_profile(profile: PrimePowerProfile, params: TheoremParams) -> tuple[list[int], float]:
    """Coefficients for evaluating L(1/p) and a bound on the neglected part at p = 2."""
    try:
        prof = profile.extended(LOCAL_EVAL_ORDER)
    except ProfileTooShort:
        prof = profile
    V = prof.nu_max
    c = [1] + [0] * V
    for nu in range(params.ell, V + 1):
        c[nu] = prof.values[nu] - prof.values[nu - 1]
    lo = max(params.ell, V // 2)
    radius = max(abs(c[m]) ** (1 / m) for m in range(lo, V + 1) if c[m]) if any(c[lo:]) else 0.0
    q = radius / 2
    if q >= 1:
        raise ToleranceUnreachable(
            f"profile {profile.name!r} too short to evaluate its local factor at p = 2"
        )
    return c, q ** (V + 1) / (1 - q)


def _prime_tail(coeffs: list[int], first: int, last: int, P: int) -> tuple[float, float]:
    """Bound sum_{p > P} |log(1 + sum_{m >= first} coeffs[m] p^-m)| via (B1)-(B3)."""
    if first > last:
        return 0.0, 0.0
    nz = [m for m in range(first, last + 1) if coeffs[m]]
    if not nz:
        return 0.0, 0.0
    radius = max(abs(coeffs[m]) ** (1 / m) for m in nz)
    q = radius / P
    if q >= 1:
        raise ToleranceUnreachable(f"prime limit {P} below the growth radius {radius:.3g}")
    geo = q ** (last + 1) / (1 - q)
    u = sum(abs(coeffs[m]) * float(P) ** -m for m in nz) + geo
    if u >= 1:
        raise ToleranceUnreachable(f"prime limit {P} too small for the tail bound")
    s = sum(abs(coeffs[m]) * float(P) ** (1 - m) / (m - 1) for m in nz) + P * geo / last
    return s / (1 - u), u


def euler_product_direct(profile: PrimePowerProfile, params: TheoremParams | None = None,
                         prime_limit: int = 10**6) -> EulerProductResult:
    """Plain truncation prod_{p <= P} L(1/p) with its tail bound (slow convergence)."""
    if _is_constant_one(profile) and params is None:
        return EulerProductResult(1.0, 0.0, "direct", prime_limit, None, profile.name)
    params = params or detect_params(profile)
    check_params(profile, params)
    c, local_err = _eval_profile(profile, params)
    primes = primes_upto(prime_limit).astype(float)
    lm1 = _local_minus_one(c, params.ell, 1.0 / primes)
    if np.any(lm1 <= -1):
        raise InapplicableTheorem("a local factor is not positive")
    logs = np.log1p(lm1)
    log_c = math.fsum(logs.tolist())
    tail, _ = _prime_tail(c, params.ell, len(c) - 1, prime_limit)
    rounding = 8 * EPS * (math.fsum(np.abs(logs).tolist()) + 1)
    value = math.exp(log_c)
    bound = value * math.expm1(tail + rounding + 2 * local_err)
    return EulerProductResult(value, bound, "direct", prime_limit, None, profile.name)


def euler_product(profile: PrimePowerProfile, params: TheoremParams | None = None,
                  prime_limit: int = 1000, series_order: int = 12, tol: float = 1e-10,
                  aux_order: int | None = None) -> EulerProductResult:
    """C_f by the zeta-accelerated Euler product, with a tail bound.

    Raises ToleranceUnreachable when the bound exceeds `tol`.
    """
    if prime_limit < 100:
        raise ValueError("prime_limit must be >= 100")
    if _is_constant_one(profile) and params is None:
        return EulerProductResult(1.0, 0.0, "zeta_accelerated", prime_limit, series_order, profile.name)
    params = params or detect_params(profile)
    J = series_order
    if J < params.ell + 2:
        raise ValueError(f"series_order must be >= ell + 2 = {params.ell + 2}")
    M = aux_order or 3 * J
    L = local_constant_series(profile, params, M)
    fac = zeta_factorize(L, J)
    if fac.exponents[1] != 0:
        raise InapplicableTheorem("local factor has a t^1 term; zeta(1) would appear")
    F = L
    for j, e in fac.nonzero().items():
        F = F * binomial_power(j, e, M)
    f = [int(x) for x in F.coeffs]
    if any(f[1 : J + 1]):
        raise ArithmeticError("factorization did not clear coefficients up to the series order")

    # zeta part
    zeta_logs = []
    zeta_err = 0.0
    for j, e in fac.nonzero().items():
        lz = math.log1p(zeta_minus_one(j))
        zeta_logs.append(e * lz)
        zeta_err += abs(e) * lz * 4 * EPS

    # primes p <= P, evaluated from L itself
    c, local_err = _eval_profile(profile, params)
    primes = primes_upto(prime_limit).astype(float)
    t = 1.0 / primes
    lm1 = _local_minus_one(c, params.ell, t)
    if np.any(lm1 <= -1):
        raise InapplicableTheorem("a local factor is not positive")
    prime_logs = np.log1p(lm1).tolist()
    for j, e in fac.nonzero().items():
        prime_logs.extend((e * np.log1p(-(t**j))).tolist())

    tail, _ = _prime_tail(f, J + 1, M, prime_limit)
    terms = zeta_logs + prime_logs
    log_c = math.fsum(terms)
    rounding = 8 * EPS * (math.fsum(abs(x) for x in terms) + 1)
    value = math.exp(log_c)
    bound = value * math.expm1(tail + rounding + zeta_err + 2 * local_err)
    res = EulerProductResult(value, bound, "zeta_accelerated", prime_limit, J, profile.name)
    if bound > tol:
        raise ToleranceUnreachable(
            f"tail bound {bound:.3g} exceeds tol {tol:.3g} with P={prime_limit}, J={J}"
        )
    return res
