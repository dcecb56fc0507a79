"""Prime-independent multiplicative functions: profiles nu -> f(p^nu)."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Callable, Sequence

from sympy import factorint

from .errors import InapplicableTheorem, MalformedProfile, ProfileTooShort, UnknownFunction
from .partitions import partition_table

DEFAULT_NU_MAX = 64

REGISTRY_NAMES = ("abelian", "exp_divisor", "exp_totient", "one", "custom")


@dataclass(frozen=True)
class PrimePowerProfile:
    """f(p^nu) = values[nu] for every prime p.

    ``generator(n)`` (when present) returns the first n + 1 values, letting
    registry profiles be extended on demand; custom profiles are fixed length.
    """

    values: tuple[int, ...]
    name: str = "custom"
    growth_note: str = ""
    generator: Callable[[int], Sequence[int]] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.values or self.values[0] != 1:
            raise MalformedProfile(f"profile {self.name!r} must start with g(0) = 1")

    @property
    def nu_max(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, nu: int) -> int:
        return self.values[nu]

    def __len__(self) -> int:
        return len(self.values)

    def extended(self, nu_max: int) -> "PrimePowerProfile":
        """Return a profile covering at least index nu_max."""
        if nu_max <= self.nu_max:
            return self
        if self.generator is None:
            raise ProfileTooShort(
                f"profile {self.name!r} has nu_max={self.nu_max}, index {nu_max} needed"
            )
        vals = tuple(int(v) for v in self.generator(nu_max))
        return PrimePowerProfile(vals, self.name, self.growth_note, self.generator)

    def value(self, nu: int) -> int:
        """g(nu) with the convention g(m) = 0 for m < 0."""
        if nu < 0:
            return 0
        if nu > self.nu_max:
            return self.extended(nu)[nu]
        return self.values[nu]


@dataclass(frozen=True)
class TheoremParams:
    ell: int
    k: int


@lru_cache(maxsize=None)
def _partitions(n: int) -> tuple[int, ...]:
    return tuple(partition_table(n))


def _divisor_count(n: int) -> int:
    c = 1
    for e in factorint(n).values():
        c *= e + 1
    return c


def _totient(n: int) -> int:
    if n == 1:
        return 1
    return sum(1 for i in range(1, n + 1) if gcd(i, n) == 1)


def _gen_abelian(r: int):
    def gen(n: int) -> list[int]:
        # P(n) < exp(pi sqrt(2n/3)); a few extra entries cost nothing
        return [v**r for v in _partitions(max(n, 8))[: n + 1]]
    return gen


def _gen_pointwise(func: Callable[[int], int], r: int):
    def gen(n: int) -> list[int]:
        return [1] + [func(nu) ** r for nu in range(1, n + 1)]
    return gen


def _gen_one(n: int) -> list[int]:
    return [1] * (n + 1)


def registry(name: str, r: int = 1, nu_max: int = DEFAULT_NU_MAX,
             values: Sequence[int] | None = None) -> PrimePowerProfile:
    """Build a named profile.

    abelian      nu -> P(nu)^r      (a(n)^r, a = number of abelian groups of order n)
    exp_divisor  nu -> d(nu)^r      (exponential divisor function)
    exp_totient  nu -> phi(nu)^r    (exponential totient)
    one          nu -> 1            (the constant function 1)
    custom       user-supplied values, g(0) must be 1
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if name == "custom":
        if values is None:
            raise MalformedProfile("custom profile needs explicit values")
        return PrimePowerProfile(tuple(int(v) for v in values), "custom", "user supplied")
    if name == "abelian":
        gen, note = _gen_abelian(r), f"P(nu)^{r} < exp({r} pi sqrt(2 nu/3))"
    elif name == "exp_divisor":
        gen, note = _gen_pointwise(_divisor_count, r), f"d(nu)^{r}, polynomial growth"
    elif name == "exp_totient":
        gen, note = _gen_pointwise(_totient, r), f"phi(nu)^{r} <= nu^{r}"
    elif name == "one":
        gen, note = _gen_one, "bounded"
    else:
        raise UnknownFunction(f"unknown function {name!r}; expected one of {REGISTRY_NAMES}")
    label = name if r == 1 else f"{name}^{r}"
    return PrimePowerProfile(tuple(gen(nu_max)), label, note, gen)


def detect_params(profile: PrimePowerProfile) -> TheoremParams:
    """Find (ell, k): ell is the least nu >= 1 with g(nu) != 1 and k = g(ell)."""
    vals = profile.values
    ell = next((nu for nu in range(1, len(vals)) if vals[nu] != 1), None)
    if ell is None:
        raise InapplicableTheorem(
            f"profile {profile.name!r} is identically 1 up to nu={profile.nu_max}"
        )
    if ell == 1:
        raise InapplicableTheorem(f"profile {profile.name!r} has g(1) = {vals[1]} != 1")
    k = vals[ell]
    if not isinstance(k, int) or k < 2:
        raise InapplicableTheorem(f"profile {profile.name!r}: g({ell}) = {k} is not an integer >= 2")
    if profile.nu_max < ell + 2:
        raise ProfileTooShort(f"profile {profile.name!r} needs nu_max >= {ell + 2}")
    return TheoremParams(ell=ell, k=k)


def check_params(profile: PrimePowerProfile, params: TheoremParams) -> None:
    """Raise unless `params` is exactly what `detect_params` would return."""
    found = detect_params(profile)
    if found != params:
        raise InapplicableTheorem(
            f"profile {profile.name!r} has (ell, k) = ({found.ell}, {found.k}), "
            f"not ({params.ell}, {params.k})"
        )


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization as (prime, exponent) pairs, primes increasing."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return sorted(factorint(n).items())


def eval_multiplicative(profile: PrimePowerProfile, n: int) -> int:
    result = 1
    for _, e in factorize(n):
        if e > profile.nu_max:
            raise ProfileTooShort(f"exponent {e} exceeds nu_max={profile.nu_max}")
        result *= profile.values[e]
    return result
