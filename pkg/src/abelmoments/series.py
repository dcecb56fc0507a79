"""Truncated power series in t = p^(-s) with exact coefficients."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence, Union

Coeff = Union[int, Fraction]


@dataclass(frozen=True)
class LocalSeries:
    """c_0 + c_1 t + ... + c_J t^J.

    `order` is the truncation order J; None marks an exact polynomial
    (known to every order, e.g. the local factor 1 - t of the Moebius function).
    """

    coeffs: tuple
    order: int | None = None

    def __post_init__(self):
        if self.order is not None:
            c = tuple(self.coeffs[: self.order + 1])
            c += (0,) * (self.order + 1 - len(c))
            object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[Coeff], order: int | None = None) -> "LocalSeries":
        return cls(tuple(coeffs), order)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, j: int) -> Coeff:
        if self.order is not None and j > self.order:
            raise IndexError(f"coefficient {j} beyond truncation order {self.order}")
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0

    def truncate(self, order: int) -> "LocalSeries":
        if self.order is not None:
            order = min(order, self.order)
        return LocalSeries(self.coeffs, order)

    def _result_order(self, other: "LocalSeries") -> int | None:
        orders = [o for o in (self.order, other.order) if o is not None]
        return min(orders) if orders else None

    def __mul__(self, other: "LocalSeries") -> "LocalSeries":
        order = self._result_order(other)
        a, b = self.coeffs, other.coeffs
        n = len(a) + len(b) - 1 if order is None else order + 1
        out = [0] * n
        for i, ai in enumerate(a):
            if i >= n:
                break
            if ai == 0:
                continue
            for j, bj in enumerate(b[: n - i]):
                if bj:
                    out[i + j] += ai * bj
        return LocalSeries(tuple(out), order)

    def __pow__(self, e: int) -> "LocalSeries":
        if e < 0:
            return self.inverse() ** (-e)
        result = LocalSeries((1,), None)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self, order: int | None = None) -> "LocalSeries":
        """Multiplicative inverse; needs c_0 = +-1 for integer coefficients."""
        order = self.order if order is None else order
        if order is None:
            raise ValueError("inverse of an exact polynomial needs an explicit order")
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term has no inverse")
        inv0 = c0 if c0 in (1, -1) else Fraction(1) / c0
        out = [inv0] + [0] * order
        for n in range(1, order + 1):
            acc = 0
            for j in range(1, min(n, len(self.coeffs) - 1) + 1):
                acc += self.coeffs[j] * out[n - j]
            out[n] = -acc * inv0
        return LocalSeries(tuple(out), order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalSeries):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return self.order == other.order and all(self[i] == other[i] for i in range(n))

    def __hash__(self):
        return hash((tuple(c for c in self.coeffs), self.order))

    def evaluate(self, t: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + float(c)
        return acc

    def tolist(self) -> list:
        return list(self.coeffs)


def binomial_power(j: int, e: int, order: int) -> LocalSeries:
    """(1 - t^j)^e mod t^(order+1) for any integer e (generalized binomial)."""
    out = [0] * (order + 1)
    for m in range(order // j + 1):
        if e >= 0:
            c = comb(e, m) if m <= e else 0
        else:
            # C(e, m) = (-1)^m C(m - e - 1, m)
            c = (-1) ** m * comb(m - e - 1, m)
        out[j * m] = (-1) ** m * c
    return LocalSeries(tuple(out), order)


def from_profile(values: Sequence[int], order: int) -> LocalSeries:
    """The local factor sum_nu g(nu) t^nu truncated at `order`."""
    if len(values) <= order:
        from .errors import ProfileTooShort
        raise ProfileTooShort(f"need {order + 1} profile values, have {len(values)}")
    return LocalSeries(tuple(values[: order + 1]), order)
