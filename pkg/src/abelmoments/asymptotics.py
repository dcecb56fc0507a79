"""Main-term fitting, remainder measurement and reference exponents."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np
from scipy import stats

from .dirichlet import DivisorSignature
from .errors import IllConditionedFit
from .sieve import CheckpointSeries, geometric_checkpoints, spf_sieve, factor_with_spf
from .zeta import EulerProductResult, a_constants, zeta_real

#: |R| below this floor is dropped before taking logs
RESIDUAL_FLOOR = 1.0
MAX_CONDITION = 1e12


# -- reference exponents -------------------------------------------------

@dataclass(frozen=True)
class ExponentEntry:
    key: str
    value: Fraction
    log_power: int = 0
    plus_epsilon: bool = False
    note: str = ""
    containment: str = ""

    def as_dict(self) -> dict:
        return {
            "key": self.key,
            "value": f"{self.value.numerator}/{self.value.denominator}",
            "float": float(self.value),
            "log_power": self.log_power,
            "plus_epsilon": self.plus_epsilon,
            "note": self.note,
            "containment": self.containment,
        }


def u_r(r: int) -> Fraction:
    return Fraction(2 ** (r + 1) - 1, 2 ** (r + 2) + 1)


def u_kl(k: int, ell: int) -> Fraction:
    return Fraction(2 * k - 1, 3 + (2 * k - 1) * ell)


def containment(value: Fraction, lo: Fraction, hi: Fraction) -> str:
    if lo < value < hi:
        return "interior"
    if value == lo or value == hi:
        return "boundary"
    return "outside"


def reference_exponents(r: int | None = None, k: int | None = None,
                        ell: int | None = None) -> list[ExponentEntry]:
    """Known remainder exponents for the r-th moment of a(n), or for Delta_{k,ell}."""
    out: list[ExponentEntry] = []
    if r is not None:
        if r < 1:
            raise ValueError("r must be >= 1")
        third, half = Fraction(1, 3), Fraction(1, 2)
        if r == 1:
            out.append(ExponentEntry("three_term", Fraction(1, 4), 0, True,
                                     "R(x) in the three-term formula for sum a(n)"))
            return out
        if r == 2:
            out.append(ExponentEntry("delta2_log5", Fraction(45, 127), 5, False,
                                     "Delta_2(x) << x^(45/127) (log x)^5",
                                     containment(Fraction(45, 127), third, half)))
            out.append(ExponentEntry("piltz_d3", Fraction(96, 245), 0, True,
                                     "earlier bound via the Piltz problem for d_3",
                                     containment(Fraction(96, 245), third, half)))
        u = u_r(r)
        out.append(ExponentEntry("u_r", u, 0, True, f"(2^{r+1}-1)/(2^{r+2}+1)",
                                 containment(u, third, half)))
    if k is not None or ell is not None:
        if k is None or ell is None or k < 2 or ell < 2:
            raise ValueError("k and ell must both be >= 2")
        u = u_kl(k, ell)
        out.append(ExponentEntry("u_kl", u, 0, True, f"(2k-1)/(3+(2k-1)l), k={k}, l={ell}",
                                 containment(u, Fraction(1, ell + 1), Fraction(1, ell))))
    return out


# -- exact divisor sums ---------------------------------------------------

def _piltz_weights(t: int, m_max: int) -> np.ndarray:
    """d_t(m) for m <= m_max from the closed form prod_p C(e + t - 1, t - 1)."""
    w = np.zeros(m_max + 1, dtype=np.int64)
    if m_max < 1:
        return w
    w[1] = 1
    if m_max >= 2:
        spf = spf_sieve(m_max)
        for m in range(2, m_max + 1):
            c = 1
            for _, e in factor_with_spf(spf, m):
                c *= comb(e + t - 1, t - 1)
            w[m] = c
    return w


def _iroot(x: int, ell: int) -> int:
    r = int(round(x ** (1.0 / ell)))
    while r**ell > x:
        r -= 1
    while (r + 1) ** ell <= x:
        r += 1
    return r


def exact_divisor_sums(j: DivisorSignature | Sequence[int], xs: Sequence[int]) -> list[int]:
    """sum_{n <= x} d(j; n) for each x, for j = (1, ell, ..., ell).

    Uses sum over (d_2, ..., d_k) with (d_2...d_k)^ell <= x of floor(x / (d_2...d_k)^ell),
    grouping tuples by their product m (there are d_{k-1}(m) of them).
    """
    if not isinstance(j, DivisorSignature):
        j = DivisorSignature(tuple(j))
    shape = j.shape()
    if shape is None:
        raise ValueError(f"signature {j} is not of the form (1, l, ..., l)")
    k, ell = shape
    xs = [int(x) for x in xs]
    if any(x < 1 for x in xs):
        raise ValueError("x must be >= 1")
    if k == 1:
        return list(xs)
    m_max = _iroot(max(xs), ell)
    w = _piltz_weights(k - 1, m_max)
    out = []
    for x in xs:
        mm = _iroot(x, ell)
        m = np.arange(1, mm + 1, dtype=np.int64)
        floors = x // m**ell
        out.append(int(np.dot(w[1 : mm + 1], floors)))
    return out


def exact_divisor_sum(j: DivisorSignature | Sequence[int], x: int) -> int:
    return exact_divisor_sums(j, [x])[0]


# -- fitting --------------------------------------------------------------

@dataclass
class MainTermModel:
    """H(x) = C x + x^(1/ell) sum_d poly[d] (log x)^d."""

    C: float
    ell: int
    poly: list[float]
    provenance: str = "fitted"

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        lx = np.log(x)
        p = np.zeros_like(x)
        for c in reversed(self.poly):
            p = p * lx + c
        return self.C * x + x ** (1.0 / self.ell) * p if self.poly else self.C * x

    def as_dict(self) -> dict:
        return {"C": repr(self.C), "ell": self.ell, "poly": [repr(c) for c in self.poly],
                "degree": self.degree, "provenance": self.provenance}


@dataclass
class ExponentEstimate:
    slope: float
    stderr: float
    lower: float
    upper: float
    points: int

    def as_dict(self) -> dict:
        return {k: (repr(v) if isinstance(v, float) else v) for k, v in self.__dict__.items()}


@dataclass
class FitReport:
    train: list[int]
    held_out: list[int]
    residuals: list[float]
    poly_stderr: list[float]
    condition: float
    exponent: ExponentEstimate | None
    diagnostics: list[str] = field(default_factory=list)
    stability: list[float] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "train": self.train,
            "held_out": self.held_out,
            "residuals": [repr(r) for r in self.residuals],
            "poly_stderr": [repr(s) for s in self.poly_stderr],
            "condition": repr(self.condition),
            "exponent": self.exponent.as_dict() if self.exponent else None,
            "stability_rel_change": [repr(s) for s in self.stability],
            "diagnostics": self.diagnostics,
        }


def split_alternate(n: int) -> tuple[list[int], list[int]]:
    """2:1 train/held-out split by alternation: every third point is held out."""
    idx = list(range(n))
    return [i for i in idx if i % 3 != 2], [i for i in idx if i % 3 == 2]


def estimate_exponent(xs: Sequence[float], residuals: Sequence[float],
                      floor: float = RESIDUAL_FLOOR, level: float = 0.95) -> ExponentEstimate | None:
    """OLS slope of log|R| against log x over points with |R| >= floor."""
    pts = [(math.log(x), math.log(abs(r))) for x, r in zip(xs, residuals) if abs(r) >= floor]
    if len(pts) < 3:
        return None
    lx, lr = zip(*pts)
    reg = stats.linregress(lx, lr)
    q = stats.t.ppf(0.5 + level / 2, len(pts) - 2)
    return ExponentEstimate(float(reg.slope), float(reg.stderr),
                            float(reg.slope - q * reg.stderr), float(reg.slope + q * reg.stderr), len(pts))


def _lstsq(lx: np.ndarray, y: np.ndarray, degree: int):
    V = np.vander(lx, degree + 1, increasing=True)
    cond = float(np.linalg.cond(V))
    coef, _, rank, _ = np.linalg.lstsq(V, y, rcond=None)
    if rank < degree + 1 or cond > MAX_CONDITION:
        raise IllConditionedFit(f"design matrix rank {rank}, condition number {cond:.3g}")
    dof = len(y) - degree - 1
    resid = y - V @ coef
    sigma2 = float(resid @ resid) / dof if dof > 0 else float("nan")
    cov = sigma2 * np.linalg.inv(V.T @ V)
    return coef, np.sqrt(np.abs(np.diag(cov))), cond


def fit_main_term(series: CheckpointSeries, C: float, ell: int, degree: int,
                  split: tuple[list[int], list[int]] | None = None
                  ) -> tuple[MainTermModel, FitReport]:
    """Least-squares fit of (S(x) - C x)/x^(1/ell) by a degree-`degree` polynomial in log x.

    C is supplied, never fitted.  Residuals are S(x) - H(x) at every
    checkpoint; the exponent is estimated on the held-out points only.
    """
    xs = np.array(series.xs, dtype=float)
    sums = series.sums
    train, held = split or split_alternate(len(xs))
    if degree < 0:
        model = MainTermModel(C, ell, [], "fitted")
        res = [float(s - C * x) for s, x in zip(sums, series.xs)]
        est = estimate_exponent([xs[i] for i in held], [res[i] for i in held])
        return model, FitReport(train, held, res, [], 1.0, est)
    if len(train) < degree + 3:
        raise IllConditionedFit(f"need >= {degree + 3} training checkpoints, have {len(train)}")
    # S is exact; subtract in float only after the big-integer part is formed
    y = np.array([(s - C * x) / x ** (1.0 / ell) for s, x in zip(sums, series.xs)])
    lx = np.log(xs)
    coef, se, cond = _lstsq(lx[train], y[train], degree)
    model = MainTermModel(C, ell, [float(c) for c in coef], "fitted")
    H = model(xs)
    res = [float(s - h) for s, h in zip(sums, H)]
    est = estimate_exponent(xs[held], [res[i] for i in held])

    diags = []
    stability = []
    if len(train) >= degree + 4:
        coef2, _, _ = _lstsq(lx[train[1:]], y[train[1:]], degree)
        for d, (a, b) in enumerate(zip(coef, coef2)):
            rel = abs(b - a) / abs(a) if a else float("inf")
            stability.append(float(rel))
            if rel > 0.05:
                diags.append(f"coefficient q_{d} moved {rel:.1%} when the training window shifted")
    if est is None:
        diags.append("fewer than 3 held-out residuals above the floor; no exponent estimate")
    report = FitReport(list(map(int, train)), list(map(int, held)), res,
                       [float(s) for s in se], cond, est, diags, stability)
    return model, report


# -- reports ---------------------------------------------------------------

@dataclass
class ThreeTermReport:
    xs: list[int]
    sums: list[int]
    residuals: list[float]
    ratios: list[float]
    exponent: float
    max_ratio: float
    last_decade_max: float
    earlier_max: float
    constants: tuple[EulerProductResult, ...]

    @property
    def no_upward_trend(self) -> bool:
        return self.last_decade_max <= self.earlier_max

    def rows(self):
        return zip(self.xs, self.sums, self.residuals, self.ratios)


def three_term_abelian_report(series: CheckpointSeries, exponent: float = 0.30,
                              constants: tuple[EulerProductResult, ...] | None = None
                              ) -> ThreeTermReport:
    """R(x) = S_a(x) - A_1 x - A_2 x^(1/2) - A_3 x^(1/3) and |R(x)|/x^exponent.

    "No upward trend" means the largest ratio over the last decade of
    checkpoints does not exceed the largest ratio before it.
    """
    A = constants or a_constants()
    a1, a2, a3 = (c.value for c in A)
    xs = series.xs
    res = [float(s - (a1 * x + a2 * x**0.5 + a3 * x ** (1 / 3))) for s, x in zip(series.sums, xs)]
    ratios = [abs(r) / x**exponent for r, x in zip(res, xs)]
    cut = xs[-1] / 10
    last = [q for q, x in zip(ratios, xs) if x > cut]
    early = [q for q, x in zip(ratios, xs) if x <= cut]
    return ThreeTermReport(list(xs), list(series.sums), res, ratios, exponent, max(ratios),
                           max(last) if last else 0.0, max(early) if early else float("inf"),
                           tuple(A))


@dataclass
class DeltaReport:
    signature: DivisorSignature
    xs: list[int]
    sums: list[int]
    model: MainTermModel
    deltas: list[float]
    fit: FitReport | None
    reference: list[ExponentEntry]
    leading_check: float

    def rows(self):
        return zip(self.xs, self.sums, self.model(np.array(self.xs, dtype=float)), self.deltas)


def divisor_leading_constant(k: int, ell: int) -> float:
    """prod of the remaining zeta factors: zeta(ell)^(k-1)."""
    return zeta_real(ell) ** (k - 1) if k > 1 else 1.0


def delta_measure(j: DivisorSignature | Sequence[int], checkpoints: Sequence[int] | None = None,
                  model: MainTermModel | None = None) -> DeltaReport:
    """Delta(j; x) = sum_{n <= x} d(j; n) - H(j; x) at the checkpoints."""
    if not isinstance(j, DivisorSignature):
        j = DivisorSignature(tuple(j))
    shape = j.shape()
    if shape is None:
        raise ValueError(f"signature {j} is not of the form (1, l, ..., l)")
    k, ell = shape
    xs = list(checkpoints or geometric_checkpoints())
    sums = exact_divisor_sums(j, xs)
    series = CheckpointSeries(xs, sums, f"d{j}")
    C = divisor_leading_constant(k, ell)
    fit = None
    if model is None:
        if k == 1:
            model = MainTermModel(1.0, 1, [], "analytic")
        else:
            model, fit = fit_main_term(series, C, ell, k - 2)
    H = model(np.array(xs, dtype=float))
    deltas = [float(s - h) for s, h in zip(sums, H)]
    ref = reference_exponents(k=k, ell=ell) if k >= 2 and ell >= 2 else []
    if j == DivisorSignature.moment_shape(2):
        ref = reference_exponents(r=2) + ref
    leading_check = sums[-1] / xs[-1] - C
    return DeltaReport(j, xs, sums, model, deltas, fit, ref, leading_check)
