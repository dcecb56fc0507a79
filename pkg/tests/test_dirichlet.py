from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from abelmoments.dirichlet import (
    DivisorSignature, convolution_identity_check, corrupt, delta_table, dirichlet_convolve,
    divisor_signature_values, expand_v, mu_ell_local, mu_local, v_from_formula, v_from_series,
)
from abelmoments.errors import InapplicableTheorem, TruncationTooShort
from abelmoments.profiles import TheoremParams, detect_params, registry
from abelmoments.sieve import ValueTable

PROFILES = [(name, r) for name in ("abelian", "exp_divisor", "exp_totient") for r in (1, 2, 3, 4)]


def brute_d(j, n):
    """d(j; n) by enumerating d_i with d_i^{j_i} | n."""
    count = 0
    ranges = [[d for d in range(1, n + 1) if n % d**e == 0] for e in j]
    for ds in product(*ranges):
        m = 1
        for d, e in zip(ds, j):
            m *= d**e
        count += m == n
    return count


def test_signature_validation():
    with pytest.raises(ValueError):
        DivisorSignature((2, 1))
    with pytest.raises(ValueError):
        DivisorSignature(())
    assert DivisorSignature.moment_shape(2).exponents == (1, 2, 2, 2)
    assert DivisorSignature.theorem_shape(3, 5).exponents == (1, 5, 5)
    assert DivisorSignature.parse("(1,2,2)").shape() == (3, 2)
    assert DivisorSignature((1, 2, 3)).shape() is None


def test_local_factors():
    assert mu_local().coeffs == (1, -1)
    assert mu_ell_local(2).coeffs == (1, 0, -1)
    assert mu_ell_local(3).coeffs == (1, 0, 0, -1)
    with pytest.raises(ValueError):
        mu_ell_local(1)


def test_v_examples():
    a2 = registry("abelian", 2)
    v = v_from_formula(a2, TheoremParams(2, 4))
    assert v[3] == 5 and v[2] == 0
    v1 = v_from_formula(registry("abelian"), TheoremParams(2, 2))
    assert v1[3] == 1 and v1[1] == v1[2] == 0
    s = v_from_series(a2, TheoremParams(2, 4))
    assert s[2] == 0 and s[3] == 5


@pytest.mark.parametrize("name, r", PROFILES)
def test_both_routes_agree(name, r):
    prof = registry(name, r)
    prm = detect_params(prof)
    f, s = v_from_formula(prof, prm, 64), v_from_series(prof, prm, 64)
    assert f.values == s.values
    assert f[0] == 1
    assert all(f[nu] == 0 for nu in range(1, prm.ell + 1))


def test_wrong_params_rejected():
    with pytest.raises(InapplicableTheorem):
        v_from_formula(registry("abelian", 2), TheoremParams(2, 3))
    with pytest.raises(InapplicableTheorem):
        v_from_series(registry("one"), TheoremParams(2, 2))


def test_expand_v():
    vc = v_from_formula(registry("abelian", 2), TheoremParams(2, 4))
    t = expand_v(vc, 1000)
    assert t[1] == 1 and t[8] == 5
    squarefree = [n for n in range(2, 1001) if all(n % (p * p) for p in range(2, 32))]
    assert all(t[n] == 0 for n in squarefree)
    assert all(t[p * p] == 0 for p in (2, 3, 5, 7, 11, 13))
    with pytest.raises(TruncationTooShort):
        expand_v(v_from_formula(registry("abelian"), TheoremParams(2, 2), 4), 10**3)


def test_divisor_signature_examples():
    assert divisor_signature_values((1, 2), 8)[8] == 2
    assert divisor_signature_values((1, 2, 2, 2), 4)[4] == 4
    assert divisor_signature_values((3, 5, 7), 1)[1] == 1


@pytest.mark.parametrize("j", [(1,), (1, 2), (1, 2, 2, 2), (1, 3), (2, 3), (1, 1, 2)])
def test_divisor_signature_vs_brute(j):
    table = divisor_signature_values(j, 200)
    assert [int(table[n]) for n in range(1, 201)] == [brute_d(j, n) for n in range(1, 201)]


@pytest.mark.parametrize("t", [2, 3, 4])
def test_piltz_by_repeated_convolution(t):
    x = 3000
    ones = ValueTable(np.r_[0, np.ones(x, dtype=np.int64)])
    acc = ones
    for _ in range(t - 1):
        acc = dirichlet_convolve(acc, ones)
    assert np.array_equal(acc.values, divisor_signature_values((1,) * t, x).values)


def test_convolution_examples():
    x = 50
    rng = np.random.default_rng(1)
    b = ValueTable(np.r_[0, rng.integers(-5, 5, x)])
    assert np.array_equal(dirichlet_convolve(delta_table(x), b).values, b.values)
    ones = ValueTable(np.r_[0, np.ones(12, dtype=np.int64)])
    assert dirichlet_convolve(ones, ones)[12] == 6
    with pytest.raises(ValueError):
        dirichlet_convolve(ones, b)


tables = st.integers(1, 1000).flatmap(
    lambda n: st.tuples(*[st.lists(st.integers(-50, 50), min_size=n, max_size=n)] * 3))


@settings(max_examples=25, deadline=None)
@given(tables)
def test_convolution_commutative_associative(abc):
    a, b, c = (ValueTable(np.array([0] + v, dtype=np.int64)) for v in abc)
    ab = dirichlet_convolve(a, b)
    assert np.array_equal(ab.values, dirichlet_convolve(b, a).values)
    left = dirichlet_convolve(ab, c)
    right = dirichlet_convolve(a, dirichlet_convolve(b, c))
    assert np.array_equal(left.values, right.values)


@pytest.mark.parametrize("name, r", [("abelian", 1), ("abelian", 2), ("exp_totient", 1), ("exp_divisor", 2)])
def test_convolution_identity(name, r):
    prof = registry(name, r)
    rep = convolution_identity_check(prof, detect_params(prof), 10**4)
    assert rep.ok, rep.line()


def test_convolution_identity_n1():
    prof = registry("abelian", 2)
    assert convolution_identity_check(prof, detect_params(prof), 1).ok


def test_fault_injection_detected():
    prof = registry("abelian", 2)
    prm = detect_params(prof)
    bad = corrupt(v_from_formula(prof, prm), 4)
    rep = convolution_identity_check(prof, prm, 10**4, bad)
    assert not rep.ok
    assert rep.counterexample == 16
    assert "FAIL" in rep.line()


def test_v_growth_constant():
    """|v(p^nu)| <= C 2^(nu/(ell+1)) on nu <= 40; report the fitted C."""
    for r in (1, 2, 3):
        prof = registry("abelian", r)
        prm = detect_params(prof)
        v = v_from_formula(prof, prm, 40)
        ratios = [abs(v[nu]) / 2 ** (nu / (prm.ell + 1)) for nu in range(1, 41)]
        c = max(ratios)
        print(f"abelian^{r}: C = {c:.4g}")
        assert all(abs(v[nu]) <= c * (1 + 1e-12) * 2 ** (nu / (prm.ell + 1)) for nu in range(1, 41))
        assert np.isfinite(c)
