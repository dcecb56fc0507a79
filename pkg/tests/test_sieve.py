import numpy as np
import pytest

from abelmoments.errors import CapacityError
from abelmoments.profiles import eval_multiplicative, registry
from abelmoments.sieve import (
    geometric_checkpoints, primes_upto, sieve_values, spf_sieve, summatory, value_bound,
)


def test_spf_small():
    spf = spf_sieve(12)
    assert spf[4] == 2 and spf[9] == 3 and spf[7] == 7 and spf[12] == 2


def test_spf_segmented_identical():
    assert np.array_equal(spf_sieve(100_000), spf_sieve(100_000, segment=777))


def test_spf_reconstructs_every_n_to_1e6():
    x = 10**6
    spf = spf_sieve(x)
    is_prime = np.zeros(x + 1, dtype=bool)
    is_prime[primes_upto(x)] = True
    cur = np.arange(2, x + 1, dtype=np.int64)
    while True:
        live = cur > 1
        if not live.any():
            break
        p = spf[cur[live]]
        assert np.all(cur[live] % p == 0)
        assert np.all(is_prime[p])
        cur[live] //= p
    # smallest: no prime below spf divides n
    n = np.arange(2, x + 1)
    assert np.all((n % 2 != 0) | (spf[2:] == 2))


def test_spf_errors():
    with pytest.raises(ValueError):
        spf_sieve(1)


def test_sieve_values_small():
    assert sieve_values(registry("abelian"), 10).tolist() == [1, 1, 1, 2, 1, 1, 1, 3, 2, 1]
    assert sieve_values(registry("abelian", 2), 10).tolist() == [1, 1, 1, 4, 1, 1, 1, 9, 4, 1]
    assert sieve_values(registry("exp_totient"), 1).tolist() == [1]


@pytest.mark.parametrize("name, r", [("abelian", 1), ("abelian", 3), ("exp_divisor", 2), ("exp_totient", 2)])
def test_sieve_agrees_with_direct_to_1e5(name, r):
    prof = registry(name, r)
    table = sieve_values(prof, 10**5)
    assert all(int(table[n]) == eval_multiplicative(prof, n) for n in range(1, 10**5 + 1))


def test_sieve_g1_not_one():
    # f(p) = 3 exercises the large-prime fix-up
    prof = registry("custom", values=[1, 3, 5] + [7] * 30)
    table = sieve_values(prof, 5000, segment=97)
    assert all(int(table[n]) == eval_multiplicative(prof, n) for n in range(1, 5001))


def test_object_fallback_for_huge_values():
    prof = registry("abelian", 10)
    assert value_bound(list(prof.values)[:14], 10**4) > 2**62
    table = sieve_values(prof, 10**4)
    assert table.values.dtype == object
    assert int(table[2**13]) == 101**10          # P(13) = 101, beyond int64
    assert int(table[2**13 - 1]) == eval_multiplicative(prof, 2**13 - 1)


def test_segmentation_invariance():
    prof = registry("abelian", 2)
    a = sieve_values(prof, 50_000)
    b = sieve_values(prof, 50_000, segment=1013)
    assert np.array_equal(a.values, b.values)


def test_summatory_examples():
    assert summatory(registry("abelian"), [10]).sums == [14]
    assert summatory(registry("abelian", 2), [10]).sums == [24]
    assert summatory(registry("exp_divisor", 3), [1]).sums == [1]


def test_summatory_matches_table_sum():
    prof = registry("abelian", 3)
    cps = [1, 17, 1000, 4096, 65_536, 200_000]
    table = sieve_values(prof, cps[-1])
    expected = [sum(int(v) for v in table.values[1 : x + 1]) for x in cps]
    assert summatory(prof, cps, segment=5000).sums == expected
    assert summatory(prof, cps, segment=5000, threads=3).sums == expected


def test_summatory_bad_checkpoints():
    with pytest.raises(ValueError):
        summatory(registry("abelian"), [])
    with pytest.raises(ValueError):
        summatory(registry("abelian"), [10, 5])


def test_capacity():
    with pytest.raises(CapacityError):
        sieve_values(registry("abelian"), 10**12)


def test_geometric_checkpoints():
    cps = geometric_checkpoints()
    assert len(cps) == 40 and cps[0] == 10**4 and cps[-1] == 10**8
    assert cps == sorted(cps)
